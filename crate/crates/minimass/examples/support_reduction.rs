//! Support reduction: composed halfspace retractions (identity inside,
//! Busemann projector outside) flatten a chain into a convex region without
//! increasing mass or touching its boundary.

use minimass::chains::one_chains_equal;
use minimass::norms::Norm;
use minimass::plateau::support_reduction;
use minimass::synth;

fn main() {
    let cube = synth::box_halfspaces(1.0);
    let norm = Norm::linf(3);

    let tent = synth::tent_chain(1.8);
    let mass_in = tent.hausdorff_mass(&norm).unwrap();
    println!("tent over the square boundary, apex at z = 1.8 (outside the unit box)");
    println!("  mass before: {mass_in:.9}");

    let out = support_reduction(&tent, &cube, &norm).unwrap();
    let mass_out = out.hausdorff_mass(&norm).unwrap();
    println!("  mass after : {mass_out:.9}");
    println!(
        "  boundary preserved: {}",
        one_chains_equal(&out.boundary(), &tent.boundary())
    );
    let inside = out.support_vertices().iter().all(|v| {
        cube.iter().all(|(a, b)| a.dot(v) <= b + 1e-9)
    });
    println!("  support inside the box: {inside}");

    // reduction is idempotent on its output
    let again = support_reduction(&out, &cube, &norm).unwrap();
    println!(
        "  second pass changes mass by {:.1e}",
        (again.hausdorff_mass(&norm).unwrap() - mass_out).abs()
    );

    println!("\nrandom tents, three norms:");
    for i in 0..6u64 {
        let names = ["euclidean", "max norm", "crystalline"];
        let norm = match i % 3 {
            0 => Norm::euclidean(3),
            1 => Norm::linf(3),
            _ => synth::random_crystalline_norm(3, 6, 999),
        };
        let t = synth::random_tent_instance(100 + i);
        let before = t.hausdorff_mass(&norm).unwrap();
        let reduced = support_reduction(&t, &cube, &norm).unwrap();
        let after = reduced.hausdorff_mass(&norm).unwrap();
        println!(
            "  {:<11} mass {:.6} -> {:.6} ({} terms -> {})",
            names[(i % 3) as usize],
            before,
            after,
            t.terms.len(),
            reduced.terms.len()
        );
    }
}
