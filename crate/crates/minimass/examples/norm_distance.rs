//! The multiplicative distance `delta` between norms (exact by vertex
//! enumeration for crystalline pairs) and deterministic crystalline
//! approximation with certified containment.

use minimass::norms::{crystalline_approx, norm_distance, Norm, NormKind};

fn main() {
    println!("pairwise delta on R^2 (log delta is a metric):");
    let norms = [
        ("l1".to_string(), Norm::l1(2)),
        ("l2".to_string(), Norm::euclidean(2)),
        ("linf".to_string(), Norm::linf(2)),
    ];
    for (a, na) in &norms {
        for (b, nb) in &norms {
            let d = norm_distance(na, nb, 512, 1);
            print!(
                "  delta({a},{b}) = {:.6}{} ",
                d.value,
                if d.exact { " " } else { "~" }
            );
        }
        println!();
    }
    println!("  (sqrt 2 = {:.6}; ~ marks sampled lower bounds)", 2.0_f64.sqrt());

    println!("\ncrystalline approximation of the Euclidean disk:");
    for k in [1usize, 2, 4, 8, 16] {
        let approx = crystalline_approx(&Norm::euclidean(2), k).unwrap();
        let facets = match approx.kind() {
            NormKind::Crystalline(c) => c.facets.len(),
            _ => unreachable!(),
        };
        let d = norm_distance(&Norm::euclidean(2), &approx, 4096, 3);
        let bound = 1.0 / (std::f64::consts::PI / facets as f64).cos();
        println!(
            "  k = {k:>2}: {facets:>3} facets, delta = {:.8} <= 1/cos(pi/{facets}) = {bound:.8}",
            d.value
        );
    }
    println!("\n(the approximating ball always sits inside the original)");
}
