//! The dimension-2 discrete density contractor: fan weights and supporting
//! functionals from the cross-section polygon, normalized rank-2 maps, and
//! the calibration inequality with equality at the target plane.

use minimass::contractors::{bi_middle_quantity, burago_ivanov, verify_contractor};
use minimass::geometry::{orthonormalize, sample_subspaces, Vector};
use minimass::norms::{psi, Norm};
use minimass::synth;

fn main() {
    let w = orthonormalize(&[
        Vector(vec![1.0, -1.0, 0.0]),
        Vector(vec![1.0, 1.0, -2.0]),
    ])
    .unwrap();
    let norm = Norm::linf(3);

    let bi = burago_ivanov(&norm, &w, 2.0).unwrap();
    println!("discrete contractor for the max norm on the hexagonal plane:");
    println!(
        "  p = {} unit vectors per half, {} atoms, wedge ratio tau = {:.3}, gamma = {:.3}",
        bi.lambdas.len(),
        bi.contractor.atoms.len(),
        bi.tau,
        bi.gamma
    );
    println!(
        "  fan weights: {:?}",
        bi.lambdas.iter().map(|l| (l * 1e4).round() / 1e4).collect::<Vec<_>>()
    );

    let cert = verify_contractor(&bi.contractor, &norm, 1000, 5).unwrap();
    println!(
        "  certificate over 10^3 sampled planes: max violation {:.2e}, equality gap at W {:.2e}",
        cert.max_violation, cert.equality_gap_at_w
    );

    // the middle (calibration) inequality, with equality at W
    let at_w = bi_middle_quantity(&bi, &w.basis()[0], &w.basis()[1]);
    println!(
        "  calibration at W: {:.12} = psi(W) = {:.12}",
        at_w,
        psi(&norm, &w).unwrap()
    );
    let mut worst = f64::NEG_INFINITY;
    for v in sample_subspaces(3, 2, 1000, 9) {
        let q = bi_middle_quantity(&bi, &v.basis()[0], &v.basis()[1]);
        worst = worst.max(q - psi(&norm, &v).unwrap());
    }
    println!("  worst calibration excess over 10^3 frames: {worst:.2e} (never positive)");

    // also works in R^4
    let norm4 = synth::random_crystalline_norm(4, 7, 1);
    let w4 = synth::random_subspace(4, 2, 2);
    let bi4 = burago_ivanov(&norm4, &w4, 2.0).unwrap();
    let cert4 = verify_contractor(&bi4.contractor, &norm4, 1000, 7).unwrap();
    println!(
        "\nrandom crystalline norm in R^4: {} atoms, max violation {:.2e}",
        bi4.contractor.atoms.len(),
        cert4.max_violation
    );
}
