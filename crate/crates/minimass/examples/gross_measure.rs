//! Gross-type quantities from a field of density contractors: the set
//! function `zeta` (a certified lower bound attaining equality at piece
//! directions), the Caratheodory dyadic estimate bracketing the measure,
//! and the lower-semicontinuity experiment for `zeta` on chains.

use minimass::chains::{Coeff, CoefficientGroup, OrientedSimplex, PolyhedralChain};
use minimass::geometry::Vector;
use minimass::gross::{
    gross_estimate, planar_ball_density_ratio, zeta_chain, zeta_lsc_experiment, zeta_set,
    ContractorField, RectifiableTestSet,
};
use minimass::norms::Norm;
use minimass::synth;

fn main() {
    let norm = Norm::linf(3);
    let field = ContractorField::new(norm.clone());
    let w = synth::random_subspace(3, 2, 11);
    let tri = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
        OrientedSimplex::new(vec![w.embed(&a), w.embed(&b), w.embed(&c)])
    };
    let set = RectifiableTestSet::new(vec![
        tri([0.0, 0.0], [0.6, 0.0], [0.0, 0.6]),
        tri([0.6, 0.0], [0.6, 0.6], [0.0, 0.6]),
    ]);
    let h = set.measure(&norm).unwrap();
    let z = zeta_set(&set, &field, &norm, 8, 1, true).unwrap();
    println!("planar square patch in a random plane (max norm):");
    println!("  H^2 = {h:.9}");
    println!(
        "  zeta = {:.9} (candidates: {}, refined: {})",
        z.value,
        z.candidates.len(),
        z.refined
    );

    println!("\n  dyadic Caratheodory estimates (zeta <= G <= estimate):");
    for k in 2..=6u32 {
        let delta = 2.0_f64.powi(-(k as i32));
        let est = gross_estimate(&set, &field, &norm, delta).unwrap();
        println!(
            "    delta = 2^-{k}: {:>9.6} over {:>5} cells (H^2 = {h:.6})",
            est.value, est.cells
        );
    }

    // density ratio on small balls (always close to 1 on planar chains)
    let p = PolyhedralChain::simplex(
        CoefficientGroup::Integers,
        Coeff::Int(1),
        tri([0.0, 0.0], [1.2, 0.0], [0.0, 1.2]),
    );
    let ratio =
        planar_ball_density_ratio(&p, &w.embed(&[0.3, 0.3]), 0.2, 16, &field, &norm).unwrap();
    println!("\nzeta / mass on a small planar ball: {ratio:.6}");

    // zeta along the subdivide-and-replace sequence: no drop for a norm
    let sigma = OrientedSimplex::new(vec![
        Vector(vec![0.0, 0.0, 0.0]),
        Vector(vec![2.0, 0.0, 0.0]),
        Vector(vec![0.0, 2.0, 0.0]),
    ]);
    let p = PolyhedralChain::simplex(CoefficientGroup::Integers, Coeff::Int(1), sigma);
    let q = p.boundary().cone(&Vector(vec![0.6, 0.6, 0.8]));
    let report = zeta_lsc_experiment(&p, &q, None, &[4, 8, 16], &field, &norm).unwrap();
    println!("\nzeta along the subdivision sequence (lsc witnessed: {}):", report.lsc_witnessed);
    println!("  zeta(P) = {:.6}", report.zeta_p);
    for row in &report.rows {
        println!("  j = {:>2}: zeta(P_j) = {:.6}", row.j, row.zeta_p_j);
    }

    let m = p.hausdorff_mass(&norm).unwrap();
    let zc = zeta_chain(&p, &field, &norm, 8, 2).unwrap();
    println!("\nzeta(P) = {:.9} vs mass(P) = {:.9} (equality: planar chain)", zc.value, m);
}
