//! The simplicial flat norm: `min mass(Q) + mass(S)` over in-complex
//! decompositions `P = Q + boundary(S)`, as an exact LP.

use minimass::chains::{Coeff, CoefficientGroup};
use minimass::norms::Norm;
use minimass::plateau::simplicial_flat_norm;
use minimass::synth;

fn main() {
    let (complex, _) = synth::cone_square_complex();
    let norm = Norm::euclidean(3);
    let k = complex.cells[2].len();

    // the boundary of a tetrahedron: filling it is cheaper than keeping it
    let mut p = vec![Coeff::Real(0.0); k];
    for &(c, s) in &complex.boundary_rows(3)[0] {
        p[c] = Coeff::Real(s as f64);
    }
    let f = simplicial_flat_norm(&complex, &norm, 2, &p).unwrap();
    let chain = complex.chain_from_coefficients(2, CoefficientGroup::Reals, &p);
    let mass = chain.hausdorff_mass(&norm).unwrap();
    let fill = complex.cell_simplex(3, 0).volume();
    println!("P = boundary of one tetrahedron:");
    println!("  mass(P)      = {mass:.9}");
    println!("  fill volume  = {fill:.9}");
    println!("  flat norm(P) = {f:.9}  (min of the two routes)");

    // single flat triangle: nothing to fill, the flat norm is its mass
    let mut p2 = vec![Coeff::Real(0.0); k];
    let flat_cell = complex.cells[2]
        .iter()
        .position(|c| c.iter().all(|&v| complex.vertices[v].0[2] == 0.0))
        .unwrap();
    p2[flat_cell] = Coeff::Real(1.0);
    let f2 = simplicial_flat_norm(&complex, &norm, 2, &p2).unwrap();
    let chain2 = complex.chain_from_coefficients(2, CoefficientGroup::Reals, &p2);
    println!("\nP = one flat triangle:");
    println!(
        "  flat norm(P) = {f2:.9} = mass(P) = {:.9}",
        chain2.hausdorff_mass(&norm).unwrap()
    );

    // scaling behavior under the max norm
    let f_inf = simplicial_flat_norm(&complex, &Norm::linf(3), 2, &p).unwrap();
    println!("\nsame tetrahedron boundary under the max norm: flat norm {f_inf:.9}");
}
