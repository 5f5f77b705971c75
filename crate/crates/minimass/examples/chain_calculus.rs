//! Polyhedral chain calculus: boundaries, Hausdorff masses over different
//! coefficient groups, pushforwards, slices and cones.

use minimass::chains::{Coeff, CoefficientGroup, OrientedSimplex, PolyhedralChain};
use minimass::geometry::{Matrix, Vector};
use minimass::norms::Norm;

fn main() {
    let tri = OrientedSimplex::new(vec![
        Vector(vec![0.0, 0.0, 0.0]),
        Vector(vec![1.0, 0.0, 0.0]),
        Vector(vec![0.0, 1.0, 0.0]),
    ]);

    println!("one triangle, coefficient 3 in three groups:");
    for (name, group, g) in [
        ("Z", CoefficientGroup::Integers, Coeff::Int(3)),
        ("Z_5", CoefficientGroup::Cyclic(5), Coeff::Int(3)),
        ("R", CoefficientGroup::Reals, Coeff::Real(3.0)),
    ] {
        let chain = PolyhedralChain::simplex(group, g, tri.clone());
        println!(
            "  {name:>3}: euclidean mass {:.4}, max-norm mass {:.4}   (group norm of 3: {})",
            chain.hausdorff_mass(&Norm::euclidean(3)).unwrap(),
            chain.hausdorff_mass(&Norm::linf(3)).unwrap(),
            group.norm(g),
        );
    }

    let chain = PolyhedralChain::simplex(CoefficientGroup::Integers, Coeff::Int(1), tri);
    let boundary = chain.boundary();
    println!("\nboundary of the triangle: {} edges; boundary of boundary is zero: {}",
        boundary.terms.len(),
        boundary.boundary().is_zero());

    // pushforward under a shear commutes with the boundary
    let mut shear = Matrix::identity(3);
    shear.set(0, 1, 0.5);
    let lhs = chain.pushforward_linear(&shear).boundary();
    let rhs = chain.boundary().pushforward_linear(&shear);
    println!("pushforward commutes with boundary: {}", lhs.equals(&rhs));

    // slice over the barycenter
    let mut pi = Matrix::zeros(3, 3);
    pi.set(0, 0, 1.0);
    pi.set(1, 1, 1.0);
    let sm = chain.slice_mass(&pi, &Vector(vec![0.25, 0.25, 0.0]));
    println!("slice mass over an interior point: {}", sm.value);
    println!(
        "slice integral = mass for a planar chain: {:.12} vs {:.12}",
        chain.slice_integral(&pi, &Norm::euclidean(3)).unwrap(),
        chain.hausdorff_mass(&Norm::euclidean(3)).unwrap()
    );

    // cone over a polygonal circle approaches the disk area
    for k in [16usize, 64, 256, 1024] {
        let mut terms = Vec::new();
        for i in 0..k {
            let a = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
            let b = 2.0 * std::f64::consts::PI * (i + 1) as f64 / k as f64;
            terms.push((
                Coeff::Int(1),
                OrientedSimplex::new(vec![
                    Vector(vec![a.cos(), a.sin(), 0.0]),
                    Vector(vec![b.cos(), b.sin(), 0.0]),
                ]),
            ));
        }
        let circle = PolyhedralChain::from_terms(CoefficientGroup::Integers, 1, 3, terms);
        let disk = circle.cone(&Vector(vec![0.0, 0.0, 0.0]));
        println!(
            "cone over a {k:>4}-gon: euclidean mass {:.8} (alpha(2) = {:.8})",
            disk.hausdorff_mass(&Norm::euclidean(3)).unwrap(),
            std::f64::consts::PI
        );
    }
}
