//! The Busemann hyperplane function
//! `b(u) = |u| alpha(n-1) / H^{n-1}(B cap u_perp)`, with a numerical witness
//! that it is convex (hence a norm), the fact behind the existence of
//! area-contracting projectors in codimension one.

use minimass::geometry::{sample_unit_vectors, Vector};
use minimass::norms::{busemann_b, Norm};

fn main() {
    let linf = Norm::linf(3);
    let s = 1.0 / 3.0_f64.sqrt();
    println!("b for the max norm on R^3:");
    for (label, u) in [
        ("e3", Vector(vec![0.0, 0.0, 1.0])),
        ("diagonal", Vector(vec![s, s, s])),
        ("edge midpoint", Vector(vec![s, s, 0.0])),
    ] {
        println!("  b({label:>13}) = {:.9}", busemann_b(&linf, &u).unwrap());
    }
    println!(
        "  (pi/4 = {:.9}, pi/(3 sqrt 3) = {:.9})",
        std::f64::consts::PI / 4.0,
        std::f64::consts::PI / (3.0 * 3.0_f64.sqrt())
    );

    // subadditivity witness on 10^4 random pairs
    let dirs = sample_unit_vectors(3, 20_000, 0xb0b);
    let mut worst = f64::NEG_INFINITY;
    for pair in dirs.chunks(2) {
        let (u, v) = (&pair[0], &pair[1]);
        let excess = busemann_b(&linf, &u.add(v)).unwrap()
            - busemann_b(&linf, u).unwrap()
            - busemann_b(&linf, v).unwrap();
        worst = worst.max(excess);
    }
    println!("\nconvexity witness on 10^4 pairs: worst b(u+v) - b(u) - b(v) = {worst:.2e}");
    println!("(nonpositive, as Busemann's theorem demands)");
}
