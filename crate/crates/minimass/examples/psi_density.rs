//! The Busemann-Hausdorff density `psi(W) = alpha(m) / H^m(W cap B)`:
//! exact polygon sections for crystalline norms, the hexagon value
//! `pi / (3 sqrt 3)` for the max norm on the plane `x1 + x2 + x3 = 0`, and
//! sampled densities across the Grassmannian.

use minimass::geometry::{orthonormalize, sample_subspaces, Vector};
use minimass::norms::{psi, Norm};

fn main() {
    let hexplane = orthonormalize(&[
        Vector(vec![1.0, -1.0, 0.0]),
        Vector(vec![1.0, 1.0, -2.0]),
    ])
    .unwrap();
    let coordinate = orthonormalize(&[
        Vector(vec![1.0, 0.0, 0.0]),
        Vector(vec![0.0, 1.0, 0.0]),
    ])
    .unwrap();

    println!("density of the max norm on R^3:");
    let linf = Norm::linf(3);
    let hex = psi(&linf, &hexplane).unwrap();
    println!(
        "  psi(x1+x2+x3=0) = {hex:.9}   (pi/(3 sqrt 3) = {:.9})",
        std::f64::consts::PI / (3.0 * 3.0_f64.sqrt())
    );
    println!(
        "  psi(coordinate plane) = {:.9}   (pi/4 = {:.9})",
        psi(&linf, &coordinate).unwrap(),
        std::f64::consts::PI / 4.0
    );

    println!("\ndensity range over 2000 sampled planes:");
    for (name, norm) in [
        ("l1".to_string(), Norm::l1(3)),
        ("l4".to_string(), Norm::lp(3, 4.0).unwrap()),
        ("linf".to_string(), linf),
    ] {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for w in sample_subspaces(3, 2, 2000, 42) {
            let p = psi(&norm, &w).unwrap();
            lo = lo.min(p);
            hi = hi.max(p);
        }
        println!("  {name:>4}: psi in [{lo:.6}, {hi:.6}]");
    }
    println!("\n(the Euclidean density is identically 1)");
}
