//! Minimal Lipschitz constants of projectors: multi-start search over the
//! kernel complement. On the plane `x1 + x2 + x3 = 0` in the max norm every
//! projector has Lip >= 8/7.

use minimass::contractors::min_lipschitz_projector;
use minimass::geometry::{orthonormalize, Vector};
use minimass::norms::Norm;

fn main() {
    let hexplane = orthonormalize(&[
        Vector(vec![1.0, -1.0, 0.0]),
        Vector(vec![1.0, 1.0, -2.0]),
    ])
    .unwrap();
    let axis = orthonormalize(&[Vector(vec![1.0, 0.0, 0.0])]).unwrap();

    let (v, _) = min_lipschitz_projector(&Norm::euclidean(3), &hexplane).unwrap();
    println!("euclidean, any plane:            min Lip = {v:.6} (orthogonal projector)");

    let (v, _) = min_lipschitz_projector(&Norm::linf(3), &axis).unwrap();
    println!("max norm, coordinate axis:       min Lip = {v:.6} (coordinate projection)");

    let start = std::time::Instant::now();
    let (v, pi) = min_lipschitz_projector(&Norm::linf(3), &hexplane).unwrap();
    println!(
        "max norm, x1+x2+x3 = 0:          min Lip = {v:.6} >= 8/7 = {:.6}   ({:?})",
        8.0 / 7.0,
        start.elapsed()
    );
    println!("\nbest projector found:");
    for i in 0..3 {
        println!(
            "  [{:+.6} {:+.6} {:+.6}]",
            pi.get(i, 0),
            pi.get(i, 1),
            pi.get(i, 2)
        );
    }
}
