//! Cross-sections of unit balls: exact polygons for crystalline norms,
//! radial samples otherwise, and the Busemann identity
//! `psi(R^n) vol(B) = alpha(n)` on both computation paths.

use minimass::geometry::{orthonormalize, Subspace, Vector};
use minimass::norms::{
    alpha, ball_volume, ball_volume_quadrature, psi, section_ball, section_volume, Norm,
    SectionBall,
};
use minimass::synth;

fn main() {
    let w = orthonormalize(&[
        Vector(vec![1.0, -1.0, 0.0]),
        Vector(vec![1.0, 1.0, -2.0]),
    ])
    .unwrap();

    match section_ball(&Norm::linf(3), &w).unwrap() {
        SectionBall::Polygon(p) => {
            println!("cube cap (x1+x2+x3 = 0): a hexagon, area {:.9}", p.area());
            for v in &p.vertices {
                println!("  vertex ({:+.6}, {:+.6})", v[0], v[1]);
            }
        }
        SectionBall::Radial(_) => unreachable!(),
    }
    let sv = section_volume(&Norm::lp(3, 3.0).unwrap(), &w).unwrap();
    println!(
        "\nl3 ball section: quadrature volume {:.9} (error estimate {:.1e})",
        sv.value, sv.error
    );

    println!("\nBusemann identity psi(R^n) vol(B) = alpha(n):");
    for (name, norm) in [
        ("l1^3".to_string(), Norm::l1(3)),
        ("linf^3".to_string(), Norm::linf(3)),
        ("l2^3".to_string(), Norm::euclidean(3)),
        ("random crystalline".to_string(), synth::random_crystalline_norm(3, 6, 7)),
    ] {
        let full = Subspace::full(3);
        let p = psi(&norm, &full).unwrap();
        let exact = ball_volume(&norm).unwrap();
        let quad = ball_volume_quadrature(&norm, 1e-4).unwrap();
        println!(
            "  {name:<20} exact residual {:+.2e}, quadrature residual {:+.2e}",
            p * exact.value - alpha(3),
            p * quad.value - alpha(3),
        );
    }
}
