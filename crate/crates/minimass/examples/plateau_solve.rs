//! Discrete Plateau problems: mass minimization with prescribed boundary via
//! the exact rational simplex. The square boundary in a cone triangulation
//! has the flat filling as its minimizer: Euclidean mass 4, max-norm mass
//! pi, with a zero duality gap in exact arithmetic and matching supports
//! over Z and Z_2.

use minimass::chains::CoefficientGroup;
use minimass::norms::Norm;
use minimass::plateau::{build_program, solve};
use minimass::synth;

fn main() {
    let (complex, boundary) = synth::cone_square_complex();
    println!(
        "complex: {} vertices, {} edges, {} triangles, {} tetrahedra",
        complex.vertices.len(),
        complex.cells[1].len(),
        complex.cells[2].len(),
        complex.cells[3].len()
    );
    println!("boundary: the unit square cycle at z = 0\n");

    for (name, norm) in [("euclidean", Norm::euclidean(3)), ("max norm", Norm::linf(3))] {
        for group in [
            CoefficientGroup::Reals,
            CoefficientGroup::Integers,
            CoefficientGroup::Cyclic(2),
        ] {
            let prog = build_program(
                complex.clone(),
                norm.clone(),
                group,
                2,
                boundary.clone(),
            )
            .unwrap();
            let sol = solve(&prog).unwrap();
            let support: Vec<usize> = sol
                .coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| !group.is_zero(**c))
                .map(|(i, _)| i)
                .collect();
            println!(
                "{name:<9} {group:?}: mass {:.9}, dual bound {:.9}, gap {:.1e}, status {:?}, support {:?}",
                sol.mass, sol.dual_bound, sol.duality_gap, sol.status, support
            );
        }
        println!();
    }
    println!("(gap 0.0e0 means exact rational optimality; pi = {:.9})", std::f64::consts::PI);
}
