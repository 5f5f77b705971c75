//! Writes the golden scenario files under `crates/minimass/scenarios/`, one
//! per CLI command. Run from the repository root:
//!
//! ```bash
//! cargo run -p minimass --example scenario_files
//! ```
//!
//! Each file can then be fed to the binary:
//!
//! ```bash
//! cargo run -p minimass -- --scenario crates/minimass/scenarios/psi.json --out /tmp/out
//! ```

use minimass::chains::{ChainSpec, Coeff, CoefficientGroup, OrientedSimplex, PolyhedralChain};
use minimass::contractors::{busemann_projector, ContractorSpec};
use minimass::geometry::{orthonormalize, Vector};
use minimass::norms::Norm;
use minimass::plateau::{ComplexSpec, PlGrid};
use minimass::synth;
use serde_json::json;
use std::path::Path;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    std::fs::create_dir_all(&dir)?;
    let write = |name: &str, value: serde_json::Value| -> std::io::Result<()> {
        let path = dir.join(name);
        std::fs::write(&path, serde_json::to_string_pretty(&value).unwrap())?;
        println!("wrote {}", path.display());
        Ok(())
    };

    let linf3 = json!({"kind": "lp", "dim": 3, "p": "inf"});
    let hexplane = json!({"spanning": [[1.0, -1.0, 0.0], [1.0, 1.0, -2.0]]});

    write(
        "psi.json",
        json!({
            "command": "psi",
            "seed": 7,
            "norm": linf3,
            "inputs": {"subspace": hexplane}
        }),
    )?;

    write(
        "section.json",
        json!({
            "command": "section",
            "seed": 7,
            "norm": {"kind": "lp", "dim": 3, "p": 1.0},
            "inputs": {"subspace": {"spanning": [[2.0, 0.0, 0.0], [0.0, 1.0, 1.0]]}}
        }),
    )?;

    write(
        "busemann_b.json",
        json!({
            "command": "busemann-b",
            "seed": 7,
            "norm": linf3,
            "inputs": {"u": [1.0, 1.0, 1.0]}
        }),
    )?;

    write(
        "contractor_build.json",
        json!({
            "command": "contractor-build",
            "seed": 11,
            "norm": linf3,
            "inputs": {"kind": "burago-ivanov", "subspace": hexplane, "tauMax": 2.0, "samples": 500}
        }),
    )?;

    // a certified projector, serialized back into a verification scenario
    let w = orthonormalize(&[
        Vector(vec![1.0, -1.0, 0.0]),
        Vector(vec![1.0, 1.0, -2.0]),
    ])
    .unwrap();
    let mu = busemann_projector(&Norm::linf(3), &w).unwrap();
    write(
        "contractor_verify.json",
        json!({
            "command": "contractor-verify",
            "seed": 13,
            "norm": linf3,
            "inputs": {
                "samples": 500,
                "contractor": ContractorSpec::from_contractor(&mu)
            }
        }),
    )?;

    write(
        "min_lip_projector.json",
        json!({
            "command": "min-lip-projector",
            "seed": 17,
            "norm": linf3,
            "inputs": {"subspace": hexplane}
        }),
    )?;

    let triangle = PolyhedralChain::simplex(
        CoefficientGroup::Integers,
        Coeff::Int(2),
        OrientedSimplex::new(vec![
            Vector(vec![0.0, 0.0, 0.0]),
            Vector(vec![1.0, 0.0, 0.0]),
            Vector(vec![0.0, 1.0, 0.0]),
        ]),
    );
    write(
        "mass.json",
        json!({
            "command": "mass",
            "seed": 19,
            "norm": linf3,
            "inputs": {"chain": ChainSpec::from_chain(&triangle)}
        }),
    )?;

    write(
        "slice_integral.json",
        json!({
            "command": "slice-integral",
            "seed": 23,
            "norm": {"kind": "euclidean", "dim": 3},
            "inputs": {
                "chain": ChainSpec::from_chain(&triangle),
                "pi": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]
            }
        }),
    )?;

    write(
        "zeta.json",
        json!({
            "command": "zeta",
            "seed": 29,
            "norm": linf3,
            "inputs": {
                "pieces": [[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]],
                "wSamples": 8,
                "refine": false
            }
        }),
    )?;

    write(
        "gross.json",
        json!({
            "command": "gross",
            "seed": 31,
            "norm": {"kind": "euclidean", "dim": 3},
            "inputs": {
                "pieces": [[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]],
                "delta": 0.25
            }
        }),
    )?;

    let (complex, boundary) = synth::cone_square_complex();
    let boundary_json: Vec<i64> = boundary
        .iter()
        .map(|c| match c {
            Coeff::Int(k) => *k,
            Coeff::Real(x) => *x as i64,
        })
        .collect();
    write(
        "plateau_solve.json",
        json!({
            "command": "plateau-solve",
            "seed": 37,
            "norm": linf3,
            "inputs": {
                "complex": ComplexSpec::from_complex(&complex),
                "group": {"tag": "Z"},
                "dim": 2,
                "boundary": boundary_json
            }
        }),
    )?;

    // flat norm of the boundary of the first 3-cell
    let mut p = vec![0.0; complex.cells[2].len()];
    for &(c, s) in &complex.boundary_rows(3)[0] {
        p[c] = s as f64;
    }
    write(
        "flat_norm.json",
        json!({
            "command": "flat-norm",
            "seed": 41,
            "norm": {"kind": "euclidean", "dim": 3},
            "inputs": {
                "complex": ComplexSpec::from_complex(&complex),
                "dim": 2,
                "p": p
            }
        }),
    )?;

    // subdivide-and-replace with a synthetic bump density on the plane of P
    let sigma = OrientedSimplex::new(vec![
        Vector(vec![0.0, 0.0, 0.0]),
        Vector(vec![2.0, 0.0, 0.0]),
        Vector(vec![0.0, 2.0, 0.0]),
    ]);
    let p_chain = PolyhedralChain::simplex(CoefficientGroup::Integers, Coeff::Int(1), sigma);
    let q_chain = p_chain.boundary().cone(&Vector(vec![0.6, 0.6, 0.8]));
    write(
        "lsc_harness.json",
        json!({
            "command": "lsc-harness",
            "seed": 43,
            "norm": {"kind": "euclidean", "dim": 3},
            "inputs": {
                "p": ChainSpec::from_chain(&p_chain),
                "q": ChainSpec::from_chain(&q_chain),
                "jList": [2, 4, 8, 16, 32, 64],
                "density": {
                    "kind": "bump",
                    "plane": {"spanning": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]},
                    "bump": 2.0
                }
            }
        }),
    )?;

    let grid = PlGrid::zero(8);
    write(
        "linf_graph.json",
        json!({
            "command": "linf-graph",
            "seed": 47,
            "inputs": {"grid": grid}
        }),
    )?;

    let tent = synth::tent_chain(1.8);
    let halfspaces: Vec<serde_json::Value> = synth::box_halfspaces(1.0)
        .into_iter()
        .map(|(a, b)| json!({"a": a.0, "b": b}))
        .collect();
    write(
        "support_reduce.json",
        json!({
            "command": "support-reduce",
            "seed": 53,
            "norm": linf3,
            "inputs": {
                "chain": ChainSpec::from_chain(&tent),
                "halfspaces": halfspaces
            }
        }),
    )?;

    Ok(())
}
