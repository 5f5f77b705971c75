//! Scenario front end: JSON scenario files in, deterministic JSON/CSV
//! reports out.
//!
//! A scenario names a command, a seed (mandatory for anything sampled),
//! optional tolerance overrides, a norm, and command-specific inputs. Every
//! report embeds the scenario hash, seed, tolerances and library version;
//! re-running a scenario reproduces the report byte for byte. Reports are
//! written atomically (temp file + rename).
//!
//! Exit codes: 0 success, 1 input or computation error, 2 verification
//! failure (a certificate violated its tolerance).

use crate::chains::{ChainSpec, Coeff, PolyhedralChain};
use crate::contractors::{
    burago_ivanov, busemann_projector, hahn_projector, min_lipschitz_projector, tail_check,
    verify_contractor, ContractorSpec,
};
use crate::geometry::{orthonormalize, Matrix, Subspace, Vector};
use crate::gross::{self, ContractorField, RectifiableTestSet};
use crate::norms::{self, Norm, NormSpec};
use crate::plateau::{self, ComplexSpec, PlGrid, SolutionSpec};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;
use std::path::Path;

#[derive(Clone, Debug)]
pub struct ScenarioError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ScenarioError {}

fn err(field: &str, message: impl fmt::Display) -> ScenarioError {
    ScenarioError {
        field: field.to_string(),
        message: message.to_string(),
    }
}

/// Central tolerance defaults: exact paths, floating paths, quadrature
/// budgets. Overridable per scenario.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "default_exact")]
    pub exact: f64,
    #[serde(default = "default_float")]
    pub float: f64,
    #[serde(default = "default_quadrature")]
    pub quadrature: f64,
}

fn default_exact() -> f64 {
    1e-12
}
fn default_float() -> f64 {
    1e-7
}
fn default_quadrature() -> f64 {
    1e-5
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact: default_exact(),
            float: default_float(),
            quadrature: default_quadrature(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct Scenario {
    pub command: String,
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub norm: Option<NormSpec>,
    #[serde(default)]
    pub inputs: Value,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOverrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub debug_overlap: bool,
}

/// FNV-1a of the scenario bytes; embedded in reports for reproducibility.
fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}

/// Run a scenario file, writing `report.json` (and command-specific CSV
/// tables) into `out_dir`. Returns the process exit code.
pub fn run(scenario_path: &Path, out_dir: &Path, overrides: &RunOverrides) -> i32 {
    let bytes = match std::fs::read(scenario_path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read scenario: {e}");
            return 1;
        }
    };
    let mut scenario: Scenario = match serde_json::from_slice(&bytes) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: scenario does not match the schema: {e}");
            return 1;
        }
    };
    if let Some(seed) = overrides.seed {
        scenario.seed = seed;
    }
    let hash = fnv1a64(&bytes);
    match execute(&scenario, overrides) {
        Ok(outcome) => {
            let report = json!({
                "command": scenario.command,
                "scenario_hash": format!("fnv1a64:{hash:016x}"),
                "seed": scenario.seed,
                "threads": overrides.threads.unwrap_or(1),
                "tolerances": scenario.tolerances.unwrap_or_default(),
                "library_version": crate::VERSION,
                "result": outcome.result,
            });
            if let Err(e) = std::fs::create_dir_all(out_dir) {
                eprintln!("error: cannot create output directory: {e}");
                return 1;
            }
            let pretty = serde_json::to_string_pretty(&report).expect("serializable");
            if let Err(e) = atomic_write(&out_dir.join("report.json"), pretty.as_bytes()) {
                eprintln!("error: cannot write report: {e}");
                return 1;
            }
            for (name, table) in &outcome.tables {
                if let Err(e) = atomic_write(&out_dir.join(name), table.as_bytes()) {
                    eprintln!("error: cannot write {name}: {e}");
                    return 1;
                }
            }
            if outcome.verification_failed {
                eprintln!("verification failed; see report.json");
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

struct Outcome {
    result: Value,
    tables: Vec<(String, String)>,
    verification_failed: bool,
}

fn ok(result: Value) -> Result<Outcome, ScenarioError> {
    Ok(Outcome {
        result,
        tables: Vec::new(),
        verification_failed: false,
    })
}

// -- input helpers ----------------------------------------------------------

fn need_norm(s: &Scenario) -> Result<Norm, ScenarioError> {
    let spec = s.norm.as_ref().ok_or_else(|| err("norm", "missing"))?;
    spec.to_norm().map_err(|e| err("norm", e))
}

fn subspace_from(v: &Value, field: &str, ambient: usize) -> Result<Subspace, ScenarioError> {
    let spanning = v
        .get("spanning")
        .and_then(Value::as_array)
        .ok_or_else(|| err(field, "expected {\"spanning\": [[...], ...]}"))?;
    let vectors: Vec<Vector> = spanning
        .iter()
        .map(|row| {
            let coords: Vec<f64> = row
                .as_array()
                .map(|a| a.iter().filter_map(Value::as_f64).collect())
                .unwrap_or_default();
            Vector(coords)
        })
        .collect();
    for w in &vectors {
        if w.dim() != ambient {
            return Err(err(field, format!("vector dimension != {ambient}")));
        }
    }
    orthonormalize(&vectors).map_err(|e| err(field, e))
}

fn vector_from(v: &Value, field: &str) -> Result<Vector, ScenarioError> {
    let coords: Vec<f64> = v
        .as_array()
        .map(|a| a.iter().filter_map(Value::as_f64).collect())
        .ok_or_else(|| err(field, "expected an array of numbers"))?;
    Ok(Vector(coords))
}

fn chain_from(v: &Value, field: &str, ambient: usize) -> Result<PolyhedralChain, ScenarioError> {
    let spec: ChainSpec =
        serde_json::from_value(v.clone()).map_err(|e| err(field, e))?;
    spec.to_chain(ambient).map_err(|e| err(field, e))
}

fn usize_from(v: &Value, field: &str, default: Option<usize>) -> Result<usize, ScenarioError> {
    match v {
        Value::Null => default.ok_or_else(|| err(field, "missing")),
        _ => v
            .as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| err(field, "expected an integer")),
    }
}

// -- command dispatch --------------------------------------------------------

fn execute(s: &Scenario, overrides: &RunOverrides) -> Result<Outcome, ScenarioError> {
    let tol = s.tolerances.unwrap_or_default();
    match s.command.as_str() {
        "psi" => {
            let norm = need_norm(s)?;
            let w = subspace_from(&s.inputs["subspace"], "inputs.subspace", norm.dim())?;
            let value = norms::psi(&norm, &w).map_err(|e| err("psi", e))?;
            let section = norms::section_volume(&norm, &w).map_err(|e| err("psi", e))?;
            ok(json!({
                "psi": value,
                "section_volume": section.value,
                "section_exact": section.exact,
                "section_error": section.error,
            }))
        }
        "section" => {
            let norm = need_norm(s)?;
            let w = subspace_from(&s.inputs["subspace"], "inputs.subspace", norm.dim())?;
            let volume = norms::section_volume(&norm, &w).map_err(|e| err("section", e))?;
            let shape = match norms::section_ball(&norm, &w).map_err(|e| err("section", e))? {
                norms::SectionBall::Polygon(p) => json!({
                    "kind": "polygon",
                    "vertices": p.vertices,
                    "area": p.area(),
                }),
                norms::SectionBall::Radial(r) => json!({
                    "kind": "radial",
                    "samples": r.radii.len(),
                    "min_radius": r.radii.iter().cloned().fold(f64::INFINITY, f64::min),
                    "max_radius": r.radii.iter().cloned().fold(0.0_f64, f64::max),
                }),
            };
            ok(json!({
                "volume": volume.value,
                "exact": volume.exact,
                "error": volume.error,
                "section": shape,
            }))
        }
        "busemann-b" => {
            let norm = need_norm(s)?;
            let u = vector_from(&s.inputs["u"], "inputs.u")?;
            let b = norms::busemann_b(&norm, &u).map_err(|e| err("busemann-b", e))?;
            ok(json!({ "b": b }))
        }
        "contractor-build" => {
            let norm = need_norm(s)?;
            let kind = s.inputs["kind"].as_str().unwrap_or("auto");
            let samples = usize_from(&s.inputs["samples"], "inputs.samples", Some(1000))?;
            let mut tables: Vec<(String, String)> = Vec::new();
            let (mu, extra) = match kind {
                "hahn" => {
                    let w = vector_from(&s.inputs["w"], "inputs.w")?;
                    let mu = hahn_projector(&norm, &w)
                        .map_err(|e| err("contractor-build", e))?;
                    (mu, json!({}))
                }
                "busemann" => {
                    let w =
                        subspace_from(&s.inputs["subspace"], "inputs.subspace", norm.dim())?;
                    let mu = busemann_projector(&norm, &w)
                        .map_err(|e| err("contractor-build", e))?;
                    (mu, json!({}))
                }
                "burago-ivanov" => {
                    let w =
                        subspace_from(&s.inputs["subspace"], "inputs.subspace", norm.dim())?;
                    let tau_max = s.inputs["tauMax"].as_f64().unwrap_or(2.0);
                    let bi = burago_ivanov(&norm, &w, tau_max)
                        .map_err(|e| err("contractor-build", e))?;
                    let tails =
                        tail_check(&bi, &norm, 100).map_err(|e| err("contractor-build", e))?;
                    let mut csv =
                        String::from("n,measured_mass,mass_bound,measured_integral,integral_bound\n");
                    for t in &tails {
                        csv.push_str(&format!(
                            "{},{},{},{},{}\n",
                            t.n,
                            t.measured_mass,
                            t.mass_bound,
                            t.measured_integral,
                            t.integral_bound
                        ));
                    }
                    tables.push(("tail_bounds.csv".to_string(), csv));
                    let extra = json!({
                        "gamma": bi.gamma,
                        "tau": bi.tau,
                        "rho": bi.rho,
                        "approximation_gap": bi.approximation_gap,
                        "tail_bounds_ok": tails.iter().all(|t| {
                            t.measured_mass <= t.mass_bound
                                && t.measured_integral <= t.integral_bound
                        }),
                    });
                    (bi.contractor, extra)
                }
                other => return Err(err("inputs.kind", format!("unknown kind {other}"))),
            };
            let cert = verify_contractor(&mu, &norm, samples, s.seed)
                .map_err(|e| err("contractor-build", e))?;
            let passed = cert.passes(tol.float);
            Ok(Outcome {
                result: json!({
                    "contractor": ContractorSpec::from_contractor(&mu),
                    "certificate": cert,
                    "construction": extra,
                    "passed": passed,
                }),
                tables,
                verification_failed: !passed,
            })
        }
        "contractor-verify" => {
            let norm = need_norm(s)?;
            let spec: ContractorSpec = serde_json::from_value(s.inputs["contractor"].clone())
                .map_err(|e| err("inputs.contractor", e))?;
            let mu = spec
                .to_contractor()
                .map_err(|e| err("inputs.contractor", e))?;
            let samples = usize_from(&s.inputs["samples"], "inputs.samples", Some(1000))?;
            let cert = verify_contractor(&mu, &norm, samples, s.seed)
                .map_err(|e| err("contractor-verify", e))?;
            let passed = cert.passes(tol.float);
            Ok(Outcome {
                result: json!({ "certificate": cert, "passed": passed }),
                tables: Vec::new(),
                verification_failed: !passed,
            })
        }
        "min-lip-projector" => {
            let norm = need_norm(s)?;
            let w = subspace_from(&s.inputs["subspace"], "inputs.subspace", norm.dim())?;
            let (value, pi) =
                min_lipschitz_projector(&norm, &w).map_err(|e| err("min-lip-projector", e))?;
            let rows: Vec<Vec<f64>> = (0..pi.rows)
                .map(|i| (0..pi.cols).map(|j| pi.get(i, j)).collect())
                .collect();
            ok(json!({ "value": value, "projector": rows }))
        }
        "mass" => {
            let norm = need_norm(s)?;
            let chain = chain_from(&s.inputs["chain"], "inputs.chain", norm.dim())?;
            if overrides.debug_overlap {
                if let Some((i, j)) = chain.find_overlap() {
                    return Err(err("inputs.chain", format!("terms {i} and {j} overlap")));
                }
            }
            let mass = chain.hausdorff_mass(&norm).map_err(|e| err("mass", e))?;
            let exact = chain
                .hausdorff_mass_ratio_exact(&norm)
                .map(|r| crate::lp::LpScalar::to_f64(&r));
            ok(json!({
                "mass": mass,
                "exact_ratio_times_alpha": exact,
                "boundary_terms": chain.boundary().terms.len(),
            }))
        }
        "slice-integral" => {
            let norm = need_norm(s)?;
            let chain = chain_from(&s.inputs["chain"], "inputs.chain", norm.dim())?;
            let rows = s.inputs["pi"]
                .as_array()
                .ok_or_else(|| err("inputs.pi", "expected a matrix"))?;
            let n = norm.dim();
            let mut pi = Matrix::zeros(n, n);
            for (i, row) in rows.iter().enumerate() {
                for (j, v) in row.as_array().unwrap_or(&Vec::new()).iter().enumerate() {
                    pi.set(i, j, v.as_f64().unwrap_or(0.0));
                }
            }
            let value = chain
                .slice_integral(&pi, &norm)
                .map_err(|e| err("slice-integral", e))?;
            ok(json!({ "value": value }))
        }
        "zeta" => {
            let norm = need_norm(s)?;
            let field = ContractorField::new(norm.clone());
            let w_samples = usize_from(&s.inputs["wSamples"], "inputs.wSamples", Some(8))?;
            let refine = s.inputs["refine"].as_bool().unwrap_or(false);
            if s.inputs.get("chain").is_some() {
                let chain = chain_from(&s.inputs["chain"], "inputs.chain", norm.dim())?;
                let report = gross::zeta_chain(&chain, &field, &norm, w_samples, s.seed)
                    .map_err(|e| err("zeta", e))?;
                let mass = chain.hausdorff_mass(&norm).map_err(|e| err("zeta", e))?;
                ok(json!({ "zeta": report, "mass": mass, "gap": mass - report.value }))
            } else {
                let set = pieces_from(&s.inputs["pieces"], norm.dim())?;
                let report = gross::zeta_set(&set, &field, &norm, w_samples, s.seed, refine)
                    .map_err(|e| err("zeta", e))?;
                let measure = set.measure(&norm).map_err(|e| err("zeta", e))?;
                ok(json!({ "zeta": report, "measure": measure, "gap": measure - report.value }))
            }
        }
        "gross" => {
            let norm = need_norm(s)?;
            let field = ContractorField::new(norm.clone());
            let set = pieces_from(&s.inputs["pieces"], norm.dim())?;
            let delta = s.inputs["delta"]
                .as_f64()
                .ok_or_else(|| err("inputs.delta", "missing"))?;
            let estimate = gross::gross_estimate(&set, &field, &norm, delta)
                .map_err(|e| err("gross", e))?;
            let zeta = gross::zeta_set(&set, &field, &norm, 8, s.seed, false)
                .map_err(|e| err("gross", e))?;
            let measure = set.measure(&norm).map_err(|e| err("gross", e))?;
            ok(json!({
                "estimate": estimate,
                "zeta_lower": zeta.value,
                "hausdorff_measure": measure,
            }))
        }
        "plateau-solve" => {
            let norm = need_norm(s)?;
            let spec: ComplexSpec = serde_json::from_value(s.inputs["complex"].clone())
                .map_err(|e| err("inputs.complex", e))?;
            let complex = spec.to_complex().map_err(|e| err("inputs.complex", e))?;
            let group: crate::chains::GroupSpec =
                serde_json::from_value(s.inputs["group"].clone())
                    .map_err(|e| err("inputs.group", e))?;
            let group = group.to_group();
            let dim = usize_from(&s.inputs["dim"], "inputs.dim", None)?;
            let boundary: Vec<Coeff> = s.inputs["boundary"]
                .as_array()
                .ok_or_else(|| err("inputs.boundary", "missing"))?
                .iter()
                .map(|v| match group {
                    crate::chains::CoefficientGroup::Reals => {
                        Coeff::Real(v.as_f64().unwrap_or(0.0))
                    }
                    _ => Coeff::Int(v.as_i64().unwrap_or(0)),
                })
                .collect();
            let prog = plateau::build_program(complex, norm, group, dim, boundary)
                .map_err(|e| err("plateau-solve", e))?;
            let sol = plateau::solve(&prog).map_err(|e| err("plateau-solve", e))?;
            ok(json!(SolutionSpec::from_solution(&sol)))
        }
        "flat-norm" => {
            let norm = need_norm(s)?;
            let spec: ComplexSpec = serde_json::from_value(s.inputs["complex"].clone())
                .map_err(|e| err("inputs.complex", e))?;
            let complex = spec.to_complex().map_err(|e| err("inputs.complex", e))?;
            let dim = usize_from(&s.inputs["dim"], "inputs.dim", None)?;
            let p: Vec<Coeff> = s.inputs["p"]
                .as_array()
                .ok_or_else(|| err("inputs.p", "missing"))?
                .iter()
                .map(|v| Coeff::Real(v.as_f64().unwrap_or(0.0)))
                .collect();
            let value = plateau::simplicial_flat_norm(&complex, &norm, dim, &p)
                .map_err(|e| err("flat-norm", e))?;
            ok(json!({ "flat_norm": value }))
        }
        "lsc-harness" => {
            let norm = need_norm(s)?;
            let p = chain_from(&s.inputs["p"], "inputs.p", norm.dim())?;
            let q = chain_from(&s.inputs["q"], "inputs.q", norm.dim())?;
            let filling = match s.inputs.get("filling") {
                Some(Value::Null) | None => None,
                Some(v) => Some(chain_from(v, "inputs.filling", norm.dim())?),
            };
            let j_list: Vec<usize> = s.inputs["jList"]
                .as_array()
                .ok_or_else(|| err("inputs.jList", "missing"))?
                .iter()
                .filter_map(Value::as_u64)
                .map(|x| x as usize)
                .collect();
            let report = match s.inputs.get("density") {
                Some(d) if d["kind"] == "bump" => {
                    let plane =
                        subspace_from(&d["plane"], "inputs.density.plane", norm.dim())?;
                    let bump = d["bump"].as_f64().unwrap_or(1.0);
                    let mut density = crate::synth::bump_density(&plane, bump);
                    plateau::lsc_harness(&p, &q, filling.as_ref(), &j_list, &mut density)
                        .map_err(|e| err("lsc-harness", e))?
                }
                _ => {
                    let mut density = |w: &Subspace| {
                        norms::psi(&norm, w)
                            .map_err(|e| crate::chains::ChainError::Unsupported(e.to_string()))
                    };
                    plateau::lsc_harness(&p, &q, filling.as_ref(), &j_list, &mut density)
                        .map_err(|e| err("lsc-harness", e))?
                }
            };
            let mut csv = String::from("j,mass_p_j,flat_bound\n");
            for r in &report.rows {
                csv.push_str(&format!("{},{},{}\n", r.j, r.mass_p_j, r.flat_bound));
            }
            Ok(Outcome {
                result: serde_json::to_value(&report).expect("serializable"),
                tables: vec![("lsc_harness.csv".into(), csv)],
                verification_failed: false,
            })
        }
        "linf-graph" => {
            let grid: PlGrid = serde_json::from_value(s.inputs["grid"].clone())
                .map_err(|e| err("inputs.grid", e))?;
            let report = plateau::linf_graph_mass(&grid).map_err(|e| err("linf-graph", e))?;
            ok(serde_json::to_value(&report).expect("serializable"))
        }
        "support-reduce" => {
            let norm = need_norm(s)?;
            let chain = chain_from(&s.inputs["chain"], "inputs.chain", norm.dim())?;
            let halfspaces: Vec<(Vector, f64)> = s.inputs["halfspaces"]
                .as_array()
                .ok_or_else(|| err("inputs.halfspaces", "missing"))?
                .iter()
                .map(|h| {
                    let a = vector_from(&h["a"], "inputs.halfspaces.a")?;
                    let b = h["b"]
                        .as_f64()
                        .ok_or_else(|| err("inputs.halfspaces.b", "missing"))?;
                    Ok((a, b))
                })
                .collect::<Result<_, ScenarioError>>()?;
            let mass_in = chain.hausdorff_mass(&norm).map_err(|e| err("mass", e))?;
            let out = plateau::support_reduction(&chain, &halfspaces, &norm)
                .map_err(|e| err("support-reduce", e))?;
            let mass_out = out.hausdorff_mass(&norm).map_err(|e| err("mass", e))?;
            ok(json!({
                "mass_in": mass_in,
                "mass_out": mass_out,
                "chain": ChainSpec::from_chain(&out),
            }))
        }
        other => Err(err("command", format!("unknown command {other}"))),
    }
}

fn pieces_from(v: &Value, ambient: usize) -> Result<RectifiableTestSet, ScenarioError> {
    let arr = v
        .as_array()
        .ok_or_else(|| err("inputs.pieces", "expected a list of simplices"))?;
    let mut pieces = Vec::new();
    for p in arr {
        let vertices: Vec<Vector> = p
            .as_array()
            .ok_or_else(|| err("inputs.pieces", "expected vertex lists"))?
            .iter()
            .map(|row| vector_from(row, "inputs.pieces"))
            .collect::<Result<_, _>>()?;
        for w in &vertices {
            if w.dim() != ambient {
                return Err(err("inputs.pieces", format!("vertex dimension != {ambient}")));
            }
        }
        pieces.push(crate::chains::OrientedSimplex::new(vertices));
    }
    Ok(RectifiableTestSet::new(pieces))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_scenario_roundtrip() {
        let dir = std::env::temp_dir().join("minimass_scenario_test");
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        let scenario = dir.join("psi.json");
        std::fs::write(
            &scenario,
            serde_json::to_string_pretty(&json!({
                "command": "psi",
                "seed": 7,
                "norm": {"kind": "lp", "dim": 3, "p": "inf"},
                "inputs": {"subspace": {"spanning": [[1.0, -1.0, 0.0], [1.0, 1.0, -2.0]]}}
            }))
            .unwrap(),
        )
        .unwrap();
        let out = dir.join("out");
        let code = run(&scenario, &out, &RunOverrides::default());
        assert_eq!(code, 0);
        let report: Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap())
                .unwrap();
        let psi = report["result"]["psi"].as_f64().unwrap();
        assert!((psi - std::f64::consts::PI / (3.0 * 3.0_f64.sqrt())).abs() < 1e-9);
        assert!((psi - 0.604600).abs() < 1e-6);

        // byte-identical rerun
        let first = std::fs::read(out.join("report.json")).unwrap();
        let code = run(&scenario, &out, &RunOverrides::default());
        assert_eq!(code, 0);
        let second = std::fs::read(out.join("report.json")).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn corrupted_contractor_exits_2() {
        let dir = std::env::temp_dir().join("minimass_scenario_test2");
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        // orthogonal projector onto the e1e2 plane, scaled by 1.1: violates
        let scenario = dir.join("verify.json");
        std::fs::write(
            &scenario,
            serde_json::to_string_pretty(&json!({
                "command": "contractor-verify",
                "seed": 3,
                "norm": {"kind": "euclidean", "dim": 3},
                "inputs": {
                    "samples": 100,
                    "contractor": {
                        "target": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
                        "atoms": [{"w": 1.0, "matrix": [[1.1, 0.0, 0.0], [0.0, 1.1, 0.0], [0.0, 0.0, 0.0]]}]
                    }
                }
            }))
            .unwrap(),
        )
        .unwrap();
        let out = dir.join("out");
        let code = run(&scenario, &out, &RunOverrides::default());
        assert_eq!(code, 2);
    }

    #[test]
    fn schema_violation_exits_1() {
        let dir = std::env::temp_dir().join("minimass_scenario_test3");
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        let scenario = dir.join("bad.json");
        std::fs::write(&scenario, "{\"command\": \"psi\"}").unwrap();
        let code = run(&scenario, &dir.join("out"), &RunOverrides::default());
        assert_eq!(code, 1);
    }
}
