//! Density contractors: construction and certification.
//!
//! A density contractor on a subspace `W` is a finitely supported probability
//! measure on rank-limited linear maps into `W` whose averaged projected
//! Hausdorff measure never exceeds the source measure, with equality for
//! subsets of `W`. Three constructions are provided:
//!
//! - [`hahn_projector`]: dimension 1, a single norming-functional projector;
//! - [`busemann_projector`]: codimension 1, the area-contracting projector
//!   whose kernel direction supports the Busemann hyperplane function; the
//!   direction is found by a cutting-plane feasibility program over sampled
//!   sphere directions and re-certified;
//! - [`burago_ivanov`]: dimension 2 for crystalline norms, the discrete
//!   measure on normalized rank-2 maps built from the cross-section polygon.
//!
//! [`verify_contractor`] certifies any contractor empirically on sampled
//! subspaces; [`tail_check`] compares the measured tails of a Burago-Ivanov
//! measure against their analytic bounds.

use crate::chains::{ChainError, OrientedSimplex, PolyhedralChain};
use crate::geometry::{
    self, orthonormalize, sample_subspaces, sample_unit_vectors, union_area, wedge_norm, Matrix,
    Subspace, Vector,
};
use crate::lp::{self, LinearProgram, LpStatus, RelOp};
use crate::norms::{self, alpha, norm_distance, section_ball, Norm, SectionBall};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug)]
pub enum ContractorError {
    NotUnit(f64),
    BadWeights(f64),
    TargetMismatch,
    LpFailed(String),
    Unsupported(String),
    Norm(norms::NormError),
    Geometry(geometry::GeometryError),
}

impl fmt::Display for ContractorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContractorError::NotUnit(v) => write!(f, "expected a unit vector, got norm {v}"),
            ContractorError::BadWeights(s) => write!(f, "atom weights sum to {s}, not 1"),
            ContractorError::TargetMismatch => write!(f, "atom image leaves the target subspace"),
            ContractorError::LpFailed(s) => write!(f, "feasibility program failed: {s}"),
            ContractorError::Unsupported(s) => write!(f, "unsupported: {s}"),
            ContractorError::Norm(e) => write!(f, "{e}"),
            ContractorError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ContractorError {}

impl From<norms::NormError> for ContractorError {
    fn from(e: norms::NormError) -> Self {
        ContractorError::Norm(e)
    }
}

impl From<geometry::GeometryError> for ContractorError {
    fn from(e: geometry::GeometryError) -> Self {
        ContractorError::Geometry(e)
    }
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// A linear map of rank at most `dim target` whose image lies in `target`.
#[derive(Clone, Debug)]
pub struct RankLimitedMap {
    pub matrix: Matrix,
    pub target: Subspace,
}

impl RankLimitedMap {
    pub fn new(matrix: Matrix, target: Subspace) -> Result<Self, ContractorError> {
        let scale = matrix
            .data
            .iter()
            .fold(0.0_f64, |a, b| a.max(b.abs()))
            .max(1e-300);
        for j in 0..matrix.cols {
            let col = matrix.column(j);
            let out = col.sub(&target.project(&col));
            if out.norm2() > 1e-10 * scale {
                return Err(ContractorError::TargetMismatch);
            }
        }
        Ok(RankLimitedMap { matrix, target })
    }
}

/// Finitely supported probability measure on rank-limited maps into `target`.
#[derive(Clone, Debug)]
pub struct DensityContractor {
    pub target: Subspace,
    pub atoms: Vec<(f64, RankLimitedMap)>,
}

impl DensityContractor {
    pub fn new(
        target: Subspace,
        atoms: Vec<(f64, RankLimitedMap)>,
    ) -> Result<Self, ContractorError> {
        let total: f64 = atoms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(ContractorError::BadWeights(total));
        }
        for (w, _) in &atoms {
            if *w <= 0.0 {
                return Err(ContractorError::BadWeights(*w));
            }
        }
        Ok(DensityContractor { target, atoms })
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    /// `delta_pi` for a single projector.
    pub fn dirac(pi: Matrix, target: Subspace) -> Result<Self, ContractorError> {
        let map = RankLimitedMap::new(pi, target.clone())?;
        DensityContractor::new(target, vec![(1.0, map)])
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TailBoundEntry {
    pub n: u32,
    pub measured_mass: f64,
    pub mass_bound: f64,
    pub measured_integral: f64,
    pub integral_bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContractorCertificate {
    /// Largest positive excess of averaged projected measure over source
    /// measure across the sampled subspaces (negative = slack everywhere).
    pub max_violation: f64,
    /// `|lhs - rhs|` at `V = W`, where equality must hold.
    pub equality_gap_at_w: f64,
    pub samples_tested: usize,
    pub tail_bounds: Vec<TailBoundEntry>,
}

impl ContractorCertificate {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_violation <= tolerance
            && self.equality_gap_at_w <= tolerance
            && self
                .tail_bounds
                .iter()
                .all(|t| t.measured_mass <= t.mass_bound && t.measured_integral <= t.integral_bound)
    }
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Averaged projected Hausdorff measure of the unit `m`-cube of `V`:
/// `sum_atoms w psi(W) vol_m(pi v_1, ..., pi v_m)`.
fn averaged_projected_measure(mu: &DensityContractor, psi_w: f64, v: &Subspace) -> f64 {
    let m = v.dim();
    let mut lhs = 0.0;
    for (w, map) in &mu.atoms {
        let images: Vec<Vector> = v.basis().iter().map(|b| map.matrix.matvec(b)).collect();
        let vol = if m == 2 {
            wedge_norm(&images[0], &images[1])
        } else {
            parallelepiped_volume(&images)
        };
        lhs += w * vol;
    }
    psi_w * lhs
}

fn parallelepiped_volume(edges: &[Vector]) -> f64 {
    let mut basis: Vec<Vector> = Vec::with_capacity(edges.len());
    let mut prod = 1.0;
    for e in edges {
        let mut r = e.clone();
        for q in &basis {
            r = r.axpy(-q.dot(&r), q);
        }
        let nr = r.norm2();
        if nr == 0.0 {
            return 0.0;
        }
        prod *= nr;
        basis.push(r.scale(1.0 / nr));
    }
    prod
}

/// Sample subspaces `V` (plus `V = W`), compare the averaged projected
/// measure of the unit cube of `V` against its own measure, and report the
/// worst violation and the equality gap at `W`.
pub fn verify_contractor(
    mu: &DensityContractor,
    norm: &Norm,
    samples: usize,
    seed: u64,
) -> Result<ContractorCertificate, ContractorError> {
    let n = mu.target.ambient_dim();
    let m = mu.dim();
    let psi_w = norms::psi(norm, &mu.target)?;

    let lhs_w = averaged_projected_measure(mu, psi_w, &mu.target);
    let rhs_w = psi_w;
    let equality_gap_at_w = (lhs_w - rhs_w).abs();

    let mut max_violation = lhs_w - rhs_w;
    for v in sample_subspaces(n, m, samples, seed) {
        let lhs = averaged_projected_measure(mu, psi_w, &v);
        let rhs = norms::psi(norm, &v)?;
        let viol = lhs - rhs;
        if viol > max_violation {
            max_violation = viol;
        }
    }
    Ok(ContractorCertificate {
        max_violation,
        equality_gap_at_w,
        samples_tested: samples + 1,
        tail_bounds: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// Hahn projector (m = 1)
// ---------------------------------------------------------------------------

/// The rank-one projector `pi(x) = a(x) w` onto the line of a unit vector
/// `w`, where `a` is a norming functional (`a(w) = 1`, dual norm 1).
pub fn hahn_projector(norm: &Norm, w: &Vector) -> Result<DensityContractor, ContractorError> {
    let nw = norm.eval(w);
    if (nw - 1.0).abs() > 1e-9 {
        return Err(ContractorError::NotUnit(nw));
    }
    let n = norm.dim();
    let a = match norm.kind() {
        norms::NormKind::Euclidean => w.clone(),
        norms::NormKind::Lp(p) => {
            if *p == f64::INFINITY {
                // active coordinate, lowest index
                let i = (0..n)
                    .find(|&i| (w.0[i].abs() - 1.0).abs() <= 1e-9)
                    .expect("a max-norm unit vector has an active coordinate");
                Vector::unit(n, i).scale(w.0[i].signum())
            } else if *p == 1.0 {
                Vector(w.0.iter().map(|&x| x.signum()).collect())
            } else {
                Vector(
                    w.0.iter()
                        .map(|&x| x.signum() * x.abs().powf(p - 1.0))
                        .collect(),
                )
            }
        }
        norms::NormKind::Crystalline(c) => {
            // lexicographically smallest active facet
            let idx = c
                .facets
                .iter()
                .position(|f| (f.dot(w) - 1.0).abs() <= 1e-9)
                .ok_or_else(|| {
                    ContractorError::LpFailed("no active facet at the unit vector".into())
                })?;
            c.facets[idx].clone()
        }
    };
    let target = orthonormalize(std::slice::from_ref(w))?;
    DensityContractor::dirac(Matrix::outer(w, &a), target)
}

// ---------------------------------------------------------------------------
// Busemann projector (m = n - 1)
// ---------------------------------------------------------------------------

/// Area-contracting projector onto a hyperplane `W`. The kernel direction `v`
/// is chosen so that `u -> <v, u>` supports the Busemann function `b` at the
/// Euclidean unit normal of `W` (then `psi(W) J_{V->W} <= psi(V)` for every
/// hyperplane `V`). The direction is a feasible point of the cutting-plane
/// program `{ v : <v, u_s> <= b(u_s), <v, n_W> = b(n_W) }` over sampled
/// sphere directions, iterated with worst-violator exchange until the
/// measured violation is negligible.
pub fn busemann_projector(
    norm: &Norm,
    w: &Subspace,
) -> Result<DensityContractor, ContractorError> {
    let n = norm.dim();
    if w.dim() != n - 1 {
        return Err(ContractorError::Unsupported(
            "busemann projector needs a hyperplane".into(),
        ));
    }
    let normal = {
        let c = w.complement();
        c.into_iter()
            .next()
            .ok_or_else(|| ContractorError::Unsupported("no normal direction".into()))?
    };
    if matches!(norm.kind(), norms::NormKind::Euclidean)
        || matches!(norm.kind(), norms::NormKind::Lp(p) if *p == 2.0)
    {
        return DensityContractor::dirac(w.projector(), w.clone());
    }
    let b = |u: &Vector| norms::busemann_b(norm, u);
    let b_n = b(&normal)?;

    // initial sample directions, both signs
    let mut initial: Vec<Vector> = Vec::new();
    for u in sample_unit_vectors(n, 220, 0xb5e) {
        initial.push(u.clone());
        initial.push(u.scale(-1.0));
    }
    // violator cuts accumulate and always stay in the working set
    let mut cuts: Vec<Vector> = Vec::new();
    let mut kernel = normal.clone();
    for round in 0..24 {
        // after the first round the program is kept small: a well-spread
        // core for boundedness, the near-active initial rows, and all cuts;
        // large accumulated tableaus drift numerically
        let working: Vec<Vector> = if round == 0 {
            initial.clone()
        } else {
            let core = 128.min(initial.len());
            let mut slacked: Vec<(f64, usize)> = initial
                .iter()
                .enumerate()
                .skip(core)
                .map(|(i, u)| {
                    let slack = b(u).unwrap_or(f64::INFINITY) - kernel.dot(u).abs();
                    (slack, i)
                })
                .collect();
            slacked.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut take: Vec<Vector> = initial[..core].to_vec();
            take.extend(
                slacked
                    .into_iter()
                    .take(100)
                    .map(|(_, i)| initial[i].clone()),
            );
            take.extend(cuts.iter().cloned());
            take
        };
        match support_direction_lp(&working, &normal, b_n, &b) {
            Ok(sol) => kernel = sol,
            Err(e) => {
                if round == 0 {
                    return Err(e);
                }
                // marginal numerical failure in a refinement round: keep the
                // previous direction, certification decides its quality
                break;
            }
        }
        // worst violator of <v,u> <= b(u) on a deterministic fine net
        let mut worst: Vec<(f64, Vector)> = Vec::new();
        for u in violation_net(n) {
            let viol = kernel.dot(&u).abs() - b(&u)?;
            worst.push((viol, u));
        }
        worst.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut new_points: Vec<Vector> = Vec::new();
        for (viol, u) in worst.into_iter().take(6) {
            // polish by local maximization in a tangent chart
            let refined = polish_violation(&kernel, &u, &b)?;
            let rv = kernel.dot(&refined).abs() - b(&refined)?;
            let (v_best, u_best) = if rv > viol { (rv, refined) } else { (viol, u) };
            // only genuine violations become cuts; near-duplicates would
            // degenerate the programs of later rounds
            let fresh = v_best > 1e-10
                && cuts
                    .iter()
                    .chain(new_points.iter())
                    .all(|c| c.sub(&u_best).norm2() > 1e-7);
            if fresh {
                new_points.push(u_best);
            }
        }
        if new_points.is_empty() || round == 23 {
            break;
        }
        for u in new_points {
            cuts.push(u.scale(-1.0));
            cuts.push(u);
        }
    }

    let denom = normal.dot(&kernel);
    if denom.abs() < 1e-12 {
        return Err(ContractorError::LpFailed(
            "kernel direction degenerate against the normal".into(),
        ));
    }
    // pi(x) = x - (<normal, x> / <normal, v>) v
    let pi = Matrix::identity(n).add(&Matrix::outer(&kernel, &normal).scale(-1.0 / denom));
    DensityContractor::dirac(pi, w.clone())
}

/// Maximize the margin `t` subject to `<v, u_s> + t <= b(u_s)` for samples
/// away from the normal (near the normal the slack vanishes quadratically,
/// so those samples carry plain constraints) and `<v, normal> = b(normal)`.
/// The margin is a free variable, so the program is feasible for any sample
/// set; convexity of `b` guarantees the optimum is nonnegative.
fn support_direction_lp(
    dirs: &[Vector],
    normal: &Vector,
    b_n: f64,
    b: &dyn Fn(&Vector) -> Result<f64, norms::NormError>,
) -> Result<Vector, ContractorError> {
    let n = normal.dim();
    // variables: v+ (n), v- (n), t+ , t-
    let nv = 2 * n + 2;
    let mut rows: Vec<(Vec<(usize, f64)>, RelOp, f64)> = Vec::new();
    for u in dirs {
        let bu = b(u)?;
        let dist = u.sub(normal).norm2().min(u.add(normal).norm2());
        let mut coeffs: Vec<(usize, f64)> = Vec::with_capacity(nv);
        for i in 0..n {
            coeffs.push((i, u.0[i]));
            coeffs.push((n + i, -u.0[i]));
        }
        if dist > 0.05 {
            coeffs.push((2 * n, 1.0));
            coeffs.push((2 * n + 1, -1.0));
        }
        rows.push((coeffs, RelOp::Le, bu));
    }
    let mut eq: Vec<(usize, f64)> = Vec::new();
    for i in 0..n {
        eq.push((i, normal.0[i]));
        eq.push((n + i, -normal.0[i]));
    }
    rows.push((eq, RelOp::Eq, b_n));
    let mut objective = vec![0.0; nv];
    objective[2 * n] = -1.0; // maximize t
    objective[2 * n + 1] = 1.0;
    let lp = LinearProgram {
        num_vars: nv,
        objective,
        rows,
    };
    let sol = lp::solve(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(ContractorError::LpFailed(format!(
            "support-direction program: {:?} (residual {:.3e}, rows {})",
            sol.status,
            sol.objective,
            lp.rows.len(),
        )));
    }
    Ok(Vector(
        (0..n).map(|i| sol.x[i] - sol.x[n + i]).collect(),
    ))
}

/// Deterministic violation-search net on the sphere.
fn violation_net(n: usize) -> Vec<Vector> {
    match n {
        2 => (0..2048)
            .map(|i| {
                let th = std::f64::consts::PI * i as f64 / 2048.0;
                Vector(vec![th.cos(), th.sin()])
            })
            .collect(),
        3 => {
            // Fibonacci half-sphere
            let k = 6000;
            let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
            (0..k)
                .map(|i| {
                    let z = (i as f64 + 0.5) / k as f64; // upper half
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = 2.0 * std::f64::consts::PI * (i as f64 / golden).fract();
                    Vector(vec![r * phi.cos(), r * phi.sin(), z])
                })
                .collect()
        }
        _ => sample_unit_vectors(n, 8000, 0xfeed),
    }
}

fn polish_violation(
    kernel: &Vector,
    start: &Vector,
    b: &dyn Fn(&Vector) -> Result<f64, norms::NormError>,
) -> Result<Vector, ContractorError> {
    let n = start.dim();
    let span = orthonormalize(std::slice::from_ref(start))?;
    let tangent = span.complement();
    let chart = |t: &[f64]| -> Vector {
        let mut u = start.clone();
        for (i, dir) in tangent.iter().enumerate() {
            u = u.axpy(t[i], dir);
        }
        u.scale(1.0 / u.norm2())
    };
    let f = |t: &[f64]| -> f64 {
        let u = chart(t);
        match b(&u) {
            Ok(bu) => -(kernel.dot(&u).abs() - bu),
            Err(_) => f64::INFINITY,
        }
    };
    let best = nelder_mead(&f, &vec![0.0; n - 1], 0.02, 80);
    Ok(chart(&best))
}

// ---------------------------------------------------------------------------
// Burago-Ivanov discrete contractor (m = 2)
// ---------------------------------------------------------------------------

/// A Burago-Ivanov contractor with its construction data.
#[derive(Clone, Debug)]
pub struct BiContractor {
    pub contractor: DensityContractor,
    /// `delta(norm, euclidean)`.
    pub gamma: f64,
    /// max/min ratio of consecutive wedge products.
    pub tau: f64,
    pub rho: f64,
    /// Unit vectors `u_1 .. u_p` (half list; `u_{p+i} = -u_i`), in ambient
    /// coordinates.
    pub units: Vec<Vector>,
    /// Fan weights `lambda_1 .. lambda_p`.
    pub lambdas: Vec<f64>,
    /// Supporting functionals `alpha_1 .. alpha_p` (ambient functionals).
    pub alphas: Vec<Vector>,
    /// `delta` gap of the crystalline approximation when the input norm was
    /// not crystalline.
    pub approximation_gap: Option<f64>,
}

/// Build the dimension-2 contractor for a crystalline norm:
/// `mu = sum_{i,j} l_i l_j delta_{pi_ij}` with
/// `pi_ij = (rho / sqrt|u_i ^ u_j|) (a_i(x) u_i + a_j(x) u_j)` and zero maps
/// on the diagonal. Non-crystalline input is routed through
/// [`norms::crystalline_approx`] until `delta <= 1.01` and certified against
/// the original norm by the caller.
pub fn burago_ivanov(
    norm: &Norm,
    w: &Subspace,
    tau_max: f64,
) -> Result<BiContractor, ContractorError> {
    if w.dim() != 2 {
        return Err(ContractorError::Unsupported(
            "the discrete contractor is 2-dimensional".into(),
        ));
    }
    if tau_max < 1.0 {
        return Err(ContractorError::Unsupported("tau_max < 1".into()));
    }
    if matches!(norm.kind(), norms::NormKind::Euclidean)
        || matches!(norm.kind(), norms::NormKind::Lp(p) if *p == 2.0)
    {
        // orthogonal projector as a single atom
        let contractor = DensityContractor::dirac(w.projector(), w.clone())?;
        return Ok(BiContractor {
            contractor,
            gamma: 1.0,
            tau: 1.0,
            rho: (alpha(2) / (2.0 * std::f64::consts::PI)).sqrt(),
            units: vec![],
            lambdas: vec![],
            alphas: vec![],
            approximation_gap: None,
        });
    }
    let (crystalline, approximation_gap) = match norm.as_crystalline() {
        Some(c) => (c, None),
        None => {
            let mut k = 16;
            loop {
                let approx = norms::crystalline_approx(norm, k)?;
                let d = norm_distance(norm, &approx, 512, 0xa11);
                if d.value <= 1.01 || k >= 256 {
                    break (approx, Some(d.value));
                }
                k *= 2;
            }
        }
    };
    let facets_2d: Vec<[f64; 2]> = match crystalline.kind() {
        norms::NormKind::Crystalline(c) => c
            .facets
            .iter()
            .map(|a| {
                let r = w.coords(a);
                [r[0], r[1]]
            })
            .collect(),
        _ => unreachable!(),
    };
    let polygon = match section_ball(&crystalline, w)? {
        SectionBall::Polygon(p) => p,
        SectionBall::Radial(_) => unreachable!(),
    };
    let area = polygon.area();

    // half list of unit vectors (2D coords), refined
    let half = refine_unit_vectors(&polygon.vertices, tau_max)?;
    let p = half.len();
    let cross = |a: &[f64; 2], b: &[f64; 2]| a[0] * b[1] - a[1] * b[0];
    let arc = |i: usize| -> ([f64; 2], [f64; 2]) {
        let u = half[i];
        let v = if i + 1 < p {
            half[i + 1]
        } else {
            [-half[0][0], -half[0][1]]
        };
        (u, v)
    };
    let wedges: Vec<f64> = (0..p)
        .map(|i| {
            let (u, v) = arc(i);
            cross(&u, &v)
        })
        .collect();
    let tau = wedges.iter().fold(0.0_f64, |a, &b| a.max(b))
        / wedges.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    // lambda_i = wedge_i / area sums to 1 exactly in exact arithmetic;
    // renormalize away the float dust so the measure is a probability
    let raw_sum: f64 = wedges.iter().sum::<f64>() / area;
    let lambdas: Vec<f64> = wedges.iter().map(|&x| x / area / raw_sum).collect();

    // supporting functional per arc: active facet containing the arc chord,
    // lowest index on ties (arcs on a ridge)
    let mut alphas_2d: Vec<[f64; 2]> = Vec::with_capacity(p);
    for i in 0..p {
        let (u, v) = arc(i);
        let mut found = None;
        for (idx, c) in facets_2d.iter().enumerate() {
            let cu = c[0] * u[0] + c[1] * u[1];
            let cv = c[0] * v[0] + c[1] * v[1];
            if (cu - 1.0).abs() <= 1e-9 && (cv - 1.0).abs() <= 1e-9 {
                found = Some(idx);
                break;
            }
        }
        let idx = found.ok_or_else(|| {
            ContractorError::LpFailed("no supporting facet for a polygon arc".into())
        })?;
        alphas_2d.push(facets_2d[idx]);
    }

    let rho = (area / 2.0).sqrt(); // sqrt(alpha(2) / (2 psi(W)))
    let n = norm.dim();
    let units_amb: Vec<Vector> = half.iter().map(|u| w.embed(&[u[0], u[1]])).collect();
    let alphas_amb: Vec<Vector> = match crystalline.kind() {
        norms::NormKind::Crystalline(c) => {
            // recover the ambient facet for each 2D functional
            alphas_2d
                .iter()
                .map(|a2| {
                    c.facets
                        .iter()
                        .find(|f| {
                            let r = w.coords(f);
                            (r[0] - a2[0]).abs() <= 1e-12 && (r[1] - a2[1]).abs() <= 1e-12
                        })
                        .expect("restricted facet has an ambient source")
                        .clone()
                })
                .collect()
        }
        _ => unreachable!(),
    };

    let mut atoms: Vec<(f64, RankLimitedMap)> = Vec::with_capacity(p * p);
    for i in 0..p {
        for j in 0..p {
            let weight = lambdas[i] * lambdas[j];
            let matrix = if i == j {
                Matrix::zeros(n, n)
            } else {
                let wij = cross(&half[i], &half[j]).abs();
                let scale = rho / wij.sqrt();
                Matrix::outer(&units_amb[i], &alphas_amb[i])
                    .add(&Matrix::outer(&units_amb[j], &alphas_amb[j]))
                    .scale(scale)
            };
            atoms.push((weight, RankLimitedMap::new(matrix, w.clone())?));
        }
    }
    let contractor = DensityContractor::new(w.clone(), atoms)?;
    let gamma = norm_distance(norm, &Norm::euclidean(n), 2048, 0x9a).value;
    Ok(BiContractor {
        contractor,
        gamma,
        tau,
        rho,
        units: units_amb,
        lambdas,
        alphas: alphas_amb,
        approximation_gap,
    })
}

/// Hard cap on the refined half list. Cross-section polygons with a
/// near-degenerate edge pin the minimal wedge, and chasing `tau_max` by
/// bisection alone would blow the atom count up quadratically; the measure
/// is a valid contractor for any wedge ratio (the ratio only enters the
/// reported tail constants), so refinement stops here and the achieved
/// ratio is reported.
const REFINE_CAP: usize = 96;

/// Refine the half list of boundary unit vectors: insert chord midpoints of
/// the largest arcs until the wedge ratio `tau` is at most `tau_max` (or the
/// cap is reached) and the list has at least 3 entries. Inserted points lie
/// on the polygon boundary, so they are unit vectors; each bisection halves
/// the arc's wedge.
pub fn refine_unit_vectors(
    polygon_vertices: &[[f64; 2]],
    tau_max: f64,
) -> Result<Vec<[f64; 2]>, ContractorError> {
    let v2 = polygon_vertices.len();
    if v2 < 4 || v2 % 2 != 0 {
        return Err(ContractorError::Unsupported(format!(
            "cross-section polygon with {v2} vertices is not centrally symmetric"
        )));
    }
    // central symmetry check: v_{i+q} = -v_i
    let q = v2 / 2;
    for i in 0..q {
        let a = polygon_vertices[i];
        let b = polygon_vertices[i + q];
        if (a[0] + b[0]).abs() > 1e-9 || (a[1] + b[1]).abs() > 1e-9 {
            return Err(ContractorError::Unsupported(
                "cross-section polygon is not centrally symmetric".into(),
            ));
        }
    }
    let mut half: Vec<[f64; 2]> = polygon_vertices[..q].to_vec();
    let cross = |a: &[f64; 2], b: &[f64; 2]| a[0] * b[1] - a[1] * b[0];
    loop {
        let p = half.len();
        let wedge_at = |i: usize, h: &Vec<[f64; 2]>| -> f64 {
            let u = h[i];
            let v = if i + 1 < h.len() {
                h[i + 1]
            } else {
                [-h[0][0], -h[0][1]]
            };
            cross(&u, &v)
        };
        let wedges: Vec<f64> = (0..p).map(|i| wedge_at(i, &half)).collect();
        let max = wedges.iter().fold(0.0_f64, |a, &b| a.max(b));
        let min = wedges.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if min <= 0.0 {
            return Err(ContractorError::Unsupported(
                "polygon arcs are not in counterclockwise order".into(),
            ));
        }
        if (max / min <= tau_max || p >= REFINE_CAP) && p >= 3 {
            return Ok(half);
        }
        if p < 3 {
            // too few arcs: bisect all of them at once, preserving symmetry
            let mut refined = Vec::with_capacity(2 * p);
            for i in 0..p {
                let u = half[i];
                let v = if i + 1 < p {
                    half[i + 1]
                } else {
                    [-half[0][0], -half[0][1]]
                };
                refined.push(u);
                refined.push([(u[0] + v[0]) / 2.0, (u[1] + v[1]) / 2.0]);
            }
            half = refined;
            continue;
        }
        let argmax = wedges
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        let u = half[argmax];
        let v = if argmax + 1 < p {
            half[argmax + 1]
        } else {
            [-half[0][0], -half[0][1]]
        };
        let mid = [(u[0] + v[0]) / 2.0, (u[1] + v[1]) / 2.0];
        half.insert(argmax + 1, mid);
    }
}

/// The middle quantity of the calibration inequality:
/// `alpha(2) sum_{i<j} l_i l_j |det [[a_i(v1), a_j(v1)], [a_i(v2), a_j(v2)]]|`,
/// which is at most `psi(span(v1, v2))` with equality at the target plane.
pub fn bi_middle_quantity(bi: &BiContractor, v1: &Vector, v2: &Vector) -> f64 {
    let p = bi.lambdas.len();
    let a1: Vec<f64> = bi.alphas.iter().map(|a| a.dot(v1)).collect();
    let a2: Vec<f64> = bi.alphas.iter().map(|a| a.dot(v2)).collect();
    let mut s = 0.0;
    for i in 0..p {
        for j in i + 1..p {
            let det = a1[i] * a2[j] - a2[i] * a1[j];
            s += bi.lambdas[i] * bi.lambdas[j] * det.abs();
        }
    }
    alpha(2) * s
}

/// Measured tail data of a Burago-Ivanov contractor against the analytic
/// bounds `mu{ ||pi|| >= n } <= 4 G^4 (2 + tau) / n^2` and
/// `int_{||pi|| >= n} H^2(pi(square)) dmu <= alpha(2) G^5 (2 + tau) / n^2`.
pub fn tail_check(
    bi: &BiContractor,
    norm: &Norm,
    n_max: u32,
) -> Result<Vec<TailBoundEntry>, ContractorError> {
    let mu = &bi.contractor;
    let psi_w = norms::psi(norm, &mu.target)?;
    let op_norms: Vec<f64> = mu
        .atoms
        .iter()
        .map(|(_, map)| map.matrix.operator_norm())
        .collect();
    let v1 = &mu.target.basis()[0];
    let v2 = &mu.target.basis()[1];
    let gamma = bi.gamma;
    let tau = bi.tau;
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let mut mass = 0.0;
        let mut integral = 0.0;
        for ((wgt, map), op) in mu.atoms.iter().zip(&op_norms) {
            if *op >= n as f64 {
                mass += wgt;
                let img1 = map.matrix.matvec(v1);
                let img2 = map.matrix.matvec(v2);
                integral += wgt * psi_w * wedge_norm(&img1, &img2);
            }
        }
        out.push(TailBoundEntry {
            n,
            measured_mass: mass,
            mass_bound: 4.0 * gamma.powi(4) * (2.0 + tau) / (n as f64).powi(2),
            measured_integral: integral,
            integral_bound: alpha(2) * gamma.powi(5) * (2.0 + tau) / (n as f64).powi(2),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Minimal-Lipschitz projector search
// ---------------------------------------------------------------------------

/// Minimize `Lip(pi)` over projectors onto `W`, parameterized by the kernel
/// complement ((n-m) x m free variables), multi-start Nelder-Mead. The
/// Lipschitz constant is exact for crystalline norms (max over unit-ball
/// vertices); the reported value is the best found, an upper bound for the
/// true minimum.
pub fn min_lipschitz_projector(
    norm: &Norm,
    w: &Subspace,
) -> Result<(f64, Matrix), ContractorError> {
    let n = norm.dim();
    let m = w.dim();
    if m >= n {
        return Err(ContractorError::Unsupported("projector needs dim W < n".into()));
    }
    let complement = w.complement();
    let d = m * (n - m);
    let build = |params: &[f64]| -> Option<Matrix> {
        // kernel basis: N_j + sum_i S_ij Q_i
        let mut cols: Vec<Vector> = w.basis().to_vec();
        for (j, nj) in complement.iter().enumerate() {
            let mut k = nj.clone();
            for i in 0..m {
                k = k.axpy(params[i * (n - m) + j], &w.basis()[i]);
            }
            cols.push(k);
        }
        let full = Matrix::from_columns(&cols);
        // pi = Q * (first m rows of full^{-1})
        let mut inv_rows = Matrix::zeros(m, n);
        for e in 0..n {
            let rhs = Vector::unit(n, e);
            let x = full.solve(&rhs, 1e-12)?;
            for r in 0..m {
                inv_rows.set(r, e, x.0[r]);
            }
        }
        Some(Matrix::from_columns(w.basis()).matmul(&inv_rows))
    };
    let objective = |params: &[f64]| -> f64 {
        match build(params) {
            Some(pi) => norm.lipschitz(&pi).0,
            None => f64::INFINITY,
        }
    };
    let mut best_val = f64::INFINITY;
    let mut best_params = vec![0.0; d];
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0x317);
    for start in 0..32 {
        let x0: Vec<f64> = if start == 0 {
            vec![0.0; d]
        } else {
            (0..d).map(|_| geometry::gaussian(&mut rng) * 0.8).collect()
        };
        let x = nelder_mead(&objective, &x0, 0.4, 400);
        let v = objective(&x);
        if v < best_val {
            best_val = v;
            best_params = x;
        }
    }
    let pi = build(&best_params)
        .ok_or_else(|| ContractorError::LpFailed("projector build failed".into()))?;
    Ok((best_val, pi))
}

/// Plain Nelder-Mead minimization; deterministic for fixed inputs.
pub fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], scale: f64, iters: usize) -> Vec<f64> {
    let d = x0.len();
    if d == 0 {
        return Vec::new();
    }
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(d + 1);
    simplex.push((f(x0), x0.to_vec()));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += scale;
        simplex.push((f(&x), x));
    }
    let (a, g, r, s) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..iters {
        simplex.sort_by(|p, q| p.0.total_cmp(&q.0));
        let centroid: Vec<f64> = (0..d)
            .map(|i| simplex[..d].iter().map(|(_, x)| x[i]).sum::<f64>() / d as f64)
            .collect();
        let worst = simplex[d].clone();
        let refl: Vec<f64> = (0..d)
            .map(|i| centroid[i] + a * (centroid[i] - worst.1[i]))
            .collect();
        let f_refl = f(&refl);
        if f_refl < simplex[0].0 {
            let exp: Vec<f64> = (0..d)
                .map(|i| centroid[i] + g * (refl[i] - centroid[i]))
                .collect();
            let f_exp = f(&exp);
            simplex[d] = if f_exp < f_refl {
                (f_exp, exp)
            } else {
                (f_refl, refl)
            };
        } else if f_refl < simplex[d - 1].0 {
            simplex[d] = (f_refl, refl);
        } else {
            let contr: Vec<f64> = (0..d)
                .map(|i| centroid[i] + r * (worst.1[i] - centroid[i]))
                .collect();
            let f_contr = f(&contr);
            if f_contr < worst.0 {
                simplex[d] = (f_contr, contr);
            } else {
                let best = simplex[0].1.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = (0..d)
                        .map(|i| best[i] + s * (entry.1[i] - best[i]))
                        .collect();
                    *entry = (f(&x), x);
                }
            }
        }
    }
    simplex.sort_by(|p, q| p.0.total_cmp(&q.0));
    simplex[0].1.clone()
}

// ---------------------------------------------------------------------------
// Chain and set inequalities
// ---------------------------------------------------------------------------

/// The three quantities of the chain comparison: averaged slice-integral
/// mass, averaged pushforward mass, and the mass of `T` itself. The contract
/// is `lhs_push <= lhs_slices <= rhs` (up to tolerance), with equalities when
/// `T` lies in the target plane.
pub fn chain_mass_inequality(
    mu: &DensityContractor,
    t: &PolyhedralChain,
    norm: &Norm,
) -> Result<(f64, f64, f64), ChainError> {
    let mut lhs_slices = 0.0;
    let mut lhs_push = 0.0;
    for (w, map) in &mu.atoms {
        lhs_slices += w * t.slice_integral(&map.matrix, norm)?;
        lhs_push += w * t.pushforward_linear(&map.matrix).hausdorff_mass(norm)?;
    }
    let rhs = t.hausdorff_mass(norm)?;
    Ok((lhs_slices, lhs_push, rhs))
}

/// Averaged measure of the projected set versus the measure of the set, for
/// a union of nonoverlapping simplices (overlap-aware on the image side:
/// exact polygon unions for `m = 2`, interval unions for `m = 1`).
pub fn set_inequality(
    mu: &DensityContractor,
    a: &[OrientedSimplex],
    norm: &Norm,
) -> Result<(f64, f64), ChainError> {
    let err = |e: norms::NormError| ChainError::Unsupported(e.to_string());
    let m = a.first().map(OrientedSimplex::dim).unwrap_or(0);
    let mut rhs = 0.0;
    for s in a {
        let w = s.direction()?;
        rhs += norms::psi(norm, &w).map_err(err)? * s.volume();
    }
    let psi_w = norms::psi(norm, &mu.target).map_err(err)?;
    let mut lhs = 0.0;
    for (wgt, map) in &mu.atoms {
        let measure = match m {
            1 => {
                // union of projected segments, 1D coordinates in the target
                let mut intervals: Vec<(f64, f64)> = Vec::new();
                for s in a {
                    let p = mu.target.coords(&map.matrix.matvec(&s.vertices[0]))[0];
                    let q = mu.target.coords(&map.matrix.matvec(&s.vertices[1]))[0];
                    intervals.push((p.min(q), p.max(q)));
                }
                intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
                let mut total = 0.0;
                let mut cur: Option<(f64, f64)> = None;
                for (lo, hi) in intervals {
                    match cur {
                        None => cur = Some((lo, hi)),
                        Some((clo, chi)) => {
                            if lo <= chi {
                                cur = Some((clo, chi.max(hi)));
                            } else {
                                total += chi - clo;
                                cur = Some((lo, hi));
                            }
                        }
                    }
                }
                if let Some((clo, chi)) = cur {
                    total += chi - clo;
                }
                total
            }
            2 => {
                let mut tris: Vec<[[f64; 2]; 3]> = Vec::new();
                for s in a {
                    let img: Vec<[f64; 2]> = s
                        .vertices
                        .iter()
                        .map(|v| {
                            let c = mu.target.coords(&map.matrix.matvec(v));
                            [c[0], c[1]]
                        })
                        .collect();
                    let area = crate::geometry::shoelace(&img).abs();
                    if area > 1e-13 {
                        tris.push([img[0], img[1], img[2]]);
                    }
                }
                union_area(&tris)
            }
            d => {
                return Err(ChainError::Unsupported(format!(
                    "set inequality for {d}-dimensional sets"
                )))
            }
        };
        lhs += wgt * psi_w * measure;
    }
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// JSON representation
// ---------------------------------------------------------------------------

/// Wire format `{"target":[[basis columns]],"atoms":[{"w":...,"matrix":[[...]]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContractorSpec {
    pub target: Vec<Vec<f64>>,
    pub atoms: Vec<AtomSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomSpec {
    pub w: f64,
    pub matrix: Vec<Vec<f64>>,
}

impl ContractorSpec {
    pub fn from_contractor(mu: &DensityContractor) -> Self {
        ContractorSpec {
            target: mu.target.basis().iter().map(|b| b.0.clone()).collect(),
            atoms: mu
                .atoms
                .iter()
                .map(|(w, map)| AtomSpec {
                    w: *w,
                    matrix: (0..map.matrix.rows)
                        .map(|i| {
                            (0..map.matrix.cols)
                                .map(|j| map.matrix.get(i, j))
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_contractor(&self) -> Result<DensityContractor, ContractorError> {
        let basis: Vec<Vector> = self.target.iter().map(|b| Vector(b.clone())).collect();
        let target = Subspace::from_orthonormal(basis)?;
        let mut atoms = Vec::new();
        for a in &self.atoms {
            let rows = a.matrix.len();
            let cols = a.matrix.first().map_or(0, Vec::len);
            let mut m = Matrix::zeros(rows, cols);
            for (i, row) in a.matrix.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    m.set(i, j, *v);
                }
            }
            atoms.push((a.w, RankLimitedMap::new(m, target.clone())?));
        }
        DensityContractor::new(target, atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{Coeff, CoefficientGroup};

    fn v(c: &[f64]) -> Vector {
        Vector(c.to_vec())
    }

    fn plane_sum_zero() -> Subspace {
        orthonormalize(&[v(&[1.0, -1.0, 0.0]), v(&[1.0, 1.0, -2.0])]).unwrap()
    }

    #[test]
    fn hahn_euclidean_is_orthogonal() {
        let mu = hahn_projector(&Norm::euclidean(3), &v(&[1.0, 0.0, 0.0])).unwrap();
        let cert = verify_contractor(&mu, &Norm::euclidean(3), 200, 1).unwrap();
        assert!(cert.max_violation <= 1e-10);
        assert!(cert.equality_gap_at_w <= 1e-12);
    }

    #[test]
    fn hahn_linf_diagonal() {
        // w = (1,1): active facets e1 and e2; lexicographic pick e1
        let mu = hahn_projector(&Norm::linf(2), &v(&[1.0, 1.0])).unwrap();
        let a = mu.atoms[0].1.matrix.transpose().matvec(&v(&[1.0, 0.0]));
        // pi = w a^T: reading off a from the matrix: row space is span(a)
        let _ = a;
        let linf = Norm::linf(2);
        let (lip, exact) = linf.lipschitz(&mu.atoms[0].1.matrix);
        assert!(exact && (lip - 1.0).abs() <= 1e-12, "Lip = {lip}");
        let cert = verify_contractor(&mu, &linf, 1000, 2).unwrap();
        assert!(cert.max_violation <= 1e-9, "violation {}", cert.max_violation);
        assert!(cert.equality_gap_at_w <= 1e-12);
    }

    #[test]
    fn hahn_rejects_non_unit() {
        assert!(matches!(
            hahn_projector(&Norm::linf(2), &v(&[2.0, 0.0])),
            Err(ContractorError::NotUnit(_))
        ));
    }

    #[test]
    fn busemann_euclidean_is_orthogonal() {
        let w = plane_sum_zero();
        let mu = busemann_projector(&Norm::euclidean(3), &w).unwrap();
        let pi = &mu.atoms[0].1.matrix;
        // pi^2 = pi and pi restricted to W is the identity
        let pi2 = pi.matmul(pi);
        for (a, b) in pi2.data.iter().zip(&pi.data) {
            assert!((a - b).abs() < 1e-12);
        }
        for b in w.basis() {
            assert!(pi.matvec(b).sub(b).norm2() < 1e-12);
        }
    }

    #[test]
    fn busemann_linf_certifies() {
        let w = plane_sum_zero();
        let norm = Norm::linf(3);
        let mu = busemann_projector(&norm, &w).unwrap();
        let pi = &mu.atoms[0].1.matrix;
        let pi2 = pi.matmul(pi);
        for (a, b) in pi2.data.iter().zip(&pi.data) {
            assert!((a - b).abs() < 1e-10, "projector algebra");
        }
        for b in w.basis() {
            assert!(pi.matvec(b).sub(b).norm2() < 1e-10);
        }
        // the projector is not 1-Lipschitz, yet contracts the Hausdorff area
        let (lip, _) = norm.lipschitz(pi);
        assert!(lip > 1.0 + 1e-6, "Lip = {lip}");
        let cert = verify_contractor(&mu, &norm, 2000, 3).unwrap();
        assert!(
            cert.max_violation <= 1e-8,
            "violation {}",
            cert.max_violation
        );
        assert!(cert.equality_gap_at_w <= 1e-10);
    }

    #[test]
    fn refine_square_and_hexagon() {
        // square section: vertices only, tau = 1, but the minimum count rule
        // bisects once: p = 4, lambda = 1/4 each
        let square = vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]];
        let half = refine_unit_vectors(&square, 2.0).unwrap();
        assert_eq!(half.len(), 4);

        // regular hexagon: tau = 1 already and p = 3, unchanged
        let mut hexagon = Vec::new();
        for i in 0..6 {
            let th = std::f64::consts::PI * (2.0 * i as f64 + 1.0) / 6.0;
            hexagon.push([th.cos(), th.sin()]);
        }
        let half = refine_unit_vectors(&hexagon, 2.0).unwrap();
        assert_eq!(half.len(), 3);

        // wedge sum over the full cycle is twice the polygon area
        let area = crate::geometry::shoelace(&hexagon);
        let full: Vec<[f64; 2]> = half
            .iter()
            .cloned()
            .chain(half.iter().map(|u| [-u[0], -u[1]]))
            .collect();
        let total: f64 = (0..full.len())
            .map(|i| {
                let u = full[i];
                let w = full[(i + 1) % full.len()];
                u[0] * w[1] - u[1] * w[0]
            })
            .sum();
        assert!((total - 2.0 * area).abs() < 1e-12);
    }

    #[test]
    fn refine_elongated_polygon() {
        // circle-inscribed octagon with very uneven angular gaps:
        // wedge ratio sin(86) / sin(7), about 8
        let deg: Vec<f64> = vec![0.0, 7.0, 14.0, 100.0, 180.0, 187.0, 194.0, 280.0];
        let pts: Vec<[f64; 2]> = deg
            .iter()
            .map(|d| {
                let th = d.to_radians();
                [th.cos(), th.sin()]
            })
            .collect();
        let wedges: Vec<f64> = (0..pts.len())
            .map(|i| {
                let u = pts[i];
                let v = pts[(i + 1) % pts.len()];
                u[0] * v[1] - u[1] * v[0]
            })
            .collect();
        let ratio = wedges.iter().cloned().fold(0.0_f64, f64::max)
            / wedges.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(ratio > 7.0, "test setup: ratio {ratio}");
        let half = refine_unit_vectors(&pts, 2.0).unwrap();
        let p = half.len();
        let full: Vec<[f64; 2]> = half
            .iter()
            .cloned()
            .chain(half.iter().map(|u| [-u[0], -u[1]]))
            .collect();
        let wedges: Vec<f64> = (0..p)
            .map(|i| {
                let u = full[i];
                let v = full[i + 1];
                u[0] * v[1] - u[1] * v[0]
            })
            .collect();
        let tau = wedges.iter().cloned().fold(0.0_f64, f64::max)
            / wedges.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(tau <= 2.0 + 1e-12, "tau after refinement {tau}");
    }

    #[test]
    fn burago_ivanov_square_section() {
        // linf in R^3, W = the e1e2 plane: section is the 4-square; after the
        // minimum refinement p = 4 and every lambda = 1/4
        let w = orthonormalize(&[v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])]).unwrap();
        let norm = Norm::linf(3);
        let bi = burago_ivanov(&norm, &w, 2.0).unwrap();
        assert_eq!(bi.lambdas.len(), 4);
        for l in &bi.lambdas {
            assert!((l - 0.25).abs() < 1e-12);
        }
        let total: f64 = bi.contractor.atoms.iter().map(|(w, _)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let cert = verify_contractor(&bi.contractor, &norm, 1000, 5).unwrap();
        assert!(
            cert.max_violation <= 1e-9,
            "violation {}",
            cert.max_violation
        );
        assert!(
            cert.equality_gap_at_w <= 1e-10,
            "gap {}",
            cert.equality_gap_at_w
        );
    }

    #[test]
    fn burago_ivanov_hexagon_plane() {
        let w = plane_sum_zero();
        let norm = Norm::linf(3);
        let bi = burago_ivanov(&norm, &w, 2.0).unwrap();
        let cert = verify_contractor(&bi.contractor, &norm, 1000, 7).unwrap();
        assert!(
            cert.max_violation <= 1e-9,
            "violation {}",
            cert.max_violation
        );
        assert!(cert.equality_gap_at_w <= 1e-10);

        // middle inequality at the target plane is an equality
        let q = bi_middle_quantity(&bi, &w.basis()[0], &w.basis()[1]);
        let psi_w = norms::psi(&norm, &w).unwrap();
        assert!((q - psi_w).abs() < 1e-10, "middle {q} vs psi {psi_w}");

        // corrupted weights break the equality at W
        let mut bad_atoms = bi.contractor.atoms.clone();
        for (wgt, _) in bad_atoms.iter_mut() {
            *wgt *= 1.1;
        }
        // renormalizing scale off: direct construction bypassing validation
        let bad = DensityContractor {
            target: bi.contractor.target.clone(),
            atoms: bad_atoms,
        };
        let cert = verify_contractor(&bad, &norm, 100, 8).unwrap();
        assert!(cert.equality_gap_at_w > 0.05);
    }

    #[test]
    fn tail_bounds_hold() {
        let w = plane_sum_zero();
        let norm = Norm::linf(3);
        let bi = burago_ivanov(&norm, &w, 2.0).unwrap();
        let tails = tail_check(&bi, &norm, 100).unwrap();
        for t in &tails {
            assert!(
                t.measured_mass <= t.mass_bound + 1e-12,
                "mass tail at n = {}",
                t.n
            );
            assert!(
                t.measured_integral <= t.integral_bound + 1e-12,
                "integral tail at n = {}",
                t.n
            );
        }
        // beyond the atom-norm support bound the measured mass vanishes
        let max_op = bi
            .contractor
            .atoms
            .iter()
            .map(|(_, m)| m.matrix.operator_norm())
            .fold(0.0_f64, f64::max);
        let beyond = tails.iter().find(|t| (t.n as f64) > max_op);
        if let Some(t) = beyond {
            assert_eq!(t.measured_mass, 0.0);
        }
    }

    #[test]
    fn min_lip_euclidean_is_one() {
        let w = plane_sum_zero();
        let (val, _) = min_lipschitz_projector(&Norm::euclidean(3), &w).unwrap();
        assert!((val - 1.0).abs() < 1e-6, "min Lip = {val}");
    }

    #[test]
    fn min_lip_coordinate_axis_linf() {
        // coordinate projection is 1-Lipschitz for the max norm
        let w = orthonormalize(&[v(&[1.0, 0.0, 0.0])]).unwrap();
        let (val, _) = min_lipschitz_projector(&Norm::linf(3), &w).unwrap();
        assert!(val <= 1.0 + 1e-9, "min Lip = {val}");
    }

    /// The plane {sum x = 0} in linf3: every projector has Lip >= 8/7.
    #[test]
    fn min_lip_eight_sevenths() {
        let w = plane_sum_zero();
        let (val, pi) = min_lipschitz_projector(&Norm::linf(3), &w).unwrap();
        assert!(
            val >= 8.0 / 7.0 - 1e-3,
            "found {val} below the 8/7 lower bound"
        );
        // the found value is an upper bound for the true minimum; sane range
        assert!(val < 1.5, "optimizer stuck at {val}");
        // projector algebra
        let pi2 = pi.matmul(&pi);
        for (a, b) in pi2.data.iter().zip(&pi.data) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn chain_inequality_equality_when_planar() {
        let w = plane_sum_zero();
        let norm = Norm::linf(3);
        let bi = burago_ivanov(&norm, &w, 2.0).unwrap();
        // triangle inside W
        let p0 = w.embed(&[0.1, 0.2]);
        let p1 = w.embed(&[1.1, 0.3]);
        let p2 = w.embed(&[0.4, 1.2]);
        let t = PolyhedralChain::simplex(
            CoefficientGroup::Integers,
            Coeff::Int(2),
            OrientedSimplex::new(vec![p0, p1, p2]),
        );
        let (slices, push, rhs) = chain_mass_inequality(&bi.contractor, &t, &norm).unwrap();
        assert!((slices - rhs).abs() < 1e-9, "slices {slices} vs {rhs}");
        assert!((push - rhs).abs() < 1e-9, "push {push} vs {rhs}");
    }

    #[test]
    fn chain_inequality_strict_for_tilted() {
        let w = plane_sum_zero();
        let norm = Norm::linf(3);
        let bi = burago_ivanov(&norm, &w, 2.0).unwrap();
        let t = PolyhedralChain::simplex(
            CoefficientGroup::Integers,
            Coeff::Int(1),
            OrientedSimplex::new(vec![
                v(&[0.0, 0.0, 0.0]),
                v(&[1.0, 0.1, 0.2]),
                v(&[0.2, 1.0, -0.4]),
            ]),
        );
        let (slices, push, rhs) = chain_mass_inequality(&bi.contractor, &t, &norm).unwrap();
        assert!(slices <= rhs + 1e-9);
        assert!(push <= slices + 1e-9);
    }

    #[test]
    fn set_inequality_union_vs_sum() {
        let w = plane_sum_zero();
        let norm = Norm::linf(3);
        let bi = burago_ivanov(&norm, &w, 2.0).unwrap();
        // one simplex inside W: equality
        let s = OrientedSimplex::new(vec![
            w.embed(&[0.0, 0.0]),
            w.embed(&[1.0, 0.0]),
            w.embed(&[0.0, 1.0]),
        ]);
        let (lhs, rhs) = set_inequality(&bi.contractor, &[s.clone()], &norm).unwrap();
        assert!((lhs - rhs).abs() < 1e-9, "equality case {lhs} vs {rhs}");

        // random tilted simplices: inequality
        let t = OrientedSimplex::new(vec![
            v(&[0.0, 0.1, 0.0]),
            v(&[0.9, 0.0, 0.3]),
            v(&[0.1, 0.8, -0.2]),
        ]);
        let (lhs, rhs) = set_inequality(&bi.contractor, &[t], &norm).unwrap();
        assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn contractor_spec_roundtrip() {
        let w = plane_sum_zero();
        let mu = busemann_projector(&Norm::linf(3), &w).unwrap();
        let spec = ContractorSpec::from_contractor(&mu);
        let json = serde_json::to_string(&spec).unwrap();
        let back: ContractorSpec = serde_json::from_str(&json).unwrap();
        let mu2 = back.to_contractor().unwrap();
        assert_eq!(mu.atoms.len(), mu2.atoms.len());
    }
}
