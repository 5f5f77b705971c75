//! Gross-type measures and masses built from a field of density contractors.
//!
//! `zeta(A) = sup_W int H^m(pi(A)) dmu_W(pi)` is approximated from below by
//! evaluating the exact atom sums over a candidate family that always
//! contains the direction planes of the pieces (where the equality cases
//! live) plus seeded Grassmannian samples; reported values are certified
//! lower bounds with a refinement flag. The Caratheodory construction
//! `G_delta(A) = inf over covers of sum zeta(B_j)` is estimated from above
//! with axis-aligned dyadic cells, so the pair brackets the true value.

use crate::chains::{ChainError, OrientedSimplex, PolyhedralChain};
use crate::contractors::{
    self, burago_ivanov, busemann_projector, hahn_projector, verify_contractor, DensityContractor,
};
use crate::geometry::{sample_subspaces, Subspace, Vector};
use crate::norms::{self, Norm};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

#[derive(Clone, Debug)]
pub enum GrossError {
    Contractor(String),
    CertificationFailed { max_violation: f64 },
    Chain(ChainError),
    Unsupported(String),
}

impl fmt::Display for GrossError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrossError::Contractor(s) => write!(f, "contractor construction failed: {s}"),
            GrossError::CertificationFailed { max_violation } => {
                write!(f, "contractor failed certification: violation {max_violation:.3e}")
            }
            GrossError::Chain(e) => write!(f, "{e}"),
            GrossError::Unsupported(s) => write!(f, "unsupported: {s}"),
        }
    }
}

impl std::error::Error for GrossError {}

impl From<ChainError> for GrossError {
    fn from(e: ChainError) -> Self {
        GrossError::Chain(e)
    }
}

// ---------------------------------------------------------------------------
// Contractor field
// ---------------------------------------------------------------------------

/// Memoized `W -> density contractor` provider. Contractors are built on
/// first use per (quantized) projector fingerprint and certified before being
/// cached; lookups are safe under concurrent access.
pub struct ContractorField {
    norm: Norm,
    /// Samples used for the one-time certification of each new contractor.
    pub certify_samples: usize,
    /// Tolerance the certification must meet.
    pub certify_tolerance: f64,
    /// Prefer the discrete dimension-2 measure over the codimension-1
    /// projector when both apply.
    pub prefer_discrete: bool,
    cache: Mutex<HashMap<Vec<i64>, Arc<DensityContractor>>>,
}

impl ContractorField {
    pub fn new(norm: Norm) -> Self {
        ContractorField {
            norm,
            certify_samples: 200,
            certify_tolerance: 1e-7,
            prefer_discrete: false,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn norm(&self) -> &Norm {
        &self.norm
    }

    /// The contractor for `W`, constructing and certifying on first use.
    pub fn provider(&self, w: &Subspace) -> Result<Arc<DensityContractor>, GrossError> {
        let key = w.fingerprint();
        if let Some(mu) = self.cache.lock().unwrap().get(&key) {
            return Ok(mu.clone());
        }
        let mu = self.construct(w)?;
        let seed = key
            .iter()
            .fold(0xcbf29ce484222325u64, |h, &v| {
                (h ^ v as u64).wrapping_mul(0x100000001b3)
            });
        let cert = verify_contractor(&mu, &self.norm, self.certify_samples, seed)
            .map_err(|e| GrossError::Contractor(e.to_string()))?;
        if !cert.passes(self.certify_tolerance) {
            return Err(GrossError::CertificationFailed {
                max_violation: cert.max_violation,
            });
        }
        let arc = Arc::new(mu);
        self.cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| arc.clone());
        Ok(arc)
    }

    fn construct(&self, w: &Subspace) -> Result<DensityContractor, GrossError> {
        let n = self.norm.dim();
        let m = w.dim();
        let err = |e: contractors::ContractorError| GrossError::Contractor(e.to_string());
        if matches!(self.norm.kind(), norms::NormKind::Euclidean)
            || matches!(self.norm.kind(), norms::NormKind::Lp(p) if *p == 2.0)
        {
            return DensityContractor::dirac(w.projector(), w.clone()).map_err(err);
        }
        if m == 1 {
            let b = &w.basis()[0];
            let unit = b.scale(1.0 / self.norm.eval(b));
            return hahn_projector(&self.norm, &unit).map_err(err);
        }
        if m == 2 && (self.prefer_discrete || m != n - 1) {
            return Ok(burago_ivanov(&self.norm, w, 2.0).map_err(err)?.contractor);
        }
        if m == n - 1 {
            return busemann_projector(&self.norm, w).map_err(err);
        }
        if m == 2 {
            return Ok(burago_ivanov(&self.norm, w, 2.0).map_err(err)?.contractor);
        }
        Err(GrossError::Unsupported(format!(
            "no contractor construction for m = {m} in n = {n}"
        )))
    }
}

// ---------------------------------------------------------------------------
// Test sets
// ---------------------------------------------------------------------------

/// A simplicial representative of a rectifiable set: finitely many
/// nonoverlapping `m`-simplices.
#[derive(Clone, Debug)]
pub struct RectifiableTestSet {
    pub pieces: Vec<OrientedSimplex>,
}

impl RectifiableTestSet {
    pub fn new(pieces: Vec<OrientedSimplex>) -> Self {
        RectifiableTestSet { pieces }
    }

    pub fn dim(&self) -> usize {
        self.pieces.first().map_or(0, OrientedSimplex::dim)
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// `H^m` of the set for the norm (pieces assumed nonoverlapping).
    pub fn measure(&self, norm: &Norm) -> Result<f64, GrossError> {
        let mut total = 0.0;
        for s in &self.pieces {
            let w = s.direction().map_err(|e| GrossError::Unsupported(e.to_string()))?;
            let psi = norms::psi(norm, &w).map_err(|e| GrossError::Unsupported(e.to_string()))?;
            total += psi * s.volume();
        }
        Ok(total)
    }
}

// ---------------------------------------------------------------------------
// zeta on sets and chains
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct CandidateValue {
    pub kind: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaReport {
    /// Certified lower bound for the supremum over all subspaces.
    pub value: f64,
    /// Index of the attaining candidate.
    pub argmax: usize,
    pub candidates: Vec<CandidateValue>,
    pub refined: bool,
}

fn dedupe_candidates(cands: Vec<(String, Subspace)>) -> Vec<(String, Subspace)> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (kind, w) in cands {
        if seen.insert(w.fingerprint()) {
            out.push((kind, w));
        }
    }
    out
}

/// `zeta(A)`: supremum over candidate subspaces of the averaged projected
/// measure (exact atom sums, overlap-aware unions on the image side).
/// Candidates: the direction planes of the pieces plus `w_samples` seeded
/// Grassmannian samples; `refine` runs a seeded local ascent from the best.
pub fn zeta_set(
    a: &RectifiableTestSet,
    field: &ContractorField,
    norm: &Norm,
    w_samples: usize,
    seed: u64,
    refine: bool,
) -> Result<ZetaReport, GrossError> {
    if a.is_empty() {
        return Ok(ZetaReport {
            value: 0.0,
            argmax: 0,
            candidates: Vec::new(),
            refined: false,
        });
    }
    let n = norm.dim();
    let m = a.dim();
    let eval = |w: &Subspace| -> Result<f64, GrossError> {
        let mu = field.provider(w)?;
        let (lhs, _) = contractors::set_inequality(&mu, &a.pieces, norm)?;
        Ok(lhs)
    };
    let mut cands: Vec<(String, Subspace)> = Vec::new();
    for s in &a.pieces {
        if let Ok(w) = s.direction() {
            cands.push(("piece-direction".into(), w));
        }
    }
    for w in sample_subspaces(n, m, w_samples, seed) {
        cands.push(("sampled".into(), w));
    }
    let cands = dedupe_candidates(cands);
    let mut report = ZetaReport {
        value: f64::NEG_INFINITY,
        argmax: 0,
        candidates: Vec::new(),
        refined: false,
    };
    let mut best_w: Option<Subspace> = None;
    for (i, (kind, w)) in cands.iter().enumerate() {
        let v = eval(w)?;
        report.candidates.push(CandidateValue {
            kind: kind.clone(),
            value: v,
        });
        if v > report.value {
            report.value = v;
            report.argmax = i;
            best_w = Some(w.clone());
        }
    }
    if refine {
        if let Some(w0) = best_w {
            let (w_ref, v_ref) = local_ascent(&w0, &eval, seed ^ 0x5eed)?;
            if v_ref > report.value {
                report.value = v_ref;
                report.argmax = report.candidates.len();
                report.candidates.push(CandidateValue {
                    kind: "refined".into(),
                    value: v_ref,
                });
                let _ = w_ref;
            }
            report.refined = true;
        }
    }
    Ok(report)
}

/// Seeded coordinate ascent on the Grassmannian: perturb the basis by
/// Gaussian steps of shrinking size, keep improvements.
fn local_ascent(
    w0: &Subspace,
    eval: &dyn Fn(&Subspace) -> Result<f64, GrossError>,
    seed: u64,
) -> Result<(Subspace, f64), GrossError> {
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut best = (w0.clone(), eval(w0)?);
    let mut step = 0.05;
    for _ in 0..40 {
        let perturbed: Vec<Vector> = best
            .0
            .basis()
            .iter()
            .map(|b| {
                let noise = crate::geometry::gaussian_vector(b.dim(), &mut rng);
                b.axpy(step, &noise)
            })
            .collect();
        if let Ok(w) = crate::geometry::orthonormalize(&perturbed) {
            let v = eval(&w)?;
            if v > best.1 {
                best = (w, v);
            } else {
                step *= 0.8;
            }
        }
    }
    Ok(best)
}

/// `zeta(T)` for a chain: supremum of `sum_atoms w M_H(pi_# T)` over the
/// candidate family (term directions plus samples).
pub fn zeta_chain(
    t: &PolyhedralChain,
    field: &ContractorField,
    norm: &Norm,
    w_samples: usize,
    seed: u64,
) -> Result<ZetaReport, GrossError> {
    if t.is_zero() {
        return Ok(ZetaReport {
            value: 0.0,
            argmax: 0,
            candidates: Vec::new(),
            refined: false,
        });
    }
    let n = norm.dim();
    let m = t.dim;
    let mut cands: Vec<(String, Subspace)> = Vec::new();
    for (_, s) in &t.terms {
        if let Ok(w) = s.direction() {
            cands.push(("term-direction".into(), w));
        }
    }
    for w in sample_subspaces(n, m, w_samples, seed) {
        cands.push(("sampled".into(), w));
    }
    let cands = dedupe_candidates(cands);
    let mut report = ZetaReport {
        value: f64::NEG_INFINITY,
        argmax: 0,
        candidates: Vec::new(),
        refined: false,
    };
    for (i, (kind, w)) in cands.iter().enumerate() {
        let mu = field.provider(w)?;
        let mut v = 0.0;
        for (wgt, map) in &mu.atoms {
            v += wgt * t.pushforward_linear(&map.matrix).hausdorff_mass(norm)?;
        }
        report.candidates.push(CandidateValue {
            kind: kind.clone(),
            value: v,
        });
        if v > report.value {
            report.value = v;
            report.argmax = i;
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Caratheodory estimates
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct GrossReport {
    pub value: f64,
    pub cells: usize,
    pub cell_size: f64,
}

/// Upper estimate of `G_delta(A)` over the axis-aligned dyadic-cell cover at
/// mesh `delta / sqrt(n)`: the pieces are clipped to the cells and `zeta` is
/// summed per cell. Together with `zeta(A) <= G(A)` this brackets the true
/// value.
pub fn gross_estimate(
    a: &RectifiableTestSet,
    field: &ContractorField,
    norm: &Norm,
    delta: f64,
) -> Result<GrossReport, GrossError> {
    assert!(delta > 0.0);
    let n = norm.dim();
    let s = delta / (n as f64).sqrt();
    // bucket pieces by cell
    let mut cells: HashMap<Vec<i64>, Vec<OrientedSimplex>> = HashMap::new();
    for piece in &a.pieces {
        for (idx, part) in clip_to_grid(piece, s, n)? {
            cells.entry(idx).or_default().push(part);
        }
    }
    let mut total = 0.0;
    let count = cells.len();
    for (_, pieces) in cells {
        let set = RectifiableTestSet::new(pieces);
        let z = zeta_set(&set, field, norm, 2, 0x6e0, false)?;
        total += z.value;
    }
    Ok(GrossReport {
        value: total,
        cells: count,
        cell_size: s,
    })
}

/// Clip a simplex to the axis grid of size `s`: split by every grid plane
/// crossing the piece's bounding box (axis by axis), then bucket the
/// resulting fragments by the cell containing their barycenter. Only cells
/// actually met by the piece are produced.
fn clip_to_grid(
    piece: &OrientedSimplex,
    s: f64,
    n: usize,
) -> Result<Vec<(Vec<i64>, OrientedSimplex)>, GrossError> {
    let m = piece.dim();
    if m > 2 {
        return Err(GrossError::Unsupported(
            "grid clipping for pieces of dimension > 2".into(),
        ));
    }
    let mut parts = vec![piece.clone()];
    for d in 0..n {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in &piece.vertices {
            lo = lo.min(v.0[d]);
            hi = hi.max(v.0[d]);
        }
        let c_lo = (lo / s).floor() as i64;
        let c_hi = (hi / s).floor() as i64;
        let axis = Vector::unit(n, d);
        for c in c_lo + 1..=c_hi {
            let b = c as f64 * s;
            let mut next = Vec::with_capacity(parts.len() + 8);
            for p in parts {
                next.extend(crate::chains::split_simplex(&p, &axis, b)?);
            }
            parts = next;
        }
    }
    Ok(parts
        .into_iter()
        .map(|p| {
            let bc = p.barycenter();
            let idx: Vec<i64> = (0..n).map(|d| (bc.0[d] / s).floor() as i64).collect();
            (idx, p)
        })
        .collect())
}

/// Gross mass of a chain: `sum |g_k| G-estimate(sigma_k)`; converges to the
/// Hausdorff mass as `delta -> 0`.
pub fn gross_mass(
    t: &PolyhedralChain,
    field: &ContractorField,
    norm: &Norm,
    delta: f64,
) -> Result<f64, GrossError> {
    let mut total = 0.0;
    for (g, s) in &t.terms {
        let est = gross_estimate(
            &RectifiableTestSet::new(vec![s.clone()]),
            field,
            norm,
            delta,
        )?;
        total += t.group.norm(*g) * est.value;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Lower-semicontinuity experiments
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ZetaLscRow {
    pub j: usize,
    pub zeta_p_j: f64,
    pub flat_bound: f64,
    pub mass_p_j: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaLscReport {
    pub zeta_p: f64,
    pub rows: Vec<ZetaLscRow>,
    /// `zeta(P) <= min_j zeta(P_j) + tol (1 + flat bound)` held.
    pub lsc_witnessed: bool,
}

/// Evaluate `zeta` along the subdivide-and-replace sequence and check the
/// lower-semicontinuity inequality at the sampled indices.
pub fn zeta_lsc_experiment(
    p: &PolyhedralChain,
    q: &PolyhedralChain,
    filling: Option<&PolyhedralChain>,
    j_list: &[usize],
    field: &ContractorField,
    norm: &Norm,
) -> Result<ZetaLscReport, GrossError> {
    let tol = 1e-6;
    let zeta_p = zeta_chain(p, field, norm, 4, 0x21)?.value;
    let mut rows = Vec::new();
    let mut density =
        |w: &Subspace| -> Result<f64, ChainError> {
            norms::psi(norm, w).map_err(|e| ChainError::Unsupported(e.to_string()))
        };
    for &j in j_list {
        let step = crate::chains::lsc_sequence(p, q, filling, j, &mut density)?;
        let zeta_p_j = zeta_chain(&step.p_j, field, norm, 4, 0x22)?.value;
        rows.push(ZetaLscRow {
            j,
            zeta_p_j,
            flat_bound: step.flat_bound,
            mass_p_j: step.mass_p_j,
        });
    }
    let min_zeta = rows.iter().map(|r| r.zeta_p_j).fold(f64::INFINITY, f64::min);
    let max_flat = rows.iter().map(|r| r.flat_bound).fold(0.0_f64, f64::max);
    let lsc_witnessed = rows.is_empty() || zeta_p <= min_zeta + tol * (1.0 + max_flat);
    Ok(ZetaLscReport {
        zeta_p,
        rows,
        lsc_witnessed,
    })
}

/// Prop-63-style witness: the density ratio `zeta(P | B(x, r)) / M_H(P | B)`
/// for a planar chain restricted to an in-plane polygonal ball of radius `r`.
pub fn planar_ball_density_ratio(
    p: &PolyhedralChain,
    center: &Vector,
    r: f64,
    sides: usize,
    field: &ContractorField,
    norm: &Norm,
) -> Result<f64, GrossError> {
    let w = p.terms[0]
        .1
        .direction()
        .map_err(|e| GrossError::Unsupported(e.to_string()))?;
    // in-plane polygonal ball: intersection of `sides` halfspaces
    let mut restricted = p.clone();
    for i in 0..sides {
        let th = 2.0 * std::f64::consts::PI * i as f64 / sides as f64;
        let dir = w.basis()[0].scale(th.cos()).axpy(th.sin(), &w.basis()[1]);
        let b = dir.dot(center) + r;
        restricted = restricted.restrict_halfspace(&dir, b)?;
    }
    if restricted.is_zero() {
        return Ok(1.0);
    }
    let mass = restricted.hausdorff_mass(norm)?;
    let zeta = zeta_chain(&restricted, field, norm, 2, 0x63)?.value;
    Ok(zeta / mass)
}
