//! Discrete Plateau problems over simplicial complexes.
//!
//! Mass minimization with prescribed boundary is a linear program over the
//! chain coefficients, solved exactly over the rationals (split positive and
//! negative parts, Bland's rule). For crystalline norms with rational
//! vertices the cell weights are exact rationals times `alpha(m)`, so the
//! reported optimum carries a zero duality gap in exact arithmetic. Integer
//! and cyclic coefficient groups go through a depth-limited branch-and-bound
//! on the same relaxation.
//!
//! The module also computes the simplicial flat norm, the support-reduction
//! map of composed halfspace projections, the max-norm graph-area identity,
//! and a harness for the subdivide-and-replace lower-semicontinuity
//! experiments.

use crate::chains::{
    one_chains_equal, Coeff, CoefficientGroup, OrientedSimplex, PolyhedralChain,
};
use crate::contractors::busemann_projector;
use crate::geometry::{rat, rat_i, AffineMap, Matrix, Rat, Subspace, Vector};
use crate::lp::{self, IntStatus, LinearProgram, LpScalar, LpStatus, RelOp};
use crate::norms::{self, alpha, Norm};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug)]
pub enum PlateauError {
    MissingFace { dim: usize, cell: usize },
    DegenerateCell { dim: usize, cell: usize },
    NotACycle(String),
    Infeasible { witness: Vec<f64> },
    BoundaryOutsideRegion,
    LipschitzViolated { cell: usize, slope: f64 },
    Unsupported(String),
    Chain(crate::chains::ChainError),
    Norm(norms::NormError),
}

impl fmt::Display for PlateauError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlateauError::MissingFace { dim, cell } => {
                write!(f, "facet of {dim}-cell {cell} is not a cell of the complex")
            }
            PlateauError::DegenerateCell { dim, cell } => {
                write!(f, "{dim}-cell {cell} is degenerate")
            }
            PlateauError::NotACycle(s) => write!(f, "boundary data is not a cycle: {s}"),
            PlateauError::Infeasible { .. } => {
                write!(f, "boundary is not a boundary in this complex (homology witness attached)")
            }
            PlateauError::BoundaryOutsideRegion => {
                write!(f, "the boundary of the chain is not supported in the region")
            }
            PlateauError::LipschitzViolated { cell, slope } => {
                write!(f, "cell {cell} has slope {slope} > 1")
            }
            PlateauError::Unsupported(s) => write!(f, "unsupported: {s}"),
            PlateauError::Chain(e) => write!(f, "{e}"),
            PlateauError::Norm(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PlateauError {}

impl From<crate::chains::ChainError> for PlateauError {
    fn from(e: crate::chains::ChainError) -> Self {
        PlateauError::Chain(e)
    }
}

impl From<norms::NormError> for PlateauError {
    fn from(e: norms::NormError) -> Self {
        PlateauError::Norm(e)
    }
}

impl From<crate::geometry::GeometryError> for PlateauError {
    fn from(e: crate::geometry::GeometryError) -> Self {
        PlateauError::Unsupported(e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Simplicial complexes
// ---------------------------------------------------------------------------

/// A finite simplicial complex: vertex coordinates plus cells per dimension
/// as sorted vertex-index tuples (the sorted order is the reference
/// orientation). Validation checks face closure, nondegeneracy, and
/// `boundary . boundary = 0`.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    pub vertices: Vec<Vector>,
    /// `cells[d]` lists the `d`-cells.
    pub cells: Vec<Vec<Vec<usize>>>,
    /// `incidence[d][c]` = signed facets of `d`-cell `c` as
    /// `((d-1)-cell index, sign)`.
    incidence: Vec<Vec<Vec<(usize, i8)>>>,
}

impl SimplicialComplex {
    pub fn new(
        vertices: Vec<Vector>,
        mut cells: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, PlateauError> {
        for dim_cells in cells.iter_mut() {
            for c in dim_cells.iter_mut() {
                c.sort_unstable();
            }
            dim_cells.sort();
            dim_cells.dedup();
        }
        // nondegeneracy
        for (d, dim_cells) in cells.iter().enumerate() {
            if d == 0 {
                continue;
            }
            for (ci, c) in dim_cells.iter().enumerate() {
                let pts: Vec<Vector> = c.iter().map(|&i| vertices[i].clone()).collect();
                let vol = crate::geometry::simplex_volume(&pts)
                    .map_err(|e| PlateauError::Unsupported(e.to_string()))?;
                if vol <= 1e-12 {
                    return Err(PlateauError::DegenerateCell { dim: d, cell: ci });
                }
            }
        }
        // face closure + incidence
        let mut incidence: Vec<Vec<Vec<(usize, i8)>>> = vec![Vec::new()];
        for d in 1..cells.len() {
            let lower: BTreeMap<&[usize], usize> = cells[d - 1]
                .iter()
                .enumerate()
                .map(|(i, c)| (c.as_slice(), i))
                .collect();
            let mut inc_d = Vec::with_capacity(cells[d].len());
            for (ci, c) in cells[d].iter().enumerate() {
                let mut rows = Vec::with_capacity(c.len());
                for i in 0..c.len() {
                    let mut facet = c.clone();
                    facet.remove(i);
                    let idx = *lower
                        .get(facet.as_slice())
                        .ok_or(PlateauError::MissingFace { dim: d, cell: ci })?;
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    rows.push((idx, sign));
                }
                inc_d.push(rows);
            }
            incidence.push(inc_d);
        }
        let complex = SimplicialComplex {
            vertices,
            cells,
            incidence,
        };
        // boundary of boundary vanishes (integer check)
        for d in 2..complex.cells.len() {
            for c in 0..complex.cells[d].len() {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(f, s) in &complex.incidence[d][c] {
                    for &(e, t) in &complex.incidence[d - 1][f] {
                        *acc.entry(e).or_insert(0) += (s as i64) * (t as i64);
                    }
                }
                debug_assert!(acc.values().all(|&v| v == 0), "boundary squared nonzero");
            }
        }
        Ok(complex)
    }

    pub fn top_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cell_simplex(&self, d: usize, idx: usize) -> OrientedSimplex {
        OrientedSimplex::new(
            self.cells[d][idx]
                .iter()
                .map(|&i| self.vertices[i].clone())
                .collect(),
        )
    }

    /// Signed incidence of `d`-cells to `(d-1)`-cells.
    pub fn boundary_rows(&self, d: usize) -> &[Vec<(usize, i8)>] {
        &self.incidence[d]
    }

    /// Apply the boundary operator to a coefficient vector over `d`-cells.
    pub fn apply_boundary(
        &self,
        d: usize,
        group: CoefficientGroup,
        coeffs: &[Coeff],
    ) -> Vec<Coeff> {
        let mut out = vec![
            match group {
                CoefficientGroup::Reals => Coeff::Real(0.0),
                _ => Coeff::Int(0),
            };
            self.cells[d - 1].len()
        ];
        for (c, rows) in self.incidence[d].iter().enumerate() {
            for &(e, s) in rows {
                let signed = if s >= 0 {
                    coeffs[c]
                } else {
                    group.negate(coeffs[c])
                };
                out[e] = group.add(out[e], signed);
            }
        }
        out
    }

    /// The polyhedral chain carried by a coefficient vector over `d`-cells.
    pub fn chain_from_coefficients(
        &self,
        d: usize,
        group: CoefficientGroup,
        coeffs: &[Coeff],
    ) -> PolyhedralChain {
        let ambient = self.vertices.first().map_or(0, Vector::dim);
        let terms = coeffs
            .iter()
            .zip(0..)
            .filter(|(g, _)| !group.is_zero(**g))
            .map(|(g, i)| (*g, self.cell_simplex(d, i)))
            .collect();
        PolyhedralChain::from_terms(group, d, ambient, terms)
    }
}

// ---------------------------------------------------------------------------
// Chain programs
// ---------------------------------------------------------------------------

/// A mass-minimization instance over a complex: minimize
/// `sum_c w_c |g_c|` subject to `boundary g = B`.
#[derive(Clone, Debug)]
pub struct ChainProgram {
    pub complex: SimplicialComplex,
    pub norm: Norm,
    pub group: CoefficientGroup,
    pub dim: usize,
    /// `w_c = psi(W_c) vol(c)` per `m`-cell.
    pub weights: Vec<f64>,
    /// Exact rational `w_c / alpha(m)` on the crystalline path.
    pub weights_exact: Option<Vec<Rat>>,
    pub boundary_target: Vec<Coeff>,
}

/// Build the program; checks that the boundary data is a cycle and computes
/// positive cell weights (exact rationals when the norm is crystalline).
pub fn build_program(
    complex: SimplicialComplex,
    norm: Norm,
    group: CoefficientGroup,
    dim: usize,
    boundary_target: Vec<Coeff>,
) -> Result<ChainProgram, PlateauError> {
    if boundary_target.len() != complex.cells[dim - 1].len() {
        return Err(PlateauError::NotACycle(format!(
            "expected {} boundary coefficients",
            complex.cells[dim - 1].len()
        )));
    }
    let boundary_target: Vec<Coeff> = boundary_target
        .into_iter()
        .map(|c| group.coerce(c))
        .collect();
    if dim >= 2 {
        let down = complex.apply_boundary(dim - 1, group, &boundary_target);
        if down.iter().any(|g| !group.is_zero(*g)) {
            return Err(PlateauError::NotACycle("boundary of B is nonzero".into()));
        }
    } else {
        // dimension-0 cycle condition: total augmentation vanishes
        let mut acc = match group {
            CoefficientGroup::Reals => Coeff::Real(0.0),
            _ => Coeff::Int(0),
        };
        for g in &boundary_target {
            acc = group.add(acc, *g);
        }
        if !group.is_zero(acc) {
            return Err(PlateauError::NotACycle("augmentation of B is nonzero".into()));
        }
    }
    let mut weights = Vec::with_capacity(complex.cells[dim].len());
    let mut ratios: Option<Vec<Rat>> = Some(Vec::new());
    for i in 0..complex.cells[dim].len() {
        let s = complex.cell_simplex(dim, i);
        let w = s
            .direction()
            .map_err(|e| PlateauError::Unsupported(e.to_string()))?;
        let psi = norms::psi(&norm, &w)?;
        weights.push(psi * s.volume());
        if let Some(rs) = &mut ratios {
            match norms::exact::mass_ratio(&norm, &s.vertices) {
                Some(r) => rs.push(r),
                None => ratios = None,
            }
        }
    }
    Ok(ChainProgram {
        complex,
        norm,
        group,
        dim,
        weights,
        weights_exact: ratios,
        boundary_target,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SolveStatus {
    Optimal,
    OptimalLpRelaxation,
    TimeLimit,
}

#[derive(Clone, Debug)]
pub struct PlateauSolution {
    pub coefficients: Vec<Coeff>,
    pub mass: f64,
    /// Exact optimum as `rational * alpha(m)` on the crystalline path.
    pub mass_exact_ratio: Option<Rat>,
    pub status: SolveStatus,
    /// Lower bound from LP duality (equals `mass` at exact optimality).
    pub dual_bound: f64,
    /// `objective - duals . rhs` of the final LP; identically zero in exact
    /// arithmetic.
    pub duality_gap: f64,
}

/// Exact objective coefficients: the rational ratios when available,
/// otherwise exact dyadic conversions of the float weights.
fn exact_costs(prog: &ChainProgram) -> (Vec<Rat>, f64) {
    match &prog.weights_exact {
        Some(rs) => (rs.clone(), alpha(prog.dim)),
        None => (prog.weights.iter().map(|&w| rat(w)).collect(), 1.0),
    }
}

/// Solve the mass-minimization program with the exact rational simplex.
/// `G = R` is a pure LP; `G = Z` accepts the relaxation when it lands
/// integral and branches otherwise; `G = Z_q` uses symmetric representatives
/// `-floor(q/2) .. floor(q/2)` with integer multiples of `q` as slack.
pub fn solve(prog: &ChainProgram) -> Result<PlateauSolution, PlateauError> {
    let k = prog.complex.cells[prog.dim].len();
    let r = prog.complex.cells[prog.dim - 1].len();
    let (costs, scale) = exact_costs(prog);
    let cyclic_q = match prog.group {
        CoefficientGroup::Cyclic(q) => Some(q),
        _ => None,
    };
    // variables: g+ (k), g- (k), then for Z_q: s+ (r), s- (r)
    let num_vars = 2 * k + if cyclic_q.is_some() { 2 * r } else { 0 };
    let mut objective = vec![<Rat as LpScalar>::zero(); num_vars];
    for c in 0..k {
        objective[c] = costs[c].clone();
        objective[k + c] = costs[c].clone();
    }
    let mut rows: Vec<(Vec<(usize, Rat)>, RelOp, Rat)> = Vec::new();
    for e in 0..r {
        let mut coeffs: Vec<(usize, Rat)> = Vec::new();
        for (c, inc) in prog.complex.boundary_rows(prog.dim).iter().enumerate() {
            for &(ei, s) in inc {
                if ei == e {
                    let v = rat_i(s as i64);
                    coeffs.push((c, v.clone()));
                    coeffs.push((k + c, -v));
                }
            }
        }
        if let Some(q) = cyclic_q {
            coeffs.push((2 * k + e, rat_i(-(q as i64))));
            coeffs.push((2 * k + r + e, rat_i(q as i64)));
        }
        let rhs = coeff_to_rat(prog.group, prog.boundary_target[e]);
        rows.push((coeffs, RelOp::Eq, rhs));
    }
    if let Some(q) = cyclic_q {
        // symmetric representatives: |g| <= floor(q/2)
        let bound = rat_i((q / 2) as i64);
        for c in 0..k {
            rows.push((vec![(c, rat_i(1))], RelOp::Le, bound.clone()));
            rows.push((vec![(k + c, rat_i(1))], RelOp::Le, bound.clone()));
        }
    }
    let lp = LinearProgram {
        num_vars,
        objective,
        rows,
    };

    let to_solution = |x: &[Rat], obj: &Rat, status: SolveStatus, bound: &Rat, gap: Rat| {
        let coefficients: Vec<Coeff> = (0..k)
            .map(|c| {
                let v = x[c].clone() - x[k + c].clone();
                match prog.group {
                    CoefficientGroup::Reals => Coeff::Real(LpScalar::to_f64(&v)),
                    _ => prog
                        .group
                        .canon(Coeff::Int(v.to_integer().to_i64().unwrap_or(0))),
                }
            })
            .collect();
        PlateauSolution {
            coefficients,
            mass: LpScalar::to_f64(obj) * scale,
            mass_exact_ratio: prog.weights_exact.as_ref().map(|_| obj.clone()),
            status,
            dual_bound: LpScalar::to_f64(bound) * scale,
            duality_gap: LpScalar::to_f64(&gap) * scale,
        }
    };

    match prog.group {
        CoefficientGroup::Reals => {
            let sol = lp::solve(&lp);
            match sol.status {
                LpStatus::Optimal => {
                    // duality gap, exactly
                    let mut dual_val = <Rat as LpScalar>::zero();
                    for (d, row) in sol.duals.iter().zip(&lp.rows) {
                        dual_val = LpScalar::add(&dual_val, &LpScalar::mul(d, &row.2));
                    }
                    let gap = LpScalar::sub(&sol.objective, &dual_val);
                    Ok(to_solution(
                        &sol.x,
                        &sol.objective,
                        SolveStatus::Optimal,
                        &sol.objective,
                        gap,
                    ))
                }
                LpStatus::Infeasible => Err(PlateauError::Infeasible {
                    witness: sol.duals.iter().map(LpScalar::to_f64).collect(),
                }),
                LpStatus::Unbounded => {
                    Err(PlateauError::Unsupported("unbounded mass program".into()))
                }
            }
        }
        CoefficientGroup::Integers | CoefficientGroup::Cyclic(_) => {
            // integrality of g (and of the q-slacks)
            let mut exprs: Vec<Vec<(usize, Rat)>> = Vec::new();
            for c in 0..k {
                exprs.push(vec![(c, rat_i(1)), (k + c, rat_i(-1))]);
            }
            if cyclic_q.is_some() {
                for e in 0..r {
                    exprs.push(vec![(2 * k + e, rat_i(1)), (2 * k + r + e, rat_i(-1))]);
                }
            }
            let relax = lp::solve(&lp);
            if relax.status == LpStatus::Infeasible {
                return Err(PlateauError::Infeasible {
                    witness: relax.duals.iter().map(LpScalar::to_f64).collect(),
                });
            }
            let int = lp::solve_integer(&lp, &exprs, 24);
            match int.status {
                IntStatus::Infeasible => Err(PlateauError::Infeasible {
                    witness: relax.duals.iter().map(LpScalar::to_f64).collect(),
                }),
                IntStatus::Optimal => {
                    let gap = LpScalar::sub(&int.objective, &int.bound);
                    Ok(to_solution(
                        &int.x,
                        &int.objective,
                        SolveStatus::Optimal,
                        &int.bound,
                        gap,
                    ))
                }
                IntStatus::DepthLimited => {
                    let gap = LpScalar::sub(&int.objective, &int.bound);
                    Ok(to_solution(
                        &int.x,
                        &int.objective,
                        SolveStatus::OptimalLpRelaxation,
                        &int.bound,
                        gap,
                    ))
                }
            }
        }
    }
}

fn coeff_to_rat(group: CoefficientGroup, c: Coeff) -> Rat {
    match group.canon(c) {
        Coeff::Int(k) => rat_i(k),
        Coeff::Real(x) => rat(x),
    }
}

/// Simplicial flat norm of a coefficient vector over `m`-cells:
/// `min mass(Q) + mass(S)` over decompositions `P = Q + boundary S` inside
/// the complex, as an exact LP with real coefficients.
pub fn simplicial_flat_norm(
    complex: &SimplicialComplex,
    norm: &Norm,
    dim: usize,
    p: &[Coeff],
) -> Result<f64, PlateauError> {
    let group = CoefficientGroup::Reals;
    let k = complex.cells[dim].len();
    if dim + 1 > complex.top_dim() {
        return Err(PlateauError::Unsupported(
            "flat norm needs (m+1)-cells in the complex".into(),
        ));
    }
    let s_count = complex.cells[dim + 1].len();
    // weights for both dimensionsted
    let w_m: Vec<f64> = (0..k)
        .map(|i| {
            let s = complex.cell_simplex(dim, i);
            let w = s.direction().map_err(|e| PlateauError::Unsupported(e.to_string()))?;
            Ok::<f64, PlateauError>(norms::psi(norm, &w)? * s.volume())
        })
        .collect::<Result<_, _>>()?;
    let w_s: Vec<f64> = (0..s_count)
        .map(|i| {
            let s = complex.cell_simplex(dim + 1, i);
            let w = s.direction().map_err(|e| PlateauError::Unsupported(e.to_string()))?;
            Ok::<f64, PlateauError>(norms::psi(norm, &w)? * s.volume())
        })
        .collect::<Result<_, _>>()?;
    // variables: q+ (k), q- (k), s+ (s_count), s- (s_count)
    let num_vars = 2 * k + 2 * s_count;
    let mut objective = vec![<Rat as LpScalar>::zero(); num_vars];
    for c in 0..k {
        objective[c] = rat(w_m[c]);
        objective[k + c] = rat(w_m[c]);
    }
    for s in 0..s_count {
        objective[2 * k + s] = rat(w_s[s]);
        objective[2 * k + s_count + s] = rat(w_s[s]);
    }
    let mut rows: Vec<(Vec<(usize, Rat)>, RelOp, Rat)> = Vec::new();
    for c in 0..k {
        let mut coeffs: Vec<(usize, Rat)> = vec![(c, rat_i(1)), (k + c, rat_i(-1))];
        for (s, inc) in complex.boundary_rows(dim + 1).iter().enumerate() {
            for &(ci, sign) in inc {
                if ci == c {
                    coeffs.push((2 * k + s, rat_i(sign as i64)));
                    coeffs.push((2 * k + s_count + s, rat_i(-(sign as i64))));
                }
            }
        }
        rows.push((coeffs, RelOp::Eq, coeff_to_rat(group, p[c])));
    }
    let lp = LinearProgram {
        num_vars,
        objective,
        rows,
    };
    let sol = lp::solve(&lp);
    match sol.status {
        LpStatus::Optimal => Ok(LpScalar::to_f64(&sol.objective)),
        LpStatus::Infeasible => Err(PlateauError::Infeasible {
            witness: sol.duals.iter().map(LpScalar::to_f64).collect(),
        }),
        LpStatus::Unbounded => Err(PlateauError::Unsupported("unbounded flat norm".into())),
    }
}

// ---------------------------------------------------------------------------
// Support reduction
// ---------------------------------------------------------------------------

/// Compose halfspace retractions `rho_q` (identity inside `a . x <= b`,
/// translated Busemann projector onto the face hyperplane outside) over the
/// facets of a convex region `C`. Mass never increases, the boundary is
/// unchanged, and the output is supported in `C`. Requires
/// `supp(boundary T)` inside `C` and codimension 1 (ambient `R^3` here,
/// where chains are 2-dimensional and hyperplane splits are available).
pub fn support_reduction(
    t: &PolyhedralChain,
    halfspaces: &[(Vector, f64)],
    norm: &Norm,
) -> Result<PolyhedralChain, PlateauError> {
    let n = t.ambient;
    if t.dim != n - 1 {
        return Err(PlateauError::Unsupported(
            "support reduction applies to codimension-1 chains".into(),
        ));
    }
    let boundary = t.boundary();
    let tol = 1e-9;
    for v in boundary.support_vertices() {
        for (a, b) in halfspaces {
            if a.dot(v) > b + tol * (1.0 + b.abs()) {
                return Err(PlateauError::BoundaryOutsideRegion);
            }
        }
    }
    let mut current = t.clone();
    for (a, b) in halfspaces {
        let w = crate::geometry::hyperplane_orthogonal_to(a)?;
        let mu = busemann_projector(norm, &w)
            .map_err(|e| PlateauError::Unsupported(e.to_string()))?;
        let pi_lin = mu.atoms[0].1.matrix.clone();
        // affine shift: pi_aff(x) = pi_lin(x) + (b/|a|) * v / <n, v>, where
        // the kernel column is read off I - pi_lin
        let ker = {
            let mut best = Vector::zeros(n);
            let mut best_norm = 0.0;
            let eye = Matrix::identity(n);
            for j in 0..n {
                let col = eye.column(j).sub(&pi_lin.column(j));
                if col.norm2() > best_norm {
                    best_norm = col.norm2();
                    let nhat = a.scale(1.0 / a.norm2());
                    // col = (nhat_j / <nhat, v>) v  =>  v/<nhat,v> = col / nhat_j
                    best = col.scale(1.0 / nhat.0[j]);
                }
            }
            best
        };
        let shift = ker.scale(b / a.norm2());
        let pi_aff = AffineMap {
            linear: pi_lin,
            shift,
        };
        let split = current.split_by_hyperplane(a, *b)?;
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for (g, s) in split.terms {
            if a.dot(&s.barycenter()) <= *b {
                inside.push((g, s));
            } else {
                outside.push((g, s));
            }
        }
        let outside_chain =
            PolyhedralChain::from_terms(current.group, current.dim, n, outside);
        let projected = outside_chain.pushforward_affine(&pi_aff);
        let mut terms = inside;
        terms.extend(projected.terms);
        current = PolyhedralChain::from_terms(current.group, current.dim, n, terms);
        current = flatten_plane_terms(&current, a, *b)?;
    }
    // postconditions
    let mass_in = t.hausdorff_mass(norm)?;
    let mass_out = current.hausdorff_mass(norm)?;
    if mass_out > mass_in + 1e-9 * (1.0 + mass_in) {
        return Err(PlateauError::Unsupported(format!(
            "mass increased: {mass_out} > {mass_in}"
        )));
    }
    if !one_chains_equal(&current.boundary(), &boundary) {
        return Err(PlateauError::Unsupported(
            "support reduction changed the boundary".into(),
        ));
    }
    for v in current.support_vertices() {
        for (a, b) in halfspaces {
            if a.dot(v) > b + 1e-7 * (1.0 + b.abs()) {
                return Err(PlateauError::Unsupported(
                    "support reduction left the region".into(),
                ));
            }
        }
    }
    Ok(current)
}

/// Resolve overlaps among terms lying inside the plane `a . x = b`: overlay
/// the coplanar triangles, sum signed coefficients per overlay cell, and
/// re-triangulate. Terms off the plane pass through unchanged.
fn flatten_plane_terms(
    chain: &PolyhedralChain,
    a: &Vector,
    b: f64,
) -> Result<PolyhedralChain, PlateauError> {
    let n = chain.ambient;
    let tol = 1e-9 * (1.0 + b.abs());
    let mut in_plane: Vec<(Coeff, OrientedSimplex)> = Vec::new();
    let mut rest: Vec<(Coeff, OrientedSimplex)> = Vec::new();
    for (g, s) in &chain.terms {
        if s.vertices.iter().all(|v| (a.dot(v) - b).abs() <= tol) {
            in_plane.push((*g, s.clone()));
        } else {
            rest.push((*g, s.clone()));
        }
    }
    if in_plane.len() <= 1 {
        return Ok(chain.clone());
    }
    let w = crate::geometry::hyperplane_orthogonal_to(a)?;
    let origin = a.scale(b / a.dot(a));
    let to_2d = |v: &Vector| -> [f64; 2] {
        let c = w.coords(&v.sub(&origin));
        [c[0], c[1]]
    };
    let mut tris: Vec<[[f64; 2]; 3]> = Vec::new();
    let mut signed: Vec<Coeff> = Vec::new();
    for (g, s) in &in_plane {
        let t = [
            to_2d(&s.vertices[0]),
            to_2d(&s.vertices[1]),
            to_2d(&s.vertices[2]),
        ];
        let orient = crate::geometry::shoelace(&t);
        let g_oriented = if orient >= 0.0 {
            *g
        } else {
            chain.group.negate(*g)
        };
        tris.push(t);
        signed.push(g_oriented);
    }
    let cells = crate::geometry::triangle_overlay(&tris);
    let lift = |p: [f64; 2]| -> Vector { origin.add(&w.embed(&[p[0], p[1]])) };
    for cell in cells {
        let mut g = match chain.group {
            CoefficientGroup::Reals => Coeff::Real(0.0),
            _ => Coeff::Int(0),
        };
        for &ti in &cell.cover {
            g = chain.group.add(g, signed[ti]);
        }
        if chain.group.is_zero(g) {
            continue;
        }
        // trapezoid -> two CCW triangles, lifted back
        let q = cell.corners;
        for tri in [[q[0], q[1], q[2]], [q[0], q[2], q[3]]] {
            let area = crate::geometry::shoelace(&tri);
            if area.abs() <= 1e-14 {
                continue;
            }
            let coeff = if area >= 0.0 { g } else { chain.group.negate(g) };
            rest.push((
                coeff,
                OrientedSimplex::new(vec![lift(tri[0]), lift(tri[1]), lift(tri[2])]),
            ));
        }
    }
    Ok(PolyhedralChain::from_terms(
        chain.group,
        chain.dim,
        n,
        rest,
    ))
}

// ---------------------------------------------------------------------------
// Max-norm graph area
// ---------------------------------------------------------------------------

/// Values of a piecewise-linear function on the regular grid of
/// `[-1,1]^2` with `divisions` cells per side, row-major
/// `(divisions+1)^2` vertices; each grid square is split along its
/// up-diagonal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlGrid {
    pub divisions: usize,
    pub values: Vec<f64>,
}

impl PlGrid {
    pub fn zero(divisions: usize) -> Self {
        PlGrid {
            divisions,
            values: vec![0.0; (divisions + 1) * (divisions + 1)],
        }
    }

    pub fn coord(&self, i: usize) -> f64 {
        -1.0 + 2.0 * i as f64 / self.divisions as f64
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.divisions + 1) + i]
    }

    /// Worst per-triangle `|grad|_1` over the grid's triangulation.
    pub fn max_slope(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.divisions {
            for i in 0..self.divisions {
                for tri in self.cell_triangles(i, j) {
                    let vs: Vec<Vector> = tri
                        .iter()
                        .map(|&(a, b)| {
                            Vector(vec![self.coord(a), self.coord(b), self.value(a, b)])
                        })
                        .collect();
                    let g = triangle_gradient(&vs[0], &vs[1], &vs[2]);
                    worst = worst.max(g[0].abs() + g[1].abs());
                }
            }
        }
        worst
    }

    /// The two triangles of cell `(i, j)` as grid-index triples. Cells use
    /// the up-diagonal in the quadrants where `x y >= 0` and the
    /// anti-diagonal elsewhere, so diagonal creases of symmetric functions
    /// (like the max-norm distance to the boundary) align with cell edges.
    pub fn cell_triangles(&self, i: usize, j: usize) -> [[(usize, usize); 3]; 2] {
        let cx = self.coord(i) + 1.0 / self.divisions as f64;
        let cy = self.coord(j) + 1.0 / self.divisions as f64;
        if cx * cy >= 0.0 {
            [
                [(i, j), (i + 1, j), (i + 1, j + 1)],
                [(i, j), (i + 1, j + 1), (i, j + 1)],
            ]
        } else {
            [
                [(i, j), (i + 1, j), (i, j + 1)],
                [(i + 1, j), (i + 1, j + 1), (i, j + 1)],
            ]
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphMassReport {
    pub mass: f64,
    /// `mass / alpha(2)` as an exact rational when the whole sum stayed on
    /// the exact path.
    pub exact_ratio_times_alpha: Option<f64>,
    pub cells: usize,
}

/// Hausdorff mass under the max norm of the graph chain of `f` over
/// `[-1,1]^2`. For any `f` with per-cell slope `|df|_1 <= 1` vanishing on
/// the boundary this equals `alpha(2)`, independently of `f`; each cell's
/// contribution is evaluated on the exact rational path.
pub fn linf_graph_mass(grid: &PlGrid) -> Result<GraphMassReport, PlateauError> {
    let d = grid.divisions;
    let h = 2.0 / d as f64;
    // boundary values vanish
    for i in 0..=d {
        for &(x, y) in &[(i, 0), (i, d), (0, i), (d, i)] {
            if grid.value(x, y) != 0.0 {
                return Err(PlateauError::Unsupported(
                    "graph values must vanish on the boundary".into(),
                ));
            }
        }
    }
    let norm = Norm::linf(3);
    let mut ratio_total = Some(<Rat as LpScalar>::zero());
    let mut float_total = 0.0;
    let mut cells = 0;
    let lift = |(i, j): (usize, usize)| -> Vector {
        Vector(vec![grid.coord(i), grid.coord(j), grid.value(i, j)])
    };
    for j in 0..d {
        for i in 0..d {
            for (ci, tri) in grid.cell_triangles(i, j).iter().enumerate() {
                let vertices: Vec<Vector> = tri.iter().map(|&ij| lift(ij)).collect();
                // slope check: |grad|_1 <= 1 per triangle
                let grad = triangle_gradient(&vertices[0], &vertices[1], &vertices[2]);
                let slope = grad[0].abs() + grad[1].abs();
                if slope > 1.0 + 1e-9 {
                    return Err(PlateauError::LipschitzViolated {
                        cell: 2 * (j * d + i) + ci,
                        slope,
                    });
                }
                match (
                    &mut ratio_total,
                    norms::exact::mass_ratio(&norm, &vertices),
                ) {
                    (Some(acc), Some(r)) => *acc = LpScalar::add(acc, &r),
                    (slot, _) => *slot = None,
                }
                let s = OrientedSimplex::new(vertices);
                let w = s
                    .direction()
                    .map_err(|e| PlateauError::Unsupported(e.to_string()))?;
                float_total += norms::psi(&norm, &w)? * s.volume();
                cells += 1;
            }
        }
    }
    let _ = h;
    Ok(GraphMassReport {
        mass: ratio_total
            .as_ref()
            .map(|r| LpScalar::to_f64(r) * alpha(2))
            .unwrap_or(float_total),
        exact_ratio_times_alpha: ratio_total.as_ref().map(LpScalar::to_f64),
        cells,
    })
}

fn triangle_gradient(p0: &Vector, p1: &Vector, p2: &Vector) -> [f64; 2] {
    // solve [dx1 dy1; dx2 dy2] grad = [dz1; dz2]
    let (dx1, dy1, dz1) = (p1.0[0] - p0.0[0], p1.0[1] - p0.0[1], p1.0[2] - p0.0[2]);
    let (dx2, dy2, dz2) = (p2.0[0] - p0.0[0], p2.0[1] - p0.0[1], p2.0[2] - p0.0[2]);
    let det = dx1 * dy2 - dy1 * dx2;
    [(dz1 * dy2 - dz2 * dy1) / det, (dx1 * dz2 - dx2 * dz1) / det]
}

// ---------------------------------------------------------------------------
// Lower-semicontinuity harness
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct LscRow {
    pub j: usize,
    pub mass_p_j: f64,
    pub flat_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "camelCase")]
pub enum LscVerdict {
    /// `eta <= tol`: the subdivided masses never undercut `mass(P)`.
    NoDrop { eta: f64 },
    /// `eta > 0` (synthetic density): the measured drop at the largest `j`
    /// against the predicted `eta card I_j / j^m`.
    DropMatched {
        eta: f64,
        measured_drop: f64,
        predicted_drop: f64,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct LscHarnessReport {
    pub eta: f64,
    pub mass_p: f64,
    pub mass_q: f64,
    pub rows: Vec<LscRow>,
    pub verdict: LscVerdict,
}

/// Run the subdivide-and-replace sequence against a mass density (a genuine
/// norm or a synthetic non-contracting density) and report the masses, flat
/// bounds, and the verdict on the deficit mechanism.
pub fn lsc_harness(
    p: &PolyhedralChain,
    q: &PolyhedralChain,
    filling: Option<&PolyhedralChain>,
    j_list: &[usize],
    density: &mut dyn FnMut(&Subspace) -> Result<f64, crate::chains::ChainError>,
) -> Result<LscHarnessReport, PlateauError> {
    let tol = 1e-9;
    let mut rows = Vec::new();
    let mut eta = 0.0;
    let mut mass_p = 0.0;
    let mut mass_q = 0.0;
    let mut last: Option<crate::chains::LscStep> = None;
    for &j in j_list {
        let step = crate::chains::lsc_sequence(p, q, filling, j, density)?;
        eta = step.deficit;
        mass_p = step.mass_p;
        mass_q = step.mass_q;
        rows.push(LscRow {
            j,
            mass_p_j: step.mass_p_j,
            flat_bound: step.flat_bound,
        });
        last = Some(step);
    }
    let verdict = if eta <= tol {
        let min_mass = rows.iter().map(|r| r.mass_p_j).fold(f64::INFINITY, f64::min);
        if min_mass < mass_p - tol * (1.0 + mass_p) {
            return Err(PlateauError::Unsupported(format!(
                "mass dropped ({min_mass} < {mass_p}) although the deficit is {eta}"
            )));
        }
        LscVerdict::NoDrop { eta }
    } else {
        let step = last.expect("at least one j");
        let measured = step.mass_p - step.mass_p_j;
        let predicted =
            eta * step.card_index_set as f64 / (step.j as f64).powi(step.p_j.dim as i32);
        LscVerdict::DropMatched {
            eta,
            measured_drop: measured,
            predicted_drop: predicted,
        }
    };
    Ok(LscHarnessReport {
        eta,
        mass_p,
        mass_q,
        rows,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// JSON representation
// ---------------------------------------------------------------------------

/// Wire format `{"vertices":[[...]],"cells":{"2":[[i,j,k],...],...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub vertices: Vec<Vec<f64>>,
    pub cells: BTreeMap<String, Vec<Vec<usize>>>,
}

impl ComplexSpec {
    pub fn to_complex(&self) -> Result<SimplicialComplex, PlateauError> {
        let top: usize = self
            .cells
            .keys()
            .map(|k| k.parse::<usize>().unwrap_or(0))
            .max()
            .unwrap_or(0);
        let mut cells: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 1];
        // 0-cells are implicit
        cells[0] = (0..self.vertices.len()).map(|i| vec![i]).collect();
        for (k, v) in &self.cells {
            let d: usize = k
                .parse()
                .map_err(|_| PlateauError::Unsupported(format!("bad cell dimension key {k}")))?;
            if d > 0 {
                cells[d] = v.clone();
            }
        }
        SimplicialComplex::new(
            self.vertices.iter().map(|v| Vector(v.clone())).collect(),
            cells,
        )
    }

    pub fn from_complex(c: &SimplicialComplex) -> ComplexSpec {
        let mut cells = BTreeMap::new();
        for d in 1..c.cells.len() {
            cells.insert(d.to_string(), c.cells[d].clone());
        }
        ComplexSpec {
            vertices: c.vertices.iter().map(|v| v.0.clone()).collect(),
            cells,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionSpec {
    pub coefficients: Vec<serde_json::Value>,
    pub mass: f64,
    pub dual_bound: f64,
    pub duality_gap: f64,
    pub status: SolveStatus,
}

impl SolutionSpec {
    pub fn from_solution(s: &PlateauSolution) -> SolutionSpec {
        SolutionSpec {
            coefficients: s
                .coefficients
                .iter()
                .map(|c| match c {
                    Coeff::Int(k) => serde_json::json!(k),
                    Coeff::Real(x) => serde_json::json!(x),
                })
                .collect(),
            mass: s.mass,
            dual_bound: s.dual_bound,
            duality_gap: s.duality_gap,
            status: s.status,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn complex_validation() {
        // missing face
        let bad = SimplicialComplex::new(
            vec![
                Vector(vec![0.0, 0.0, 0.0]),
                Vector(vec![1.0, 0.0, 0.0]),
                Vector(vec![0.0, 1.0, 0.0]),
            ],
            vec![
                vec![vec![0], vec![1], vec![2]],
                vec![vec![0, 1]], // missing edges
                vec![vec![0, 1, 2]],
            ],
        );
        assert!(matches!(bad, Err(PlateauError::MissingFace { .. })));

        // degenerate cell
        let degen = SimplicialComplex::new(
            vec![
                Vector(vec![0.0, 0.0, 0.0]),
                Vector(vec![1.0, 0.0, 0.0]),
                Vector(vec![2.0, 0.0, 0.0]),
            ],
            vec![
                vec![vec![0], vec![1], vec![2]],
                vec![vec![0, 1], vec![1, 2], vec![0, 2]],
                vec![vec![0, 1, 2]],
            ],
        );
        assert!(matches!(degen, Err(PlateauError::DegenerateCell { .. })));
    }

    #[test]
    fn square_boundary_euclidean_flat_filling() {
        let (complex, boundary) = synth::cone_square_complex();
        let prog = build_program(
            complex,
            Norm::euclidean(3),
            CoefficientGroup::Reals,
            2,
            boundary,
        )
        .unwrap();
        let sol = solve(&prog).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.mass - 4.0).abs() < 1e-9, "mass {}", sol.mass);
        assert!(sol.duality_gap.abs() < 1e-12, "gap {}", sol.duality_gap);
        // support: exactly the flat cells (those in the z = 0 plane)
        for (i, c) in sol.coefficients.iter().enumerate() {
            let flat = prog.complex.cells[2][i]
                .iter()
                .all(|&v| prog.complex.vertices[v].0[2] == 0.0);
            assert_eq!(!prog.group.is_zero(*c), flat, "cell {i} coefficient {c:?}");
        }
    }

    #[test]
    fn square_boundary_linf_mass_is_pi() {
        let (complex, boundary) = synth::cone_square_complex();
        for group in [CoefficientGroup::Integers, CoefficientGroup::Cyclic(2)] {
            let prog =
                build_program(complex.clone(), Norm::linf(3), group, 2, boundary.clone())
                    .unwrap();
            let sol = solve(&prog).unwrap();
            assert_eq!(sol.status, SolveStatus::Optimal);
            assert!(
                (sol.mass - std::f64::consts::PI).abs() < 1e-9,
                "mass {} for {group:?}",
                sol.mass
            );
            assert!(sol.duality_gap.abs() < 1e-12);
            // exact path: optimum is exactly 1 * alpha(2)
            let ratio = sol.mass_exact_ratio.clone().unwrap();
            assert_eq!(ratio, rat_i(1));
            for (i, c) in sol.coefficients.iter().enumerate() {
                let flat = prog.complex.cells[2][i]
                    .iter()
                    .all(|&v| prog.complex.vertices[v].0[2] == 0.0);
                assert_eq!(
                    !prog.group.is_zero(*c),
                    flat,
                    "cell {i} coefficient {c:?} for {group:?}"
                );
            }
        }
    }

    #[test]
    fn zero_boundary_gives_zero_chain() {
        let (complex, boundary) = synth::cone_square_complex();
        let zeros = vec![Coeff::Int(0); boundary.len()];
        let prog = build_program(
            complex,
            Norm::euclidean(3),
            CoefficientGroup::Integers,
            2,
            zeros,
        )
        .unwrap();
        let sol = solve(&prog).unwrap();
        assert_eq!(sol.mass, 0.0);
        assert!(sol.coefficients.iter().all(|c| prog.group.is_zero(*c)));
    }

    #[test]
    fn infeasible_boundary_has_witness() {
        // a single edge's worth of boundary that is not a cycle gets caught
        let (complex, _) = synth::cone_square_complex();
        let mut bad = vec![Coeff::Int(0); complex.cells[1].len()];
        bad[0] = Coeff::Int(1);
        let err = build_program(
            complex,
            Norm::euclidean(3),
            CoefficientGroup::Integers,
            2,
            bad,
        );
        assert!(matches!(err, Err(PlateauError::NotACycle(_))));
    }

    #[test]
    fn flat_norm_basic_properties() {
        let (complex, _) = synth::cone_square_complex();
        let norm = Norm::euclidean(3);
        let k = complex.cells[2].len();
        // zero chain
        let zero = vec![Coeff::Real(0.0); k];
        assert_eq!(simplicial_flat_norm(&complex, &norm, 2, &zero).unwrap(), 0.0);

        // P = boundary of a 3-cell: flat norm at most the cell's volume
        let s_cells = complex.cells[3].len();
        assert!(s_cells > 0);
        let mut p = vec![Coeff::Real(0.0); k];
        for &(c, s) in &complex.boundary_rows(3)[0] {
            p[c] = Coeff::Real(s as f64);
        }
        let f = simplicial_flat_norm(&complex, &norm, 2, &p).unwrap();
        let cell_vol = complex.cell_simplex(3, 0).volume();
        assert!(f <= cell_vol + 1e-9, "flat {f} vs fill {cell_vol}");

        // F(P) <= M(P)
        let chain = complex.chain_from_coefficients(2, CoefficientGroup::Reals, &p);
        let mass = chain.hausdorff_mass(&norm).unwrap();
        assert!(f <= mass + 1e-9);

        // triangle inequality on coefficient vectors
        let mut p2 = vec![Coeff::Real(0.0); k];
        p2[0] = Coeff::Real(1.0);
        let f2 = simplicial_flat_norm(&complex, &norm, 2, &p2).unwrap();
        let sum: Vec<Coeff> = (0..k)
            .map(|i| {
                let (Coeff::Real(a), Coeff::Real(b)) = (p[i], p2[i]) else {
                    unreachable!()
                };
                Coeff::Real(a + b)
            })
            .collect();
        let fsum = simplicial_flat_norm(&complex, &norm, 2, &sum).unwrap();
        assert!(fsum <= f + f2 + 1e-9);
    }

    #[test]
    fn support_reduction_identity_inside() {
        let norm = Norm::linf(3);
        // a flat triangle well inside the box
        let t = PolyhedralChain::simplex(
            CoefficientGroup::Integers,
            Coeff::Int(1),
            OrientedSimplex::new(vec![
                Vector(vec![0.1, 0.1, 0.0]),
                Vector(vec![0.4, 0.1, 0.0]),
                Vector(vec![0.1, 0.4, 0.0]),
            ]),
        );
        let cube = synth::box_halfspaces(1.0);
        let out = support_reduction(&t, &cube, &norm).unwrap();
        assert!(out.equals(&t), "chain inside C is unchanged");
    }

    #[test]
    fn support_reduction_flattens_tent() {
        let norm = Norm::linf(3);
        // tent over the square boundary, apex poking out the top
        let t = synth::tent_chain(1.8);
        let cube = synth::box_halfspaces(1.0);
        let mass_in = t.hausdorff_mass(&norm).unwrap();
        let out = support_reduction(&t, &cube, &norm).unwrap();
        let mass_out = out.hausdorff_mass(&norm).unwrap();
        assert!(mass_out <= mass_in + 1e-9, "{mass_out} vs {mass_in}");
        assert!(mass_out < mass_in - 1e-6, "projection strictly flattens");
        assert!(one_chains_equal(&out.boundary(), &t.boundary()));
        // idempotent on its output
        let again = support_reduction(&out, &cube, &norm).unwrap();
        let mass_again = again.hausdorff_mass(&norm).unwrap();
        assert!((mass_again - mass_out).abs() < 1e-9);
    }

    #[test]
    fn support_reduction_rejects_bad_boundary() {
        let norm = Norm::linf(3);
        let t = synth::tent_chain(0.5);
        // region that does not contain the square boundary
        let tiny = synth::box_halfspaces(0.2);
        assert!(matches!(
            support_reduction(&t, &tiny, &norm),
            Err(PlateauError::BoundaryOutsideRegion)
        ));
    }

    #[test]
    fn graph_mass_zero_function_is_pi() {
        let grid = PlGrid::zero(8);
        let report = linf_graph_mass(&grid).unwrap();
        assert!(
            (report.mass - std::f64::consts::PI).abs() < 1e-12,
            "mass {}",
            report.mass
        );
        assert!((report.exact_ratio_times_alpha.unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn graph_mass_pyramid_is_pi() {
        // f = max-norm distance to the boundary of the square
        let d = 16;
        let mut grid = PlGrid::zero(d);
        for j in 0..=d {
            for i in 0..=d {
                let x: f64 = -1.0 + 2.0 * i as f64 / d as f64;
                let y: f64 = -1.0 + 2.0 * j as f64 / d as f64;
                grid.values[j * (d + 1) + i] = (1.0 - x.abs()).min(1.0 - y.abs());
            }
        }
        let report = linf_graph_mass(&grid).unwrap();
        assert!(
            (report.mass - std::f64::consts::PI).abs() < 1e-9,
            "mass {}",
            report.mass
        );
    }

    #[test]
    fn graph_mass_rejects_steep_functions() {
        let d = 4;
        let mut grid = PlGrid::zero(d);
        grid.values[(d / 2) * (d + 1) + d / 2] = 3.0;
        assert!(matches!(
            linf_graph_mass(&grid),
            Err(PlateauError::LipschitzViolated { .. })
        ));
    }

    #[test]
    fn lsc_harness_euclidean_no_drop() {
        let sigma = OrientedSimplex::new(vec![
            Vector(vec![0.0, 0.0, 0.0]),
            Vector(vec![2.0, 0.0, 0.0]),
            Vector(vec![0.0, 2.0, 0.0]),
        ]);
        let p = PolyhedralChain::simplex(CoefficientGroup::Integers, Coeff::Int(1), sigma);
        let q = p.boundary().cone(&Vector(vec![0.7, 0.7, 0.9]));
        let mut density = |w: &Subspace| {
            norms::psi(&Norm::euclidean(3), w)
                .map_err(|e| crate::chains::ChainError::Unsupported(e.to_string()))
        };
        let report = lsc_harness(&p, &q, None, &[2, 4, 8, 16], &mut density).unwrap();
        assert!(report.eta < 0.0);
        assert!(matches!(report.verdict, LscVerdict::NoDrop { .. }));
    }

    #[test]
    fn complex_spec_roundtrip() {
        let (complex, _) = synth::cone_square_complex();
        let spec = ComplexSpec::from_complex(&complex);
        let json = serde_json::to_string(&spec).unwrap();
        let back: ComplexSpec = serde_json::from_str(&json).unwrap();
        let c2 = back.to_complex().unwrap();
        assert_eq!(c2.cells[2].len(), complex.cells[2].len());
        assert_eq!(c2.cells[3].len(), complex.cells[3].len());
    }
}
