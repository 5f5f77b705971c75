//! Polyhedral chains with coefficients in a normed Abelian group.
//!
//! A chain is a normalized formal sum of oriented simplices: simplices are
//! keyed by their sorted vertex tuple, orientation is absorbed into the
//! coefficient sign, zero coefficients and degenerate simplices are dropped.
//! Coefficient groups: the integers, cyclic groups `Z_q` with the norm
//! `min(k, q-k)`, and the reals.
//!
//! Operations: boundary, Hausdorff mass for a norm, pushforward under linear
//! and affine maps, 0-dimensional slices, cones, hyperplane splitting, the
//! edgewise subdivision maps, and the subdivide-and-replace sequence that
//! witnesses failure of lower semicontinuity for non-contracting densities.

use crate::geometry::{
    simplex_volume, AffineMap, GeometryError, Matrix, Subspace, Vector,
};
use crate::norms::{self, Norm};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum ChainError {
    GroupMismatch,
    DimensionMismatch { expected: usize, got: usize },
    NotACycle(String),
    Unsupported(String),
    Geometry(GeometryError),
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::GroupMismatch => write!(f, "coefficient groups differ"),
            ChainError::DimensionMismatch { expected, got } => {
                write!(f, "chain dimension mismatch: expected {expected}, got {got}")
            }
            ChainError::NotACycle(s) => write!(f, "cycle condition violated: {s}"),
            ChainError::Unsupported(s) => write!(f, "unsupported: {s}"),
            ChainError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ChainError {}

impl From<GeometryError> for ChainError {
    fn from(e: GeometryError) -> Self {
        ChainError::Geometry(e)
    }
}

// ---------------------------------------------------------------------------
// Coefficient groups
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientGroup {
    Integers,
    /// `Z_q`, `q >= 2`, with the norm `min(k, q - k)`.
    Cyclic(u64),
    Reals,
}

/// A group element; `Int` carries `Z` and canonical `Z_q` representatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coeff {
    Int(i64),
    Real(f64),
}

impl CoefficientGroup {
    pub fn canon(&self, c: Coeff) -> Coeff {
        match (self, c) {
            (CoefficientGroup::Cyclic(q), Coeff::Int(k)) => {
                Coeff::Int(k.rem_euclid(*q as i64))
            }
            _ => c,
        }
    }

    /// Bring a coefficient into this group's representation (integers embed
    /// into the reals; exact-integer reals collapse to integers).
    pub fn coerce(&self, c: Coeff) -> Coeff {
        match (self, c) {
            (CoefficientGroup::Reals, Coeff::Int(k)) => Coeff::Real(k as f64),
            (CoefficientGroup::Reals, c) => c,
            (_, Coeff::Real(x)) => self.canon(Coeff::Int(x.round() as i64)),
            (_, c) => self.canon(c),
        }
    }

    pub fn add(&self, a: Coeff, b: Coeff) -> Coeff {
        match (a, b) {
            (Coeff::Int(x), Coeff::Int(y)) => self.canon(Coeff::Int(x + y)),
            (Coeff::Real(x), Coeff::Real(y)) => Coeff::Real(x + y),
            _ => panic!("mixed coefficient representations"),
        }
    }

    pub fn negate(&self, a: Coeff) -> Coeff {
        match a {
            Coeff::Int(x) => self.canon(Coeff::Int(-x)),
            Coeff::Real(x) => Coeff::Real(-x),
        }
    }

    pub fn is_zero(&self, a: Coeff) -> bool {
        match self.canon(a) {
            Coeff::Int(x) => x == 0,
            // real coefficients come out of LP solves; exact zeros survive,
            // anything at roundoff scale is treated as zero
            Coeff::Real(x) => x.abs() <= 1e-14,
        }
    }

    /// The group norm.
    pub fn norm(&self, a: Coeff) -> f64 {
        match (self, self.canon(a)) {
            (CoefficientGroup::Cyclic(q), Coeff::Int(k)) => {
                let k = k as u64;
                k.min(q - k) as f64
            }
            (_, Coeff::Int(k)) => k.abs() as f64,
            (_, Coeff::Real(x)) => x.abs(),
        }
    }

    fn scale_sign(&self, a: Coeff, sign: i64) -> Coeff {
        if sign >= 0 {
            self.canon(a)
        } else {
            self.negate(a)
        }
    }
}

// ---------------------------------------------------------------------------
// Oriented simplices
// ---------------------------------------------------------------------------

/// An oriented `m`-simplex: `m + 1` vertices whose order is the orientation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientedSimplex {
    pub vertices: Vec<Vector>,
}

impl OrientedSimplex {
    pub fn new(vertices: Vec<Vector>) -> Self {
        OrientedSimplex { vertices }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn volume(&self) -> f64 {
        simplex_volume(&self.vertices).unwrap_or(0.0)
    }

    /// Direction subspace spanned by the edges.
    pub fn direction(&self) -> Result<Subspace, GeometryError> {
        let edges: Vec<Vector> = self.vertices[1..]
            .iter()
            .map(|v| v.sub(&self.vertices[0]))
            .collect();
        crate::geometry::orthonormalize(&edges)
    }

    pub fn barycenter(&self) -> Vector {
        let n = self.vertices[0].dim();
        self.vertices
            .iter()
            .fold(Vector::zeros(n), |acc, v| acc.add(v))
            .scale(1.0 / self.vertices.len() as f64)
    }

    fn max_edge(&self) -> f64 {
        let mut best = 0.0_f64;
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                best = best.max(self.vertices[i].sub(&self.vertices[j]).norm2());
            }
        }
        best
    }

    /// Sorted-vertex canonical form and the parity sign of the sorting
    /// permutation.
    fn canonical(&self) -> (Vec<Vector>, i64) {
        let mut idx: Vec<usize> = (0..self.vertices.len()).collect();
        idx.sort_by(|&a, &b| cmp_vertices(&self.vertices[a], &self.vertices[b]));
        let mut sign = 1i64;
        // parity by counting inversions
        for i in 0..idx.len() {
            for j in i + 1..idx.len() {
                if idx[i] > idx[j] {
                    sign = -sign;
                }
            }
        }
        (
            idx.iter().map(|&i| self.vertices[i].clone()).collect(),
            sign,
        )
    }
}

fn cmp_vertices(a: &Vector, b: &Vector) -> std::cmp::Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        let c = x.total_cmp(y);
        if c != std::cmp::Ordering::Equal {
            return c;
        }
    }
    std::cmp::Ordering::Equal
}

fn vertex_key(vs: &[Vector]) -> Vec<u64> {
    vs.iter()
        .flat_map(|v| v.0.iter().map(|x| x.to_bits()))
        .collect()
}

// ---------------------------------------------------------------------------
// Polyhedral chains
// ---------------------------------------------------------------------------

/// Normalized polyhedral chain. Terms hold sorted-vertex simplices; vertex
/// permutations are absorbed into coefficient signs on construction.
/// Dimension 0 chains are sums of weighted points (simplices with a single
/// vertex).
#[derive(Clone, Debug)]
pub struct PolyhedralChain {
    pub dim: usize,
    pub ambient: usize,
    pub group: CoefficientGroup,
    pub terms: Vec<(Coeff, OrientedSimplex)>,
}

impl PolyhedralChain {
    pub fn zero(group: CoefficientGroup, dim: usize, ambient: usize) -> Self {
        PolyhedralChain {
            dim,
            ambient,
            group,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(
        group: CoefficientGroup,
        dim: usize,
        ambient: usize,
        terms: Vec<(Coeff, OrientedSimplex)>,
    ) -> Self {
        let mut c = PolyhedralChain {
            dim,
            ambient,
            group,
            terms,
        };
        c.normalize();
        c
    }

    /// Single-term chain.
    pub fn simplex(group: CoefficientGroup, g: Coeff, simplex: OrientedSimplex) -> Self {
        let ambient = simplex.vertices[0].dim();
        PolyhedralChain::from_terms(group, simplex.dim(), ambient, vec![(g, simplex)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical form: merge equal sorted-vertex simplices with signed
    /// coefficients, drop zeros and degenerate simplices. Idempotent and
    /// independent of term order.
    pub fn normalize(&mut self) {
        let mut map: BTreeMap<Vec<u64>, (Coeff, Vec<Vector>)> = BTreeMap::new();
        for (g, s) in self.terms.drain(..) {
            if self.group.is_zero(g) {
                continue;
            }
            if self.dim >= 1 {
                let vol = s.volume();
                let scale = s.max_edge().powi(self.dim as i32);
                if vol <= 1e-12 * scale.max(1e-300) {
                    continue;
                }
            }
            let (sorted, sign) = s.canonical();
            let key = vertex_key(&sorted);
            let signed = self.group.scale_sign(g, sign);
            match map.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert((signed, sorted));
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let (acc, _) = e.get_mut();
                    *acc = self.group.add(*acc, signed);
                }
            }
        }
        self.terms = map
            .into_values()
            .filter(|(g, _)| !self.group.is_zero(*g))
            .map(|(g, vs)| (g, OrientedSimplex::new(vs)))
            .collect();
    }

    pub fn add(&self, other: &PolyhedralChain) -> Result<PolyhedralChain, ChainError> {
        if self.group != other.group {
            return Err(ChainError::GroupMismatch);
        }
        if self.dim != other.dim && !self.is_zero() && !other.is_zero() {
            return Err(ChainError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(PolyhedralChain::from_terms(
            self.group,
            self.dim.max(other.dim),
            self.ambient.max(other.ambient),
            terms,
        ))
    }

    pub fn negate(&self) -> PolyhedralChain {
        PolyhedralChain {
            dim: self.dim,
            ambient: self.ambient,
            group: self.group,
            terms: self
                .terms
                .iter()
                .map(|(g, s)| (self.group.negate(*g), s.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &PolyhedralChain) -> Result<PolyhedralChain, ChainError> {
        self.add(&other.negate())
    }

    /// Chains are equal iff their normalized term lists coincide exactly.
    pub fn equals(&self, other: &PolyhedralChain) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms.iter().zip(&other.terms).all(|((g, s), (h, t))| {
            g == h && vertex_key(&s.vertices) == vertex_key(&t.vertices)
        })
    }

    /// Alternating-sign facet sum; `boundary . boundary = 0`.
    pub fn boundary(&self) -> PolyhedralChain {
        assert!(self.dim >= 1, "boundary of a 0-chain");
        let mut terms = Vec::new();
        for (g, s) in &self.terms {
            for i in 0..s.vertices.len() {
                let mut facet = s.vertices.clone();
                facet.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                terms.push((self.group.scale_sign(*g, sign), OrientedSimplex::new(facet)));
            }
        }
        PolyhedralChain::from_terms(self.group, self.dim - 1, self.ambient, terms)
    }

    /// Hausdorff mass `sum |g_k| psi(W_k) vol(sigma_k)`. For 0-chains this is
    /// the sum of coefficient norms.
    pub fn hausdorff_mass(&self, norm: &Norm) -> Result<f64, ChainError> {
        self.mass_with_density(&mut |w: &Subspace| norms::psi(norm, w).map_err(chain_err))
    }

    /// Mass against an arbitrary density on the Grassmannian.
    pub fn mass_with_density(
        &self,
        density: &mut dyn FnMut(&Subspace) -> Result<f64, ChainError>,
    ) -> Result<f64, ChainError> {
        if self.dim == 0 {
            return Ok(self
                .terms
                .iter()
                .map(|(g, _)| self.group.norm(*g))
                .sum());
        }
        let mut memo: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (g, s) in &self.terms {
            let w = s.direction()?;
            let key = w.fingerprint();
            let psi = match memo.get(&key) {
                Some(&v) => v,
                None => {
                    let v = density(&w)?;
                    memo.insert(key, v);
                    v
                }
            };
            total += self.group.norm(*g) * psi * s.volume();
        }
        Ok(total)
    }

    /// Exact rational `mass / alpha(m)` for crystalline norms (`m <= 2` or
    /// full-dimensional cells); `None` when no exact path exists.
    pub fn hausdorff_mass_ratio_exact(&self, norm: &Norm) -> Option<crate::geometry::Rat> {
        use num_traits::Zero;
        let mut total = crate::geometry::Rat::zero();
        for (g, s) in &self.terms {
            let ratio = norms::exact::mass_ratio(norm, &s.vertices)?;
            let gn = match self.group.canon(*g) {
                Coeff::Int(k) => {
                    let k = match self.group {
                        CoefficientGroup::Cyclic(q) => (k as u64).min(q - k as u64) as i64,
                        _ => k.abs(),
                    };
                    crate::geometry::rat_i(k)
                }
                Coeff::Real(x) => {
                    let r = crate::geometry::rat(x);
                    if x < 0.0 {
                        -r
                    } else {
                        r
                    }
                }
            };
            total += gn * ratio;
        }
        Some(total)
    }

    /// Pushforward under a linear map: vertices mapped, degenerate images
    /// dropped, coincident images merged with signs. Commutes with boundary.
    pub fn pushforward_linear(&self, map: &Matrix) -> PolyhedralChain {
        let terms = self
            .terms
            .iter()
            .map(|(g, s)| {
                (
                    *g,
                    OrientedSimplex::new(s.vertices.iter().map(|v| map.matvec(v)).collect()),
                )
            })
            .collect();
        PolyhedralChain::from_terms(self.group, self.dim, map.rows, terms)
    }

    pub fn pushforward_affine(&self, map: &AffineMap) -> PolyhedralChain {
        let terms = self
            .terms
            .iter()
            .map(|(g, s)| {
                (
                    *g,
                    OrientedSimplex::new(s.vertices.iter().map(|v| map.apply(v)).collect()),
                )
            })
            .collect();
        PolyhedralChain::from_terms(self.group, self.dim, map.linear.rows, terms)
    }

    /// Mass of the 0-dimensional slice over `y`:
    /// `sum |g_k| [y in pi(sigma_k)]`. Points on a projected facet skeleton
    /// are flagged rather than resolved.
    pub fn slice_mass(&self, pi: &Matrix, y: &Vector) -> SliceMass {
        let mut value = 0.0;
        let mut boundary_hit = false;
        let eps = 1e-9;
        for (g, s) in &self.terms {
            let image: Vec<Vector> = s.vertices.iter().map(|v| pi.matvec(v)).collect();
            let vol = simplex_volume(&image).unwrap_or(0.0);
            let scale = image
                .iter()
                .map(Vector::norm2)
                .fold(1.0_f64, f64::max);
            if vol <= 1e-12 * scale.powi(self.dim as i32) {
                continue;
            }
            match barycentric(&image, y) {
                Some(coords) => {
                    let sum: f64 = coords.iter().sum();
                    let inside =
                        coords.iter().all(|&t| t >= -eps) && sum <= 1.0 + eps;
                    let near_face = coords.iter().any(|&t| t.abs() <= eps)
                        || (sum - 1.0).abs() <= eps;
                    if inside {
                        if near_face {
                            boundary_hit = true;
                        }
                        value += self.group.norm(*g);
                    }
                }
                None => continue,
            }
        }
        SliceMass {
            value,
            boundary_hit,
        }
    }

    /// `int M(<P, pi, y>) dH^m(y)` for a single rank-`m` map:
    /// `sum |g_k| H^m(pi(sigma_k))`, exact through the density of the image
    /// plane.
    pub fn slice_integral(&self, pi: &Matrix, norm: &Norm) -> Result<f64, ChainError> {
        let mut memo: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (g, s) in &self.terms {
            let image: Vec<Vector> = s.vertices.iter().map(|v| pi.matvec(v)).collect();
            let vol = simplex_volume(&image).unwrap_or(0.0);
            if vol <= 0.0 {
                continue;
            }
            let simplex = OrientedSimplex::new(image);
            let w = match simplex.direction() {
                Ok(w) => w,
                Err(_) => continue,
            };
            let key = w.fingerprint();
            let psi = match memo.get(&key) {
                Some(&v) => v,
                None => {
                    let v = norms::psi(norm, &w).map_err(chain_err)?;
                    memo.insert(key, v);
                    v
                }
            };
            total += self.group.norm(*g) * psi * vol;
        }
        Ok(total)
    }

    /// Cone from an apex. Terms whose affine span contains the apex come out
    /// degenerate and are dropped by normalization. For `m >= 1`,
    /// `boundary(cone(a, P)) = P - cone(a, boundary(P))`; for 0-chains,
    /// `boundary(cone(a, Z)) = Z - (sum g) delta_a`.
    pub fn cone(&self, apex: &Vector) -> PolyhedralChain {
        let terms = self
            .terms
            .iter()
            .map(|(g, s)| {
                let mut vs = Vec::with_capacity(s.vertices.len() + 1);
                vs.push(apex.clone());
                vs.extend(s.vertices.iter().cloned());
                (*g, OrientedSimplex::new(vs))
            })
            .collect();
        PolyhedralChain::from_terms(self.group, self.dim + 1, self.ambient, terms)
    }

    /// Subdivide every simplex so each piece lies in `{a.x <= b}` or
    /// `{a.x >= b}`; set, coefficients, mass and boundary are preserved.
    /// Supported for chains of dimension 1 and 2.
    pub fn split_by_hyperplane(&self, a: &Vector, b: f64) -> Result<PolyhedralChain, ChainError> {
        if self.dim > 2 {
            return Err(ChainError::Unsupported(
                "hyperplane split for dim > 2".into(),
            ));
        }
        let mut terms: Vec<(Coeff, OrientedSimplex)> = Vec::new();
        for (g, s) in &self.terms {
            for piece in split_simplex(s, a, b)? {
                terms.push((*g, piece));
            }
        }
        Ok(PolyhedralChain::from_terms(
            self.group,
            self.dim,
            self.ambient,
            terms,
        ))
    }

    /// Restriction to the closed halfspace: split, then keep pieces whose
    /// barycenter satisfies the constraint.
    pub fn restrict_halfspace(&self, a: &Vector, b: f64) -> Result<PolyhedralChain, ChainError> {
        let split = self.split_by_hyperplane(a, b)?;
        let terms = split
            .terms
            .into_iter()
            .filter(|(_, s)| a.dot(&s.barycenter()) <= b)
            .collect();
        Ok(PolyhedralChain::from_terms(
            self.group,
            self.dim,
            self.ambient,
            terms,
        ))
    }

    /// Support points (all vertices of all terms).
    pub fn support_vertices(&self) -> Vec<&Vector> {
        self.terms
            .iter()
            .flat_map(|(_, s)| s.vertices.iter())
            .collect()
    }

    /// Pairwise interior-intersection test between distinct terms (the
    /// debug-mode overlap check behind mass computations). Quadratic in the
    /// number of terms; `m <= 2` only. Returns the first overlapping pair.
    pub fn find_overlap(&self) -> Option<(usize, usize)> {
        if self.dim == 0 || self.dim > 2 {
            return None;
        }
        for i in 0..self.terms.len() {
            for j in i + 1..self.terms.len() {
                if simplices_overlap(&self.terms[i].1, &self.terms[j].1) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Positive-measure intersection test for same-dimension simplices.
fn simplices_overlap(a: &OrientedSimplex, b: &OrientedSimplex) -> bool {
    let m = a.dim();
    let wa = match a.direction() {
        Ok(w) => wa_key(&w),
        Err(_) => return false,
    };
    let wb = match b.direction() {
        Ok(w) => wa_key(&w),
        Err(_) => return false,
    };
    if wa != wb {
        return false;
    }
    // same direction plane: also require the same affine offset
    let w = a.direction().unwrap();
    let off_a = a.vertices[0].sub(&w.project(&a.vertices[0]));
    let off_b = b.vertices[0].sub(&w.project(&b.vertices[0]));
    if off_a.sub(&off_b).norm2() > 1e-9 * (1.0 + off_a.norm2()) {
        return false;
    }
    match m {
        1 => {
            let d = &w.basis()[0];
            let (a0, a1) = (d.dot(&a.vertices[0]), d.dot(&a.vertices[1]));
            let (b0, b1) = (d.dot(&b.vertices[0]), d.dot(&b.vertices[1]));
            let (alo, ahi) = (a0.min(a1), a0.max(a1));
            let (blo, bhi) = (b0.min(b1), b0.max(b1));
            ahi.min(bhi) - alo.max(blo) > 1e-9
        }
        2 => {
            let tri = |s: &OrientedSimplex| -> [[f64; 2]; 3] {
                let c: Vec<[f64; 2]> = s
                    .vertices
                    .iter()
                    .map(|v| {
                        let t = w.coords(v);
                        [t[0], t[1]]
                    })
                    .collect();
                [c[0], c[1], c[2]]
            };
            let (ta, tb) = (tri(a), tri(b));
            let union = crate::geometry::union_area(&[ta, tb]);
            let sum = crate::geometry::shoelace(&ta).abs() + crate::geometry::shoelace(&tb).abs();
            sum - union > 1e-9 * sum.max(1e-9)
        }
        _ => false,
    }
}

fn wa_key(w: &Subspace) -> Vec<i64> {
    w.fingerprint()
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SliceMass {
    pub value: f64,
    /// `y` lay on a projected facet within tolerance; the caller should
    /// perturb or use the integral form.
    pub boundary_hit: bool,
}

fn chain_err(e: norms::NormError) -> ChainError {
    ChainError::Unsupported(e.to_string())
}

/// Barycentric coordinates of `y` in the simplex (least squares through the
/// Gram matrix); `None` when `y` is off the affine span.
fn barycentric(simplex: &[Vector], y: &Vector) -> Option<Vec<f64>> {
    let m = simplex.len() - 1;
    let edges: Vec<Vector> = simplex[1..].iter().map(|v| v.sub(&simplex[0])).collect();
    let rhs_vec = y.sub(&simplex[0]);
    let mut gram = Matrix::zeros(m, m);
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        for j in 0..m {
            gram.set(i, j, edges[i].dot(&edges[j]));
        }
        rhs[i] = edges[i].dot(&rhs_vec);
    }
    let t = gram.solve(&Vector(rhs), 1e-14)?;
    // residual check: y must lie in the affine span
    let mut recon = simplex[0].clone();
    for (i, e) in edges.iter().enumerate() {
        recon = recon.axpy(t.0[i], e);
    }
    let scale = rhs_vec.norm2().max(1.0);
    if recon.sub(y).norm2() > 1e-9 * scale {
        return None;
    }
    Some(t.0)
}

// ---------------------------------------------------------------------------
// Hyperplane splitting
// ---------------------------------------------------------------------------

pub(crate) fn split_simplex(
    s: &OrientedSimplex,
    a: &Vector,
    b: f64,
) -> Result<Vec<OrientedSimplex>, ChainError> {
    let scale = a.norm2() * s.max_edge() + b.abs();
    let tol = 1e-12 * scale.max(1e-300);
    let side: Vec<f64> = s.vertices.iter().map(|v| a.dot(v) - b).collect();
    let has_pos = side.iter().any(|&x| x > tol);
    let has_neg = side.iter().any(|&x| x < -tol);
    if !has_pos || !has_neg {
        return Ok(vec![s.clone()]);
    }
    let cut = |i: usize, j: usize| -> Vector {
        let t = side[i] / (side[i] - side[j]);
        s.vertices[i].add(&s.vertices[j].sub(&s.vertices[i]).scale(t))
    };
    match s.dim() {
        1 => {
            let w = cut(0, 1);
            Ok(vec![
                fix_orientation(s, vec![s.vertices[0].clone(), w.clone()]),
                fix_orientation(s, vec![w, s.vertices[1].clone()]),
            ])
        }
        2 => {
            let cls: Vec<i8> = side
                .iter()
                .map(|&x| {
                    if x > tol {
                        1
                    } else if x < -tol {
                        -1
                    } else {
                        0
                    }
                })
                .collect();
            let idx: Vec<usize> = (0..3).collect();
            let pos: Vec<usize> = idx.iter().copied().filter(|&i| cls[i] > 0).collect();
            let neg: Vec<usize> = idx.iter().copied().filter(|&i| cls[i] < 0).collect();
            let zer: Vec<usize> = idx.iter().copied().filter(|&i| cls[i] == 0).collect();
            let v = |i: usize| s.vertices[i].clone();
            if zer.len() == 1 {
                // one vertex on the plane: split the opposite edge
                let w = cut(pos[0], neg[0]);
                Ok(vec![
                    fix_orientation(s, vec![v(zer[0]), v(pos[0]), w.clone()]),
                    fix_orientation(s, vec![v(zer[0]), w, v(neg[0])]),
                ])
            } else {
                // lone vertex against an edge: triangle + quad (two triangles)
                let (lone, pair) = if pos.len() == 1 {
                    (pos[0], neg)
                } else {
                    (neg[0], pos)
                };
                let w1 = cut(lone, pair[0]);
                let w2 = cut(lone, pair[1]);
                Ok(vec![
                    fix_orientation(s, vec![v(lone), w1.clone(), w2.clone()]),
                    fix_orientation(s, vec![w1.clone(), v(pair[0]), v(pair[1])]),
                    fix_orientation(s, vec![w1, v(pair[1]), w2]),
                ])
            }
        }
        d => Err(ChainError::Unsupported(format!(
            "hyperplane split for {d}-simplices"
        ))),
    }
}

/// Give `child` the orientation induced by `parent` (children of a split must
/// sum to the parent with matching signs).
fn fix_orientation(parent: &OrientedSimplex, child: Vec<Vector>) -> OrientedSimplex {
    let m = parent.dim();
    let p_edges: Vec<Vector> = parent.vertices[1..]
        .iter()
        .map(|v| v.sub(&parent.vertices[0]))
        .collect();
    let c_edges: Vec<Vector> = child[1..].iter().map(|v| v.sub(&child[0])).collect();
    // coordinates of child edges in the parent's edge frame
    let mut gram = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            gram.set(i, j, p_edges[i].dot(&p_edges[j]));
        }
    }
    let mut coords = Matrix::zeros(m, m);
    for (j, ce) in c_edges.iter().enumerate() {
        let rhs = Vector(p_edges.iter().map(|pe| pe.dot(ce)).collect());
        if let Some(t) = gram.solve(&rhs, 1e-14) {
            for i in 0..m {
                coords.set(i, j, t.0[i]);
            }
        }
    }
    let det = match m {
        1 => coords.get(0, 0),
        2 => coords.get(0, 0) * coords.get(1, 1) - coords.get(0, 1) * coords.get(1, 0),
        _ => 1.0,
    };
    let mut vs = child;
    if det < 0.0 {
        vs.swap(0, 1);
    }
    OrientedSimplex::new(vs)
}

// ---------------------------------------------------------------------------
// Edgewise subdivision
// ---------------------------------------------------------------------------

/// The affine contractions `f_{j,a}(x) = x_0 + sum_i a_i (x_i - x_0)/j +
/// (x - x_0)/j` indexed by `a` in `I_j = { a : sum a_i <= j - 1 }`.
/// Each image `f_{j,a}(sigma)` is a sub-simplex of `sigma`; the images are
/// pairwise nonoverlapping and `card I_j = C(j-1+m, m)`.
pub fn edgewise_maps(sigma: &OrientedSimplex, j: usize) -> Vec<AffineMap> {
    assert!(j >= 1);
    let m = sigma.dim();
    let n = sigma.vertices[0].dim();
    let x0 = &sigma.vertices[0];
    let mut maps = Vec::new();
    let mut alpha = vec![0usize; m];
    enumerate_index_set(j, m, 0, 0, &mut alpha, &mut |a| {
        let mut shift = x0.scale(1.0 - 1.0 / j as f64);
        for (i, &ai) in a.iter().enumerate() {
            let edge = sigma.vertices[i + 1].sub(x0);
            shift = shift.axpy(ai as f64 / j as f64, &edge);
        }
        maps.push(AffineMap {
            linear: Matrix::identity(n).scale(1.0 / j as f64),
            shift,
        });
    });
    maps
}

fn enumerate_index_set(
    j: usize,
    m: usize,
    pos: usize,
    used: usize,
    alpha: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if pos == m {
        f(alpha);
        return;
    }
    for v in 0..=(j - 1 - used) {
        alpha[pos] = v;
        enumerate_index_set(j, m, pos + 1, used + v, alpha, f);
    }
}

/// `card I_j = C(j-1+m, m)`.
pub fn index_set_cardinality(j: usize, m: usize) -> usize {
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..m {
        num *= j - 1 + m - i;
        den *= i + 1;
    }
    num / den
}

// ---------------------------------------------------------------------------
// The subdivide-and-replace sequence
// ---------------------------------------------------------------------------

/// One step of the sequence `P_j = P + sum_{a in I_j} f_{j,a #}(Q - P)`.
#[derive(Clone, Debug)]
pub struct LscStep {
    pub j: usize,
    pub card_index_set: usize,
    pub p_j: PolyhedralChain,
    /// Analytic upper bound for the flat distance to `P`:
    /// `mass(R) card I_j / j^{m+1}`.
    pub flat_bound: f64,
    pub mass_p: f64,
    pub mass_q: f64,
    /// Mass of `P_j` from the geometric decomposition
    /// `mass(P)(1 - card I_j / j^m) + mass(Q) card I_j / j^m`.
    pub mass_p_j: f64,
    /// `mass(P) - mass(Q)`; a positive deficit drives the mass of `P_j`
    /// strictly below the mass of `P`.
    pub deficit: f64,
}

/// Build `P_j` for `P = g [sigma]` and a chain `Q` with
/// `boundary(P - Q) = 0`, evaluating masses against an arbitrary density.
/// `filling` is a chain `R` with `Q - P = boundary(R)` used for the flat-norm
/// bound (pass `None` when `Q = P`).
pub fn lsc_sequence(
    p: &PolyhedralChain,
    q: &PolyhedralChain,
    filling: Option<&PolyhedralChain>,
    j: usize,
    density: &mut dyn FnMut(&Subspace) -> Result<f64, ChainError>,
) -> Result<LscStep, ChainError> {
    if p.terms.len() != 1 {
        return Err(ChainError::Unsupported(
            "the sequence starts from a single-simplex chain".into(),
        ));
    }
    let diff = p.sub(q)?;
    if !diff.is_zero() && !diff.boundary().is_zero() {
        return Err(ChainError::NotACycle("boundary(P - Q) != 0".into()));
    }
    let sigma = p.terms[0].1.clone();
    let g = p.terms[0].0;
    let m = sigma.dim();
    if m > 2 {
        return Err(ChainError::Unsupported(
            "subdivide-and-replace implemented for m <= 2".into(),
        ));
    }
    let card = index_set_cardinality(j, m);
    let mass_p = p.mass_with_density(density)?;
    let mass_q = q.mass_with_density(density)?;
    let frac = card as f64 / (j as f64).powi(m as i32);
    let mass_p_j = mass_p * (1.0 - frac) + mass_q * frac;
    let flat_bound = match filling {
        Some(r) => r.mass_with_density(density)? * card as f64 / (j as f64).powi(m as i32 + 1),
        None => 0.0,
    };

    // geometric decomposition of P_j: the complement of the union of the
    // contracted copies of sigma inside sigma, plus the contracted copies of Q
    let mut terms: Vec<(Coeff, OrientedSimplex)> = Vec::new();
    if diff.is_zero() {
        terms.push((g, sigma.clone()));
    } else {
        let x0 = &sigma.vertices[0];
        let jf = j as f64;
        let grid = |beta: &[usize]| -> Vector {
            let mut out = x0.clone();
            for (i, &bi) in beta.iter().enumerate() {
                let edge = sigma.vertices[i + 1].sub(x0);
                out = out.axpy(bi as f64 / jf, &edge);
            }
            out
        };
        if m == 2 {
            // downward cells of the edgewise subdivision fill the complement
            for a1 in 0..j.saturating_sub(1) {
                for a2 in 0..j.saturating_sub(1) - a1 {
                    let p1 = grid(&[a1, a2 + 1]);
                    let p2 = grid(&[a1 + 1, a2]);
                    let p3 = grid(&[a1 + 1, a2 + 1]);
                    terms.push((g, fix_orientation(&sigma, vec![p1, p2, p3])));
                }
            }
        }
        // m = 1: the contracted copies tile sigma completely, no complement
        for map in edgewise_maps(&sigma, j) {
            let image = q.pushforward_affine(&map);
            terms.extend(image.terms);
        }
    }
    let p_j = PolyhedralChain::from_terms(p.group, m, p.ambient, terms);
    Ok(LscStep {
        j,
        card_index_set: card,
        p_j,
        flat_bound,
        mass_p,
        mass_q,
        mass_p_j,
        deficit: mass_p - mass_q,
    })
}

// ---------------------------------------------------------------------------
// Tolerant 1-chain comparison
// ---------------------------------------------------------------------------

/// Equality of 1-chains up to simplicial subdivision: segments are grouped by
/// carrier line, cut at all endpoints, and coefficients compared interval by
/// interval. Quantization tolerance `1e-9`.
pub fn one_chains_equal(a: &PolyhedralChain, b: &PolyhedralChain) -> bool {
    if a.dim != 1 || b.dim != 1 {
        return false;
    }
    let Ok(diff) = a.sub(b) else {
        return false;
    };
    one_chain_is_zero(&diff)
}

pub fn one_chain_is_zero(diff: &PolyhedralChain) -> bool {
    let group = diff.group;
    let quant = |x: f64| (x * 1e9).round() as i64;
    let mut lines: BTreeMap<Vec<i64>, Vec<(f64, f64, Coeff)>> = BTreeMap::new();
    for (g, s) in &diff.terms {
        let (p, q) = (&s.vertices[0], &s.vertices[1]);
        let d = q.sub(p);
        let len = d.norm2();
        if len <= 1e-13 {
            continue;
        }
        let mut dir = d.scale(1.0 / len);
        let mut sign = 1i64;
        for c in &dir.0 {
            if c.abs() > 1e-9 {
                if *c < 0.0 {
                    dir = dir.scale(-1.0);
                    sign = -1;
                }
                break;
            }
        }
        let t_p = p.dot(&dir);
        let offset = p.axpy(-t_p, &dir);
        let mut key: Vec<i64> = dir.0.iter().map(|&x| quant(x)).collect();
        key.extend(offset.0.iter().map(|&x| quant(x)));
        let (t0, t1) = (p.dot(&dir), q.dot(&dir));
        lines
            .entry(key)
            .or_default()
            .push((t0, t1, group.scale_sign(*g, sign)));
    }
    for (_, segs) in lines {
        let mut cuts: Vec<f64> = segs.iter().flat_map(|&(a, b, _)| [a, b]).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-9);
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            if w[1] - w[0] <= 1e-9 {
                continue;
            }
            let mut acc: Option<Coeff> = None;
            for &(t0, t1, g) in &segs {
                let (lo, hi, sg) = if t0 <= t1 { (t0, t1, 1) } else { (t1, t0, -1) };
                if lo <= mid && mid <= hi {
                    let contrib = group.scale_sign(g, sg);
                    acc = Some(match acc {
                        None => contrib,
                        Some(x) => group.add(x, contrib),
                    });
                }
            }
            if let Some(x) = acc {
                if !group.is_zero(x) {
                    return false;
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// JSON representation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum GroupSpec {
    Z,
    Zq { q: u64 },
    R,
}

impl GroupSpec {
    pub fn to_group(&self) -> CoefficientGroup {
        match self {
            GroupSpec::Z => CoefficientGroup::Integers,
            GroupSpec::Zq { q } => CoefficientGroup::Cyclic(*q),
            GroupSpec::R => CoefficientGroup::Reals,
        }
    }

    pub fn from_group(g: CoefficientGroup) -> GroupSpec {
        match g {
            CoefficientGroup::Integers => GroupSpec::Z,
            CoefficientGroup::Cyclic(q) => GroupSpec::Zq { q },
            CoefficientGroup::Reals => GroupSpec::R,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainTermSpec {
    pub g: serde_json::Value,
    pub vertices: Vec<Vec<f64>>,
}

/// Wire format `{"dim":m,"group":{"tag":...},"terms":[...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainSpec {
    pub dim: usize,
    pub group: GroupSpec,
    pub terms: Vec<ChainTermSpec>,
}

impl ChainSpec {
    pub fn to_chain(&self, ambient: usize) -> Result<PolyhedralChain, ChainError> {
        let group = self.group.to_group();
        let mut terms = Vec::new();
        for t in &self.terms {
            let g = match (group, &t.g) {
                (CoefficientGroup::Reals, v) => Coeff::Real(v.as_f64().unwrap_or(0.0)),
                (_, v) => Coeff::Int(v.as_i64().unwrap_or(0)),
            };
            let vertices: Vec<Vector> = t.vertices.iter().map(|v| Vector(v.clone())).collect();
            for v in &vertices {
                if v.dim() != ambient {
                    return Err(ChainError::DimensionMismatch {
                        expected: ambient,
                        got: v.dim(),
                    });
                }
            }
            terms.push((g, OrientedSimplex::new(vertices)));
        }
        Ok(PolyhedralChain::from_terms(group, self.dim, ambient, terms))
    }

    pub fn from_chain(chain: &PolyhedralChain) -> ChainSpec {
        ChainSpec {
            dim: chain.dim,
            group: GroupSpec::from_group(chain.group),
            terms: chain
                .terms
                .iter()
                .map(|(g, s)| ChainTermSpec {
                    g: match g {
                        Coeff::Int(k) => serde_json::json!(k),
                        Coeff::Real(x) => serde_json::json!(x),
                    },
                    vertices: s.vertices.iter().map(|v| v.0.clone()).collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::Norm;

    fn v(c: &[f64]) -> Vector {
        Vector(c.to_vec())
    }

    fn tri3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> OrientedSimplex {
        OrientedSimplex::new(vec![v(&a), v(&b), v(&c)])
    }

    const Z: CoefficientGroup = CoefficientGroup::Integers;

    #[test]
    fn boundary_of_segment() {
        let seg = PolyhedralChain::simplex(
            Z,
            Coeff::Int(1),
            OrientedSimplex::new(vec![v(&[0.0, 0.0]), v(&[1.0, 0.0])]),
        );
        let b = seg.boundary();
        assert_eq!(b.dim, 0);
        assert_eq!(b.terms.len(), 2);
        // delta_b - delta_a
        let mass: f64 = b.terms.iter().map(|(g, _)| Z.norm(*g)).sum();
        assert_eq!(mass, 2.0);
        let total: i64 = b
            .terms
            .iter()
            .map(|(g, _)| match g {
                Coeff::Int(k) => *k,
                _ => 0,
            })
            .sum();
        assert_eq!(total, 0);
    }

    #[test]
    fn boundary_of_fan_is_cycle() {
        // unit square split along the diagonal, consistent orientation
        let t1 = tri3([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0]);
        let t2 = tri3([0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]);
        let chain = PolyhedralChain::from_terms(
            Z,
            2,
            3,
            vec![(Coeff::Int(1), t1), (Coeff::Int(1), t2)],
        );
        let b = chain.boundary();
        assert_eq!(b.terms.len(), 4, "diagonal cancels");
        assert!(b.boundary().is_zero(), "boundary of boundary vanishes");
    }

    #[test]
    fn boundary_squared_zero_z5() {
        let tet = OrientedSimplex::new(vec![
            v(&[0.3, 0.1, -0.2]),
            v(&[1.1, 0.0, 0.4]),
            v(&[0.2, 1.3, 0.1]),
            v(&[-0.4, 0.2, 1.0]),
        ]);
        let chain = PolyhedralChain::simplex(CoefficientGroup::Cyclic(5), Coeff::Int(3), tet);
        assert!(chain.boundary().boundary().is_zero());
    }

    #[test]
    fn hausdorff_mass_examples() {
        let tri = tri3([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let chain = PolyhedralChain::simplex(Z, Coeff::Int(1), tri.clone());
        let m2 = chain.hausdorff_mass(&Norm::euclidean(3)).unwrap();
        assert!((m2 - 0.5).abs() < 1e-14);
        let minf = chain.hausdorff_mass(&Norm::linf(3)).unwrap();
        assert!((minf - 0.5 * std::f64::consts::PI / 4.0).abs() < 1e-12);

        // Z_5 coefficient 3 has norm 2
        let c5 = PolyhedralChain::simplex(CoefficientGroup::Cyclic(5), Coeff::Int(3), tri);
        let m5 = c5.hausdorff_mass(&Norm::euclidean(3)).unwrap();
        assert!((m5 - 2.0 * 0.5).abs() < 1e-14);
    }

    #[test]
    fn normalization_merges_and_signs() {
        let t = tri3([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let swapped = OrientedSimplex::new(vec![
            t.vertices[1].clone(),
            t.vertices[0].clone(),
            t.vertices[2].clone(),
        ]);
        let a = PolyhedralChain::simplex(Z, Coeff::Int(1), t.clone());
        let b = PolyhedralChain::simplex(Z, Coeff::Int(-1), swapped);
        assert!(a.equals(&b), "(-g)[-sigma] = g[sigma]");
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.terms.len(), 1);
        // the canonical coefficient is relative to the sorted vertex order
        match sum.terms[0].0 {
            Coeff::Int(k) => assert_eq!(k.abs(), 2),
            _ => panic!(),
        }
    }

    #[test]
    fn pushforward_examples() {
        let t = tri3([0.1, 0.2, 0.5], [1.0, 0.3, -0.2], [0.4, 1.2, 0.9]);
        let chain = PolyhedralChain::simplex(Z, Coeff::Int(2), t);

        let id = Matrix::identity(3);
        assert!(chain.pushforward_linear(&id).equals(&chain));

        // rank-1 map kills 2-chains
        let rank1 = Matrix::outer(&v(&[1.0, 0.0, 0.0]), &v(&[1.0, 1.0, 1.0]));
        assert!(chain.pushforward_linear(&rank1).is_zero());

        // reflection twice is the identity
        let mut refl = Matrix::identity(3);
        refl.set(0, 0, -1.0);
        let back = chain.pushforward_linear(&refl).pushforward_linear(&refl);
        assert!(back.equals(&chain));

        // boundary commutes with pushforward
        let mut shear = Matrix::identity(3);
        shear.set(0, 1, 0.7);
        let lhs = chain.pushforward_linear(&shear).boundary();
        let rhs = chain.boundary().pushforward_linear(&shear);
        assert!(lhs.equals(&rhs));
    }

    #[test]
    fn slice_mass_examples() {
        let t = tri3([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let chain = PolyhedralChain::simplex(Z, Coeff::Int(2), t.clone());
        let mut pi = Matrix::zeros(3, 3);
        pi.set(0, 0, 1.0);
        pi.set(1, 1, 1.0);
        let bary = t.barycenter();
        let sm = chain.slice_mass(&pi, &bary);
        assert_eq!(sm.value, 2.0);
        assert!(!sm.boundary_hit);

        let outside = v(&[5.0, 5.0, 0.0]);
        assert_eq!(chain.slice_mass(&pi, &outside).value, 0.0);

        // two stacked triangles with +-g: slice mass adds
        let lifted = tri3([0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]);
        let stacked = PolyhedralChain::from_terms(
            Z,
            2,
            3,
            vec![(Coeff::Int(2), t), (Coeff::Int(-2), lifted)],
        );
        let sm = stacked.slice_mass(&pi, &bary);
        assert_eq!(sm.value, 4.0);
    }

    #[test]
    fn slice_integral_examples() {
        let t = tri3([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let chain = PolyhedralChain::simplex(Z, Coeff::Int(1), t);
        let mut pi = Matrix::zeros(3, 3);
        pi.set(0, 0, 1.0);
        pi.set(1, 1, 1.0);
        let euc = Norm::euclidean(3);
        let si = chain.slice_integral(&pi, &euc).unwrap();
        let mass = chain.hausdorff_mass(&euc).unwrap();
        assert!((si - mass).abs() < 1e-13, "planar identity");

        // tilted triangle: Jacobian oracle cos(theta)
        let theta: f64 = 0.6;
        let tilted = tri3(
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, theta.cos(), theta.sin()],
        );
        let chain = PolyhedralChain::simplex(Z, Coeff::Int(1), tilted);
        let si = chain.slice_integral(&pi, &euc).unwrap();
        let mass = chain.hausdorff_mass(&euc).unwrap();
        assert!((si - mass * theta.cos()).abs() < 1e-12);

        // rank < m projects to zero
        let rank1 = Matrix::outer(&v(&[1.0, 0.0, 0.0]), &v(&[1.0, 0.0, 0.0]));
        assert_eq!(chain.slice_integral(&rank1, &euc).unwrap(), 0.0);
    }

    #[test]
    fn cone_examples() {
        // closed square boundary as a 1-cycle
        let pts = [
            v(&[1.0, 1.0, 0.0]),
            v(&[-1.0, 1.0, 0.0]),
            v(&[-1.0, -1.0, 0.0]),
            v(&[1.0, -1.0, 0.0]),
        ];
        let mut terms = Vec::new();
        for i in 0..4 {
            terms.push((
                Coeff::Int(1),
                OrientedSimplex::new(vec![pts[i].clone(), pts[(i + 1) % 4].clone()]),
            ));
        }
        let cycle = PolyhedralChain::from_terms(Z, 1, 3, terms);
        assert!(cycle.boundary().is_zero());

        let apex = v(&[0.0, 0.0, 2.0]);
        let cone = cycle.cone(&apex);
        assert!(cone.boundary().equals(&cycle), "boundary of cone = cycle");

        // apex inside the plane: degenerate terms dropped, identity holds
        let flat_apex = v(&[0.0, 0.0, 0.0]);
        let flat_cone = cycle.cone(&flat_apex);
        assert_eq!(flat_cone.terms.len(), 4);
        assert!(flat_cone.boundary().equals(&cycle));

        // disk area limit: cone over a fine polygon approximating the circle
        let k = 1024;
        let mut terms = Vec::new();
        for i in 0..k {
            let a0 = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
            let a1 = 2.0 * std::f64::consts::PI * (i + 1) as f64 / k as f64;
            terms.push((
                Coeff::Int(1),
                OrientedSimplex::new(vec![
                    v(&[a0.cos(), a0.sin(), 0.0]),
                    v(&[a1.cos(), a1.sin(), 0.0]),
                ]),
            ));
        }
        let circle = PolyhedralChain::from_terms(Z, 1, 3, terms);
        let disk = circle.cone(&v(&[0.0, 0.0, 0.0]));
        let mass = disk.hausdorff_mass(&Norm::euclidean(3)).unwrap();
        // (k/2) sin(2 pi / k) < pi, deficit about 2 pi^3 / (3 k^2)
        let deficit = std::f64::consts::PI - mass;
        assert!(deficit > 0.0 && deficit < 2.1e-5, "deficit {deficit}");
    }

    #[test]
    fn edgewise_maps_examples() {
        let sigma = tri3([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let maps = edgewise_maps(&sigma, 1);
        assert_eq!(maps.len(), 1);
        let img: Vec<Vector> = sigma.vertices.iter().map(|p| maps[0].apply(p)).collect();
        for (a, b) in img.iter().zip(&sigma.vertices) {
            assert!(a.sub(b).norm2() < 1e-15);
        }

        // enumeration oracle for card I_4, m = 2
        let maps = edgewise_maps(&sigma, 4);
        let mut brute = 0;
        for a1 in 0..4 {
            for a2 in 0..4 {
                if a1 + a2 <= 3 {
                    brute += 1;
                }
            }
        }
        assert_eq!(maps.len(), brute);
        assert_eq!(maps.len(), 10);
        assert_eq!(index_set_cardinality(4, 2), 10);

        // images tile with total volume card/j^2 * vol, and stay inside sigma
        let j = 4;
        let total: f64 = maps
            .iter()
            .map(|f| {
                OrientedSimplex::new(sigma.vertices.iter().map(|p| f.apply(p)).collect()).volume()
            })
            .sum();
        assert!((total - 10.0 / 16.0 * sigma.volume()).abs() < 1e-13);
        for f in &maps {
            for p in &sigma.vertices {
                let q = f.apply(p);
                // inside the closed simplex: barycentric in [0,1]
                let b = barycentric(&sigma.vertices, &q).unwrap();
                assert!(b.iter().all(|&t| t >= -1e-12));
                assert!(b.iter().sum::<f64>() <= 1.0 + 1e-12);
            }
        }
        let _ = j;
    }

    #[test]
    fn split_by_hyperplane_examples() {
        let t = tri3([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let chain = PolyhedralChain::simplex(Z, Coeff::Int(1), t);

        // hyperplane missing the simplex: unchanged
        let miss = chain.split_by_hyperplane(&v(&[1.0, 0.0, 0.0]), 5.0).unwrap();
        assert!(miss.equals(&chain));

        // cut through the interior: 3 pieces, area preserved
        let cut = chain.split_by_hyperplane(&v(&[1.0, 0.0, 0.0]), 0.4).unwrap();
        assert_eq!(cut.terms.len(), 3);
        let area: f64 = cut.terms.iter().map(|(_, s)| s.volume()).sum();
        assert!((area - 0.5).abs() < 1e-12);

        // boundary preserved as a 1-chain
        assert!(one_chains_equal(&cut.boundary(), &chain.boundary()));
    }

    #[test]
    fn lsc_sequence_trivial_and_triangle() {
        let mut euclid = |_w: &Subspace| -> Result<f64, ChainError> { Ok(1.0) };

        // Q = P: constant sequence
        let seg = PolyhedralChain::simplex(
            Z,
            Coeff::Int(1),
            OrientedSimplex::new(vec![v(&[0.0, 0.0]), v(&[1.0, 0.0])]),
        );
        let step = lsc_sequence(&seg, &seg, None, 8, &mut euclid).unwrap();
        assert!(step.p_j.equals(&seg));
        assert_eq!(step.deficit, 0.0);

        // P one side, Q the other two sides of a triangle: Euclidean triangle
        // inequality gives a negative deficit and no mass drop
        let a = v(&[0.0, 0.0]);
        let b = v(&[1.0, 0.0]);
        let c = v(&[0.3, 0.8]);
        let p = PolyhedralChain::simplex(Z, Coeff::Int(1), OrientedSimplex::new(vec![a.clone(), b.clone()]));
        let q = PolyhedralChain::from_terms(
            Z,
            1,
            2,
            vec![
                (Coeff::Int(1), OrientedSimplex::new(vec![a.clone(), c.clone()])),
                (Coeff::Int(1), OrientedSimplex::new(vec![c.clone(), b.clone()])),
            ],
        );
        for j in [2usize, 8, 32] {
            let step = lsc_sequence(&p, &q, None, j, &mut euclid).unwrap();
            assert!(step.deficit < 0.0);
            assert!(step.mass_p_j >= step.mass_p - 1e-12);
            // direct mass of the constructed chain matches the bookkeeping
            let direct = step.p_j.mass_with_density(&mut euclid).unwrap();
            assert!((direct - step.mass_p_j).abs() < 1e-10);
        }
    }

    /// Synthetic density with a bump on the direction of sigma: deficit
    /// eta = 0.2; the measured mass drop tracks eta * card I_j / j^m.
    #[test]
    fn lsc_sequence_synthetic_density_drop() {
        let sigma = tri3([0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 2.0, 0.0]);
        let p = PolyhedralChain::simplex(Z, Coeff::Int(1), sigma.clone());
        let apex = v(&[0.6, 0.6, 0.8]);
        let q = p.boundary().cone(&apex);
        assert!(p.sub(&q).unwrap().boundary().is_zero());

        let w0 = sigma.direction().unwrap();
        let key0 = w0.fingerprint();
        // choose the bump so that mass(P) - mass(Q) = 0.2 under density:
        // d(W0) = (0.2 + vol(Q)) / vol(P), d = 1 elsewhere
        let vol_p = sigma.volume();
        let vol_q: f64 = q.terms.iter().map(|(_, s)| s.volume()).sum();
        let bump = (0.2 + vol_q) / vol_p;
        let mut density = move |w: &Subspace| -> Result<f64, ChainError> {
            if w.fingerprint() == key0 {
                Ok(bump)
            } else {
                Ok(1.0)
            }
        };

        let filling = q.sub(&p).unwrap(); // boundary of the solid tetrahedron
        let r = filling.cone(&v(&[0.6, 0.6, 0.4]));
        let step = lsc_sequence(&p, &q, Some(&r), 64, &mut density).unwrap();
        assert!((step.deficit - 0.2).abs() < 1e-12);

        let drop = step.mass_p - step.mass_p_j;
        let expected = 0.2 * step.card_index_set as f64 / 64.0_f64.powi(2);
        assert!((drop - expected).abs() < 1e-12);
        // the ratio approaches 1/m! = 1/2; at j = 64 it is within 2%
        let ratio = step.card_index_set as f64 / 64.0_f64.powi(2);
        assert!((ratio - 0.5).abs() < 0.02 * 0.5 + 1e-12, "ratio {ratio}");
        // direct evaluation of the constructed chain agrees
        let direct = step.p_j.mass_with_density(&mut density).unwrap();
        assert!(
            (direct - step.mass_p_j).abs() < 1e-9,
            "direct {direct} vs bookkeeping {}",
            step.mass_p_j
        );
        // flat-norm bound scales like 1/j
        assert!(step.flat_bound > 0.0);
    }

    #[test]
    fn chain_spec_roundtrip() {
        let t = tri3([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let chain = PolyhedralChain::simplex(CoefficientGroup::Cyclic(5), Coeff::Int(3), t);
        let spec = ChainSpec::from_chain(&chain);
        let json = serde_json::to_string(&spec).unwrap();
        let back: ChainSpec = serde_json::from_str(&json).unwrap();
        let chain2 = back.to_chain(3).unwrap();
        assert!(chain.equals(&chain2));
    }
}
