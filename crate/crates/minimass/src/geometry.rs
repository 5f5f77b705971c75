//! Low-dimensional convex and linear geometry.
//!
//! Everything here is pure and deterministic: Gram volumes, wedge norms,
//! Gram-Schmidt orthonormalization, 2D halfplane intersection (floating point
//! and exact rational), polytope vertex enumeration for small dimensions,
//! union areas of planar triangle families, and seeded rotation-invariant
//! Grassmannian sampling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Orthonormality acceptance for stored bases. Gram-Schmidt output lands
/// near 1e-15; the validation threshold leaves headroom for ill-conditioned
/// sampled frames.
pub const ORTHO_TOL: f64 = 1e-10;
const RANK_TOL: f64 = 1e-10;

pub type Rat = BigRational;

#[derive(Clone, Debug, PartialEq)]
pub enum GeometryError {
    DimensionMismatch { expected: usize, got: usize },
    /// Gram-Schmidt found a dependent vector; the index is reported.
    RankDeficient { index: usize },
    UnboundedRegion,
    EmptyRegion,
    Degenerate(String),
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            GeometryError::RankDeficient { index } => {
                write!(f, "vector {index} is linearly dependent on its predecessors")
            }
            GeometryError::UnboundedRegion => write!(f, "halfplane intersection is unbounded"),
            GeometryError::EmptyRegion => write!(f, "halfplane intersection has empty interior"),
            GeometryError::Degenerate(s) => write!(f, "degenerate input: {s}"),
        }
    }
}

impl std::error::Error for GeometryError {}

// ---------------------------------------------------------------------------
// Vectors and matrices
// ---------------------------------------------------------------------------

/// A point of the ambient space in the fixed reference Euclidean frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn axpy(&self, s: f64, other: &Vector) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|a| a.is_finite())
    }
}

/// Dense row-major matrix; everything in this crate is small (`n <= 4` ambient
/// dimensions), so no sparse storage is needed.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_columns(cols: &[Vector]) -> Self {
        let rows = cols.first().map_or(0, Vector::dim);
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, c.0[i]);
            }
        }
        m
    }

    /// Rank-one matrix `u a^T` (maps `x` to `(a . x) u`).
    pub fn outer(u: &Vector, a: &Vector) -> Self {
        let mut m = Matrix::zeros(u.dim(), a.dim());
        for i in 0..u.dim() {
            for j in 0..a.dim() {
                m.set(i, j, u.0[i] * a.0[j]);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn matvec(&self, x: &Vector) -> Vector {
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut s = 0.0;
            for j in 0..self.cols {
                s += self.get(i, j) * x.0[j];
            }
            out[i] = s;
        }
        Vector(out)
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * out.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    /// Solve `A x = b` by Gaussian elimination with partial pivoting.
    /// Returns `None` when the pivot falls below `tol`.
    pub fn solve(&self, b: &Vector, tol: f64) -> Option<Vector> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut rhs = b.0.clone();
        for col in 0..n {
            let (mut piv, mut best) = (col, a[col * n + col].abs());
            for r in col + 1..n {
                let v = a[r * n + col].abs();
                if v > best {
                    piv = r;
                    best = v;
                }
            }
            if best <= tol {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                rhs.swap(col, piv);
            }
            let d = a[col * n + col];
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col] / d;
                if f == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] -= f * a[col * n + j];
                }
                rhs[r] -= f * rhs[col];
            }
        }
        Some(Vector(
            (0..n).map(|i| rhs[i] / a[i * n + i]).collect(),
        ))
    }

    /// Largest singular value, via power iteration on `A^T A`.
    pub fn operator_norm(&self) -> f64 {
        let at = self.transpose();
        let mut v = Vector(vec![1.0; self.cols]);
        let s = v.norm2();
        v = v.scale(1.0 / s);
        let mut lambda = 0.0;
        for _ in 0..200 {
            let w = at.matvec(&self.matvec(&v));
            let nw = w.norm2();
            if nw <= 1e-300 {
                return 0.0;
            }
            v = w.scale(1.0 / nw);
            lambda = nw;
        }
        lambda.sqrt()
    }
}

/// Affine map `x -> A x + t`.
#[derive(Clone, Debug)]
pub struct AffineMap {
    pub linear: Matrix,
    pub shift: Vector,
}

impl AffineMap {
    pub fn linear(m: Matrix) -> Self {
        let n = m.rows;
        AffineMap {
            linear: m,
            shift: Vector::zeros(n),
        }
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        self.linear.matvec(x).add(&self.shift)
    }
}

// ---------------------------------------------------------------------------
// Gram volumes and subspaces
// ---------------------------------------------------------------------------

/// Euclidean `m`-volume of the simplex spanned by `m+1` points,
/// `sqrt(det Gram(edges)) / m!`, evaluated as the product of modified
/// Gram-Schmidt residual norms (stable near rank deficiency). Zero iff the
/// points are affinely dependent.
pub fn simplex_volume(points: &[Vector]) -> Result<f64, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::Degenerate("no points".into()));
    }
    let n = points[0].dim();
    for p in points {
        if p.dim() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                got: p.dim(),
            });
        }
    }
    let m = points.len() - 1;
    if m > n {
        return Err(GeometryError::DimensionMismatch {
            expected: n,
            got: m,
        });
    }
    let mut fact = 1.0;
    for k in 2..=m {
        fact *= k as f64;
    }
    let mut basis: Vec<Vector> = Vec::with_capacity(m);
    let mut prod = 1.0;
    for p in &points[1..] {
        let mut r = p.sub(&points[0]);
        for q in &basis {
            r = r.axpy(-q.dot(&r), q);
        }
        let nr = r.norm2();
        if nr == 0.0 {
            return Ok(0.0);
        }
        prod *= nr;
        basis.push(r.scale(1.0 / nr));
    }
    Ok(prod / fact)
}

/// Euclidean area of the parallelogram spanned by `u` and `v`:
/// `sqrt(|u|^2 |v|^2 - <u,v>^2)`, evaluated as `|u| * dist(v, span u)` to
/// avoid cancellation for nearly parallel inputs.
pub fn wedge_norm(u: &Vector, v: &Vector) -> f64 {
    let nu = u.norm2();
    if nu == 0.0 {
        return 0.0;
    }
    let q = u.scale(1.0 / nu);
    let residual = v.axpy(-q.dot(v), &q);
    nu * residual.norm2()
}

/// An `m`-dimensional linear subspace carried by an orthonormal basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Vec<Vector>,
    ambient: usize,
}

impl Subspace {
    /// Wrap an already orthonormal basis; checked to `1e-12`.
    pub fn from_orthonormal(basis: Vec<Vector>) -> Result<Self, GeometryError> {
        let ambient = basis.first().map_or(0, Vector::dim);
        for (i, u) in basis.iter().enumerate() {
            if u.dim() != ambient {
                return Err(GeometryError::DimensionMismatch {
                    expected: ambient,
                    got: u.dim(),
                });
            }
            for (j, v) in basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                if (u.dot(v) - want).abs() > ORTHO_TOL {
                    return Err(GeometryError::Degenerate(format!(
                        "basis not orthonormal at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Subspace { basis, ambient })
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            basis: (0..n).map(|i| Vector::unit(n, i)).collect(),
            ambient: n,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Coordinates of `x` in the basis (`Q^T x`).
    pub fn coords(&self, x: &Vector) -> Vec<f64> {
        self.basis.iter().map(|q| q.dot(x)).collect()
    }

    /// Embed basis coordinates back into the ambient space (`Q t`).
    pub fn embed(&self, t: &[f64]) -> Vector {
        let mut out = Vector::zeros(self.ambient);
        for (q, &c) in self.basis.iter().zip(t) {
            out = out.axpy(c, q);
        }
        out
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &Vector) -> Vector {
        self.embed(&self.coords(x))
    }

    /// The `n x n` orthogonal projector matrix `Q Q^T`.
    pub fn projector(&self) -> Matrix {
        let q = Matrix::from_columns(&self.basis);
        q.matmul(&q.transpose())
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        let mut all = self.basis.clone();
        for i in 0..self.ambient {
            let e = Vector::unit(self.ambient, i);
            let mut r = e.clone();
            for q in &all {
                r = r.axpy(-q.dot(&e), q);
            }
            let nr = r.norm2();
            if nr > 1e-8 {
                let u = r.scale(1.0 / nr);
                all.push(u.clone());
                out.push(u);
            }
            if all.len() == self.ambient {
                break;
            }
        }
        out
    }

    /// Quantized fingerprint of the projector matrix; basis-independent key
    /// for memoization.
    pub fn fingerprint(&self) -> Vec<i64> {
        self.projector()
            .data
            .iter()
            .map(|v| (v * 1e9).round() as i64)
            .collect()
    }
}

/// Gram-Schmidt. Fails with the index of the first dependent vector.
pub fn orthonormalize(vectors: &[Vector]) -> Result<Subspace, GeometryError> {
    let ambient = vectors.first().map_or(0, Vector::dim);
    let mut basis: Vec<Vector> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        if v.dim() != ambient {
            return Err(GeometryError::DimensionMismatch {
                expected: ambient,
                got: v.dim(),
            });
        }
        let scale = v.norm2();
        let mut r = v.clone();
        for q in &basis {
            r = r.axpy(-q.dot(&r), q);
        }
        // second pass improves orthogonality for nearly dependent input
        for q in &basis {
            r = r.axpy(-q.dot(&r), q);
        }
        let nr = r.norm2();
        if nr <= RANK_TOL * scale.max(1e-300) {
            return Err(GeometryError::RankDeficient { index });
        }
        basis.push(r.scale(1.0 / nr));
    }
    Subspace::from_orthonormal(basis)
}

/// Hyperplane orthogonal to `u` (unit not required), as a subspace.
pub fn hyperplane_orthogonal_to(u: &Vector) -> Result<Subspace, GeometryError> {
    let n = u.dim();
    let nu = u.norm2();
    if nu == 0.0 {
        return Err(GeometryError::Degenerate("zero normal".into()));
    }
    let span = orthonormalize(&[u.clone()])?;
    Subspace::from_orthonormal(span.complement()).map(|s| {
        debug_assert_eq!(s.dim(), n - 1);
        s
    })
}

// ---------------------------------------------------------------------------
// Halfplane intersection (floating point)
// ---------------------------------------------------------------------------

/// Convex polygon with CCW vertices; when it represents a unit-ball section
/// the origin lies in the interior.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polygon2 {
    pub vertices: Vec<[f64; 2]>,
}

impl Polygon2 {
    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }
}

pub fn shoelace(vertices: &[[f64; 2]]) -> f64 {
    let k = vertices.len();
    let mut s = 0.0;
    for i in 0..k {
        let a = vertices[i];
        let b = vertices[(i + 1) % k];
        s += a[0] * b[1] - a[1] * b[0];
    }
    s / 2.0
}

const CLIP_BOX: f64 = 1e12;

/// Intersection of halfplanes `a . x <= b` with `0` in the interior.
/// Redundant constraints are dropped; vertices come back CCW with the start
/// vertex canonicalized by angle then radius.
///
/// Each vertex is recomputed from the pair of defining lines, so coordinates
/// do not inherit roundoff from the large initial clip box.
pub fn halfplane_intersection(constraints: &[([f64; 2], f64)]) -> Result<Polygon2, GeometryError> {
    // vertex + the line of the edge leaving it (CCW)
    type Line = ([f64; 2], f64);
    let b = CLIP_BOX;
    let box_lines: [Line; 4] = [
        ([0.0, 1.0], b),
        ([-1.0, 0.0], b),
        ([0.0, -1.0], b),
        ([1.0, 0.0], b),
    ];
    let mut poly: Vec<([f64; 2], Line)> = vec![
        ([b, b], box_lines[0]),
        ([-b, b], box_lines[1]),
        ([-b, -b], box_lines[2]),
        ([b, -b], box_lines[3]),
    ];
    for &(a, c) in constraints {
        let k = poly.len();
        let mut out: Vec<([f64; 2], Line)> = Vec::with_capacity(k + 1);
        for i in 0..k {
            let (p, line_p) = poly[i].clone();
            let (q, _) = poly[(i + 1) % k];
            let sp = a[0] * p[0] + a[1] * p[1] - c;
            let sq = a[0] * q[0] + a[1] * q[1] - c;
            if sp <= 0.0 {
                out.push((p, line_p));
            }
            if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
                if let Some(x) = line_intersection(line_p, (a, c)) {
                    // leaving the feasible side: new edge runs along the clip
                    // line; entering: the old edge line continues
                    if sp < 0.0 {
                        out.push((x, (a, c)));
                    } else {
                        out.push((x, line_p));
                    }
                }
            }
        }
        poly = out;
        if poly.len() < 3 {
            return Err(GeometryError::EmptyRegion);
        }
    }
    if poly
        .iter()
        .any(|(v, _)| v[0].abs() >= CLIP_BOX / 2.0 || v[1].abs() >= CLIP_BOX / 2.0)
    {
        return Err(GeometryError::UnboundedRegion);
    }
    let poly = dedupe_polygon(poly.into_iter().map(|(v, _)| v).collect());
    if poly.len() < 3 {
        return Err(GeometryError::EmptyRegion);
    }
    Ok(Polygon2 {
        vertices: canonical_rotation(poly),
    })
}

fn line_intersection(l1: ([f64; 2], f64), l2: ([f64; 2], f64)) -> Option<[f64; 2]> {
    let ((a1, b1), (a2, b2)) = (l1, l2);
    let det = a1[0] * a2[1] - a1[1] * a2[0];
    if det.abs() <= 1e-300 {
        return None;
    }
    Some([
        (b1 * a2[1] - b2 * a1[1]) / det,
        (a1[0] * b2 - a2[0] * b1) / det,
    ])
}

fn dedupe_polygon(poly: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    let scale = poly
        .iter()
        .map(|v| v[0].abs().max(v[1].abs()))
        .fold(0.0_f64, f64::max)
        .max(1e-30);
    let tol = 1e-12 * scale;
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(poly.len());
    for v in poly {
        if let Some(last) = out.last() {
            if (v[0] - last[0]).abs() <= tol && (v[1] - last[1]).abs() <= tol {
                continue;
            }
        }
        out.push(v);
    }
    while out.len() >= 2 {
        let first = out[0];
        let last = out[out.len() - 1];
        if (first[0] - last[0]).abs() <= tol && (first[1] - last[1]).abs() <= tol {
            out.pop();
        } else {
            break;
        }
    }
    // drop collinear middle vertices
    let mut i = 0;
    while out.len() >= 3 && i < out.len() {
        let k = out.len();
        let a = out[(i + k - 1) % k];
        let b = out[i];
        let c = out[(i + 1) % k];
        let cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        if cross.abs() <= tol * scale {
            out.remove(i);
            i = 0;
        } else {
            i += 1;
        }
    }
    out
}

fn canonical_rotation(poly: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    let mut start = 0;
    for i in 1..poly.len() {
        let ai = poly[i][1].atan2(poly[i][0]);
        let a0 = poly[start][1].atan2(poly[start][0]);
        let ri = poly[i][0].hypot(poly[i][1]);
        let r0 = poly[start][0].hypot(poly[start][1]);
        if ai < a0 - 1e-12 || ((ai - a0).abs() <= 1e-12 && ri < r0) {
            start = i;
        }
    }
    let mut out = Vec::with_capacity(poly.len());
    out.extend_from_slice(&poly[start..]);
    out.extend_from_slice(&poly[..start]);
    out
}

// ---------------------------------------------------------------------------
// Halfplane intersection (exact rational)
// ---------------------------------------------------------------------------

/// Exact `f64 -> Rat` conversion; every finite double is a dyadic rational.
pub fn rat(x: f64) -> Rat {
    BigRational::from_float(x).expect("finite float")
}

pub fn rat_i(x: i64) -> Rat {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact counterpart of [`halfplane_intersection`] for rational inputs.
/// Used on the crystalline paths where equality cases must be testable.
pub fn halfplane_intersection_rational(
    constraints: &[([Rat; 2], Rat)],
) -> Result<Vec<[Rat; 2]>, GeometryError> {
    let big = Rat::from_integer(BigInt::from(10u8).pow(12));
    let mut poly: Vec<[Rat; 2]> = vec![
        [big.clone(), big.clone()],
        [-big.clone(), big.clone()],
        [-big.clone(), -big.clone()],
        [big.clone(), -big.clone()],
    ];
    for (a, b) in constraints {
        poly = clip_halfplane_rational(&poly, a, b);
        if poly.len() < 3 {
            return Err(GeometryError::EmptyRegion);
        }
    }
    let half = &big / rat_i(2);
    if poly.iter().any(|v| v[0].abs() >= half || v[1].abs() >= half) {
        return Err(GeometryError::UnboundedRegion);
    }
    let poly = dedupe_polygon_rational(poly);
    if poly.len() < 3 {
        return Err(GeometryError::EmptyRegion);
    }
    Ok(canonical_rotation_rational(poly))
}

fn clip_halfplane_rational(poly: &[[Rat; 2]], a: &[Rat; 2], b: &Rat) -> Vec<[Rat; 2]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let k = poly.len();
    for i in 0..k {
        let p = &poly[i];
        let q = &poly[(i + 1) % k];
        let sp = &a[0] * &p[0] + &a[1] * &p[1] - b;
        let sq = &a[0] * &q[0] + &a[1] * &q[1] - b;
        if sp <= Rat::zero() {
            out.push(p.clone());
        }
        if (sp.is_negative() && sq.is_positive()) || (sp.is_positive() && sq.is_negative()) {
            let t = &sp / (&sp - &sq);
            out.push([
                &p[0] + &t * (&q[0] - &p[0]),
                &p[1] + &t * (&q[1] - &p[1]),
            ]);
        }
    }
    out
}

fn dedupe_polygon_rational(poly: Vec<[Rat; 2]>) -> Vec<[Rat; 2]> {
    let mut out: Vec<[Rat; 2]> = Vec::with_capacity(poly.len());
    for v in poly {
        if out.last().map_or(false, |l| *l == v) {
            continue;
        }
        out.push(v);
    }
    while out.len() >= 2 && out[0] == out[out.len() - 1] {
        out.pop();
    }
    let mut i = 0;
    while out.len() >= 3 && i < out.len() {
        let k = out.len();
        let a = out[(i + k - 1) % k].clone();
        let b = out[i].clone();
        let c = out[(i + 1) % k].clone();
        let cross =
            (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0]);
        if cross.is_zero() {
            out.remove(i);
            i = 0;
        } else {
            i += 1;
        }
    }
    out
}

/// Angular order on nonzero rational points, quadrant first then cross sign.
fn angle_less(p: &[Rat; 2], q: &[Rat; 2]) -> bool {
    fn half(v: &[Rat; 2]) -> u8 {
        // 0 for angle in [0, pi), 1 for [pi, 2 pi)
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    }
    let (hp, hq) = (half(p), half(q));
    if hp != hq {
        return hp < hq;
    }
    let cross = &p[0] * &q[1] - &p[1] * &q[0];
    if !cross.is_zero() {
        return cross.is_positive();
    }
    // same ray: shorter first
    let rp = &p[0] * &p[0] + &p[1] * &p[1];
    let rq = &q[0] * &q[0] + &q[1] * &q[1];
    rp < rq
}

fn canonical_rotation_rational(poly: Vec<[Rat; 2]>) -> Vec<[Rat; 2]> {
    let mut start = 0;
    for i in 1..poly.len() {
        if angle_less(&poly[i], &poly[start]) {
            start = i;
        }
    }
    let mut out = Vec::with_capacity(poly.len());
    out.extend_from_slice(&poly[start..]);
    out.extend_from_slice(&poly[..start]);
    out
}

pub fn shoelace_rational(vertices: &[[Rat; 2]]) -> Rat {
    let k = vertices.len();
    let mut s = Rat::zero();
    for i in 0..k {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % k];
        s += &a[0] * &b[1] - &a[1] * &b[0];
    }
    s / rat_i(2)
}

// ---------------------------------------------------------------------------
// Polytope vertex enumeration (small dimensions)
// ---------------------------------------------------------------------------

/// Vertices of `{x : a_f . x <= 1}` by brute-force facet combinations.
/// Intended for `n <= 4` unit balls with tens of facets.
pub fn polytope_vertices(facets: &[Vector]) -> Result<Vec<Vector>, GeometryError> {
    let n = facets.first().map_or(0, Vector::dim);
    if n < 2 || n > 4 {
        return Err(GeometryError::Degenerate(format!(
            "vertex enumeration supports 2 <= n <= 4, got {n}"
        )));
    }
    let p = facets.len();
    let mut verts: Vec<Vector> = Vec::new();
    let mut combo = vec![0usize; n];
    enumerate_combos(p, n, &mut combo, 0, 0, &mut |idx| {
        let m = Matrix::from_columns(
            &idx.iter()
                .map(|&f| facets[f].clone())
                .collect::<Vec<_>>(),
        )
        .transpose();
        let ones = Vector(vec![1.0; n]);
        if let Some(v) = m.solve(&ones, 1e-9) {
            if !v.is_finite() {
                return;
            }
            let scale = v.norm2().max(1.0);
            if facets.iter().all(|a| a.dot(&v) <= 1.0 + 1e-9 * scale) {
                if !verts
                    .iter()
                    .any(|w| w.sub(&v).norm2() <= 1e-9 * scale)
                {
                    verts.push(v);
                }
            }
        }
    });
    if verts.is_empty() {
        return Err(GeometryError::Degenerate("no vertices found".into()));
    }
    Ok(verts)
}

fn enumerate_combos(
    p: usize,
    k: usize,
    combo: &mut [usize],
    pos: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if pos == k {
        f(combo);
        return;
    }
    for i in start..p {
        combo[pos] = i;
        enumerate_combos(p, k, combo, pos + 1, i + 1, f);
    }
}

/// Exact rational vertices of `{x : a_f . x <= 1}` in `R^3`.
pub fn polytope_vertices_rational_3d(facets: &[[Rat; 3]]) -> Result<Vec<[Rat; 3]>, GeometryError> {
    let p = facets.len();
    let mut verts: Vec<[Rat; 3]> = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            for k in j + 1..p {
                if let Some(v) = solve3_rational(&facets[i], &facets[j], &facets[k]) {
                    let ok = facets.iter().all(|a| {
                        &a[0] * &v[0] + &a[1] * &v[1] + &a[2] * &v[2] <= Rat::one()
                    });
                    if ok && !verts.contains(&v) {
                        verts.push(v);
                    }
                }
            }
        }
    }
    if verts.is_empty() {
        return Err(GeometryError::Degenerate("no vertices found".into()));
    }
    Ok(verts)
}

fn solve3_rational(a: &[Rat; 3], b: &[Rat; 3], c: &[Rat; 3]) -> Option<[Rat; 3]> {
    let det = det3(a, b, c);
    if det.is_zero() {
        return None;
    }
    let one = Rat::one();
    let rhs = [one.clone(), one.clone(), one];
    // Cramer
    let dx = det3(
        &[rhs[0].clone(), a[1].clone(), a[2].clone()],
        &[rhs[1].clone(), b[1].clone(), b[2].clone()],
        &[rhs[2].clone(), c[1].clone(), c[2].clone()],
    );
    let dy = det3(
        &[a[0].clone(), rhs[0].clone(), a[2].clone()],
        &[b[0].clone(), rhs[1].clone(), b[2].clone()],
        &[c[0].clone(), rhs[2].clone(), c[2].clone()],
    );
    let dz = det3(
        &[a[0].clone(), a[1].clone(), rhs[0].clone()],
        &[b[0].clone(), b[1].clone(), rhs[1].clone()],
        &[c[0].clone(), c[1].clone(), rhs[2].clone()],
    );
    Some([&dx / &det, &dy / &det, &dz / &det])
}

fn det3(r0: &[Rat; 3], r1: &[Rat; 3], r2: &[Rat; 3]) -> Rat {
    &r0[0] * (&r1[1] * &r2[2] - &r1[2] * &r2[1])
        - &r0[1] * (&r1[0] * &r2[2] - &r1[2] * &r2[0])
        + &r0[2] * (&r1[0] * &r2[1] - &r1[1] * &r2[0])
}

/// Exact volume of `{x : a_f . x <= 1}` in `R^3` (0 interior assumed):
/// fan decomposition of each facet polygon coned to the origin.
pub fn polytope_volume_rational_3d(facets: &[[Rat; 3]]) -> Result<Rat, GeometryError> {
    let verts = polytope_vertices_rational_3d(facets)?;
    let mut vol = Rat::zero();
    for a in facets {
        let on_facet: Vec<&[Rat; 3]> = verts
            .iter()
            .filter(|v| (&a[0] * &v[0] + &a[1] * &v[1] + &a[2] * &v[2]) == Rat::one())
            .collect();
        if on_facet.len() < 3 {
            continue;
        }
        let ordered = order_facet_cycle(&on_facet);
        for t in 1..ordered.len() - 1 {
            let d = det3(ordered[0], ordered[t], ordered[t + 1]);
            vol += d.abs();
        }
    }
    Ok(vol / rat_i(6))
}

/// Order coplanar points cyclically: project onto two in-plane axes and sort
/// by exact angle comparison around the centroid.
fn order_facet_cycle<'a>(pts: &[&'a [Rat; 3]]) -> Vec<&'a [Rat; 3]> {
    let k = pts.len();
    let kr = rat_i(k as i64);
    let centroid: [Rat; 3] = [
        pts.iter().map(|p| p[0].clone()).sum::<Rat>() / kr.clone(),
        pts.iter().map(|p| p[1].clone()).sum::<Rat>() / kr.clone(),
        pts.iter().map(|p| p[2].clone()).sum::<Rat>() / kr,
    ];
    // in-plane axes from the first two distinct directions
    let e1: [Rat; 3] = [
        &pts[0][0] - &centroid[0],
        &pts[0][1] - &centroid[1],
        &pts[0][2] - &centroid[2],
    ];
    let mut e2 = None;
    for p in pts.iter().skip(1) {
        let d = [
            &p[0] - &centroid[0],
            &p[1] - &centroid[1],
            &p[2] - &centroid[2],
        ];
        let cr = [
            &e1[1] * &d[2] - &e1[2] * &d[1],
            &e1[2] * &d[0] - &e1[0] * &d[2],
            &e1[0] * &d[1] - &e1[1] * &d[0],
        ];
        if !(cr[0].is_zero() && cr[1].is_zero() && cr[2].is_zero()) {
            e2 = Some(d);
            break;
        }
    }
    let e2 = e2.expect("facet points span a plane");
    let mut with_coords: Vec<(usize, [Rat; 2])> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let d = [
                &p[0] - &centroid[0],
                &p[1] - &centroid[1],
                &p[2] - &centroid[2],
            ];
            let x = &d[0] * &e1[0] + &d[1] * &e1[1] + &d[2] * &e1[2];
            let y = &d[0] * &e2[0] + &d[1] * &e2[1] + &d[2] * &e2[2];
            (i, [x, y])
        })
        .collect();
    with_coords.sort_by(|a, b| {
        if a.1 == b.1 {
            std::cmp::Ordering::Equal
        } else if angle_less(&a.1, &b.1) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    with_coords.into_iter().map(|(i, _)| pts[i]).collect()
}

// ---------------------------------------------------------------------------
// Triangle unions and signed overlays in the plane
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct OverlayCell {
    /// Trapezoid corners (CCW): (x0,lo0), (x1,lo1), (x1,hi1), (x0,hi0).
    pub corners: [[f64; 2]; 4],
    /// Indices of the input triangles covering this cell.
    pub cover: Vec<usize>,
}

impl OverlayCell {
    pub fn area(&self) -> f64 {
        shoelace(&self.corners).abs()
    }
}

/// Decompose the plane region covered by the triangles into vertical
/// trapezoids, each annotated with the set of covering triangles. Exact up to
/// floating-point evaluation of edge crossings; degenerate slivers are kept
/// (their area is negligible by construction).
pub fn triangle_overlay(tris: &[[[f64; 2]; 3]]) -> Vec<OverlayCell> {
    if tris.is_empty() {
        return Vec::new();
    }
    let mut xs: Vec<f64> = Vec::new();
    for t in tris {
        for v in t {
            xs.push(v[0]);
        }
    }
    // pairwise edge-crossing abscissae
    let mut edges: Vec<([f64; 2], [f64; 2], usize)> = Vec::new();
    for (i, t) in tris.iter().enumerate() {
        for k in 0..3 {
            edges.push((t[k], t[(k + 1) % 3], i));
        }
    }
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if let Some(x) = segment_crossing_x(edges[i].0, edges[i].1, edges[j].0, edges[j].1) {
                xs.push(x);
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * (a.abs().max(b.abs()).max(1.0)));
    let mut cells = Vec::new();
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 - x0 <= 1e-13 * x1.abs().max(1.0).max(x0.abs()) {
            continue;
        }
        let xm = 0.5 * (x0 + x1);
        // intervals of each triangle at the slab
        let mut spans: Vec<(usize, [f64; 2], [f64; 2])> = Vec::new();
        for (i, t) in tris.iter().enumerate() {
            if let (Some(m), Some(a), Some(b)) = (
                triangle_span(t, xm),
                triangle_span(t, x0 + 1e-13 * (x1 - x0)),
                triangle_span(t, x1 - 1e-13 * (x1 - x0)),
            ) {
                let _ = m;
                spans.push((i, a, b));
            }
        }
        if spans.is_empty() {
            continue;
        }
        // order bounds by value at midpoint; structure is constant in the slab
        let mut marks: Vec<(f64, f64, f64, usize, bool)> = Vec::new(); // (mid, left, right, tri, is_hi)
        for (i, a, b) in &spans {
            marks.push((0.5 * (a[0] + b[0]), a[0], b[0], *i, false));
            marks.push((0.5 * (a[1] + b[1]), a[1], b[1], *i, true));
        }
        marks.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut active: Vec<usize> = Vec::new();
        for w2 in marks.windows(2) {
            let (m0, m1) = (&w2[0], &w2[1]);
            if m0.4 {
                active.retain(|&t| t != m0.3);
            } else {
                active.push(m0.3);
            }
            if !active.is_empty() && m1.0 > m0.0 {
                let mut cover = active.clone();
                cover.sort_unstable();
                cells.push(OverlayCell {
                    corners: [[x0, m0.1], [x1, m0.2], [x1, m1.2], [x0, m1.1]],
                    cover,
                });
            }
        }
    }
    cells
}

fn segment_crossing_x(p0: [f64; 2], p1: [f64; 2], q0: [f64; 2], q1: [f64; 2]) -> Option<f64> {
    let d1 = [p1[0] - p0[0], p1[1] - p0[1]];
    let d2 = [q1[0] - q0[0], q1[1] - q0[1]];
    let den = d1[0] * d2[1] - d1[1] * d2[0];
    if den.abs() <= 1e-15 * (d1[0].abs() + d1[1].abs()) * (d2[0].abs() + d2[1].abs()) {
        return None;
    }
    let r = [q0[0] - p0[0], q0[1] - p0[1]];
    let t = (r[0] * d2[1] - r[1] * d2[0]) / den;
    let s = (r[0] * d1[1] - r[1] * d1[0]) / den;
    if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&s) {
        Some(p0[0] + t * d1[0])
    } else {
        None
    }
}

/// Vertical extent `[lo, hi]` of a triangle at abscissa `x`, if it intersects.
fn triangle_span(t: &[[f64; 2]; 3], x: f64) -> Option<[f64; 2]> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..3 {
        let a = t[k];
        let b = t[(k + 1) % 3];
        if (a[0] - b[0]).abs() <= 1e-300 {
            if (a[0] - x).abs() <= 1e-13 * a[0].abs().max(1.0) {
                lo = lo.min(a[1].min(b[1]));
                hi = hi.max(a[1].max(b[1]));
            }
            continue;
        }
        let t01 = (x - a[0]) / (b[0] - a[0]);
        if (-1e-12..=1.0 + 1e-12).contains(&t01) {
            let y = a[1] + t01 * (b[1] - a[1]);
            lo = lo.min(y);
            hi = hi.max(y);
        }
    }
    if lo <= hi {
        Some([lo, hi])
    } else {
        None
    }
}

/// Area of the union of planar triangles.
pub fn union_area(tris: &[[[f64; 2]; 3]]) -> f64 {
    triangle_overlay(tris).iter().map(OverlayCell::area).sum()
}

// ---------------------------------------------------------------------------
// Seeded Grassmannian sampling
// ---------------------------------------------------------------------------

/// Deterministic standard normal via Box-Muller on ChaCha output.
pub fn gaussian(rng: &mut ChaCha12Rng) -> f64 {
    loop {
        let u1: f64 = rng.gen::<f64>();
        let u2: f64 = rng.gen::<f64>();
        if u1 > 1e-300 {
            return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        }
    }
}

pub fn gaussian_vector(n: usize, rng: &mut ChaCha12Rng) -> Vector {
    Vector((0..n).map(|_| gaussian(rng)).collect())
}

/// Deterministic samples from the rotation-invariant distribution on the
/// Grassmannian of `m`-planes in `R^n`: orthonormalized Gaussian matrices.
pub fn sample_subspaces(n: usize, m: usize, count: usize, seed: u64) -> Vec<Subspace> {
    assert!(m >= 1 && m <= n, "require 1 <= m <= n");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let cols: Vec<Vector> = (0..m).map(|_| gaussian_vector(n, &mut rng)).collect();
        if let Ok(s) = orthonormalize(&cols) {
            out.push(s);
        }
    }
    out
}

/// Deterministic unit vectors on the sphere of `R^n`.
pub fn sample_unit_vectors(n: usize, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = gaussian_vector(n, &mut rng);
        let nv = v.norm2();
        if nv > 1e-8 {
            out.push(v.scale(1.0 / nv));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector(c.to_vec())
    }

    #[test]
    fn simplex_volume_unit_right_triangle() {
        let vol = simplex_volume(&[v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        assert!((vol - 0.5).abs() < 1e-15);
    }

    #[test]
    fn simplex_volume_embedding_invariance() {
        let vol =
            simplex_volume(&[v(&[0.0, 0.0, 0.0]), v(&[1.0, 0.0, 0.0]), v(&[1.0, 1.0, 0.0])])
                .unwrap();
        assert!((vol - 0.5).abs() < 1e-15);
    }

    #[test]
    fn simplex_volume_collinear_is_zero() {
        let vol = simplex_volume(&[v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[2.0, 0.0])]).unwrap();
        assert!(vol.abs() < 1e-12);
    }

    #[test]
    fn simplex_volume_dimension_mismatch() {
        assert!(matches!(
            simplex_volume(&[v(&[0.0, 0.0]), v(&[1.0, 0.0, 0.0])]),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn wedge_norm_examples() {
        let e1 = v(&[1.0, 0.0]);
        let e2 = v(&[0.0, 1.0]);
        assert!((wedge_norm(&e1, &e2) - 1.0).abs() < 1e-15);
        assert!(wedge_norm(&e1, &e1).abs() < 1e-15);
        // Gram determinant by hand: |(1,0,0) wedge (1,1,0)| = 1
        assert!((wedge_norm(&v(&[1.0, 0.0, 0.0]), &v(&[1.0, 1.0, 0.0])) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orthonormalize_examples() {
        let s = orthonormalize(&[v(&[2.0, 0.0, 0.0])]).unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.basis()[0].0[0] - 1.0).abs() < 1e-15);

        let s = orthonormalize(&[v(&[1.0, 1.0, 0.0]), v(&[1.0, 0.0, 0.0])]).unwrap();
        assert_eq!(s.dim(), 2);
        // spans the e1e2 plane
        let p = s.project(&v(&[0.3, -0.7, 0.0]));
        assert!((p.0[0] - 0.3).abs() < 1e-12 && (p.0[1] + 0.7).abs() < 1e-12);
        assert!(p.0[2].abs() < 1e-12);

        match orthonormalize(&[v(&[1.0, 0.0]), v(&[2.0, 0.0])]) {
            Err(GeometryError::RankDeficient { index }) => assert_eq!(index, 1),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn halfplane_square_and_triangle() {
        let sq = halfplane_intersection(&[
            ([1.0, 0.0], 1.0),
            ([-1.0, 0.0], 1.0),
            ([0.0, 1.0], 1.0),
            ([0.0, -1.0], 1.0),
        ])
        .unwrap();
        assert_eq!(sq.vertices.len(), 4);
        assert!((sq.area() - 4.0).abs() < 1e-9);

        let tri = halfplane_intersection(&[
            ([-1.0, 0.0], 0.5),
            ([0.0, -1.0], 0.5),
            ([1.0, 1.0], 1.0),
        ])
        .unwrap();
        assert_eq!(tri.vertices.len(), 3);

        assert!(matches!(
            halfplane_intersection(&[([1.0, 0.0], 1.0)]),
            Err(GeometryError::UnboundedRegion)
        ));
    }

    #[test]
    fn halfplane_drops_redundant() {
        let sq = halfplane_intersection(&[
            ([1.0, 0.0], 1.0),
            ([-1.0, 0.0], 1.0),
            ([0.0, 1.0], 1.0),
            ([0.0, -1.0], 1.0),
            ([1.0, 0.0], 5.0), // redundant
        ])
        .unwrap();
        assert_eq!(sq.vertices.len(), 4);
    }

    #[test]
    fn rational_halfplane_square() {
        let one = Rat::one();
        let cs: Vec<([Rat; 2], Rat)> = vec![
            ([rat_i(1), rat_i(0)], one.clone()),
            ([rat_i(-1), rat_i(0)], one.clone()),
            ([rat_i(0), rat_i(1)], one.clone()),
            ([rat_i(0), rat_i(-1)], one.clone()),
        ];
        let p = halfplane_intersection_rational(&cs).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(shoelace_rational(&p), rat_i(4));
    }

    #[test]
    fn cube_volume_rational() {
        let one = Rat::one();
        let mut facets = Vec::new();
        for i in 0..3 {
            for s in [1i64, -1] {
                let mut a = [Rat::zero(), Rat::zero(), Rat::zero()];
                a[i] = rat_i(s) * one.clone();
                facets.push(a);
            }
        }
        let vol = polytope_volume_rational_3d(&facets).unwrap();
        assert_eq!(vol, rat_i(8));
        let verts = polytope_vertices_rational_3d(&facets).unwrap();
        assert_eq!(verts.len(), 8);
    }

    #[test]
    fn octahedron_vertices_f64() {
        // l1 ball facets: all sign patterns
        let mut facets = Vec::new();
        for sx in [1.0, -1.0] {
            for sy in [1.0, -1.0] {
                for sz in [1.0, -1.0] {
                    facets.push(v(&[sx, sy, sz]));
                }
            }
        }
        let verts = polytope_vertices(&facets).unwrap();
        assert_eq!(verts.len(), 6);
    }

    #[test]
    fn union_area_disjoint_and_overlap() {
        let t1 = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let t2 = [[10.0, 0.0], [11.0, 0.0], [10.0, 1.0]];
        assert!((union_area(&[t1, t2]) - 1.0).abs() < 1e-10);
        // identical triangles: union = single area
        assert!((union_area(&[t1, t1]) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn sampling_is_deterministic_and_orthonormal() {
        let a = sample_subspaces(3, 2, 5, 7);
        let b = sample_subspaces(3, 2, 5, 7);
        for (x, y) in a.iter().zip(&b) {
            for (u, w) in x.basis().iter().zip(y.basis()) {
                assert_eq!(u.0, w.0);
            }
        }
        for s in &a {
            for u in s.basis() {
                assert!((u.norm2() - 1.0).abs() < 1e-12);
            }
            assert!(s.basis()[0].dot(&s.basis()[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_moment_matches_rotation_invariance() {
        // E <col1, e1>^2 = 1/3 in R^3; Monte-Carlo oracle with 1e5 samples
        let samples = sample_subspaces(3, 2, 100_000, 11);
        let mean: f64 = samples
            .iter()
            .map(|s| {
                let c = s.basis()[0].0[0];
                c * c
            })
            .sum::<f64>()
            / samples.len() as f64;
        assert!(
            (mean - 1.0 / 3.0).abs() < 0.01,
            "moment {mean} deviates from 1/3"
        );
    }
}
