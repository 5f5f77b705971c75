//! Norms on `R^n`, unit-ball cross-sections and Busemann-Hausdorff densities.
//!
//! A norm is represented as Euclidean, `l_p`, or crystalline (unit ball given
//! by facet functionals `a_f . x <= 1`, listed with both signs). The density
//! `psi(W) = alpha(m) / H^m(W cap B)` converts Euclidean `m`-measure on a
//! subspace `W` into Hausdorff measure for the norm. Cross-section volumes are
//! exact for crystalline norms in the dimensions this crate works in, and
//! quadrature with a reported error estimate otherwise.
//!
//! The [`exact`] submodule evaluates `H^m(simplex) / alpha(m)` as an exact
//! rational for crystalline data, which is what makes equality cases and the
//! exact-LP Plateau path testable.

use crate::geometry::{
    self, halfplane_intersection, polytope_vertices, rat, rat_i, Matrix, Polygon2, Rat, Subspace,
    Vector,
};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

#[derive(Clone, Debug, PartialEq)]
pub enum NormError {
    Asymmetric(usize),
    NotSpanning,
    BadExponent(f64),
    DimensionMismatch { expected: usize, got: usize },
    QuadratureBudget { estimate: f64, budget: f64 },
    Unsupported(String),
    Geometry(geometry::GeometryError),
}

impl fmt::Display for NormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormError::Asymmetric(i) => write!(f, "facet {i} has no mirror facet"),
            NormError::NotSpanning => write!(f, "facet functionals do not span the space"),
            NormError::BadExponent(p) => write!(f, "invalid exponent p = {p}"),
            NormError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            NormError::QuadratureBudget { estimate, budget } => {
                write!(
                    f,
                    "quadrature error {estimate:.3e} exceeds budget {budget:.3e}"
                )
            }
            NormError::Unsupported(s) => write!(f, "unsupported: {s}"),
            NormError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for NormError {}

impl From<geometry::GeometryError> for NormError {
    fn from(e: geometry::GeometryError) -> Self {
        NormError::Geometry(e)
    }
}

// ---------------------------------------------------------------------------
// alpha(m) and the Gamma function
// ---------------------------------------------------------------------------

/// Lebesgue measure of the Euclidean unit `m`-ball,
/// `alpha(m) = pi^{m/2} / Gamma(m/2 + 1)`, evaluated in closed form.
pub fn alpha(m: usize) -> f64 {
    let pi = std::f64::consts::PI;
    if m % 2 == 0 {
        // pi^k / k!
        let k = m / 2;
        let mut v = 1.0;
        for i in 1..=k {
            v *= pi / i as f64;
        }
        v
    } else {
        // Gamma(m/2 + 1) = (m/2)(m/2 - 1)...(1/2) sqrt(pi)
        let mut g = pi.sqrt();
        let mut x = m as f64 / 2.0;
        while x > 0.0 {
            g *= x;
            x -= 1.0;
        }
        pi.powf(m as f64 / 2.0) / g
    }
}

/// Lanczos approximation of Gamma, used only for `l_p` ball volumes.
pub fn gamma_fn(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_fn(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = C[0];
        let t = x + G + 0.5;
        for (i, &c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

// ---------------------------------------------------------------------------
// Norm representation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum NormKind {
    Euclidean,
    /// `p >= 1`; `f64::INFINITY` is the max norm.
    Lp(f64),
    Crystalline(Crystalline),
}

#[derive(Clone, Debug)]
pub struct Crystalline {
    /// Facet functionals, both signs listed: `B = { x : a_f . x <= 1 }`.
    pub facets: Vec<Vector>,
    vertices: OnceLock<Vec<Vector>>,
}

#[derive(Clone, Debug)]
pub struct Norm {
    dim: usize,
    kind: NormKind,
}

impl Norm {
    pub fn euclidean(n: usize) -> Norm {
        Norm {
            dim: n,
            kind: NormKind::Euclidean,
        }
    }

    pub fn lp(n: usize, p: f64) -> Result<Norm, NormError> {
        if !(p >= 1.0) {
            return Err(NormError::BadExponent(p));
        }
        Ok(Norm {
            dim: n,
            kind: NormKind::Lp(p),
        })
    }

    pub fn l1(n: usize) -> Norm {
        Norm::lp(n, 1.0).unwrap()
    }

    pub fn linf(n: usize) -> Norm {
        Norm::lp(n, f64::INFINITY).unwrap()
    }

    /// Crystalline norm from facet functionals. Checks central symmetry and
    /// that the functionals span (so the ball is bounded).
    pub fn crystalline(facets: Vec<Vector>) -> Result<Norm, NormError> {
        let n = facets.first().map_or(0, Vector::dim);
        if n == 0 {
            return Err(NormError::NotSpanning);
        }
        for (i, a) in facets.iter().enumerate() {
            if a.dim() != n {
                return Err(NormError::DimensionMismatch {
                    expected: n,
                    got: a.dim(),
                });
            }
            let scale = a.norm2();
            let has_mirror = facets
                .iter()
                .any(|b| a.add(b).norm2() <= 1e-9 * scale.max(1.0));
            if !has_mirror {
                return Err(NormError::Asymmetric(i));
            }
        }
        if orthonormalize_rank(&facets) < n {
            return Err(NormError::NotSpanning);
        }
        Ok(Norm {
            dim: n,
            kind: NormKind::Crystalline(Crystalline {
                facets,
                vertices: OnceLock::new(),
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    /// Norm of `x`.
    pub fn eval(&self, x: &Vector) -> f64 {
        debug_assert_eq!(x.dim(), self.dim);
        match &self.kind {
            NormKind::Euclidean => x.norm2(),
            NormKind::Lp(p) => lp_eval(*p, x),
            NormKind::Crystalline(c) => {
                c.facets.iter().map(|a| a.dot(x)).fold(0.0_f64, f64::max)
            }
        }
    }

    /// Support function of the unit ball, `h(u) = max { u . x : ||x|| <= 1 }`;
    /// this is the dual norm of `u`.
    pub fn dual_sup(&self, u: &Vector) -> f64 {
        match &self.kind {
            NormKind::Euclidean => u.norm2(),
            NormKind::Lp(p) => {
                let q = dual_exponent(*p);
                lp_eval(q, u)
            }
            NormKind::Crystalline(_) => self
                .unit_ball_vertices()
                .expect("crystalline vertices")
                .iter()
                .map(|v| v.dot(u))
                .fold(0.0_f64, f64::max),
        }
    }

    /// Vertices of the unit ball (crystalline only, ambient dim <= 4).
    pub fn unit_ball_vertices(&self) -> Option<&[Vector]> {
        match &self.kind {
            NormKind::Crystalline(c) => Some(
                c.vertices
                    .get_or_init(|| polytope_vertices(&c.facets).expect("bounded ball"))
                    .as_slice(),
            ),
            _ => None,
        }
    }

    /// Crystalline representation when one exists exactly (`l_1`, `l_inf`, or
    /// already crystalline).
    pub fn as_crystalline(&self) -> Option<Norm> {
        match &self.kind {
            NormKind::Crystalline(_) => Some(self.clone()),
            NormKind::Lp(p) if *p == f64::INFINITY => {
                let n = self.dim;
                let mut facets = Vec::with_capacity(2 * n);
                for i in 0..n {
                    facets.push(Vector::unit(n, i));
                    facets.push(Vector::unit(n, i).scale(-1.0));
                }
                Some(Norm::crystalline(facets).unwrap())
            }
            NormKind::Lp(p) if *p == 1.0 => {
                let n = self.dim;
                let mut facets = Vec::new();
                for mask in 0..(1u32 << n) {
                    let mut a = vec![0.0; n];
                    for (i, ai) in a.iter_mut().enumerate() {
                        *ai = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
                    }
                    facets.push(Vector(a));
                }
                Some(Norm::crystalline(facets).unwrap())
            }
            _ => None,
        }
    }

    /// Lipschitz constant of a linear map with respect to this norm on both
    /// sides. Exact for crystalline norms (max over ball vertices), sampled
    /// lower estimate otherwise.
    pub fn lipschitz(&self, map: &Matrix) -> (f64, bool) {
        if let Some(cr) = self.as_crystalline() {
            let verts = cr.unit_ball_vertices().unwrap().to_vec();
            let v = verts
                .iter()
                .map(|v| self.eval(&map.matvec(v)))
                .fold(0.0_f64, f64::max);
            (v, true)
        } else if matches!(self.kind, NormKind::Euclidean) {
            (map.operator_norm(), true)
        } else {
            let dirs = geometry::sample_unit_vectors(self.dim, 2048, 0x11b);
            let v = dirs
                .iter()
                .map(|u| {
                    let nu = self.eval(u);
                    self.eval(&map.matvec(u)) / nu
                })
                .fold(0.0_f64, f64::max);
            (v, false)
        }
    }
}

fn lp_eval(p: f64, x: &Vector) -> f64 {
    if p == f64::INFINITY {
        x.0.iter().map(|a| a.abs()).fold(0.0_f64, f64::max)
    } else if p == 1.0 {
        x.0.iter().map(|a| a.abs()).sum()
    } else if p == 2.0 {
        x.norm2()
    } else {
        let s: f64 = x.0.iter().map(|a| a.abs().powf(p)).sum();
        s.powf(1.0 / p)
    }
}

fn dual_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p == f64::INFINITY {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn orthonormalize_rank(vectors: &[Vector]) -> usize {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for q in &basis {
            r = r.axpy(-q.dot(&r), q);
        }
        if r.norm2() > 1e-9 * v.norm2().max(1.0) {
            basis.push(r.scale(1.0 / r.norm2()));
        }
    }
    basis.len()
}

// ---------------------------------------------------------------------------
// Norm distance
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub value: f64,
    /// True when computed by vertex enumeration; false for a sampled lower
    /// bound.
    pub exact: bool,
}

/// The multiplicative distance `delta(nu1, nu2) = inf { l : B_1 in l B_2 and
/// B_2 in l B_1 }`. Exact for pairs with crystalline representations or a
/// crystalline/Euclidean mix; otherwise a sampled lower bound.
pub fn norm_distance(nu1: &Norm, nu2: &Norm, samples: usize, seed: u64) -> DistanceEstimate {
    assert_eq!(nu1.dim(), nu2.dim());
    let n = nu1.dim();
    match (nu1.as_crystalline(), nu2.as_crystalline()) {
        (Some(c1), Some(c2)) => {
            let m1 = c1
                .unit_ball_vertices()
                .unwrap()
                .iter()
                .map(|v| nu2.eval(v))
                .fold(0.0_f64, f64::max);
            let m2 = c2
                .unit_ball_vertices()
                .unwrap()
                .iter()
                .map(|v| nu1.eval(v))
                .fold(0.0_f64, f64::max);
            DistanceEstimate {
                value: m1.max(m2).max(1.0),
                exact: true,
            }
        }
        (Some(c), None) if matches!(nu2.kind, NormKind::Euclidean | NormKind::Lp(_))
            && is_euclidean(nu2) =>
        {
            DistanceEstimate {
                value: crystalline_euclidean_distance(&c),
                exact: true,
            }
        }
        (None, Some(c)) if is_euclidean(nu1) => DistanceEstimate {
            value: crystalline_euclidean_distance(&c),
            exact: true,
        },
        _ => {
            if norm_kinds_equal(nu1, nu2) {
                return DistanceEstimate {
                    value: 1.0,
                    exact: true,
                };
            }
            let mut dirs = geometry::sample_unit_vectors(n, samples, seed);
            for i in 0..n {
                dirs.push(Vector::unit(n, i));
            }
            dirs.push(Vector(vec![1.0 / (n as f64).sqrt(); n]));
            let mut best = 1.0_f64;
            for u in &dirs {
                let (a, b) = (nu1.eval(u), nu2.eval(u));
                best = best.max(a / b).max(b / a);
            }
            DistanceEstimate {
                value: best,
                exact: false,
            }
        }
    }
}

fn is_euclidean(norm: &Norm) -> bool {
    match norm.kind() {
        NormKind::Euclidean => true,
        NormKind::Lp(p) => *p == 2.0,
        _ => false,
    }
}

fn norm_kinds_equal(a: &Norm, b: &Norm) -> bool {
    match (&a.kind, &b.kind) {
        (NormKind::Euclidean, NormKind::Euclidean) => true,
        (NormKind::Lp(p), NormKind::Lp(q)) => p == q,
        (NormKind::Lp(p), NormKind::Euclidean) | (NormKind::Euclidean, NormKind::Lp(p)) => {
            *p == 2.0
        }
        _ => false,
    }
}

fn crystalline_euclidean_distance(c: &Norm) -> f64 {
    let outer = c
        .unit_ball_vertices()
        .unwrap()
        .iter()
        .map(Vector::norm2)
        .fold(0.0_f64, f64::max);
    let facets = match &c.kind {
        NormKind::Crystalline(cr) => &cr.facets,
        _ => unreachable!(),
    };
    // sup over the Euclidean sphere of the crystalline norm = max |a_f|
    let inner = facets.iter().map(Vector::norm2).fold(0.0_f64, f64::max);
    outer.max(inner).max(1.0)
}

// ---------------------------------------------------------------------------
// Sections of the unit ball
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum SectionBall {
    /// Exact polygon in the subspace basis coordinates (crystalline, dim 2).
    Polygon(Polygon2),
    /// Radial samples `r(u) = 1 / ||u||` on a quadrature grid of directions.
    Radial(RadialSamples),
}

#[derive(Clone, Debug)]
pub struct RadialSamples {
    /// Ambient unit directions inside the subspace.
    pub directions: Vec<Vector>,
    pub radii: Vec<f64>,
}

/// Facet functionals restricted to the subspace coordinates; facets vanishing
/// on `W` impose no constraint there and are dropped.
fn restricted_facets_2d(facets: &[Vector], w: &Subspace) -> Vec<([f64; 2], f64)> {
    facets
        .iter()
        .filter_map(|a| {
            let c = w.coords(a);
            let mag = (c[0] * c[0] + c[1] * c[1]).sqrt();
            if mag <= 1e-14 {
                None
            } else {
                Some(([c[0], c[1]], 1.0))
            }
        })
        .collect()
}

/// Cross-section `W cap B` of the unit ball.
pub fn section_ball(norm: &Norm, w: &Subspace) -> Result<SectionBall, NormError> {
    if let (Some(cr), 2) = (norm.as_crystalline(), w.dim()) {
        let facets = match cr.kind() {
            NormKind::Crystalline(c) => &c.facets,
            _ => unreachable!(),
        };
        let poly = halfplane_intersection(&restricted_facets_2d(facets, w))?;
        return Ok(SectionBall::Polygon(poly));
    }
    let count = 2048;
    let mut directions = Vec::with_capacity(count);
    let mut radii = Vec::with_capacity(count);
    match w.dim() {
        1 => {
            let u = w.basis()[0].clone();
            radii.push(1.0 / norm.eval(&u));
            directions.push(u);
        }
        2 => {
            for i in 0..count {
                let th = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
                let u = w.basis()[0].scale(th.cos()).axpy(th.sin(), &w.basis()[1]);
                radii.push(1.0 / norm.eval(&u));
                directions.push(u);
            }
        }
        _ => {
            for u in geometry::sample_unit_vectors(w.dim(), count, 0x5ec7) {
                let amb = w.embed(&u.0);
                radii.push(1.0 / norm.eval(&amb));
                directions.push(amb);
            }
        }
    }
    Ok(SectionBall::Radial(RadialSamples { directions, radii }))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Estimated absolute error (0 on exact paths).
    pub error: f64,
    pub exact: bool,
}

/// Euclidean `m`-volume of `W cap B`, `m = dim W`. Exact for crystalline
/// norms in the section dimensions this crate uses; quadrature with a
/// Richardson error estimate otherwise.
pub fn section_volume(norm: &Norm, w: &Subspace) -> Result<VolumeEstimate, NormError> {
    let n = norm.dim();
    if w.ambient_dim() != n {
        return Err(NormError::DimensionMismatch {
            expected: n,
            got: w.ambient_dim(),
        });
    }
    let m = w.dim();
    if m == n {
        return ball_volume(norm);
    }
    if matches!(norm.kind, NormKind::Euclidean) || matches!(norm.kind, NormKind::Lp(p) if p == 2.0)
    {
        return Ok(VolumeEstimate {
            value: alpha(m),
            error: 0.0,
            exact: true,
        });
    }
    match m {
        1 => {
            let u = &w.basis()[0];
            Ok(VolumeEstimate {
                value: 2.0 / norm.eval(u),
                error: 0.0,
                exact: true,
            })
        }
        2 => {
            if let Some(cr) = norm.as_crystalline() {
                match section_ball(&cr, w)? {
                    SectionBall::Polygon(p) => Ok(VolumeEstimate {
                        value: p.area(),
                        error: 0.0,
                        exact: true,
                    }),
                    SectionBall::Radial(_) => unreachable!(),
                }
            } else {
                let f = |th: f64| {
                    let u = w.basis()[0].scale(th.cos()).axpy(th.sin(), &w.basis()[1]);
                    let r = 1.0 / norm.eval(&u);
                    r * r / 2.0
                };
                let (value, error) = circle_trapezoid(&f, 2048);
                Ok(VolumeEstimate {
                    value,
                    error,
                    exact: false,
                })
            }
        }
        3 => {
            if let Some(cr) = norm.as_crystalline() {
                let facets = match cr.kind() {
                    NormKind::Crystalline(c) => c.facets.clone(),
                    _ => unreachable!(),
                };
                let restricted: Vec<Vector> = facets
                    .iter()
                    .map(|a| Vector(w.coords(a)))
                    .filter(|c| c.norm2() > 1e-14)
                    .collect();
                let value = polytope_volume_3d(&restricted)?;
                Ok(VolumeEstimate {
                    value,
                    error: 0.0,
                    exact: true,
                })
            } else {
                let f = |u: &Vector| {
                    let amb = w.embed(&u.0);
                    let r = 1.0 / norm.eval(&amb);
                    r * r * r / 3.0
                };
                let budget = 1e-5;
                let (value, error) = adaptive_sphere_integral(&f, budget)?;
                Ok(VolumeEstimate {
                    value,
                    error,
                    exact: false,
                })
            }
        }
        _ => Err(NormError::Unsupported(format!(
            "section volume for m = {m} in n = {n}"
        ))),
    }
}

/// Euclidean volume of the full unit ball `B`.
pub fn ball_volume(norm: &Norm) -> Result<VolumeEstimate, NormError> {
    let n = norm.dim();
    match &norm.kind {
        NormKind::Euclidean => Ok(VolumeEstimate {
            value: alpha(n),
            error: 0.0,
            exact: true,
        }),
        NormKind::Lp(p) => {
            // vol = (2 Gamma(1 + 1/p))^n / Gamma(1 + n/p)
            let v = if *p == f64::INFINITY {
                2.0_f64.powi(n as i32)
            } else {
                (2.0 * gamma_fn(1.0 + 1.0 / p)).powi(n as i32) / gamma_fn(1.0 + n as f64 / p)
            };
            Ok(VolumeEstimate {
                value: v,
                error: 0.0,
                exact: true,
            })
        }
        NormKind::Crystalline(c) => match n {
            2 => {
                let cs: Vec<([f64; 2], f64)> = c
                    .facets
                    .iter()
                    .map(|a| ([a.0[0], a.0[1]], 1.0))
                    .collect();
                let poly = halfplane_intersection(&cs)?;
                Ok(VolumeEstimate {
                    value: poly.area(),
                    error: 0.0,
                    exact: true,
                })
            }
            3 => Ok(VolumeEstimate {
                value: polytope_volume_3d(&c.facets)?,
                error: 0.0,
                exact: true,
            }),
            4 => {
                let f = |u: &Vector| {
                    let r = 1.0 / norm.eval(u);
                    r.powi(4) / 4.0
                };
                let (value, error) = s3_product_integral(&f, 48);
                Ok(VolumeEstimate {
                    value,
                    error,
                    exact: false,
                })
            }
            _ => Err(NormError::Unsupported(format!("ball volume in n = {n}"))),
        },
    }
}

/// Quadrature estimate of the ball volume regardless of exact paths; the
/// second computation route in regression tests.
pub fn ball_volume_quadrature(norm: &Norm, budget: f64) -> Result<VolumeEstimate, NormError> {
    let n = norm.dim();
    match n {
        2 => {
            let f = |th: f64| {
                let u = Vector(vec![th.cos(), th.sin()]);
                let r = 1.0 / norm.eval(&u);
                r * r / 2.0
            };
            let mut points = 2048;
            loop {
                let (value, error) = circle_trapezoid(&f, points);
                if error <= budget * value.max(1.0) {
                    return Ok(VolumeEstimate {
                        value,
                        error,
                        exact: false,
                    });
                }
                if points >= 1 << 20 {
                    return Err(NormError::QuadratureBudget {
                        estimate: error,
                        budget,
                    });
                }
                points *= 4;
            }
        }
        3 => {
            let f = |u: &Vector| {
                let r = 1.0 / norm.eval(u);
                r * r * r / 3.0
            };
            let (value, error) = adaptive_sphere_integral(&f, budget)?;
            Ok(VolumeEstimate {
                value,
                error,
                exact: false,
            })
        }
        _ => Err(NormError::Unsupported(format!(
            "quadrature ball volume in n = {n}"
        ))),
    }
}

/// The Busemann-Hausdorff density `psi(W) = alpha(m) / H^m(W cap B)`.
/// `dim W = n` gives the full-space Haar factor.
pub fn psi(norm: &Norm, w: &Subspace) -> Result<f64, NormError> {
    if is_euclidean(norm) {
        return Ok(1.0);
    }
    let m = w.dim();
    let sv = section_volume(norm, w)?;
    Ok(alpha(m) / sv.value)
}

/// Busemann's hyperplane function
/// `b(u) = |u| alpha(n-1) / H^{n-1}(B cap u^perp)`; convex by Busemann's
/// theorem, hence a norm on `X`.
pub fn busemann_b(norm: &Norm, u: &Vector) -> Result<f64, NormError> {
    let nu = u.norm2();
    if nu == 0.0 {
        return Ok(0.0);
    }
    let w = geometry::hyperplane_orthogonal_to(u)?;
    let sv = section_volume(norm, &w)?;
    Ok(nu * alpha(norm.dim() - 1) / sv.value)
}

// ---------------------------------------------------------------------------
// Quadrature helpers
// ---------------------------------------------------------------------------

/// Periodic trapezoid on `[0, 2 pi)` with one Richardson refinement;
/// returns (extrapolated value, error estimate).
pub fn circle_trapezoid(f: &dyn Fn(f64) -> f64, points: usize) -> (f64, f64) {
    let eval = |k: usize| -> f64 {
        let h = 2.0 * std::f64::consts::PI / k as f64;
        (0..k).map(|i| f(i as f64 * h)).sum::<f64>() * h
    };
    let t1 = eval(points);
    let t2 = eval(2 * points);
    let extrap = (4.0 * t2 - t1) / 3.0;
    (extrap, (t2 - t1).abs() / 3.0 + 1e-14 * t2.abs())
}

/// Adaptive integration of `f` over the unit sphere `S^2`: recursive
/// spherical-triangle subdivision with the degree-2 edge-midpoint rule.
/// Refinement concentrates along the kink curves of piecewise-smooth
/// integrands (crystalline radial functions), so tight budgets stay cheap.
pub fn adaptive_sphere_integral(
    f: &dyn Fn(&Vector) -> f64,
    budget: f64,
) -> Result<(f64, f64), NormError> {
    type P = [f64; 3];
    fn normalize(v: P) -> P {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    }
    fn mid(a: P, b: P) -> P {
        normalize([a[0] + b[0], a[1] + b[1], a[2] + b[2]])
    }
    fn spherical_area(a: P, b: P, c: P) -> f64 {
        let ang = |p: P, q: P| {
            (p[0] * q[0] + p[1] * q[1] + p[2] * q[2])
                .clamp(-1.0, 1.0)
                .acos()
        };
        let (sa, sb, sc) = (ang(b, c), ang(a, c), ang(a, b));
        let s = (sa + sb + sc) / 2.0;
        let t = (s / 2.0).tan()
            * ((s - sa) / 2.0).tan()
            * ((s - sb) / 2.0).tan()
            * ((s - sc) / 2.0).tan();
        4.0 * t.max(0.0).sqrt().atan()
    }
    struct Rec<'a> {
        f: &'a dyn Fn(&Vector) -> f64,
        evals: usize,
    }
    impl Rec<'_> {
        fn rule(&mut self, a: P, b: P, c: P) -> f64 {
            let area = spherical_area(a, b, c);
            let s = [mid(a, b), mid(b, c), mid(c, a)]
                .iter()
                .map(|m| (self.f)(&Vector(m.to_vec())))
                .sum::<f64>();
            self.evals += 3;
            area * s / 3.0
        }
        fn go(&mut self, a: P, b: P, c: P, tol: f64, depth: usize) -> (f64, f64) {
            let coarse = self.rule(a, b, c);
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            let children = [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)];
            let mut fine = 0.0;
            for (p, q, r) in children {
                fine += self.rule(p, q, r);
            }
            let diff = (fine - coarse).abs();
            if diff <= tol || depth >= 16 || self.evals > 30_000_000 {
                return (fine, diff);
            }
            // the residual error concentrates along kink curves, where the
            // active cell count doubles per level; a 0.45 geometric split
            // keeps the total budget summable while letting the frontier
            // refine deep enough
            let mut v = 0.0;
            let mut e = 0.0;
            for (p, q, r) in children {
                let (vi, ei) = self.go(p, q, r, tol * 0.45, depth + 1);
                v += vi;
                e += ei;
            }
            (v, e)
        }
    }
    let mut octants: Vec<[P; 3]> = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                octants.push([[sx, 0.0, 0.0], [0.0, sy, 0.0], [0.0, 0.0, sz]]);
            }
        }
    }
    let mut rec = Rec { f, evals: 0 };
    // rough magnitude for the absolute tolerance split
    let rough: f64 = octants
        .iter()
        .map(|t| rec.rule(t[0], t[1], t[2]))
        .sum();
    let tol_total = budget * rough.abs().max(1e-12) / 1024.0;
    let mut value = 0.0;
    let mut err = 0.0;
    for t in octants {
        let (v, e) = rec.go(t[0], t[1], t[2], tol_total, 0);
        value += v;
        err += e;
    }
    if err > budget * value.abs().max(1e-12) {
        return Err(NormError::QuadratureBudget {
            estimate: err,
            budget,
        });
    }
    Ok((value, err))
}

/// Product trapezoid rule on `S^3` with one Richardson step.
fn s3_product_integral(f: &dyn Fn(&Vector) -> f64, base: usize) -> (f64, f64) {
    let eval = |k: usize| -> f64 {
        let pi = std::f64::consts::PI;
        let (n1, n2, n3) = (k, k, 2 * k);
        let (h1, h2, h3) = (pi / n1 as f64, pi / n2 as f64, 2.0 * pi / n3 as f64);
        let mut s = 0.0;
        for i in 0..=n1 {
            let t1 = i as f64 * h1;
            let w1 = if i == 0 || i == n1 { 0.5 } else { 1.0 };
            for j in 0..=n2 {
                let t2 = j as f64 * h2;
                let w2 = if j == 0 || j == n2 { 0.5 } else { 1.0 };
                let jac = t1.sin().powi(2) * t2.sin();
                if jac <= 0.0 {
                    continue;
                }
                for l in 0..n3 {
                    let ph = l as f64 * h3;
                    let u = Vector(vec![
                        t1.cos(),
                        t1.sin() * t2.cos(),
                        t1.sin() * t2.sin() * ph.cos(),
                        t1.sin() * t2.sin() * ph.sin(),
                    ]);
                    s += w1 * w2 * f(&u) * jac;
                }
            }
        }
        s * h1 * h2 * h3
    };
    let a = eval(base);
    let b = eval(2 * base);
    ((4.0 * b - a) / 3.0, (b - a).abs() / 3.0)
}

/// Volume of `{x : a_f . x <= 1}` in `R^3` (origin interior): vertex
/// enumeration plus facet fans coned to the origin.
pub fn polytope_volume_3d(facets: &[Vector]) -> Result<f64, NormError> {
    let verts = polytope_vertices(facets)?;
    let mut vol = 0.0;
    for a in facets {
        let na = a.norm2();
        let on: Vec<&Vector> = verts
            .iter()
            .filter(|v| (a.dot(v) - 1.0).abs() <= 1e-9 * na.max(1.0) * v.norm2().max(1.0))
            .collect();
        if on.len() < 3 {
            continue;
        }
        let centroid = on
            .iter()
            .fold(Vector::zeros(3), |acc, v| acc.add(v))
            .scale(1.0 / on.len() as f64);
        let plane = geometry::hyperplane_orthogonal_to(a)?;
        let mut pts: Vec<(f64, &Vector)> = on
            .iter()
            .map(|v| {
                let d = v.sub(&centroid);
                let c = plane.coords(&d);
                (c[1].atan2(c[0]), *v)
            })
            .collect();
        pts.sort_by(|x, y| x.0.total_cmp(&y.0));
        for t in 1..pts.len() - 1 {
            let (v0, v1, v2) = (pts[0].1, pts[t].1, pts[t + 1].1);
            let det = v0.0[0] * (v1.0[1] * v2.0[2] - v1.0[2] * v2.0[1])
                - v0.0[1] * (v1.0[0] * v2.0[2] - v1.0[2] * v2.0[0])
                + v0.0[2] * (v1.0[0] * v2.0[1] - v1.0[1] * v2.0[0]);
            vol += det.abs();
        }
    }
    Ok(vol / 6.0)
}

// ---------------------------------------------------------------------------
// Crystalline approximation
// ---------------------------------------------------------------------------

/// Deterministic crystalline approximation with `B_k` contained in `B`:
/// facets are support planes at a `1/k`-net of directions, then the polytope
/// is shrunk by its exact worst overshoot (the max of the norm over the
/// polytope's vertices), so the output ball sits inside `B` and
/// `delta(norm, output) -> 1` as `k` grows.
pub fn crystalline_approx(norm: &Norm, k: usize) -> Result<Norm, NormError> {
    assert!(k >= 1);
    let n = norm.dim();
    let net = sphere_net(n, k)?;
    let facets: Vec<Vector> = net
        .iter()
        .map(|u| {
            let h = norm.dual_sup(u);
            u.scale(1.0 / h)
        })
        .collect();
    let outer = Norm::crystalline(facets.clone())?;
    let lambda = outer
        .unit_ball_vertices()
        .unwrap()
        .iter()
        .map(|v| norm.eval(v))
        .fold(1.0_f64, f64::max);
    Norm::crystalline(facets.into_iter().map(|a| a.scale(lambda)).collect())
}

/// Deterministic symmetric direction nets: equal-angle grids on the circle,
/// latitude bands in `R^3`.
fn sphere_net(n: usize, k: usize) -> Result<Vec<Vector>, NormError> {
    match n {
        2 => {
            let count = (2.0 * std::f64::consts::PI * k as f64).ceil() as usize;
            let count = (count + count % 2).max(8);
            Ok((0..count)
                .map(|i| {
                    let th = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
                    Vector(vec![th.cos(), th.sin()])
                })
                .collect())
        }
        3 => {
            let bands = ((std::f64::consts::PI * k as f64).ceil() as usize).max(4);
            let mut out = vec![Vector(vec![0.0, 0.0, 1.0]), Vector(vec![0.0, 0.0, -1.0])];
            for j in 1..bands {
                let th = std::f64::consts::PI * j as f64 / bands as f64;
                let ring =
                    ((2.0 * std::f64::consts::PI * k as f64 * th.sin()).ceil() as usize).max(4);
                let ring = ring + ring % 2;
                for i in 0..ring {
                    let ph = 2.0 * std::f64::consts::PI * i as f64 / ring as f64;
                    out.push(Vector(vec![
                        th.sin() * ph.cos(),
                        th.sin() * ph.sin(),
                        th.cos(),
                    ]));
                }
            }
            Ok(out)
        }
        _ => Err(NormError::Unsupported(format!(
            "crystalline approximation in n = {n}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Exact rational mass ratios
// ---------------------------------------------------------------------------

pub mod exact {
    //! Exact `H^m(simplex) / alpha(m)` for crystalline norms.
    //!
    //! The section `W cap B` is expressed in the simplex's own edge basis; the
    //! `sqrt(Gram)` factors of the simplex volume and the section volume
    //! cancel, leaving a rational number. `f64` coordinates are read as exact
    //! dyadic rationals.

    use super::*;
    use crate::geometry::{
        halfplane_intersection_rational, polytope_volume_rational_3d, shoelace_rational,
    };

    pub fn facets_rational(norm: &Norm) -> Option<Vec<Vec<Rat>>> {
        let cr = norm.as_crystalline()?;
        let facets = match cr.kind() {
            NormKind::Crystalline(c) => c.facets.clone(),
            _ => unreachable!(),
        };
        Some(
            facets
                .iter()
                .map(|a| a.0.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    /// `H^m_{norm}(sigma) / alpha(m)` as an exact rational.
    /// Supported: `m = 1`, `m = 2`, and full-dimensional cells with `n <= 3`.
    pub fn mass_ratio(norm: &Norm, vertices: &[Vector]) -> Option<Rat> {
        let facets = facets_rational(norm)?;
        let n = norm.dim();
        let m = vertices.len().checked_sub(1)?;
        let v0: Vec<Rat> = vertices[0].0.iter().map(|&x| rat(x)).collect();
        let edges: Vec<Vec<Rat>> = vertices[1..]
            .iter()
            .map(|v| {
                v.0.iter()
                    .zip(&v0)
                    .map(|(&x, r)| rat(x) - r.clone())
                    .collect()
            })
            .collect();
        match (m, n) {
            (1, _) => {
                // H^1(sigma) = ||e||; alpha(1) = 2
                let e = &edges[0];
                let val = facets
                    .iter()
                    .map(|a| dot_rat(a, e))
                    .max()
                    .unwrap_or_else(Rat::zero);
                Some(val / rat_i(2))
            }
            (2, _) => {
                // ratio = 1 / (2 * area of section in edge coordinates)
                let mut cs: Vec<([Rat; 2], Rat)> = Vec::new();
                for a in &facets {
                    let c0 = dot_rat(a, &edges[0]);
                    let c1 = dot_rat(a, &edges[1]);
                    if c0.is_zero() && c1.is_zero() {
                        continue;
                    }
                    cs.push(([c0, c1], Rat::one()));
                }
                let poly = halfplane_intersection_rational(&cs).ok()?;
                let area = shoelace_rational(&poly);
                if area.is_zero() {
                    return None;
                }
                Some(Rat::one() / (rat_i(2) * area))
            }
            (3, 3) => {
                // full-dimensional: ratio = vol(sigma) / vol(B)
                let det = &edges[0][0] * (&edges[1][1] * &edges[2][2] - &edges[1][2] * &edges[2][1])
                    - &edges[0][1] * (&edges[1][0] * &edges[2][2] - &edges[1][2] * &edges[2][0])
                    + &edges[0][2] * (&edges[1][0] * &edges[2][1] - &edges[1][1] * &edges[2][0]);
                let vol_sigma = det.abs() / rat_i(6);
                let fr: Vec<[Rat; 3]> = facets
                    .iter()
                    .map(|a| [a[0].clone(), a[1].clone(), a[2].clone()])
                    .collect();
                let vol_ball = polytope_volume_rational_3d(&fr).ok()?;
                Some(vol_sigma / vol_ball)
            }
            _ => None,
        }
    }

    fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }
}

// ---------------------------------------------------------------------------
// JSON representation
// ---------------------------------------------------------------------------

/// Wire format: `{"kind":"lp","dim":...,"p":...}` | `{"kind":"euclidean","dim":...}`
/// | `{"kind":"crystalline","facets":[[...],...]}`. `p` accepts a number or
/// the string `"inf"`. Facet functionals are listed in full, both signs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormSpec {
    Euclidean { dim: usize },
    Lp { dim: usize, p: serde_json::Value },
    Crystalline { facets: Vec<Vec<f64>> },
}

impl NormSpec {
    pub fn to_norm(&self) -> Result<Norm, NormError> {
        match self {
            NormSpec::Euclidean { dim } => Ok(Norm::euclidean(*dim)),
            NormSpec::Lp { dim, p } => {
                let pv = match p {
                    serde_json::Value::Number(n) => n.as_f64().unwrap_or(f64::NAN),
                    serde_json::Value::String(s) if s == "inf" => f64::INFINITY,
                    _ => f64::NAN,
                };
                Norm::lp(*dim, pv)
            }
            NormSpec::Crystalline { facets } => {
                Norm::crystalline(facets.iter().map(|f| Vector(f.clone())).collect())
            }
        }
    }

    pub fn from_norm(norm: &Norm) -> NormSpec {
        match norm.kind() {
            NormKind::Euclidean => NormSpec::Euclidean { dim: norm.dim() },
            NormKind::Lp(p) => NormSpec::Lp {
                dim: norm.dim(),
                p: if *p == f64::INFINITY {
                    serde_json::Value::String("inf".into())
                } else {
                    serde_json::json!(p)
                },
            },
            NormKind::Crystalline(c) => NormSpec::Crystalline {
                facets: c.facets.iter().map(|a| a.0.clone()).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{orthonormalize, Vector};

    fn v(c: &[f64]) -> Vector {
        Vector(c.to_vec())
    }

    fn plane_sum_zero() -> Subspace {
        orthonormalize(&[v(&[1.0, -1.0, 0.0]), v(&[1.0, 1.0, -2.0])]).unwrap()
    }

    #[test]
    fn alpha_values() {
        assert!((alpha(1) - 2.0).abs() < 1e-15);
        assert!((alpha(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((alpha(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        assert!((alpha(4) - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_matches_factorials() {
        assert!((gamma_fn(5.0) - 24.0).abs() < 1e-9);
        assert!((gamma_fn(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn norm_eval_examples() {
        assert!((Norm::linf(3).eval(&v(&[1.0, -2.0, 0.5])) - 2.0).abs() < 1e-15);
        assert!((Norm::l1(2).eval(&v(&[3.0, 4.0])) - 7.0).abs() < 1e-15);
        // crystalline square with facets +-x+-y <= 1
        let sq = Norm::crystalline(vec![
            v(&[1.0, 1.0]),
            v(&[-1.0, -1.0]),
            v(&[1.0, -1.0]),
            v(&[-1.0, 1.0]),
        ])
        .unwrap();
        assert!((sq.eval(&v(&[1.0, 0.0])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn crystalline_validation() {
        let err = Norm::crystalline(vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[0.0, -1.0])]);
        assert!(matches!(err, Err(NormError::Asymmetric(0))));
        let err = Norm::crystalline(vec![v(&[1.0, 0.0]), v(&[-1.0, 0.0])]);
        assert!(matches!(err, Err(NormError::NotSpanning)));
    }

    #[test]
    fn norm_distance_examples() {
        let d = norm_distance(&Norm::linf(2), &Norm::linf(2), 64, 1);
        assert!((d.value - 1.0).abs() < 1e-12 && d.exact);

        // delta(linf, l1) = 2 in R^2: ratio extremes at (1,1) and (1,0)
        let d = norm_distance(&Norm::linf(2), &Norm::l1(2), 64, 1);
        assert!((d.value - 2.0).abs() < 1e-12 && d.exact);

        // delta(l2, linf) = sqrt 2 in R^2
        let d = norm_distance(&Norm::euclidean(2), &Norm::linf(2), 64, 1);
        assert!((d.value - 2.0_f64.sqrt()).abs() < 1e-12 && d.exact);
    }

    #[test]
    fn section_square_of_cube() {
        let w = orthonormalize(&[v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])]).unwrap();
        match section_ball(&Norm::linf(3), &w).unwrap() {
            SectionBall::Polygon(p) => {
                assert_eq!(p.vertices.len(), 4);
                assert!((p.area() - 4.0).abs() < 1e-12);
            }
            _ => panic!("expected polygon"),
        }
        let sv = section_volume(&Norm::linf(3), &w).unwrap();
        assert!(sv.exact && (sv.value - 4.0).abs() < 1e-12);
    }

    /// Symbolic oracle: the section of the cube by {sum x = 0} is the regular
    /// hexagon through the six edge midpoints (1, 0, -1) etc., each at
    /// Euclidean distance sqrt 2; its area is 3 sqrt 3.
    #[test]
    fn hexagon_section_oracle() {
        let w = plane_sum_zero();
        let hex_pts = [
            v(&[1.0, 0.0, -1.0]),
            v(&[0.0, 1.0, -1.0]),
            v(&[-1.0, 1.0, 0.0]),
            v(&[-1.0, 0.0, 1.0]),
            v(&[0.0, -1.0, 1.0]),
            v(&[1.0, -1.0, 0.0]),
        ];
        let coords: Vec<[f64; 2]> = hex_pts
            .iter()
            .map(|p| {
                let c = w.coords(p);
                [c[0], c[1]]
            })
            .collect();
        let oracle = crate::geometry::shoelace(&coords).abs();
        assert!((oracle - 3.0 * 3.0_f64.sqrt()).abs() < 1e-12);

        match section_ball(&Norm::linf(3), &w).unwrap() {
            SectionBall::Polygon(p) => {
                assert_eq!(p.vertices.len(), 6);
                for vert in &p.vertices {
                    let r = (vert[0] * vert[0] + vert[1] * vert[1]).sqrt();
                    assert!((r - 2.0_f64.sqrt()).abs() < 1e-12);
                }
                assert!((p.area() - oracle).abs() < 1e-12);
            }
            _ => panic!("expected polygon"),
        }
        let sv = section_volume(&Norm::linf(3), &w).unwrap();
        assert!((sv.value - 3.0 * 3.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn psi_values() {
        let w = plane_sum_zero();
        let p = psi(&Norm::linf(3), &w).unwrap();
        let expected = std::f64::consts::PI / (3.0 * 3.0_f64.sqrt());
        assert!((p - expected).abs() < 1e-12, "psi = {p}");
        assert!((expected - 0.604600).abs() < 1e-6);

        // Euclidean: psi = 1 everywhere
        let p = psi(&Norm::euclidean(3), &w).unwrap();
        assert!((p - 1.0).abs() < 1e-15);

        // l1 in the plane: full-space factor, cross-polytope area 2
        let p = psi(&Norm::l1(2), &Subspace::full(2)).unwrap();
        assert!((p - std::f64::consts::PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn radial_section_of_euclidean_ball() {
        let w = plane_sum_zero();
        match section_ball(&Norm::lp(3, 2.0).unwrap(), &w).unwrap() {
            SectionBall::Radial(r) => {
                assert!(r.radii.iter().all(|&x| (x - 1.0).abs() < 1e-12));
            }
            _ => panic!("expected radial"),
        }
    }

    #[test]
    fn busemann_b_values() {
        // Euclidean: b(u) = |u|
        let b = busemann_b(&Norm::euclidean(3), &v(&[0.0, 3.0, 4.0])).unwrap();
        assert!((b - 5.0).abs() < 1e-12);

        // linf, u = e3: square section of area 4, b = pi/4
        let b = busemann_b(&Norm::linf(3), &v(&[0.0, 0.0, 1.0])).unwrap();
        assert!((b - std::f64::consts::PI / 4.0).abs() < 1e-12);

        // linf, u = (1,1,1)/sqrt3: hexagon section, b = pi/(3 sqrt 3)
        let s = 1.0 / 3.0_f64.sqrt();
        let b = busemann_b(&Norm::linf(3), &v(&[s, s, s])).unwrap();
        assert!((b - std::f64::consts::PI / (3.0 * 3.0_f64.sqrt())).abs() < 1e-12);
    }

    /// Busemann identity, both computation paths: psi(R^n) * vol(B) = alpha(n).
    #[test]
    fn busemann_identity_regression() {
        for norm in [
            Norm::l1(2),
            Norm::linf(2),
            Norm::euclidean(2),
            Norm::l1(3),
            Norm::linf(3),
            Norm::lp(3, 3.0).unwrap(),
        ] {
            let n = norm.dim();
            let full = Subspace::full(n);
            let p = psi(&norm, &full).unwrap();
            let volume = ball_volume(&norm).unwrap();
            assert!(
                (p * volume.value - alpha(n)).abs() < 1e-9,
                "identity failed (exact path)"
            );
            let quad = ball_volume_quadrature(&norm, 1e-4).unwrap();
            assert!(
                (p * quad.value - alpha(n)).abs() < 1e-4 * alpha(n),
                "identity failed (quadrature path): {} vs {}",
                p * quad.value,
                alpha(n)
            );
        }
    }

    #[test]
    fn lp_ball_volume_closed_form() {
        // l1 ball in R^3 has volume 2^3/3! = 4/3
        let volume = ball_volume(&Norm::l1(3)).unwrap();
        assert!((volume.value - 4.0 / 3.0).abs() < 1e-9);
        let volume = ball_volume(&Norm::linf(3)).unwrap();
        assert!((volume.value - 8.0).abs() < 1e-12);
        let volume = ball_volume(&Norm::euclidean(3)).unwrap();
        assert!((volume.value - alpha(3)).abs() < 1e-12);
    }

    #[test]
    fn crystalline_approx_bounds() {
        // cube: support facets at net directions contain the cube; after the
        // shrink the ball is inside, and delta <= 1 + 2/k by the oracle
        let cube = Norm::linf(3);
        for k in [2usize, 4] {
            let approx = crystalline_approx(&cube, k).unwrap();
            let d = norm_distance(&cube, &approx, 256, 3);
            assert!(
                d.value <= 1.0 + 2.0 / k as f64 + 1e-9,
                "delta {} too large for k {k}",
                d.value
            );
            let lam = approx
                .unit_ball_vertices()
                .unwrap()
                .iter()
                .map(|w| cube.eval(w))
                .fold(0.0_f64, f64::max);
            assert!(lam <= 1.0 + 1e-9, "not contained: {lam}");
        }

        // circle: inscribed-polygon bound 1/cos(pi/#facets)
        let circle = Norm::euclidean(2);
        let approx = crystalline_approx(&circle, 2).unwrap();
        let nf = match approx.kind() {
            NormKind::Crystalline(c) => c.facets.len(),
            _ => unreachable!(),
        };
        let d = norm_distance(&circle, &approx, 4096, 5);
        assert!(d.value <= 1.0 / (std::f64::consts::PI / nf as f64).cos() + 1e-9);

        // already crystalline input: delta <= 1 + 2/k
        let approx2 = crystalline_approx(&cube, 3).unwrap();
        let d = norm_distance(&approx2, &cube, 256, 9);
        assert!(d.value <= 1.0 + 2.0 / 3.0 + 1e-9);
    }

    #[test]
    fn exact_mass_ratio_matches_float_path() {
        // triangle in the e1e2 plane, linf3: H^2 = (pi/4) * area
        let tri = [v(&[0.0, 0.0, 0.0]), v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])];
        let ratio = exact::mass_ratio(&Norm::linf(3), &tri).unwrap();
        // H^2 = (alpha(2)/4) * 0.5 => ratio = 1/8
        assert_eq!(ratio, Rat::new(1.into(), 8.into()));

        // segment: H^1 = linf length, ratio = length/2
        let seg = [v(&[0.0, 0.0, 0.0]), v(&[2.0, 1.0, 0.0])];
        let ratio = exact::mass_ratio(&Norm::linf(3), &seg).unwrap();
        assert_eq!(ratio, Rat::one());

        // full-dimensional cell in R^3 under linf: ratio = vol/8
        let tet = [
            v(&[0.0, 0.0, 0.0]),
            v(&[1.0, 0.0, 0.0]),
            v(&[0.0, 1.0, 0.0]),
            v(&[0.0, 0.0, 1.0]),
        ];
        let ratio = exact::mass_ratio(&Norm::linf(3), &tet).unwrap();
        assert_eq!(ratio, Rat::new(1.into(), 48.into()));
    }

    #[test]
    fn norm_spec_roundtrip() {
        let spec: NormSpec = serde_json::from_str(r#"{"kind":"lp","dim":3,"p":"inf"}"#).unwrap();
        let norm = spec.to_norm().unwrap();
        assert!((norm.eval(&v(&[1.0, -2.0, 0.5])) - 2.0).abs() < 1e-15);
        let spec2 = NormSpec::from_norm(&norm);
        let s = serde_json::to_string(&spec2).unwrap();
        assert!(s.contains("\"inf\""));
    }
}
