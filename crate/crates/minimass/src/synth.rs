//! Deterministic synthetic instances: random crystalline norms, random
//! chains and cycles, the cone-over-a-square test complex, admissible
//! piecewise-linear graphs, and synthetic mass densities. Everything is
//! seeded; identical seeds give identical instances.

use crate::chains::{ChainError, Coeff, CoefficientGroup, OrientedSimplex, PolyhedralChain};
use crate::geometry::{gaussian, gaussian_vector, sample_unit_vectors, Subspace, Vector};
use crate::norms::Norm;
use crate::plateau::{PlGrid, SimplicialComplex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Random crystalline norm: `pairs` random facet directions (both signs) at
/// random support radii in `[0.75, 1.25]`.
pub fn random_crystalline_norm(n: usize, pairs: usize, seed: u64) -> Norm {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let dirs = sample_unit_vectors(n, pairs, seed ^ 0xc0ffee);
    let mut facets = Vec::with_capacity(2 * pairs);
    for u in dirs {
        let r = 0.75 + 0.5 * rng.gen::<f64>();
        facets.push(u.scale(1.0 / r));
        facets.push(u.scale(-1.0 / r));
    }
    Norm::crystalline(facets).expect("random symmetric facets span")
}

/// Seeded rotation-invariant `m`-subspace.
pub fn random_subspace(n: usize, m: usize, seed: u64) -> Subspace {
    crate::geometry::sample_subspaces(n, m, 1, seed)
        .into_iter()
        .next()
        .unwrap()
}

/// Random nondegenerate `m`-simplex with Gaussian vertices at `scale`.
pub fn random_simplex(n: usize, m: usize, scale: f64, seed: u64) -> OrientedSimplex {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    loop {
        let vertices: Vec<Vector> = (0..=m)
            .map(|_| gaussian_vector(n, &mut rng).scale(scale))
            .collect();
        let s = OrientedSimplex::new(vertices);
        if s.volume() > 0.05 * scale.powi(m as i32) {
            return s;
        }
    }
}

/// A cycle instance for the triangle inequality: `P = g [sigma]` and
/// `Q = cone(apex, boundary P)` with the apex slightly off the plane of
/// `sigma`, so `boundary(P - Q) = 0` and the two chains do not overlap.
pub fn random_cycle_instance(
    n: usize,
    seed: u64,
) -> (PolyhedralChain, PolyhedralChain, PolyhedralChain) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x7c7c);
    let sigma = random_simplex(n, 2, 1.0, seed);
    let w = sigma.direction().expect("nondegenerate");
    let normal = w
        .complement()
        .into_iter()
        .next()
        .unwrap_or_else(|| Vector::unit(n, n - 1));
    let offset = 0.3 + 0.7 * rng.gen::<f64>();
    let apex = sigma.barycenter().axpy(offset, &normal);
    let p = PolyhedralChain::simplex(CoefficientGroup::Integers, Coeff::Int(1), sigma);
    let q = p.boundary().cone(&apex);
    // filling of Q - P: cone of the cycle from a point between the plane and
    // the apex
    let filling = q
        .sub(&p)
        .expect("same group")
        .cone(&p.terms[0].1.barycenter().axpy(offset / 2.0, &normal));
    (p, q, filling)
}

/// The cone-over-a-square complex: unit square boundary at `z = 0`, center
/// vertex, apex at `(0, 0, 2)`; the four flat cells triangulate the square,
/// four lateral cells form the cone, four vertical cells and four
/// tetrahedra close the complex. Returns the complex and the square
/// boundary cycle over its 1-cells.
pub fn cone_square_complex() -> (SimplicialComplex, Vec<Coeff>) {
    let vertices = vec![
        Vector(vec![0.0, 0.0, 0.0]),   // 0 center
        Vector(vec![1.0, 1.0, 0.0]),   // 1
        Vector(vec![-1.0, 1.0, 0.0]),  // 2
        Vector(vec![-1.0, -1.0, 0.0]), // 3
        Vector(vec![1.0, -1.0, 0.0]),  // 4
        Vector(vec![0.0, 0.0, 2.0]),   // 5 apex
    ];
    let corners = [1usize, 2, 3, 4];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut solids: Vec<Vec<usize>> = Vec::new();
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        edges.push(vec![a, b]);
        edges.push(vec![0, a]);
        edges.push(vec![a, 5]);
        faces.push(vec![0, a, b]); // flat
        faces.push(vec![a, b, 5]); // cone
        faces.push(vec![0, a, 5]); // vertical
        solids.push(vec![0, a, b, 5]);
    }
    edges.push(vec![0, 5]);
    let zero_cells = (0..vertices.len()).map(|i| vec![i]).collect();
    let complex = SimplicialComplex::new(vertices, vec![zero_cells, edges, faces, solids])
        .expect("valid complex");
    // square cycle 1 -> 2 -> 3 -> 4 -> 1 over the sorted 1-cells
    let mut boundary = vec![Coeff::Int(0); complex.cells[1].len()];
    let cycle: [(usize, usize, i64); 4] = [(1, 2, 1), (2, 3, 1), (3, 4, 1), (1, 4, -1)];
    for (a, b, s) in cycle {
        let idx = complex.cells[1]
            .iter()
            .position(|e| e == &vec![a.min(b), a.max(b)])
            .expect("edge present");
        boundary[idx] = Coeff::Int(s);
    }
    (complex, boundary)
}

/// The six facets of the cube `[-r, r]^3` as halfspaces.
pub fn box_halfspaces(r: f64) -> Vec<(Vector, f64)> {
    let mut out = Vec::with_capacity(6);
    for d in 0..3 {
        out.push((Vector::unit(3, d), r));
        out.push((Vector::unit(3, d).scale(-1.0), r));
    }
    out
}

/// Tent: cone from `(0, 0, apex_z)` over the square boundary with corners
/// `(+-0.9, +-0.9, 0)`.
pub fn tent_chain(apex_z: f64) -> PolyhedralChain {
    let c = 0.9;
    let pts = [
        Vector(vec![c, c, 0.0]),
        Vector(vec![-c, c, 0.0]),
        Vector(vec![-c, -c, 0.0]),
        Vector(vec![c, -c, 0.0]),
    ];
    let mut terms = Vec::new();
    for i in 0..4 {
        terms.push((
            Coeff::Int(1),
            OrientedSimplex::new(vec![pts[i].clone(), pts[(i + 1) % 4].clone()]),
        ));
    }
    let cycle = PolyhedralChain::from_terms(CoefficientGroup::Integers, 1, 3, terms);
    cycle.cone(&Vector(vec![0.0, 0.0, apex_z]))
}

/// Random codimension-1 instance for support reduction: a cone from a
/// random elevated apex over a random rectangle boundary at `z = 0`, with a
/// random nonzero integer coefficient. The boundary lies inside the unit
/// box; the apex pokes out of it.
pub fn random_tent_instance(seed: u64) -> PolyhedralChain {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let cx = 0.25 + 0.6 * rng.gen::<f64>();
    let cy = 0.25 + 0.6 * rng.gen::<f64>();
    let pts = [
        Vector(vec![cx, cy, 0.0]),
        Vector(vec![-cx, cy, 0.0]),
        Vector(vec![-cx, -cy, 0.0]),
        Vector(vec![cx, -cy, 0.0]),
    ];
    let g = 1 + (rng.gen::<u32>() % 3) as i64;
    let mut terms = Vec::new();
    for i in 0..4 {
        terms.push((
            Coeff::Int(g),
            OrientedSimplex::new(vec![pts[i].clone(), pts[(i + 1) % 4].clone()]),
        ));
    }
    let cycle = PolyhedralChain::from_terms(CoefficientGroup::Integers, 1, 3, terms);
    let apex = Vector(vec![
        0.4 * gaussian(&mut rng) * cx,
        0.4 * gaussian(&mut rng) * cy,
        1.2 + rng.gen::<f64>(),
    ]);
    cycle.cone(&apex)
}

/// Random admissible graph grid: smoothed random interior values scaled so
/// the worst per-triangle slope is a fraction `c in [0.3, 0.95]` of the
/// admissible bound, boundary identically zero.
pub fn random_admissible_grid(divisions: usize, seed: u64) -> PlGrid {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let k = divisions + 1;
    let mut values = vec![0.0; k * k];
    for j in 1..divisions {
        for i in 1..divisions {
            values[j * k + i] = gaussian(&mut rng);
        }
    }
    // two Jacobi smoothing passes keep the field from being pure noise
    for _ in 0..2 {
        let snapshot = values.clone();
        for j in 1..divisions {
            for i in 1..divisions {
                values[j * k + i] = 0.5 * snapshot[j * k + i]
                    + 0.125
                        * (snapshot[j * k + i - 1]
                            + snapshot[j * k + i + 1]
                            + snapshot[(j - 1) * k + i]
                            + snapshot[(j + 1) * k + i]);
            }
        }
    }
    let mut grid = PlGrid { divisions, values };
    let worst = grid.max_slope();
    if worst > 0.0 {
        let c = 0.3 + 0.65 * rng.gen::<f64>();
        let scale = c / worst;
        for v in grid.values.iter_mut() {
            *v *= scale;
        }
    }
    grid
}

/// A density on the Grassmannian that equals 1 everywhere except at one
/// plane (matched by fingerprint), where it takes `bump`. Used to
/// manufacture positive cycle deficits.
pub fn bump_density(
    w0: &Subspace,
    bump: f64,
) -> impl FnMut(&Subspace) -> Result<f64, ChainError> {
    let key = w0.fingerprint();
    move |w: &Subspace| {
        if w.fingerprint() == key {
            Ok(bump)
        } else {
            Ok(1.0)
        }
    }
}
