//! Mass geometry of polyhedral `G`-chains in finite-dimensional normed spaces.
//!
//! The crate computes Busemann-Hausdorff densities of linear subspaces,
//! constructs and certifies density contractors (Hahn projectors in dimension
//! one, Busemann area-contracting projectors in codimension one, and the
//! Burago-Ivanov discrete measures in dimension two), evaluates Gross-type
//! measures and masses built from those contractors, and solves discrete
//! Plateau problems over simplicial complexes with normed-area weights via an
//! exact rational simplex method.
//!
//! Entry points by theme:
//!
//! - [`geometry`]: vectors, subspaces, Gram volumes, halfplane intersection,
//!   seeded Grassmannian sampling.
//! - [`norms`]: norm representations, unit-ball cross-sections, the density
//!   `psi`, the Busemann hyperplane function, crystalline approximation.
//! - [`chains`]: polyhedral chains over `Z`, `Z_q` and `R` coefficients,
//!   boundary, Hausdorff mass, pushforward, slicing, edgewise subdivision.
//! - [`contractors`]: construction and certification of density contractors.
//! - [`gross`]: the set function `zeta`, Gross measure and Gross mass
//!   estimators, lower-semicontinuity experiments.
//! - [`plateau`]: simplicial complexes, mass minimization, simplicial flat
//!   norm, support reduction, the `l_inf` graph-area identity.
//! - [`scenario`]: JSON scenario front end used by the `minimass` binary.
//!
//! The `examples/` directory contains one runnable example per capability;
//! `cargo run --example plateau_solve` is a good starting point.

pub mod chains;
pub mod contractors;
pub mod geometry;
pub mod gross;
pub mod lp;
pub mod norms;
pub mod plateau;
pub mod scenario;
pub mod synth;

/// Library version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
