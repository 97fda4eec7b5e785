//! Numerical laboratory for the damped semilinear wave equation
//!
//! ```text
//! u_tt - Δ_B u - γ V u + |u_t|^{m-2} u_t = g |u|^{p-2} u
//! ```
//!
//! on a stretched cone `B = [x1_min, 1] x T^{n-1}` with Dirichlet boundary.
//! The Fuchsian Laplacian `Δ_B = (x1 ∂x1)² + Δ_{x'}` is discretized in the
//! log-radial coordinate `s = ln x1`, where it becomes uniformly elliptic.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod integrator;
pub mod linalg;
pub mod operators;
pub mod rng;
pub mod variational;

pub use error::{Error, Result};
pub use geometry::{build_grid, cone_norm, weighted_inner, ConeGrid, Field, GridSpec};
pub use operators::{apply_gradient, apply_laplacian, smallest_eigenpair, EigenPair, PotentialKind};
