//! Classical generalized Zernike system.
//!
//! The Hamiltonian `H = p² + α (r·p)² − iβ (r·p)` has closed elliptical
//! orbits for suitable `(p_φ, E)`. This crate provides:
//!
//! - [`orbit`]: closed-form orbit geometry and timing, region classification
//! - [`dynamics`]: Hamilton's equations on complex phase space, integrators and
//!   numerical tracking of the constants of motion
//! - [`algebra`]: exact Poisson-bracket algebra over Gaussian rationals used to
//!   verify the cubic Higgs algebra and its `α → 0` limit
//! - [`coordinates`]: vertical projection onto sphere and hyperboloids, the
//!   separable coordinate charts and orbit lifts
//! - [`sweep`]: region atlas over a `(p_φ, E)` grid
//!
//! Data-parallel loops (grid sweeps, batches of trajectories) use rayon when the
//! `parallel` feature is enabled and fall back to sequential iteration otherwise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod coordinates;
pub mod dynamics;
mod error;
pub mod orbit;
pub mod parallel;
pub mod quadrature;
pub mod sweep;

pub use error::{Error, Result};
pub use orbit::{EllipseConstants, OrbitClass, OrbitSpec, Params};
