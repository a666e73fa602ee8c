//! Extremal singular values and condition numbers of multivariate
//! rectangular Vandermonde matrices with nodes on the unit torus.
//!
//! The library is organized around four subsystems:
//!
//! * [`torus_nodes`] — node sets on the d-torus, wrap-around distances,
//!   minimal separation, and canonical node generators (equispaced grids,
//!   quasi-grids, seeded random well-separated sets).
//! * [`vandermonde`] — the `M × N^d` Vandermonde matrix, its `M × M` Gram
//!   matrix assembled from products of univariate Dirichlet kernels, and
//!   extremal singular values via a Hermitian eigensolver.
//! * [`localizer`] — the compactly supported localizing function ψ built
//!   from an autocorrelated polynomial bump, its Fourier transform, closed
//!   forms at zero, ratio lower bounds, and a Poisson-summation identity
//!   check.
//! * [`bounds`] — one evaluator per theorem-level singular value bound,
//!   applicability checks for each separation hypothesis, and table
//!   generators.

pub mod bounds;
pub mod error;
pub mod localizer;
pub mod special;
pub mod torus_nodes;
pub mod vandermonde;

pub use error::Error;
pub use num_complex::Complex64;
pub use torus_nodes::NodeSet;
pub use vandermonde::{SpectralResult, VandermondeSpec};
