//! Regularized factorization method for two-dimensional acoustic inverse
//! scattering.
//!
//! The crate is organized bottom-up:
//!
//! - [`specfun`]: integer-order Bessel/Hankel functions and the Helmholtz
//!   fundamental solution.
//! - [`linalg`]: dense complex matrices, Jacobi Hermitian eigensolver, SVD,
//!   least squares and the operator absolute value.
//! - [`forward`]: synthetic data (Born far-field matrices, sound-soft
//!   near-field matrices via a Fourier–Hankel series), the analytic disk
//!   far-field oracle and the multiplicative noise model.
//! - [`operators`]: the `|Re F| + |Im F|` conditioning and the truncated
//!   Dirichlet-to-far-field / reflection kernels that turn near-field data
//!   into far-field data.
//! - [`rfm`]: filter functions, regularized solutions and the imaging
//!   functional `W(z)` over a sampling grid.

pub mod error;
pub mod forward;
pub mod linalg;
pub mod operators;
pub mod rfm;
pub mod specfun;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
pub use specfun::Point2;
