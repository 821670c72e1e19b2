//! Numerical verification of the Euler–Lagrange equation for exponential
//! candidates of the light-cone Fourier extension inequality.
//!
//! Modules go bottom-up: scalar kernels ([`specfun`]), quadrature engines
//! ([`quadrature`]), exponents and the symmetry group ([`cone`]), the conformal
//! compactification ([`penrose`]), both sides of the Euler–Lagrange identity
//! ([`euler_lagrange`]), the per-(d, p) decision ([`verdict`]) and output
//! formats ([`report`]).

pub mod cone;
pub(crate) mod cylinder;
pub mod error;
pub mod euler_lagrange;
pub mod par;
pub mod penrose;
pub mod quadrature;
pub mod report;
pub mod specfun;
pub mod verdict;

pub use error::{Error, Result};
