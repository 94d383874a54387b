//! Exact entire solutions of the radial finite-difference equation
//!
//! ```text
//! -u(z - delta)/2 - u(z + delta)/2 - delta^2 u(z)/z = lambda u(z),   u(0) = 0,
//! ```
//!
//! the discretised hydrogen (l = 0) problem. The solutions are polynomials
//! times a geometric decay whose data live in the quadratic field
//! `Q(sqrt(1 + delta^2/n^2))`, so the eigen-identity can be verified exactly,
//! coefficient by coefficient. On top of the closed forms the crate builds
//! the associated Jacobi matrix and its certified spectrum, isospectral
//! operators with eigenvalues `1/n^(2k)`, matrices with prescribed
//! eigenvalues, and the discretised associated Laguerre polynomials with
//! their continuum limits.

pub mod closed_form;
pub mod error;
pub mod exactfield;
pub mod isospectral;
pub mod laguerre;
pub mod polyq;
pub mod spectra;
pub mod textfmt;
pub mod verify;

pub use closed_form::ClosedFormSolution;
pub use error::{Error, Result};
pub use exactfield::{QuadNumber, Rational};
pub use polyq::PolyQ;
