//! Numerical laboratory for von Neumann's inequality on the polydisc.
//!
//! Polynomials in several variables, summability kernels, operator tuples,
//! and the bounds that control `‖p(T)‖ / ‖p‖∞` for commuting contractions.

pub mod besov;
pub mod cli;
pub mod error;
pub mod hankel;
pub mod kernels;
pub mod kmn;
pub mod linalg;
pub mod operators;
pub mod polydisc;
pub mod polynomial;

pub use error::{Result, VniError};
pub use polynomial::{MultiIndex, MultiPoly, SupNormEstimate};
