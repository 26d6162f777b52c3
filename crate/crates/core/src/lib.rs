//! Numerical workbench for holomorphic function theory on the unit disk:
//! the Bergman projection and its boundary growth, Cauchy/Beurling
//! transforms, Beltrami-equation Neumann series, and the estimators
//! (asymptotic variance, tail variance, exponential type spectrum) built
//! on top of them, with finite-radius inequality checks throughout.

pub mod error;
pub mod grids;
pub mod interior;
pub mod transforms;
pub mod variance;
pub mod extremal;
pub mod bloch;
pub mod levelsets;
pub mod conformal;
pub mod beltrami;
pub mod dimension;
pub mod corpus;
pub mod checks;

pub use error::{Error, Result};
