//! Exact and numeric tools for the critical-value map of a polynomial
//! built by integrating `Π (w - z_i)^{a_i}` from `0`.
//!
//! - [`poly_core`]: exact multivariate polynomials, matrices and determinants
//! - [`calculus`]: derivative sequences and emphasized antiderivatives
//! - [`critical_map`]: `p_a`, `θ_a`, the Jacobian and its factored determinant
//! - [`dyson`]: constant terms of the Dyson product
//! - [`stratify`]: coincidence strata and numerical path lifting
//! - [`cli`]: the `critval` command

pub mod calculus;
pub mod cli;
pub mod critical_map;
pub mod dyson;
pub mod error;
pub mod multi_index;
pub mod numeric;
pub mod poly_core;
pub mod stratify;

pub use error::{Error, Result};
pub use multi_index::{multinomial, MultiIndex};
pub use numeric::{Complex64, ComplexPath, ComplexPoint};
pub use poly_core::{BigRational, MultiPoly, PolyMatrix, UniPoly};
