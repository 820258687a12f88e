//! Exact multivariate polynomial arithmetic over ℚ.
//!
//! Monomials are ordered lexicographically with `z_m` as the most significant
//! variable; see [`Monomial`] for the exact rule, which is the opposite of
//! the common "`z_1` first" convention.

mod matrix;
mod monomial;
mod multipoly;
mod text;
mod unipoly;

pub use matrix::{
    determinant, vandermonde_matrix, vandermonde_product, DetMethod, PolyMatrix, LEIBNIZ_MAX,
};
pub use monomial::Monomial;
pub use multipoly::{divides, poly_arith, rat, rat_int, ArithKind, FloatPoly, MultiPoly};
pub use num_rational::BigRational;
pub use unipoly::{integrate_distinguished, substitute, UniPoly};
