//! Exact computation in free differential perm algebras.
//!
//! A perm algebra is an associative algebra satisfying `xyz = yxz`. The free
//! differential perm algebra on generators `x_1, x_2, ...` with commuting
//! derivations `d_1..d_N` has monomials `x_{i_1}^{(s_1)} ... x_{i_k}^{(s_k)}`
//! whose first `k - 1` factors commute, so a normal form is a sorted multiset
//! of left factors plus a distinguished last factor.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod identity;
pub mod reduction;
pub mod scalar;
pub mod span;
pub mod witt;

pub use algebra::{annihilator_test, DiffPermPoly, GeneratorSymbol, PermMonomial, ProductTag};
pub use error::{Error, Result};
pub use scalar::{Coeff, DeltaPoly, Rational, Scalar};
