//! Prime-field arithmetic and sparse multivariate polynomials over F_p.

mod field;
mod monomial;
mod parse;
mod poly;

pub use field::{PrimeField, PrimeFieldElement};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse_polynomial;
pub use poly::{Limits, Polynomial, Ring};

pub(crate) use monomial::{divides, is_coprime, mul_into, DivMask, OrderKey};
