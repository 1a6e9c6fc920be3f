//! Buchberger-based ideal calculus over F_p: reduced Gröbner bases, normal
//! forms, colon ideals, intersections, saturation, Frobenius powers,
//! colength by staircase counting and Krull dimension.

mod buchberger;
mod ideal;
mod staircase;

pub use buchberger::{groebner_basis, normal_form_wrt};
pub use ideal::Ideal;
pub use staircase::{staircase_count, Colength, StaircaseCount};

#[cfg(test)]
mod tests;
