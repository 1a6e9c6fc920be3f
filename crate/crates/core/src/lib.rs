//! Exact computations of Frobenius-splitting invariants for hypersurface
//! pairs over prime fields: degeneracy ideals, F-signature estimates,
//! signature curves in a divisor parameter, differents, Hilbert–Kunz
//! multiplicities and F-pure thresholds, plus checks of the adjunction
//! identity relating the left derivative of the signature curve at `t = 1`
//! to the F-signature of the different.

#[cfg(feature = "cli")]
pub mod cli;
pub mod covers;
pub mod error;
pub mod ffpoly;
pub mod fsing;
pub mod groebner;
mod par;

pub use error::{Error, Result};
