//! Acceptance tolerances. Level-dependent bounds are stored as numerators
//! over `q = p^e`; fixed bounds as exact fractions.

use num_bigint::BigInt;
use num_rational::BigRational;

/// Curve deviation from the chord: `5/q`.
pub const CURVE_DEVIATION_OVER_Q: i64 = 5;
/// Slack in `s(R, Δ) ≥ s(D, Diff_D(Δ))`: `2/q`.
pub const COROLLARY_OVER_Q: i64 = 2;
/// Cover different comparison: `1/q`.
pub const COVER_DIFFERENT_OVER_Q: i64 = 1;
/// Extrapolated F-signature against its target.
pub const EXTRAPOLATION: (i64, i64) = (1, 100);
/// Raw `s_3` against its target.
pub const RAW_SIGNATURE: (i64, i64) = (1, 20);
/// Left derivative at `t = 1` against its target.
pub const SLOPE: (i64, i64) = (1, 20);
/// Hilbert–Kunz extrapolation against its target.
pub const HILBERT_KUNZ: (i64, i64) = (1, 20);
/// `|m·s_e(base) − s_e(cover)|` at the top level.
pub const COVER_GAP: (i64, i64) = (1, 10);

pub fn fixed(t: (i64, i64)) -> BigRational {
    BigRational::new(BigInt::from(t.0), BigInt::from(t.1))
}

pub fn over_q(numerator: i64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(numerator), BigInt::from(q))
}
