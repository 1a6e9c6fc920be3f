//! Splitting invariants of hypersurface pairs `(R, Δ)` over F_p: degeneracy
//! ideals, F-signature sequences and extrapolations, signature curves in a
//! divisor parameter, the left derivative at `t = 1`, differents, and the
//! adjunction comparison, together with Hilbert–Kunz multiplicity and
//! F-pure threshold sequences.
//!
//! Every length `ℓ(S/(m^[q] : F))` is computed as `q^N − ℓ(S/(m^[q] + F))`
//! with `F` truncated modulo `m^[q]`.

mod different;
mod presentation;
mod splitting;
pub mod tolerances;

pub use different::{
    adjunction_check, base_signature, different_hypersurface, divisor_signature_by_colon, trace_projection,
    AdjunctionLevel, AdjunctionReport, DifferentResult,
};
pub use presentation::{BasePresentation, DivisorComponent, PairSpec, QDivisor, RingPresentation, Rounding};
pub use splitting::{
    colon_length, degeneracy_ideal, extrapolate, fpt_estimate, frobenius_colon_containment, fsignature_estimate,
    hilbert_kunz, left_derivative_at_one, signature_curve, splitting_length, splitting_ratio_estimate, CurveSample,
    Estimate, FptRecord, LeftDerivative, SignatureCurve, SplittingRecord,
};

#[cfg(test)]
mod tests;
