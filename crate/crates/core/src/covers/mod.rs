//! Cyclic covers: symbolic powers with a witness element, and numerical
//! checks of a user-supplied cover presentation against the base pair.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::ffpoly::Polynomial;
use crate::fsing::{
    base_signature, different_hypersurface, splitting_length, BasePresentation, DifferentResult, PairSpec, QDivisor,
    RingPresentation,
};
use crate::groebner::Ideal;
use crate::par;

/// Preimage of `P^(i)` in the ambient ring, as `(P^i + (f) : s^∞)`. Correct
/// when `s` lies in every associated prime of `P^i` other than `P`; choosing
/// such an `s` is up to the caller.
pub fn symbolic_power(ring: &RingPresentation, p: &Ideal, i: u32, witness: &Polynomial) -> Result<Ideal> {
    let p = p.sum(&ring.defining_ideal()?)?;
    if p.contains(witness)? {
        return Err(Error::InvalidInput(format!("witness {witness} lies in the prime")));
    }
    if i == 0 {
        return Ok(Ideal::unit(p.ring()));
    }
    p.power(i)?.sum(&ring.defining_ideal()?)?.saturation(witness)
}

/// A presentation of the cyclic cover `C(D)` of `R` along `D` with
/// `mD = div(x)`.
#[derive(Clone, Debug)]
pub struct CoverPresentation {
    pub cover: Arc<RingPresentation>,
    /// Image of each base variable in the cover ring.
    pub inclusion: Vec<Polynomial>,
    pub index: u64,
    /// `u` with `div(u) = π*D`.
    pub witness: Polynomial,
    /// `x` in the base ring.
    pub base_divisor: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverLevel {
    pub e: u32,
    pub q: u64,
    pub base: BigRational,
    pub cover: BigRational,
    pub scaled_base: BigRational,
    pub gap: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub relations_ok: bool,
    pub witness_ok: bool,
    pub issues: Vec<String>,
    pub levels: Vec<CoverLevel>,
    /// Gaps do not increase from `e = 2` on.
    pub gaps_non_increasing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverDifferentReport {
    pub e: u32,
    pub q: u64,
    pub base_different: DifferentResult,
    pub cover_different: DifferentResult,
    pub base_signature: BigRational,
    pub cover_signature: BigRational,
    pub scaled_base: BigRational,
    pub gap: BigRational,
}

impl CoverPresentation {
    fn image(&self, f: &Polynomial) -> Result<Polynomial> {
        f.substitute(&self.inclusion)
    }

    fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.cover.defining_ideal()?.normal_form(f)
    }

    /// Problems with the presentation, empty when all checks pass.
    pub fn check(&self, base: &RingPresentation) -> Result<(bool, bool, Vec<String>)> {
        let mut issues = Vec::new();
        if self.inclusion.len() != base.nvars() {
            return Err(Error::InvalidInput(format!(
                "inclusion has {} images for {} base variables",
                self.inclusion.len(),
                base.nvars()
            )));
        }
        for im in self.inclusion.iter().chain(std::iter::once(&self.witness)) {
            if !im.ring().same_space(self.cover.ring()) {
                return Err(Error::RingMismatch);
            }
        }
        let mut relations_ok = true;
        if let Some(f) = base.hypersurface_equation() {
            if !self.normal_form(&self.image(f)?)?.is_zero() {
                relations_ok = false;
                issues.push("inclusion does not respect relations".to_string());
            }
        }
        let lhs = self.normal_form(&self.witness.pow(self.index)?)?;
        let rhs = self.normal_form(&self.image(&self.base_divisor)?)?;
        let witness_ok = !rhs.is_zero() && proportional(&lhs, &rhs);
        if !witness_ok {
            issues.push(format!("u^{} is not a unit multiple of the image of x", self.index));
        }
        Ok((relations_ok, witness_ok, issues))
    }

    /// `π*Δ`, pulling back each component.
    pub fn pull_back_pair(&self, pair: &PairSpec) -> Result<PairSpec> {
        let delta = pair.delta.pull_back(&self.inclusion)?;
        PairSpec::new(self.cover.clone(), delta, pair.rounding)
    }
}

/// `a = c·b` for a nonzero constant `c`.
fn proportional(a: &Polynomial, b: &Polynomial) -> bool {
    if a.len() != b.len() || a.is_zero() {
        return false;
    }
    let field = a.ring().field();
    let Ok(inv) = field.inv(b.coefficient(0)) else {
        return false;
    };
    let c = field.mul(a.coefficient(0), inv);
    a.terms()
        .zip(b.terms())
        .all(|((ea, ca), (eb, cb))| ea == eb && ca == field.mul(c, cb))
}

fn m_times(m: u64, v: &BigRational) -> BigRational {
    BigRational::from_integer(BigInt::from(m)) * v
}

/// Compares `m·s_e(R, Δ)` with `s_e(C(D), π*Δ)` for `e = 1..=e_max`.
pub fn verify_cover(cover: &CoverPresentation, pair: &PairSpec, e_max: u32) -> Result<CoverReport> {
    let (relations_ok, witness_ok, issues) = cover.check(&pair.ring)?;
    let lifted = cover.pull_back_pair(pair)?;
    let levels: Vec<u32> = (1..=e_max).collect();
    let levels = par::map(&levels, |&e| -> Result<CoverLevel> {
        let base = splitting_length(pair, e)?;
        let top = splitting_length(&lifted, e)?;
        let scaled_base = m_times(cover.index, &base.value);
        let gap = (&scaled_base - &top.value).abs();
        Ok(CoverLevel {
            e,
            q: base.q,
            base: base.value,
            cover: top.value,
            scaled_base,
            gap,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let gaps_non_increasing = levels
        .iter()
        .skip(1)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1].gap <= w[0].gap);
    Ok(CoverReport {
        relations_ok,
        witness_ok,
        issues,
        levels,
        gaps_non_increasing,
    })
}

/// Compares `m·s_e(D, Diff_D(Δ))` with `s_e(D', Diff_D'(π*Δ))`, where
/// `D' = div(u)` on the cover.
pub fn verify_cover_different(
    cover: &CoverPresentation,
    pair: &PairSpec,
    d: &QDivisor,
    base_d: &BasePresentation,
    base_d_prime: &BasePresentation,
    e: u32,
) -> Result<CoverDifferentReport> {
    let (x, m) = d.as_cartier_root()?;
    if m != cover.index || x.reorder(pair.ring.ring())? != cover.base_divisor.reorder(pair.ring.ring())? {
        return Err(Error::InvalidInput("divisor does not match the cover data".into()));
    }
    let lifted = cover.pull_back_pair(pair)?;
    let d_prime = QDivisor::single(cover.witness.clone(), BigRational::from_integer(BigInt::from(1)))?;
    let base_different = different_hypersurface(pair, d, e, base_d)?;
    let cover_different = different_hypersurface(&lifted, &d_prime, e, base_d_prime)?;
    let s_base = base_signature(&base_different, base_d)?;
    let cover_signature = base_signature(&cover_different, base_d_prime)?;
    let scaled_base = m_times(m, &s_base);
    let gap = (&scaled_base - &cover_signature).abs();
    Ok(CoverDifferentReport {
        e,
        q: base_different.q,
        base_different,
        cover_different,
        base_signature: s_base,
        cover_signature,
        scaled_base,
        gap,
    })
}
