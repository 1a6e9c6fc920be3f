use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::presentation::{
    big, mul_truncated, pow_truncated, ratio, truncate, PairSpec, QDivisor, RingPresentation, Rounding,
};
use crate::error::{Error, Result};
use crate::ffpoly::Polynomial;
use crate::groebner::Ideal;
use crate::par;

/// Length of `S/J_e` at one level, normalised by `q^k` for the reported
/// dimension `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingRecord {
    pub e: u32,
    pub q: u64,
    pub length: u128,
    pub value: BigRational,
}

/// A finite sequence of normalised lengths and the two-point extrapolation
/// of its last entries under `s_e ≈ s + c/q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Estimate {
    pub records: Vec<SplittingRecord>,
    pub extrapolated: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSample {
    pub t: BigRational,
    pub exponent: u64,
    pub length: u128,
    pub value: BigRational,
}

/// Samples of `t ↦ s_e(R, Δ + tD)` at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureCurve {
    pub e: u32,
    pub q: u64,
    pub samples: Vec<CurveSample>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftDerivative {
    pub e: u32,
    pub r: u32,
    pub t_before: BigRational,
    pub s_before: BigRational,
    pub s_at_one: BigRational,
    pub estimate: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FptRecord {
    pub e: u32,
    pub q: u64,
    pub nu: u64,
    pub ratio: BigRational,
}

fn q_pow(q: u64, k: usize) -> Result<u128> {
    (q as u128).checked_pow(k as u32).ok_or(Error::ExponentOverflow)
}

/// `ℓ(S/(m^[q] : F))` with `F = f^(q-1)·Π g_i^(round c_i)·Π extra`, read off
/// as `q^N − ℓ(S/(m^[q] + F))`.
pub fn colon_length(pair: &PairSpec, e: u32, extra: &[(Polynomial, u64)]) -> Result<u128> {
    let q = pair.q(e)?;
    let pres = &pair.ring;
    let full = q_pow(q, pres.nvars())?;
    let f = pair.colon_factor(e, extra)?;
    if f.is_zero() {
        return Ok(0);
    }
    let sum = pres.maximal_frobenius(q).add_generator(&f)?;
    Ok(full - sum.colength()?)
}

/// The ambient ideal `(m^[q] : f^(q-1)·Π g_i^(round c_i)·g^k)`, whose image
/// in `R` is the degeneracy ideal of the pair at level `e`.
pub fn degeneracy_ideal(pair: &PairSpec, e: u32, extra: Option<(&Polynomial, u64)>) -> Result<Ideal> {
    let fedder = pair.ring.fedder_ideal(e)?;
    let extra: Vec<(Polynomial, u64)> = extra.into_iter().map(|(g, k)| (g.clone(), k)).collect();
    let g = pair.divisor_factor(e, &extra)?;
    if g.is_constant() {
        Ok((*fedder).clone())
    } else {
        fedder.colon_poly(&g)
    }
}

fn record(pair: &PairSpec, e: u32, extra: &[(Polynomial, u64)], dim: usize) -> Result<SplittingRecord> {
    let q = pair.q(e)?;
    let length = colon_length(pair, e, extra)?;
    Ok(SplittingRecord {
        e,
        q,
        length,
        value: ratio(length, q_pow(q, dim)?),
    })
}

pub fn splitting_length(pair: &PairSpec, e: u32) -> Result<SplittingRecord> {
    record(pair, e, &[], pair.ring.dimension())
}

fn levels(e_max: u32) -> Vec<u32> {
    (1..=e_max).collect()
}

/// `s = (q_2·s_2 − q_1·s_1)/(q_2 − q_1)` from the last two records.
pub fn extrapolate(records: &[SplittingRecord]) -> Result<BigRational> {
    let [.., a, b] = records else {
        return Err(Error::InvalidInput("extrapolation needs at least two levels".into()));
    };
    let (q1, q2) = (big(a.q as u128), big(b.q as u128));
    Ok((&q2 * &b.value - &q1 * &a.value) / (q2 - q1))
}

pub fn fsignature_estimate(pair: &PairSpec, e_max: u32) -> Result<Estimate> {
    if e_max < 2 {
        return Err(Error::InvalidInput("e_max must be at least 2".into()));
    }
    let records = par::map(&levels(e_max), |&e| splitting_length(pair, e))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let extrapolated = extrapolate(&records)?;
    Ok(Estimate { records, extrapolated })
}

/// `ℓ(R/J_e)/q^sdim` for `e = 1..=e_max`.
pub fn splitting_ratio_estimate(pair: &PairSpec, sdim: usize, e_max: u32) -> Result<Vec<SplittingRecord>> {
    par::map(&levels(e_max), |&e| record(pair, e, &[], sdim))
        .into_iter()
        .collect()
}

/// Evaluates `s_e(R, Δ + tD)` on `grid`; `D = (x, c)` is a single component.
/// Fails if the values are not non-increasing in `t`.
pub fn signature_curve(pair: &PairSpec, d: &QDivisor, e: u32, grid: &[BigRational]) -> Result<SignatureCurve> {
    let [comp] = d.components() else {
        return Err(Error::InvalidInput("the curve divisor must have one component".into()));
    };
    for t in grid {
        if t.is_negative() || *t > BigRational::one() {
            return Err(Error::InvalidInput(format!("grid value {t} lies outside [0, 1]")));
        }
    }
    let q = pair.q(e)?;
    let norm = q_pow(q, pair.ring.dimension())?;
    let samples = par::map(grid, |t| -> Result<CurveSample> {
        let exponent = pair.rounding.exponent(&(t * &comp.coeff), q)?;
        let length = colon_length(pair, e, &[(comp.g.clone(), exponent)])?;
        Ok(CurveSample {
            t: t.clone(),
            exponent,
            length,
            value: ratio(length, norm),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut sorted: Vec<&CurveSample> = samples.iter().collect();
    sorted.sort_by(|a, b| a.t.cmp(&b.t));
    for w in sorted.windows(2) {
        if w[1].value > w[0].value {
            return Err(Error::InvariantViolation(format!(
                "signature curve increases between t = {} and t = {}",
                w[0].t, w[1].t
            )));
        }
    }
    Ok(SignatureCurve { e, q, samples })
}

/// `p^e·(s_r(1) − s_r(1 − p^(-e)))` for `D = (x, 1/m)`. Every exponent is
/// rounded as `⌈c·q⌉`, so that the two sample points differ at level `r`.
pub fn left_derivative_at_one(pair: &PairSpec, d: &QDivisor, e: u32, r: u32) -> Result<LeftDerivative> {
    if e == 0 || e > r {
        return Err(Error::InvalidInput(format!("need 1 <= e <= r, got e = {e}, r = {r}")));
    }
    let (_, m) = d.as_cartier_root()?;
    let qe = pair.q(e)?;
    if (qe - 1) % m != 0 {
        return Err(Error::IndexNotAdmissible { m, q_minus_one: qe - 1 });
    }
    let t_before = BigRational::one() - ratio(1, qe as u128);
    let grid = [t_before.clone(), BigRational::one()];
    let curve = signature_curve(&pair.with_rounding(Rounding::CeilQ), d, r, &grid)?;
    let s_before = curve.samples[0].value.clone();
    let s_at_one = curve.samples[1].value.clone();
    let estimate = big(qe as u128) * (&s_at_one - &s_before);
    Ok(LeftDerivative {
        e,
        r,
        t_before,
        s_before,
        s_at_one,
        estimate,
    })
}

/// `ℓ(R/I^[q])/q^d` for `e = 1..=e_max` with extrapolation.
pub fn hilbert_kunz(pres: &RingPresentation, ideal: &Ideal, e_max: u32) -> Result<Estimate> {
    if e_max < 2 {
        return Err(Error::InvalidInput("e_max must be at least 2".into()));
    }
    if !ideal.ring().same_space(pres.ring()) {
        return Err(Error::RingMismatch);
    }
    let base = match pres.hypersurface_equation() {
        Some(f) => ideal.add_generator(f)?,
        None => ideal.clone(),
    };
    base.colength()?;
    let records = par::map(&levels(e_max), |&e| -> Result<SplittingRecord> {
        let q = pres.p().checked_pow(e).ok_or(Error::ExponentOverflow)?;
        let mut powered = ideal.frobenius_power(e)?;
        if let Some(f) = pres.hypersurface_equation() {
            powered = powered.add_generator(f)?;
        }
        let length = powered.colength()?;
        Ok(SplittingRecord {
            e,
            q,
            length,
            value: ratio(length, q_pow(q, pres.dimension())?),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let extrapolated = extrapolate(&records)?;
    Ok(Estimate { records, extrapolated })
}

/// `ν_g(q)/q` for `e = 1..=e_max`, where `ν_g(q)` is the largest `k` with
/// `g^k·f^(q-1) ∉ m^[q]`. Membership in `m^[q]` is read off termwise.
pub fn fpt_estimate(pres: &RingPresentation, g: &Polynomial, e_max: u32) -> Result<Vec<FptRecord>> {
    if !g.ring().same_space(pres.ring()) {
        return Err(Error::RingMismatch);
    }
    if g.is_zero() || !g.coefficient_of(&vec![0; pres.nvars()]).is_zero() {
        return Err(Error::InvalidInput(format!(
            "{g} is not a nonzero element of the maximal ideal"
        )));
    }
    let g = g.reorder(pres.ring())?;
    par::map(&levels(e_max), |&e| -> Result<FptRecord> {
        let q = pres.p().checked_pow(e).ok_or(Error::ExponentOverflow)?;
        let base = truncate(&pres.fedder_factor(e)?, q);
        if base.is_zero() {
            return Err(Error::InvalidInput(
                "f^(q-1) lies in m^[q]: the ring is not F-pure".into(),
            ));
        }
        let outside = |k: u64| -> Result<bool> { Ok(!mul_truncated(&base, &pow_truncated(&g, k, q)?, q)?.is_zero()) };
        // invariant: outside(lo) and !outside(hi)
        let (mut lo, mut hi) = (0u64, (pres.nvars() as u64) * (q - 1) + 1);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if outside(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(FptRecord {
            e,
            q,
            nu: lo,
            ratio: BigRational::new(BigInt::from(lo), BigInt::from(q)),
        })
    })
    .into_iter()
    .collect()
}

/// Checks `(J_e : g)^[p^(r−e)] ⊆ (J_r : g^(p^(r−e)))` for the degeneracy
/// ideals of `pair`, generator by generator.
pub fn frobenius_colon_containment(pair: &PairSpec, g: &Polynomial, e: u32, r: u32) -> Result<bool> {
    if e > r {
        return Err(Error::InvalidInput(format!("need e <= r, got e = {e}, r = {r}")));
    }
    let shift = pair.q(r - e)?;
    let small = degeneracy_ideal(pair, e, Some((g, 1)))?.frobenius_power(r - e)?;
    let large = degeneracy_ideal(pair, r, Some((g, shift)))?;
    large.contains_ideal(&small)
}
