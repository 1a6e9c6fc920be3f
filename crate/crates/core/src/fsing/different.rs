use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::presentation::{ratio, BasePresentation, PairSpec, QDivisor, RingPresentation, Rounding};
use super::splitting::{colon_length, left_derivative_at_one, signature_curve, splitting_length};
use super::tolerances;
use crate::error::{Error, Result};
use crate::ffpoly::Polynomial;
use crate::par;

/// Largest number of basis monomials `y^α` handled in one run.
const MAX_BASIS: u128 = 1 << 20;

/// The map on `D` obtained from the generator of the splitting module,
/// written as `Φ_D(h·_)`; its divisor is `div(h)/(q − 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentResult {
    pub e: u32,
    pub q: u64,
    pub h: Polynomial,
    /// `ord_v(h)/(q − 1)` for each base variable `v`.
    pub coefficients: Vec<(String, BigRational)>,
    /// `h` with its coordinate-monomial content removed.
    pub residual: Polynomial,
    /// `(α, φ(y^α))` for every basis monomial with nonzero image.
    pub values: Vec<(Vec<u64>, Polynomial)>,
}

impl DifferentResult {
    /// The different as a divisor on the base ring.
    pub fn as_divisor(&self) -> Result<QDivisor> {
        let ring = self.h.ring();
        let mut out = QDivisor::empty();
        for (j, (_, c)) in self.coefficients.iter().enumerate() {
            if !c.is_zero() {
                out.push(Polynomial::var(ring, j), c.clone())?;
            }
        }
        if !self.residual.is_constant() {
            out.push(self.residual.clone(), ratio(1, (self.q - 1) as u128))?;
        }
        Ok(out)
    }

    pub fn residual_is_unit(&self) -> bool {
        self.residual.is_constant() && !self.residual.is_zero()
    }
}

/// Trace projection `Φ^e`: `x^(q·b + (q−1)) ↦ x^b`, all other monomials to 0.
pub fn trace_projection(f: &Polynomial, q: u64) -> Polynomial {
    let terms = f
        .terms()
        .filter(|(e, _)| e.iter().all(|&a| a % q == q - 1))
        .map(|(e, c)| (e.iter().map(|&a| a / q).collect(), c))
        .collect();
    Polynomial::from_terms(f.ring(), terms)
}

fn basis_exponents(k: usize, q: u64) -> Result<Vec<Vec<u64>>> {
    let count = (q as u128).checked_pow(k as u32).ok_or(Error::ExponentOverflow)?;
    if count > MAX_BASIS {
        return Err(Error::BudgetExhausted(format!("{count} basis monomials on D")));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut alpha = vec![0u64; k];
    loop {
        out.push(alpha.clone());
        let mut i = 0;
        loop {
            if i == k {
                return Ok(out);
            }
            alpha[i] += 1;
            if alpha[i] < q {
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}

/// Computes the different of `(R, Δ)` along `D = (x, 1/m)` at level `e`.
pub fn different_hypersurface(
    pair: &PairSpec,
    d: &QDivisor,
    e: u32,
    base: &BasePresentation,
) -> Result<DifferentResult> {
    let (x, m) = d.as_cartier_root()?;
    let q = pair.q(e)?;
    if (q - 1) % m != 0 {
        return Err(Error::IndexNotAdmissible { m, q_minus_one: q - 1 });
    }
    base.validate(&pair.ring, x)?;
    let ambient = pair.ring.ring();
    let big_f = pair
        .ring
        .fedder_factor(e)?
        .mul(&pair.divisor_factor(e, &[(x.clone(), (q - 1) / m)])?)?;
    let k = base.ring.nvars();
    let lift_powers: Vec<Vec<Polynomial>> = base
        .lift
        .iter()
        .map(|l| {
            let l = l.reorder(ambient)?;
            let mut pw = vec![Polynomial::one(ambient)];
            for a in 1..q as usize {
                pw.push(pw[a - 1].mul(&l)?);
            }
            Ok(pw)
        })
        .collect::<Result<_>>()?;
    let alphas = basis_exponents(k, q)?;
    let images = par::map(&alphas, |alpha| -> Result<Polynomial> {
        let mut prod = big_f.clone();
        for (j, &a) in alpha.iter().enumerate() {
            if a > 0 {
                prod = prod.mul(&lift_powers[j][a as usize])?;
            }
        }
        base.reduce(&trace_projection(&prod, q))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut h = Polynomial::zero(&base.ring);
    let mut values = Vec::new();
    for (alpha, c) in alphas.iter().zip(&images) {
        if c.is_zero() {
            continue;
        }
        let shift: Vec<u64> = alpha.iter().map(|&a| q - 1 - a).collect();
        h = h.add(&c.frobenius_power(e)?.mul_term(&shift, 1)?)?;
        values.push((alpha.clone(), c.clone()));
    }
    if h.is_zero() {
        return Err(Error::InvalidInput(
            "the map vanishes on D: the pair is not F-pure along D".into(),
        ));
    }
    for (alpha, c) in alphas.iter().zip(&images) {
        if trace_projection(&h.mul_term(alpha, 1)?, q) != *c {
            return Err(Error::InvariantViolation(format!(
                "different reconstruction fails at y^{alpha:?}"
            )));
        }
    }

    let ords: Vec<u64> = (0..k)
        .map(|j| h.terms().map(|(ex, _)| ex[j]).min().unwrap_or(0))
        .collect();
    let residual_terms = h
        .terms()
        .map(|(ex, c)| (ex.iter().zip(&ords).map(|(a, o)| a - o).collect(), c))
        .collect();
    let residual = Polynomial::from_terms(&base.ring, residual_terms);
    let coefficients = base
        .ring
        .vars()
        .iter()
        .zip(&ords)
        .map(|(v, &o)| (v.clone(), ratio(o as u128, (q - 1) as u128)))
        .collect();
    Ok(DifferentResult {
        e,
        q,
        h,
        coefficients,
        residual,
        values,
    })
}

/// `s_e(O_D, Diff)` on the base ring from a computed different.
pub fn base_signature(diff: &DifferentResult, base: &BasePresentation) -> Result<BigRational> {
    let pres = RingPresentation::regular(&base.ring);
    let pair = PairSpec::new(pres, diff.as_divisor()?, Rounding::CeilQMinusOne)?;
    Ok(splitting_length(&pair, diff.e)?.value)
}

/// `ℓ(R/(J_e : x^((q−1)/m)))/q^(d−1)`.
pub fn divisor_signature_by_colon(pair: &PairSpec, d: &QDivisor, e: u32) -> Result<BigRational> {
    let (x, m) = d.as_cartier_root()?;
    let q = pair.q(e)?;
    if (q - 1) % m != 0 {
        return Err(Error::IndexNotAdmissible { m, q_minus_one: q - 1 });
    }
    let dim = pair.ring.dimension();
    if dim == 0 {
        return Err(Error::InvalidInput(
            "a divisor needs a ring of positive dimension".into(),
        ));
    }
    let length = colon_length(pair, e, &[(x.clone(), (q - 1) / m)])?;
    let norm = (q as u128).checked_pow(dim as u32 - 1).ok_or(Error::ExponentOverflow)?;
    Ok(ratio(length, norm))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionLevel {
    pub e: u32,
    pub q: u64,
    /// `m ∤ q − 1`: no different or slope at this level.
    pub skipped: bool,
    pub signature: BigRational,
    pub slope: Option<BigRational>,
    pub rhs_direct: Option<BigRational>,
    pub rhs_colon: Option<BigRational>,
    pub routes_agree: Option<bool>,
    pub different: Option<Vec<(String, BigRational)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub levels: Vec<AdjunctionLevel>,
    /// Level at which the inequality is judged (largest admissible one).
    pub top_level: u32,
    /// `s_e(R, Δ) − s_e(D, Diff_D(Δ))` at the top level.
    pub margin: BigRational,
    pub inequality_holds: bool,
    /// `|margin| ≤ 2/q` at the top level.
    pub equality: bool,
    /// Largest distance of the curve on `{0, 1/4, 1/2, 3/4, 1}` from its
    /// chord at the top level.
    pub curve_deviation: BigRational,
    pub linear: bool,
}

/// Compares the slope of the signature curve at `t = 1`, the signature of
/// the different computed directly, and the colon formula for the same
/// quantity, for `e = 1..=e_max`.
pub fn adjunction_check(
    pair: &PairSpec,
    d: &QDivisor,
    base: &BasePresentation,
    e_max: u32,
) -> Result<AdjunctionReport> {
    let (x, m) = d.as_cartier_root()?;
    base.validate(&pair.ring, x)?;
    let levels: Vec<u32> = (1..=e_max).collect();
    let levels = par::map(&levels, |&e| -> Result<AdjunctionLevel> {
        let q = pair.q(e)?;
        let signature = splitting_length(pair, e)?.value;
        if (q - 1) % m != 0 {
            return Ok(AdjunctionLevel {
                e,
                q,
                skipped: true,
                signature,
                slope: None,
                rhs_direct: None,
                rhs_colon: None,
                routes_agree: None,
                different: None,
            });
        }
        let slope = left_derivative_at_one(pair, d, e, e)?.estimate;
        let diff = different_hypersurface(pair, d, e, base)?;
        let rhs_direct = base_signature(&diff, base)?;
        let rhs_colon = divisor_signature_by_colon(pair, d, e)?;
        Ok(AdjunctionLevel {
            e,
            q,
            skipped: false,
            signature,
            slope: Some(slope),
            routes_agree: Some(rhs_direct == rhs_colon),
            rhs_direct: Some(rhs_direct),
            rhs_colon: Some(rhs_colon),
            different: Some(diff.coefficients),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let top = levels
        .iter()
        .rev()
        .find(|l| !l.skipped)
        .ok_or_else(|| Error::IndexNotAdmissible {
            m,
            q_minus_one: pair.ring.p().pow(e_max) - 1,
        })?;
    let rhs = top.rhs_direct.clone().expect("admissible level has a different");
    let margin = &top.signature - &rhs;
    let slack = tolerances::over_q(tolerances::COROLLARY_OVER_Q, top.q);
    let inequality_holds = margin >= -slack.clone();
    let equality = margin.abs() <= slack;

    let grid: Vec<BigRational> = (0..=4).map(|i| ratio(i, 4)).collect();
    let curve = signature_curve(pair, d, top.e, &grid)?;
    let s0 = &curve.samples[0].value;
    let s1 = &curve.samples[4].value;
    let curve_deviation = curve
        .samples
        .iter()
        .map(|s| {
            let chord = s0 + (s1 - s0) * &s.t;
            (&s.value - chord).abs()
        })
        .max()
        .unwrap_or_else(BigRational::zero);
    let linear = curve_deviation <= tolerances::over_q(tolerances::CURVE_DEVIATION_OVER_Q, top.q);
    Ok(AdjunctionReport {
        top_level: top.e,
        margin,
        inequality_holds,
        equality,
        curve_deviation,
        linear,
        levels,
    })
}
