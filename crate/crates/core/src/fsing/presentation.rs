use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::{MonomialOrder, Polynomial, Ring};
use crate::groebner::Ideal;

/// `S = F_p[x_1..x_N]` or a hypersurface quotient `S/(f)`.
///
/// Normality of `S/(f)` is taken on trust. The polynomial model stands in
/// for the local ring at the origin, so inputs should be positively graded.
pub struct RingPresentation {
    ring: Arc<Ring>,
    hypersurface: Option<Polynomial>,
    dimension: usize,
    fedder: Mutex<BTreeMap<u32, Arc<Ideal>>>,
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingPresentation")
            .field("p", &self.ring.p())
            .field("vars", &self.ring.vars())
            .field("hypersurface", &self.hypersurface.as_ref().map(|h| h.to_string()))
            .field("dimension", &self.dimension)
            .finish()
    }
}

impl RingPresentation {
    pub fn regular(ring: &Arc<Ring>) -> Arc<Self> {
        Arc::new(Self {
            ring: ring.clone(),
            hypersurface: None,
            dimension: ring.nvars(),
            fedder: Mutex::new(BTreeMap::new()),
        })
    }

    /// `S/(f)`. A supplied dimension must match `N - 1`.
    pub fn hypersurface(ring: &Arc<Ring>, f: Polynomial, dimension: Option<usize>) -> Result<Arc<Self>> {
        if !f.ring().same_space(ring) {
            return Err(Error::RingMismatch);
        }
        if f.is_zero() || f.is_constant() {
            return Err(Error::InvalidInput(
                "hypersurface equation must be a nonconstant polynomial".into(),
            ));
        }
        let f = f.reorder(ring)?;
        let computed = Ideal::new(ring, vec![f.clone()])?.krull_dimension()?;
        if let Some(d) = dimension {
            if d != computed {
                return Err(Error::InvalidInput(format!(
                    "declared dimension {d} but the hypersurface has dimension {computed}"
                )));
            }
        }
        Ok(Arc::new(Self {
            ring: ring.clone(),
            hypersurface: Some(f),
            dimension: computed,
            fedder: Mutex::new(BTreeMap::new()),
        }))
    }

    /// Convenience constructor over a grevlex ring.
    pub fn from_strs(p: u64, vars: &[&str], f: Option<&str>) -> Result<Arc<Self>> {
        let ring = Ring::new(p, vars, MonomialOrder::Grevlex)?;
        match f {
            None => Ok(Self::regular(&ring)),
            Some(src) => {
                let f = ring.parse(src)?;
                Self::hypersurface(&ring, f, None)
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn hypersurface_equation(&self) -> Option<&Polynomial> {
        self.hypersurface.as_ref()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn parse(&self, src: &str) -> Result<Polynomial> {
        self.ring.parse(src)
    }

    /// The defining ideal `(f)` (zero for a regular ring).
    pub fn defining_ideal(&self) -> Result<Ideal> {
        Ideal::new(&self.ring, self.hypersurface.iter().cloned().collect())
    }

    /// `m^[q]`.
    pub fn maximal_frobenius(&self, q: u64) -> Ideal {
        Ideal::frobenius_power_of_maximal(&self.ring, q)
    }

    /// `f^(q-1)`, or 1 for a regular ring.
    pub fn fedder_factor(&self, e: u32) -> Result<Polynomial> {
        match &self.hypersurface {
            None => Ok(Polynomial::one(&self.ring)),
            Some(f) if e == 0 => Ok(Polynomial::one(f.ring())),
            Some(f) => f.power_q_minus_one(e),
        }
    }

    /// `(m^[q] : f^(q-1))`, built level by level from
    /// `J_e = (J_(e-1)^[p] : f^(p-1))` and cached.
    pub fn fedder_ideal(&self, e: u32) -> Result<Arc<Ideal>> {
        if let Some(j) = self.fedder.lock().expect("fedder lock").get(&e) {
            return Ok(j.clone());
        }
        let ideal = match (&self.hypersurface, e) {
            (None, _) => self.maximal_frobenius(self.ring.p().checked_pow(e).ok_or(Error::ExponentOverflow)?),
            (Some(_), 0) => Ideal::maximal(&self.ring),
            (Some(f), _) => {
                let prev = self.fedder_ideal(e - 1)?;
                let g = f.pow(self.ring.p() - 1)?;
                prev.frobenius_power(1)?.colon_poly(&g)?
            }
        };
        let mut cache = self.fedder.lock().expect("fedder lock");
        Ok(cache.entry(e).or_insert_with(|| Arc::new(ideal)).clone())
    }
}

/// Exponent rounding for the divisor factors at level `e`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rounding {
    /// `⌈c·(q − 1)⌉`.
    #[default]
    CeilQMinusOne,
    /// `⌈c·q⌉`.
    CeilQ,
}

impl Rounding {
    pub fn exponent(self, coeff: &BigRational, q: u64) -> Result<u64> {
        let scale = match self {
            Rounding::CeilQMinusOne => q - 1,
            Rounding::CeilQ => q,
        };
        let v = (coeff * BigRational::from_integer(BigInt::from(scale))).ceil();
        v.to_integer().to_u64().ok_or(Error::ExponentOverflow)
    }

    pub fn name(self) -> &'static str {
        match self {
            Rounding::CeilQMinusOne => "qm1",
            Rounding::CeilQ => "q",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorComponent {
    pub g: Polynomial,
    pub coeff: BigRational,
}

/// Effective Q-divisor `Σ c_i·div(g_i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QDivisor {
    components: Vec<DivisorComponent>,
}

impl QDivisor {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(components: Vec<(Polynomial, BigRational)>) -> Result<Self> {
        let mut out = Self::empty();
        for (g, c) in components {
            out.push(g, c)?;
        }
        Ok(out)
    }

    pub fn single(g: Polynomial, coeff: BigRational) -> Result<Self> {
        Self::new(vec![(g, coeff)])
    }

    pub fn push(&mut self, g: Polynomial, coeff: BigRational) -> Result<()> {
        if g.is_zero() || g.is_constant() {
            return Err(Error::InvalidInput(format!("divisor component {g} is zero or a unit")));
        }
        if coeff.is_negative() {
            return Err(Error::InvalidInput(format!("negative coefficient {coeff} on {g}")));
        }
        if let Some(first) = self.components.first() {
            if !first.g.ring().same_space(g.ring()) {
                return Err(Error::RingMismatch);
            }
        }
        self.components.push(DivisorComponent { g, coeff });
        Ok(())
    }

    pub fn components(&self) -> &[DivisorComponent] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn plus(&self, other: &QDivisor) -> Result<QDivisor> {
        let mut out = self.clone();
        for c in &other.components {
            out.push(c.g.clone(), c.coeff.clone())?;
        }
        Ok(out)
    }

    pub fn scaled(&self, t: &BigRational) -> Result<QDivisor> {
        let mut out = QDivisor::empty();
        for c in &self.components {
            out.push(c.g.clone(), &c.coeff * t)?;
        }
        Ok(out)
    }

    /// Pullback along a ring map given by variable images.
    pub fn pull_back(&self, images: &[Polynomial]) -> Result<QDivisor> {
        let mut out = QDivisor::empty();
        for c in &self.components {
            out.push(c.g.substitute(images)?, c.coeff.clone())?;
        }
        Ok(out)
    }

    /// `(x, 1/m)` for a divisor `D` with `mD = div(x)`.
    pub fn as_cartier_root(&self) -> Result<(&Polynomial, u64)> {
        match self.components.as_slice() {
            [c] if c.coeff.numer().is_one() && c.coeff.denom().is_positive() => {
                let m = c.coeff.denom().to_u64().ok_or(Error::ExponentOverflow)?;
                Ok((&c.g, m))
            }
            _ => Err(Error::InvalidInput(
                "expected a single component with coefficient 1/m".into(),
            )),
        }
    }
}

/// A pair `(R, Δ)` with a rounding rule for `Δ`.
#[derive(Clone, Debug)]
pub struct PairSpec {
    pub ring: Arc<RingPresentation>,
    pub delta: QDivisor,
    pub rounding: Rounding,
}

impl PairSpec {
    pub fn new(ring: Arc<RingPresentation>, delta: QDivisor, rounding: Rounding) -> Result<Self> {
        for c in delta.components() {
            if !c.g.ring().same_space(ring.ring()) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(Self { ring, delta, rounding })
    }

    pub fn trivial(ring: Arc<RingPresentation>) -> Self {
        Self {
            ring,
            delta: QDivisor::empty(),
            rounding: Rounding::default(),
        }
    }

    pub fn with_rounding(&self, rounding: Rounding) -> Self {
        Self {
            rounding,
            ..self.clone()
        }
    }

    pub fn q(&self, e: u32) -> Result<u64> {
        self.ring.p().checked_pow(e).ok_or(Error::ExponentOverflow)
    }

    /// `Π g_i^(round c_i) · Π extra`, the divisor part of the colon factor.
    pub fn divisor_factor(&self, e: u32, extra: &[(Polynomial, u64)]) -> Result<Polynomial> {
        let q = self.q(e)?;
        let r = self.ring.ring();
        let mut acc = Polynomial::one(r);
        for c in self.delta.components() {
            let k = self.rounding.exponent(&c.coeff, q)?;
            acc = acc.mul(&c.g.reorder(r)?.pow(k)?)?;
        }
        for (g, k) in extra {
            acc = acc.mul(&g.reorder(r)?.pow(*k)?)?;
        }
        Ok(acc)
    }

    /// `f^(q-1) · Π g_i^(round c_i) · Π extra`, truncated modulo `m^[q]`.
    pub fn colon_factor(&self, e: u32, extra: &[(Polynomial, u64)]) -> Result<Polynomial> {
        let q = self.q(e)?;
        let r = self.ring.ring();
        let mut acc = truncate(&self.ring.fedder_factor(e)?, q);
        let mut factors: Vec<(Polynomial, u64)> = Vec::new();
        for c in self.delta.components() {
            factors.push((c.g.reorder(r)?, self.rounding.exponent(&c.coeff, q)?));
        }
        for (g, k) in extra {
            factors.push((g.reorder(r)?, *k));
        }
        for (g, k) in factors {
            if acc.is_zero() {
                break;
            }
            acc = mul_truncated(&acc, &pow_truncated(&g, k, q)?, q)?;
        }
        Ok(acc)
    }
}

/// Drops every term with some exponent `>= q`.
pub(crate) fn truncate(f: &Polynomial, q: u64) -> Polynomial {
    if f.max_exponent() < q {
        return f.clone();
    }
    let terms = f
        .terms()
        .filter(|(e, _)| e.iter().all(|&x| x < q))
        .map(|(e, c)| (e.to_vec(), c))
        .collect();
    Polynomial::from_terms(f.ring(), terms)
}

pub(crate) fn mul_truncated(a: &Polynomial, b: &Polynomial, q: u64) -> Result<Polynomial> {
    if b.is_monomial() {
        let e = b.exponents(0);
        if e.iter().any(|&x| x >= q) {
            return Ok(Polynomial::zero(a.ring()));
        }
        return Ok(truncate(&a.mul_term(e, b.coefficient(0))?, q));
    }
    Ok(truncate(&a.mul(b)?, q))
}

pub(crate) fn pow_truncated(g: &Polynomial, mut k: u64, q: u64) -> Result<Polynomial> {
    if g.is_monomial() {
        let e = g.exponents(0);
        let mut out = Vec::with_capacity(e.len());
        for &x in e {
            let y = x.checked_mul(k).ok_or(Error::ExponentOverflow)?;
            if y >= q {
                return Ok(Polynomial::zero(g.ring()));
            }
            out.push(y);
        }
        let field = g.ring().field();
        let c = field.pow(g.coefficient(0), k);
        return Ok(Polynomial::from_terms(g.ring(), vec![(out, c)]));
    }
    let mut base = truncate(g, q);
    let mut acc = Polynomial::one(g.ring());
    while k > 0 {
        if k.is_odd() {
            acc = mul_truncated(&acc, &base, q)?;
        }
        k >>= 1;
        if k > 0 {
            base = mul_truncated(&base, &base, q)?;
        }
    }
    Ok(acc)
}

/// Maps from a polynomial ring `F_p[y_1..y_k]` onto a divisor `D` of the
/// ambient model: `reduce` sends each ambient variable into the base ring,
/// `lift` sends each base variable back to the ambient ring.
#[derive(Clone, Debug)]
pub struct BasePresentation {
    pub ring: Arc<Ring>,
    pub reduce: Vec<Polynomial>,
    pub lift: Vec<Polynomial>,
}

impl BasePresentation {
    pub fn new(ring: Arc<Ring>, reduce: Vec<Polynomial>, lift: Vec<Polynomial>) -> Result<Self> {
        if lift.len() != ring.nvars() {
            return Err(Error::InvalidInput(format!(
                "base ring has {} variables but {} lifts were given",
                ring.nvars(),
                lift.len()
            )));
        }
        for r in &reduce {
            if !r.ring().same_space(&ring) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(Self { ring, reduce, lift })
    }

    /// Parses images given as strings in the respective rings.
    pub fn from_strs(ambient: &Arc<Ring>, base_vars: &[&str], reduce: &[&str], lift: &[&str]) -> Result<Self> {
        let ring = Ring::new(ambient.p(), base_vars, MonomialOrder::Grevlex)?;
        let reduce = reduce.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        let lift = lift.iter().map(|s| ambient.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, reduce, lift)
    }

    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        f.substitute(&self.reduce)
    }

    /// Checks that the maps are compatible with `R` and with `D = V(x)`.
    pub fn validate(&self, ring: &RingPresentation, x: &Polynomial) -> Result<()> {
        if self.reduce.len() != ring.nvars() {
            return Err(Error::InvalidInput(format!(
                "ambient ring has {} variables but {} reductions were given",
                ring.nvars(),
                self.reduce.len()
            )));
        }
        for l in &self.lift {
            if !l.ring().same_space(ring.ring()) {
                return Err(Error::RingMismatch);
            }
        }
        if let Some(f) = ring.hypersurface_equation() {
            if !self.reduce(f)?.is_zero() {
                return Err(Error::InvalidInput("base presentation: f does not vanish on D".into()));
            }
        }
        if !self.reduce(x)?.is_zero() {
            return Err(Error::InvalidInput(format!(
                "base presentation: {x} does not vanish on D"
            )));
        }
        for (j, l) in self.lift.iter().enumerate() {
            if self.reduce(l)? != Polynomial::var(&self.ring, j) {
                return Err(Error::InvalidInput(format!(
                    "base presentation: lift of {} does not reduce to itself",
                    self.ring.vars()[j]
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn big(n: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
