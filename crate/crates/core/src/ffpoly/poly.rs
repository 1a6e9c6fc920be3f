use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::field::PrimeField;
use super::monomial::{divides, mul_into, total_degree, Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// Resource caps shared by every computation in a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of critical pairs a single Buchberger run may reduce.
    pub max_pairs: u64,
    /// Largest bounding box (product of pure-power exponents) a staircase
    /// count may inspect.
    pub max_box_volume: u128,
    /// Maximum number of colon steps in a saturation.
    pub max_saturation_steps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_pairs: 5_000_000,
            max_box_volume: 1u128 << 60,
            max_saturation_steps: 64,
        }
    }
}

/// Polynomial ring F_p[x_1, ..., x_N] with a fixed monomial order.
#[derive(Clone, Debug)]
pub struct Ring {
    field: PrimeField,
    vars: Vec<String>,
    order: MonomialOrder,
    limits: Limits,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.order == other.order
    }
}

impl Eq for Ring {}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S: AsRef<str>>(p: u64, vars: &[S], order: MonomialOrder) -> Result<Arc<Ring>> {
        let field = PrimeField::new(p)?;
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_identifier(v) {
                return Err(Error::InvalidInput(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate variable {v:?}")));
            }
        }
        Ok(Arc::new(Ring {
            field,
            vars,
            order,
            limits: Limits::default(),
        }))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring { order, ..self.clone() })
    }

    pub fn with_limits(&self, limits: Limits) -> Arc<Ring> {
        Arc::new(Ring { limits, ..self.clone() })
    }

    /// A ring with extra variables prepended, ordered by `order`.
    pub fn extended(&self, names: &[&str], order: MonomialOrder) -> Result<Arc<Ring>> {
        let mut vars: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        vars.extend(self.vars.iter().cloned());
        let mut ring = Ring::new(self.p(), &vars, order)?;
        Arc::make_mut(&mut ring).limits = self.limits;
        Ok(ring)
    }

    /// Same coefficient field and variables, possibly a different order.
    pub fn same_space(&self, other: &Ring) -> bool {
        self.field == other.field && self.vars == other.vars
    }
}

/// Sparse polynomial: terms in strictly descending monomial order, no zero
/// coefficients. Exponents are stored flat, `nvars` per term.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    exps: Vec<u64>,
    coeffs: Vec<u64>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.exps == other.exps && self.coeffs == other.coeffs
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self {
            ring: ring.clone(),
            exps: Vec::new(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: i64) -> Self {
        let c = ring.field.from_i64(c);
        if c == 0 {
            return Self::zero(ring);
        }
        Self {
            ring: ring.clone(),
            exps: vec![0; ring.nvars()],
            coeffs: vec![c],
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        Self::monomial(ring, &e, 1)
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable {name:?}")))?;
        Ok(Self::var(ring, i))
    }

    pub fn monomial(ring: &Arc<Ring>, exps: &[u64], c: i64) -> Self {
        assert_eq!(exps.len(), ring.nvars(), "monomial arity");
        let c = ring.field.from_i64(c);
        if c == 0 {
            return Self::zero(ring);
        }
        Self {
            ring: ring.clone(),
            exps: exps.to_vec(),
            coeffs: vec![c],
        }
    }

    /// Builds a canonical polynomial from arbitrary terms (unsorted,
    /// duplicates allowed, coefficients already reduced mod p).
    pub fn from_terms(ring: &Arc<Ring>, mut terms: Vec<(Vec<u64>, u64)>) -> Self {
        let order = ring.order;
        let field = ring.field;
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        let n = ring.nvars();
        let mut exps = Vec::with_capacity(terms.len() * n);
        let mut coeffs: Vec<u64> = Vec::with_capacity(terms.len());
        let mut last: Option<Vec<u64>> = None;
        for (e, c) in terms {
            debug_assert_eq!(e.len(), n);
            let c = c % field.p();
            if last.as_deref() == Some(&e[..]) {
                let l = coeffs.len() - 1;
                coeffs[l] = field.add(coeffs[l], c);
            } else {
                if let Some(l) = coeffs.last() {
                    if *l == 0 {
                        coeffs.pop();
                        exps.truncate(exps.len() - n);
                    }
                }
                exps.extend_from_slice(&e);
                coeffs.push(c);
                last = Some(e);
            }
        }
        if let Some(l) = coeffs.last() {
            if *l == 0 {
                coeffs.pop();
                exps.truncate(exps.len() - n);
            }
        }
        Self {
            ring: ring.clone(),
            exps,
            coeffs,
        }
    }

    /// Terms already strictly descending with nonzero coefficients.
    pub(crate) fn from_sorted_unchecked(ring: &Arc<Ring>, exps: Vec<u64>, coeffs: Vec<u64>) -> Self {
        debug_assert_eq!(exps.len(), coeffs.len() * ring.nvars());
        Self {
            ring: ring.clone(),
            exps,
            coeffs,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Same as [`Polynomial::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.len() == 1 && self.exps.iter().all(|&e| e == 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.len() == 1
    }

    pub fn exponents(&self, i: usize) -> &[u64] {
        let n = self.nvars();
        &self.exps[i * n..(i + 1) * n]
    }

    pub fn coefficient(&self, i: usize) -> u64 {
        self.coeffs[i]
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u64], u64)> + '_ {
        (0..self.len()).map(move |i| (self.exponents(i), self.coeffs[i]))
    }

    pub fn leading_exponents(&self) -> Option<&[u64]> {
        (!self.is_zero()).then(|| self.exponents(0))
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.leading_exponents().map(|e| Monomial::new(e.to_vec()))
    }

    pub fn leading_coefficient(&self) -> Option<u64> {
        self.coeffs.first().copied()
    }

    /// Coefficient of the given monomial (0 when absent).
    pub fn coefficient_of(&self, e: &[u64]) -> u64 {
        let order = self.ring.order;
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match order.cmp(self.exponents(mid), e) {
                Ordering::Equal => return self.coeffs[mid],
                Ordering::Greater => lo = mid + 1,
                Ordering::Less => hi = mid,
            }
        }
        0
    }

    pub fn total_degree(&self) -> Result<u64> {
        let mut d = 0;
        for (e, _) in self.terms() {
            d = d.max(total_degree(e)?);
        }
        Ok(d)
    }

    /// Largest single exponent appearing in any term.
    pub fn max_exponent(&self) -> u64 {
        self.exps.iter().copied().max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u64 {
        self.terms().map(|(e, _)| e[var]).max().unwrap_or(0)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn merge(&self, other: &Polynomial, scale_other: u64) -> Polynomial {
        let field = self.ring.field;
        let order = self.ring.order;
        let n = self.nvars();
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let mut coeffs = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() || j < other.len() {
            let ord = if i == self.len() {
                Ordering::Less
            } else if j == other.len() {
                Ordering::Greater
            } else {
                order.cmp(self.exponents(i), other.exponents(j))
            };
            match ord {
                Ordering::Greater => {
                    exps.extend_from_slice(self.exponents(i));
                    coeffs.push(self.coeffs[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let c = field.mul(other.coeffs[j], scale_other);
                    if c != 0 {
                        exps.extend_from_slice(other.exponents(j));
                        coeffs.push(c);
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(self.coeffs[i], field.mul(other.coeffs[j], scale_other));
                    if c != 0 {
                        exps.extend_from_slice(self.exponents(i));
                        coeffs.push(c);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        debug_assert_eq!(exps.len(), coeffs.len() * n);
        Polynomial::from_sorted_unchecked(&self.ring, exps, coeffs)
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, 1))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, self.ring.field.neg(1 % self.ring.p())))
    }

    /// `self + c * other` with `c` a residue.
    pub(crate) fn add_scaled(&self, other: &Polynomial, c: u64) -> Polynomial {
        self.merge(other, c)
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.ring.field.neg(1))
    }

    pub fn scale(&self, c: u64) -> Polynomial {
        let field = self.ring.field;
        let c = c % field.p();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            exps: self.exps.clone(),
            coeffs: self.coeffs.iter().map(|&a| field.mul(a, c)).collect(),
        }
    }

    /// Scales so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None | Some(1) => self.clone(),
            Some(lc) => self.scale(self.ring.field.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    /// Multiplies by `c * x^m`; order-preserving so no re-sort is needed.
    pub fn mul_term(&self, m: &[u64], c: u64) -> Result<Polynomial> {
        let field = self.ring.field;
        let c = c % field.p();
        if c == 0 || self.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let n = self.nvars();
        let mut exps = vec![0; self.exps.len()];
        for (i, (e, _)) in self.terms().enumerate() {
            mul_into(e, m, &mut exps[i * n..(i + 1) * n])?;
        }
        Ok(Polynomial {
            ring: self.ring.clone(),
            exps,
            coeffs: self.coeffs.iter().map(|&a| field.mul(a, c)).collect(),
        })
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            return big.mul_term(small.exponents(0), small.coeffs[0]);
        }
        let field = self.ring.field;
        let n = self.nvars();
        let mut acc: HashMap<Vec<u64>, u64> = HashMap::with_capacity(small.len() * big.len());
        let mut buf = vec![0u64; n];
        for (a, ca) in small.terms() {
            for (b, cb) in big.terms() {
                mul_into(a, b, &mut buf)?;
                let c = field.mul(ca, cb);
                acc.entry(buf.clone())
                    .and_modify(|v| *v = field.add(*v, c))
                    .or_insert(c);
            }
        }
        Ok(Polynomial::from_terms(&self.ring, acc.into_iter().collect()))
    }

    /// Square-and-multiply power.
    pub fn pow(&self, mut n: u64) -> Result<Polynomial> {
        if n > 0 && self.max_exponent() > 0 {
            self.max_exponent().checked_mul(n).ok_or(Error::ExponentOverflow)?;
        }
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `f^(p^e)`: exponents are scaled by `p^e`; coefficients are fixed by
    /// Frobenius on F_p.
    pub fn frobenius_power(&self, e: u32) -> Result<Polynomial> {
        let q = checked_prime_power(self.ring.p(), e)?;
        let exps = self
            .exps
            .iter()
            .map(|&x| x.checked_mul(q).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            exps,
            coeffs: self.coeffs.clone(),
        })
    }

    /// `f^(p^e - 1)` via `p^e - 1 = (p - 1)(1 + p + ... + p^(e-1))`.
    pub fn power_q_minus_one(&self, e: u32) -> Result<Polynomial> {
        if e == 0 {
            return Err(Error::InvalidInput("power_q_minus_one needs e >= 1".into()));
        }
        let q = checked_prime_power(self.ring.p(), e)?;
        if self.max_exponent() > 0 {
            self.max_exponent().checked_mul(q).ok_or(Error::ExponentOverflow)?;
        }
        let g = self.pow(self.ring.p() - 1)?;
        let mut acc = g.clone();
        for k in 1..e {
            acc = acc.mul(&g.frobenius_power(k)?)?;
        }
        Ok(acc)
    }

    /// Exact division by a nonzero polynomial; fails if a remainder is left.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.check_ring(divisor)?;
        let lead = divisor
            .leading_exponents()
            .ok_or(Error::DivisionByZero(self.ring.p()))?
            .to_vec();
        let field = self.ring.field;
        let inv = field.inv(divisor.coeffs[0])?;
        let n = self.nvars();
        let mut rem = self.clone();
        let mut q_terms: Vec<(Vec<u64>, u64)> = Vec::new();
        let mut shift = vec![0u64; n];
        while let Some(le) = rem.leading_exponents() {
            if !divides(&lead, le) {
                return Err(Error::InexactDivision);
            }
            for k in 0..n {
                shift[k] = le[k] - lead[k];
            }
            let c = field.mul(rem.coeffs[0], inv);
            q_terms.push((shift.clone(), c));
            rem = rem.add_scaled(&divisor.mul_term(&shift, 1)?, field.neg(c));
        }
        Ok(Polynomial::from_terms(&self.ring, q_terms))
    }

    /// Re-sorts into another ring over the same variables.
    pub fn reorder(&self, target: &Arc<Ring>) -> Result<Polynomial> {
        if !self.ring.same_space(target) {
            return Err(Error::RingMismatch);
        }
        if self.ring.order == target.order {
            return Ok(Polynomial {
                ring: target.clone(),
                exps: self.exps.clone(),
                coeffs: self.coeffs.clone(),
            });
        }
        let terms = self.terms().map(|(e, c)| (e.to_vec(), c)).collect();
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Moves variable `i` of this ring to variable `var_map[i]` of `target`.
    pub fn embed(&self, target: &Arc<Ring>, var_map: &[usize]) -> Result<Polynomial> {
        if target.p() != self.ring.p() || var_map.len() != self.nvars() {
            return Err(Error::RingMismatch);
        }
        let m = target.nvars();
        let terms = self
            .terms()
            .map(|(e, c)| {
                let mut t = vec![0; m];
                for (i, &x) in e.iter().enumerate() {
                    t[var_map[i]] = x;
                }
                (t, c)
            })
            .collect();
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Ring map sending variable `i` to `images[i]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars() {
            return Err(Error::InvalidInput(format!(
                "substitution needs {} images, got {}",
                self.nvars(),
                images.len()
            )));
        }
        let Some(first) = images.first() else {
            return Err(Error::InvalidInput("substitution in a ring without variables".into()));
        };
        let target = first.ring.clone();
        for im in images {
            first.check_ring(im)?;
        }
        let mut cache: HashMap<(usize, u64), Polynomial> = HashMap::new();
        let mut acc = Polynomial::zero(&target);
        for (e, c) in self.terms() {
            let mut t = Polynomial::constant(&target, c as i64);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = match cache.get(&(i, k)) {
                    Some(pw) => pw.clone(),
                    None => {
                        let pw = images[i].pow(k)?;
                        cache.insert((i, k), pw.clone());
                        pw
                    }
                };
                t = t.mul(&pw)?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Terms in descending graded reverse lex order, independent of the
    /// ring's own order.
    pub fn grevlex_terms(&self) -> Vec<(&[u64], u64)> {
        let mut t: Vec<_> = self.terms().collect();
        if self.ring.order != MonomialOrder::Grevlex {
            t.sort_by(|a, b| MonomialOrder::Grevlex.cmp(b.0, a.0));
        }
        t
    }
}

pub(crate) fn checked_prime_power(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).ok_or(Error::ExponentOverflow)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.grevlex_terms().into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars[i], x)),
                }
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c == 1 {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{c}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
