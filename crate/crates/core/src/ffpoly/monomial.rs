use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector of fixed arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u64>);

impl Monomial {
    pub fn new(exponents: Vec<u64>) -> Self {
        Self(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Total degree, or an overflow error when the sum leaves 64 bits.
    pub fn degree(&self) -> Result<u64> {
        total_degree(&self.0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        divides(&self.0, &other.0)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut out = vec![0; self.0.len()];
        mul_into(&self.0, &other.0, &mut out)?;
        Ok(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub(crate) fn total_degree(e: &[u64]) -> Result<u64> {
    e.iter()
        .try_fold(0u64, |acc, &x| acc.checked_add(x))
        .ok_or(Error::ExponentOverflow)
}

#[inline]
pub(crate) fn divides(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

#[inline]
pub(crate) fn mul_into(a: &[u64], b: &[u64], out: &mut [u64]) -> Result<()> {
    for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
        *o = x.checked_add(*y).ok_or(Error::ExponentOverflow)?;
    }
    Ok(())
}

#[inline]
pub(crate) fn is_coprime(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// A monomial order. `BlockElimination(k)` compares the first `k` variables
/// by graded reverse lex and breaks ties with graded reverse lex on the rest,
/// so it eliminates the first `k` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    BlockElimination(usize),
}

pub(crate) type OrderKey = SmallVec<[u64; 8]>;

fn grevlex_cmp(a: &[u64], b: &[u64]) -> Ordering {
    let da: u128 = a.iter().map(|&x| x as u128).sum();
    let db: u128 = b.iter().map(|&x| x as u128).sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

fn push_grevlex_key(e: &[u64], key: &mut OrderKey) {
    key.push(e.iter().fold(0u64, |acc, &x| acc.saturating_add(x)));
    key.extend(e.iter().rev().map(|&x| !x));
}

fn read_grevlex_key(key: &[u64], out: &mut [u64]) {
    let n = out.len();
    for (i, k) in key[1..].iter().enumerate() {
        out[n - 1 - i] = !k;
    }
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u64], b: &[u64]) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => grevlex_cmp(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::BlockElimination(k) => {
                let k = k.min(a.len());
                grevlex_cmp(&a[..k], &b[..k]).then_with(|| grevlex_cmp(&a[k..], &b[k..]))
            }
        }
    }

    /// Encodes an exponent vector as a key whose lexicographic order agrees
    /// with this monomial order. Exact for exponents whose block sums fit in
    /// 64 bits.
    pub(crate) fn key(&self, e: &[u64]) -> OrderKey {
        let mut key = OrderKey::new();
        match *self {
            MonomialOrder::Grevlex => push_grevlex_key(e, &mut key),
            MonomialOrder::Lex => key.extend_from_slice(e),
            MonomialOrder::BlockElimination(k) => {
                let k = k.min(e.len());
                push_grevlex_key(&e[..k], &mut key);
                push_grevlex_key(&e[k..], &mut key);
            }
        }
        key
    }

    pub(crate) fn decode(&self, key: &[u64], out: &mut [u64]) {
        match *self {
            MonomialOrder::Grevlex => read_grevlex_key(key, out),
            MonomialOrder::Lex => out.copy_from_slice(key),
            MonomialOrder::BlockElimination(k) => {
                let k = k.min(out.len());
                let (head, tail) = out.split_at_mut(k);
                read_grevlex_key(&key[..k + 1], head);
                read_grevlex_key(&key[k + 1..], tail);
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Grevlex => "grevlex".into(),
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::BlockElimination(k) => format!("elim({k})"),
        }
    }
}

/// Bit signature used to reject non-divisors quickly: if `a | b` then
/// `mask(a) & !mask(b) == 0`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DivMask {
    bits_per_var: u32,
}

impl DivMask {
    pub(crate) fn new(nvars: usize) -> Self {
        let bits = 64usize.checked_div(nvars).map_or(1, |b| b.clamp(1, 12));
        Self {
            bits_per_var: bits as u32,
        }
    }

    pub(crate) fn mask(&self, e: &[u64]) -> u64 {
        let mut m = 0u64;
        let mut pos = 0u32;
        for &x in e {
            for b in 0..self.bits_per_var {
                if pos >= 64 {
                    return m;
                }
                // thresholds 1, 2, 4, 8, ...
                if x >= (1u64 << b) {
                    m |= 1 << pos;
                }
                pos += 1;
            }
        }
        m
    }
}
