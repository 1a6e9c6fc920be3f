use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// The prime field F_p. Moduli are restricted to `p < 2^32` so that products
/// of two residues fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1u64 << 32)).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn element(&self, value: i64) -> PrimeFieldElement {
        PrimeFieldElement {
            value: self.from_i64(value),
            p: self.p,
        }
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero(self.p));
        }
        Ok(self.pow(a, self.p - 2))
    }
}

/// A residue class in F_p together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldElement {
    value: u64,
    p: u64,
}

impl PrimeFieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self {
            value: self.field().inv(self.value)?,
            p: self.p,
        })
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self {
            value: self.field().pow(self.value, exp),
            p: self.p,
        }
    }
}

impl Add for PrimeFieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Self {
            value: self.field().add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for PrimeFieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Self {
            value: self.field().sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for PrimeFieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Self {
            value: self.field().mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Neg for PrimeFieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: self.field().neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_out_of_range() {
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeField::new(1), Err(Error::ModulusOutOfRange(1)));
        assert!(PrimeField::new(1 << 32).is_err());
        assert!(PrimeField::new(4_294_967_291).is_ok());
    }

    #[test]
    fn field_axioms_small_primes() {
        for p in [2u64, 3, 5, 7, 13] {
            let k = PrimeField::new(p).unwrap();
            for a in 0..p as i64 {
                let x = k.element(a);
                assert_eq!(x + (-x), k.element(0));
                if a != 0 {
                    assert_eq!(x * x.inv().unwrap(), k.element(1));
                }
                for b in 0..p as i64 {
                    let y = k.element(b);
                    assert_eq!(x * y, y * x);
                    assert_eq!((x - y) + y, x);
                }
            }
            assert_eq!(k.element(0).inv(), Err(Error::DivisionByZero(p)));
        }
    }

    #[test]
    fn negative_literals_reduce() {
        let k = PrimeField::new(5).unwrap();
        assert_eq!(k.element(-1).value(), 4);
        assert_eq!(k.element(-12).value(), 3);
    }
}
