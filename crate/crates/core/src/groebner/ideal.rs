use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::buchberger::{groebner_basis, normal_form_wrt, reduce_basis};
use super::staircase::{dimension_from_leads, staircase_count, Colength, StaircaseCount};
use crate::error::{Error, Result};
use crate::ffpoly::{MonomialOrder, Polynomial, Ring};

const ELIMINATION_VAR: &str = "__elim_t";

/// An ideal of a polynomial ring, given by generators, with a per-order
/// cache of reduced Gröbner bases.
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
    cache: Mutex<BTreeMap<MonomialOrder, Arc<Vec<Polynomial>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Self {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().expect("cache lock").clone()),
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({self})")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl Ideal {
    pub fn new(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Result<Self> {
        let mut kept = Vec::with_capacity(gens.len());
        for g in gens {
            if !g.ring().same_space(ring) {
                return Err(Error::RingMismatch);
            }
            if !g.is_zero() {
                kept.push(g.reorder(ring)?);
            }
        }
        Ok(Self {
            ring: ring.clone(),
            gens: kept,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn from_strs(ring: &Arc<Ring>, gens: &[&str]) -> Result<Self> {
        let polys = gens.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, polys)
    }

    /// Builds an ideal whose generators are already the reduced Gröbner
    /// basis in the ring's order.
    pub(crate) fn from_reduced_basis(ring: &Arc<Ring>, basis: Vec<Polynomial>) -> Self {
        let ideal = Self {
            ring: ring.clone(),
            gens: basis.clone(),
            cache: Mutex::new(BTreeMap::new()),
        };
        ideal
            .cache
            .lock()
            .expect("cache lock")
            .insert(ring.order(), Arc::new(basis));
        ideal
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self::from_reduced_basis(ring, Vec::new())
    }

    pub fn unit(ring: &Arc<Ring>) -> Self {
        Self::from_reduced_basis(ring, vec![Polynomial::one(ring)])
    }

    /// The ideal generated by all variables.
    pub fn maximal(ring: &Arc<Ring>) -> Self {
        let mut gens: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
        gens.sort_by(|a, b| {
            ring.order()
                .cmp(a.leading_exponents().unwrap(), b.leading_exponents().unwrap())
        });
        Self::from_reduced_basis(ring, gens)
    }

    /// `(x_1^q, ..., x_N^q)`.
    pub fn frobenius_power_of_maximal(ring: &Arc<Ring>, q: u64) -> Self {
        let n = ring.nvars();
        let mut gens: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = q;
                Polynomial::monomial(ring, &e, 1)
            })
            .collect();
        gens.sort_by(|a, b| {
            ring.order()
                .cmp(a.leading_exponents().unwrap(), b.leading_exponents().unwrap())
        });
        Self::from_reduced_basis(ring, gens)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Reduced Gröbner basis in the ring's own order.
    pub fn groebner_basis(&self) -> Result<Arc<Vec<Polynomial>>> {
        self.groebner_basis_in(self.ring.order())
    }

    /// Reduced Gröbner basis for `order`; its polynomials live in
    /// `ring.with_order(order)`. Concurrent callers may both compute, but the
    /// cache only ever holds finished bases.
    pub fn groebner_basis_in(&self, order: MonomialOrder) -> Result<Arc<Vec<Polynomial>>> {
        if let Some(gb) = self.cache.lock().expect("cache lock").get(&order) {
            return Ok(gb.clone());
        }
        let target = if order == self.ring.order() {
            self.ring.clone()
        } else {
            self.ring.with_order(order)
        };
        let gens = self
            .gens
            .iter()
            .map(|g| g.reorder(&target))
            .collect::<Result<Vec<_>>>()?;
        let gb = Arc::new(groebner_basis(&gens)?);
        let mut cache = self.cache.lock().expect("cache lock");
        Ok(cache.entry(order).or_insert(gb).clone())
    }

    fn check(&self, f: &Polynomial) -> Result<()> {
        if self.ring.same_space(f.ring()) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Remainder modulo the reduced basis for the ring's order.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.normal_form_in(f, self.ring.order())
    }

    pub fn normal_form_in(&self, f: &Polynomial, order: MonomialOrder) -> Result<Polynomial> {
        self.check(f)?;
        let gb = self.groebner_basis_in(order)?;
        let target = if order == self.ring.order() {
            self.ring.clone()
        } else {
            self.ring.with_order(order)
        };
        normal_form_wrt(&f.reorder(&target)?, &gb)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of ideals via their reduced bases.
    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        if !self.ring.same_space(&other.ring) {
            return Err(Error::RingMismatch);
        }
        let order = self.ring.order();
        Ok(*self.groebner_basis_in(order)? == *other.groebner_basis_in(order)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner_basis()?.iter().any(|g| g.is_constant()))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_monomial(&self) -> Result<bool> {
        Ok(self.groebner_basis()?.iter().all(|g| g.is_monomial()))
    }

    /// Leading exponent vectors of the reduced basis in the ring's order.
    pub fn leading_exponents(&self) -> Result<Vec<Vec<u64>>> {
        Ok(self
            .groebner_basis()?
            .iter()
            .map(|g| g.leading_exponents().unwrap().to_vec())
            .collect())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        if !self.ring.same_space(&other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn add_generator(&self, g: &Polynomial) -> Result<Ideal> {
        self.check(g)?;
        let mut gens = self.gens.clone();
        gens.push(g.clone());
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        if !self.ring.same_space(&other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(&b.reorder(&self.ring)?)?);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// Ordinary power `I^k`, reducing to a Gröbner basis between steps.
    pub fn power(&self, k: u32) -> Result<Ideal> {
        let mut acc = Ideal::unit(&self.ring);
        for _ in 0..k {
            let prod = acc.product(self)?;
            let gb = prod.groebner_basis()?;
            acc = Ideal::from_reduced_basis(&self.ring, gb.to_vec());
        }
        Ok(acc)
    }

    /// `I^[p^e]`, generated by the `p^e`-th powers of the generators. Cached
    /// reduced bases are carried along: Frobenius maps a reduced basis to a
    /// reduced basis.
    pub fn frobenius_power(&self, e: u32) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.frobenius_power(e))
            .collect::<Result<Vec<_>>>()?;
        let cached: Vec<(MonomialOrder, Arc<Vec<Polynomial>>)> = self
            .cache
            .lock()
            .expect("cache lock")
            .iter()
            .map(|(o, b)| (*o, b.clone()))
            .collect();
        let ideal = Ideal::new(&self.ring, gens)?;
        {
            let mut cache = ideal.cache.lock().expect("cache lock");
            for (o, basis) in cached {
                let powered = basis.iter().map(|g| g.frobenius_power(e)).collect::<Result<Vec<_>>>()?;
                cache.insert(o, Arc::new(powered));
            }
        }
        Ok(ideal)
    }

    /// `I ∩ J` via the Gröbner basis of `t·I + (1 − t)·J` in an elimination
    /// order on `(t, x_1, ..., x_N)`.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        if !self.ring.same_space(&other.ring) {
            return Err(Error::RingMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let basis = self.eliminate(&self.gb_generators()?, &other.gb_generators()?)?;
        self.ideal_from_grevlex_basis(basis)
    }

    fn gb_generators(&self) -> Result<Vec<Polynomial>> {
        Ok(self.groebner_basis()?.to_vec())
    }

    fn eliminate(&self, a: &[Polynomial], b: &[Polynomial]) -> Result<Vec<Polynomial>> {
        let n = self.ring.nvars();
        let ext = self
            .ring
            .extended(&[ELIMINATION_VAR], MonomialOrder::BlockElimination(1))?;
        let map: Vec<usize> = (1..=n).collect();
        let t = Polynomial::var(&ext, 0);
        let one_minus_t = Polynomial::one(&ext).sub(&t)?;
        let mut gens = Vec::with_capacity(a.len() + b.len());
        for g in a {
            gens.push(g.embed(&ext, &map)?.mul(&t)?);
        }
        for g in b {
            gens.push(g.embed(&ext, &map)?.mul(&one_minus_t)?);
        }
        let gb = groebner_basis(&gens)?;
        let base = self.ring.with_order(MonomialOrder::Grevlex);
        let mut out = Vec::new();
        for g in gb.iter().filter(|g| g.leading_exponents().unwrap()[0] == 0) {
            let terms = g.terms().map(|(e, c)| (e[1..].to_vec(), c)).collect();
            out.push(Polynomial::from_terms(&base, terms));
        }
        Ok(out)
    }

    /// Wraps a reduced grevlex basis, re-deriving the basis when the ring
    /// uses another order.
    fn ideal_from_grevlex_basis(&self, basis: Vec<Polynomial>) -> Result<Ideal> {
        if self.ring.order() == MonomialOrder::Grevlex {
            let ring = self.ring.clone();
            let basis = basis
                .into_iter()
                .map(|g| g.reorder(&ring))
                .collect::<Result<Vec<_>>>()?;
            Ok(Ideal::from_reduced_basis(&ring, basis))
        } else {
            let grevlex = self.ring.with_order(MonomialOrder::Grevlex);
            let ideal = Ideal::from_reduced_basis(&grevlex, basis);
            let gens = ideal
                .gens
                .iter()
                .map(|g| g.reorder(&self.ring))
                .collect::<Result<Vec<_>>>()?;
            let out = Ideal::new(&self.ring, gens)?;
            out.cache
                .lock()
                .expect("cache lock")
                .insert(MonomialOrder::Grevlex, ideal.groebner_basis()?);
            Ok(out)
        }
    }

    /// `(I : g)`. Monomial ideals divided by monomials are handled directly;
    /// otherwise `(I : g) = (1/g)·(I ∩ (g))` with the intersection by
    /// elimination.
    pub fn colon_poly(&self, g: &Polynomial) -> Result<Ideal> {
        self.check(g)?;
        if g.is_zero() {
            return Err(Error::InvalidInput("colon by the zero polynomial".into()));
        }
        if g.is_constant() {
            return Ok(self.clone());
        }
        if self.contains(g)? {
            return Ok(Ideal::unit(&self.ring));
        }
        let g = g.reorder(&self.ring)?;
        if g.is_monomial() && self.is_monomial()? {
            let m = g.exponents(0);
            let gens = self
                .groebner_basis()?
                .iter()
                .map(|h| {
                    let e: Vec<u64> = h
                        .exponents(0)
                        .iter()
                        .zip(m)
                        .map(|(a, b)| a.saturating_sub(*b))
                        .collect();
                    Polynomial::monomial(&self.ring, &e, 1)
                })
                .collect();
            return Ok(Ideal::from_reduced_basis(&self.ring, reduce_basis(&self.ring, gens)?));
        }
        let grevlex = self.ring.with_order(MonomialOrder::Grevlex);
        let g_grevlex = g.reorder(&grevlex)?;
        let inter = self.eliminate(&self.gb_generators()?, std::slice::from_ref(&g))?;
        let quotients = inter
            .iter()
            .map(|h| h.div_exact(&g_grevlex))
            .collect::<Result<Vec<_>>>()?;
        self.ideal_from_grevlex_basis(reduce_basis(&grevlex, quotients)?)
    }

    /// `(I : J) = ∩_j (I : g_j)` over the generators of `J`.
    pub fn colon_ideal(&self, other: &Ideal) -> Result<Ideal> {
        if other.is_zero() {
            return Err(Error::InvalidInput("colon by the zero ideal".into()));
        }
        let mut acc: Option<Ideal> = None;
        for g in other.generators() {
            let c = self.colon_poly(g)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersection(&c)?,
            });
        }
        Ok(acc.expect("nonzero ideal has a generator"))
    }

    /// `(I : g^∞)`, iterating colons until the ideal stabilises.
    pub fn saturation(&self, g: &Polynomial) -> Result<Ideal> {
        let cap = self.ring.limits().max_saturation_steps;
        let mut current = self.clone();
        for _ in 0..cap {
            let next = current.colon_poly(g)?;
            if next.equals(&current)? {
                return Ok(next);
            }
            current = next;
        }
        Err(Error::BudgetExhausted(format!(
            "saturation did not stabilise within {cap} steps"
        )))
    }

    /// Number of standard monomials of the leading-term ideal (the colength
    /// when finite).
    pub fn artinian_length(&self) -> Result<StaircaseCount> {
        let leads = self.leading_exponents()?;
        staircase_count(&leads, self.ring.nvars(), self.ring.limits().max_box_volume)
    }

    /// Finite colength, or [`Error::NotArtinian`].
    pub fn colength(&self) -> Result<u128> {
        match self.artinian_length()?.colength {
            Colength::Finite(n) => Ok(n),
            Colength::Infinite => Err(Error::NotArtinian),
        }
    }

    pub fn krull_dimension(&self) -> Result<usize> {
        dimension_from_leads(&self.leading_exponents()?, self.ring.nvars())
    }
}
