use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffpoly::{divides, is_coprime, mul_into, DivMask, OrderKey, Polynomial, Ring};

/// Full reduction against a list of monic polynomials.
pub(crate) struct Reducer<'a> {
    basis: Vec<&'a Polynomial>,
    masks: Vec<u64>,
    dm: DivMask,
}

impl<'a> Reducer<'a> {
    pub(crate) fn new(ring: &Ring, basis: impl IntoIterator<Item = &'a Polynomial>) -> Self {
        let dm = DivMask::new(ring.nvars());
        let basis: Vec<&Polynomial> = basis.into_iter().filter(|g| !g.is_zero()).collect();
        debug_assert!(basis.iter().all(|g| g.leading_coefficient() == Some(1)));
        let masks = basis.iter().map(|g| dm.mask(g.leading_exponents().unwrap())).collect();
        Self { basis, masks, dm }
    }

    fn find(&self, e: &[u64]) -> Option<&'a Polynomial> {
        let m = self.dm.mask(e);
        self.basis
            .iter()
            .zip(&self.masks)
            .find(|(g, gm)| *gm & !m == 0 && divides(g.leading_exponents().unwrap(), e))
            .map(|(g, _)| *g)
    }

    pub(crate) fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        if self.basis.is_empty() || f.is_zero() {
            return Ok(f.clone());
        }
        let ring = f.ring();
        let order = ring.order();
        let field = ring.field();
        let n = ring.nvars();
        let mut work: BTreeMap<OrderKey, u64> = f.terms().map(|(e, c)| (order.key(e), c)).collect();
        let mut out_exps = Vec::new();
        let mut out_coeffs = Vec::new();
        let mut e = vec![0u64; n];
        let mut shift = vec![0u64; n];
        let mut shifted = vec![0u64; n];
        while let Some((key, c)) = work.pop_last() {
            order.decode(&key, &mut e);
            let Some(g) = self.find(&e) else {
                out_exps.extend_from_slice(&e);
                out_coeffs.push(c);
                continue;
            };
            let lead = g.leading_exponents().unwrap();
            for k in 0..n {
                shift[k] = e[k] - lead[k];
            }
            let neg_c = field.neg(c);
            for (ge, gc) in g.terms().skip(1) {
                mul_into(ge, &shift, &mut shifted)?;
                let delta = field.mul(gc, neg_c);
                match work.entry(order.key(&shifted)) {
                    Entry::Occupied(mut o) => {
                        let v = field.add(*o.get(), delta);
                        if v == 0 {
                            o.remove();
                        } else {
                            *o.get_mut() = v;
                        }
                    }
                    Entry::Vacant(v) => {
                        v.insert(delta);
                    }
                }
            }
        }
        Ok(Polynomial::from_sorted_unchecked(ring, out_exps, out_coeffs))
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Vec<u64>,
    degree: u128,
}

fn lcm(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn degree(e: &[u64]) -> u128 {
    e.iter().map(|&x| x as u128).sum()
}

struct Buchberger {
    ring: Arc<Ring>,
    polys: Vec<Polynomial>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Buchberger {
    fn lead(&self, i: usize) -> &[u64] {
        self.polys[i].leading_exponents().unwrap()
    }

    fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        let active = self.polys.iter().zip(&self.active).filter(|(_, a)| **a).map(|(g, _)| g);
        Reducer::new(&self.ring, active).reduce(f)
    }

    /// Gebauer–Möller installation of a new basis element (product and
    /// chain criteria).
    fn insert(&mut self, h: Polynomial) {
        let hi = self.polys.len();
        let hl = h.leading_exponents().unwrap().to_vec();
        self.polys.push(h);
        self.active.push(false);

        let mut candidates: Vec<(usize, Vec<u64>)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| (g, lcm(&hl, self.lead(g))))
            .collect();
        let mut kept: Vec<(usize, Vec<u64>)> = Vec::new();
        while !candidates.is_empty() {
            let (g, l) = candidates.remove(0);
            let coprime = is_coprime(&hl, self.lead(g));
            let dominated = candidates.iter().chain(kept.iter()).any(|(_, l2)| divides(l2, &l));
            if coprime || !dominated {
                kept.push((g, l));
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|(g, _)| !is_coprime(&hl, self.lead(*g)))
            .map(|(g, l)| Pair {
                i: g,
                j: hi,
                degree: degree(&l),
                lcm: l,
            })
            .collect();

        let leads: Vec<Vec<u64>> = (0..hi).map(|k| self.lead(k).to_vec()).collect();
        self.pairs.retain(|pr| {
            !(divides(&hl, &pr.lcm) && lcm(&leads[pr.i], &hl) != pr.lcm && lcm(&leads[pr.j], &hl) != pr.lcm)
        });
        self.pairs.extend(new_pairs);

        for (g, lead) in leads.iter().enumerate() {
            if self.active[g] && divides(&hl, lead) {
                self.active[g] = false;
            }
        }
        self.active[hi] = true;
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let idx = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.degree.cmp(&b.degree).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)))
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(idx))
    }

    fn s_polynomial(&self, pr: &Pair) -> Result<Polynomial> {
        let f = &self.polys[pr.i];
        let g = &self.polys[pr.j];
        let sf: Vec<u64> = pr.lcm.iter().zip(self.lead(pr.i)).map(|(l, a)| l - a).collect();
        let sg: Vec<u64> = pr.lcm.iter().zip(self.lead(pr.j)).map(|(l, a)| l - a).collect();
        let a = f.mul_term(&sf, 1)?;
        let b = g.mul_term(&sg, 1)?;
        a.sub(&b)
    }
}

fn unit_basis(ring: &Arc<Ring>) -> Vec<Polynomial> {
    vec![Polynomial::one(ring)]
}

/// Inter-reduces a Gröbner basis into the reduced one: minimal leading
/// terms, monic, tails reduced, sorted by ascending leading monomial.
pub(crate) fn reduce_basis(ring: &Arc<Ring>, basis: Vec<Polynomial>) -> Result<Vec<Polynomial>> {
    let order = ring.order();
    let mut gens: Vec<Polynomial> = basis.into_iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    if gens.iter().any(|g| g.is_constant()) {
        return Ok(unit_basis(ring));
    }
    gens.sort_by(|a, b| order.cmp(a.leading_exponents().unwrap(), b.leading_exponents().unwrap()));
    gens.dedup_by(|a, b| a.leading_exponents() == b.leading_exponents());
    let minimal: Vec<Polynomial> = gens
        .iter()
        .enumerate()
        .filter(|(i, g)| {
            let l = g.leading_exponents().unwrap();
            !gens
                .iter()
                .enumerate()
                .any(|(j, h)| j != *i && divides(h.leading_exponents().unwrap(), l))
        })
        .map(|(_, g)| g.clone())
        .collect();
    let mut out = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let others = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h);
        out.push(Reducer::new(ring, others).reduce(g)?);
    }
    Ok(out)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, in the order of
/// their common ring. Output is deterministic: inputs are sorted, critical
/// pairs are taken by smallest lcm degree with ties broken by generator
/// index.
pub fn groebner_basis(gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let Some(first) = gens.iter().find(|g| !g.is_zero()) else {
        return Ok(Vec::new());
    };
    let ring = first.ring().clone();
    for g in gens {
        if **g.ring() != *ring {
            return Err(Error::RingMismatch);
        }
    }
    let order = ring.order();
    let mut inputs: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    if inputs.iter().any(|g| g.is_constant()) {
        return Ok(unit_basis(&ring));
    }
    inputs.sort_by(|a, b| {
        order
            .cmp(a.leading_exponents().unwrap(), b.leading_exponents().unwrap())
            .then_with(|| a.len().cmp(&b.len()))
            .then_with(|| a.to_string().cmp(&b.to_string()))
    });
    inputs.dedup();

    let max_pairs = ring.limits().max_pairs;
    let mut state = Buchberger {
        ring: ring.clone(),
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for f in inputs {
        let h = state.reduce(&f)?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit_basis(&ring));
        }
        state.insert(h.monic());
    }
    let mut processed = 0u64;
    while let Some(pr) = state.next_pair() {
        processed += 1;
        if processed > max_pairs {
            return Err(Error::BudgetExhausted(format!(
                "Buchberger exceeded {max_pairs} critical pairs"
            )));
        }
        let s = state.s_polynomial(&pr)?;
        let h = state.reduce(&s)?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit_basis(&ring));
        }
        state.insert(h.monic());
    }
    let basis: Vec<Polynomial> = state
        .polys
        .into_iter()
        .zip(state.active)
        .filter(|(_, a)| *a)
        .map(|(g, _)| g)
        .collect();
    reduce_basis(&ring, basis)
}

/// Remainder of `f` modulo a reduced Gröbner basis.
pub fn normal_form_wrt(f: &Polynomial, basis: &[Polynomial]) -> Result<Polynomial> {
    for g in basis {
        if **g.ring() != **f.ring() {
            return Err(Error::RingMismatch);
        }
    }
    Reducer::new(f.ring(), basis.iter()).reduce(f)
}
