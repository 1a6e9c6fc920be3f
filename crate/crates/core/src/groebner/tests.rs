use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::buchberger::Reducer;
use super::*;
use crate::error::Error;
use crate::ffpoly::{MonomialOrder, Polynomial, Ring};

fn ring3(p: u64, order: MonomialOrder) -> Arc<Ring> {
    Ring::new(p, &["x", "y", "z"], order).unwrap()
}

fn ideal(ring: &Arc<Ring>, gens: &[&str]) -> Ideal {
    Ideal::from_strs(ring, gens).unwrap()
}

fn polys(ring: &Arc<Ring>, gens: &[&str]) -> Vec<Polynomial> {
    gens.iter().map(|s| ring.parse(s).unwrap()).collect()
}

/// Checks the defining properties of a reduced basis directly.
fn assert_reduced(basis: &[Polynomial]) {
    for (i, g) in basis.iter().enumerate() {
        assert_eq!(g.leading_coefficient(), Some(1));
        for (j, h) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            for (e, _) in g.terms() {
                assert!(
                    !crate::ffpoly::divides(h.leading_exponents().unwrap(), e),
                    "term of {g} divisible by lead of {h}"
                );
            }
        }
    }
    if let Some(first) = basis.first() {
        let ring = first.ring().clone();
        let reducer = Reducer::new(&ring, basis.iter());
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let (a, b) = (&basis[i], &basis[j]);
                let l = crate::ffpoly::Monomial::new(a.leading_exponents().unwrap().to_vec())
                    .lcm(&crate::ffpoly::Monomial::new(b.leading_exponents().unwrap().to_vec()));
                let ma: Vec<u64> = l
                    .exponents()
                    .iter()
                    .zip(a.leading_exponents().unwrap())
                    .map(|(x, y)| x - y)
                    .collect();
                let mb: Vec<u64> = l
                    .exponents()
                    .iter()
                    .zip(b.leading_exponents().unwrap())
                    .map(|(x, y)| x - y)
                    .collect();
                let s = a.mul_term(&ma, 1).unwrap().sub(&b.mul_term(&mb, 1).unwrap()).unwrap();
                assert!(reducer.reduce(&s).unwrap().is_zero());
            }
        }
    }
}

fn random_poly(ring: &Arc<Ring>, rng: &mut ChaCha8Rng, terms: usize, deg: u64) -> Polynomial {
    let n = ring.nvars();
    let t = (0..terms)
        .map(|_| {
            let e: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=deg)).collect();
            (e, rng.gen_range(1..ring.p()))
        })
        .collect();
    Polynomial::from_terms(ring, t)
}

/// Artinian ideal: pure powers plus a few random polynomials.
fn random_artinian(ring: &Arc<Ring>, rng: &mut ChaCha8Rng) -> Ideal {
    let n = ring.nvars();
    let mut gens = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = rng.gen_range(2..=5);
        gens.push(Polynomial::monomial(ring, &e, 1));
    }
    for _ in 0..rng.gen_range(0..3) {
        gens.push(random_poly(ring, rng, 3, 2));
    }
    Ideal::new(ring, gens).unwrap()
}

#[test]
fn monomial_ideal_is_its_own_basis() {
    let r = ring3(7, MonomialOrder::Grevlex);
    let i = ideal(&r, &["x^2", "y^3"]);
    assert_eq!(*i.groebner_basis().unwrap(), polys(&r, &["x^2", "y^3"]));
}

#[test]
fn twisted_cubic_lex() {
    let r = ring3(101, MonomialOrder::Lex);
    let i = ideal(&r, &["y - x^2", "z - x^3"]);
    let gb = i.groebner_basis().unwrap();
    let mut expected = polys(&r, &["x^2 - y", "x*y - z", "x*z - y^2", "y^3 - z^2"]);
    expected.sort_by(|a, b| {
        r.order()
            .cmp(a.leading_exponents().unwrap(), b.leading_exponents().unwrap())
    });
    assert_eq!(*gb, expected);
    assert_reduced(&gb);
}

#[test]
fn redundant_generator_dropped() {
    let r = ring3(5, MonomialOrder::Grevlex);
    let a = ideal(&r, &["x*y - z^2", "(x*y - z^2)*(x + y^3)"]);
    let b = ideal(&r, &["x*y - z^2"]);
    assert_eq!(*a.groebner_basis().unwrap(), *b.groebner_basis().unwrap());
}

#[test]
fn normal_form_basics() {
    let r = ring3(5, MonomialOrder::Grevlex);
    let i = ideal(&r, &["x*y - z^2", "x^3 + y"]);
    for g in i.generators() {
        assert!(i.normal_form(g).unwrap().is_zero());
    }
    assert_eq!(i.normal_form(&Polynomial::one(&r)).unwrap(), Polynomial::one(&r));
    assert!(!i.is_unit().unwrap());
}

#[test]
fn sum_and_product() {
    let r = ring3(5, MonomialOrder::Grevlex);
    let x = ideal(&r, &["x"]);
    let y = ideal(&r, &["y"]);
    assert!(x.sum(&y).unwrap().equals(&ideal(&r, &["x", "y"])).unwrap());
    assert!(x.product(&y).unwrap().equals(&ideal(&r, &["x*y"])).unwrap());
    let i = ideal(&r, &["x^2 + z", "y*z"]);
    assert!(i.product(&Ideal::unit(&r)).unwrap().equals(&i).unwrap());
    assert!(ideal(&r, &["x", "y"])
        .power(2)
        .unwrap()
        .equals(&ideal(&r, &["x^2", "x*y", "y^2"]))
        .unwrap());
}

#[test]
fn frobenius_powers() {
    let r = ring3(5, MonomialOrder::Grevlex);
    let m = Ideal::maximal(&r);
    assert!(m
        .frobenius_power(1)
        .unwrap()
        .equals(&ideal(&r, &["x^5", "y^5", "z^5"]))
        .unwrap());
    let i = ideal(&r, &["x*y - z^2", "x^2"]);
    assert!(i.frobenius_power(0).unwrap().equals(&i).unwrap());
    let s = ideal(&r, &["x + y"]).frobenius_power(1).unwrap();
    assert_eq!(s.generators(), &polys(&r, &["x^5 + y^5"])[..]);
}

#[test]
fn frobenius_seeded_basis_is_reduced() {
    let r = ring3(3, MonomialOrder::Grevlex);
    let i = ideal(&r, &["x*y - z^2", "x^3 + y^2", "z^4"]);
    i.groebner_basis().unwrap();
    let f = i.frobenius_power(1).unwrap();
    let seeded = f.groebner_basis().unwrap();
    let fresh = groebner_basis(f.generators()).unwrap();
    assert_eq!(*seeded, fresh);
}

#[test]
fn colon_examples() {
    let r = ring3(5, MonomialOrder::Grevlex);
    let i = ideal(&r, &["x^2", "y^2"]);
    let x = r.parse("x").unwrap();
    let c = i.colon_poly(&x).unwrap();
    assert!(c.equals(&ideal(&r, &["x", "y^2"])).unwrap());
    let r2 = Ring::new(5, &["x", "y"], MonomialOrder::Grevlex).unwrap();
    let c2 = ideal(&r2, &["x^2", "y^2"]).colon_poly(&r2.parse("x").unwrap()).unwrap();
    assert_eq!(c2.colength().unwrap(), 2);
    assert!(i.colon_poly(&Polynomial::one(&r)).unwrap().equals(&i).unwrap());
    assert!(i.colon_poly(&r.parse("x^3*y").unwrap()).unwrap().is_unit().unwrap());
    assert!(matches!(
        i.colon_poly(&Polynomial::zero(&r)),
        Err(Error::InvalidInput(_))
    ));

    let j = ideal(&r, &["x^2*y", "x*y^2"]);
    let m = ideal(&r, &["x", "y"]);
    assert!(j.colon_ideal(&m).unwrap().equals(&ideal(&r, &["x*y"])).unwrap());
    assert!(j.colon_ideal(&Ideal::unit(&r)).unwrap().equals(&j).unwrap());
}

#[test]
fn colon_nonmonomial_matches_elimination_free_check() {
    let r = ring3(7, MonomialOrder::Grevlex);
    let i = ideal(&r, &["x*y - z^2", "x^3", "y^3", "z^4"]);
    let g = r.parse("x + y").unwrap();
    let c = i.colon_poly(&g).unwrap();
    for h in c.groebner_basis().unwrap().iter() {
        assert!(i.contains(&h.mul(&g).unwrap()).unwrap());
    }
    let li = i.colength().unwrap();
    let lc = c.colength().unwrap();
    let ls = i.add_generator(&g).unwrap().colength().unwrap();
    assert_eq!(lc, li - ls);
}

#[test]
fn saturation_and_intersection() {
    let r = ring3(5, MonomialOrder::Grevlex);
    let x = r.parse("x").unwrap();
    assert!(ideal(&r, &["x^2", "x*y"]).saturation(&x).unwrap().is_unit().unwrap());
    let p = ideal(&r, &["x*y - z^2", "y^3 - x*z^2"]);
    let prime = ideal(&r, &["x - y", "z"]);
    assert!(prime
        .saturation(&r.parse("x + 1").unwrap())
        .unwrap()
        .equals(&prime)
        .unwrap());
    assert!(ideal(&r, &["x"])
        .intersection(&ideal(&r, &["y"]))
        .unwrap()
        .equals(&ideal(&r, &["x*y"]))
        .unwrap());
    let both = p.intersection(&prime).unwrap();
    assert!(p.contains_ideal(&both).unwrap() && prime.contains_ideal(&both).unwrap());
}

#[test]
fn saturation_cap_is_reported() {
    let base = ring3(5, MonomialOrder::Grevlex);
    let mut limits = *base.limits();
    limits.max_saturation_steps = 1;
    let r = base.with_limits(limits);
    let i = ideal(&r, &["x^3", "x*y"]);
    assert!(matches!(
        i.saturation(&r.parse("x").unwrap()),
        Err(Error::BudgetExhausted(_))
    ));
}

#[test]
fn pair_budget_is_reported() {
    let base = ring3(5, MonomialOrder::Grevlex);
    let mut limits = *base.limits();
    limits.max_pairs = 1;
    let r = base.with_limits(limits);
    let i = ideal(&r, &["x*y - z^2", "x^3 + y", "y^2*z + x"]);
    assert!(matches!(i.groebner_basis(), Err(Error::BudgetExhausted(_))));
}

#[test]
fn colengths() {
    let r2 = Ring::new(5, &["x", "y"], MonomialOrder::Grevlex).unwrap();
    assert_eq!(ideal(&r2, &["x^3", "y^2"]).colength().unwrap(), 6);
    let r = ring3(5, MonomialOrder::Grevlex);
    assert_eq!(Ideal::maximal(&r).frobenius_power(1).unwrap().colength().unwrap(), 125);
    assert!(matches!(ideal(&r, &["x^2", "y^2"]).colength(), Err(Error::NotArtinian)));
    assert_eq!(
        ideal(&r, &["x^2", "y^2"]).artinian_length().unwrap().colength,
        Colength::Infinite
    );
}

#[test]
fn dimensions() {
    let r = ring3(5, MonomialOrder::Grevlex);
    assert_eq!(ideal(&r, &["x*y - z^2"]).krull_dimension().unwrap(), 2);
    assert_eq!(Ideal::zero(&r).krull_dimension().unwrap(), 3);
    assert_eq!(Ideal::maximal(&r).krull_dimension().unwrap(), 0);
    assert_eq!(ideal(&r, &["y - x^2", "z - x^3"]).krull_dimension().unwrap(), 1);
    assert!(matches!(Ideal::unit(&r).krull_dimension(), Err(Error::UnitIdeal)));
}

#[test]
fn membership_is_order_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let g = ring3(7, MonomialOrder::Grevlex);
        let l = g.with_order(MonomialOrder::Lex);
        let i = random_artinian(&g, &mut rng);
        let il = Ideal::new(&l, i.generators().to_vec()).unwrap();
        for _ in 0..5 {
            let f = random_poly(&g, &mut rng, 4, 3);
            let h = i.generators()[0].mul(&f).unwrap();
            assert!(i.contains(&h).unwrap() && il.contains(&h).unwrap());
            assert_eq!(i.contains(&f).unwrap(), il.contains(&f).unwrap());
        }
        assert_eq!(i.colength().unwrap(), il.colength().unwrap());
        assert_reduced(&il.groebner_basis().unwrap());
    }
}

#[test]
fn results_are_deterministic() {
    let r = ring3(5, MonomialOrder::Grevlex);
    let a = ideal(&r, &["x*y - z^2", "x^3 + y^2", "z^3 - x"]);
    let b = ideal(&r, &["z^3 - x", "x^3 + y^2", "x*y - z^2"]);
    assert_eq!(*a.groebner_basis().unwrap(), *b.groebner_basis().unwrap());
    let g = r.parse("x + z").unwrap();
    let ca = a.colon_poly(&g).unwrap();
    let cb = b.colon_poly(&g).unwrap();
    assert_eq!(*ca.groebner_basis().unwrap(), *cb.groebner_basis().unwrap());
}

/// `ℓ(S/(I:g)) = ℓ(S/I) − ℓ(S/(I+g))` and `ℓ(S/(I:g)) ≤ ℓ(S/I)` on random
/// Artinian ideals.
#[test]
fn colon_length_identity_on_random_ideals() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..120 {
        let p = [2u64, 3, 5, 7][k % 4];
        let r = ring3(p, MonomialOrder::Grevlex);
        let i = random_artinian(&r, &mut rng);
        let g = random_poly(&r, &mut rng, 2, 2);
        if g.is_zero() {
            continue;
        }
        let li = i.colength().unwrap();
        let lc = i.colon_poly(&g).unwrap().colength().unwrap();
        let ls = i.add_generator(&g).unwrap().colength().unwrap();
        assert_eq!(lc + ls, li, "I = {i}, g = {g}");
        assert_reduced(&i.colon_poly(&g).unwrap().groebner_basis().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn normal_form_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring3(5, MonomialOrder::Grevlex);
        let i = random_artinian(&r, &mut rng);
        let f = random_poly(&r, &mut rng, 5, 6);
        let nf = i.normal_form(&f).unwrap();
        prop_assert_eq!(i.normal_form(&nf).unwrap(), nf.clone());
        prop_assert!(i.contains(&f.sub(&nf).unwrap()).unwrap());
    }

    #[test]
    fn colon_contains_ideal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring3(3, MonomialOrder::Grevlex);
        let i = random_artinian(&r, &mut rng);
        let g = random_poly(&r, &mut rng, 2, 2);
        prop_assume!(!g.is_zero());
        let c = i.colon_poly(&g).unwrap();
        prop_assert!(c.contains_ideal(&i).unwrap());
        for h in c.generators() {
            prop_assert!(i.contains(&h.mul(&g).unwrap()).unwrap());
        }
    }

    #[test]
    fn intersection_is_contained_in_both(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring3(5, MonomialOrder::Grevlex);
        let a = random_artinian(&r, &mut rng);
        let b = random_artinian(&r, &mut rng);
        let c = a.intersection(&b).unwrap();
        prop_assert!(a.contains_ideal(&c).unwrap() && b.contains_ideal(&c).unwrap());
        prop_assert!(c.contains_ideal(&a.product(&b).unwrap()).unwrap());
        // ℓ(S/(A∩B)) + ℓ(S/(A+B)) = ℓ(S/A) + ℓ(S/B)
        prop_assert_eq!(
            c.colength().unwrap() + a.sum(&b).unwrap().colength().unwrap(),
            a.colength().unwrap() + b.colength().unwrap()
        );
    }
}
