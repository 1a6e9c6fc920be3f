use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::presentation::ratio;
use super::*;
use crate::error::Error;
use crate::ffpoly::{MonomialOrder, Polynomial, Ring};
use crate::groebner::Ideal;

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn a_n(p: u64, n: u32) -> Arc<RingPresentation> {
    RingPresentation::from_strs(p, &["x", "y", "z"], Some(&format!("x*y - z^{}", n + 1))).unwrap()
}

fn cartier_root(pres: &RingPresentation, x: &str, m: i64) -> QDivisor {
    QDivisor::single(pres.parse(x).unwrap(), frac(1, m)).unwrap()
}

fn a_n_base(pres: &RingPresentation) -> BasePresentation {
    BasePresentation::from_strs(pres.ring(), &["y"], &["0", "y", "0"], &["y"]).unwrap()
}

#[test]
fn rounding_modes() {
    assert_eq!(Rounding::CeilQMinusOne.exponent(&frac(3, 4), 5).unwrap(), 3);
    assert_eq!(Rounding::CeilQ.exponent(&frac(3, 4), 5).unwrap(), 4);
    assert_eq!(Rounding::CeilQMinusOne.exponent(&frac(1, 2), 125).unwrap(), 62);
    assert_eq!(Rounding::CeilQ.exponent(&frac(1, 2), 125).unwrap(), 63);
    assert_eq!(Rounding::CeilQ.exponent(&BigRational::zero(), 125).unwrap(), 0);
}

#[test]
fn regular_line_with_boundary() {
    let pres = RingPresentation::from_strs(5, &["y"], None).unwrap();
    let delta = QDivisor::single(pres.parse("y").unwrap(), frac(3, 4)).unwrap();
    let pair = PairSpec::new(pres.clone(), delta, Rounding::CeilQMinusOne).unwrap();
    let j = degeneracy_ideal(&pair, 1, None).unwrap();
    assert!(j.equals(&Ideal::from_strs(pres.ring(), &["y^2"]).unwrap()).unwrap());
    assert_eq!(splitting_length(&pair, 1).unwrap().length, 2);

    let half = QDivisor::single(pres.parse("y").unwrap(), frac(1, 2)).unwrap();
    let pair = PairSpec::new(pres, half, Rounding::CeilQMinusOne).unwrap();
    let r = splitting_length(&pair, 1).unwrap();
    assert_eq!((r.length, r.value), (3, frac(3, 5)));
}

#[test]
fn regular_rings_have_signature_one() {
    let pres = RingPresentation::from_strs(5, &["x", "y", "z"], None).unwrap();
    let pair = PairSpec::trivial(pres.clone());
    let r = splitting_length(&pair, 2).unwrap();
    assert_eq!(r.length, 5u128.pow(6));
    assert!(r.value.is_one());
    let j = degeneracy_ideal(&pair, 1, None).unwrap();
    assert!(j.equals(&pres.maximal_frobenius(5)).unwrap());
    let est = fsignature_estimate(&pair, 3).unwrap();
    assert!(est.extrapolated.is_one());
}

#[test]
fn a1_over_f3_agrees_with_explicit_ideal() {
    let pres = a_n(3, 1);
    let pair = PairSpec::trivial(pres.clone());
    let j = degeneracy_ideal(&pair, 1, None).unwrap();
    let f2 = pres.parse("(x*y - z^2)^2").unwrap();
    assert!(j.equals(&pres.maximal_frobenius(3).colon_poly(&f2).unwrap()).unwrap());
    assert_eq!(j.colength().unwrap(), splitting_length(&pair, 1).unwrap().length);
}

#[test]
fn a1_sequence_over_f5() {
    let pair = PairSpec::trivial(a_n(5, 1));
    let est = fsignature_estimate(&pair, 3).unwrap();
    for r in &est.records {
        let q2 = (r.q * r.q) as i64;
        assert_eq!(r.value, frac(q2 + 1, 2 * q2));
    }
    assert!((&est.extrapolated - frac(1, 2)).abs() < frac(1, 100));
}

#[test]
fn ideal_route_matches_length_route() {
    let pres = a_n(5, 1);
    let delta = QDivisor::single(pres.parse("x + y").unwrap(), frac(1, 3)).unwrap();
    let pair = PairSpec::new(pres.clone(), delta, Rounding::CeilQMinusOne).unwrap();
    let x = pres.parse("x").unwrap();
    for e in 1..=2 {
        for k in [0u64, 3, 7] {
            let j = degeneracy_ideal(&pair, e, Some((&x, k))).unwrap();
            assert_eq!(
                j.colength().unwrap(),
                colon_length(&pair, e, &[(x.clone(), k)]).unwrap()
            );
        }
    }
}

#[test]
fn curve_samples() {
    let pres = a_n(5, 1);
    let pair = PairSpec::trivial(pres.clone());
    let d = cartier_root(&pres, "x", 2);
    let grid: Vec<BigRational> = (0..=4).map(|i| frac(i, 4)).collect();
    let curve = signature_curve(&pair, &d, 2, &grid).unwrap();
    assert_eq!(curve.samples[0].value, splitting_length(&pair, 2).unwrap().value);
    for s in &curve.samples {
        let target = (BigRational::one() - &s.t) / frac(2, 1);
        assert!((&s.value - target).abs() <= frac(5, 25));
    }

    let line = RingPresentation::from_strs(5, &["y"], None).unwrap();
    let pair = PairSpec::trivial(line.clone());
    let d = cartier_root(&line, "y", 1);
    let curve = signature_curve(&pair, &d, 1, &grid).unwrap();
    for (k, s) in curve.samples.iter().enumerate() {
        assert_eq!(s.value, BigRational::one() - frac(k as i64, 5));
    }
    assert!(matches!(
        signature_curve(&pair, &d, 1, &[frac(3, 2)]),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn left_derivative() {
    let pres = a_n(5, 1);
    let pair = PairSpec::trivial(pres.clone());
    let d = cartier_root(&pres, "x", 2);
    let ld = left_derivative_at_one(&pair, &d, 3, 3).unwrap();
    assert!(ld.s_at_one.is_zero());
    assert_eq!(ld.estimate, frac(-63, 125));

    let plane = RingPresentation::from_strs(5, &["x", "y"], None).unwrap();
    let pair = PairSpec::trivial(plane.clone());
    let d = cartier_root(&plane, "x", 1);
    for e in 1..=2 {
        assert_eq!(left_derivative_at_one(&pair, &d, e, e).unwrap().estimate, frac(-1, 1));
    }
    let pres = a_n(5, 1);
    let bad = cartier_root(&pres, "x", 5);
    assert!(matches!(
        left_derivative_at_one(&PairSpec::trivial(pres), &bad, 1, 1),
        Err(Error::IndexNotAdmissible { .. })
    ));
}

#[test]
fn differents_of_a_n() {
    for (p, n) in [(5u64, 1u32), (7, 2)] {
        let pres = a_n(p, n);
        let pair = PairSpec::trivial(pres.clone());
        let d = cartier_root(&pres, "x", n as i64 + 1);
        let diff = different_hypersurface(&pair, &d, 1, &a_n_base(&pres)).unwrap();
        assert_eq!(diff.coefficients, vec![("y".to_string(), frac(n as i64, n as i64 + 1))]);
        assert!(diff.residual_is_unit());
        assert_eq!(diff.h.len(), 1);
    }
}

#[test]
fn different_of_cartier_divisor_vanishes() {
    let plane = RingPresentation::from_strs(5, &["x", "y"], None).unwrap();
    let pair = PairSpec::trivial(plane.clone());
    let d = cartier_root(&plane, "x", 1);
    let base = BasePresentation::from_strs(plane.ring(), &["y"], &["0", "y"], &["y"]).unwrap();
    for e in 1..=2 {
        let diff = different_hypersurface(&pair, &d, e, &base).unwrap();
        assert_eq!(diff.h, Polynomial::one(&base.ring));
        assert!(diff.coefficients.iter().all(|(_, c)| c.is_zero()));
    }
    // smooth hypersurface z = xy with D = div(x)
    let smooth = RingPresentation::from_strs(5, &["x", "y", "z"], Some("z - x*y")).unwrap();
    let pair = PairSpec::trivial(smooth.clone());
    let d = cartier_root(&smooth, "x", 1);
    let base = BasePresentation::from_strs(smooth.ring(), &["y"], &["0", "y", "0"], &["y"]).unwrap();
    let diff = different_hypersurface(&pair, &d, 1, &base).unwrap();
    assert!(diff.h.is_constant());
}

#[test]
fn inconsistent_base_is_rejected() {
    let pres = a_n(5, 1);
    let pair = PairSpec::trivial(pres.clone());
    let d = cartier_root(&pres, "x", 2);
    let base = BasePresentation::from_strs(pres.ring(), &["y"], &["0", "y", "y"], &["y"]).unwrap();
    assert!(matches!(
        different_hypersurface(&pair, &d, 1, &base),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn adjunction_on_a1() {
    let pres = a_n(5, 1);
    let pair = PairSpec::trivial(pres.clone());
    let d = cartier_root(&pres, "x", 2);
    let report = adjunction_check(&pair, &d, &a_n_base(&pres), 3).unwrap();
    for l in &report.levels {
        let q = l.q as i64;
        assert_eq!(l.rhs_direct, Some(frac(q + 1, 2 * q)));
        assert_eq!(l.routes_agree, Some(true));
    }
    assert!(report.inequality_holds && report.equality && report.linear);
}

#[test]
fn adjunction_with_boundary_on_plane() {
    let plane = RingPresentation::from_strs(5, &["x", "y"], None).unwrap();
    let delta = QDivisor::single(plane.parse("y").unwrap(), frac(1, 2)).unwrap();
    let pair = PairSpec::new(plane.clone(), delta, Rounding::CeilQMinusOne).unwrap();
    let d = cartier_root(&plane, "x", 1);
    let base = BasePresentation::from_strs(plane.ring(), &["y"], &["0", "y"], &["y"]).unwrap();
    let diff = different_hypersurface(&pair, &d, 1, &base).unwrap();
    assert_eq!(diff.coefficients[0].1, frac(1, 2));
    let report = adjunction_check(&pair, &d, &base, 2).unwrap();
    assert!(report.levels.iter().all(|l| l.routes_agree == Some(true)));
}

#[test]
fn skipped_levels_are_marked() {
    let pres = a_n(2, 2);
    let pair = PairSpec::trivial(pres.clone());
    // index 3 divides 2^2 - 1 but not 2 - 1
    let d = cartier_root(&pres, "x", 3);
    let report = adjunction_check(&pair, &d, &a_n_base(&pres), 2).unwrap();
    assert!(report.levels[0].skipped);
    assert!(!report.levels[1].skipped);
}

#[test]
fn hilbert_kunz_values() {
    let plane = RingPresentation::from_strs(3, &["x", "y"], None).unwrap();
    let hk = hilbert_kunz(&plane, &Ideal::maximal(plane.ring()), 3).unwrap();
    assert!(hk.records.iter().all(|r| r.value.is_one()));

    let pres = a_n(5, 1);
    let m = Ideal::maximal(pres.ring());
    let hk = hilbert_kunz(&pres, &m, 3).unwrap();
    assert!((&hk.extrapolated - frac(3, 2)).abs() < frac(1, 20));
    let mp = m.frobenius_power(1).unwrap();
    let a = hilbert_kunz(&pres, &mp, 2).unwrap();
    let b = hilbert_kunz(&pres, &m, 3).unwrap();
    assert_eq!(a.records[0].length, b.records[1].length);
    assert_eq!(a.records[1].length, b.records[2].length);

    let line_ideal = Ideal::from_strs(pres.ring(), &["x"]).unwrap();
    assert!(matches!(hilbert_kunz(&pres, &line_ideal, 2), Err(Error::NotArtinian)));
}

#[test]
fn fpt_values() {
    let plane = RingPresentation::from_strs(5, &["x", "y"], None).unwrap();
    let x = plane.parse("x").unwrap();
    for r in fpt_estimate(&plane, &x, 3).unwrap() {
        assert_eq!(r.nu, r.q - 1);
    }
    let plane2 = RingPresentation::from_strs(2, &["x", "y"], None).unwrap();
    let r = fpt_estimate(&plane2, &plane2.parse("x*y").unwrap(), 1).unwrap();
    assert_eq!((r[0].nu, r[0].ratio.clone()), (1, frac(1, 2)));
    let line = RingPresentation::from_strs(5, &["x"], None).unwrap();
    let r = fpt_estimate(&line, &line.parse("x^2").unwrap(), 1).unwrap();
    assert_eq!((r[0].nu, r[0].ratio.clone()), (2, frac(2, 5)));
    assert!(fpt_estimate(&line, &line.parse("x + 1").unwrap(), 1).is_err());
}

#[test]
fn splitting_ratio_of_a1_along_divisor() {
    let pres = a_n(5, 1);
    let delta = cartier_root(&pres, "x", 2);
    let pair = PairSpec::new(pres, delta, Rounding::CeilQMinusOne).unwrap();
    let seq = splitting_ratio_estimate(&pair, 1, 3).unwrap();
    for r in &seq {
        let q = r.q as i64;
        assert_eq!(r.value, frac(q + 1, 2 * q));
    }
    let plane = RingPresentation::from_strs(3, &["x", "y"], None).unwrap();
    let seq = splitting_ratio_estimate(&PairSpec::trivial(plane), 2, 2).unwrap();
    assert!(seq.iter().all(|r| r.value.is_one()));
}

/// Rounding modes differ by exactly `ℓ(S/(K + (x)))/q^d` with
/// `K = (J_e : x^k1)`, `k1 = ⌈c(q−1)⌉`, whenever `⌈cq⌉ = k1 + 1`.
#[test]
fn rounding_modes_differ_by_one_colon_step() {
    let pres = a_n(5, 1);
    let x = pres.parse("x").unwrap();
    for c in [frac(1, 3), frac(1, 2), frac(2, 3)] {
        let d = QDivisor::single(x.clone(), c.clone()).unwrap();
        for e in 1..=2u32 {
            let a = splitting_length(
                &PairSpec::new(pres.clone(), d.clone(), Rounding::CeilQMinusOne).unwrap(),
                e,
            )
            .unwrap();
            let b = splitting_length(&PairSpec::new(pres.clone(), d.clone(), Rounding::CeilQ).unwrap(), e).unwrap();
            let q = a.q;
            let k1 = Rounding::CeilQMinusOne.exponent(&c, q).unwrap();
            let k2 = Rounding::CeilQ.exponent(&c, q).unwrap();
            assert!(a.length >= b.length);
            let pair = PairSpec::trivial(pres.clone());
            let k = degeneracy_ideal(&pair, e, Some((&x, k1))).unwrap();
            let step = if k2 == k1 {
                0
            } else {
                k.add_generator(&x).unwrap().colength().unwrap()
            };
            assert_eq!(a.length - b.length, step);
            let _ = ratio(step, 1);
        }
    }
}

#[test]
fn rings_must_match() {
    let pres = a_n(5, 1);
    let other = Ring::new(5, &["u", "v"], MonomialOrder::Grevlex).unwrap();
    let g = other.parse("u").unwrap();
    let delta = QDivisor::single(g, frac(1, 2)).unwrap();
    assert!(matches!(
        PairSpec::new(pres, delta, Rounding::CeilQ),
        Err(Error::RingMismatch)
    ));
}
