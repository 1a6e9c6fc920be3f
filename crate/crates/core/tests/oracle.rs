mod common;

use fsig_core::ffpoly::{MonomialOrder, Ring};
use fsig_core::fsing::{splitting_length, PairSpec, RingPresentation};
use fsig_core::groebner::Ideal;

#[test]
fn oracle_on_monomial_box() {
    let r = Ring::new(5, &["x", "y"], MonomialOrder::Grevlex).unwrap();
    assert_eq!(common::length_over_box(&[3, 2], &[]), 6);
    let g = r.parse("x*y").unwrap();
    assert_eq!(common::length_over_box(&[3, 2], &[g]), 4);
}

#[test]
fn oracle_agrees_with_staircase_on_a1() {
    let pres = RingPresentation::from_strs(3, &["x", "y", "z"], Some("x*y - z^2")).unwrap();
    let pair = PairSpec::trivial(pres.clone());
    let f = pres.hypersurface_equation().unwrap();
    for e in 1..=2u32 {
        let q = 3u64.pow(e);
        let big_f = common::truncated_power(f, q - 1, q);
        assert_eq!(
            common::colon_length(&big_f, q),
            splitting_length(&pair, e).unwrap().length
        );
    }
    let i = Ideal::from_strs(pres.ring(), &["x^3", "y^3", "z^3", "x*y - z^2"]).unwrap();
    assert_eq!(
        common::length_over_box(&[3, 3, 3], std::slice::from_ref(f)),
        i.colength().unwrap()
    );
}
