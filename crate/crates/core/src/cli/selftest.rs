use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::document::ResultDocument;
use crate::covers::{verify_cover, CoverPresentation};
use crate::error::Result;
use crate::ffpoly::{MonomialOrder, Polynomial, Ring};
use crate::fsing::{
    different_hypersurface, frobenius_colon_containment, signature_curve, splitting_length, BasePresentation, PairSpec,
    QDivisor, RingPresentation,
};
use crate::groebner::{groebner_basis, Ideal};

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_poly(ring: &std::sync::Arc<Ring>, rng: &mut ChaCha8Rng, terms: usize, deg: u64) -> Polynomial {
    let t = (0..terms)
        .map(|_| {
            let e: Vec<u64> = (0..ring.nvars()).map(|_| rng.gen_range(0..=deg)).collect();
            (e, rng.gen_range(1..ring.p()))
        })
        .collect();
    Polynomial::from_terms(ring, t)
}

fn random_artinian(ring: &std::sync::Arc<Ring>, rng: &mut ChaCha8Rng) -> Result<Ideal> {
    let n = ring.nvars();
    let mut gens = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = rng.gen_range(2..=4);
        gens.push(Polynomial::monomial(ring, &e, 1));
    }
    gens.push(random_poly(ring, rng, 2, 2));
    Ideal::new(ring, gens)
}

/// Quick invariant checks on built-in examples.
pub fn run(doc: &mut ResultDocument) -> Result<()> {
    let mut ok = true;
    for p in [2u64, 3, 5] {
        for n in 1..=3usize {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let ring = Ring::new(p, &names, MonomialOrder::Grevlex)?;
            let pair = PairSpec::trivial(RingPresentation::regular(&ring));
            for e in 1..=2 {
                ok &= splitting_length(&pair, e)?.value.is_one();
            }
        }
    }
    doc.check("regular rings", ok, "s_e = 1 for p in {2,3,5}, N <= 3, e <= 2");

    let a1 = RingPresentation::from_strs(5, &["x", "y", "z"], Some("x*y - z^2"))?;
    let pair = PairSpec::trivial(a1.clone());
    let mut ok = true;
    for e in 1..=2 {
        let r = splitting_length(&pair, e)?;
        let q2 = (r.q * r.q) as i64;
        ok &= r.value == frac(q2 + 1, 2 * q2);
    }
    doc.check("A_1 signature", ok, "s_e = (q^2 + 1)/(2 q^2) over F_5");

    let d = QDivisor::single(a1.parse("x")?, frac(1, 2))?;
    let grid: Vec<BigRational> = (0..=4).map(|i| frac(i, 4)).collect();
    let monotone = signature_curve(&pair, &d, 2, &grid).is_ok();
    doc.check("curve monotonicity", monotone, "A_1, e = 2");

    let base = BasePresentation::from_strs(a1.ring(), &["y"], &["0", "y", "0"], &["y"])?;
    let diff = different_hypersurface(&pair, &d, 1, &base)?;
    doc.check(
        "A_1 different",
        diff.coefficients[0].1 == frac(1, 2) && diff.residual_is_unit(),
        "coefficient 1/2 at the origin",
    );

    let cover_ring = RingPresentation::from_strs(5, &["u", "s"], None)?;
    let cover = CoverPresentation {
        inclusion: ["u^2", "s^2", "u*s"]
            .iter()
            .map(|s| cover_ring.parse(s))
            .collect::<Result<_>>()?,
        witness: cover_ring.parse("u")?,
        base_divisor: a1.parse("x")?,
        cover: cover_ring,
        index: 2,
    };
    let report = verify_cover(&cover, &pair, 2)?;
    doc.check(
        "A_1 cover",
        report.relations_ok && report.witness_ok,
        "relations and witness",
    );

    let a1_3 = RingPresentation::from_strs(3, &["x", "y", "z"], Some("x*y - z^2"))?;
    let pair3 = PairSpec::trivial(a1_3.clone());
    let x = a1_3.parse("x")?;
    let contained = frobenius_colon_containment(&pair3, &x, 1, 2)?;
    doc.check("Frobenius colon containment", contained, "A_1 over F_3, e = 1, r = 2");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut lemma = true;
    let mut stable = true;
    for k in 0..30 {
        let p = [2u64, 3, 5][k % 3];
        let ring = Ring::new(p, &["x", "y", "z"], MonomialOrder::Grevlex)?;
        let i = random_artinian(&ring, &mut rng)?;
        let g = random_poly(&ring, &mut rng, 2, 2);
        if g.is_zero() {
            continue;
        }
        let lhs = i.colon_poly(&g)?.colength()?;
        lemma &= lhs + i.add_generator(&g)?.colength()? == i.colength()?;
        let gb = i.groebner_basis()?;
        stable &= *gb == groebner_basis(i.generators())?;
        let f = random_poly(&ring, &mut rng, 4, 5);
        let nf = i.normal_form(&f)?;
        stable &= i.normal_form(&nf)? == nf;
    }
    doc.check(
        "length lemma",
        lemma,
        "l(S/(I:g)) = l(S/I) - l(S/(I+g)) on 30 random ideals",
    );
    doc.check("basis determinism", stable, "repeated bases and normal forms agree");
    Ok(())
}
