use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::json;

use super::document::{Extrapolation, Record, ResultDocument};
use super::problem::Problem;
use crate::covers::{verify_cover, verify_cover_different};
use crate::error::{Error, Result};
use crate::fsing::{
    adjunction_check, different_hypersurface, fpt_estimate, fsignature_estimate, hilbert_kunz, signature_curve,
    splitting_ratio_estimate, tolerances, Estimate, SplittingRecord,
};
use crate::groebner::Ideal;

pub(crate) fn echo(problem: &Problem, emax: u32) -> serde_json::Value {
    let f = &problem.file;
    json!({
        "p": f.ring.p,
        "vars": f.ring.vars,
        "quotient": f.ring.quotient,
        "dimension": problem.ring.dimension(),
        "order": problem.ring.ring().order().name(),
        "rounding": problem.pair.rounding.name(),
        "delta": f.pair.delta,
        "divisor": f.pair.divisor,
        "emax": emax,
    })
}

fn push_records(doc: &mut ResultDocument, label: &str, records: &[SplittingRecord]) {
    for r in records {
        doc.records
            .push(Record::new(label, r.e, r.q, r.value.clone()).with_length(r.length));
    }
}

fn check_expectation(doc: &mut ResultDocument, problem: &Problem, value: &BigRational) -> Result<()> {
    if let Some((target, tol)) = problem.expectation(&doc.command)? {
        let dist = (value - &target).abs();
        doc.check(
            "expected limit",
            dist <= tol,
            format!("|{value} - {target}| = {dist}, tolerance {tol}"),
        );
    }
    Ok(())
}

fn check_bounds(doc: &mut ResultDocument, problem: &Problem, records: &[SplittingRecord]) {
    let n = problem.ring.nvars() as u32;
    let regular = problem.ring.hypersurface_equation().is_none();
    let trivial = regular && problem.pair.delta.is_empty();
    let ok = records.iter().all(|r| {
        r.length <= (r.q as u128).pow(n)
            && (!regular || r.value <= BigRational::one())
            && (!trivial || r.value.is_one())
    });
    doc.check(
        "length bounds",
        ok,
        "length <= q^N; on a regular ring s_e <= 1, and s_e = 1 without boundary",
    );
}

fn estimate_doc(doc: &mut ResultDocument, problem: &Problem, label: &str, est: &Estimate) -> Result<()> {
    push_records(doc, label, &est.records);
    doc.extrapolations
        .push(Extrapolation::new(label, est.extrapolated.clone()));
    check_expectation(doc, problem, &est.extrapolated)
}

pub fn fsig(problem: &Problem, emax: u32, doc: &mut ResultDocument) -> Result<()> {
    let est = fsignature_estimate(&problem.pair, emax)?;
    check_bounds(doc, problem, &est.records);
    estimate_doc(doc, problem, "s_e", &est)
}

pub fn curve(problem: &Problem, emax: u32, grid: &[BigRational], doc: &mut ResultDocument) -> Result<()> {
    let d = problem.require_divisor()?;
    for e in 1..=emax {
        match signature_curve(&problem.pair, d, e, grid) {
            Ok(curve) => {
                for s in &curve.samples {
                    doc.records.push(
                        Record::new("s_e(t)", e, curve.q, s.value.clone())
                            .with_t(s.t.clone())
                            .with_length(s.length),
                    );
                }
                doc.check(format!("monotone e={e}"), true, "s_e(t) non-increasing in t");
            }
            Err(Error::InvariantViolation(m)) => doc.check(format!("monotone e={e}"), false, m),
            Err(other) => return Err(other),
        }
    }
    Ok(())
}

pub fn diff(problem: &Problem, emax: u32, doc: &mut ResultDocument) -> Result<()> {
    let d = problem.require_divisor()?;
    let base = problem.require_base()?;
    let (_, m) = d.as_cartier_root()?;
    let mut details = Vec::new();
    for e in 1..=emax {
        let q = problem.pair.q(e)?;
        if (q - 1) % m != 0 {
            details.push(json!({"e": e, "q": q, "skipped": true}));
            continue;
        }
        let res = different_hypersurface(&problem.pair, d, e, base)?;
        for (v, c) in &res.coefficients {
            doc.records
                .push(Record::new(format!("coefficient:{v}"), e, q, c.clone()));
        }
        let in_range = res
            .coefficients
            .iter()
            .all(|(_, c)| !c.is_negative() && *c <= BigRational::one());
        doc.check(
            format!("coefficients in [0,1] e={e}"),
            in_range,
            "0 <= ord_v(h)/(q-1) <= 1",
        );
        doc.check(
            format!("reconstruction e={e}"),
            true,
            "Phi_D(h * y^a) reproduces every recorded value",
        );
        details.push(json!({
            "e": e,
            "q": q,
            "skipped": false,
            "h": res.h.to_string(),
            "residual": res.residual.to_string(),
            "residual_is_unit": res.residual_is_unit(),
        }));
    }
    doc.details = json!({ "levels": details });
    Ok(())
}

pub fn hk(problem: &Problem, emax: u32, doc: &mut ResultDocument) -> Result<()> {
    let ring = problem.ring.ring();
    let ideal = match &problem.file.task.ideal {
        Some(gens) => {
            let polys = gens
                .iter()
                .map(|s| problem.task_polynomial(s, "task.ideal"))
                .collect::<Result<Vec<_>>>()?;
            Ideal::new(ring, polys)?
        }
        None => Ideal::maximal(ring),
    };
    let est = hilbert_kunz(&problem.ring, &ideal, emax)?;
    estimate_doc(doc, problem, "e_hk", &est)
}

pub fn fpt(problem: &Problem, emax: u32, doc: &mut ResultDocument) -> Result<()> {
    let src = problem
        .file
        .task
        .g
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("fpt needs task.g".into()))?;
    let g = problem.task_polynomial(src, "task.g")?;
    let recs = fpt_estimate(&problem.ring, &g, emax)?;
    for r in &recs {
        doc.records
            .push(Record::new("nu/q", r.e, r.q, r.ratio.clone()).with_length(r.nu as u128));
    }
    if let Some(last) = recs.last() {
        check_expectation(doc, problem, &last.ratio)?;
    }
    Ok(())
}

pub fn ratio(problem: &Problem, emax: u32, doc: &mut ResultDocument) -> Result<()> {
    let sdim = problem
        .file
        .task
        .sdim
        .ok_or_else(|| Error::InvalidInput("ratio needs task.sdim".into()))?;
    let recs = splitting_ratio_estimate(&problem.pair, sdim, emax)?;
    push_records(doc, "r_e", &recs);
    if let Some(last) = recs.last() {
        check_expectation(doc, problem, &last.value)?;
    }
    Ok(())
}

pub fn adjoint_check(problem: &Problem, emax: u32, doc: &mut ResultDocument) -> Result<()> {
    let d = problem.require_divisor()?;
    let base = problem.require_base()?;
    let report = adjunction_check(&problem.pair, d, base, emax)?;
    for l in &report.levels {
        doc.records.push(Record::new("s_e(R)", l.e, l.q, l.signature.clone()));
        if l.skipped {
            continue;
        }
        let slope = l.slope.clone().expect("admissible level");
        doc.records.push(Record::new("slope", l.e, l.q, slope));
        doc.records.push(Record::new(
            "rhs_direct",
            l.e,
            l.q,
            l.rhs_direct.clone().expect("admissible level"),
        ));
        doc.records.push(Record::new(
            "rhs_colon",
            l.e,
            l.q,
            l.rhs_colon.clone().expect("admissible level"),
        ));
        doc.check(
            format!("routes agree e={}", l.e),
            l.routes_agree == Some(true),
            "different route equals colon route exactly",
        );
    }
    doc.check(
        "corollary inequality",
        report.inequality_holds,
        format!(
            "s_e(R) - s_e(D, Diff) = {} at e={}, slack {}",
            report.margin,
            report.top_level,
            tolerances::over_q(tolerances::COROLLARY_OVER_Q, problem.pair.q(report.top_level)?)
        ),
    );
    if let Some(last) = report.levels.iter().rev().find(|l| !l.skipped) {
        if let Some((target, tol)) = problem.expectation(&doc.command)? {
            let slope = last.slope.clone().expect("admissible level");
            let dist = (&slope - &target).abs();
            doc.check(
                "expected slope",
                dist <= tol,
                format!("|{slope} - {target}| = {dist}, tolerance {tol}"),
            );
        }
    }
    doc.flag("equality", report.equality);
    doc.flag("linear", report.linear);
    doc.flag("equality_case", report.equality && report.linear);
    doc.details = json!({
        "top_level": report.top_level,
        "curve_deviation": super::document::Fraction(report.curve_deviation.clone()),
        "skipped_levels": report.levels.iter().filter(|l| l.skipped).map(|l| l.e).collect::<Vec<_>>(),
    });
    Ok(())
}

pub fn verify_cover_cmd(problem: &Problem, emax: u32, doc: &mut ResultDocument) -> Result<()> {
    let cover = problem
        .cover
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("verify-cover needs a [cover] section".into()))?;
    let report = verify_cover(cover, &problem.pair, emax)?;
    for l in &report.levels {
        doc.records.push(Record::new("s_e(base)", l.e, l.q, l.base.clone()));
        doc.records.push(Record::new("s_e(cover)", l.e, l.q, l.cover.clone()));
        doc.records.push(Record::new("gap", l.e, l.q, l.gap.clone()));
    }
    let issue = report.issues.join("; ");
    doc.check(
        "inclusion relations",
        report.relations_ok,
        if report.relations_ok {
            "f maps to 0".to_string()
        } else {
            issue.clone()
        },
    );
    doc.check(
        "cartier witness",
        report.witness_ok,
        format!("u^{} = c * image(x)", cover.index),
    );
    doc.check("gaps non-increasing", report.gaps_non_increasing, "from e = 2 on");
    let c = problem.file.cover.as_ref().expect("cover section");
    if let (Some(b), Some(bp)) = (&c.base, &c.cover_base) {
        let d = problem.require_divisor()?;
        let (base_d, base_dp) = (&problem.bases[b], &problem.bases[bp]);
        for e in 1..=emax {
            let q = problem.pair.q(e)?;
            if (q - 1) % cover.index != 0 {
                continue;
            }
            let r = verify_cover_different(cover, &problem.pair, d, base_d, base_dp, e)?;
            doc.records
                .push(Record::new("m*s_e(D,Diff)", e, q, r.scaled_base.clone()));
            doc.records
                .push(Record::new("s_e(D',Diff)", e, q, r.cover_signature.clone()));
            let tol = tolerances::over_q(tolerances::COVER_DIFFERENT_OVER_Q, q);
            doc.check(
                format!("different comparison e={e}"),
                r.gap <= tol,
                format!("gap {} <= {tol}", r.gap),
            );
        }
    }
    Ok(())
}
