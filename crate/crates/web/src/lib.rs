//! WebAssembly bindings for the `A_n` examples: signature sequences, the
//! signature curve along `D = V(x, z)`, and the different on `D`.
//! Every function returns a JSON string.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use fsig_core::fsing::{
    different_hypersurface, fsignature_estimate, signature_curve, BasePresentation, PairSpec, QDivisor,
    RingPresentation,
};

/// Largest `p^e` accepted from the page, to keep the tab responsive.
const MAX_Q: u64 = 400;

fn js(err: impl std::fmt::Display) -> JsError {
    JsError::new(&err.to_string())
}

fn fraction(r: &BigRational) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "value": r.to_f64().unwrap_or(f64::NAN),
    })
}

fn an(p: u64, n: u32) -> Result<(PairSpec, QDivisor, BasePresentation), JsError> {
    if n == 0 {
        return Err(js("n must be positive"));
    }
    let f = format!("x*y - z^{}", n + 1);
    let pres = RingPresentation::from_strs(p, &["x", "y", "z"], Some(&f)).map_err(js)?;
    let x = pres.parse("x").map_err(js)?;
    let d = QDivisor::single(x, BigRational::new(1.into(), BigInt::from(n + 1))).map_err(js)?;
    let base = BasePresentation::from_strs(pres.ring(), &["y"], &["0", "y", "0"], &["y"]).map_err(js)?;
    Ok((PairSpec::trivial(pres), d, base))
}

fn check_size(p: u64, e: u32) -> Result<u64, JsError> {
    match p.checked_pow(e) {
        Some(q) if q <= MAX_Q => Ok(q),
        _ => Err(js(format!("p^e must be at most {MAX_Q}"))),
    }
}

/// `s_e(A_n)` for `e = 1..=emax` and the extrapolated limit.
#[wasm_bindgen]
pub fn signature_sequence(p: u64, n: u32, emax: u32) -> Result<String, JsError> {
    check_size(p, emax)?;
    let (pair, _, _) = an(p, n)?;
    let est = fsignature_estimate(&pair, emax).map_err(js)?;
    let records: Vec<Value> = est
        .records
        .iter()
        .map(|r| json!({"e": r.e, "q": r.q, "length": r.length.to_string(), "value": fraction(&r.value)}))
        .collect();
    Ok(json!({"records": records, "limit": fraction(&est.extrapolated)}).to_string())
}

/// `t ↦ s_e(A_n, tD)` on `steps + 1` equally spaced points of `[0, 1]`.
#[wasm_bindgen]
pub fn curve(p: u64, n: u32, e: u32, steps: u32) -> Result<String, JsError> {
    check_size(p, e)?;
    if steps == 0 || steps > 64 {
        return Err(js("steps must lie in 1..=64"));
    }
    let (pair, d, _) = an(p, n)?;
    let grid: Vec<BigRational> = (0..=steps)
        .map(|k| BigRational::new(BigInt::from(k), BigInt::from(steps)))
        .collect();
    let c = signature_curve(&pair, &d, e, &grid).map_err(js)?;
    let samples: Vec<Value> = c
        .samples
        .iter()
        .map(|s| json!({"t": fraction(&s.t), "value": fraction(&s.value)}))
        .collect();
    Ok(json!({"e": c.e, "q": c.q, "samples": samples}).to_string())
}

/// The different of `(A_n, 0)` on `D ≅ F_p[y]` at level `e`.
#[wasm_bindgen]
pub fn different(p: u64, n: u32, e: u32) -> Result<String, JsError> {
    check_size(p, e)?;
    let (pair, d, base) = an(p, n)?;
    let diff = different_hypersurface(&pair, &d, e, &base).map_err(js)?;
    let coefficients: Vec<Value> = diff
        .coefficients
        .iter()
        .map(|(v, c)| json!({"var": v, "coeff": fraction(c)}))
        .collect();
    Ok(json!({
        "e": diff.e,
        "q": diff.q,
        "h": diff.h.to_string(),
        "coefficients": coefficients,
        "residual_is_unit": diff.residual_is_unit(),
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: Result<String, JsError>) -> Value {
        serde_json::from_str(&s.unwrap_or_else(|_| panic!("call failed"))).unwrap()
    }

    #[test]
    fn sequence_for_a1() {
        let v = parse(signature_sequence(5, 1, 2));
        assert_eq!(v["records"][0]["value"]["num"], "13");
        assert_eq!(v["records"][0]["value"]["den"], "25");
    }

    #[test]
    fn curve_endpoints() {
        let v = parse(curve(5, 1, 1, 4));
        let samples = v["samples"].as_array().unwrap();
        assert_eq!(samples.len(), 5);
        assert_eq!(samples[0]["value"]["num"], "13");
    }

    #[test]
    fn different_for_a2() {
        let v = parse(different(7, 2, 1));
        assert_eq!(v["coefficients"][0]["coeff"]["num"], "2");
        assert_eq!(v["coefficients"][0]["coeff"]["den"], "3");
        assert_eq!(v["residual_is_unit"], true);
    }
}
