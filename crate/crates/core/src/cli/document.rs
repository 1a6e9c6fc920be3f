use std::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Exact fraction, serialised as `{"num": "..", "den": ".."}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction(pub BigRational);

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Fraction", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

impl Fraction {
    pub fn text(&self) -> String {
        if self.0.denom() == &BigInt::from(1) {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl From<BigRational> for Fraction {
    fn from(r: BigRational) -> Self {
        Fraction(r)
    }
}

/// Decimal rendering with `digits` places, rounded half away from zero.
pub fn decimal(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let num = r.numer().abs() * &scale;
    let den = r.denom().clone();
    let (mut q, rem) = num.div_rem(&den);
    if rem * 2 >= den {
        q += 1;
    }
    let (int, frac) = q.div_rem(&scale);
    let negative = r.numer().sign() == Sign::Minus && !(int.is_zero() && frac.is_zero());
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    write!(out, "{int}").unwrap();
    if digits > 0 {
        write!(out, ".{:0>width$}", frac.to_string(), width = digits as usize).unwrap();
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub label: String,
    pub e: u32,
    pub q: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Fraction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<u128>,
    pub value: Fraction,
    pub value_decimal: String,
}

impl Record {
    pub fn new(label: impl Into<String>, e: u32, q: u64, value: BigRational) -> Self {
        Self {
            label: label.into(),
            e,
            q,
            t: None,
            length: None,
            value_decimal: decimal(&value, 12),
            value: Fraction(value),
        }
    }

    pub fn with_length(mut self, length: u128) -> Self {
        self.length = Some(length);
        self
    }

    pub fn with_t(mut self, t: BigRational) -> Self {
        self.t = Some(Fraction(t));
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Extrapolation {
    pub label: String,
    pub value: Fraction,
    pub value_decimal: String,
}

impl Extrapolation {
    pub fn new(label: impl Into<String>, value: BigRational) -> Self {
        Self {
            label: label.into(),
            value_decimal: decimal(&value, 12),
            value: Fraction(value),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Flag {
    pub name: String,
    pub value: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ResultDocument {
    pub command: String,
    pub input: serde_json::Value,
    pub records: Vec<Record>,
    pub extrapolations: Vec<Extrapolation>,
    pub checks: Vec<Check>,
    pub flags: Vec<Flag>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub partial: bool,
    pub timing: Timing,
}

impl ResultDocument {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            input: serde_json::Value::Null,
            ..Self::default()
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn flag(&mut self, name: impl Into<String>, value: bool) {
        self.flags.push(Flag {
            name: name.into(),
            value,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn emit(doc: &ResultDocument, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("document serialises");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("label,e,q,t,length,value,value_decimal\n");
            for r in &doc.records {
                let t = r.t.as_ref().map(Fraction::text).unwrap_or_default();
                let length = r.length.map(|l| l.to_string()).unwrap_or_default();
                writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.label,
                    r.e,
                    r.q,
                    t,
                    length,
                    r.value.text(),
                    r.value_decimal
                )
                .unwrap();
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn fraction_renderings() {
        let f = Fraction(frac(1, 2));
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"num":"1","den":"2"}"#);
        assert_eq!(format!("{},{}", f.text(), decimal(&f.0, 12)), "1/2,0.500000000000");
        assert_eq!(decimal(&frac(-63, 125), 12), "-0.504000000000");
        assert_eq!(decimal(&frac(2, 3), 3), "0.667");
        assert_eq!(decimal(&frac(-1, 10_000), 3), "0.000");
        assert_eq!(Fraction(frac(125, 1)).text(), "125");
    }

    #[test]
    fn empty_documents_are_valid() {
        let doc = ResultDocument::new("fsig");
        let v: serde_json::Value = serde_json::from_str(&emit(&doc, Format::Json)).unwrap();
        assert_eq!(v["records"], serde_json::json!([]));
        assert_eq!(emit(&doc, Format::Csv), "label,e,q,t,length,value,value_decimal\n");
    }

    #[test]
    fn lengths_are_plain_integers() {
        let mut doc = ResultDocument::new("fsig");
        doc.records.push(Record::new("s", 1, 5, frac(1, 1)).with_length(125));
        let csv = emit(&doc, Format::Csv);
        assert!(csv.ends_with("s,1,5,,125,1,1.000000000000\n"));
        assert!(emit(&doc, Format::Json).contains("\"length\": 125"));
    }
}
