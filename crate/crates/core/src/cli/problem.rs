use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Deserialize;

use crate::covers::CoverPresentation;
use crate::error::{Error, Result};
use crate::ffpoly::{Limits, MonomialOrder, Polynomial, Ring};
use crate::fsing::{BasePresentation, PairSpec, QDivisor, RingPresentation, Rounding};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub ring: RingSection,
    #[serde(default)]
    pub divisors: BTreeMap<String, Vec<ComponentSection>>,
    #[serde(default)]
    pub pair: PairSection,
    #[serde(default)]
    pub bases: BTreeMap<String, BaseSection>,
    pub cover: Option<CoverSection>,
    #[serde(default)]
    pub task: TaskSection,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    pub p: u64,
    pub vars: Vec<String>,
    pub quotient: Option<String>,
    pub dimension: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSection {
    pub poly: String,
    pub num: i64,
    #[serde(default = "one")]
    pub den: i64,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSection {
    pub delta: Option<String>,
    pub divisor: Option<String>,
    pub rounding: Option<RoundingName>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RoundingName {
    Qm1,
    Q,
}

impl From<RoundingName> for Rounding {
    fn from(r: RoundingName) -> Self {
        match r {
            RoundingName::Qm1 => Rounding::CeilQMinusOne,
            RoundingName::Q => Rounding::CeilQ,
        }
    }
}

/// Coordinates on a divisor: images of the ambient variables in
/// `F_p[vars]`, and lifts of `vars` to the ambient ring.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSection {
    pub vars: Vec<String>,
    pub reduce: Vec<String>,
    pub lift: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSection {
    pub vars: Vec<String>,
    pub quotient: Option<String>,
    pub inclusion: Vec<String>,
    pub index: u64,
    pub witness: String,
    /// Base section for `D` on the base ring.
    pub base: Option<String>,
    /// Base section for `D'` on the cover ring.
    pub cover_base: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSection {
    pub command: Option<String>,
    pub emax: Option<u32>,
    pub grid: Option<Vec<String>>,
    pub r: Option<u32>,
    pub base: Option<String>,
    pub ideal: Option<Vec<String>>,
    pub g: Option<String>,
    pub sdim: Option<usize>,
    /// Expected value per command (limit of the sequence, slope for
    /// `adjoint-check`), checked against `tolerance` (default 1/100).
    #[serde(default)]
    pub expect: BTreeMap<String, String>,
    #[serde(default)]
    pub tolerance: BTreeMap<String, String>,
}

/// Overrides from the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub rounding: Option<Rounding>,
    pub order: Option<MonomialOrder>,
    pub max_pairs: Option<u64>,
}

/// A problem file with every name resolved.
#[derive(Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub ring: Arc<RingPresentation>,
    pub pair: PairSpec,
    pub divisor: Option<QDivisor>,
    pub bases: BTreeMap<String, BasePresentation>,
    pub cover: Option<CoverPresentation>,
}

pub fn parse_rational(src: &str) -> Result<BigRational> {
    let s = src.trim();
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(Error::InvalidInput(format!("'{src}' is not an exact fraction")));
    }
    BigRational::from_str(s).map_err(|_| Error::InvalidInput(format!("'{src}' is not a fraction")))
}

pub fn parse_grid(src: &str) -> Result<Vec<BigRational>> {
    src.split(',').map(parse_rational).collect()
}

fn context<T>(what: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { column, message } => Error::Parse {
            column,
            message: format!("{what}: {message}"),
        },
        Error::InvalidInput(m) => Error::InvalidInput(format!("{what}: {m}")),
        other => other,
    })
}

fn build_ring(p: u64, vars: &[String], order: MonomialOrder, limits: Limits) -> Result<Arc<Ring>> {
    Ok(Ring::new(p, vars, order)?.with_limits(limits))
}

fn presentation(
    ring: &Arc<Ring>,
    quotient: Option<&str>,
    dimension: Option<usize>,
    what: &str,
) -> Result<Arc<RingPresentation>> {
    match quotient {
        None => {
            if let Some(d) = dimension {
                if d != ring.nvars() {
                    return Err(Error::InvalidInput(format!(
                        "{what}: declared dimension {d} but the ring has {} variables",
                        ring.nvars()
                    )));
                }
            }
            Ok(RingPresentation::regular(ring))
        }
        Some(src) => {
            let f = context(&format!("{what}.quotient"), ring.parse(src))?;
            RingPresentation::hypersurface(ring, f, dimension)
        }
    }
}

fn divisor(ring: &Arc<Ring>, name: &str, comps: &[ComponentSection]) -> Result<QDivisor> {
    let mut d = QDivisor::empty();
    for (i, c) in comps.iter().enumerate() {
        let what = format!("divisors.{name}[{i}]");
        if c.den <= 0 || c.num < 0 {
            return Err(Error::InvalidInput(format!("{what}: need num >= 0 and den >= 1")));
        }
        let g = context(&what, ring.parse(&c.poly))?;
        let coeff = BigRational::new(BigInt::from(c.num), BigInt::from(c.den));
        context(&what, d.push(g, coeff))?;
    }
    Ok(d)
}

fn base(ambient: &Arc<Ring>, name: &str, b: &BaseSection) -> Result<BasePresentation> {
    let what = format!("bases.{name}");
    let ring = Ring::new(ambient.p(), &b.vars, MonomialOrder::Grevlex)?.with_limits(*ambient.limits());
    let reduce = b
        .reduce
        .iter()
        .map(|s| context(&format!("{what}.reduce"), ring.parse(s)))
        .collect::<Result<Vec<_>>>()?;
    let lift = b
        .lift
        .iter()
        .map(|s| context(&format!("{what}.lift"), ambient.parse(s)))
        .collect::<Result<Vec<_>>>()?;
    if reduce.len() != ambient.nvars() {
        return Err(Error::InvalidInput(format!(
            "{what}.reduce: expected {} images, got {}",
            ambient.nvars(),
            reduce.len()
        )));
    }
    context(&what, BasePresentation::new(ring, reduce, lift))
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T> {
    map.get(name)
        .ok_or_else(|| Error::InvalidInput(format!("unknown {kind} '{name}'")))
}

impl Problem {
    pub fn from_toml(src: &str, overrides: &Overrides) -> Result<Self> {
        let file: ProblemFile = toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map(|s| line_column(src, s.start)).unwrap_or((0, 0));
            Error::Parse {
                column,
                message: format!("line {line}: {}", e.message()),
            }
        })?;
        Self::resolve(file, overrides)
    }

    pub fn resolve(file: ProblemFile, overrides: &Overrides) -> Result<Self> {
        let order = overrides.order.unwrap_or(MonomialOrder::Grevlex);
        let mut limits = Limits::default();
        if let Some(n) = overrides.max_pairs {
            limits.max_pairs = n;
        }
        let r = build_ring(file.ring.p, &file.ring.vars, order, limits)?;
        let ring = presentation(&r, file.ring.quotient.as_deref(), file.ring.dimension, "ring")?;

        let mut divisors = BTreeMap::new();
        for (name, comps) in &file.divisors {
            divisors.insert(name.clone(), divisor(&r, name, comps)?);
        }
        let delta = match &file.pair.delta {
            Some(n) => lookup(&divisors, "divisor", n)?.clone(),
            None => QDivisor::empty(),
        };
        let div = match &file.pair.divisor {
            Some(n) => Some(lookup(&divisors, "divisor", n)?.clone()),
            None => None,
        };
        let rounding = overrides
            .rounding
            .or(file.pair.rounding.map(Rounding::from))
            .unwrap_or_default();
        let pair = PairSpec::new(ring.clone(), delta, rounding)?;

        let cover_ring = match &file.cover {
            Some(c) => {
                let cr = build_ring(file.ring.p, &c.vars, order, limits)?;
                Some(presentation(&cr, c.quotient.as_deref(), None, "cover")?)
            }
            None => None,
        };
        let mut bases = BTreeMap::new();
        for (name, b) in &file.bases {
            let on_cover = file.cover.as_ref().and_then(|c| c.cover_base.as_ref()) == Some(name);
            let ambient = match (&cover_ring, on_cover) {
                (Some(cr), true) => cr.ring().clone(),
                _ => r.clone(),
            };
            bases.insert(name.clone(), base(&ambient, name, b)?);
        }
        if let Some(b) = &file.task.base {
            lookup(&bases, "base", b)?;
        }

        let cover = match (&file.cover, cover_ring) {
            (Some(c), Some(cr)) => {
                let inclusion = c
                    .inclusion
                    .iter()
                    .map(|s| context("cover.inclusion", cr.parse(s)))
                    .collect::<Result<Vec<_>>>()?;
                let witness = context("cover.witness", cr.parse(&c.witness))?;
                let x = match &div {
                    Some(d) => d.as_cartier_root()?.0.clone(),
                    None => {
                        return Err(Error::InvalidInput(
                            "cover: pair.divisor must name the divisor D with mD = div(x)".into(),
                        ))
                    }
                };
                for name in c.base.iter().chain(c.cover_base.iter()) {
                    lookup(&bases, "base", name)?;
                }
                Some(CoverPresentation {
                    cover: cr,
                    inclusion,
                    index: c.index,
                    witness,
                    base_divisor: x,
                })
            }
            _ => None,
        };
        Ok(Self {
            file,
            ring,
            pair,
            divisor: div,
            bases,
            cover,
        })
    }

    pub fn require_divisor(&self) -> Result<&QDivisor> {
        self.divisor
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("this command needs pair.divisor".into()))
    }

    /// The base named by the task, or the only base when there is one.
    pub fn require_base(&self) -> Result<&BasePresentation> {
        if let Some(name) = &self.file.task.base {
            return lookup(&self.bases, "base", name);
        }
        let cover_bases: Vec<&String> = self.file.cover.iter().flat_map(|c| c.cover_base.iter()).collect();
        let mut own = self.bases.iter().filter(|(n, _)| !cover_bases.contains(n));
        match (own.next(), own.next()) {
            (Some((_, b)), None) => Ok(b),
            (None, _) => Err(Error::InvalidInput("this command needs a [bases.*] section".into())),
            _ => Err(Error::InvalidInput("several bases given: set task.base".into())),
        }
    }

    pub fn task_polynomial(&self, src: &str, what: &str) -> Result<Polynomial> {
        context(what, self.ring.parse(src))
    }

    pub fn expectation(&self, command: &str) -> Result<Option<(BigRational, BigRational)>> {
        let task = &self.file.task;
        let Some(target) = task.expect.get(command) else {
            return Ok(None);
        };
        let tol = match task.tolerance.get(command) {
            Some(t) => parse_rational(t)?,
            None => BigRational::new(BigInt::from(1), BigInt::from(100)),
        };
        if tol.is_negative() {
            return Err(Error::InvalidInput("task.tolerance must be non-negative".into()));
        }
        Ok(Some((parse_rational(target)?, tol)))
    }
}

fn line_column(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map(|i| offset - i).unwrap_or(offset + 1);
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A1: &str = r#"
[ring]
p = 5
vars = ["x", "y", "z"]
quotient = "x*y - z^2"

[divisors]
D = [{ poly = "x", num = 1, den = 2 }]

[pair]
divisor = "D"

[bases.D]
vars = ["y"]
reduce = ["0", "y", "0"]
lift = ["y"]
"#;

    #[test]
    fn resolves_names() {
        let p = Problem::from_toml(A1, &Overrides::default()).unwrap();
        assert_eq!(p.ring.dimension(), 2);
        assert!(p.divisor.is_some());
        assert!(p.require_base().is_ok());
        assert!(p.pair.delta.is_empty());
    }

    #[test]
    fn dangling_reference_is_an_error() {
        let src = A1.replace("divisor = \"D\"", "divisor = \"E\"");
        let err = Problem::from_toml(&src, &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("unknown divisor 'E'"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = Problem::from_toml("[ring]\np = 5\nvars = [\"x\"\n", &Overrides::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(err.to_string().contains("line"));
        let src = A1.replace("x*y - z^2", "x*y - z^^2");
        let err = Problem::from_toml(&src, &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("ring.quotient"), "{err}");
    }

    #[test]
    fn fractions_must_be_exact() {
        assert!(parse_rational("0.5").is_err());
        assert_eq!(parse_rational(" 3/4 ").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_grid("0,1/4,1").unwrap().len(), 3);
        let src = A1.replace("num = 1, den = 2", "num = 0.5, den = 1");
        assert!(Problem::from_toml(&src, &Overrides::default()).is_err());
    }

    #[test]
    fn line_columns() {
        assert_eq!(line_column("ab\ncd", 4), (2, 2));
        assert_eq!(line_column("ab", 0), (1, 1));
    }
}
