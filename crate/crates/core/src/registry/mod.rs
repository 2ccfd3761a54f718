//! Named identities, each with two independently computed sides.
//!
//! Every entry carries a parameter schema, a validity check, a tolerance and a
//! default grid. [`evaluate_identity`] runs one case, [`run_suite`] runs the
//! default (or overridden) grids of every entry matching a filter.

mod lattice;
mod modular;
mod params;
mod watson;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::config::EvalConfig;
use crate::driver::VerificationReport;
use crate::error::{KoshError, Result};
use crate::sequence::ShapeParam;

pub use params::{
    compare_params, fmt_complex_exact, fmt_exact, params_from_string, params_to_string, parse_complex, parse_real,
    ParamKind, ParamValue, Params,
};
pub(crate) use params::ParamsExt;

/// Short id and a one-line mathematical description of the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityId {
    pub id: &'static str,
    pub anchor: &'static str,
}

/// How the two sides of an entry are kept apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Independence {
    /// The sides call into different modules.
    DistinctModules,
    /// Same module, different representations (series against integral, sum against Bessel series).
    DistinctRepresentations,
    /// Both sides run one evaluator at parameters exchanged by `alpha beta = pi^2`.
    ModularPair,
    /// One side is an elementary closed form.
    ClosedForm,
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: Option<ParamValue>,
}

pub(crate) const fn param(name: &'static str, kind: ParamKind) -> ParamSpec {
    ParamSpec { name, kind, default: None }
}

type EvalFn = fn(&Params, &EvalConfig) -> Result<(C64, C64)>;
type CheckFn = fn(&Params) -> Result<()>;
type GridFn = fn() -> Vec<Params>;

pub struct IdentityEntry {
    pub id: IdentityId,
    pub params: &'static [ParamSpec],
    /// Validity region in words.
    pub domain: &'static str,
    pub independence: Independence,
    /// Routines behind each side; they share nothing beyond the special functions.
    pub lhs_route: &'static str,
    pub rhs_route: &'static str,
    pub tolerance: f64,
    pub(crate) check: CheckFn,
    pub(crate) eval: EvalFn,
    pub(crate) grid: GridFn,
}

impl fmt::Debug for IdentityEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityEntry")
            .field("id", &self.id)
            .field("domain", &self.domain)
            .field("independence", &self.independence)
            .field("tolerance", &self.tolerance)
            .finish()
    }
}

impl IdentityEntry {
    /// Default grid restricted to the validity region. Poles inside the region stay
    /// in the grid and are reported as skipped.
    pub fn default_grid(&self) -> Vec<Params> {
        (self.grid)().into_iter().filter(|p| !matches!((self.check)(p), Err(KoshError::Domain(_)))).collect()
    }

    pub fn spec(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|s| s.name == name)
    }

    /// Fills defaults, coerces kinds and rejects unknown or missing names.
    pub fn normalize(&self, params: &Params) -> Result<Params> {
        for key in params.keys() {
            if self.spec(key).is_none() {
                return Err(KoshError::InvalidParam(format!("{} has no parameter `{key}`", self.id.id)));
            }
        }
        let mut out = Params::new();
        for spec in self.params {
            let v = match params.get(spec.name).copied().or(spec.default) {
                Some(v) => coerce(spec, v)?,
                None => {
                    return Err(KoshError::InvalidParam(format!("{} needs parameter `{}`", self.id.id, spec.name)))
                }
            };
            out.insert(spec.name.to_string(), v);
        }
        Ok(out)
    }
}

fn coerce(spec: &ParamSpec, v: ParamValue) -> Result<ParamValue> {
    use ParamValue as V;
    let bad = || KoshError::InvalidParam(format!("`{}` expects a {:?} value, got {v}", spec.name, spec.kind));
    Ok(match (spec.kind, v) {
        (ParamKind::Real, V::Real(_)) | (ParamKind::Complex, V::Complex(_)) => v,
        (ParamKind::Shape, V::Shape(_)) | (ParamKind::Integer, V::Integer(_)) => v,
        (ParamKind::Real, V::Integer(n)) => V::Real(n as f64),
        (ParamKind::Complex, V::Real(x)) => V::Complex(C64::new(x, 0.0)),
        (ParamKind::Complex, V::Integer(n)) => V::Complex(C64::new(n as f64, 0.0)),
        (ParamKind::Shape, V::Real(x)) => V::Shape(real_shape(x).ok_or_else(bad)?),
        (ParamKind::Shape, V::Integer(n)) => V::Shape(real_shape(n as f64).ok_or_else(bad)?),
        (ParamKind::Integer, V::Real(x)) if x.fract() == 0.0 && x.abs() < 1e15 => V::Integer(x as i64),
        _ => return Err(bad()),
    })
}

fn real_shape(x: f64) -> Option<ShapeParam> {
    if x == 0.0 {
        Some(ShapeParam::Zero)
    } else if x == f64::INFINITY {
        Some(ShapeParam::Infinity)
    } else {
        ShapeParam::finite(x).ok()
    }
}

/// Outcome of one case.
#[derive(Debug, Clone, PartialEq)]
pub enum CaseStatus {
    Pass,
    /// Residual above tolerance (empty reason) or an evaluation failure.
    Fail(String),
    /// Outside the validity region, at a pole, or on a strip boundary.
    Skipped(String),
}

impl CaseStatus {
    pub fn is_pass(&self) -> bool {
        matches!(self, CaseStatus::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, CaseStatus::Fail(_))
    }
}

impl fmt::Display for CaseStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseStatus::Pass => f.write_str("pass"),
            CaseStatus::Fail(r) if r.is_empty() => f.write_str("fail"),
            CaseStatus::Fail(r) => write!(f, "fail: {r}"),
            CaseStatus::Skipped(r) => write!(f, "skipped: {r}"),
        }
    }
}

impl FromStr for CaseStatus {
    type Err = KoshError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "pass" {
            Ok(CaseStatus::Pass)
        } else if s == "fail" {
            Ok(CaseStatus::Fail(String::new()))
        } else if let Some(r) = s.strip_prefix("fail: ") {
            Ok(CaseStatus::Fail(r.to_string()))
        } else if let Some(r) = s.strip_prefix("skipped: ") {
            Ok(CaseStatus::Skipped(r.to_string()))
        } else if s == "skipped" {
            Ok(CaseStatus::Skipped(String::new()))
        } else {
            Err(KoshError::Format(format!("unknown status `{s}`")))
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdentityCase {
    pub id: String,
    pub params: Params,
    pub lhs: C64,
    pub rhs: C64,
    /// `|lhs - rhs|/(1 + |lhs| + |rhs|)`.
    pub residual: f64,
    pub status: CaseStatus,
}

/// Bitwise on the numeric fields, so skipped cases (NaN values) compare equal to themselves.
impl PartialEq for IdentityCase {
    fn eq(&self, other: &Self) -> bool {
        let bits = |z: C64| (z.re.to_bits(), z.im.to_bits());
        self.id == other.id
            && self.params == other.params
            && bits(self.lhs) == bits(other.lhs)
            && bits(self.rhs) == bits(other.rhs)
            && self.residual.to_bits() == other.residual.to_bits()
            && self.status == other.status
    }
}

pub fn residual(lhs: C64, rhs: C64) -> f64 {
    (lhs - rhs).norm() / (1.0 + lhs.norm() + rhs.norm())
}

/// All registered identities in natural id order.
pub fn entries() -> &'static [IdentityEntry] {
    static TABLE: OnceLock<Vec<IdentityEntry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = watson::entries();
        v.extend(lattice::entries());
        v.extend(modular::entries());
        v.sort_by(|a, b| natural_cmp(a.id.id, b.id.id));
        v
    })
}

pub fn find_entry(id: &str) -> Result<&'static IdentityEntry> {
    entries().iter().find(|e| e.id.id == id).ok_or_else(|| KoshError::UnknownId(id.to_string()))
}

/// `R2 < R10 < W1`: letters first, then the number.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, u64) {
        let i = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        (&s[..i], s[i..].parse().unwrap_or(0))
    }
    let order = |c: &str| "RWFELC".find(c).unwrap_or(usize::MAX);
    let (pa, na) = split(a);
    let (pb, nb) = split(b);
    order(pa).cmp(&order(pb)).then(pa.cmp(pb)).then(na.cmp(&nb)).then(a.cmp(b))
}

/// Evaluates one case. Unknown ids and malformed parameters are errors; evaluation
/// problems end up in the case status.
pub fn evaluate_identity(id: &str, params: &Params, cfg: &EvalConfig) -> Result<IdentityCase> {
    let entry = find_entry(id)?;
    cfg.validate()?;
    let params = entry.normalize(params)?;
    Ok(run_case(entry, params, cfg))
}

fn run_case(entry: &IdentityEntry, params: Params, cfg: &EvalConfig) -> IdentityCase {
    let nan = C64::new(f64::NAN, f64::NAN);
    let outcome = (entry.check)(&params).and_then(|_| (entry.eval)(&params, cfg));
    let (lhs, rhs, residual, status) = match outcome {
        Ok((l, r)) => {
            let res = residual(l, r);
            let status = if !(l.re.is_finite() && l.im.is_finite() && r.re.is_finite() && r.im.is_finite()) {
                CaseStatus::Fail("non-finite value".into())
            } else if res < entry.tolerance {
                CaseStatus::Pass
            } else {
                CaseStatus::Fail(String::new())
            };
            (l, r, res, status)
        }
        Err(e @ (KoshError::Domain(_) | KoshError::Pole(_) | KoshError::Strip(_))) => {
            (nan, nan, f64::NAN, CaseStatus::Skipped(skip_reason(&e)))
        }
        Err(e) => (nan, nan, f64::NAN, CaseStatus::Fail(e.to_string())),
    };
    IdentityCase { id: entry.id.id.to_string(), params, lhs, rhs, residual, status }
}

fn skip_reason(e: &KoshError) -> String {
    match e {
        KoshError::Domain(m) | KoshError::Pole(m) | KoshError::Strip(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Replacement values per parameter name, as text (parsed against each entry's schema).
pub type GridOverride = BTreeMap<String, Vec<String>>;

/// Cases of `entry`: the default grid, with every overridden parameter replaced by
/// each of its override values (cartesian), deduplicated and sorted.
pub fn expand_grid(entry: &IdentityEntry, overrides: Option<&GridOverride>) -> Result<Vec<Params>> {
    let mut points = entry.default_grid();
    let Some(ov) = overrides else {
        return Ok(points);
    };
    for (key, texts) in ov {
        let Some(spec) = entry.spec(key) else {
            continue;
        };
        let values = texts.iter().map(|t| ParamValue::parse(spec.kind, t)).collect::<Result<Vec<_>>>()?;
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.insert(key.clone(), *v);
                    q
                })
            })
            .collect();
    }
    points.sort_by(compare_params);
    points.dedup();
    Ok(points)
}

/// `*` and `?` wildcards; commas separate alternatives.
pub fn matches_filter(filter: &str, id: &str) -> bool {
    fn glob(p: &[u8], s: &[u8]) -> bool {
        match (p.first(), s.first()) {
            (None, None) => true,
            (Some(b'*'), _) => glob(&p[1..], s) || (!s.is_empty() && glob(p, &s[1..])),
            (Some(b'?'), Some(_)) => glob(&p[1..], &s[1..]),
            (Some(a), Some(b)) if a == b => glob(&p[1..], &s[1..]),
            _ => false,
        }
    }
    filter.split(',').map(str::trim).filter(|f| !f.is_empty()).any(|f| glob(f.as_bytes(), id.as_bytes()))
}

/// Runs every entry whose id matches `filter` over its grid, in parallel, with
/// results ordered by id and parameters.
pub fn run_suite(filter: &str, overrides: Option<&GridOverride>, cfg: &EvalConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for entry in entries().iter().filter(|e| matches_filter(filter, e.id.id)) {
        for p in expand_grid(entry, overrides)? {
            jobs.push((entry, entry.normalize(&p)?));
        }
    }
    let cases: Vec<IdentityCase> = jobs.into_par_iter().map(|(e, p)| run_case(e, p, cfg)).collect();
    Ok(VerificationReport::new(cases, cfg))
}

/// Cartesian grid builder used by the entry tables.
#[derive(Clone)]
pub(crate) struct Grid(Vec<Params>);

pub(crate) fn grid() -> Grid {
    Grid(vec![Params::new()])
}

impl Grid {
    pub fn with(self, name: &str, values: impl IntoIterator<Item = ParamValue>) -> Grid {
        let values: Vec<ParamValue> = values.into_iter().collect();
        Grid(
            self.0
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.insert(name.to_string(), *v);
                        q
                    })
                })
                .collect(),
        )
    }

    pub fn reals(self, name: &str, xs: &[f64]) -> Grid {
        self.with(name, xs.iter().map(|&x| ParamValue::Real(x)))
    }

    pub fn complexes(self, name: &str, zs: &[C64]) -> Grid {
        self.with(name, zs.iter().map(|&z| ParamValue::Complex(z)))
    }

    pub fn shapes(self, name: &str, ps: &[ShapeParam]) -> Grid {
        self.with(name, ps.iter().map(|&p| ParamValue::Shape(p)))
    }

    pub fn ints(self, name: &str, ns: &[i64]) -> Grid {
        self.with(name, ns.iter().map(|&n| ParamValue::Integer(n)))
    }

    /// Union with another grid.
    pub fn and(mut self, other: Grid) -> Grid {
        self.0.extend(other.0);
        self
    }

    pub fn build(self) -> Vec<Params> {
        self.0
    }
}

pub(crate) fn fin(p: f64) -> ShapeParam {
    ShapeParam::Finite(p)
}

pub(crate) const INF: ShapeParam = ShapeParam::Infinity;
pub(crate) const ZERO: ShapeParam = ShapeParam::Zero;

pub(crate) fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub(crate) fn ci(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Standard complex `s` grid.
pub(crate) fn s_grid() -> Vec<C64> {
    vec![c(0.75), c(1.5), c(2.5), ci(0.6, 0.3), ci(2.0, 1.0)]
}

/// `s` grid of the modular family.
pub(crate) fn s_grid_modular() -> Vec<C64> {
    vec![c(-0.5), c(0.0), ci(-0.5, 0.5), ci(0.0, 0.5), ci(0.6, 0.3), c(0.75)]
}

pub(crate) fn finite_shapes() -> Vec<ShapeParam> {
    vec![fin(0.5), fin(1.0), fin(2.0)]
}

pub(crate) fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(KoshError::Domain(msg()))
    }
}

pub(crate) fn positive(p: &Params, name: &str) -> Result<f64> {
    let x = p.real(name)?;
    require(x > 0.0 && x.is_finite(), || format!("{name} must be positive, got {x}"))?;
    Ok(x)
}

/// `Gamma(+-s/2)` has a pole: `s` an even integer.
pub(crate) fn gamma_pole(s: C64) -> Result<()> {
    if s.im.abs() < 1e-12 && (s.re / 2.0 - (s.re / 2.0).round()).abs() < 1e-12 {
        Err(KoshError::Pole("gamma pole".into()))
    } else {
        Ok(())
    }
}
