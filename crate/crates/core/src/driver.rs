//! Verification reports, their JSON and CSV forms, and the `kosh` command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Number, Value};
use sha2::{Digest, Sha256};

use crate::config::EvalConfig;
use crate::epstein::{self, Epstein2Route, EpsteinParams};
use crate::error::{KoshError, Result};
use crate::kernels;
use crate::koshzeta;
use crate::registry::{
    self, fmt_complex_exact, fmt_exact, params_from_string, params_to_string, parse_complex, parse_real, CaseStatus,
    GridOverride, IdentityCase, ParamValue, Params,
};
use crate::sequence::{self, ShapeParam};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteSummary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    /// Largest finite residual per identity; ids whose cases were all skipped are absent.
    pub worst_residual_by_id: BTreeMap<String, f64>,
}

impl SuiteSummary {
    pub fn of(cases: &[IdentityCase]) -> Self {
        let mut s = SuiteSummary::default();
        for case in cases {
            match case.status {
                CaseStatus::Pass => s.pass += 1,
                CaseStatus::Fail(_) => s.fail += 1,
                CaseStatus::Skipped(_) => s.skipped += 1,
            }
            if case.residual.is_finite() {
                let w = s.worst_residual_by_id.entry(case.id.clone()).or_insert(case.residual);
                *w = w.max(case.residual);
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub cases: Vec<IdentityCase>,
    /// SHA-256 of the JSON form of the [`EvalConfig`] used.
    pub config_fingerprint: String,
    pub summary: SuiteSummary,
    pub tool_version: String,
}

impl VerificationReport {
    pub fn new(cases: Vec<IdentityCase>, cfg: &EvalConfig) -> Self {
        VerificationReport {
            summary: SuiteSummary::of(&cases),
            cases,
            config_fingerprint: config_fingerprint(cfg),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    /// Regrades every evaluated case against `tol` instead of the registry tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        for case in &mut self.cases {
            let graded = matches!(&case.status, CaseStatus::Pass) || matches!(&case.status, CaseStatus::Fail(r) if r.is_empty());
            if graded {
                case.status = if case.residual < tol { CaseStatus::Pass } else { CaseStatus::Fail(String::new()) };
            }
        }
        self.summary = SuiteSummary::of(&self.cases);
        self
    }
}

pub fn config_fingerprint(cfg: &EvalConfig) -> String {
    let text = serde_json::to_string(cfg).expect("config serializes");
    Sha256::digest(text.as_bytes()).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = KoshError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(KoshError::InvalidParam(format!("unknown report format `{s}`"))),
        }
    }
}

pub fn write_report(report: &VerificationReport, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let text = match format {
        ReportFormat::Json => report_to_json(report),
        ReportFormat::Csv => report_to_csv(report),
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_report(path: impl AsRef<Path>, format: ReportFormat) -> Result<VerificationReport> {
    let text = std::fs::read_to_string(path)?;
    match format {
        ReportFormat::Json => report_from_json(&text),
        ReportFormat::Csv => Err(KoshError::Format("a CSV file holds only cases; use cases_from_csv".into())),
    }
}

// ---------- JSON ----------

fn num(x: f64) -> Value {
    if x.is_nan() {
        Value::Null
    } else if x.is_infinite() {
        Value::String(fmt_exact(x))
    } else {
        Value::Number(serde_json::from_str::<Number>(&fmt_exact(x)).expect("exponent form is valid JSON"))
    }
}

fn complex_json(z: C64) -> Value {
    json!({"re": num(z.re), "im": num(z.im)})
}

fn param_json(v: &ParamValue) -> Value {
    match v {
        ParamValue::Real(x) => num(*x),
        ParamValue::Complex(z) => complex_json(*z),
        ParamValue::Shape(s) => Value::String(s.to_string()),
        ParamValue::Integer(n) => Value::from(*n),
    }
}

pub fn report_to_json(report: &VerificationReport) -> String {
    let cases: Vec<Value> = report
        .cases
        .iter()
        .map(|c| {
            let params: Map<String, Value> = c.params.iter().map(|(k, v)| (k.clone(), param_json(v))).collect();
            json!({
                "id": c.id,
                "params": params,
                "lhs": complex_json(c.lhs),
                "rhs": complex_json(c.rhs),
                "residual": num(c.residual),
                "status": c.status.to_string(),
            })
        })
        .collect();
    let worst: Map<String, Value> =
        report.summary.worst_residual_by_id.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
    let doc = json!({
        "version": report.tool_version,
        "config_fingerprint": report.config_fingerprint,
        "summary": {
            "pass": report.summary.pass,
            "fail": report.summary.fail,
            "skipped": report.summary.skipped,
            "worst_residual_by_id": worst,
        },
        "cases": cases,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}

fn bad(what: &str) -> KoshError {
    KoshError::Format(format!("malformed `{what}`"))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| KoshError::Format(format!("missing `{key}`")))
}

fn read_num(v: &Value, what: &str) -> Result<f64> {
    match v {
        Value::Null => Ok(f64::NAN),
        Value::Number(n) => n.as_f64().ok_or_else(|| bad(what)),
        Value::String(s) => parse_real(s).map_err(|_| bad(what)),
        _ => Err(bad(what)),
    }
}

fn read_count(v: &Value, key: &str) -> Result<usize> {
    get(v, key)?.as_u64().map(|n| n as usize).ok_or_else(|| bad(key))
}

fn read_str(v: &Value, key: &str) -> Result<String> {
    get(v, key)?.as_str().map(str::to_string).ok_or_else(|| bad(key))
}

fn read_complex(v: &Value, what: &str) -> Result<C64> {
    Ok(C64::new(read_num(get(v, "re")?, what)?, read_num(get(v, "im")?, what)?))
}

fn read_param(v: &Value, name: &str) -> Result<ParamValue> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(ParamValue::Integer(n.as_i64().expect("checked"))),
        Value::Number(_) | Value::Null => Ok(ParamValue::Real(read_num(v, name)?)),
        Value::Object(_) => Ok(ParamValue::Complex(read_complex(v, name)?)),
        Value::String(s) => Ok(ParamValue::Shape(s.parse()?)),
        _ => Err(bad(name)),
    }
}

pub fn report_from_json(text: &str) -> Result<VerificationReport> {
    let doc: Value = serde_json::from_str(text).map_err(|e| KoshError::Format(e.to_string()))?;
    let summary = get(&doc, "summary")?;
    let worst = get(summary, "worst_residual_by_id")?.as_object().ok_or_else(|| bad("worst_residual_by_id"))?;
    let summary = SuiteSummary {
        pass: read_count(summary, "pass")?,
        fail: read_count(summary, "fail")?,
        skipped: read_count(summary, "skipped")?,
        worst_residual_by_id: worst
            .iter()
            .map(|(k, v)| Ok((k.clone(), read_num(v, k)?)))
            .collect::<Result<_>>()?,
    };
    let cases = get(&doc, "cases")?
        .as_array()
        .ok_or_else(|| bad("cases"))?
        .iter()
        .map(|c| {
            let params = get(c, "params")?
                .as_object()
                .ok_or_else(|| bad("params"))?
                .iter()
                .map(|(k, v)| Ok((k.clone(), read_param(v, k)?)))
                .collect::<Result<Params>>()?;
            Ok(IdentityCase {
                id: read_str(c, "id")?,
                params,
                lhs: read_complex(get(c, "lhs")?, "lhs")?,
                rhs: read_complex(get(c, "rhs")?, "rhs")?,
                residual: read_num(get(c, "residual")?, "residual")?,
                status: read_str(c, "status")?.parse()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        cases,
        config_fingerprint: read_str(&doc, "config_fingerprint")?,
        summary,
        tool_version: read_str(&doc, "version")?,
    })
}

// ---------- CSV ----------

pub const CSV_HEADER: [&str; 6] = ["id", "params", "lhs", "rhs", "residual", "status"];

fn csv_field(out: &mut String, field: &str) {
    if field.contains([',', '"', '\n', '\r']) {
        out.push('"');
        out.push_str(&field.replace('"', "\"\""));
        out.push('"');
    } else {
        out.push_str(field);
    }
}

fn csv_row(out: &mut String, fields: &[&str]) {
    for (i, f) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        csv_field(out, f);
    }
    out.push('\n');
}

/// Header plus one row per case; parameters use the `a=1;b=2` form.
pub fn report_to_csv(report: &VerificationReport) -> String {
    let mut out = String::new();
    csv_row(&mut out, &CSV_HEADER);
    for c in &report.cases {
        let (params, lhs, rhs) = (params_to_string(&c.params), fmt_complex_exact(c.lhs), fmt_complex_exact(c.rhs));
        csv_row(&mut out, &[&c.id, &params, &lhs, &rhs, &fmt_exact(c.residual), &c.status.to_string()]);
    }
    out
}

fn parse_csv(text: &str) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::new();
    let mut row = Vec::new();
    let mut field = String::new();
    let mut chars = text.chars().peekable();
    let mut quoted = false;
    let mut dirty = false;
    while let Some(ch) = chars.next() {
        if quoted {
            match ch {
                '"' if chars.peek() == Some(&'"') => {
                    chars.next();
                    field.push('"');
                }
                '"' => quoted = false,
                _ => field.push(ch),
            }
            continue;
        }
        match ch {
            '"' => {
                quoted = true;
                dirty = true;
            }
            ',' => {
                row.push(std::mem::take(&mut field));
                dirty = true;
            }
            '\r' => {}
            '\n' => {
                row.push(std::mem::take(&mut field));
                rows.push(std::mem::take(&mut row));
                dirty = false;
            }
            _ => {
                field.push(ch);
                dirty = true;
            }
        }
    }
    if quoted {
        return Err(KoshError::Format("unterminated quoted CSV field".into()));
    }
    if dirty {
        row.push(field);
        rows.push(row);
    }
    Ok(rows)
}

/// Inverse of [`report_to_csv`]; parameter kinds come from the registry entry of each row.
pub fn cases_from_csv(text: &str) -> Result<Vec<IdentityCase>> {
    let rows = parse_csv(text)?;
    let Some((header, body)) = rows.split_first() else {
        return Err(KoshError::Format("empty CSV".into()));
    };
    if header.iter().map(String::as_str).ne(CSV_HEADER) {
        return Err(KoshError::Format(format!("unexpected CSV header {header:?}")));
    }
    body.iter()
        .map(|r| {
            if r.len() != CSV_HEADER.len() {
                return Err(KoshError::Format(format!("CSV row has {} fields", r.len())));
            }
            let entry = registry::find_entry(&r[0])?;
            Ok(IdentityCase {
                id: r[0].clone(),
                params: params_from_string(&r[1], |k| entry.spec(k).map(|s| s.kind))?,
                lhs: parse_complex(&r[2]).map_err(|_| bad("lhs"))?,
                rhs: parse_complex(&r[3]).map_err(|_| bad("rhs"))?,
                residual: parse_real(&r[4]).map_err(|_| bad("residual"))?,
                status: r[5].parse()?,
            })
        })
        .collect()
}

// ---------- command line ----------

#[derive(Parser, Debug)]
#[command(name = "kosh", version, about = "Koshliakov zeta functions and identity verification")]
struct Cli {
    /// File of `key=value` lines supplying defaults for flags and evaluation settings.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The n-th root of p sin(pi y) + y cos(pi y) = 0.
    Lambda(Flags),
    /// zeta_p(s).
    Zeta(Flags),
    /// eta_p(s).
    Eta(Flags),
    /// The coefficient (s, nu n)_n with nu = 2 pi p.
    Coeff(Flags),
    /// B_p(x) and G_p(x); with --nu also K_{nu,p}(x), with --s the Watson series at (s, x).
    Kernel(Flags),
    /// Both Epstein analogues at s, or their Laurent constants and central values.
    Epstein(Flags),
    /// One identity at the given parameters.
    Verify(Flags),
    /// Every identity matching --filter over its grid.
    Suite(Flags),
    /// C1, C2, gamma_p and related constants of the shape p.
    Constants(Flags),
}

#[derive(Args, Debug, Clone, Default)]
struct Flags {
    /// Shape parameter: a positive number, `0` or `inf`.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// Second shape parameter, as for --p.
    #[arg(long, allow_hyphen_values = true)]
    pprime: Option<String>,
    /// Complex argument `a+bi`.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    variant: Option<String>,
    /// Index of a root or coefficient, starting at 1.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// Truncation order of an expansion.
    #[arg(long = "N", value_name = "N", allow_hyphen_values = true)]
    big_n: Option<String>,
    /// Tolerance replacing the per-identity default.
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<String>,
    /// Identity id, such as W8 or L11.
    #[arg(long)]
    id: Option<String>,
    /// Id pattern with `*` and `?`; commas separate alternatives.
    #[arg(long)]
    filter: Option<String>,
    /// `key=v1,v2,...`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    grid: Vec<String>,
    /// Report file; the format follows the extension unless --format is given.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json, csv or text.
    #[arg(long)]
    format: Option<String>,
}

/// Identity parameters settable from the command line, with their flag names.
const PARAM_FLAGS: [(&str, &str); 9] = [
    ("p", "--p"),
    ("pprime", "--pprime"),
    ("s", "--s"),
    ("x", "--x"),
    ("c", "--c"),
    ("alpha", "--alpha"),
    ("nu", "--nu"),
    ("variant", "--variant"),
    ("N", "--N"),
];

enum CliError {
    Usage(String),
    Run(KoshError),
}

impl From<KoshError> for CliError {
    fn from(e: KoshError) -> Self {
        CliError::Run(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {msg}"))
}

impl Flags {
    fn param_text(&self, name: &str) -> Option<&String> {
        match name {
            "p" => self.p.as_ref(),
            "pprime" => self.pprime.as_ref(),
            "s" => self.s.as_ref(),
            "x" => self.x.as_ref(),
            "c" => self.c.as_ref(),
            "alpha" => self.alpha.as_ref(),
            "nu" => self.nu.as_ref(),
            "variant" => self.variant.as_ref(),
            "N" => self.big_n.as_ref(),
            _ => None,
        }
    }

    /// Fills unset flags from a config file; returns the keys that were not flags.
    fn fill_from(&mut self, file: &BTreeMap<String, Vec<String>>) -> BTreeMap<String, String> {
        let mut rest = BTreeMap::new();
        let grid_given = !self.grid.is_empty();
        for (key, values) in file {
            let last = values.last().cloned();
            let slot = match key.as_str() {
                "p" => &mut self.p,
                "pprime" => &mut self.pprime,
                "s" => &mut self.s,
                "x" => &mut self.x,
                "c" => &mut self.c,
                "alpha" => &mut self.alpha,
                "nu" => &mut self.nu,
                "variant" => &mut self.variant,
                "n" => &mut self.n,
                "N" => &mut self.big_n,
                "tol" => &mut self.tol,
                "id" => &mut self.id,
                "filter" => &mut self.filter,
                "format" => &mut self.format,
                "out" => {
                    if self.out.is_none() {
                        self.out = last.map(PathBuf::from);
                    }
                    continue;
                }
                "grid" => {
                    if !grid_given {
                        self.grid.extend(values.iter().cloned());
                    }
                    continue;
                }
                _ => {
                    if let Some(v) = last {
                        rest.insert(key.clone(), v);
                    }
                    continue;
                }
            };
            if slot.is_none() {
                *slot = last;
            }
        }
        rest
    }

    fn shape(&self, flag: &str, text: Option<&String>) -> CliResult<ShapeParam> {
        let t = text.ok_or_else(|| usage(flag, "required"))?;
        t.parse().map_err(|e| usage(flag, e))
    }

    fn real(&self, flag: &str, text: Option<&String>) -> CliResult<f64> {
        let t = text.ok_or_else(|| usage(flag, "required"))?;
        parse_real(t).map_err(|e| usage(flag, e))
    }

    fn complex(&self, flag: &str, text: Option<&String>) -> CliResult<C64> {
        let t = text.ok_or_else(|| usage(flag, "required"))?;
        parse_complex(t).map_err(|e| usage(flag, e))
    }

    fn index(&self) -> CliResult<usize> {
        let t = self.n.as_ref().ok_or_else(|| usage("--n", "required"))?;
        match t.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(usage("--n", format!("expected a positive integer, got `{t}`"))),
        }
    }

    fn tolerance(&self) -> CliResult<Option<f64>> {
        match &self.tol {
            None => Ok(None),
            Some(t) => match parse_real(t) {
                Ok(v) if v > 0.0 => Ok(Some(v)),
                _ => Err(usage("--tol", format!("expected a positive number, got `{t}`"))),
            },
        }
    }

    fn grid_override(&self) -> CliResult<GridOverride> {
        let mut out = GridOverride::new();
        for item in &self.grid {
            let (k, vs) = item.split_once('=').ok_or_else(|| usage("--grid", format!("expected key=v1,v2, got `{item}`")))?;
            let values: Vec<String> = vs.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
            if values.is_empty() {
                return Err(usage("--grid", format!("no values for `{k}`")));
            }
            out.entry(k.trim().to_string()).or_default().extend(values);
        }
        Ok(out)
    }

    fn output_format(&self) -> CliResult<Option<ReportFormat>> {
        let guess = |p: &Path| match p.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
            _ => ReportFormat::Json,
        };
        match self.format.as_deref() {
            None => Ok(self.out.as_deref().map(guess)),
            Some("text") if self.out.is_none() => Ok(None),
            Some("text") => Err(usage("--format", "text output cannot be written with --out")),
            Some(f) => f.parse().map(Some).map_err(|e| usage("--format", e)),
        }
    }
}

fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, Vec<String>>> {
    let text = std::fs::read_to_string(path).map_err(|e| usage("--config", format!("{}: {e}", path.display())))?;
    let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage("--config", format!("line {}: expected key=value", i + 1)))?;
        out.entry(k.trim().to_string()).or_default().push(v.trim().to_string());
    }
    Ok(out)
}

fn eval_config(settings: &BTreeMap<String, String>) -> CliResult<EvalConfig> {
    let mut cfg = EvalConfig::default();
    for (key, value) in settings {
        let bad = |e: String| usage("--config", format!("`{key}`: {e}"));
        let int = || value.parse::<usize>().map_err(|e| bad(e.to_string()));
        let real = || parse_real(value).map_err(|e| bad(e.to_string()));
        match key.as_str() {
            "series_n" => cfg.series_n = int()?,
            "gregory_k" => cfg.gregory_k = int()?,
            "richardson_stages" => cfg.richardson_stages = int()?,
            "pole_eps" => cfg.pole_eps = real()?,
            "rel_tol" => cfg.quad.rel_tol = real()?,
            "abs_tol" => cfg.quad.abs_tol = real()?,
            "max_depth" => cfg.quad.max_depth = int()? as u32,
            "oscillatory_segments" => cfg.quad.oscillatory_segments = int()?,
            _ => return Err(usage("--config", format!("unknown key `{key}`"))),
        }
    }
    cfg.validate().map_err(|e| usage("--config", e))?;
    Ok(cfg)
}

/// Significant-digit rendering: plain decimals for moderate magnitudes, exponent form otherwise.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        let d = digits - 1;
        return format!("{x:.d$}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let decimals = (digits as i32 - 1 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        let d = digits - 1;
        format!("{x:.d$e}")
    }
}

fn fmt_c15(z: C64) -> String {
    if z.im == 0.0 {
        return fmt_sig(z.re, 15);
    }
    let im = fmt_sig(z.im.abs(), 15);
    format!("{}{}{im}i", fmt_sig(z.re, 15), if z.im < 0.0 { "-" } else { "+" })
}

fn print_report(report: &VerificationReport) {
    for c in &report.cases {
        println!(
            "{} [{}] lhs={} rhs={} residual={} {}",
            c.id,
            c.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "),
            fmt_c15(c.lhs),
            fmt_c15(c.rhs),
            fmt_sig(c.residual, 3),
            c.status
        );
    }
    let s = &report.summary;
    println!("{} cases: {} pass, {} fail, {} skipped", report.cases.len(), s.pass, s.fail, s.skipped);
}

fn emit_report(report: &VerificationReport, flags: &Flags) -> CliResult<()> {
    let format = flags.output_format()?;
    match (&flags.out, format) {
        (Some(path), Some(f)) => {
            write_report(report, path, f)?;
            let s = &report.summary;
            println!("{} cases: {} pass, {} fail, {} skipped; written to {}", report.cases.len(), s.pass, s.fail, s.skipped, path.display());
        }
        (None, Some(ReportFormat::Json)) => print!("{}", report_to_json(report)),
        (None, Some(ReportFormat::Csv)) => print!("{}", report_to_csv(report)),
        _ => print_report(report),
    }
    Ok(())
}

fn verify_params(flags: &Flags, id: &str) -> CliResult<Params> {
    let entry = registry::find_entry(id).map_err(|e| usage("--id", e))?;
    let mut params = Params::new();
    for (name, flag) in PARAM_FLAGS {
        let Some(text) = flags.param_text(name) else { continue };
        let spec = entry.spec(name).ok_or_else(|| usage(flag, format!("{id} takes no parameter `{name}`")))?;
        params.insert(name.to_string(), ParamValue::parse(spec.kind, text).map_err(|e| usage(flag, e))?);
    }
    Ok(params)
}

fn print_labelled(rows: &[(&str, String)]) {
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }
}

/// Exit status: 0 when no case failed and nothing went wrong, 1 on a failed case or
/// evaluation error, 2 on a usage error.
pub fn cli_main(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run(cli: Cli) -> CliResult<i32> {
    let file = match &cli.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    let (mut flags, kind) = match cli.command {
        Command::Lambda(f) => (f, "lambda"),
        Command::Zeta(f) => (f, "zeta"),
        Command::Eta(f) => (f, "eta"),
        Command::Coeff(f) => (f, "coeff"),
        Command::Kernel(f) => (f, "kernel"),
        Command::Epstein(f) => (f, "epstein"),
        Command::Verify(f) => (f, "verify"),
        Command::Suite(f) => (f, "suite"),
        Command::Constants(f) => (f, "constants"),
    };
    let settings = flags.fill_from(&file);
    let cfg = eval_config(&settings)?;
    let f = &flags;
    match kind {
        "lambda" => {
            let shape = f.shape("--p", f.p.as_ref())?;
            let n = f.index()?;
            println!("{}", fmt_sig(sequence::shape_lambda(shape, n, 1e-15)?, 15));
        }
        "zeta" => {
            let shape = f.shape("--p", f.p.as_ref())?;
            let s = f.complex("--s", f.s.as_ref())?;
            println!("{}", fmt_c15(koshzeta::zeta_p_any(shape, s, &cfg)?.value));
        }
        "eta" => {
            let shape = f.shape("--p", f.p.as_ref())?;
            let s = f.complex("--s", f.s.as_ref())?;
            println!("{}", fmt_c15(koshzeta::eta_p_any(shape, s, &cfg)?));
        }
        "coeff" => {
            let p = match f.shape("--p", f.p.as_ref())? {
                ShapeParam::Finite(p) => p,
                _ => return Err(usage("--p", "the coefficient needs a finite positive p")),
            };
            let s = f.complex("--s", f.s.as_ref())?;
            let n = f.index()?;
            let nu = 2.0 * std::f64::consts::PI * p;
            println!("{}", fmt_c15(koshzeta::kosh_coeff(s, n, nu, &cfg.quad)?));
        }
        "kernel" => {
            let shape = f.shape("--p", f.p.as_ref())?;
            let x = f.real("--x", f.x.as_ref())?;
            if !(x > 0.0) {
                return Err(usage("--x", "must be positive"));
            }
            let mut rows = vec![("B", fmt_sig(kernels::b_kernel(shape, x), 15)), ("G", fmt_sig(kernels::g_kernel(shape, x)?, 15))];
            if f.nu.is_some() {
                let nu = f.complex("--nu", f.nu.as_ref())?;
                rows.push(("K", fmt_c15(kernels::k_kernel(shape, nu, x, &cfg)?)));
            }
            if f.s.is_some() {
                let s = f.complex("--s", f.s.as_ref())?;
                rows.push(("phi", fmt_c15(kernels::watson_series_any(shape, s, x, &cfg)?.value)));
            }
            print_labelled(&rows);
        }
        "epstein" => {
            let p = f.shape("--p", f.p.as_ref())?;
            let pp = f.shape("--pprime", f.pprime.as_ref())?;
            let c = f.real("--c", f.c.as_ref())?;
            let params = EpsteinParams::new(p, pp, c).map_err(|e| usage("--c", e))?;
            let rows = match &f.s {
                Some(t) => {
                    let s = f.complex("--s", Some(t))?;
                    vec![
                        ("Z1", fmt_c15(epstein::epstein1(&params, s, &cfg)?)),
                        ("Z2", fmt_c15(epstein::epstein2(&params, s, &cfg, Epstein2Route::SelbergChowla)?)),
                    ]
                }
                None => vec![
                    ("Z1 constant at s=1", fmt_c15(epstein::kronecker1_constant(&params, &cfg)?)),
                    ("Z1(1/2)", fmt_c15(epstein::epstein1_central(&params, &cfg)?)),
                    ("Z2 constant at s=1", fmt_c15(epstein::kronecker2_constant(&params, &cfg)?)),
                    ("Z2(1/2)", fmt_c15(epstein::epstein2_central(&params, &cfg)?)),
                ],
            };
            print_labelled(&rows);
        }
        "constants" => {
            let shape = f.shape("--p", f.p.as_ref())?;
            let k = koshzeta::constants(shape, &cfg)?;
            print_labelled(&[
                ("kappa", fmt_sig(shape.kappa(), 15)),
                ("C1", fmt_sig(k.c1, 15)),
                ("C2", fmt_sig(k.c2, 15)),
                ("gamma_p", fmt_sig(k.gamma_p, 15)),
                ("Q(0)", fmt_sig(k.q0, 15)),
                ("zeta_p(2)", fmt_sig(koshzeta::zeta_p_two_closed_form(shape), 15)),
            ]);
        }
        "verify" => {
            let id = f.id.as_deref().ok_or_else(|| usage("--id", "required"))?;
            let params = verify_params(f, id)?;
            let case = registry::evaluate_identity(id, &params, &cfg).map_err(|e| match e {
                KoshError::InvalidParam(m) => usage("verify", m),
                other => CliError::Run(other),
            })?;
            let mut report = VerificationReport::new(vec![case], &cfg);
            if let Some(tol) = f.tolerance()? {
                report = report.with_tolerance(tol);
            }
            emit_report(&report, f)?;
            return Ok(i32::from(report.has_failures()));
        }
        "suite" => {
            let filter = f.filter.clone().unwrap_or_else(|| "*".to_string());
            if !registry::entries().iter().any(|e| registry::matches_filter(&filter, e.id.id)) {
                return Err(usage("--filter", format!("`{filter}` matches no identity")));
            }
            let grid = f.grid_override()?;
            let tol = f.tolerance()?;
            let mut report = registry::run_suite(&filter, Some(&grid), &cfg).map_err(|e| match e {
                KoshError::InvalidParam(m) => usage("--grid", m),
                other => CliError::Run(other),
            })?;
            if let Some(tol) = tol {
                report = report.with_tolerance(tol);
            }
            emit_report(&report, f)?;
            return Ok(i32::from(report.has_failures()));
        }
        _ => unreachable!(),
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let cfg = EvalConfig::default();
        let mut cases = Vec::new();
        for (id, p) in [("L11", Params::new()), ("W8", Params::new())] {
            let entry = registry::find_entry(id).unwrap();
            let mut pts = registry::expand_grid(entry, None).unwrap();
            pts.truncate(2);
            cases.extend(pts.iter().map(|q| {
                let mut q = q.clone();
                q.extend(p.clone());
                registry::evaluate_identity(id, &q, &cfg).unwrap()
            }));
        }
        let mut skipped = cases[0].clone();
        skipped.lhs = C64::new(f64::NAN, f64::NAN);
        skipped.rhs = C64::new(f64::NAN, f64::NAN);
        skipped.residual = f64::NAN;
        skipped.status = CaseStatus::Skipped("pole at s = 1, \"quoted\"".into());
        cases.push(skipped);
        let mut failed = cases[1].clone();
        failed.lhs = C64::new(-0.0, 1e-310);
        failed.status = CaseStatus::Fail("non-convergence in x, y".into());
        cases.push(failed);
        VerificationReport::new(cases, &cfg)
    }

    #[test]
    fn summary_counts_sum_to_cases() {
        let r = sample();
        assert_eq!(r.summary.pass + r.summary.fail + r.summary.skipped, r.cases.len());
        assert_eq!(r.summary.skipped, 1);
        assert_eq!(r.summary.fail, 1);
        assert!(r.summary.worst_residual_by_id.contains_key("L11"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = sample();
        let back = report_from_json(&report_to_json(&r)).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn json_numbers_carry_17_digits() {
        let mut r = sample();
        r.cases.truncate(1);
        r.cases[0].residual = 0.1;
        let text = report_to_json(&r);
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
    }

    #[test]
    fn empty_report_is_valid_json() {
        let r = VerificationReport::new(Vec::new(), &EvalConfig::default());
        let text = report_to_json(&r);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["cases"], json!([]));
        assert_eq!(v["summary"]["pass"], json!(0));
        assert_eq!(report_from_json(&text).unwrap(), r);
    }

    #[test]
    fn csv_round_trip_and_row_count() {
        let r = sample();
        let text = report_to_csv(&r);
        assert_eq!(parse_csv(&text).unwrap().len(), r.cases.len() + 1);
        assert_eq!(cases_from_csv(&text).unwrap(), r.cases);
    }

    #[test]
    fn fingerprint_tracks_config() {
        let a = EvalConfig::default();
        let b = EvalConfig { series_n: 200, ..a };
        assert_eq!(config_fingerprint(&a).len(), 64);
        assert_eq!(config_fingerprint(&a), config_fingerprint(&a));
        assert_ne!(config_fingerprint(&a), config_fingerprint(&b));
    }

    #[test]
    fn tolerance_regrades_only_evaluated_cases() {
        let r = sample().with_tolerance(0.0);
        assert_eq!(r.summary.skipped, 1);
        assert_eq!(r.summary.pass, 0);
        assert!(r.cases.iter().any(|c| c.status == CaseStatus::Fail("non-convergence in x, y".into())));
    }

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(4.493409457909064, 15), "4.49340945790906");
        assert_eq!(fmt_sig(123.0, 4), "123.0");
        assert_eq!(fmt_sig(1e-9, 3), "1.00e-9");
    }

    #[test]
    fn usage_errors_exit_two() {
        let argv = |s: &str| std::iter::once("kosh").chain(s.split_whitespace()).map(String::from).collect();
        assert_eq!(cli_main(argv("lambda --p 1")), 2);
        assert_eq!(cli_main(argv("lambda --p banana --n 3")), 2);
        assert_eq!(cli_main(argv("verify --id Q9")), 2);
        assert_eq!(cli_main(argv("verify --id L11 --x 1")), 2);
        assert_eq!(cli_main(argv("suite --filter Z*")), 2);
        assert_eq!(cli_main(argv("lambda --p 1 --n 5")), 0);
    }
}
