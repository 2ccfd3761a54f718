//! Typed identity parameters and their text forms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{KoshError, Result};
use crate::sequence::ShapeParam;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Real,
    Complex,
    Shape,
    Integer,
}

#[derive(Debug, Clone, Copy)]
pub enum ParamValue {
    Real(f64),
    Complex(C64),
    Shape(ShapeParam),
    Integer(i64),
}

/// Parameter map of one identity case, ordered by name.
pub type Params = BTreeMap<String, ParamValue>;

impl PartialEq for ParamValue {
    /// Bitwise comparison, so that report round trips can be checked exactly.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ParamValue::Real(a), ParamValue::Real(b)) => a.to_bits() == b.to_bits(),
            (ParamValue::Complex(a), ParamValue::Complex(b)) => {
                a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
            }
            (ParamValue::Shape(a), ParamValue::Shape(b)) => match (a, b) {
                (ShapeParam::Finite(x), ShapeParam::Finite(y)) => x.to_bits() == y.to_bits(),
                _ => a == b,
            },
            (ParamValue::Integer(a), ParamValue::Integer(b)) => a == b,
            _ => false,
        }
    }
}

impl ParamValue {
    pub fn kind(&self) -> ParamKind {
        match self {
            ParamValue::Real(_) => ParamKind::Real,
            ParamValue::Complex(_) => ParamKind::Complex,
            ParamValue::Shape(_) => ParamKind::Shape,
            ParamValue::Integer(_) => ParamKind::Integer,
        }
    }

    pub fn parse(kind: ParamKind, text: &str) -> Result<Self> {
        Ok(match kind {
            ParamKind::Real => ParamValue::Real(parse_real(text)?),
            ParamKind::Complex => ParamValue::Complex(parse_complex(text)?),
            ParamKind::Shape => ParamValue::Shape(text.parse()?),
            ParamKind::Integer => ParamValue::Integer(
                text.trim()
                    .parse()
                    .map_err(|_| KoshError::InvalidParam(format!("cannot parse integer `{text}`")))?,
            ),
        })
    }

    fn sort_key(&self) -> (u8, f64, f64) {
        match *self {
            ParamValue::Real(x) => (0, x, 0.0),
            ParamValue::Complex(z) => (1, z.re, z.im),
            ParamValue::Shape(ShapeParam::Zero) => (2, 0.0, 0.0),
            ParamValue::Shape(ShapeParam::Finite(p)) => (2, p, 0.0),
            ParamValue::Shape(ShapeParam::Infinity) => (2, f64::INFINITY, 0.0),
            ParamValue::Integer(n) => (3, n as f64, 0.0),
        }
    }

    /// Text form with 17 significant digits, which parses back to identical bits.
    pub fn to_exact_string(&self) -> String {
        match self {
            ParamValue::Real(x) => fmt_exact(*x),
            ParamValue::Complex(z) => fmt_complex_exact(*z),
            ParamValue::Shape(s) => s.to_string(),
            ParamValue::Integer(n) => n.to_string(),
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Real(x) => write!(f, "{x}"),
            ParamValue::Complex(z) if z.im == 0.0 => write!(f, "{}", z.re),
            ParamValue::Complex(z) => write!(f, "{}{}{}i", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs()),
            ParamValue::Shape(s) => write!(f, "{s}"),
            ParamValue::Integer(n) => write!(f, "{n}"),
        }
    }
}

/// Lexicographic order of parameter maps: names first, then values.
pub fn compare_params(a: &Params, b: &Params) -> Ordering {
    let mut ia = a.iter();
    let mut ib = b.iter();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ka, va)), Some((kb, vb))) => {
                let o = ka.cmp(kb).then_with(|| {
                    let (x, y) = (va.sort_key(), vb.sort_key());
                    x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.total_cmp(&y.2))
                });
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
    }
}

/// `a=1;s=0.5+1i` style rendering used in CSV and console output.
pub fn params_to_string(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={}", v.to_exact_string())).collect::<Vec<_>>().join(";")
}

/// Inverse of [`params_to_string`]; the kind of every value is taken from `kinds`.
pub fn params_from_string(text: &str, kinds: impl Fn(&str) -> Option<ParamKind>) -> Result<Params> {
    let mut out = Params::new();
    for item in text.split(';').filter(|t| !t.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| KoshError::Format(format!("bad parameter item `{item}`")))?;
        let kind = kinds(k.trim()).ok_or_else(|| KoshError::Format(format!("unknown parameter `{k}`")))?;
        out.insert(k.trim().to_string(), ParamValue::parse(kind, v)?);
    }
    Ok(out)
}

pub fn fmt_exact(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn fmt_complex_exact(z: C64) -> String {
    let im = fmt_exact(z.im);
    let sep = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sep}{im}i", fmt_exact(z.re))
}

/// Real number; accepts `pi`, `-pi` and `k*pi`/`kpi` as well as ordinary literals.
pub fn parse_real(text: &str) -> Result<f64> {
    let t = text.trim().to_ascii_lowercase();
    let bad = || KoshError::InvalidParam(format!("cannot parse number `{text}`"));
    if t == "nan" {
        return Ok(f64::NAN);
    }
    if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim_end_matches('*');
        let k = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        return Ok(k * PI);
    }
    t.parse().map_err(|_| bad())
}

/// Complex number written as `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let bad = || KoshError::InvalidParam(format!("cannot parse complex number `{text}`"));
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(parse_real(&t)?, 0.0));
    };
    if t == "nan" {
        return Ok(C64::new(f64::NAN, 0.0));
    }
    // split at the last sign that is not an exponent sign and not the leading sign
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'e' {
            split = Some(i);
            break;
        }
    }
    let imag = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_real(s),
        }
    };
    match split {
        Some(i) => Ok(C64::new(parse_real(&body[..i]).map_err(|_| bad())?, imag(&body[i..]).map_err(|_| bad())?)),
        None => Ok(C64::new(0.0, imag(body).map_err(|_| bad())?)),
    }
}

/// Typed accessors used by the identity evaluators.
pub(crate) trait ParamsExt {
    fn real(&self, name: &str) -> Result<f64>;
    fn complex(&self, name: &str) -> Result<C64>;
    fn shape(&self, name: &str) -> Result<ShapeParam>;
    fn integer(&self, name: &str) -> Result<i64>;
}

fn missing(name: &str) -> KoshError {
    KoshError::InvalidParam(format!("missing or mistyped parameter `{name}`"))
}

impl ParamsExt for Params {
    fn real(&self, name: &str) -> Result<f64> {
        match self.get(name) {
            Some(ParamValue::Real(x)) => Ok(*x),
            Some(ParamValue::Integer(n)) => Ok(*n as f64),
            _ => Err(missing(name)),
        }
    }

    fn complex(&self, name: &str) -> Result<C64> {
        match self.get(name) {
            Some(ParamValue::Complex(z)) => Ok(*z),
            Some(ParamValue::Real(x)) => Ok(C64::new(*x, 0.0)),
            _ => Err(missing(name)),
        }
    }

    fn shape(&self, name: &str) -> Result<ShapeParam> {
        match self.get(name) {
            Some(ParamValue::Shape(s)) => Ok(*s),
            _ => Err(missing(name)),
        }
    }

    fn integer(&self, name: &str) -> Result<i64> {
        match self.get(name) {
            Some(ParamValue::Integer(n)) => Ok(*n),
            _ => Err(missing(name)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.6+0.3i").unwrap(), C64::new(0.6, 0.3));
        assert_eq!(parse_complex("2-1i").unwrap(), C64::new(2.0, -1.0));
        assert_eq!(parse_complex("-0.5+0.5i").unwrap(), C64::new(-0.5, 0.5));
        assert_eq!(parse_complex("0.5i").unwrap(), C64::new(0.0, 0.5));
        assert_eq!(parse_complex("1+i").unwrap(), C64::new(1.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1.5e-3-2e+2i").unwrap(), C64::new(1.5e-3, -200.0));
        assert_eq!(parse_complex("3").unwrap(), C64::new(3.0, 0.0));
        assert!(parse_complex("x+i").is_err());
    }

    #[test]
    fn reals_with_pi() {
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
    }

    #[test]
    fn exact_strings_round_trip() {
        let vals = [
            ParamValue::Real(PI),
            ParamValue::Real(1.0 / 3.0),
            ParamValue::Complex(C64::new(0.1, -1.0 / 7.0)),
            ParamValue::Shape(ShapeParam::Finite(0.1)),
            ParamValue::Shape(ShapeParam::Infinity),
            ParamValue::Shape(ShapeParam::Zero),
            ParamValue::Integer(-3),
        ];
        for v in vals {
            let back = ParamValue::parse(v.kind(), &v.to_exact_string()).unwrap();
            assert_eq!(back, v, "{}", v.to_exact_string());
        }
    }

    #[test]
    fn param_maps_round_trip_and_order() {
        let mut a = Params::new();
        a.insert("x".into(), ParamValue::Real(0.5));
        a.insert("p".into(), ParamValue::Shape(ShapeParam::Infinity));
        a.insert("s".into(), ParamValue::Complex(C64::new(0.6, 0.3)));
        let text = params_to_string(&a);
        let kinds = |k: &str| match k {
            "x" => Some(ParamKind::Real),
            "p" => Some(ParamKind::Shape),
            "s" => Some(ParamKind::Complex),
            _ => None,
        };
        assert_eq!(params_from_string(&text, kinds).unwrap(), a);
        let mut b = a.clone();
        b.insert("x".into(), ParamValue::Real(1.0));
        assert_eq!(compare_params(&a, &b), Ordering::Less);
        let mut c = a.clone();
        c.insert("p".into(), ParamValue::Shape(ShapeParam::Finite(2.0)));
        assert_eq!(compare_params(&c, &a), Ordering::Less);
    }
}
