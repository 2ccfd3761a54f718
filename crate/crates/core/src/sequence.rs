//! Roots `lambda_n` of `p sin(pi y) + y cos(pi y) = 0` and their weights.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{KoshError, Result};
use crate::specfun::{cospi, sinpi};
use std::f64::consts::PI;

/// Shape parameter of the Koshliakov sequence.
///
/// `Infinity` gives `lambda_n = n` and `Zero` gives `lambda_n = n - 1/2`; both
/// have unit weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ShapeParam {
    Finite(f64),
    Zero,
    Infinity,
}

impl ShapeParam {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 {
            Ok(ShapeParam::Finite(p))
        } else {
            Err(KoshError::InvalidParam(format!("shape p = {p} must be finite and positive")))
        }
    }

    /// `kappa = 1 / (1 + 1/(pi p))`, the weight at `lambda = 0`.
    pub fn kappa(&self) -> f64 {
        match *self {
            ShapeParam::Finite(p) => p * PI / (p * PI + 1.0),
            ShapeParam::Zero => 0.0,
            ShapeParam::Infinity => 1.0,
        }
    }

    /// `kappa log kappa`, with the zero-limit value 0.
    pub fn kappa_log_kappa(&self) -> f64 {
        let k = self.kappa();
        if k == 0.0 {
            0.0
        } else {
            k * k.ln()
        }
    }

    pub fn weight(&self, lambda: f64) -> f64 {
        match *self {
            ShapeParam::Finite(p) => {
                let l2 = lambda * lambda;
                (p * p + l2) / (p * (p + 1.0 / PI) + l2)
            }
            _ => 1.0,
        }
    }

    /// `sigma_p(t) = (p + t)/(p - t)`.
    pub fn sigma(&self, t: f64) -> f64 {
        match *self {
            ShapeParam::Finite(p) => (p + t) / (p - t),
            ShapeParam::Zero => -1.0,
            ShapeParam::Infinity => 1.0,
        }
    }

    /// `1/sigma_p(t)`, finite everywhere on `t >= 0`.
    pub fn inv_sigma(&self, t: f64) -> f64 {
        match *self {
            ShapeParam::Finite(p) => (p - t) / (p + t),
            ShapeParam::Zero => -1.0,
            ShapeParam::Infinity => 1.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ShapeParam::Finite(_))
    }

    fn key(&self) -> u64 {
        match *self {
            ShapeParam::Finite(p) => p.to_bits(),
            ShapeParam::Zero => u64::MAX - 1,
            ShapeParam::Infinity => u64::MAX,
        }
    }
}

impl fmt::Display for ShapeParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeParam::Finite(p) => f.pad(&p.to_string()),
            ShapeParam::Zero => f.pad("0"),
            ShapeParam::Infinity => f.pad("inf"),
        }
    }
}

impl FromStr for ShapeParam {
    type Err = KoshError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "inf" | "infinity" | "+inf" => Ok(ShapeParam::Infinity),
            "0" | "zero" | "0.0" => Ok(ShapeParam::Zero),
            _ => {
                let p: f64 = t
                    .parse()
                    .map_err(|_| KoshError::InvalidParam(format!("cannot parse shape `{s}`")))?;
                if p == 0.0 {
                    Ok(ShapeParam::Zero)
                } else if p == f64::INFINITY {
                    Ok(ShapeParam::Infinity)
                } else {
                    ShapeParam::finite(p)
                }
            }
        }
    }
}

/// `|p sin(pi l) + l cos(pi l)|` at a double `l`, with exact argument reduction.
///
/// Near `l = 200` the rounding of `l` alone contributes up to `pi l ulp(l)/2`, about
/// `9e-12`; [`offset_residual`] measures the residual of the split representation.
pub fn lambda_residual(p: f64, lambda: f64) -> f64 {
    (p * sinpi(lambda) + lambda * cospi(lambda)).abs()
}

/// Residual of the root `lambda = n - e` in split form:
/// `|n cos(pi e) - e cos(pi e) - p sin(pi e)|`, equal to `|p sin(pi l) + l cos(pi l)|`.
pub fn offset_residual(p: f64, n: usize, e: f64) -> f64 {
    let (s, c) = (PI * e).sin_cos();
    (n as f64 * c - e * c - p * s).abs()
}

/// Offset `e = n - lambda_n` in `(0, 1/2)` of the `n`-th positive root of
/// `p sin(pi y) + y cos(pi y) = 0`, to full relative precision.
///
/// In terms of `e` the equation reads `(n - e) cos(pi e) = p sin(pi e)`; a safeguarded
/// Newton iteration keeps a bracket.
pub fn solve_offset(p: f64, n: usize, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(KoshError::InvalidParam("root index starts at 1".into()));
    }
    if !(p.is_finite() && p > 0.0) {
        return Err(KoshError::InvalidParam(format!("p = {p} must be finite and positive")));
    }
    let nf = n as f64;
    let g = |e: f64| {
        let (s, c) = (PI * e).sin_cos();
        nf * c - e * c - p * s
    };
    let dg = |e: f64| -(PI * e).cos() - PI * (nf - e) * (PI * e).sin() - p * PI * (PI * e).cos();
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    if !(g(lo) > 0.0 && g(hi) < 0.0) {
        return Err(KoshError::BracketFailure { n, p });
    }
    let mut e = ((nf / p).atan() / PI).clamp(1e-300, 0.5 - 1e-16);
    for _ in 0..200 {
        let ge = g(e);
        if ge == 0.0 {
            break;
        }
        if ge > 0.0 {
            lo = e;
        } else {
            hi = e;
        }
        let mut next = e - ge / dg(e);
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = (next - e).abs();
        e = next;
        if step <= 1e-17 * e || hi - lo <= 4.0 * f64::EPSILON * e {
            break;
        }
    }
    let r = offset_residual(p, n, e);
    if r > tol.max(16.0 * f64::EPSILON * nf.max(p)) {
        return Err(KoshError::NonConvergence { what: "solve_lambda", estimate: nf - e, error: r });
    }
    Ok(e)
}

/// `lambda_n` for a finite shape; see [`solve_offset`] for the split representation.
pub fn solve_lambda(p: f64, n: usize, tol: f64) -> Result<f64> {
    Ok(n as f64 - solve_offset(p, n, tol)?)
}

/// `lambda_n` for any shape; limit shapes use their closed forms.
pub fn shape_lambda(shape: ShapeParam, n: usize, tol: f64) -> Result<f64> {
    match shape {
        ShapeParam::Finite(p) => solve_lambda(p, n, tol),
        ShapeParam::Zero => Ok(n as f64 - 0.5),
        ShapeParam::Infinity => Ok(n as f64),
    }
}

/// Immutable prefix `lambda_1..lambda_N` with weights.
#[derive(Debug, Clone, PartialEq)]
pub struct KoshSequence {
    pub shape: ShapeParam,
    lambdas: Vec<f64>,
    offsets: Vec<f64>,
    weights: Vec<f64>,
}

impl KoshSequence {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `lambda_n`, 1-based.
    pub fn lambda(&self, n: usize) -> f64 {
        self.lambdas[n - 1]
    }

    /// `w(lambda_n)`, 1-based.
    pub fn weight(&self, n: usize) -> f64 {
        self.weights[n - 1]
    }

    /// `n - lambda_n`, 1-based.
    pub fn offset(&self, n: usize) -> f64 {
        self.offsets[n - 1]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Iterator over `(lambda_n, w_n)`.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.lambdas.iter().copied().zip(self.weights.iter().copied())
    }
}

pub fn build_sequence(shape: ShapeParam, n: usize) -> Result<KoshSequence> {
    let offsets = (1..=n)
        .map(|k| match shape {
            ShapeParam::Finite(p) => solve_offset(p, k, 1e-12),
            ShapeParam::Zero => Ok(0.5),
            ShapeParam::Infinity => Ok(0.0),
        })
        .collect::<Result<Vec<f64>>>()?;
    let lambdas: Vec<f64> = offsets.iter().enumerate().map(|(k, e)| (k + 1) as f64 - e).collect();
    let weights = lambdas.iter().map(|&l| shape.weight(l)).collect();
    Ok(KoshSequence { shape, lambdas, offsets, weights })
}

/// `w(lambda) = (p^2 + lambda^2)/(p(p + 1/pi) + lambda^2)`.
pub fn weight(shape: ShapeParam, lambda: f64) -> f64 {
    shape.weight(lambda)
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<KoshSequence>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<KoshSequence>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared sequence with at least `n` terms. Requests beyond the cached length
/// rebuild with twice the requested size.
pub fn sequence(shape: ShapeParam, n: usize) -> Result<Arc<KoshSequence>> {
    let key = shape.key();
    {
        let map = cache().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(s) = map.get(&key) {
            if s.len() >= n {
                return Ok(Arc::clone(s));
            }
        }
    }
    let built = Arc::new(build_sequence(shape, (2 * n).max(64))?);
    let mut map = cache().lock().unwrap_or_else(|e| e.into_inner());
    let entry = map.entry(key).or_insert_with(|| Arc::clone(&built));
    if entry.len() < built.len() {
        *entry = Arc::clone(&built);
    }
    Ok(Arc::clone(entry))
}
