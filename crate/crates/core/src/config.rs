use serde::{Deserialize, Serialize};

use crate::error::{KoshError, Result};

/// Tolerances shared by every quadrature routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of adaptive Gauss-Kronrod and refinement levels of tanh-sinh.
    pub max_depth: u32,
    /// Maximum number of half-period panels for oscillatory integrands.
    pub oscillatory_segments: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-13,
            abs_tol: 1e-15,
            max_depth: 24,
            oscillatory_segments: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Number of exactly summed terms before the difference correction.
    pub series_n: usize,
    /// Number of forward differences in the Gregory correction.
    pub gregory_k: usize,
    pub quad: QuadratureSpec,
    /// Offset used when extracting Laurent data around a pole.
    pub pole_eps: f64,
    pub richardson_stages: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            series_n: 120,
            gregory_k: 12,
            quad: QuadratureSpec::default(),
            pole_eps: 1e-3,
            richardson_stages: 1,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.series_n < 16 {
            return Err(KoshError::InvalidParam(format!(
                "series_n = {} must be at least 16",
                self.series_n
            )));
        }
        if self.gregory_k > 14 {
            return Err(KoshError::InvalidParam("gregory_k must be at most 14".into()));
        }
        if !(self.pole_eps > 1e-6 && self.pole_eps < 1e-2) {
            return Err(KoshError::InvalidParam(format!(
                "pole_eps = {} outside (1e-6, 1e-2)",
                self.pole_eps
            )));
        }
        let q = &self.quad;
        if !(q.rel_tol > 0.0 && q.abs_tol >= 0.0 && q.max_depth > 0 && q.oscillatory_segments > 0) {
            return Err(KoshError::InvalidParam("bad quadrature spec".into()));
        }
        Ok(())
    }
}
