//! Two Epstein zeta analogues over Koshliakov lattices.
//!
//! The first analogue is
//! `zeta_{p,p'}(s, c) = sum'_{m,n} w_m w'_n (lambda_m^2 + c lambda'_n^2)^{-s}` with `lambda_{-n} = -lambda_n`,
//! `lambda_0 = 0` and `w_0 = kappa`. The second analogue is defined through a `J`-Bessel
//! integral and continued by a double `K`-Bessel series.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;

use crate::config::EvalConfig;
use crate::error::{KoshError, Result};
use crate::kernels::{b_kernel, b_weighted_integral, j_integral, tail_power, watson_bessel_part, watson_series};
use crate::koshzeta::{
    constants, eta_p, eta_p_any, eta_p_pole_constant, gregory_sum, sigma_p_series, zeta_p_any,
    zeta_p_derivative_at_zero, zeta_p_two_closed_form, NeumaierSum, SeriesValue,
};
use crate::sequence::{sequence, ShapeParam};
use crate::specfun::quad::gauss_kronrod;
use crate::specfun::{bessel_k_scaled, gamma, near_nonpositive_integer, rgamma, rpow};

/// Agreement level expected from Laurent extraction.
pub const LAURENT_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsteinParams {
    pub shape_p: ShapeParam,
    pub shape_pprime: ShapeParam,
    pub c: f64,
}

impl EpsteinParams {
    pub fn new(shape_p: ShapeParam, shape_pprime: ShapeParam, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(KoshError::InvalidParam(format!("c must be positive, got {c}")));
        }
        Ok(EpsteinParams { shape_p, shape_pprime, c })
    }

    /// `(p', p, 1/c)`: the same lattice with the axes exchanged.
    pub fn swapped(&self) -> Self {
        EpsteinParams { shape_p: self.shape_pprime, shape_pprime: self.shape_p, c: 1.0 / self.c }
    }

    /// `(p', p, c)`.
    pub fn transposed(&self) -> Self {
        EpsteinParams { shape_p: self.shape_pprime, shape_pprime: self.shape_p, c: self.c }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaurentData {
    pub pole_location: f64,
    pub residue: C64,
    pub constant_term: C64,
    pub eps_used: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Epstein2Route {
    Definition,
    SelbergChowla,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealZero {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub value_lo: f64,
    pub value_hi: f64,
    pub central_value: f64,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Smallest distance from a pole or removable point at which the representations are used.
fn guard_radius(cfg: &EvalConfig) -> f64 {
    cfg.pole_eps / 2f64.powi(cfg.richardson_stages as i32 + 1)
}

fn check_guard(s: C64, cfg: &EvalConfig) -> Result<()> {
    let r = guard_radius(cfg);
    if (s - 1.0).norm() < r {
        return Err(KoshError::Pole(format!("Epstein zeta at s = {s}")));
    }
    if s.re < 0.5 + r && near_nonpositive_integer(s - 0.5, r) {
        return Err(KoshError::Strip(format!("removable point s = {s}; use laurent_extract")));
    }
    Ok(())
}

/// Collects the first error raised inside an infallible closure.
struct ErrSlot(RefCell<Option<KoshError>>);

impl ErrSlot {
    fn new() -> Self {
        ErrSlot(RefCell::new(None))
    }

    fn take(&self, r: Result<C64>) -> C64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                C64::new(f64::NAN, 0.0)
            }
        }
    }

    fn check(self) -> Result<()> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// `sum_m w_m int_z^inf (lambda_m^2 + t^2)^{-s} dt` for `Re s > 1`.
fn quadrant_tail(shape: ShapeParam, s: C64, z: f64, cfg: &EvalConfig) -> Result<C64> {
    let n = cfg.series_n;
    let seq = sequence(shape, n + cfg.gregory_k + 2)?;
    let a_end = seq.lambda(n);
    let slot = ErrSlot::new();
    let cs = PI.sqrt() * gamma(s - 0.5) * rgamma(s) / 2.0;
    let inner = gauss_kronrod(|t| slot.take(tail_power(s, t, a_end, &cfg.quad)), 0.0, z, &cfg.quad);
    let corner = cs * rpow(a_end, 2.0 - 2.0 * s) / (2.0 * s - 2.0) - inner.into_result("Epstein tail")?;
    let v = gregory_sum(&seq, n, cfg.gregory_k, |a| slot.take(tail_power(s, a, z, &cfg.quad)), |_| corner);
    slot.check()?;
    Ok(v.value)
}

/// First analogue by its definition,
/// `2 kappa' zeta_p(2s) + 2 kappa c^{-s} zeta_{p'}(2s) + 4 sum_{m,n>=1} w_m w'_n (lambda_m^2 + c lambda'_n^2)^{-s}`.
///
/// Both summations use the weighted Gregory formula; the tail of the outer sum is the
/// quadrant integral of the inner terms. Needs `Re s > 1`.
pub fn epstein1_direct(params: &EpsteinParams, s: C64, cfg: &EvalConfig) -> Result<SeriesValue> {
    if s.re <= 1.0 {
        return Err(KoshError::domain(format!("double series needs Re s > 1, got {s}")));
    }
    let EpsteinParams { shape_p: p, shape_pprime: pp, c: cc } = *params;
    let sc = cc.sqrt();
    let n = cfg.series_n;
    let seq = sequence(pp, n + cfg.gregory_k + 2)?;
    let tail = quadrant_tail(p, s, sc * seq.lambda(n), cfg)? / sc;
    let slot = ErrSlot::new();
    let inner_bound = RefCell::new(0.0_f64);
    let quadrant = gregory_sum(
        &seq,
        n,
        cfg.gregory_k,
        |l| {
            let r = watson_series(p, s, sc * l, cfg).map(|v| {
                let mut b = inner_bound.borrow_mut();
                *b = b.max(v.tail_bound);
                v.value
            });
            slot.take(r)
        },
        |_| tail,
    );
    slot.check()?;
    let zp = zeta_p_any(p, 2.0 * s, cfg)?;
    let zpp = zeta_p_any(pp, 2.0 * s, cfg)?;
    let axes = 2.0 * pp.kappa() * zp.value + 2.0 * p.kappa() * rpow(cc, -s) * zpp.value;
    let value = axes + 4.0 * quadrant.value;
    let tail_bound = 4.0 * (quadrant.tail_bound + inner_bound.into_inner() * quadrant.terms_used as f64)
        + 2.0 * (zp.tail_bound + zpp.tail_bound);
    Ok(SeriesValue {
        value,
        tail_bound,
        terms_used: quadrant.terms_used,
        converged: value.is_finite() && tail_bound <= 1e-9 * value.norm().max(1.0),
    })
}

/// `2 kappa' zeta_p(2s) + 2 sqrt(pi) c^{1/2-s} Gamma(s-1/2)/Gamma(s) zeta_{p'}(2s-1)`.
fn epstein1_head(params: &EpsteinParams, s: C64, cfg: &EvalConfig) -> Result<C64> {
    let zp = zeta_p_any(params.shape_p, 2.0 * s, cfg)?.value;
    let zpp = zeta_p_any(params.shape_pprime, 2.0 * s - 1.0, cfg)?.value;
    let g = PI.sqrt() * gamma(s - 0.5) * rgamma(s);
    Ok(2.0 * params.shape_pprime.kappa() * zp + 2.0 * rpow(params.c, 0.5 - s) * g * zpp)
}

/// `4 sum_n w'_n term(sqrt(c) lambda'_n)` for exponentially decaying terms.
fn lattice_row_sum<F>(params: &EpsteinParams, scale: f64, term: F) -> Result<C64>
where
    F: Fn(f64) -> Result<C64>,
{
    let sc = params.c.sqrt();
    let mut sum = NeumaierSum::default();
    let mut n = 1usize;
    loop {
        let seq = sequence(params.shape_pprime, n)?;
        let x = sc * seq.lambda(n);
        let t = seq.weight(n) * term(x)?;
        sum.add(t);
        let small = t.norm() <= 1e-17 * (scale + sum.total().norm());
        if small && 2.0 * PI * x > 40.0 {
            break;
        }
        n += 1;
        if n > 100_000 {
            return Err(KoshError::NonConvergence { what: "Epstein row sum", estimate: sum.total().norm(), error: t.norm() });
        }
    }
    Ok(4.0 * sum.total())
}

/// First analogue continued to `Re s < 1` by the kernel-integral representation
/// `head + 4 sum_n w'_n 2^{2-2s} x_n^{1-2s} sin(pi s) int_0^inf y^{-s}(y+1)^{-s} B_p((2y+1) x_n) dy`,
/// `x_n = sqrt(c) lambda'_n`.
pub fn epstein1_continued(params: &EpsteinParams, s: C64, cfg: &EvalConfig) -> Result<C64> {
    if s.re >= 1.0 {
        return Err(KoshError::Strip(format!("kernel-integral form needs Re s < 1, got {s}")));
    }
    check_guard(s, cfg)?;
    let head = epstein1_head(params, s, cfg)?;
    let pre = rpow(2.0, 2.0 - 2.0 * s) * crate::specfun::csinpi(s);
    let p = params.shape_p;
    let rows = lattice_row_sum(params, head.norm(), |x| {
        Ok(pre * rpow(x, 1.0 - 2.0 * s) * b_weighted_integral(p, s, x, &cfg.quad)?)
    })?;
    Ok(head + rows)
}

/// First analogue on the whole plane (except `s = 1`) by the Bessel representation:
/// `head + 4 sum_n w'_n R_p(s, sqrt(c) lambda'_n)` with `R_p` the `K`-Bessel part of the
/// Watson series.
pub fn epstein1_bessel(params: &EpsteinParams, s: C64, cfg: &EvalConfig) -> Result<C64> {
    check_guard(s, cfg)?;
    let head = epstein1_head(params, s, cfg)?;
    let p = params.shape_p;
    let rows = lattice_row_sum(params, head.norm(), |x| watson_bessel_part(p, s, x, cfg))?;
    Ok(head + rows)
}

/// First analogue: the double series on `Re s > 1`, the kernel-integral form on
/// `Re s < 1`, the Bessel form on the line `Re s = 1`.
pub fn epstein1(params: &EpsteinParams, s: C64, cfg: &EvalConfig) -> Result<C64> {
    if s.re > 1.0 {
        Ok(epstein1_direct(params, s, cfg)?.value)
    } else if s.re < 1.0 {
        epstein1_continued(params, s, cfg)
    } else {
        epstein1_bessel(params, s, cfg)
    }
}

/// Residue and constant term of `f` at a simple pole (or removable point) `s0`
/// from symmetric evaluations at `s0 +- eps 2^{-j}` and Richardson extrapolation in `eps^2`.
pub fn laurent_extract<F>(f: F, s0: f64, cfg: &EvalConfig) -> Result<LaurentData>
where
    F: Fn(f64) -> Result<C64>,
{
    let eps = cfg.pole_eps;
    let stages = cfg.richardson_stages.max(1);
    let mut res = Vec::with_capacity(stages + 1);
    let mut con = Vec::with_capacity(stages + 1);
    for j in 0..=stages {
        let h = eps / 2f64.powi(j as i32);
        let up = f(s0 + h)?;
        let down = f(s0 - h)?;
        res.push(0.5 * h * (up - down));
        con.push(0.5 * (up + down));
    }
    let (r1, r2) = (res[0], res[1]);
    if (r1 - r2).norm() > 10.0 * LAURENT_TOL * (1.0 + r2.norm()) {
        return Err(KoshError::InconsistentPole { r1: r1.re, r2: r2.re });
    }
    let residue = richardson(res);
    let constant_term = richardson(con);
    Ok(LaurentData { pole_location: s0, residue, constant_term, eps_used: eps })
}

fn richardson(mut t: Vec<C64>) -> C64 {
    let mut factor = 4.0;
    while t.len() > 1 {
        t = t.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
        factor *= 4.0;
    }
    t[0]
}

/// Constant term of the first analogue at `s = 1`:
/// `2 kappa' zeta_p(2) + (pi/sqrt c)(2 C1(p') - log 4c + 4 sum w'_n B_p(sqrt(c) lambda'_n)/lambda'_n)`.
pub fn kronecker1_constant(params: &EpsteinParams, cfg: &EvalConfig) -> Result<C64> {
    let sc = params.c.sqrt();
    let p = params.shape_p;
    let kp = constants(params.shape_pprime, cfg)?;
    let rows = lattice_row_sum(params, 1.0, |x| Ok(c(sc * b_kernel(p, x) / x)))?;
    let z2 = zeta_p_two_closed_form(p);
    let v = 2.0 * params.shape_pprime.kappa() * z2
        + PI / sc * (2.0 * kp.c1 - (4.0 * params.c).ln())
        + PI / sc * rows.re;
    Ok(c(v))
}

/// `8 sum_n w'_n int_0^inf B_p((2y+1) sqrt(c) lambda'_n) dy / sqrt(y^2 + y)`.
pub fn epstein1_central_kernel_sum(params: &EpsteinParams, cfg: &EvalConfig) -> Result<f64> {
    let p = params.shape_p;
    let half = c(0.5);
    Ok(2.0 * lattice_row_sum(params, 1.0, |x| b_weighted_integral(p, half, x, &cfg.quad))?.re)
}

/// Central value of the first analogue:
/// `kappa'(2 C1(p) + log(c/4)) + 4 zeta_{p'}'(0) + 8 sum_n w'_n int B_p((2y+1) x_n) dy/sqrt(y^2+y)`.
pub fn epstein1_central(params: &EpsteinParams, cfg: &EvalConfig) -> Result<C64> {
    let kp = constants(params.shape_p, cfg)?;
    let kpp = constants(params.shape_pprime, cfg)?;
    let kappa_pp = params.shape_pprime.kappa();
    let closed = kappa_pp * (2.0 * kp.c1 + (params.c / 4.0).ln())
        + 4.0 * zeta_p_derivative_at_zero(params.shape_pprime, &kpp);
    Ok(c(closed + epstein1_central_kernel_sum(params, cfg)?))
}

/// Real zero of `zeta_{p,inf}(s, c)` on `(1/2, 1)` by bisection. The sign at `s = 1/2` is
/// that of the central value, the sign at `s -> 1-` is negative (the residue is positive).
pub fn real_zero(params: &EpsteinParams, cfg: &EvalConfig) -> Result<RealZero> {
    if params.shape_pprime != ShapeParam::Infinity {
        return Err(KoshError::domain("real_zero expects the infinity limit for p'"));
    }
    let central = epstein1_central(params, cfg)?.re;
    if !(central > 0.0) {
        return Err(KoshError::NoSignChange);
    }
    let f = |s: f64| epstein1_continued(params, c(s), cfg).map(|v| v.re);
    let (mut lo, mut hi) = (0.5, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = guard_radius(cfg);
    if lo - 0.5 < r || 1.0 - hi < r {
        return Err(KoshError::NoSignChange);
    }
    let (value_lo, value_hi) = (f(lo)?, f(hi)?);
    if !(value_lo > 0.0 && value_hi <= 0.0) {
        return Err(KoshError::NoSignChange);
    }
    Ok(RealZero { root: 0.5 * (lo + hi), lo, hi, value_lo, value_hi, central_value: central })
}

/// `sum_{m,n>=1} w_m w'_n (lambda_m/lambda'_n)^nu K_nu(2 pi sqrt(c) lambda_m lambda'_n)`,
/// summed over shells `max(m, n) = k`.
pub fn double_k_sum(params: &EpsteinParams, nu: C64, cfg: &EvalConfig) -> Result<C64> {
    let sc = params.c.sqrt();
    let (p, pp) = (params.shape_p, params.shape_pprime);
    let floor = cfg.quad.abs_tol * 1e-2;
    let mut sum = NeumaierSum::default();
    let term = |lm: f64, wm: f64, ln: f64, wn: f64| -> Result<C64> {
        let z = 2.0 * PI * sc * lm * ln;
        Ok(wm * wn * rpow(lm / ln, nu) * bessel_k_scaled(nu, z)? * (-z).exp())
    };
    let mut k = 1usize;
    loop {
        let sp = sequence(p, k)?;
        let spp = sequence(pp, k)?;
        let (lk, wk) = (sp.lambda(k), sp.weight(k));
        let (lk2, wk2) = (spp.lambda(k), spp.weight(k));
        let mut shell = NeumaierSum::default();
        let mut biggest = 0.0_f64;
        for j in 1..=k {
            let t = term(lk, wk, spp.lambda(j), spp.weight(j))?;
            biggest = biggest.max(t.norm());
            shell.add(t);
            if j < k {
                let t = term(sp.lambda(j), sp.weight(j), lk2, wk2)?;
                biggest = biggest.max(t.norm());
                shell.add(t);
            }
        }
        sum.add(shell.total());
        let zmin = 2.0 * PI * sc * (lk * spp.lambda(1)).min(sp.lambda(1) * lk2);
        if (-zmin).exp() < floor && biggest <= floor * (1.0 + sum.total().norm()) {
            break;
        }
        k += 1;
        if k > 200_000 {
            return Err(KoshError::NonConvergence { what: "double K sum", estimate: sum.total().norm(), error: biggest });
        }
    }
    Ok(sum.total())
}

/// `Gamma(s) eta_p(2s)`, finite at the poles of `Gamma`: on `Re s <= 1/2` it is
/// `pi^{2s-1/2} Gamma(1/2-s) zeta_p(1-2s)`.
fn gamma_eta(shape: ShapeParam, s: C64, cfg: &EvalConfig) -> Result<C64> {
    if s.re > 0.5 {
        Ok(gamma(s) * eta_p_any(shape, 2.0 * s, cfg)?)
    } else {
        let z = zeta_p_any(shape, 1.0 - 2.0 * s, cfg)?.value;
        Ok(rpow(PI, 2.0 * s - 0.5) * gamma(0.5 - s) * z)
    }
}

/// `(pi/sqrt c)^{-s} Gamma(s) zeta~_{p,p'}(s, c)` from the Selberg-Chowla form.
/// Near the removable points `s = 1/2 - k` the value is the Laurent constant there.
pub fn epstein2_completed(params: &EpsteinParams, s: C64, cfg: &EvalConfig) -> Result<C64> {
    let r = guard_radius(cfg);
    if (s - 1.0).norm() < r {
        return Err(KoshError::Pole(format!("second Epstein analogue at s = {s}")));
    }
    if s.re < 0.5 + r && near_nonpositive_integer(s - 0.5, r) {
        let s0 = (s.re - 0.5).round() + 0.5;
        let d = laurent_extract(|t| epstein2_completed_raw(params, c(t), cfg), s0, cfg)?;
        return Ok(d.constant_term);
    }
    epstein2_completed_raw(params, s, cfg)
}

fn epstein2_completed_raw(params: &EpsteinParams, s: C64, cfg: &EvalConfig) -> Result<C64> {
    let (p, pp, cc) = (params.shape_p, params.shape_pprime, params.c);
    let a = 2.0 * pp.kappa() * gamma_eta(p, s, cfg)?;
    let zpp = zeta_p_any(pp, 2.0 * s - 1.0, cfg)?.value;
    let b = 2.0 * PI.sqrt() * rpow(cc, 0.5 - s) * gamma(s - 0.5) * p.kappa() * zpp;
    let h = 8.0 * rpow(PI, s) * rpow(cc, 0.25 - s / 2.0) * double_k_sum(params, s - 0.5, cfg)?;
    Ok(rpow(PI / cc.sqrt(), -s) * (a + b + h))
}

/// Second analogue.
///
/// `Definition`: `2 c^{-s} zeta_{p'}(2s) + 2 kappa' eta_p(2s) +
/// (8 pi^s c^{1/4-s/2}/Gamma(s)) sum_n w'_n lambda'_n^{1/2-s} pi int y^nu J_nu(2 pi sqrt(c) lambda'_n y) B_p(y) dy`
/// on `Re s > 1`. The `J`-integrals are computed for the rows where the `K`-series
/// remainder is visible; the remaining rows use the two algebraic terms of the
/// large-argument expansion, summed in closed form.
///
/// `SelbergChowla`: `2 kappa' eta_p(2s) + 2 sqrt(pi) c^{1/2-s} kappa Gamma(s-1/2)/Gamma(s) zeta_{p'}(2s-1) +
/// (8 pi^s c^{1/4-s/2}/Gamma(s)) H(s)` with [`double_k_sum`]; every `s != 1`.
pub fn epstein2(params: &EpsteinParams, s: C64, cfg: &EvalConfig, route: Epstein2Route) -> Result<C64> {
    match route {
        Epstein2Route::SelbergChowla => {
            let lam = epstein2_completed(params, s, cfg)?;
            Ok(lam * rpow(PI / params.c.sqrt(), s) * rgamma(s))
        }
        Epstein2Route::Definition => epstein2_definition(params, s, cfg),
    }
}

fn epstein2_definition(params: &EpsteinParams, s: C64, cfg: &EvalConfig) -> Result<C64> {
    if s.re <= 1.0 {
        return Err(KoshError::domain(format!("second analogue definition needs Re s > 1, got {s}")));
    }
    let (p, pp, cc) = (params.shape_p, params.shape_pprime, params.c);
    let sc = cc.sqrt();
    let lam1 = sequence(p, 1)?.lambda(1);
    let zpp2 = zeta_p_any(pp, 2.0 * s, cfg)?.value;
    let zpp1 = zeta_p_any(pp, 2.0 * s - 1.0, cfg)?.value;
    let head = |x: f64| -> C64 {
        -rpow(PI * x, 0.5 - s) * gamma(s - 0.5) * p.kappa() / 4.0 + gamma(s) * rpow(PI, -s) * rpow(x, -s - 0.5) / 4.0
    };
    // sum over all rows of w' lambda'^{1/2-s} head(sqrt(c) lambda')
    let all_heads = -rpow(PI, 0.5 - s) * rpow(cc, 0.25 - s / 2.0) * p.kappa() * gamma(s - 0.5) / 4.0 * zpp1
        + gamma(s) * rpow(PI, -s) * rpow(cc, -s / 2.0 - 0.25) / 4.0 * zpp2;
    let mut rows = NeumaierSum::default();
    let mut n = 1usize;
    loop {
        let seq = sequence(pp, n)?;
        let (ln, wn) = (seq.lambda(n), seq.weight(n));
        let x = sc * ln;
        if 2.0 * PI * x * lam1 > 45.0 {
            break;
        }
        let j = j_integral(p, s, x, None, cfg)?;
        rows.add(wn * rpow(ln, 0.5 - s) * (j + head(x)));
        n += 1;
    }
    let pre = 8.0 * rpow(PI, s) * rpow(cc, 0.25 - s / 2.0) * rgamma(s);
    let eta = eta_p(p, 2.0 * s, cfg)?.value;
    Ok(2.0 * rpow(cc, -s) * zpp2 + 2.0 * pp.kappa() * eta + pre * (rows.total() - all_heads))
}

/// Normalized residual of
/// `(pi/sqrt c)^{-s} Gamma(s) zeta~_{p,p'}(s,c) = (pi/sqrt c)^{-(1-s)} Gamma(1-s) zeta~_{p',p}(1-s,c)`.
pub fn epstein2_functional_eq_residual(params: &EpsteinParams, s: C64, cfg: &EvalConfig) -> Result<f64> {
    let left = epstein2_completed(params, s, cfg)?;
    let right = epstein2_completed(&params.transposed(), 1.0 - s, cfg)?;
    let scale = left.norm().max(right.norm()).max(1e-300);
    Ok((left - right).norm() / scale)
}

/// Constant term of the second analogue at `s = 1`:
/// `2 kappa' eta_p(2) + (pi/sqrt c)(kappa (2 C1(p') - log 4c) + 4 sum w'_n sigma_p(2 pi sqrt(c) lambda'_n)/lambda'_n)`.
pub fn kronecker2_constant(params: &EpsteinParams, cfg: &EvalConfig) -> Result<C64> {
    let sc = params.c.sqrt();
    let p = params.shape_p;
    let kpp = constants(params.shape_pprime, cfg)?;
    let rows = lattice_row_sum(params, 1.0, |x| {
        Ok(sigma_p_series(p, c(2.0 * PI * x), cfg)?.value * sc / x)
    })?;
    let eta2 = eta_p(p, c(2.0), cfg)?.value;
    Ok(2.0 * params.shape_pprime.kappa() * eta2
        + PI / sc * (p.kappa() * (2.0 * kpp.c1 - (4.0 * params.c).ln()) + rows))
}

/// Central value of the second analogue:
/// `2 kappa'(C2(p) + kappa log kappa) + kappa (4 zeta_{p'}'(0) + kappa' log(c/4))
/// + 8 sum_{m,n} w_m w'_n K_0(2 pi sqrt(c) lambda_m lambda'_n)`.
pub fn epstein2_central(params: &EpsteinParams, cfg: &EvalConfig) -> Result<C64> {
    let (p, pp) = (params.shape_p, params.shape_pprime);
    let kp = constants(p, cfg)?;
    let kpp = constants(pp, cfg)?;
    let closed = 2.0 * pp.kappa() * eta_p_pole_constant(p, &kp)
        + p.kappa() * (4.0 * zeta_p_derivative_at_zero(pp, &kpp) + pp.kappa() * (params.c / 4.0).ln());
    Ok(closed + 8.0 * double_k_sum(params, c(0.0), cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{riemann_zeta, EULER_GAMMA};

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn fin(p: f64) -> ShapeParam {
        ShapeParam::Finite(p)
    }

    fn params(p: ShapeParam, pp: ShapeParam, c: f64) -> EpsteinParams {
        EpsteinParams::new(p, pp, c).unwrap()
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / (1.0 + a.norm() + b.norm())
    }

    /// `sum_{m in Z} (m^2 + a^2)^{-2}` and its alternating version.
    fn row2(a: f64, alternating: bool) -> f64 {
        let (sh, ch) = ((PI * a).sinh(), (PI * a).cosh());
        if alternating {
            PI / (2.0 * a.powi(3) * sh) + PI * PI * ch / (2.0 * a * a * sh * sh)
        } else {
            PI * ch / (2.0 * a.powi(3) * sh) + PI * PI / (2.0 * a * a * sh * sh)
        }
    }

    /// `sum_{n>=1} row2(sqrt(c) mu_n)` with `mu_n = n` or `n - 1/2`; the algebraic part
    /// `pi/(2 a^3)` is summed through `zeta(3)`.
    fn column2(cc: f64, half: bool, alternating: bool) -> f64 {
        let sc = cc.sqrt();
        let z3 = riemann_zeta(c(3.0)).re;
        let alg = if alternating { 0.0 } else { PI / (2.0 * sc.powi(3)) * if half { 7.0 * z3 } else { z3 } };
        let mut rest = 0.0;
        for n in 1..200 {
            let mu = if half { n as f64 - 0.5 } else { n as f64 };
            let a = sc * mu;
            let r = row2(a, alternating) - if alternating { 0.0 } else { PI / (2.0 * a.powi(3)) };
            rest += r;
            if r.abs() < 1e-300 {
                break;
            }
        }
        alg + rest
    }

    #[test]
    fn classical_lattice_sum_at_two() {
        // mpmath: 4 zeta(2) beta(2)
        let want = 6.026_812_039_691_940_1;
        let inf = ShapeParam::Infinity;
        let got = epstein1_direct(&params(inf, inf, 1.0), c(2.0), &cfg()).unwrap();
        assert!((got.value.re - want).abs() < 1e-11, "{}", got.value);
        let cols = 2.0 * column2(1.0, false, false) + 2.0 * PI.powi(4) / 90.0;
        assert!((cols - want).abs() < 1e-12, "{cols}");
    }

    #[test]
    fn direct_matches_bessel_route() {
        let cfg = cfg();
        for &(p, pp, cc) in &[(fin(1.0), fin(1.0), 2.0), (fin(0.5), fin(2.0), 1.0), (ShapeParam::Zero, fin(1.0), 3.0)] {
            let e = params(p, pp, cc);
            for &s in &[c(1.5), c(1.2), C64::new(2.0, 1.0)] {
                let a = epstein1_direct(&e, s, &cfg).unwrap().value;
                let b = epstein1_bessel(&e, s, &cfg).unwrap();
                assert!(rel(a, b) < 1e-10, "{p:?} {pp:?} {cc} s={s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn direct_is_stable_under_doubling() {
        let e = params(fin(1.0), fin(1.0), 2.0);
        let base = cfg();
        let twice = EvalConfig { series_n: 2 * base.series_n, ..base };
        let a = epstein1_direct(&e, c(1.5), &base).unwrap().value;
        let b = epstein1_direct(&e, c(1.5), &twice).unwrap().value;
        assert!(rel(a, b) < 1e-11, "{a} vs {b}");
    }

    #[test]
    fn continued_matches_bessel_route_and_swap() {
        let cfg = cfg();
        let e = params(fin(1.0), fin(0.5), 2.0);
        for &s in &[c(0.25), c(0.6), C64::new(0.3, 2.0), c(-1.3)] {
            let a = epstein1_continued(&e, s, &cfg).unwrap();
            let b = epstein1_bessel(&e, s, &cfg).unwrap();
            assert!(rel(a, b) < 1e-10, "s={s}: {a} vs {b}");
            let swapped = rpow(e.c, -s) * epstein1_continued(&e.swapped(), s, &cfg).unwrap();
            assert!(rel(swapped, a) < 1e-10, "swap s={s}: {swapped} vs {a}");
        }
    }

    #[test]
    fn classical_value_at_zero() {
        let inf = ShapeParam::Infinity;
        let v = epstein1_continued(&params(inf, inf, 1.0), c(0.0), &cfg()).unwrap();
        assert!((v - c(-1.0)).norm() < 1e-12, "{v}");
    }

    #[test]
    fn laurent_of_constructed_function() {
        let d = laurent_extract(|s| Ok(c(1.0 / (s - 1.0) + EULER_GAMMA)), 1.0, &cfg()).unwrap();
        assert!((d.residue - c(1.0)).norm() < 1e-12);
        assert!((d.constant_term - c(EULER_GAMMA)).norm() < 1e-9);
        assert_eq!(d.eps_used, cfg().pole_eps);
    }

    #[test]
    fn classical_kronecker_constant() {
        // pi (2 gamma - log 4 - 4 log |eta(i)|), |eta(i)| = Gamma(1/4)/(2 pi^{3/4})
        let g14 = gamma(c(0.25)).re;
        let eta_i = g14 / (2.0 * PI.powf(0.75));
        let want = PI * (2.0 * EULER_GAMMA - 4f64.ln() - 4.0 * eta_i.ln());
        let inf = ShapeParam::Infinity;
        let e = params(inf, inf, 1.0);
        let cfg = cfg();
        let closed = kronecker1_constant(&e, &cfg).unwrap();
        assert!((closed.re - want).abs() < 1e-10, "{closed} vs {want}");
        let d = laurent_extract(|s| epstein1(&e, c(s), &cfg), 1.0, &cfg).unwrap();
        assert!((d.constant_term.re - want).abs() < 1e-6, "{} vs {want}", d.constant_term);
        assert!((d.residue.re - PI).abs() < 1e-6);
    }

    #[test]
    fn kronecker_constant_matches_extraction() {
        let cfg = cfg();
        for &(p, pp, cc) in &[(fin(1.0), fin(1.0), 4.0), (fin(0.5), fin(2.0), 1.0), (fin(2.0), ShapeParam::Zero, 2.0)] {
            let e = params(p, pp, cc);
            let d = laurent_extract(|s| epstein1(&e, c(s), &cfg), 1.0, &cfg).unwrap();
            assert!((d.residue - c(PI / cc.sqrt())).norm() < 1e-4, "{:?}", d);
            let k = kronecker1_constant(&e, &cfg).unwrap();
            assert!(rel(d.constant_term, k) < 1e-5, "{:?}: {} vs {k}", (p, pp, cc), d.constant_term);
        }
    }

    #[test]
    fn central_value_matches_extraction() {
        let cfg = cfg();
        let inf = ShapeParam::Infinity;
        for &(p, pp, cc) in &[(inf, inf, 1.0), (fin(1.0), fin(2.0), 4.0), (fin(0.5), fin(1.0), 2.0)] {
            let e = params(p, pp, cc);
            let d = laurent_extract(|s| epstein1_continued(&e, c(s), &cfg), 0.5, &cfg).unwrap();
            let v = epstein1_central(&e, &cfg).unwrap();
            assert!(d.residue.norm() < 1e-6, "{:?}", d);
            assert!(rel(d.constant_term, v) < 1e-5, "{:?}: {} vs {v}", (p, pp, cc), d.constant_term);
        }
    }

    #[test]
    fn central_kernel_bound() {
        let cfg = cfg();
        for &cc in &[25.0, 50.0, 100.0] {
            for &p in &[fin(0.5), fin(1.0), ShapeParam::Infinity, ShapeParam::Zero] {
                let e = params(p, fin(1.0), cc);
                let k = epstein1_central_kernel_sum(&e, &cfg).unwrap();
                let bound = 2f64.powf(2.5) * (-PI * cc.sqrt()).exp() / cc.powf(0.25);
                assert!(k.abs() <= bound, "c={cc}: {k} vs {bound}");
            }
        }
    }

    #[test]
    fn real_zero_classical_and_finite() {
        let cfg = cfg();
        for &p in &[ShapeParam::Infinity, fin(1.0)] {
            let e = params(p, ShapeParam::Infinity, 200.0);
            let z = real_zero(&e, &cfg).unwrap();
            assert!(z.root > 0.5 && z.root < 1.0);
            assert!(z.hi - z.lo < 1e-8);
            assert!(z.value_lo > 0.0 && z.value_hi <= 0.0);
        }
        let e = params(fin(1.0), ShapeParam::Infinity, 1.0);
        assert_eq!(real_zero(&e, &cfg).unwrap_err(), KoshError::NoSignChange);
    }

    #[test]
    fn second_analogue_routes_agree() {
        let cfg = cfg();
        for &(p, pp, cc, s) in &[
            (fin(1.0), fin(2.0), 3.0, c(1.5)),
            (fin(0.5), fin(1.0), 1.0, C64::new(2.0, 0.5)),
            (ShapeParam::Zero, fin(1.0), 2.0, c(1.3)),
        ] {
            let e = params(p, pp, cc);
            let a = epstein2(&e, s, &cfg, Epstein2Route::Definition).unwrap();
            let b = epstein2(&e, s, &cfg, Epstein2Route::SelbergChowla).unwrap();
            assert!(rel(a, b) < 1e-9, "{:?} s={s}: {a} vs {b}", (p, pp, cc));
        }
    }

    #[test]
    fn second_analogue_limit_lattices() {
        let cfg = cfg();
        let (z, inf) = (ShapeParam::Zero, ShapeParam::Infinity);
        let z4 = PI.powi(4) / 90.0;
        for &cc in &[1.0, 2.0] {
            let cases = [
                (inf, inf, 2.0 * column2(cc, false, false) + 2.0 * z4),
                (z, z, 2.0 * column2(cc, true, true)),
                (z, inf, 2.0 * column2(cc, false, true) - 2.0 * 7.0 / 8.0 * z4),
                (inf, z, 2.0 * column2(cc, true, false)),
            ];
            for (p, pp, want) in cases {
                let e = params(p, pp, cc);
                for route in [Epstein2Route::Definition, Epstein2Route::SelbergChowla] {
                    let v = epstein2(&e, c(2.0), &cfg, route).unwrap();
                    assert!((v.re - want).abs() < 1e-10 * want.abs().max(1.0), "{p:?} {pp:?} c={cc} {route:?}: {v} vs {want}");
                }
            }
        }
    }

    #[test]
    fn second_analogue_functional_equation() {
        let cfg = cfg();
        let inf = ShapeParam::Infinity;
        let r = epstein2_functional_eq_residual(&params(inf, inf, 1.0), c(2.0), &cfg).unwrap();
        assert!(r < 1e-8, "{r}");
        let e = params(fin(1.0), fin(0.5), 2.0);
        for &s in &[c(1.3), c(1.7), c(2.5)] {
            let r = epstein2_functional_eq_residual(&e, s, &cfg).unwrap();
            assert!(r < 1e-6, "s={s}: {r}");
        }
        let e = params(fin(1.5), fin(1.5), 2.0);
        let r = epstein2_functional_eq_residual(&e, c(0.5 + 0.01), &cfg).unwrap();
        assert!(r < 1e-9, "{r}");
    }

    #[test]
    fn first_and_second_analogue_functional_equation() {
        // p = inf on the first analogue side
        let cfg = cfg();
        let (inf, pp) = (ShapeParam::Infinity, fin(1.0));
        let e1 = params(inf, pp, 2.0);
        let e2 = params(pp, inf, 2.0);
        for &s in &[c(1.3), c(1.7)] {
            let left = rpow(PI / 2f64.sqrt(), -s) * gamma(s) * epstein1(&e1, s, &cfg).unwrap();
            let right = epstein2_completed(&e2, 1.0 - s, &cfg).unwrap();
            assert!(rel(left, right) < 1e-9, "s={s}: {left} vs {right}");
        }
    }

    #[test]
    fn second_analogue_residue_and_constant() {
        let cfg = cfg();
        let e = params(fin(1.0), fin(2.0), 4.0);
        let f = |s: f64| epstein2(&e, c(s), &cfg, Epstein2Route::SelbergChowla);
        let d = laurent_extract(f, 1.0, &cfg).unwrap();
        let want = PI / (2.0 * e.shape_p.kappa().recip());
        assert!((d.residue.re - want).abs() < 1e-4, "{:?} vs {want}", d);
        let k = kronecker2_constant(&e, &cfg).unwrap();
        assert!(rel(d.constant_term, k) < 1e-5, "{} vs {k}", d.constant_term);
        let d = laurent_extract(f, 0.5, &cfg).unwrap();
        let v = epstein2_central(&e, &cfg).unwrap();
        assert!(rel(d.constant_term, v) < 1e-5, "{} vs {v}", d.constant_term);
    }

    #[test]
    fn second_central_symmetric_blocks() {
        let cfg = cfg();
        let e = params(fin(1.3), fin(1.3), 1.0);
        let a = epstein2_central(&e, &cfg).unwrap();
        let b = epstein2_central(&e.transposed(), &cfg).unwrap();
        assert!((a - b).norm() < 1e-13);
    }
}
