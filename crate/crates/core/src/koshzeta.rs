//! The Koshliakov zeta function `zeta_p`, its companion `eta_p`, the coefficients
//! `(s, nu k)_k` and the constants `C1`, `C2`, `gamma_p`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::config::{EvalConfig, QuadratureSpec};
use crate::error::{KoshError, Result};
use crate::sequence::{sequence, KoshSequence, ShapeParam};
use crate::specfun::quad::{gauss_kronrod, semi_infinite, sum_results, tanh_sinh};
use crate::specfun::{
    ccospi, csinpi, gamma, incomplete_gamma_q, pochhammer, rgamma, riemann_zeta, rpow, EULER_GAMMA, LN_2PI,
};

/// Taylor coefficients of `1/log(1+x) - 1/x` (Gregory coefficients).
pub const GREGORY: [f64; 15] = [
    1.0 / 2.0,
    -1.0 / 12.0,
    1.0 / 24.0,
    -19.0 / 720.0,
    3.0 / 160.0,
    -863.0 / 60480.0,
    275.0 / 24192.0,
    -33953.0 / 3628800.0,
    8183.0 / 1036800.0,
    -3250433.0 / 479001600.0,
    4671.0 / 788480.0,
    -13695779093.0 / 2615348736000.0,
    2224234463.0 / 475517952000.0,
    -132282840127.0 / 31384184832000.0,
    2639651053.0 / 689762304000.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: C64,
    pub tail_bound: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl SeriesValue {
    fn exact(value: C64) -> Self {
        SeriesValue { value, tail_bound: 0.0, terms_used: 0, converged: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KoshConstants {
    pub c1: f64,
    pub c2: f64,
    pub gamma_p: f64,
    /// `Q_{2 pi p}(0)`; 0 for both limit shapes.
    pub q0: f64,
}

/// `sum_n w_n F(lambda_n)` by exact summation below `N` plus the Gregory formula
/// `int_{lambda_N}^inf F + sum_k G_k Delta^k g(N)`, where `g(n) = w_n F(lambda_n)`.
///
/// `tail(L)` must return `int_L^inf F(lambda) d lambda` (or its continuation).
pub fn gregory_sum<F, T>(seq: &KoshSequence, n: usize, k: usize, f: F, tail: T) -> SeriesValue
where
    F: Fn(f64) -> C64,
    T: Fn(f64) -> C64,
{
    let k = k.min(GREGORY.len() - 1);
    assert!(seq.len() > n + k, "sequence too short for the Gregory sum");
    let mut part = NeumaierSum::default();
    let mut mass = 0.0;
    for j in 1..n {
        let t = seq.weight(j) * f(seq.lambda(j));
        mass += t.norm();
        part.add(t);
    }
    let part = part.total();
    let mut d: Vec<C64> = (0..=k).map(|j| seq.weight(n + j) * f(seq.lambda(n + j))).collect();
    let mut corr = C64::new(0.0, 0.0);
    let mut last = 0.0;
    for g in GREGORY.iter().take(k + 1) {
        let c = *g * d[0];
        corr += c;
        last = c.norm();
        d = d.windows(2).map(|w| w[1] - w[0]).collect();
        if d.is_empty() {
            break;
        }
    }
    let value = part + tail(seq.lambda(n)) + corr;
    let tail_bound = last + 4.0 * f64::EPSILON * (mass + value.norm());
    SeriesValue { value, tail_bound, terms_used: n + k, converged: true }
}

/// Compensated complex summation.
#[derive(Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: C64,
    comp: C64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: C64) {
        let t = self.sum + x;
        let fix = |s: f64, x: f64, t: f64| if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        self.comp.re += fix(self.sum.re, x.re, t.re);
        self.comp.im += fix(self.sum.im, x.im, t.im);
        self.sum = t;
    }

    pub fn total(&self) -> C64 {
        self.sum + self.comp
    }
}

fn shape_sequence(shape: ShapeParam, cfg: &EvalConfig) -> Result<std::sync::Arc<KoshSequence>> {
    sequence(shape, cfg.series_n + cfg.gregory_k + 2)
}

/// `zeta_p(s)` for every `s != 1`: the Gregory route of [`zeta_p_gregory`] on
/// `Re s >= -1/2`, the functional equation with the `eta_p` series further left
/// (where the growing terms make the Gregory partial sums cancel).
pub fn zeta_p_any(shape: ShapeParam, s: C64, cfg: &EvalConfig) -> Result<SeriesValue> {
    if s.re < -0.5 && shape.is_finite() {
        return Ok(SeriesValue::exact(zeta_p_continued(shape, s, cfg)?));
    }
    zeta_p_gregory(shape, s, cfg)
}

/// `zeta_p(s)` via the weighted Gregory sum, valid for every `s != 1`
/// (the tail integral `L^{1-s}/(s-1)` is continued analytically).
pub fn zeta_p_gregory(shape: ShapeParam, s: C64, cfg: &EvalConfig) -> Result<SeriesValue> {
    if s == C64::new(1.0, 0.0) {
        return Err(KoshError::Pole("zeta_p at s = 1".into()));
    }
    match shape {
        ShapeParam::Infinity => Ok(SeriesValue::exact(riemann_zeta(s))),
        ShapeParam::Zero => Ok(SeriesValue::exact((rpow(2.0, s) - 1.0) * riemann_zeta(s))),
        ShapeParam::Finite(_) => {
            let seq = shape_sequence(shape, cfg)?;
            Ok(gregory_sum(&seq, cfg.series_n, cfg.gregory_k, |l| rpow(l, -s), |l| rpow(l, 1.0 - s) / (s - 1.0)))
        }
    }
}

/// `zeta_p(s) = sum w_n lambda_n^{-s}` on `Re s > 1`.
pub fn zeta_p(shape: ShapeParam, s: C64, cfg: &EvalConfig) -> Result<SeriesValue> {
    if s.re <= 1.0 {
        return Err(KoshError::domain(format!("zeta_p series needs Re s > 1, got {s}")));
    }
    zeta_p_any(shape, s, cfg)
}

/// `zeta_p(s)` for `Re s < 0` through `eta_p(1 - s)`, with the closed forms at
/// `s = 0` and at negative even integers; direct series for `Re s > 1`.
pub fn zeta_p_continued(shape: ShapeParam, s: C64, cfg: &EvalConfig) -> Result<C64> {
    if s == C64::new(0.0, 0.0) {
        return Ok(C64::new(-shape.kappa() / 2.0, 0.0));
    }
    if s.im == 0.0 && s.re < 0.0 && s.re.fract() == 0.0 && (s.re as i64) % 2 == 0 {
        return Ok(C64::new(0.0, 0.0));
    }
    if s.re > 1.0 {
        return Ok(zeta_p(shape, s, cfg)?.value);
    }
    if s.re >= 0.0 {
        return Err(KoshError::Strip(format!("zeta_p_continued at {s}")));
    }
    let t = 1.0 - s;
    let eta = eta_p(shape, t, cfg)?.value;
    Ok(2.0 * ccospi(t / 2.0) * gamma(t) * rpow(2.0 * PI, -t) * eta)
}

/// `(1 + 2/nu)^{-s}`-type constants of the asymptotic expansion of `(s, nu k)_k`:
/// returns `(c2, c4)` with `(s, nu k)_k ~ kappa^s (1 - c2/k^2 + c4/k^4)`.
fn coeff_asymptotics(s: C64, nu: f64) -> (C64, C64) {
    let b = nu + 2.0;
    let c2 = 2.0 / 3.0 * pochhammer(s, 3) / b.powi(3);
    let c4 = 2.0 / 9.0 * pochhammer(s, 6) / b.powi(6) - 2.0 / 5.0 * pochhammer(s, 5) / b.powi(5);
    (c2, c4)
}

fn coeff_cut(s: C64) -> f64 {
    60.0 + 2.0 * s.norm()
}

/// `(s, nu k)_k = (1/Gamma(s)) int_0^inf x^{s-1} e^{-x} ((k nu - x)/(k nu + x))^k dx`, `Re s > 0`.
pub fn kosh_coeff(s: C64, k: usize, nu: f64, quad: &QuadratureSpec) -> Result<C64> {
    if s.re <= 0.0 {
        return Err(KoshError::domain(format!("kosh_coeff needs Re s > 0, got {s}")));
    }
    if k == 0 || !(nu > 0.0) {
        return Err(KoshError::InvalidParam("kosh_coeff needs k >= 1 and nu > 0".into()));
    }
    let kn = k as f64 * nu;
    let kf = k as f64;
    let below = |x: f64| -> C64 {
        let r = (-2.0 * kf * (x / kn).atanh()).exp();
        (rpow(x, s - 1.0)) * ((-x).exp() * r)
    };
    let above = |x: f64| -> C64 {
        let r = (-2.0 * kf * (kn / x).atanh()).exp();
        let r = if k % 2 == 0 { r } else { -r };
        rpow(x, s - 1.0) * ((-x).exp() * r)
    };
    integrate_split(s, kn, below, above, quad).map(|v| v * rgamma(s))
}

fn integrate_split<F, G>(s: C64, kn: f64, below: F, above: G, quad: &QuadratureSpec) -> Result<C64>
where
    F: Fn(f64) -> C64,
    G: Fn(f64) -> C64,
{
    let cut = coeff_cut(s);
    let a = kn.min(1.0);
    let mut parts = vec![tanh_sinh(|x, _, _| below(x), 0.0, a, quad)];
    let hi = kn.min(cut);
    if hi > a {
        parts.push(gauss_kronrod(&below, a, hi, quad));
    }
    if kn < cut {
        parts.push(semi_infinite(|x, _| above(x), kn, 1.0, quad));
    }
    sum_results(&parts).into_result("kosh_coeff")
}

/// `(s, nu k)_k - kappa^s`, computed without cancellation.
pub fn kosh_coeff_minus_limit(s: C64, k: usize, nu: f64, quad: &QuadratureSpec) -> Result<C64> {
    if s.re <= 0.0 {
        return Err(KoshError::domain(format!("kosh_coeff needs Re s > 0, got {s}")));
    }
    let kn = k as f64 * nu;
    let kf = k as f64;
    let below = |x: f64| -> C64 {
        let u = x / kn;
        let d = (2.0 * kf * (u - u.atanh())).exp_m1();
        rpow(x, s - 1.0) * ((-x - 2.0 * x / nu).exp() * d)
    };
    let above = |x: f64| -> C64 {
        let r = (-2.0 * kf * (kn / x).atanh()).exp();
        let r = if k % 2 == 0 { r } else { -r };
        rpow(x, s - 1.0) * ((-x).exp() * (r - (-2.0 * x / nu).exp()))
    };
    integrate_split(s, kn, below, above, quad).map(|v| v * rgamma(s))
}

/// Fractional-integral form of the coefficient:
/// `(s, nu k)_k = (-1)^k + (-1)^{k+1} int_0^inf (1 + u/(2 nu k))^{-s} e^{-u/2} L^{(1)}_{k-1}(u) du`.
pub fn kosh_coeff_fractional(s: C64, k: usize, nu: f64, quad: &QuadratureSpec) -> Result<C64> {
    if k == 0 || !(nu > 0.0) {
        return Err(KoshError::InvalidParam("kosh_coeff needs k >= 1 and nu > 0".into()));
    }
    let two_nk = 2.0 * nu * k as f64;
    let f = |u: f64| rpow(1.0 + u / two_nk, -s) * ((-0.5 * u).exp() * crate::specfun::laguerre(k - 1, 1.0, u));
    let hi = 4.0 * k as f64 + 100.0;
    let panels = (hi / 8.0).ceil() as usize;
    let parts: Vec<_> = (0..panels)
        .map(|j| gauss_kronrod(f, j as f64 * hi / panels as f64, (j + 1) as f64 * hi / panels as f64, quad))
        .collect();
    let integral = sum_results(&parts).into_result("kosh_coeff_fractional")?;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * (1.0 - integral))
}

fn mellin_terms(nu: f64) -> usize {
    40 + (25.0 / nu).ceil() as usize
}

/// Series of `eta_p` with two asymptotic orders of the coefficients subtracted:
/// `kappa^s [zeta(s) - c2 zeta(s+2) + c4 zeta(s+4)] + sum_k [(s,nu k)_k - kappa^s(1 - c2/k^2 + c4/k^4)]/k^s`.
fn eta_mellin(p: f64, s: C64, zeta_s: C64, quad: &QuadratureSpec) -> Result<SeriesValue> {
    let nu = 2.0 * PI * p;
    let kappa = p * PI / (p * PI + 1.0);
    let ks = rpow(kappa, s);
    let (c2, c4) = coeff_asymptotics(s, nu);
    let mut total = ks * (zeta_s - c2 * riemann_zeta(s + 2.0) + c4 * riemann_zeta(s + 4.0));
    let big_k = mellin_terms(nu);
    let mut last = 0.0;
    for k in 1..=big_k {
        let kf = k as f64;
        let d = kosh_coeff_minus_limit(s, k, nu, quad)? - ks * (-c2 / (kf * kf) + c4 / kf.powi(4));
        let t = d * rpow(kf, -s);
        last = t.norm();
        total += t;
    }
    let tail_bound = last * big_k as f64 / (s.re + 5.0) + 1e-15 * total.norm();
    Ok(SeriesValue {
        value: total,
        tail_bound,
        terms_used: big_k,
        converged: tail_bound <= 1e-10 * total.norm().max(1.0),
    })
}

/// `eta_p(s) = sum_k (s, 2 pi p k)_k k^{-s}` on `Re s > 1`.
pub fn eta_p(shape: ShapeParam, s: C64, cfg: &EvalConfig) -> Result<SeriesValue> {
    if s.re <= 1.0 {
        return Err(KoshError::domain(format!("eta_p series needs Re s > 1, got {s}")));
    }
    match shape {
        ShapeParam::Infinity => Ok(SeriesValue::exact(riemann_zeta(s))),
        ShapeParam::Zero => Ok(SeriesValue::exact((rpow(2.0, 1.0 - s) - 1.0) * riemann_zeta(s))),
        ShapeParam::Finite(p) => eta_mellin(p, s, riemann_zeta(s), &cfg.quad),
    }
}

/// `eta_p(s)` for every `s != 1`: the coefficient series on `Re s > 1`, otherwise
/// `(2 pi)^s zeta_p(1-s) Gamma(1-s) sin(pi s/2)/pi` with the Gregory route for `zeta_p`.
pub fn eta_p_any(shape: ShapeParam, s: C64, cfg: &EvalConfig) -> Result<C64> {
    if s == C64::new(1.0, 0.0) {
        return Err(KoshError::Pole("eta_p at s = 1".into()));
    }
    if s.re > 1.0 {
        return Ok(eta_p(shape, s, cfg)?.value);
    }
    match shape {
        ShapeParam::Infinity => return Ok(riemann_zeta(s)),
        ShapeParam::Zero => return Ok((rpow(2.0, 1.0 - s) - 1.0) * riemann_zeta(s)),
        ShapeParam::Finite(_) => {}
    }
    if s == C64::new(0.0, 0.0) {
        return Ok(C64::new(-0.5, 0.0));
    }
    let t = 1.0 - s;
    let z = zeta_p_any(shape, t, cfg)?.value;
    Ok(rpow(2.0 * PI, s) * z * gamma(t) * csinpi(s / 2.0) / PI)
}

/// `C1`, `C2`, `gamma_p` and `Q_{2 pi p}(0)`.
///
/// `C1 = lim (sum_{n<N} w_n/lambda_n - log lambda_N)` and `C2 = lim_{s->1} (eta_p(s) - kappa/(s-1))`
/// minus `kappa log kappa`; `gamma_p = C2 + kappa C1 - kappa gamma + kappa log kappa`.
pub fn constants(shape: ShapeParam, cfg: &EvalConfig) -> Result<KoshConstants> {
    match shape {
        ShapeParam::Infinity => Ok(KoshConstants { c1: EULER_GAMMA, c2: EULER_GAMMA, gamma_p: EULER_GAMMA, q0: 0.0 }),
        ShapeParam::Zero => {
            let ln2 = std::f64::consts::LN_2;
            Ok(KoshConstants { c1: EULER_GAMMA + 2.0 * ln2, c2: -ln2, gamma_p: -ln2, q0: 0.0 })
        }
        ShapeParam::Finite(p) => {
            let seq = shape_sequence(shape, cfg)?;
            let c1 = gregory_sum(&seq, cfg.series_n, cfg.gregory_k, |l| C64::new(1.0 / l, 0.0), |l| {
                C64::new(-l.ln(), 0.0)
            })
            .value
            .re;
            let c2 = constant_c2(p, &cfg.quad)?;
            let kappa = shape.kappa();
            let gamma_p = c2 + kappa * c1 - kappa * EULER_GAMMA + shape.kappa_log_kappa();
            let q0 = incomplete_gamma_q(C64::new(0.0, 0.0), 2.0 * PI * p)?.re;
            Ok(KoshConstants { c1, c2, gamma_p, q0 })
        }
    }
}

fn constant_c2(p: f64, quad: &QuadratureSpec) -> Result<f64> {
    let nu = 2.0 * PI * p;
    let kappa = p * PI / (p * PI + 1.0);
    let one = C64::new(1.0, 0.0);
    let (c2, c4) = coeff_asymptotics(one, nu);
    let z3 = riemann_zeta(C64::new(3.0, 0.0));
    let z5 = riemann_zeta(C64::new(5.0, 0.0));
    let mut total = kappa * EULER_GAMMA + kappa * (-c2.re * z3.re + c4.re * z5.re);
    for k in 1..=mellin_terms(nu) {
        let kf = k as f64;
        let d = kosh_coeff_minus_limit(one, k, nu, quad)?.re - kappa * (-c2.re / (kf * kf) + c4.re / kf.powi(4));
        total += d / kf;
    }
    Ok(total)
}

/// Laurent constant of `eta_p` at `s = 1`: `eta_p(s) = kappa/(s-1) + (C2 + kappa log kappa) + O(s-1)`.
pub fn eta_p_pole_constant(shape: ShapeParam, k: &KoshConstants) -> f64 {
    k.c2 + shape.kappa_log_kappa()
}

/// `zeta_p'(0) = (C2 + kappa log kappa)/2 - kappa (gamma + log 2 pi)/2`.
pub fn zeta_p_derivative_at_zero(shape: ShapeParam, k: &KoshConstants) -> f64 {
    0.5 * eta_p_pole_constant(shape, k) - 0.5 * shape.kappa() * (EULER_GAMMA + LN_2PI)
}

/// `eta_p'(0) = C1/2 - gamma/2 - log(2 pi)/2`.
pub fn eta_p_derivative_at_zero(k: &KoshConstants) -> f64 {
    0.5 * (k.c1 - EULER_GAMMA - LN_2PI)
}

/// `zeta_p(2) = (pi^2/6) (1 + 3q(1+q))/(1+q)^2` with `q = 1/(pi p)`.
pub fn zeta_p_two_closed_form(shape: ShapeParam) -> f64 {
    let z2 = PI * PI / 6.0;
    match shape {
        ShapeParam::Infinity => z2,
        ShapeParam::Zero => 3.0 * z2,
        ShapeParam::Finite(p) => {
            let q = 1.0 / (PI * p);
            z2 * (1.0 + 3.0 * q * (1.0 + q)) / ((1.0 + q) * (1.0 + q))
        }
    }
}

/// `sigma_p(t) = (p + t)/(p - t)`; domain error at the pole `t = p`.
pub fn sigma_ratio(shape: ShapeParam, t: f64) -> Result<f64> {
    if let ShapeParam::Finite(p) = shape {
        if t == p {
            return Err(KoshError::Pole(format!("sigma_p at t = p = {p}")));
        }
    }
    Ok(shape.sigma(t))
}

/// `sigma_p(z) = sum_n w_n e^{-lambda_n z}` for `Re z > 0`, with tail bound
/// `e^{-(N+1/2) Re z}/(1 - e^{-Re z})`.
pub fn sigma_p_series(shape: ShapeParam, z: C64, cfg: &EvalConfig) -> Result<SeriesValue> {
    if !(z.re > 0.0) {
        return Err(KoshError::domain(format!("sigma_p series diverges for Re z = {}", z.re)));
    }
    let bound = |n: usize| (-(n as f64 + 0.5) * z.re).exp() / (-(-z.re).exp_m1());
    // smallest N with the tail below 1e-17 of the leading term
    let lead = (-z.re).exp();
    let mut n = 1usize;
    while bound(n) > 1e-17 * lead && n < 10_000_000 {
        n *= 2;
    }
    let seq = sequence(shape, n.max(cfg.series_n.min(n)))?;
    let mut total = C64::new(0.0, 0.0);
    for j in 1..=n {
        total += seq.weight(j) * (-seq.lambda(j) * z).exp();
    }
    let tail_bound = bound(n);
    Ok(SeriesValue { value: total, tail_bound, terms_used: n, converged: tail_bound <= 1e-15 * total.norm().max(1e-300) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn zeta_two_closed_form() {
        for &p in &[0.5, 1.0, 2.0] {
            let sh = ShapeParam::Finite(p);
            let z = zeta_p(sh, c(2.0), &cfg()).unwrap();
            assert_relative_eq!(z.value.re, zeta_p_two_closed_form(sh), max_relative = 1e-13);
        }
    }

    #[test]
    fn zeta_p_reference_values() {
        // high precision oracle (Gregory sum in 30-digit arithmetic)
        let z = zeta_p(ShapeParam::Finite(1.0), c(2.0), &cfg()).unwrap();
        assert!((z.value.re - 2.138_007_267_044_298_8).abs() < 1e-14);
    }

    #[test]
    fn zeta_p_special_points() {
        for &p in &[0.5, 1.0, 2.0] {
            let sh = ShapeParam::Finite(p);
            let z0 = zeta_p_any(sh, c(0.0), &cfg()).unwrap().value.re;
            assert!((z0 + sh.kappa() / 2.0).abs() < 1e-12, "p = {p}: {z0}");
            let zm2 = zeta_p_gregory(sh, c(-2.0), &cfg()).unwrap().value;
            assert!(zm2.norm() < 1e-9, "{zm2}");
            assert_eq!(zeta_p_continued(sh, c(-2.0), &cfg()).unwrap(), c(0.0));
        }
    }

    #[test]
    fn coefficient_routes_agree() {
        let q = QuadratureSpec::default();
        for &(s, k, nu) in &[(c(1.5), 1, 2.0 * PI), (C64::new(2.0, 1.0), 3, PI), (c(0.7), 7, 0.6), (c(3.0), 12, 6.0)] {
            let a = kosh_coeff(s, k, nu, &q).unwrap();
            let b = kosh_coeff_fractional(s, k, nu, &q).unwrap();
            assert!((a - b).norm() < 1e-11, "{s} {k} {nu}: {a} vs {b}");
            let kap = rpow(1.0 / (1.0 + 2.0 / nu), s);
            let d = kosh_coeff_minus_limit(s, k, nu, &q).unwrap();
            assert!((a - kap - d).norm() < 1e-12);
        }
    }

    #[test]
    fn coefficient_limit_in_k() {
        let q = QuadratureSpec::default();
        let nu = 2.0 * PI;
        let s = c(1.5);
        let big = kosh_coeff(s, 400, nu, &q).unwrap();
        assert!((big.re - (1.0 + 2.0 / nu).powf(-1.5)).abs() < 1e-4);
    }

    #[test]
    fn eta_limits_and_reference() {
        let e = eta_p(ShapeParam::Infinity, c(2.0), &cfg()).unwrap().value.re;
        assert_relative_eq!(e, PI * PI / 6.0, max_relative = 1e-14);
        let e = eta_p(ShapeParam::Zero, c(2.0), &cfg()).unwrap().value.re;
        assert_relative_eq!(e, -PI * PI / 12.0, max_relative = 1e-14);
    }

    #[test]
    fn functional_equation_pointwise() {
        for &p in &[0.5, 1.0, 2.0] {
            let sh = ShapeParam::Finite(p);
            for &s in &[c(1.5), c(2.5), C64::new(2.0, 1.0)] {
                let lhs = zeta_p_gregory(sh, 1.0 - s, &cfg()).unwrap().value;
                let eta = eta_p(sh, s, &cfg()).unwrap().value;
                let rhs = 2.0 * ccospi(s / 2.0) * gamma(s) * rpow(2.0 * PI, -s) * eta;
                assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()), "p={p} s={s}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn constants_reference() {
        let k = constants(ShapeParam::Finite(1.0), &cfg()).unwrap();
        assert!((k.c1 - 0.845_400_946_225_345_6).abs() < 1e-13, "{}", k.c1);
        assert!((k.c2 - 0.430_616_571_753_215_4).abs() < 1e-12, "{}", k.c2);
        assert!((k.gamma_p - 0.424_422_849_24).abs() < 1e-10, "{}", k.gamma_p);
        // E1(2 pi)
        assert!((k.q0 - 2.604_205_863_961_324e-4).abs() < 1e-16, "{}", k.q0);
    }

    #[test]
    fn laurent_at_one_matches_constant() {
        let sh = ShapeParam::Finite(1.0);
        let k = constants(sh, &cfg()).unwrap();
        let eps = 1e-3;
        let f = |s: f64| eta_p_any(sh, c(s), &cfg()).unwrap().re;
        let sym = 0.5 * (f(1.0 + eps) + f(1.0 - eps));
        let sym2 = 0.5 * (f(1.0 + eps / 2.0) + f(1.0 - eps / 2.0));
        let extrap = (4.0 * sym2 - sym) / 3.0;
        assert!((extrap - eta_p_pole_constant(sh, &k)).abs() < 1e-9, "{extrap}");
    }

    #[test]
    fn derivative_at_zero() {
        let sh = ShapeParam::Finite(1.0);
        let k = constants(sh, &cfg()).unwrap();
        let h = 1e-4;
        let d = (zeta_p_any(sh, c(h), &cfg()).unwrap().value.re - zeta_p_any(sh, c(-h), &cfg()).unwrap().value.re)
            / (2.0 * h);
        assert!((d - zeta_p_derivative_at_zero(sh, &k)).abs() < 1e-7, "{d}");
        let d = (eta_p_any(sh, c(h), &cfg()).unwrap().re - eta_p_any(sh, c(-h), &cfg()).unwrap().re) / (2.0 * h);
        assert!((d - eta_p_derivative_at_zero(&k)).abs() < 1e-7, "{d}");
    }

    #[test]
    fn c1_against_ladder() {
        // Richardson ladder on raw partial sums: S_N - log lambda_N = C1 + a/N + b/N^2 + ...
        let sh = ShapeParam::Finite(1.0);
        let seq = sequence(sh, 5000).unwrap();
        let raw = |n: usize| -> f64 {
            (1..n).map(|j| seq.weight(j) / seq.lambda(j)).sum::<f64>() - seq.lambda(n).ln()
        };
        let ns = [500usize, 1000, 2000, 4000];
        let mut t: Vec<f64> = ns.iter().map(|&n| raw(n)).collect();
        for stage in 1..ns.len() {
            let f = 2f64.powi(stage as i32);
            t = t.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        }
        let k = constants(sh, &cfg()).unwrap();
        assert!((t[0] - k.c1).abs() < 1e-10, "{} vs {}", t[0], k.c1);
    }

    #[test]
    fn sigma_series_limits() {
        let z = C64::new(1.0, 0.5);
        let v = sigma_p_series(ShapeParam::Infinity, z, &cfg()).unwrap().value;
        let want = (-z).exp() / (1.0 - (-z).exp());
        assert!((v - want).norm() < 1e-15);
        let v = sigma_p_series(ShapeParam::Zero, z, &cfg()).unwrap().value;
        let want = (-z / 2.0).exp() / (1.0 - (-z).exp());
        assert!((v - want).norm() < 1e-15);
        assert!(sigma_p_series(ShapeParam::Finite(1.0), C64::new(0.0, 1.0), &cfg()).is_err());
        assert_eq!(sigma_ratio(ShapeParam::Finite(2.0), 1.0).unwrap(), 3.0);
    }

    #[test]
    fn limit_constants() {
        let k = constants(ShapeParam::Zero, &cfg()).unwrap();
        assert_relative_eq!(k.c1, EULER_GAMMA + 2.0 * std::f64::consts::LN_2);
        let k = constants(ShapeParam::Infinity, &cfg()).unwrap();
        assert_eq!(k.gamma_p, EULER_GAMMA);
    }
}
