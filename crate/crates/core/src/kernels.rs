//! Kernels and Watson-type series.
//!
//! `B_p(t) = 1/(sigma_p(t) e^{2 pi t} - 1)` is the kernel behind every integral here.
//! The Watson series `phi_p(s, x) = sum w_n (lambda_n^2 + x^2)^{-s}` has two right-hand
//! sides (a Bessel series and a `B_p` integral), and the weighted Bessel series
//! `sum w_n lambda_n^nu K_nu(2 pi lambda_n x)` has a `J`-integral side and a double
//! integral side.

use num_complex::Complex64 as C64;
use std::f64::consts::{PI, SQRT_2};

use crate::config::{EvalConfig, QuadratureSpec};
use crate::error::{KoshError, Result};
use crate::koshzeta::{gregory_sum, NeumaierSum, SeriesValue, GREGORY};
use crate::sequence::{sequence, ShapeParam};
use crate::specfun::quad::{gauss_kronrod, kronrod_nodes, oscillatory, semi_infinite, sum_results, tanh_sinh};
use crate::specfun::{bessel_j, bessel_k_scaled, gamma, laguerre, near_nonpositive_integer, rgamma, rpow};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `B_p(t) = 1/(sigma_p(t) e^{2 pi t} - 1)` for `t > 0`.
///
/// `B_inf(t) = 1/(e^{2 pi t} - 1)` and `B_0(t) = -1/(e^{2 pi t} + 1)`.
pub fn b_kernel(shape: ShapeParam, t: f64) -> f64 {
    let e = (-2.0 * PI * t).exp();
    match shape {
        ShapeParam::Infinity => 1.0 / (2.0 * PI * t).exp_m1(),
        ShapeParam::Zero => -e / (1.0 + e),
        ShapeParam::Finite(p) => {
            // (p - t) e / ((p + t) - (p - t) e)
            let den = -p * (-2.0 * PI * t).exp_m1() + t * (1.0 + e);
            (p - t) * e / den
        }
    }
}

/// The kernel `G_p(a)` of the theta-type transformation, for `a > 0`.
///
/// Numerator and denominator are both multiplied by `2 e^{-pi sqrt(2a)}`, so no
/// hyperbolic function is ever evaluated and large `a` cannot overflow.
pub fn g_kernel(shape: ShapeParam, a: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(KoshError::domain(format!("G_p needs a > 0, got {a}")));
    }
    let r = (2.0 * a).sqrt();
    let th = PI * r;
    let e = (-th).exp();
    let (sn, cs) = th.sin_cos();
    let cosh2 = 1.0 + e * e;
    let sinh2 = 1.0 - e * e;
    Ok(match shape {
        ShapeParam::Infinity => 2.0 * e * (cs - sn - e) / (cosh2 - 2.0 * e * cs),
        ShapeParam::Zero => -2.0 * e * (cs - sn + e) / (cosh2 + 2.0 * e * cs),
        ShapeParam::Finite(p) => {
            let num = 2.0 * e * ((p * p - a) * (cs - sn) - r * p * (cs + sn)) - 2.0 * e * e * (p * p - r * p + a);
            let den = p * p * (cosh2 - 2.0 * e * cs) + r * p * (sinh2 + 2.0 * e * sn) + a * (cosh2 + 2.0 * e * cs);
            num / den
        }
    })
}

/// `int_L^inf (lambda^2 + x^2)^{-s} d lambda`, continued analytically to every
/// `s` except `s = 1/2 - j`.
pub fn tail_power(s: C64, x: f64, l: f64, quad: &QuadratureSpec) -> Result<C64> {
    let start = l.max(2.0 * x);
    let mut total = c(0.0);
    if start > l {
        total += gauss_kronrod(|t| rpow(t * t + x * x, -s), l, start, quad).into_result("tail_power")?;
    }
    let q = (x / start) * (x / start);
    let mut binom = c(1.0);
    let mut pw = rpow(start, 1.0 - 2.0 * s);
    for j in 0..400 {
        let den = 2.0 * s + (2 * j) as f64 - 1.0;
        if den.norm() < 1e-14 {
            return Err(KoshError::Pole(format!("tail_power at s = {s}")));
        }
        let term = binom * pw / den;
        total += term;
        if term.norm() <= 1e-18 * total.norm() && j > 2 {
            break;
        }
        binom *= (-s - j as f64) / (j + 1) as f64;
        pw *= q;
    }
    Ok(total)
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(KoshError::domain(format!("x must be positive, got {x}")))
    }
}

/// `phi_p(s, x) = sum_n w_n (lambda_n^2 + x^2)^{-s}` on `Re s > 1/2`.
pub fn watson_series(shape: ShapeParam, s: C64, x: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    if s.re <= 0.5 {
        return Err(KoshError::domain(format!("Watson series needs Re s > 1/2, got {s}")));
    }
    watson_series_any(shape, s, x, cfg)
}

/// Analytic continuation of `phi_p(s, x)` to every `s` except `s = 1/2 - j`,
/// by the weighted Gregory formula whose tail integral is [`tail_power`].
pub fn watson_series_any(shape: ShapeParam, s: C64, x: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    check_x(x)?;
    // left of Re s = 1/2 the terms grow and the partial sum cancels, so fewer are summed
    let base = if s.re < 0.5 { 40 } else { cfg.series_n };
    let n = base.max((2.0 * x).ceil() as usize + 16);
    let seq = sequence(shape, n + cfg.gregory_k + 2)?;
    let tail = tail_power(s, x, seq.lambda(n), &cfg.quad)?;
    let x2 = x * x;
    Ok(gregory_sum(&seq, n, cfg.gregory_k, |l| rpow(l * l + x2, -s), |_| tail))
}

/// `pi/(2x) - kappa/(2x^2) + (pi/x) B_p(x)`: the Watson series at `s = 1`.
pub fn watson_closed_form_s1(shape: ShapeParam, x: f64) -> f64 {
    PI / (2.0 * x) - shape.kappa() / (2.0 * x * x) + PI / x * b_kernel(shape, x)
}

/// The Watson series at `s = 2`:
/// `pi/(4x^3) - kappa/(2x^4) + (pi^2/x^2) B [1/(2 pi x) + (1 + p/(pi(p^2-x^2))) (1 + B)]`, `B = B_p(x)`.
/// The factor `p/(p^2 - x^2)` is combined with `B` so that `x = p` is harmless.
pub fn watson_closed_form_s2(shape: ShapeParam, x: f64) -> f64 {
    let b = b_kernel(shape, x);
    let extra = match shape {
        ShapeParam::Finite(p) => {
            let e = (-2.0 * PI * x).exp();
            let den = -p * (-2.0 * PI * x).exp_m1() + x * (1.0 + e);
            p * e / (PI * (p + x) * den)
        }
        _ => 0.0,
    };
    PI / (4.0 * x.powi(3)) - shape.kappa() / (2.0 * x.powi(4))
        + PI * PI / (x * x) * (b / (2.0 * PI * x) + b * (1.0 + b) + extra * (1.0 + b))
}

/// `int_0^inf y^{-a} (1+y)^{-a} B_p(t0 (2y+1)) dy` for `Re a < 1`.
pub fn b_weighted_integral(shape: ShapeParam, a: C64, t0: f64, quad: &QuadratureSpec) -> Result<C64> {
    if a.re >= 1.0 {
        return Err(KoshError::domain(format!("kernel integral diverges at y = 0 for exponent {a}")));
    }
    let scale = 1.0 / (4.0 * PI * t0);
    let y1 = scale.min(1.0);
    let g = |y: f64| rpow(1.0 + y, -a) * b_kernel(shape, t0 * (2.0 * y + 1.0));
    // the endpoint value is integrated exactly, which keeps Re a -> 1 tractable
    let g0 = g(0.0);
    let head = tanh_sinh(|y, dy, _| rpow(dy, -a) * (g(y) - g0), 0.0, y1, quad);
    let rest = semi_infinite(|y, _| rpow(y, -a) * g(y), y1, scale.min(1.0), quad);
    let exact = g0 * rpow(y1, 1.0 - a) / (1.0 - a);
    Ok(exact + sum_results(&[head, rest]).into_result("kernel integral")?)
}

/// Integral form of the Watson series,
/// `sqrt(pi) x^{1-2s} Gamma(s-1/2)/(2 Gamma(s)) - kappa x^{-2s}/2
///  + 2^{2-2s} x^{1-2s} sin(pi s) int_0^inf y^{-s}(y+1)^{-s} B_p((2y+1)x) dy`,
/// valid on `Re s < 1` (it continues `phi_p` to the left of `Re s = 1/2`).
pub fn watson_rhs_integral(shape: ShapeParam, s: C64, x: f64, cfg: &EvalConfig) -> Result<C64> {
    check_x(x)?;
    if s.re >= 1.0 {
        return Err(KoshError::Strip(format!("integral form needs Re s < 1, got {s}")));
    }
    let integral = b_weighted_integral(shape, s, x, &cfg.quad)?;
    let head = watson_head(shape, s, x)?;
    Ok(head + rpow(2.0, 2.0 - 2.0 * s) * rpow(x, 1.0 - 2.0 * s) * crate::specfun::csinpi(s) * integral)
}

fn watson_head(shape: ShapeParam, s: C64, x: f64) -> Result<C64> {
    if near_nonpositive_integer(s - 0.5, 1e-14) {
        return Err(KoshError::Pole(format!("Gamma(s - 1/2) at s = {s}")));
    }
    let t1 = PI.sqrt() * rpow(x, 1.0 - 2.0 * s) * gamma(s - 0.5) * rgamma(s) / 2.0;
    let t2 = -shape.kappa() * rpow(x, -2.0 * s) / 2.0;
    Ok(t1 + t2)
}

/// `m`-th term of the fractional-integral part of the Bessel form, without the
/// factor `e^{-2 pi m x}`:
/// `(-1)^{m+1} m^nu int_0^inf t^nu e^{2 pi x m t} K_nu(2 pi x m t) e^{-u(1/2 + x/(2p))} L^{(1)}_{m-1}(u) du`,
/// `t = 1 + u/(4 pi m p)`.
fn laguerre_k_term(p: f64, nu: C64, x: f64, m: usize, quad: &QuadratureSpec) -> Result<C64> {
    let mf = m as f64;
    let a = 4.0 * PI * mf * p;
    let rate = 0.5 + x / (2.0 * p);
    let f = |u: f64| -> C64 {
        let t = 1.0 + u / a;
        let ks = bessel_k_scaled(nu, 2.0 * PI * x * mf * t).unwrap_or(c(0.0));
        rpow(t, nu) * ks * ((-rate * u).exp() * laguerre(m - 1, 1.0, u))
    };
    let hi = (4.0 * mf + 120.0).min(90.0 / (x / (2.0 * p)) + 10.0);
    let width = 2.0;
    let panels = (hi / width).ceil() as usize;
    let parts: Vec<_> = (0..panels)
        .map(|j| gauss_kronrod(f, j as f64 * width, (j + 1) as f64 * width, quad))
        .collect();
    let v = sum_results(&parts).into_result("Watson Bessel form")?;
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * rpow(mf, nu) * v)
}

/// Bessel form of the Watson series: the two algebraic terms of [`watson_rhs_integral`]
/// plus [`watson_bessel_part`].
pub fn watson_rhs_bessel(shape: ShapeParam, s: C64, x: f64, cfg: &EvalConfig) -> Result<C64> {
    check_x(x)?;
    Ok(watson_head(shape, s, x)? + watson_bessel_part(shape, s, x, cfg)?)
}

/// `(2 pi^s x^{1/2-s}/Gamma(s))` times the alternating `K`-series and the
/// fractional-integral `K`-series. The binomial `l`-sum is summed in closed form as
/// `(-1)^{m+1} 4 pi m p e^{-u/2} L^{(1)}_{m-1}(u)`, `u = 4 pi m p (t - 1)`.
/// Entire in `s`; exponentially small in `x`.
pub fn watson_bessel_part(shape: ShapeParam, s: C64, x: f64, cfg: &EvalConfig) -> Result<C64> {
    check_x(x)?;
    let nu = s - 0.5;
    let mut sum = NeumaierSum::default();
    let mut m = 1usize;
    loop {
        let mf = m as f64;
        let decay = (-2.0 * PI * mf * x).exp();
        let k = bessel_k_scaled(nu, 2.0 * PI * mf * x)? * rpow(mf, nu);
        let term = match shape {
            ShapeParam::Infinity => k,
            ShapeParam::Zero => {
                if m % 2 == 1 {
                    -k
                } else {
                    k
                }
            }
            ShapeParam::Finite(p) => {
                let alt = if m % 2 == 1 { -k } else { k };
                alt + laguerre_k_term(p, nu, x, m, &cfg.quad)?
            }
        } * decay;
        sum.add(term);
        let total = sum.total().norm();
        if (term.norm() <= 1e-18 * total && m > 2) || decay == 0.0 {
            break;
        }
        m += 1;
        if m > 5000 {
            return Err(KoshError::NonConvergence { what: "Watson Bessel form", estimate: total, error: term.norm() });
        }
    }
    Ok(2.0 * rpow(PI, s) * rpow(x, 0.5 - s) * rgamma(s) * sum.total())
}

/// `sum_n w_n lambda_n^nu K_nu(2 pi lambda_n x)` with `nu = s - 1/2`.
pub fn watson2_lhs(shape: ShapeParam, s: C64, x: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    check_x(x)?;
    let nu = s - 0.5;
    let guess = ((45.0 + nu.norm_sqr()) / (2.0 * PI * x)).ceil() as usize + 4;
    let seq = sequence(shape, guess.max(cfg.series_n))?;
    let mut sum = NeumaierSum::default();
    let mut last = 0.0;
    let mut used = 0;
    for (lam, w) in seq.iter() {
        let z = 2.0 * PI * lam * x;
        let term = w * rpow(lam, nu) * bessel_k_scaled(nu, z)? * (-z).exp();
        sum.add(term);
        used += 1;
        last = term.norm();
        if z > nu.norm_sqr() + 5.0 && last <= 1e-18 * sum.total().norm() {
            break;
        }
    }
    let value = sum.total();
    let converged = last <= 1e-16 * value.norm().max(1e-300);
    Ok(SeriesValue { value, tail_bound: last, terms_used: used, converged })
}

/// `sum_{k<=n} (-1)^k z^{nu+2k}/(k! Gamma(nu+k+1))` with `z = pi x y` (the leading
/// part of `J_nu(2 pi x y)`), and `J_nu` minus that part.
fn j_minus_series(nu: C64, z: f64, nsub: Option<usize>) -> Result<C64> {
    let Some(n) = nsub else {
        return bessel_j(nu, 2.0 * z);
    };
    let q = -z * z;
    let lead = rpow(z, nu) * rgamma(nu + 1.0);
    if 2.0 * z <= 8.0 {
        // sum the remainder directly from k = n + 1
        let mut term = lead;
        for k in 1..=n + 1 {
            term *= q / (k as f64 * (nu + k as f64));
        }
        let mut sum = term;
        for k in n + 2..n + 400 {
            term *= q / (k as f64 * (nu + k as f64));
            sum += term;
            if term.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        Ok(sum)
    } else {
        let mut term = lead;
        let mut part = term;
        for k in 1..=n {
            term *= q / (k as f64 * (nu + k as f64));
            part += term;
        }
        Ok(bessel_j(nu, 2.0 * z)? - part)
    }
}

/// `pi int_0^inf y^nu {J_nu(2 pi x y) - sum_{k<=N} ...} B_p(y) dy` with `nu = s - 1/2`,
/// where the subtracted power series is present when `nsub = Some(N)`.
///
/// Without subtraction the integral needs `Re s > 1/2`; with `N` subtracted terms
/// it needs `Re s > -N - 1/2`.
pub fn j_integral(shape: ShapeParam, s: C64, x: f64, nsub: Option<usize>, cfg: &EvalConfig) -> Result<C64> {
    check_x(x)?;
    let nu = s - 0.5;
    let lowest = match nsub {
        None => 0.5,
        Some(n) => -(n as f64) - 0.5,
    };
    if shape != ShapeParam::Zero && s.re <= lowest {
        return Err(KoshError::domain(format!("J integral diverges at y = 0 for s = {s}")));
    }
    let deg = 2.0 * nu.re.max(0.0) + 2.0 * nsub.map_or(0.0, |n| n as f64) + 1.0;
    let mut cutoff = 8.0;
    while deg * (cutoff * (PI * x).max(1.0)).ln() - 2.0 * PI * cutoff > -42.0 {
        cutoff += 2.0;
    }
    let f = |y: f64, _dy: f64| -> C64 {
        let j = j_minus_series(nu, PI * x * y, nsub).unwrap_or(C64::new(f64::NAN, 0.0));
        rpow(y, nu) * j * b_kernel(shape, y)
    };
    let half = (1.0 / (2.0 * x)).min(1.0);
    let r = oscillatory(f, 0.0, half, cutoff, &cfg.quad)?;
    Ok(PI * r.into_result("J integral")?)
}

/// Right side of the second Watson analogue,
/// `-(pi x)^{1/2-s} kappa Gamma(s-1/2)/4 + Gamma(s) pi^{-s} x^{-s-1/2}/4 + pi int y^nu J_nu(2 pi x y) B_p(y) dy`,
/// on `Re s > 1/2`.
pub fn watson2_rhs(shape: ShapeParam, s: C64, x: f64, cfg: &EvalConfig) -> Result<C64> {
    let j = j_integral(shape, s, x, None, cfg)?;
    Ok(watson2_head(shape, s, x)? + j)
}

/// The two algebraic terms of [`watson2_rhs`].
pub fn watson2_head(shape: ShapeParam, s: C64, x: f64) -> Result<C64> {
    if near_nonpositive_integer(s - 0.5, 1e-14) {
        return Err(KoshError::Pole(format!("Gamma(s - 1/2) at s = {s}")));
    }
    let a = -rpow(PI * x, 0.5 - s) * gamma(s - 0.5) * shape.kappa() / 4.0;
    let b = gamma(s) * rpow(PI, -s) * rpow(x, -s - 0.5) / 4.0;
    Ok(a + b)
}

/// `int_0^inf sin(2 pi x y) B_p(y) dy`.
pub fn sine_b_integral(shape: ShapeParam, x: f64, cfg: &EvalConfig) -> Result<f64> {
    check_x(x)?;
    let f = |y: f64, _| c((2.0 * PI * x * y).sin() * b_kernel(shape, y));
    let r = oscillatory(f, 0.0, (1.0 / (2.0 * x)).min(1.0), 10.0, &cfg.quad)?;
    Ok(r.into_result("sine integral")?.re)
}

/// Diagnostics of the `m`-summation in [`watson3_lhs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MSumReport {
    pub value: C64,
    pub exact_terms: usize,
    /// Size of the last difference correction used for the tail.
    pub tail_correction: f64,
    pub converged: bool,
}

const W3_EXACT_TERMS: usize = 24;

/// `t^nu K_nu(x t)`, with its `t -> 0` limit `2^{nu-1} Gamma(nu) x^{-nu}` below `x t = 1e-10`.
fn t_nu_k(nu: C64, x: f64, t: f64) -> C64 {
    let z = x * t;
    if z < 1e-10 && nu.re > 0.0 {
        return rpow(2.0, nu - 1.0) * gamma(nu) * rpow(x, -nu);
    }
    rpow(t, nu) * bessel_k_scaled(nu, z).unwrap_or(c(0.0)) * (-z).exp()
}

/// Double-integral side of the third Watson analogue,
/// `(2^{1-2s} x^nu pi^{-s}/Gamma(s)) sum_m int_0^inf int_0^1 y^{2s-1} e^{-xy} (1-u^2)^{s-1}
///  cos(m y u + 2m arctan(yu/(2 pi p))) du dy`, `Re s > 1/2`.
///
/// The `u`-integral is done in closed form, leaving
/// `2^{1/2-s} pi^{-s-1/2} sum_m int_0^inf t^nu K_nu(x t) cos(m phi(t)) dt` with
/// `phi(t) = t + 2 arctan(t/(2 pi p))`. The first terms are summed exactly and the tail by the
/// Gregory formula in the continuous index, whose integral part is
/// `(pi/2) kappa f(0) - int f(t) sin(M phi)/phi dt`.
/// For `p -> 0` the terms alternate and the tail is handled by repeated averaging.
pub fn watson3_lhs(shape: ShapeParam, s: C64, x: f64, cfg: &EvalConfig) -> Result<MSumReport> {
    check_x(x)?;
    if s.re <= 0.5 {
        return Err(KoshError::domain(format!("third Watson form needs Re s > 1/2, got {s}")));
    }
    let nu = s - 0.5;
    let big_m = W3_EXACT_TERMS;
    let kdiff = cfg.gregory_k.min(10);
    let top = big_m + kdiff;
    let kappa = shape.kappa();
    let phi = |t: f64| -> f64 {
        match shape {
            ShapeParam::Finite(p) => t + 2.0 * (t / (2.0 * PI * p)).atan(),
            _ => t,
        }
    };
    // for the zero limit phi = t + pi on t > 0, i.e. cos(m phi) = (-1)^m cos(m t)
    let t_cut = (45.0 + 2.0 * nu.norm()) / x;
    let kap_min = if shape == ShapeParam::Zero { 1.0 } else { kappa };
    let width = PI * kap_min / (2.0 * top as f64);
    let head_end = width;
    let panels = ((t_cut - head_end) / width).ceil() as usize;
    // shared nodes on [head_end, t_cut]
    let mut nodes: Vec<(f64, f64, C64)> = Vec::with_capacity(15 * panels);
    for j in 0..panels {
        let a = head_end + j as f64 * width;
        for (t, w) in kronrod_nodes(a, a + width) {
            nodes.push((t, w, t_nu_k(nu, x, t)));
        }
    }
    let head = |g: &dyn Fn(f64) -> f64| -> Result<C64> {
        tanh_sinh(|t, _, _| t_nu_k(nu, x, t) * g(t), 0.0, head_end, &cfg.quad).into_result("third Watson form")
    };
    let fm = |m: usize| -> Result<C64> {
        let mf = m as f64;
        let mut acc = NeumaierSum::default();
        for &(t, w, f) in &nodes {
            acc.add(f * (w * (mf * phi(t)).cos()));
        }
        Ok(head(&|t| (mf * phi(t)).cos())? + acc.total())
    };
    let terms: Vec<C64> = (1..=top).map(fm).collect::<Result<_>>()?;
    let sign = |m: usize| if shape == ShapeParam::Zero && m % 2 == 1 { -1.0 } else { 1.0 };
    let mut exact = NeumaierSum::default();
    for (i, t) in terms.iter().take(big_m - 1).enumerate() {
        exact.add(sign(i + 1) * *t);
    }
    let (tail, corr) = if shape == ShapeParam::Zero {
        // averaging of the partial sums S_{M-1}, ..., S_{top}
        let mut partial = Vec::with_capacity(kdiff + 2);
        let mut run = exact.total();
        partial.push(run);
        for m in big_m..=top {
            run += sign(m) * terms[m - 1];
            partial.push(run);
        }
        while partial.len() > 1 {
            partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        (partial[0] - exact.total(), (terms[top - 1]).norm() / 2f64.powi(kdiff as i32 + 1))
    } else {
        let mf = big_m as f64;
        let f0 = if nu.re > 0.0 { rpow(2.0, nu - 1.0) * gamma(nu) * rpow(x, -nu) } else { c(f64::NAN) };
        let kernel = |t: f64| {
            let ph = phi(t);
            if ph < 1e-300 {
                mf
            } else {
                (mf * ph).sin() / ph
            }
        };
        let mut acc = NeumaierSum::default();
        for &(t, w, f) in &nodes {
            acc.add(f * (w * kernel(t)));
        }
        let integral = 0.5 * PI * kappa * f0 - (head(&kernel)? + acc.total());
        let mut d: Vec<C64> = terms[big_m - 1..].to_vec();
        let mut corr = c(0.0);
        let mut last = 0.0;
        for g in GREGORY.iter().take(kdiff + 1) {
            let v = *g * d[0];
            corr += v;
            last = v.norm();
            d = d.windows(2).map(|w| w[1] - w[0]).collect();
            if d.is_empty() {
                break;
            }
        }
        (integral + corr, last)
    };
    let total = exact.total() + tail;
    let pref = rpow(2.0, 0.5 - s) * rpow(PI, -s - 0.5);
    let value = pref * total;
    Ok(MSumReport {
        value,
        exact_terms: big_m - 1,
        tail_correction: corr * pref.norm(),
        converged: value.re.is_finite() && corr * pref.norm() <= 1e-8 * value.norm().max(1.0),
    })
}

/// Right side of the third Watson analogue:
/// `sum w_n lambda_n^nu K_nu(2 pi lambda_n x) + (pi x)^{1/2-s} kappa Gamma(s-1/2)/4 - pi^{-s} x^{-s-1/2} Gamma(s)/4`.
pub fn watson3_rhs(shape: ShapeParam, s: C64, x: f64, cfg: &EvalConfig) -> Result<C64> {
    Ok(watson2_lhs(shape, s, x, cfg)?.value - watson2_head(shape, s, x)?)
}

/// `K_{nu,p}(x) = int_0^inf y^{-nu-1/2}(y+1)^{-nu-1/2} B_p((x/(2 pi))(2y+1)) dy`, `Re nu < 1/2`.
pub fn k_kernel(shape: ShapeParam, nu: C64, x: f64, cfg: &EvalConfig) -> Result<C64> {
    check_x(x)?;
    if nu.re >= 0.5 {
        return Err(KoshError::domain(format!("K_(nu,p) needs Re nu < 1/2, got {nu}")));
    }
    b_weighted_integral(shape, nu + 0.5, x / (2.0 * PI), &cfg.quad)
}

/// `(Gamma(1/2 - nu) (2x)^nu/sqrt(pi)) sum_n (+-1)^n n^nu K_nu(x n)`: the limits of
/// [`k_kernel`] as `p -> inf` (`alternating = false`) and `p -> 0` (`alternating = true`).
pub fn k_kernel_limit(nu: C64, x: f64, alternating: bool) -> Result<C64> {
    check_x(x)?;
    let mut sum = NeumaierSum::default();
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let z = x * nf;
        let mut term = rpow(nf, nu) * bessel_k_scaled(nu, z)? * (-z).exp();
        if alternating && n % 2 == 1 {
            term = -term;
        }
        sum.add(term);
        if (z > nu.norm_sqr() + 5.0 && term.norm() <= 1e-18 * sum.total().norm()) || n > 100_000 {
            break;
        }
        n += 1;
    }
    Ok(gamma(0.5 - nu) * rpow(2.0 * x, nu) / PI.sqrt() * sum.total())
}

/// Complex-argument form of `G_p(a)`:
/// `2 sqrt(2) Im[e^{i pi/4}/(sigma(sqrt(a) e^{i pi/4}) e^{2 pi sqrt(a) e^{i pi/4}} - 1)]`
/// with `sigma` the complex Moebius ratio. Used as an independent check of [`g_kernel`].
pub fn g_kernel_complex(shape: ShapeParam, a: f64) -> f64 {
    let w = C64::from_polar(1.0, PI / 4.0);
    let z = a.sqrt() * w;
    let sig = match shape {
        ShapeParam::Finite(p) => (p + z) / (p - z),
        ShapeParam::Zero => c(-1.0),
        ShapeParam::Infinity => c(1.0),
    };
    let v = w / (sig * (2.0 * PI * z).exp() - 1.0);
    2.0 * SQRT_2 * v.im
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    const SHAPES: [ShapeParam; 5] = [
        ShapeParam::Finite(0.5),
        ShapeParam::Finite(1.0),
        ShapeParam::Finite(2.0),
        ShapeParam::Infinity,
        ShapeParam::Zero,
    ];

    #[test]
    fn b_kernel_limits_and_small_t() {
        let t = 0.37;
        assert!((b_kernel(ShapeParam::Finite(1e12), t) - b_kernel(ShapeParam::Infinity, t)).abs() < 1e-10);
        assert!((b_kernel(ShapeParam::Finite(1e-12), t) - b_kernel(ShapeParam::Zero, t)).abs() < 1e-10);
        // direct definition away from cancellation
        let p = 1.3;
        let direct = 1.0 / ((p + t) / (p - t) * (2.0 * PI * t).exp() - 1.0);
        assert!((b_kernel(ShapeParam::Finite(p), t) - direct).abs() < 1e-15);
        // B_p(t) ~ kappa/(2 pi t) as t -> 0
        let sh = ShapeParam::Finite(p);
        let t = 1e-9;
        assert!((b_kernel(sh, t) * 2.0 * PI * t - sh.kappa()).abs() < 1e-7);
    }

    #[test]
    fn g_kernel_matches_complex_form() {
        for &sh in &SHAPES {
            for &a in &[1e-3, 0.1, 1.0, 2.5, 10.0, 100.0] {
                let g = g_kernel(sh, a).unwrap();
                let h = g_kernel_complex(sh, a);
                assert!((g - h).abs() < 1e-12 * (1.0 + h.abs()), "{sh} a = {a}: {g} vs {h}");
            }
        }
        assert!(g_kernel(ShapeParam::Finite(1.0), 1e6).unwrap().abs() < 1e-300);
    }

    #[test]
    fn g_kernel_limit_shapes() {
        for &a in &[0.2, 1.0, 3.0] {
            let big = g_kernel(ShapeParam::Finite(1e9), a).unwrap();
            let small = g_kernel(ShapeParam::Finite(1e-9), a).unwrap();
            assert!((big - g_kernel(ShapeParam::Infinity, a).unwrap()).abs() < 1e-7);
            assert!((small - g_kernel(ShapeParam::Zero, a).unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn watson_series_classical_s1() {
        // sum 1/(n^2 + x^2) = pi coth(pi x)/(2x) - 1/(2x^2)
        for &x in &[0.3, 1.0, 4.0] {
            let v = watson_series(ShapeParam::Infinity, c(1.0), x, &cfg()).unwrap().value;
            let want = PI / (2.0 * x) / (PI * x).tanh() - 0.5 / (x * x);
            assert!((v.re - want).abs() < 1e-13, "x = {x}");
        }
        // half-integers: sum 1/((n-1/2)^2 + x^2) = pi tanh(pi x)/(2x)
        let x = 0.7;
        let v = watson_series(ShapeParam::Zero, c(1.0), x, &cfg()).unwrap().value;
        assert!((v.re - PI * (PI * x).tanh() / (2.0 * x)).abs() < 1e-13);
    }

    #[test]
    fn watson_closed_forms_s1_s2() {
        for &p in &[0.5, 1.0, 2.0] {
            let sh = ShapeParam::Finite(p);
            for &x in &[0.7, 1.3, 2.2] {
                let kap = sh.kappa();
                let sig = sh.sigma(x);
                let e = sig * (2.0 * PI * x).exp();
                let s1 = PI / (2.0 * x) - kap / (2.0 * x * x) + PI / x / (e - 1.0);
                let v1 = watson_series(sh, c(1.0), x, &cfg()).unwrap().value.re;
                assert!((v1 - s1).abs() < 1e-12 * s1.abs(), "p {p} x {x}");
                let s2 = PI / (4.0 * x.powi(3)) - kap / (2.0 * x.powi(4))
                    + PI * PI / (x * x * (e - 1.0))
                        * (1.0 / (2.0 * PI * x) + (1.0 + p / (PI * (p * p - x * x))) * e / (e - 1.0));
                let v2 = watson_series(sh, c(2.0), x, &cfg()).unwrap().value.re;
                assert!((v2 - s2).abs() < 1e-12 * s2.abs(), "p {p} x {x}: {v2} vs {s2}");
                assert!((watson_closed_form_s1(sh, x) - s1).abs() < 1e-13 * s1.abs());
                assert!((watson_closed_form_s2(sh, x) - s2).abs() < 1e-13 * s2.abs());
            }
            // removable point x = p
            let v = watson_series(sh, c(2.0), p, &cfg()).unwrap().value.re;
            assert!((watson_closed_form_s2(sh, p) - v).abs() < 1e-12 * v.abs());
        }
    }

    #[test]
    fn watson_integral_and_bessel_forms_agree() {
        for &sh in &SHAPES {
            for &s in &[c(0.6), c(0.75), C64::new(0.8, 0.4)] {
                for &x in &[0.5, 1.0, 2.0] {
                    let a = watson_rhs_integral(sh, s, x, &cfg()).unwrap();
                    let b = watson_rhs_bessel(sh, s, x, &cfg()).unwrap();
                    assert!(rel(a, b) < 1e-9, "{sh} s {s} x {x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn watson_series_matches_bessel_form() {
        for &sh in &SHAPES {
            for &s in &[c(1.25), c(2.0), C64::new(3.0, -1.0)] {
                for &x in &[0.5, 2.0] {
                    let a = watson_series(sh, s, x, &cfg()).unwrap().value;
                    let b = watson_rhs_bessel(sh, s, x, &cfg()).unwrap();
                    assert!(rel(a, b) < 1e-9, "{sh} s {s} x {x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn continued_series_matches_integral_form() {
        for &sh in &SHAPES[..3] {
            for &s in &[c(0.3), C64::new(-0.7, 0.5), c(-1.2)] {
                let a = watson_series_any(sh, s, 1.0, &cfg()).unwrap().value;
                let b = watson_rhs_integral(sh, s, 1.0, &cfg()).unwrap();
                assert!((a - b).norm() < 1e-9 * (1.0 + a.norm() + b.norm()), "{sh} s {s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn second_watson_analogue() {
        for &sh in &SHAPES {
            for &s in &[c(0.75), c(1.5), C64::new(2.0, 1.0)] {
                for &x in &[0.5, 1.0] {
                    let l = watson2_lhs(sh, s, x, &cfg()).unwrap().value;
                    let r = watson2_rhs(sh, s, x, &cfg()).unwrap();
                    assert!((l - r).norm() < 1e-9 * (1.0 + l.norm()), "{sh} s {s} x {x}: {l} vs {r}");
                }
            }
        }
    }

    #[test]
    fn sigma_p_abel_plana() {
        for &sh in &SHAPES {
            for &x in &[0.4, 1.0, 1.7] {
                let lhs = crate::koshzeta::sigma_p_series(sh, c(2.0 * PI * x), &cfg()).unwrap().value.re;
                let rhs = -sh.kappa() / 2.0 + 1.0 / (2.0 * PI * x) + 2.0 * sine_b_integral(sh, x, &cfg()).unwrap();
                assert!((lhs - rhs).abs() < 1e-11, "{sh} x {x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn third_watson_analogue() {
        for &sh in &SHAPES {
            for &s in &[c(0.75), c(1.5), C64::new(2.0, 1.0)] {
                for &x in &[0.5, 1.5] {
                    let l = watson3_lhs(sh, s, x, &cfg()).unwrap();
                    let r = watson3_rhs(sh, s, x, &cfg()).unwrap();
                    assert!((l.value - r).norm() < 1e-8 * (1.0 + r.norm()), "{sh} s {s} x {x}: {l:?} vs {r}");
                }
            }
        }
    }

    #[test]
    fn k_kernel_limits() {
        for &nu in &[c(0.0), c(-0.6), C64::new(0.2, 0.5)] {
            for &x in &[0.7, 2.0] {
                let a = k_kernel(ShapeParam::Infinity, nu, x, &cfg()).unwrap();
                let b = k_kernel_limit(nu, x, false).unwrap();
                assert!(rel(a, b) < 1e-10, "nu {nu} x {x}: {a} vs {b}");
                let a = k_kernel(ShapeParam::Zero, nu, x, &cfg()).unwrap();
                let b = k_kernel_limit(nu, x, true).unwrap();
                assert!(rel(a, b) < 1e-10, "nu {nu} x {x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn k_kernel_refinement() {
        let fine = EvalConfig {
            quad: QuadratureSpec { rel_tol: 1e-15, abs_tol: 1e-300, ..QuadratureSpec::default() },
            ..cfg()
        };
        let sh = ShapeParam::Finite(1.0);
        let a = k_kernel(sh, c(0.0), 2.0, &cfg()).unwrap();
        let b = k_kernel(sh, c(0.0), 2.0, &fine).unwrap();
        assert!(rel(a, b) < 1e-9);
    }

    #[test]
    fn tail_power_against_quadrature() {
        let quad = QuadratureSpec::default();
        for &(s, x, l) in &[(1.3, 0.5, 10.0), (0.9, 3.0, 4.0), (2.0, 1.0, 1.5)] {
            let s = c(s);
            let t = tail_power(s, x, l, &quad).unwrap();
            let q = semi_infinite(|y, _| rpow(y * y + x * x, -s), l, l, &quad).value;
            assert!(rel(t, q) < 1e-12, "s {s} x {x} l {l}: {t} vs {q}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn g_kernel_denominator_positive(p in 0.05f64..50.0, la in -3.0f64..3.0) {
            let a = 10f64.powf(la);
            let r = (2.0 * a).sqrt();
            let th = PI * r;
            let e = (-th).exp();
            let (sn, cs) = th.sin_cos();
            let den = p * p * (1.0 + e * e - 2.0 * e * cs) + r * p * (1.0 - e * e + 2.0 * e * sn) + a * (1.0 + e * e + 2.0 * e * cs);
            prop_assert!(den > 0.0);
            prop_assert!(g_kernel(ShapeParam::Finite(p), a).unwrap().is_finite());
        }

        #[test]
        fn b_kernel_sign(p in 0.05f64..50.0, t in 0.01f64..20.0) {
            let b = b_kernel(ShapeParam::Finite(p), t);
            prop_assert!(b.is_finite());
            let ok = if t < p { b > 0.0 } else { b <= 0.0 };
            prop_assert!(ok);
        }
    }
}
