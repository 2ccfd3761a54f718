use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::quad::tanh_sinh;
use super::{ccospi, csinpi, rgamma, rpow};
use crate::config::QuadratureSpec;
use crate::error::{KoshError, Result};

/// `e^x K_nu(x)` for real `x > 0` and complex order.
///
/// Trapezoid rule on `int_0^inf exp(-2x sinh^2(t/2)) cosh(nu t) dt`; the step is
/// chosen from the width of the strip of analyticity that keeps the integrand bounded.
pub fn bessel_k_scaled(nu: C64, x: f64) -> Result<C64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(KoshError::domain(format!("bessel_k needs x > 0, got {x}")));
    }
    let x_eff = (x * x + nu.norm_sqr()).sqrt() + 1.0;
    let d = (1.5 / x_eff.sqrt()).min(1.0);
    let h = 2.0 * PI * d / (40.0 + nu.im.abs() * d);
    let anu = nu.re.abs();
    let term = |t: f64| -> C64 {
        let s = (0.5 * t).sinh();
        let e = -2.0 * x * s * s;
        let a = (nu * t + e).exp();
        let b = (-nu * t + e).exp();
        0.5 * (a + b)
    };
    let mut sum = 0.5 * term(0.0);
    let mut peak = 0.0_f64;
    let mut k = 1usize;
    loop {
        let t = k as f64 * h;
        let s = (0.5 * t).sinh();
        let lb = -2.0 * x * s * s + anu * t;
        peak = peak.max(lb);
        if lb < peak - 40.0 && t > 0.5 {
            break;
        }
        sum += term(t);
        k += 1;
        if k > 200_000 {
            return Err(KoshError::NonConvergence { what: "bessel_k", estimate: sum.norm(), error: f64::NAN });
        }
    }
    Ok(sum * h)
}

/// Modified Bessel function `K_nu(x)`; underflows to 0 for very large `x`.
pub fn bessel_k(nu: C64, x: f64) -> Result<C64> {
    let s = bessel_k_scaled(nu, x)?;
    Ok(s * (-x).exp())
}

fn j_series(nu: C64, x: f64) -> C64 {
    let hx = 0.5 * x;
    let q = -hx * hx;
    let mut term = rpow(hx, nu) * rgamma(nu + 1.0);
    let mut sum = term;
    for k in 1..400 {
        term *= q / (k as f64 * (nu + k as f64));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && k > 3 {
            break;
        }
    }
    sum
}

fn j_hankel(nu: C64, x: f64) -> Option<C64> {
    let mu = 4.0 * nu * nu;
    let mut a = C64::new(1.0, 0.0);
    let mut p = C64::new(1.0, 0.0);
    let mut q = C64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        a = a * (mu - odd * odd) / (k as f64 * 8.0 * x);
        let an = a.norm();
        if an > last {
            return None;
        }
        last = an;
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if an < 1e-16 {
            let w = x / PI - nu / 2.0 - 0.25;
            let amp = (2.0 / (PI * x)).sqrt();
            return Some(amp * (p * ccospi(w) - q * csinpi(w)));
        }
    }
    None
}

fn j_poisson(nu: C64, x: f64) -> C64 {
    // (x/2)^nu / (sqrt(pi) Gamma(nu + 1/2)) * 2 int_0^1 (1 - t^2)^{nu - 1/2} cos(x t) dt
    let spec = QuadratureSpec { rel_tol: 1e-14, abs_tol: 1e-300, ..QuadratureSpec::default() };
    let e = nu - 0.5;
    let r = tanh_sinh(
        |t, _, d| {
            let base = d * (2.0 - d);
            (e * base.ln()).exp() * (x * t).cos()
        },
        0.0,
        1.0,
        &spec,
    );
    rpow(0.5 * x, nu) * rgamma(nu + 0.5) * 2.0 * r.value / PI.sqrt()
}

/// Bessel function `J_nu(x)` for real `x >= 0` and complex order.
pub fn bessel_j(nu: C64, x: f64) -> Result<C64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(KoshError::domain(format!("bessel_j needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(if nu == C64::new(0.0, 0.0) { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    }
    if x <= 8.0 {
        return Ok(j_series(nu, x));
    }
    if let Some(v) = j_hankel(nu, x) {
        return Ok(v);
    }
    if nu.re > -0.5 {
        return Ok(j_poisson(nu, x));
    }
    // lift the order and recur downwards
    let m = (-nu.re).ceil() as usize + 1;
    let mut jp1 = j_poisson(nu + (m + 1) as f64, x);
    let mut j = j_poisson(nu + m as f64, x);
    for k in (0..m).rev() {
        let order = nu + (k + 1) as f64;
        let jm = order * 2.0 / x * j - jp1;
        jp1 = j;
        j = jm;
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn k_reference_values() {
        // mpmath besselk
        let cases = [
            (c(0.0, 0.0), 1.0, c(0.421_024_438_240_708_33, 0.0)),
            (c(0.5, 0.0), 2.0, c((PI / 4.0).sqrt() * (-2.0f64).exp(), 0.0)),
            (c(2.5, 0.0), 0.01, c(375_987.974_779_794_8, 0.0)),
            (c(0.3, 2.0), 0.7, c(0.044_450_076_429_658_75, 0.059_291_731_105_214_194)),
            (c(0.0, 0.0), 50.0, c(3.410_167_749_789_495_5e-23, 0.0)),
        ];
        for (nu, x, want) in cases {
            let got = bessel_k(nu, x).unwrap();
            assert!(close(got, want, 1e-13), "K_{nu}({x}) = {got} vs {want}");
        }
    }

    #[test]
    fn k_half_integer_closed_form() {
        // K_{3/2}(x) = sqrt(pi/(2x)) e^{-x} (1 + 1/x)
        for &x in &[0.01, 0.3, 1.0, 7.0, 40.0, 600.0] {
            let want = (PI / (2.0 * x)).sqrt() * (1.0 + 1.0 / x);
            let got = bessel_k_scaled(c(1.5, 0.0), x).unwrap();
            assert!(close(got, c(want, 0.0), 1e-13), "x = {x}");
        }
    }

    #[test]
    fn j_half_integer_closed_form() {
        // J_{1/2}(x) = sqrt(2/(pi x)) sin x, J_{-1/2}(x) = sqrt(2/(pi x)) cos x
        for &x in &[0.1, 3.0, 9.5, 14.0, 25.0, 300.0] {
            let a = (2.0 / (PI * x)).sqrt();
            let j1 = bessel_j(c(0.5, 0.0), x).unwrap();
            let j2 = bessel_j(c(-0.5, 0.0), x).unwrap();
            assert!((j1.re - a * x.sin()).abs() < 1e-13 * a, "x = {x}");
            assert!((j2.re - a * x.cos()).abs() < 1e-13 * a, "x = {x}");
        }
    }

    #[test]
    fn j_reference_values() {
        // mpmath besselj
        let cases = [
            (c(0.25, 0.0), 12.0, c(-0.041_552_439_750_366_528, 0.0)),
            (c(1.5, 0.5), 9.0, c(0.318_446_618_042_776_19, -0.064_130_382_208_200_602)),
            (c(1.5, 0.5), 20.0, c(-0.084_812_102_089_217_335, -0.136_208_222_257_312_09)),
            (c(3.0, -1.0), 12.0, c(0.398_714_430_984_656_13, -0.213_319_110_922_160_46)),
            (c(3.0, -1.0), 20.0, c(-0.209_279_029_119_604_15, -0.295_464_330_990_379_72)),
            (c(-0.8, 0.3), 12.0, c(0.257_917_638_282_168_85, -0.009_941_290_716_031_528)),
            (c(-0.8, 0.3), 20.0, c(-0.011_623_756_057_916_275, 0.089_475_594_839_274_836)),
        ];
        for (nu, x, want) in cases {
            let got = bessel_j(nu, x).unwrap();
            assert!((got - want).norm() < 1e-12, "J_{nu}({x}) = {got} vs {want}");
        }
    }
}
