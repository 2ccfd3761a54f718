//! Special functions and quadrature used throughout the crate.

mod bessel;
mod gamma;
mod incgamma;
pub mod quad;
mod zeta;

pub use bessel::{bessel_j, bessel_k, bessel_k_scaled};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use incgamma::incomplete_gamma_q;
pub use zeta::riemann_zeta;

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// `sin(pi x)` with exact argument reduction.
pub fn sinpi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `cos(pi x)` with exact argument reduction.
pub fn cospi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let c = (PI * r).cos();
    if (n as i64) % 2 == 0 {
        c
    } else {
        -c
    }
}

/// `sin(pi z)` for complex `z`.
pub fn csinpi(z: C64) -> C64 {
    C64::new(sinpi(z.re) * (PI * z.im).cosh(), cospi(z.re) * (PI * z.im).sinh())
}

/// `cos(pi z)` for complex `z`.
pub fn ccospi(z: C64) -> C64 {
    C64::new(cospi(z.re) * (PI * z.im).cosh(), -sinpi(z.re) * (PI * z.im).sinh())
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub fn cexpm1(z: C64) -> C64 {
    let (x, y) = (z.re, z.im);
    let h = (0.5 * y).sin();
    C64::new(x.exp_m1() * y.cos() - 2.0 * h * h, x.exp() * y.sin())
}

/// `a^z` for real `a > 0`.
pub fn rpow(a: f64, z: C64) -> C64 {
    let m = a.powf(z.re);
    if z.im == 0.0 {
        C64::new(m, 0.0)
    } else {
        let (s, c) = (z.im * a.ln()).sin_cos();
        C64::new(m * c, m * s)
    }
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(u)` by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, u: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - u;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - u) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Pochhammer symbol `(s)_n`.
pub fn pochhammer(s: C64, n: usize) -> C64 {
    (0..n).fold(C64::new(1.0, 0.0), |acc, j| acc * (s + j as f64))
}

/// Whether `z` is within `tol` of a non-positive integer.
pub fn near_nonpositive_integer(z: C64, tol: f64) -> bool {
    z.re < 0.5 && z.im.abs() <= tol && (z.re - z.re.round()).abs() <= tol
}
