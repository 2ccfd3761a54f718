//! Quadrature: adaptive Gauss-Kronrod, tanh-sinh and a semi-infinite map.

use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_PI_2;

use crate::config::QuadratureSpec;
use crate::error::{KoshError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: C64,
    pub abs_err: f64,
    /// Integral of `|f|`, for the rounding floor.
    pub abs_mass: f64,
    pub converged: bool,
}

impl QuadResult {
    pub fn into_result(self, what: &'static str) -> Result<C64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(KoshError::NonConvergence {
                what,
                estimate: self.value.norm(),
                error: self.abs_err,
            })
        }
    }

    fn add(self, o: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + o.value,
            abs_err: self.abs_err + o.abs_err,
            abs_mass: self.abs_mass + o.abs_mass,
            converged: self.converged && o.converged,
        }
    }
}

impl Default for QuadResult {
    fn default() -> Self {
        QuadResult { value: C64::new(0.0, 0.0), abs_err: 0.0, abs_mass: 0.0, converged: true }
    }
}

fn target(spec: &QuadratureSpec, value: C64, mass: f64) -> f64 {
    spec.abs_tol
        .max(spec.rel_tol * value.norm())
        .max(64.0 * f64::EPSILON * mass)
}

/// Fixed 15-point Kronrod nodes and weights mapped onto `[a, b]`.
pub fn kronrod_nodes(a: f64, b: f64) -> [(f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 15];
    for i in 0..7 {
        out[2 * i] = (c - h * XGK[i], h * WGK[i]);
        out[2 * i + 1] = (c + h * XGK[i], h * WGK[i]);
    }
    out[14] = (c, h * WGK[7]);
    out
}

fn gk15<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut mass = fc.norm() * WGK[7];
    for i in 0..7 {
        let x = h * XGK[i];
        let f1 = f(c - x);
        let f2 = f(c + x);
        k += (f1 + f2) * WGK[i];
        mass += (f1.norm() + f2.norm()) * WGK[i];
        if i % 2 == 1 {
            g += (f1 + f2) * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm(), mass * h.abs())
}

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval.
pub fn gauss_kronrod<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadResult {
    if a == b {
        return QuadResult::default();
    }
    let (v, e, m) = gk15(&f, a, b);
    let mut parts: Vec<(f64, f64, C64, f64, f64, u32)> = vec![(a, b, v, e, m, 0)];
    let max_parts = 1usize << spec.max_depth.min(12);
    loop {
        let value: C64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        let mass: f64 = parts.iter().map(|p| p.4).sum();
        let tol = target(spec, value, mass);
        if err <= tol {
            return QuadResult { value, abs_err: err, abs_mass: mass, converged: true };
        }
        // bisect worst interval that can still be split
        let mut worst = None;
        let mut we = -1.0;
        for (i, p) in parts.iter().enumerate() {
            if p.5 < spec.max_depth && p.3 > we {
                we = p.3;
                worst = Some(i);
            }
        }
        let Some(i) = worst else {
            return QuadResult { value, abs_err: err, abs_mass: mass, converged: false };
        };
        if parts.len() >= max_parts {
            return QuadResult { value, abs_err: err, abs_mass: mass, converged: false };
        }
        let (pa, pb, _, _, _, d) = parts.swap_remove(i);
        let mid = 0.5 * (pa + pb);
        let (v1, e1, m1) = gk15(&f, pa, mid);
        let (v2, e2, m2) = gk15(&f, mid, pb);
        parts.push((pa, mid, v1, e1, m1, d + 1));
        parts.push((mid, pb, v2, e2, m2, d + 1));
    }
}

/// Tanh-sinh quadrature on `[a, b]`. The integrand receives `(x, x - a, b - x)`
/// with the endpoint distances computed without cancellation.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> C64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadResult {
    if a == b {
        return QuadResult::default();
    }
    let len = b - a;
    let half = 0.5 * len;
    let mid = a + half;
    // contribution of node t (and -t when t > 0)
    let eval = |t: f64| -> (C64, f64) {
        let v = FRAC_PI_2 * t.sinh();
        let ch = v.cosh();
        let w = half * FRAC_PI_2 * t.cosh() / (ch * ch);
        if t == 0.0 {
            let fv = f(mid, half, half);
            return (fv * w, fv.norm() * w);
        }
        // distance from the nearer endpoint: len/(1 + e^{2|v|})
        let dn = len / (1.0 + (2.0 * v.abs()).exp());
        if dn <= 0.0 || w == 0.0 {
            return (C64::new(0.0, 0.0), 0.0);
        }
        let (xr, xl) = (b - dn, a + dn);
        let f_r = f(xr, len - dn, dn);
        let f_l = f(xl, dn, len - dn);
        let s = f_r + f_l;
        let s = if s.re.is_finite() && s.im.is_finite() { s } else { C64::new(0.0, 0.0) };
        (s * w, (f_r.norm() + f_l.norm()) * w)
    };
    let tmax = 6.5;
    let mut h = 0.5;
    let (mut sum, mut mass) = eval(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > tmax {
            break;
        }
        let (v, m) = eval(t);
        sum += v;
        mass += m;
        k += 1;
    }
    let mut prev = sum * h;
    let levels = spec.max_depth.clamp(4, 9);
    for _ in 0..levels {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > tmax {
                break;
            }
            let (v, m) = eval(t);
            sum += v;
            mass += m;
            k += 2;
        }
        let cur = sum * h;
        let err = (cur - prev).norm();
        let tol = target(spec, cur, mass * h);
        if err <= tol {
            return QuadResult { value: cur, abs_err: err, abs_mass: mass * h, converged: true };
        }
        prev = cur;
    }
    let err = spec.abs_tol.max((prev).norm() * 1e-8);
    QuadResult { value: prev, abs_err: err, abs_mass: mass * h, converged: false }
}

/// `int_a^inf f`, mapped by `x = a + scale u/(1-u)` onto `[0, 1)` and integrated with
/// tanh-sinh. The integrand receives `(x, x - a)`.
pub fn semi_infinite<F: Fn(f64, f64) -> C64>(f: F, a: f64, scale: f64, spec: &QuadratureSpec) -> QuadResult {
    tanh_sinh(
        |_u, du, dv| {
            // u = du, 1 - u = dv
            if dv <= 0.0 {
                return C64::new(0.0, 0.0);
            }
            let d = scale * du / dv;
            if !d.is_finite() {
                return C64::new(0.0, 0.0);
            }
            f(a + d, d) * (scale / (dv * dv))
        },
        0.0,
        1.0,
        spec,
    )
}

/// `int_a^inf f` for an integrand that oscillates with half-period `half_period`
/// and is negligible beyond `cutoff`. The first panel uses tanh-sinh so that an
/// algebraic singularity at `a` is allowed; later panels use Gauss-Kronrod.
pub fn oscillatory<F: Fn(f64, f64) -> C64>(
    f: F,
    a: f64,
    half_period: f64,
    cutoff: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let first = tanh_sinh(|x, da, _| f(x, da), a, a + half_period, spec);
    let mut total = first;
    let span = (cutoff - a).max(half_period);
    let panels = (span / half_period).ceil() as usize;
    if panels > spec.oscillatory_segments {
        return Err(KoshError::NonConvergence {
            what: "oscillatory quadrature (segment budget)",
            estimate: panels as f64,
            error: spec.oscillatory_segments as f64,
        });
    }
    for k in 1..panels {
        let lo = a + k as f64 * half_period;
        let hi = lo + half_period;
        let r = gauss_kronrod(|x| f(x, x - a), lo, hi, spec);
        total = total.add(r);
    }
    let tol = target(spec, total.value, total.abs_mass);
    total.converged = total.abs_err <= tol * (panels as f64).sqrt().max(1.0);
    Ok(total)
}

/// Sum of independent pieces.
pub fn sum_results(parts: &[QuadResult]) -> QuadResult {
    parts.iter().fold(QuadResult::default(), |acc, r| acc.add(*r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn polynomial_and_trig() {
        let r = gauss_kronrod(|x| C64::new(x.powi(5), 0.0), 0.0, 2.0, &spec());
        assert!((r.value.re - 64.0 / 6.0).abs() < 1e-13 && r.converged);
        let r = gauss_kronrod(|x| C64::new(0.0, (30.0 * x).cos()), 0.0, PI, &spec());
        assert!(r.value.norm() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        // int_0^1 x^{-0.9} dx = 10
        let r = tanh_sinh(|_, d, _| C64::new(d.powf(-0.9), 0.0), 0.0, 1.0, &spec());
        assert!((r.value.re - 10.0).abs() < 1e-10, "{:?}", r);
        // int_{-1}^1 (1 - x^2)^{-1/2} = pi, using endpoint distances
        let r = tanh_sinh(|_, da, db| C64::new(1.0 / (da * db).sqrt(), 0.0), -1.0, 1.0, &spec());
        assert!((r.value.re - PI).abs() < 1e-12);
    }

    #[test]
    fn half_line() {
        // int_0^inf x^{-1/2} e^{-x} = sqrt(pi)
        let r = semi_infinite(|_, d| C64::new(d.powf(-0.5) * (-d).exp(), 0.0), 0.0, 1.0, &spec());
        assert!((r.value.re - PI.sqrt()).abs() < 1e-12, "{:?}", r);
        // int_2^inf e^{-50 (x-2)} = 1/50
        let r = semi_infinite(|_, d| C64::new((-50.0 * d).exp(), 0.0), 2.0, 0.02, &spec());
        assert!((r.value.re - 0.02).abs() < 1e-15);
    }

    #[test]
    fn oscillating_decay() {
        // int_0^inf e^{-x} cos(20 x) = 1/401
        let r = oscillatory(|x, _| C64::new((-x).exp() * (20.0 * x).cos(), 0.0), 0.0, PI / 20.0, 40.0, &spec())
            .unwrap();
        assert!((r.value.re - 1.0 / 401.0).abs() < 1e-14);
    }
}
