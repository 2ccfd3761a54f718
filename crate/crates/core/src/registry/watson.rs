//! Ramanujan-type theta relations, Watson-type series and the functional equation of `zeta_p`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::{
    c, ci, fin, finite_shapes, grid, param, positive, require, s_grid, IdentityEntry, IdentityId, Independence,
    ParamKind, ParamSpec, Params, ParamsExt, INF, ZERO,
};
use crate::config::EvalConfig;
use crate::error::{KoshError, Result};
use crate::kernels::{
    b_kernel, b_weighted_integral, g_kernel, j_integral, sine_b_integral, tail_power, watson2_head, watson2_lhs,
    watson2_rhs, watson3_lhs, watson3_rhs, watson_closed_form_s1, watson_closed_form_s2, watson_rhs_bessel,
    watson_rhs_integral, watson_series, watson_series_any,
};
use crate::koshzeta::{
    constants, eta_p_any, eta_p_pole_constant, gregory_sum, kosh_coeff, sigma_p_series, zeta_p_any, zeta_p_gregory,
    zeta_p_two_closed_form, NeumaierSum,
};
use crate::sequence::{sequence, ShapeParam};
use crate::specfun::{bessel_k, gamma, near_nonpositive_integer, rgamma, riemann_zeta, rpow, EULER_GAMMA};

use ParamKind::{Complex, Integer, Real, Shape};

const P_X: &[ParamSpec] = &[param("p", Shape), param("x", Real)];
const PP_X: &[ParamSpec] = &[param("pprime", Shape), param("x", Real)];
const P_PP_X: &[ParamSpec] = &[param("p", Shape), param("pprime", Shape), param("x", Real)];
const P_S_X: &[ParamSpec] = &[param("p", Shape), param("s", Complex), param("x", Real)];
const S_X: &[ParamSpec] = &[param("s", Complex), param("x", Real)];
const P_S_X_N: &[ParamSpec] = &[param("N", Integer), param("p", Shape), param("s", Complex), param("x", Real)];
const P_S: &[ParamSpec] = &[param("p", Shape), param("s", Complex)];
const X: &[ParamSpec] = &[param("x", Real)];

const NU_S: &[ParamSpec] = &[param("nu", Real), param("s", Complex)];

pub(super) fn entries() -> Vec<IdentityEntry> {
    vec![
        IdentityEntry {
            id: IdentityId {
                id: "R1",
                anchor: "sum w_n B_p'(lambda_n^2 x/2pi) against a G_p series over lambda'",
            },
            params: P_PP_X,
            domain: "x > 0, any shapes",
            independence: Independence::DistinctRepresentations,
            lhs_route: "B_p' kernel summed over the p-sequence",
            rhs_route: "G_p kernel summed over the p'-sequence, zeta_p(2), zeta_p'(1/2)",
            tolerance: 1e-7,
            check: check_x,
            eval: eval_r1,
            grid: || grid().shapes("p", &finite_shapes()).shapes("pprime", &finite_shapes()).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "R2", anchor: "sum w_n/(e^{lambda_n^2 x} - 1): theta relation with p' -> inf" },
            params: P_X,
            domain: "x > 0; p = inf is the classical square case, p = 0 the odd-square case",
            independence: Independence::DistinctRepresentations,
            lhs_route: "exponential series over the p-sequence",
            rhs_route: "G_p kernel series with Riemann zeta values",
            tolerance: 1e-7,
            check: check_x,
            eval: eval_r2,
            grid: || grid().shapes("p", &[fin(0.5), fin(1.0), fin(2.0), INF, ZERO]).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "R3", anchor: "sum_n B_p'(n^2 x/2pi): theta relation with p -> inf" },
            params: PP_X,
            domain: "x > 0; p' = 0 gives -sum 1/(e^{n^2 x} + 1)",
            independence: Independence::DistinctRepresentations,
            lhs_route: "B_p' kernel over the integers",
            rhs_route: "classical G series over the p'-sequence",
            tolerance: 1e-7,
            check: check_x,
            eval: |p, cfg| ramanujan(INF, p.shape("pprime")?, p.real("x")?, cfg),
            grid: || grid().shapes("pprime", &[fin(0.5), fin(1.0), fin(2.0), ZERO]).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "R4", anchor: "-sum w_n/(e^{lambda_n^2 x} + 1): theta relation with p' -> 0" },
            params: P_X,
            domain: "x > 0; p = 0 is the odd-square alternating case",
            independence: Independence::DistinctRepresentations,
            lhs_route: "exponential series over the p-sequence",
            rhs_route: "G_p kernel over odd integers with (sqrt 2 - 1) zeta(1/2)",
            tolerance: 1e-7,
            check: check_x,
            eval: eval_r4,
            grid: || grid().shapes("p", &[fin(0.5), fin(1.0), fin(2.0), ZERO]).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "R5", anchor: "sum B_p'((2n-1)^2 x/2pi): theta relation with p -> 0" },
            params: PP_X,
            domain: "x > 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "B_p' kernel over odd integers",
            rhs_route: "odd-limit G series over the p'-sequence",
            tolerance: 1e-7,
            check: check_x,
            eval: |p, cfg| ramanujan(ZERO, p.shape("pprime")?, 4.0 * p.real("x")?, cfg),
            grid: || grid().shapes("pprime", &[fin(0.5), fin(1.0), fin(2.0), INF]).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W1", anchor: "phi_p(s,x) = head + K-Bessel fractional-integral series" },
            params: P_S_X,
            domain: "Re s > 1/2, x > 0",
            independence: Independence::DistinctModules,
            lhs_route: "weighted Gregory series of (lambda^2 + x^2)^{-s}",
            rhs_route: "Bessel K series with Laguerre-panel fractional integrals",
            tolerance: 1e-7,
            check: |p| {
                check_x(p)?;
                let s = p.complex("s")?;
                require(s.re > 0.5, || format!("needs Re s > 1/2, got {s}"))
            },
            eval: |p, cfg| {
                let (shape, s, x) = psx(p)?;
                Ok((watson_series(shape, s, x, cfg)?.value, watson_rhs_bessel(shape, s, x, cfg)?))
            },
            grid: || grid().shapes("p", &finite_shapes()).complexes("s", &s_grid()).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W2", anchor: "phi_p(s,x) = head + B_p-weighted kernel integral" },
            params: P_S_X,
            domain: "1/2 < Re s < 1, x > 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "weighted Gregory series of (lambda^2 + x^2)^{-s}",
            rhs_route: "tanh-sinh integral of y^{-s}(1+y)^{-s} B_p(x(2y+1))",
            tolerance: 1e-7,
            check: |p| {
                check_x(p)?;
                let s = p.complex("s")?;
                require(s.re > 0.5 && s.re < 1.0, || format!("needs 1/2 < Re s < 1, got {s}"))
            },
            eval: |p, cfg| {
                let (shape, s, x) = psx(p)?;
                Ok((watson_series(shape, s, x, cfg)?.value, watson_rhs_integral(shape, s, x, cfg)?))
            },
            grid: || {
                grid()
                    .shapes("p", &finite_shapes())
                    .complexes("s", &[c(0.6), c(0.75), c(0.9), ci(0.6, 0.3)])
                    .reals("x", &[0.5, 1.0, 2.0])
                    .build()
            },
        },
        IdentityEntry {
            id: IdentityId { id: "W3", anchor: "classical sum (n^2 + x^2)^{-s} with K_{s-1/2}(2 pi n x)" },
            params: S_X,
            domain: "Re s > 1/2, x > 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "Gregory series over the integers",
            rhs_route: "inline K-Bessel series",
            tolerance: 1e-7,
            check: check_half_plane,
            eval: |p, cfg| {
                let (s, x) = (p.complex("s")?, p.real("x")?);
                let lhs = watson_series_any(INF, s, x, cfg)?.value;
                let head = PI.sqrt() * rpow(x, 1.0 - 2.0 * s) * gamma(s - 0.5) * rgamma(s) / 2.0 - rpow(x, -2.0 * s) / 2.0;
                let tail = bessel_sum(s - 0.5, 2.0 * PI * x, |n| (n as f64, 1.0))?;
                Ok((lhs, head + 2.0 * rpow(PI, s) * rpow(x, 0.5 - s) * rgamma(s) * tail))
            },
            grid: || grid().complexes("s", &s_grid()).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W4", anchor: "sum ((2n-1)^2 + x^2)^{-s} with alternating K_{s-1/2}(pi n x)" },
            params: S_X,
            domain: "Re s > 1/2, x > 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "Gregory series over half-integers",
            rhs_route: "inline alternating K-Bessel series",
            tolerance: 1e-7,
            check: check_half_plane,
            eval: |p, cfg| {
                let (s, x) = (p.complex("s")?, p.real("x")?);
                let lhs = rpow(4.0, -s) * watson_series_any(ZERO, s, x / 2.0, cfg)?.value;
                let head = PI.sqrt() * rpow(x, 1.0 - 2.0 * s) * gamma(s - 0.5) * rgamma(s) / 4.0;
                let tail = bessel_sum(s - 0.5, PI * x, |n| (n as f64, if n % 2 == 1 { -1.0 } else { 1.0 }))?;
                let pre = rpow(2.0, 0.5 - s) * rpow(x, 0.5 - s) * rpow(PI, s) * rgamma(s);
                Ok((lhs, head + pre * tail))
            },
            grid: || grid().complexes("s", &s_grid()).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W5", anchor: "phi_p continued left of Re s = 1/2 with N subtracted binomial terms" },
            params: P_S_X_N,
            domain: "N >= 1, 1/2 - N < Re s < 1, s != 1/2 - m",
            independence: Independence::DistinctModules,
            lhs_route: "Gregory series of the binomially subtracted summand plus zeta_p(2s + 2m)",
            rhs_route: "B_p-weighted kernel integral",
            tolerance: 1e-7,
            check: |p| {
                check_x(p)?;
                let (s, n) = (p.complex("s")?, p.integer("N")?);
                require(n >= 1, || format!("N must be at least 1, got {n}"))?;
                require(s.re > 0.5 - n as f64 && s.re < 1.0, || format!("needs 1/2 - N < Re s < 1, got {s}"))?;
                half_int_pole(s)
            },
            eval: eval_w5,
            grid: || {
                let mut g = Vec::new();
                for (n, s) in [(1, c(0.75)), (1, c(0.25)), (2, c(-0.75)), (2, ci(-0.3, 0.4)), (3, c(-1.7))] {
                    g.extend(grid().ints("N", &[n]).shapes("p", &finite_shapes()).complexes("s", &[s]).reals("x", &[0.5, 1.0]).build());
                }
                g
            },
        },
        IdentityEntry {
            id: IdentityId { id: "W6", anchor: "sum w(1/sqrt(lambda^2+x^2) - 1/lambda) + C1 + log(x/2) + kappa/2x" },
            params: P_X,
            domain: "x > 0",
            independence: Independence::DistinctModules,
            lhs_route: "Gregory series with logarithmic tail and the constant C1",
            rhs_route: "B_p-weighted kernel integral at exponent 1/2",
            tolerance: 1e-7,
            check: check_x,
            eval: |p, cfg| {
                let (shape, x) = (p.shape("p")?, p.real("x")?);
                let k = constants(shape, cfg)?;
                let lhs = log_series(shape, x, cfg)? + c(k.c1 + (x / 2.0).ln() + shape.kappa() / (2.0 * x));
                Ok((lhs, 2.0 * b_weighted_integral(shape, c(0.5), x, &cfg.quad)?))
            },
            grid: || grid().shapes("p", &finite_shapes()).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W7", anchor: "sum (1/sqrt(n^2+x^2) - 1/n) + 1/2x + gamma + log(x/2) = 2 sum K_0(2 pi n x)" },
            params: P_X,
            domain: "x > 0; p = inf for the integers, p = 0 for the odd integers",
            independence: Independence::DistinctRepresentations,
            lhs_route: "Gregory series with logarithmic tail",
            rhs_route: "inline K_0 series",
            tolerance: 1e-7,
            check: |p| {
                check_x(p)?;
                let s = p.shape("p")?;
                require(!s.is_finite(), || "p must be inf or 0".into())
            },
            eval: |p, cfg| {
                let (shape, x) = (p.shape("p")?, p.real("x")?);
                if shape == INF {
                    let lhs = log_series(INF, x, cfg)? + c(1.0 / (2.0 * x) + EULER_GAMMA + (x / 2.0).ln());
                    Ok((lhs, 2.0 * bessel_sum(c(0.0), 2.0 * PI * x, |n| (n as f64, 1.0))?))
                } else {
                    let lhs = 0.5 * log_series(ZERO, x / 2.0, cfg)? + c(EULER_GAMMA / 2.0 + x.ln() / 2.0);
                    Ok((lhs, bessel_sum(c(0.0), PI * x, |n| (n as f64, if n % 2 == 1 { -1.0 } else { 1.0 }))?))
                }
            },
            grid: || grid().shapes("p", &[INF, ZERO]).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W8", anchor: "phi_p(1,x) = pi/2x - kappa/2x^2 + (pi/x) B_p(x)" },
            params: P_X,
            domain: "x > 0",
            independence: Independence::ClosedForm,
            lhs_route: "weighted Gregory series",
            rhs_route: "elementary closed form",
            tolerance: 1e-9,
            check: check_x,
            eval: |p, cfg| {
                let (shape, x) = (p.shape("p")?, p.real("x")?);
                Ok((watson_series(shape, c(1.0), x, cfg)?.value, c(watson_closed_form_s1(shape, x))))
            },
            grid: || grid().shapes("p", &finite_shapes()).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W9", anchor: "phi_p(2,x) in closed form through B_p(x)" },
            params: P_X,
            domain: "x > 0",
            independence: Independence::ClosedForm,
            lhs_route: "weighted Gregory series",
            rhs_route: "elementary closed form",
            tolerance: 1e-9,
            check: check_x,
            eval: |p, cfg| {
                let (shape, x) = (p.shape("p")?, p.real("x")?);
                Ok((watson_series(shape, c(2.0), x, cfg)?.value, c(watson_closed_form_s2(shape, x))))
            },
            grid: || grid().shapes("p", &finite_shapes()).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W10", anchor: "sum w lambda^{s-1/2} K_{s-1/2}(2 pi lambda x) = head + J_{s-1/2} integral against B_p" },
            params: P_S_X,
            domain: "Re s > 1, x > 0",
            independence: Independence::DistinctModules,
            lhs_route: "weighted series of the second Watson form",
            rhs_route: "J_{s-1/2} integral against B_p",
            tolerance: 1e-7,
            check: |p| {
                check_x(p)?;
                let s = p.complex("s")?;
                require(s.re > 1.0, || format!("needs Re s > 1, got {s}"))
            },
            eval: |p, cfg| {
                let (shape, s, x) = psx(p)?;
                Ok((watson2_lhs(shape, s, x, cfg)?.value, watson2_rhs(shape, s, x, cfg)?))
            },
            grid: || grid().shapes("p", &finite_shapes()).complexes("s", &[c(1.5), c(2.5), ci(2.0, 1.0)]).reals("x", &[0.5, 1.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W11", anchor: "sum (-1)^n (n^2+x^2)^{-s} = -x^{-2s}/2 + K_{s-1/2}(pi(2n-1)x) series" },
            params: S_X,
            domain: "Re s > 1/2, x > 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "difference of two Gregory series",
            rhs_route: "inline K-Bessel series over odd integers",
            tolerance: 1e-7,
            check: check_half_plane,
            eval: |p, cfg| {
                let (s, x) = (p.complex("s")?, p.real("x")?);
                let lhs = 2.0 * rpow(4.0, -s) * watson_series_any(INF, s, x / 2.0, cfg)?.value
                    - watson_series_any(INF, s, x, cfg)?.value;
                let tail = bessel_sum(s - 0.5, PI * x, |n| ((2 * n - 1) as f64, 1.0))?;
                let pre = rpow(2.0, 1.5 - s) * rpow(PI, s) * rpow(x, 0.5 - s) * rgamma(s);
                Ok((lhs, -rpow(x, -2.0 * s) / 2.0 + pre * tail))
            },
            grid: || grid().complexes("s", &s_grid()).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W12", anchor: "second Watson form continued with N eta_p(2s+2k) terms" },
            params: P_S_X_N,
            domain: "N >= 0, Re s > -N - 1/2, s not in 1/2 - j or a nonpositive integer",
            independence: Independence::DistinctModules,
            lhs_route: "weighted series of the second Watson form",
            rhs_route: "eta_p values and the subtracted J-Bessel integral",
            tolerance: 1e-7,
            check: |p| {
                check_x(p)?;
                let (s, n) = (p.complex("s")?, p.integer("N")?);
                require(n >= 0, || format!("N must be nonnegative, got {n}"))?;
                require(s.re > -(n as f64) - 0.5, || format!("needs Re s > -N - 1/2, got {s}"))?;
                half_int_pole(s)?;
                if near_nonpositive_integer(s, 1e-12) {
                    return Err(KoshError::Pole(format!("Gamma(s + k) at s = {s}")));
                }
                Ok(())
            },
            eval: eval_w12,
            grid: || {
                let mut g = Vec::new();
                for (n, s) in [(1, c(0.75)), (1, c(0.3)), (1, ci(-0.3, 0.5)), (2, c(-1.2))] {
                    g.extend(grid().ints("N", &[n]).shapes("p", &finite_shapes()).complexes("s", &[s]).reals("x", &[0.5, 1.0]).build());
                }
                g
            },
        },
        IdentityEntry {
            id: IdentityId { id: "W13", anchor: "second Watson form at s = 1/2 with the logarithmic constant" },
            params: P_X,
            domain: "x > 0",
            independence: Independence::DistinctModules,
            lhs_route: "weighted series of the second Watson form",
            rhs_route: "C2 + kappa log kappa, log(x/2) and the J_0 integral",
            tolerance: 1e-7,
            check: check_x,
            eval: |p, cfg| {
                let (shape, x) = (p.shape("p")?, p.real("x")?);
                let half = c(0.5);
                let k = constants(shape, cfg)?;
                let rhs = c(1.0 / (4.0 * x) + eta_p_pole_constant(shape, &k) / 2.0 + shape.kappa() * (x / 2.0).ln() / 2.0)
                    + j_integral(shape, half, x, Some(0), cfg)?;
                Ok((watson2_lhs(shape, half, x, cfg)?.value, rhs))
            },
            grid: || grid().shapes("p", &finite_shapes()).reals("x", &[0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W14", anchor: "sum (-1)^n/sqrt(x^2+n^2) = -1/2x + 2 sum K_0(pi(2n-1)x)" },
            params: X,
            domain: "x > 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "difference of logarithmic Gregory series",
            rhs_route: "inline K_0 series over odd integers",
            tolerance: 1e-7,
            check: check_x,
            eval: |p, cfg| {
                let x = p.real("x")?;
                let lhs = log_series(INF, x / 2.0, cfg)? - log_series(INF, x, cfg)? - c(2f64.ln());
                let rhs = -1.0 / (2.0 * x) + 2.0 * bessel_sum(c(0.0), PI * x, |n| ((2 * n - 1) as f64, 1.0))?;
                Ok((lhs, rhs))
            },
            grid: || grid().reals("x", &[0.25, 0.5, 1.0, 2.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W15", anchor: "sigma_p(2 pi x) = -kappa/2 + 1/2 pi x + 2 int sin(2 pi x y) B_p(y) dy" },
            params: P_X,
            domain: "x > 0",
            independence: Independence::DistinctModules,
            lhs_route: "weighted exponential series",
            rhs_route: "oscillatory sine integral of B_p",
            tolerance: 1e-7,
            check: check_x,
            eval: |p, cfg| {
                let (shape, x) = (p.shape("p")?, p.real("x")?);
                let lhs = sigma_p_series(shape, c(2.0 * PI * x), cfg)?.value;
                let rhs = -shape.kappa() / 2.0 + 1.0 / (2.0 * PI * x) + 2.0 * sine_b_integral(shape, x, cfg)?;
                Ok((lhs, c(rhs)))
            },
            grid: || grid().shapes("p", &finite_shapes()).reals("x", &[0.25, 0.5, 1.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "W16", anchor: "third Watson form: m-sum of t^nu K_nu(xt) cos(m phi(t)) integrals" },
            params: P_S_X,
            domain: "Re s > 1/2, x > 0",
            independence: Independence::DistinctModules,
            lhs_route: "continuous-index Gregory m-sum of K-Bessel integrals",
            rhs_route: "second Watson form minus its head",
            tolerance: 1e-7,
            check: |p| {
                check_x(p)?;
                let s = p.complex("s")?;
                require(s.re > 0.5, || format!("needs Re s > 1/2, got {s}"))
            },
            eval: |p, cfg| {
                let (shape, s, x) = psx(p)?;
                Ok((watson3_lhs(shape, s, x, cfg)?.value, watson3_rhs(shape, s, x, cfg)?))
            },
            grid: || grid().shapes("p", &finite_shapes()).complexes("s", &[c(0.75), c(1.5), ci(2.0, 1.0)]).reals("x", &[1.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "F1", anchor: "zeta_p(1-s) = 2 cos(pi s/2) Gamma(s) (2 pi)^{-s} eta_p(s)" },
            params: P_S,
            domain: "Re s > 1",
            independence: Independence::DistinctRepresentations,
            lhs_route: "Gregory continuation of zeta_p",
            rhs_route: "direct eta_p series",
            tolerance: 1e-6,
            check: |p| {
                let s = p.complex("s")?;
                require(s.re > 1.0, || format!("needs Re s > 1, got {s}"))
            },
            eval: |p, cfg| {
                let (shape, s) = (p.shape("p")?, p.complex("s")?);
                let lhs = zeta_p_gregory(shape, 1.0 - s, cfg)?.value;
                let rhs = 2.0 * (PI * s / 2.0).cos() * gamma(s) * rpow(2.0 * PI, -s) * eta_p_any(shape, s, cfg)?;
                Ok((lhs, rhs))
            },
            grid: || {
                grid()
                    .shapes("p", &[fin(0.5), fin(1.0), fin(2.0), INF, ZERO])
                    .complexes("s", &[c(1.5), c(2.5), ci(2.0, 1.0), ci(1.2, 0.5)])
                    .build()
            },
        },
        IdentityEntry {
            id: IdentityId { id: "F2", anchor: "(s, nu k)_k -> (1 + 2/nu)^{-s} as k -> inf" },
            params: NU_S,
            domain: "nu > 0, Re s > 0",
            independence: Independence::ClosedForm,
            lhs_route: "Richardson extrapolation of the coefficient integrals",
            rhs_route: "elementary power",
            tolerance: 1e-7,
            check: |p| {
                positive(p, "nu")?;
                let s = p.complex("s")?;
                require(s.re > 0.0, || format!("needs Re s > 0, got {s}"))
            },
            eval: |p, cfg| {
                let (nu, s) = (p.real("nu")?, p.complex("s")?);
                let k0 = 50;
                let v: Vec<C64> = [k0, 2 * k0, 4 * k0]
                    .iter()
                    .map(|&k| kosh_coeff(s, k, nu, &cfg.quad))
                    .collect::<Result<_>>()?;
                let r1 = (4.0 * v[1] - v[0]) / 3.0;
                let r2 = (4.0 * v[2] - v[1]) / 3.0;
                let lhs = (16.0 * r2 - r1) / 15.0;
                Ok((lhs, rpow(1.0 + 2.0 / nu, -s)))
            },
            grid: || grid().reals("nu", &[0.5, 1.0, 2.0]).complexes("s", &[c(0.75), c(1.5), ci(2.0, 1.0)]).build(),
        },
    ]
}

fn check_x(p: &Params) -> Result<()> {
    positive(p, "x").map(|_| ())
}

fn check_half_plane(p: &Params) -> Result<()> {
    check_x(p)?;
    let s = p.complex("s")?;
    require(s.re > 0.5, || format!("needs Re s > 1/2, got {s}"))
}

fn half_int_pole(s: C64) -> Result<()> {
    if near_nonpositive_integer(s - 0.5, 1e-12) {
        return Err(KoshError::Pole(format!("Gamma(s - 1/2) at s = {s}")));
    }
    Ok(())
}

fn psx(p: &Params) -> Result<(ShapeParam, C64, f64)> {
    Ok((p.shape("p")?, p.complex("s")?, p.real("x")?))
}

/// `sum_n c_n a_n^nu K_nu(z a_n)` with `(a_n, c_n) = f(n)`, until the terms are negligible.
fn bessel_sum(nu: C64, z: f64, f: impl Fn(usize) -> (f64, f64)) -> Result<C64> {
    let mut sum = NeumaierSum::default();
    let mut n = 1;
    loop {
        let (a, sign) = f(n);
        let arg = z * a;
        let term = sign * rpow(a, nu) * bessel_k(nu, arg)?;
        sum.add(term);
        if arg > 50.0 + nu.norm_sqr() && term.norm() < 1e-17 * (1.0 + sum.total().norm()) {
            return Ok(sum.total());
        }
        n += 1;
    }
}

/// `sum_n w_n (1/sqrt(lambda_n^2 + x^2) - 1/lambda_n)`.
fn log_series(shape: ShapeParam, x: f64, cfg: &EvalConfig) -> Result<C64> {
    let n = cfg.series_n.max((2.0 * x).ceil() as usize + 16);
    let seq = sequence(shape, n + cfg.gregory_k + 2)?;
    let x2 = x * x;
    let f = |l: f64| c(1.0 / (l * l + x2).sqrt() - 1.0 / l);
    // int_L^inf (1/sqrt(t^2+x^2) - 1/t) dt = -log((1 + sqrt(1 + u))/2), u = x^2/L^2
    let tail = |l: f64| {
        let u = x2 / (l * l);
        c(-(u / ((1.0 + u).sqrt() + 1.0) / 2.0).ln_1p())
    };
    Ok(gregory_sum(&seq, n, cfg.gregory_k, f, tail).value)
}

/// Both sides of the general theta relation
/// `sum w_n B_p'(lambda_n^2 x/2pi) = kappa/4 + kappa' zeta_p(2)/x
/// + (1/2) sqrt(pi/x) (zeta_p'(1/2) + sum w'_n lambda'_n^{-1/2} G_p(2 pi lambda'_n/x))`.
fn ramanujan(p: ShapeParam, pp: ShapeParam, x: f64, cfg: &EvalConfig) -> Result<(C64, C64)> {
    let nmax = (45.0 / x).sqrt().ceil() as usize + 2;
    let seq = sequence(p, nmax)?;
    let mut lhs = 0.0;
    for (l, w) in seq.iter().take(nmax) {
        lhs += w * b_kernel(pp, l * l * x / (2.0 * PI));
    }
    let mut gsum = 0.0;
    let mut n = 1;
    loop {
        let seq = sequence(pp, n)?;
        let (l, w) = (seq.lambda(n), seq.weight(n));
        let a = 2.0 * PI * l / x;
        gsum += w * g_kernel(p, a)? / l.sqrt();
        if PI * (2.0 * a).sqrt() > 45.0 {
            break;
        }
        n += 1;
    }
    let z_half = zeta_p_any(pp, c(0.5), cfg)?.value.re;
    let rhs = p.kappa() / 4.0 + pp.kappa() * zeta_p_two_closed_form(p) / x + 0.5 * (PI / x).sqrt() * (z_half + gsum);
    Ok((c(lhs), c(rhs)))
}

fn eval_r1(p: &Params, cfg: &EvalConfig) -> Result<(C64, C64)> {
    ramanujan(p.shape("p")?, p.shape("pprime")?, p.real("x")?, cfg)
}

/// `(cos t - sin t - e^{-t})/(cosh t - cos t)` and `(cos t - sin t + e^{-t})/(cosh t + cos t)`.
fn theta_minus(t: f64) -> f64 {
    (t.cos() - t.sin() - (-t).exp()) / (t.cosh() - t.cos())
}

fn theta_plus(t: f64) -> f64 {
    (t.cos() - t.sin() + (-t).exp()) / (t.cosh() + t.cos())
}

fn until_small(mut f: impl FnMut(usize) -> (f64, f64)) -> f64 {
    let mut sum = 0.0;
    let mut n = 1;
    loop {
        let (term, arg) = f(n);
        sum += term;
        if arg > 45.0 {
            return sum;
        }
        n += 1;
    }
}

fn eval_r2(p: &Params, cfg: &EvalConfig) -> Result<(C64, C64)> {
    let (shape, x) = (p.shape("p")?, p.real("x")?);
    let z_half = riemann_zeta(c(0.5)).re;
    let r = (PI / x).sqrt();
    match shape {
        ShapeParam::Infinity => {
            let lhs = until_small(|n| {
                let e = (n * n) as f64 * x;
                (1.0 / e.exp_m1(), e)
            });
            let tail = until_small(|n| {
                let t = 2.0 * PI * (PI * n as f64 / x).sqrt();
                (theta_minus(t) / (n as f64).sqrt(), t)
            });
            let rhs = PI * PI / (6.0 * x) + 0.25 + 0.5 * r * z_half + 0.5 * r * tail;
            Ok((c(lhs), c(rhs)))
        }
        ShapeParam::Zero => {
            let lhs = until_small(|n| {
                let m = (2 * n - 1) as f64;
                let e = m * m * x;
                (1.0 / e.exp_m1(), e)
            });
            let tail = until_small(|n| {
                let t = PI * (PI * n as f64 / x).sqrt();
                (theta_plus(t) / (n as f64).sqrt(), t)
            });
            let rhs = PI * PI / (8.0 * x) + 0.25 * r * (z_half - tail);
            Ok((c(lhs), c(rhs)))
        }
        ShapeParam::Finite(_) => ramanujan(shape, INF, x, cfg),
    }
}

fn eval_r4(p: &Params, cfg: &EvalConfig) -> Result<(C64, C64)> {
    let (shape, x) = (p.shape("p")?, p.real("x")?);
    if shape != ZERO {
        return ramanujan(shape, ZERO, x, cfg);
    }
    let z_half = riemann_zeta(c(0.5)).re;
    let lhs = until_small(|n| {
        let m = (2 * n - 1) as f64;
        let e = m * m * x;
        (1.0 / (e.exp() + 1.0), e)
    });
    let tail = until_small(|n| {
        let m = (2 * n - 1) as f64;
        let t = PI * (PI * m / (2.0 * x)).sqrt();
        (theta_plus(t) / m.sqrt(), t)
    });
    let rhs = 0.25 * (PI / x).sqrt() * (1.0 - 2f64.sqrt()) * z_half + 0.25 * (2.0 * PI / x).sqrt() * tail;
    Ok((c(lhs), c(rhs)))
}

/// `binom(-s, m)`.
fn binom_neg(s: C64, m: usize) -> C64 {
    let mut b = c(1.0);
    for j in 0..m {
        b = b * (-s - j as f64) / (j + 1) as f64;
    }
    b
}

fn eval_w5(p: &Params, cfg: &EvalConfig) -> Result<(C64, C64)> {
    let (shape, s, x) = psx(p)?;
    let nn = p.integer("N")? as usize;
    let n = 40usize.max((2.0 * x).ceil() as usize + 16);
    let seq = sequence(shape, n + cfg.gregory_k + 2)?;
    let x2 = x * x;
    let coef: Vec<C64> = (0..nn).map(|m| binom_neg(s, m) * x2.powi(m as i32)).collect();
    let f = |l: f64| {
        let mut v = rpow(l * l + x2, -s);
        for (m, cm) in coef.iter().enumerate() {
            v -= cm * rpow(l, -2.0 * s - 2.0 * m as f64);
        }
        v
    };
    let tail_l = seq.lambda(n);
    let mut tail = tail_power(s, x, tail_l, &cfg.quad)?;
    for (m, cm) in coef.iter().enumerate() {
        let e = 2.0 * s + 2.0 * m as f64 - 1.0;
        tail -= cm * rpow(tail_l, -e) / e;
    }
    let mut lhs = gregory_sum(&seq, n, cfg.gregory_k, f, |_| tail).value;
    for (m, cm) in coef.iter().enumerate() {
        lhs += cm * zeta_p_any(shape, 2.0 * s + 2.0 * m as f64, cfg)?.value;
    }
    Ok((lhs, watson_rhs_integral(shape, s, x, cfg)?))
}

fn eval_w12(p: &Params, cfg: &EvalConfig) -> Result<(C64, C64)> {
    let (shape, s, x) = psx(p)?;
    let nn = p.integer("N")? as usize;
    let mut poly = c(0.0);
    let mut fact = 1.0;
    for k in 0..=nn {
        if k > 0 {
            fact *= k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        poly += sign * x.powi(2 * k as i32) / fact * gamma(s + kf) * eta_p_any(shape, 2.0 * s + 2.0 * kf, cfg)?;
    }
    let rhs = watson2_head(shape, s, x)? + rpow(x, s - 0.5) / (2.0 * rpow(PI, s)) * poly
        + j_integral(shape, s, x, Some(nn), cfg)?;
    Ok((watson2_lhs(shape, s, x, cfg)?.value, rhs))
}
