//! Modular relations under `alpha beta = pi^2`: Guinand and Koshliakov type formulas,
//! Dedekind-type sums and their classical forms.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::{
    c, ci, fin, finite_shapes, gamma_pole, grid, param, positive, require, s_grid_modular, IdentityEntry,
    IdentityId, Independence, ParamKind, ParamSpec, ParamValue, Params, ParamsExt, INF, ZERO,
};
use crate::config::EvalConfig;
use crate::epstein::laurent_extract;
use crate::error::Result;
use crate::kernels::{b_kernel, k_kernel, k_kernel_limit};
use crate::koshzeta::{constants, eta_p_any, zeta_p_any, NeumaierSum};
use crate::sequence::{sequence, ShapeParam};
use crate::specfun::{bessel_k, gamma, rgamma, riemann_zeta, rpow, EULER_GAMMA};

use ParamKind::{Complex, Integer, Real, Shape};

const ALPHA: &[ParamSpec] = &[param("alpha", Real)];
const P_ALPHA: &[ParamSpec] = &[param("alpha", Real), param("p", Shape)];
const P_ALPHA_S: &[ParamSpec] = &[param("alpha", Real), param("p", Shape), param("s", Complex)];
const ALPHA_S: &[ParamSpec] = &[param("alpha", Real), param("s", Complex)];

const ALPHAS: [f64; 3] = [1.0, PI, 4.0];

const NU_P_X: &[ParamSpec] = &[param("nu", Complex), param("p", Shape), param("x", Real)];
const ALPHA_S_VARIANT: &[ParamSpec] = &[param("alpha", Real), param("s", Complex), param("variant", Integer)];
const P_PP_ALPHA_S: &[ParamSpec] = &[param("alpha", Real), param("p", Shape), param("pprime", Shape), param("s", Complex)];
const P_PP_ALPHA: &[ParamSpec] = &[param("alpha", Real), param("p", Shape), param("pprime", Shape)];
const P_ONLY: &[ParamSpec] = &[param("p", Shape)];
const VARIANT: &[ParamSpec] = &[ParamSpec { name: "variant", kind: Integer, default: Some(ParamValue::Integer(1)) }];

pub(super) fn entries() -> Vec<IdentityEntry> {
    vec![
        IdentityEntry {
            id: IdentityId { id: "L1", anchor: "K_{nu,p}(x) tends to Gamma(1/2-nu)(2x)^nu/sqrt(pi) sum (+-1)^n n^nu K_nu(nx)" },
            params: NU_P_X,
            domain: "Re nu < 1/2, x > 0, p = inf or 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "B_p-weighted kernel integral",
            rhs_route: "K-Bessel series",
            tolerance: 1e-7,
            check: |p| {
                positive(p, "x")?;
                let nu = p.complex("nu")?;
                require(nu.re < 0.5, || format!("needs Re nu < 1/2, got {nu}"))?;
                require(!p.shape("p")?.is_finite(), || "p must be inf or 0".into())
            },
            eval: |p, cfg| {
                let (shape, nu, x) = (p.shape("p")?, p.complex("nu")?, p.real("x")?);
                Ok((k_kernel(shape, nu, x, cfg)?, k_kernel_limit(nu, x, shape == ZERO)?))
            },
            grid: || {
                grid()
                    .complexes("nu", &[c(-0.25), c(0.0), c(0.25), ci(0.2, 0.3), ci(0.0, -0.5)])
                    .shapes("p", &[INF, ZERO])
                    .reals("x", &[0.5, 1.0, 2.0])
                    .build()
            },
        },
        IdentityEntry {
            id: IdentityId { id: "L2", anchor: "Guinand-type relation for sum w lambda^{-s} K_{s/2,p}(2 lambda alpha)" },
            params: P_ALPHA_S,
            domain: "alpha > 0, Re s < 1, s not an even integer",
            independence: Independence::DistinctModules,
            lhs_route: "K_{s/2,p} kernel series at alpha and beta",
            rhs_route: "gamma, eta_p(-s) and zeta_p(s)",
            tolerance: 1e-7,
            check: check_guinand,
            eval: |p, cfg| {
                let (shape, alpha, s) = (p.shape("p")?, p.real("alpha")?, p.complex("s")?);
                let beta = PI * PI / alpha;
                let lhs = guinand_kernel_side(shape, shape, s, alpha, cfg)? - guinand_kernel_side(shape, shape, s, beta, cfg)?;
                let rhs = gamma(-s / 2.0) * eta_p_any(shape, -s, cfg)? * shape.kappa() / 4.0
                    * (rpow(beta, (1.0 + s) / 2.0) - rpow(alpha, (1.0 + s) / 2.0))
                    + gamma(s / 2.0) * zeta_p_any(shape, s, cfg)?.value / 4.0
                        * (rpow(beta, (1.0 - s) / 2.0) - rpow(alpha, (1.0 - s) / 2.0));
                Ok((lhs, rhs))
            },
            grid: || grid().reals("alpha", &ALPHAS).shapes("p", &finite_shapes()).complexes("s", &s_grid_modular()).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "L3", anchor: "sqrt(a)(gamma_p/4 - kappa log(4b)/4 + sum w K_{0,p}(2 a lambda)) symmetric in alpha, beta" },
            params: P_ALPHA,
            domain: "alpha > 0",
            independence: Independence::ModularPair,
            lhs_route: "K_{0,p} kernel series with gamma_p",
            rhs_route: "K_{0,p} kernel series with gamma_p",
            tolerance: 1e-7,
            check: |p| positive(p, "alpha").map(|_| ()),
            eval: |p, cfg| {
                let (shape, alpha) = (p.shape("p")?, p.real("alpha")?);
                let beta = PI * PI / alpha;
                let gp = constants(shape, cfg)?.gamma_p;
                let side = |a: f64, b: f64| -> Result<C64> {
                    let sum = kernel_series(shape, shape, c(0.0), a, cfg)?;
                    Ok(a.sqrt() * (gp / 4.0 - shape.kappa() * (4.0 * b).ln() / 4.0 + sum))
                };
                Ok((side(alpha, beta)?, side(beta, alpha)?))
            },
            grid: || grid().reals("alpha", &ALPHAS).shapes("p", &[fin(0.5), fin(1.0), fin(2.0), ZERO]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "L4", anchor: "classical Guinand and Koshliakov double K-Bessel sums (four variants)" },
            params: ALPHA_S_VARIANT,
            domain: "alpha > 0; variants 1, 2: Re s < 1, s not an even integer; variants 3, 4 are the s = 0 forms and take s = 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "double K-Bessel sums at alpha and beta",
            rhs_route: "gamma and Riemann zeta (variants 1, 2) or the same sums at beta (3, 4)",
            tolerance: 1e-7,
            check: |p| {
                positive(p, "alpha")?;
                let (s, v) = (p.complex("s")?, p.integer("variant")?);
                match v {
                    1 | 2 => {
                        require(s.re < 1.0, || format!("needs Re s < 1, got {s}"))?;
                        gamma_pole(s)
                    }
                    3 | 4 => require(s == c(0.0), || "variants 3 and 4 take s = 0".into()),
                    _ => require(false, || format!("variant must be 1..4, got {v}")),
                }
            },
            eval: eval_l4,
            grid: || {
                let s12 = [c(-0.5), ci(-0.5, 0.5), ci(0.0, 0.5), ci(0.6, 0.3), c(0.75)];
                let mut g = grid().reals("alpha", &ALPHAS).complexes("s", &s12).ints("variant", &[1, 2]).build();
                g.extend(grid().reals("alpha", &ALPHAS).complexes("s", &[c(0.0)]).ints("variant", &[3, 4]).build());
                g
            },
        },
        IdentityEntry {
            id: IdentityId { id: "L5", anchor: "two-parameter Guinand-type relation mixing p and p'" },
            params: P_PP_ALPHA_S,
            domain: "alpha > 0, Re s < 1, s not an even integer",
            independence: Independence::DistinctModules,
            lhs_route: "gamma, eta_p(-s), eta_p'(-s), zeta_p(s), zeta_p'(s)",
            rhs_route: "K_{s/2,p} and K_{s/2,p'} kernel series",
            tolerance: 1e-7,
            check: check_guinand,
            eval: |p, cfg| {
                let (sp, spp, alpha, s) = (p.shape("p")?, p.shape("pprime")?, p.real("alpha")?, p.complex("s")?);
                let beta = PI * PI / alpha;
                let lhs = gamma(-s / 2.0) / 4.0
                    * (rpow(beta, (s + 1.0) / 2.0) * sp.kappa() * eta_p_any(spp, -s, cfg)?
                        - rpow(alpha, (s + 1.0) / 2.0) * spp.kappa() * eta_p_any(sp, -s, cfg)?)
                    + gamma(s / 2.0) / 4.0
                        * (rpow(beta, (1.0 - s) / 2.0) * zeta_p_any(sp, s, cfg)?.value
                            - rpow(alpha, (1.0 - s) / 2.0) * zeta_p_any(spp, s, cfg)?.value);
                let rhs = guinand_kernel_side(sp, spp, s, alpha, cfg)? - guinand_kernel_side(spp, sp, s, beta, cfg)?;
                Ok((lhs, rhs))
            },
            grid: || {
                let s = [c(-0.5), ci(-0.5, 0.5), ci(0.6, 0.3), c(0.75)];
                let mut g = grid().reals("alpha", &[1.0, 4.0]).shapes("p", &[fin(1.0)]).shapes("pprime", &[fin(2.0)]).complexes("s", &s).build();
                g.extend(grid().reals("alpha", &[1.0, 4.0]).shapes("p", &[fin(0.5)]).shapes("pprime", &[fin(1.0)]).complexes("s", &s).build());
                g
            },
        },
        IdentityEntry {
            id: IdentityId { id: "L6", anchor: "Guinand-type relation with p' -> inf (p = 0: the alternating classical form)" },
            params: P_ALPHA_S,
            domain: "alpha > 0, Re s < 1, s not an even integer",
            independence: Independence::DistinctModules,
            lhs_route: "gamma with Riemann zeta, eta_p(-s), zeta_p(s)",
            rhs_route: "K_{s/2,p} kernel series and a double K-Bessel sum",
            tolerance: 1e-7,
            check: check_guinand,
            eval: eval_l6,
            grid: || {
                grid()
                    .reals("alpha", &[1.0, 4.0])
                    .shapes("p", &[fin(1.0), fin(2.0), ZERO])
                    .complexes("s", &[c(-0.5), ci(-0.5, 0.5), ci(0.6, 0.3), c(0.75)])
                    .build()
            },
        },
        IdentityEntry {
            id: IdentityId { id: "L7", anchor: "Guinand-type relation with p' -> 0" },
            params: P_ALPHA_S,
            domain: "alpha > 0, Re s < 1, s not an even integer",
            independence: Independence::DistinctModules,
            lhs_route: "gamma with Riemann zeta, zeta_p(s)",
            rhs_route: "K_{s/2,p} kernel over odd integers and a double K-Bessel sum",
            tolerance: 1e-7,
            check: check_guinand,
            eval: eval_l7,
            grid: || {
                grid()
                    .reals("alpha", &[1.0, 4.0])
                    .shapes("p", &[fin(1.0), fin(2.0)])
                    .complexes("s", &[c(-0.5), ci(-0.5, 0.5), ci(0.6, 0.3), c(0.75)])
                    .build()
            },
        },
        IdentityEntry {
            id: IdentityId { id: "L8", anchor: "generalized Dedekind relation: sum w'/lambda' B_p(lambda' alpha/pi) - (p <-> p', alpha <-> beta)" },
            params: P_PP_ALPHA,
            domain: "alpha > 0",
            independence: Independence::ClosedForm,
            lhs_route: "B_p and B_p' series at alpha and beta",
            rhs_route: "kappa, q, C1 and logarithms",
            tolerance: 1e-9,
            check: |p| positive(p, "alpha").map(|_| ()),
            eval: |p, cfg| {
                let (sp, spp, alpha) = (p.shape("p")?, p.shape("pprime")?, p.real("alpha")?);
                let beta = PI * PI / alpha;
                let lhs = dedekind_row(sp, spp, alpha)? - dedekind_row(spp, sp, beta)?;
                let (c1p, c1pp) = (constants(sp, cfg)?.c1, constants(spp, cfg)?.c1);
                let rhs = (sp.kappa() * beta * quad_ratio(spp) - spp.kappa() * alpha * quad_ratio(sp)) / 12.0
                    + (c1p - c1pp) / 2.0
                    + (alpha / beta).ln() / 4.0;
                Ok((c(lhs), c(rhs)))
            },
            grid: || {
                let mut g = grid().reals("alpha", &ALPHAS).shapes("p", &[fin(1.0)]).shapes("pprime", &[fin(2.0)]).build();
                g.extend(grid().reals("alpha", &ALPHAS).shapes("p", &[fin(0.5)]).shapes("pprime", &[INF, ZERO]).build());
                g.extend(grid().reals("alpha", &[PI]).shapes("p", &[fin(1.5)]).shapes("pprime", &[fin(1.5)]).build());
                g
            },
        },
        IdentityEntry {
            id: IdentityId { id: "L9", anchor: "sum 1/(n(e^{2 a n}+1)) + 2 sum 1/((2n-1)(e^{b(2n-1)}-1)) = a/4 - log 2 - log(a/b)/4" },
            params: ALPHA,
            domain: "alpha > 0",
            independence: Independence::ClosedForm,
            lhs_route: "exponential series",
            rhs_route: "elementary closed form",
            tolerance: 1e-12,
            check: |p| positive(p, "alpha").map(|_| ()),
            eval: |p, _| {
                let alpha = p.real("alpha")?;
                let beta = PI * PI / alpha;
                let a = exp_series(|n| {
                    let n = n as f64;
                    (1.0 / (n * ((2.0 * alpha * n).exp() + 1.0)), 2.0 * alpha * n)
                });
                let b = exp_series(|n| {
                    let m = (2 * n - 1) as f64;
                    (1.0 / (m * (beta * m).exp_m1()), beta * m)
                });
                Ok((c(a + 2.0 * b), c(alpha / 4.0 - 2f64.ln() - (alpha / beta).ln() / 4.0)))
            },
            grid: || grid().reals("alpha", &ALPHAS).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "L10", anchor: "sum w e^{2 pi lambda}(pi(p^2-lambda^2)+p)/((p+lambda)e^{2 pi lambda}-(p-lambda))^2 = (pi/24)(1+3q(1+q))/(1+q)^3 - 1/8" },
            params: P_ONLY,
            domain: "any shape",
            independence: Independence::ClosedForm,
            lhs_route: "exponential series over the p-sequence",
            rhs_route: "elementary closed form in q = 1/(pi p)",
            tolerance: 1e-12,
            check: |_| Ok(()),
            eval: eval_l10,
            grid: || grid().shapes("p", &[fin(0.5), fin(1.0), fin(2.0), INF, ZERO]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "L11", anchor: "sum e^{2 pi n}/(e^{2 pi n}-1)^2 = 1/24 - 1/8pi; odd companion = 1/8pi" },
            params: VARIANT,
            domain: "variant 1 (integers) or 2 (odd integers)",
            independence: Independence::ClosedForm,
            lhs_route: "exponential series",
            rhs_route: "elementary closed form",
            tolerance: 1e-12,
            check: |p| {
                let v = p.integer("variant")?;
                require(v == 1 || v == 2, || format!("variant must be 1 or 2, got {v}"))
            },
            eval: |p, _| {
                if p.integer("variant")? == 1 {
                    let lhs = exp_series(|n| {
                        let t = 2.0 * PI * n as f64;
                        let e = (-t).exp();
                        (e / ((1.0 - e) * (1.0 - e)), t)
                    });
                    Ok((c(lhs), c(1.0 / 24.0 - 1.0 / (8.0 * PI))))
                } else {
                    let lhs = exp_series(|n| {
                        let t = PI * (2 * n - 1) as f64;
                        let e = (-t).exp();
                        (e / ((1.0 + e) * (1.0 + e)), t)
                    });
                    Ok((c(lhs), c(1.0 / (8.0 * PI))))
                }
            },
            grid: || grid().ints("variant", &[1, 2]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "C1", anchor: "sqrt(a) sum sigma_{-s}(n) n^{s/2} K_{s/2}(2 n a) - (a -> b) in gamma and zeta(+-s)" },
            params: ALPHA_S,
            domain: "alpha > 0, s not an even integer",
            independence: Independence::DistinctRepresentations,
            lhs_route: "divisor-weighted K-Bessel series",
            rhs_route: "gamma and Riemann zeta",
            tolerance: 1e-9,
            check: |p| {
                positive(p, "alpha")?;
                gamma_pole(p.complex("s")?)
            },
            eval: |p, cfg| {
                let (alpha, s) = (p.real("alpha")?, p.complex("s")?);
                let beta = PI * PI / alpha;
                let side = |a: f64| -> Result<C64> {
                    let nu = s / 2.0;
                    let mut sum = NeumaierSum::default();
                    let mut n = 1usize;
                    loop {
                        let x = 2.0 * n as f64 * a;
                        let term = divisor_sigma(n, -s) * rpow(n as f64, nu) * bessel_k(nu, x)?;
                        sum.add(term);
                        if x > 50.0 + nu.norm_sqr() && term.norm() < 1e-18 * (1.0 + sum.total().norm()) {
                            return Ok(a.sqrt() * sum.total());
                        }
                        n += 1;
                    }
                };
                Ok((side(alpha)? - side(beta)?, classical_guinand_rhs(s, alpha, cfg)?))
            },
            grid: || {
                grid()
                    .reals("alpha", &[PI, 2.0])
                    .complexes("s", &[c(0.0), c(1.0), ci(1.0, 1.0), c(-0.5), c(0.5), c(2.5)])
                    .build()
            },
        },
        IdentityEntry {
            id: IdentityId { id: "C2", anchor: "sum sigma_{-1}(n)(e^{-2na} - e^{-2nb}) = (b - a)/12 + log(a/b)/4" },
            params: ALPHA,
            domain: "alpha > 0",
            independence: Independence::ClosedForm,
            lhs_route: "divisor-weighted exponential series",
            rhs_route: "elementary closed form",
            tolerance: 1e-9,
            check: |p| positive(p, "alpha").map(|_| ()),
            eval: |p, _| {
                let alpha = p.real("alpha")?;
                let beta = PI * PI / alpha;
                let side = |a: f64| {
                    exp_series(|n| (divisor_sigma(n, c(-1.0)).re * (-2.0 * n as f64 * a).exp(), 2.0 * n as f64 * a))
                };
                Ok((c(side(alpha) - side(beta)), c((beta - alpha) / 12.0 + (alpha / beta).ln() / 4.0)))
            },
            grid: || grid().reals("alpha", &[1.0, 2.0, PI, 4.0]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "C3", anchor: "sqrt(a)(gamma/4 - log(4b)/4 + sum d(n) K_0(2na)) symmetric in alpha, beta" },
            params: ALPHA,
            domain: "alpha > 0",
            independence: Independence::ModularPair,
            lhs_route: "divisor-weighted K_0 series",
            rhs_route: "divisor-weighted K_0 series",
            tolerance: 1e-9,
            check: |p| positive(p, "alpha").map(|_| ()),
            eval: |p, _| {
                let alpha = p.real("alpha")?;
                let beta = PI * PI / alpha;
                let side = |a: f64, b: f64| -> Result<C64> {
                    let mut sum = 0.0;
                    let mut n = 1usize;
                    loop {
                        let x = 2.0 * n as f64 * a;
                        let term = divisor_sigma(n, c(0.0)).re * bessel_k(c(0.0), x)?.re;
                        sum += term;
                        if x > 50.0 && term.abs() < 1e-18 * (1.0 + sum.abs()) {
                            break;
                        }
                        n += 1;
                    }
                    Ok(c(a.sqrt() * (EULER_GAMMA / 4.0 - (4.0 * b).ln() / 4.0 + sum)))
                };
                Ok((side(alpha, beta)?, side(beta, alpha)?))
            },
            grid: || grid().reals("alpha", &[1.0, 2.0, PI, 4.0]).build(),
        },
    ]
}

fn check_guinand(p: &Params) -> Result<()> {
    positive(p, "alpha")?;
    let s = p.complex("s")?;
    require(s.re < 1.0, || format!("needs Re s < 1, got {s}"))?;
    gamma_pole(s)
}

/// `sum_n w_n lambda_n^{-s} K_{s/2,k}(2 lambda_n t)` over the `seq`-sequence.
fn kernel_series(kernel: ShapeParam, seq: ShapeParam, s: C64, t: f64, cfg: &EvalConfig) -> Result<C64> {
    let nu = s / 2.0;
    let mut sum = NeumaierSum::default();
    let mut n = 1;
    loop {
        let q = sequence(seq, n)?;
        let (l, w) = (q.lambda(n), q.weight(n));
        let x = 2.0 * l * t;
        let term = w * rpow(l, -s) * k_kernel(kernel, nu, x, cfg)?;
        sum.add(term);
        if x > 45.0 + nu.norm_sqr() && term.norm() < 1e-17 * (1.0 + sum.total().norm()) {
            return Ok(sum.total());
        }
        n += 1;
    }
}

/// `2^{-s} sqrt(pi)/Gamma((1-s)/2) t^{(1-s)/2} sum w lambda^{-s} K_{s/2,k}(2 lambda t)`.
fn guinand_kernel_side(kernel: ShapeParam, seq: ShapeParam, s: C64, t: f64, cfg: &EvalConfig) -> Result<C64> {
    let pre = rpow(2.0, -s) * PI.sqrt() * rgamma((1.0 - s) / 2.0) * rpow(t, (1.0 - s) / 2.0);
    Ok(pre * kernel_series(kernel, seq, s, t, cfg)?)
}

/// `sum_{n>=1} sum_{m>=1} w_n (+-1)^m (m/lambda_n)^nu K_nu(2 m lambda_n t)` over the `seq`-sequence.
fn double_k(seq: ShapeParam, nu: C64, t: f64, alternating: bool) -> Result<C64> {
    let cut = 50.0 + nu.norm_sqr();
    let mut sum = NeumaierSum::default();
    let mut n = 1;
    loop {
        let q = sequence(seq, n)?;
        let (l, w) = (q.lambda(n), q.weight(n));
        if 2.0 * l * t > cut {
            return Ok(sum.total());
        }
        let mut m = 1;
        while 2.0 * (m as f64) * l * t <= cut {
            let sign = if alternating && m % 2 == 1 { -1.0 } else { 1.0 };
            sum.add(sign * w * rpow(m as f64 / l, nu) * bessel_k(nu, 2.0 * m as f64 * l * t)?);
            m += 1;
        }
        n += 1;
    }
}

/// `sum_{d | n} d^a`.
fn divisor_sigma(n: usize, a: C64) -> C64 {
    let mut s = c(0.0);
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += rpow(d as f64, a);
            let e = n / d;
            if e != d {
                s += rpow(e as f64, a);
            }
        }
        d += 1;
    }
    s
}

/// `(1/4) Gamma(-s/2) zeta(-s) {b^{(1+s)/2} - a^{(1+s)/2}} + (1/4) Gamma(s/2) zeta(s) {b^{(1-s)/2} - a^{(1-s)/2}}`,
/// with the removable points `s = +-1` taken as Laurent constants.
fn classical_guinand_rhs(s: C64, alpha: f64, cfg: &EvalConfig) -> Result<C64> {
    let beta = PI * PI / alpha;
    let raw = |s: C64| {
        gamma(-s / 2.0) * riemann_zeta(-s) / 4.0 * (rpow(beta, (1.0 + s) / 2.0) - rpow(alpha, (1.0 + s) / 2.0))
            + gamma(s / 2.0) * riemann_zeta(s) / 4.0 * (rpow(beta, (1.0 - s) / 2.0) - rpow(alpha, (1.0 - s) / 2.0))
    };
    for s0 in [1.0, -1.0] {
        if (s - s0).norm() < 1e-12 {
            return Ok(laurent_extract(|t| Ok(raw(c(t))), s0, cfg)?.constant_term);
        }
    }
    Ok(raw(s))
}

fn eval_l4(p: &Params, cfg: &EvalConfig) -> Result<(C64, C64)> {
    let (alpha, s, v) = (p.real("alpha")?, p.complex("s")?, p.integer("variant")?);
    let beta = PI * PI / alpha;
    let nu = s / 2.0;
    match v {
        1 => {
            let side = |t: f64| Ok::<_, crate::error::KoshError>(t.sqrt() * double_k(INF, nu, t, false)?);
            Ok((side(alpha)? - side(beta)?, classical_guinand_rhs(s, alpha, cfg)?))
        }
        2 => {
            // rows (2n-1)/2 give (m/lambda)^nu K(2 m lambda t) = 2^nu m^nu (2n-1)^{-nu} K((2n-1) m t)
            let side = |t: f64| Ok::<_, crate::error::KoshError>(t.sqrt() * rpow(2.0, -nu) * double_k(ZERO, nu, t, true)?);
            let z = if (s - 1.0).norm() < 1e-12 { c(f64::NAN) } else { riemann_zeta(s) };
            let rhs = gamma(nu) * (rpow(2.0, nu) - rpow(2.0, -nu)) * z / 4.0
                * (rpow(beta, (1.0 - s) / 2.0) - rpow(alpha, (1.0 - s) / 2.0));
            Ok((side(alpha)? - side(beta)?, rhs))
        }
        3 => {
            let side = |a: f64, b: f64| -> Result<C64> {
                Ok(a.sqrt() * (EULER_GAMMA / 4.0 - (4.0 * b).ln() / 4.0 + double_k(INF, c(0.0), a, false)?))
            };
            Ok((side(alpha, beta)?, side(beta, alpha)?))
        }
        _ => {
            let side = |a: f64| -> Result<C64> {
                Ok(a.sqrt() * (double_k(ZERO, c(0.0), a, true)? - 2f64.ln() / 4.0))
            };
            Ok((side(alpha)?, side(beta)?))
        }
    }
}

fn eval_l6(p: &Params, cfg: &EvalConfig) -> Result<(C64, C64)> {
    let (shape, alpha, s) = (p.shape("p")?, p.real("alpha")?, p.complex("s")?);
    let beta = PI * PI / alpha;
    let nu = s / 2.0;
    let (zm, zs) = (riemann_zeta(-s), riemann_zeta(s));
    if shape == ZERO {
        let lhs = gamma(-nu) * zm / 4.0 * rpow(alpha, (s + 1.0) / 2.0) * (1.0 - rpow(2.0, 1.0 + s))
            + gamma(nu) * zs / 4.0 * (rpow(beta, (1.0 - s) / 2.0) * (rpow(2.0, s) - 1.0) - rpow(alpha, (1.0 - s) / 2.0));
        let a = alpha.sqrt() * double_k(INF, nu, alpha, true)?;
        let b = beta.sqrt() * double_k(ZERO, nu, beta, false)?;
        return Ok((lhs, a - b));
    }
    let lhs = gamma(-nu) / 4.0
        * (rpow(beta, (s + 1.0) / 2.0) * shape.kappa() * zm - rpow(alpha, (s + 1.0) / 2.0) * eta_p_any(shape, -s, cfg)?)
        + gamma(nu) / 4.0
            * (rpow(beta, (1.0 - s) / 2.0) * zeta_p_any(shape, s, cfg)?.value - rpow(alpha, (1.0 - s) / 2.0) * zs);
    let rhs = guinand_kernel_side(shape, INF, s, alpha, cfg)? - beta.sqrt() * double_k(shape, nu, beta, false)?;
    Ok((lhs, rhs))
}

fn eval_l7(p: &Params, cfg: &EvalConfig) -> Result<(C64, C64)> {
    let (shape, alpha, s) = (p.shape("p")?, p.real("alpha")?, p.complex("s")?);
    let beta = PI * PI / alpha;
    let nu = s / 2.0;
    let lhs = gamma(-nu) * riemann_zeta(-s) / 4.0 * rpow(beta, (s + 1.0) / 2.0) * shape.kappa() * (rpow(2.0, 1.0 + s) - 1.0)
        + gamma(nu) / 4.0
            * (rpow(beta, (1.0 - s) / 2.0) * zeta_p_any(shape, s, cfg)?.value
                - rpow(alpha, (1.0 - s) / 2.0) * (rpow(2.0, s) - 1.0) * riemann_zeta(s));
    let mut odd = NeumaierSum::default();
    let mut n = 1;
    loop {
        let m = (2 * n - 1) as f64;
        let x = m * alpha;
        let term = rpow(m, -s) * k_kernel(shape, nu, x, cfg)?;
        odd.add(term);
        if x > 45.0 + nu.norm_sqr() && term.norm() < 1e-17 * (1.0 + odd.total().norm()) {
            break;
        }
        n += 1;
    }
    let first = PI.sqrt() * rgamma((1.0 - s) / 2.0) * rpow(alpha, (1.0 - s) / 2.0) * odd.total();
    Ok((lhs, first - beta.sqrt() * double_k(shape, nu, beta, true)?))
}

/// `(1 + 3q(1+q))/(1+q)^2`, which is 1 for `p -> inf` and 3 for `p -> 0`.
fn quad_ratio(shape: ShapeParam) -> f64 {
    match shape {
        ShapeParam::Infinity => 1.0,
        ShapeParam::Zero => 3.0,
        ShapeParam::Finite(p) => {
            let q = 1.0 / (PI * p);
            (1.0 + 3.0 * q * (1.0 + q)) / ((1.0 + q) * (1.0 + q))
        }
    }
}

/// `sum_n w'_n lambda'^{-1} B_p(lambda' t/pi)` over the `seq`-sequence.
fn dedekind_row(kernel: ShapeParam, seq: ShapeParam, t: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 1;
    loop {
        let q = sequence(seq, n)?;
        let (l, w) = (q.lambda(n), q.weight(n));
        sum += w * b_kernel(kernel, l * t / PI) / l;
        if 2.0 * l * t > 45.0 {
            return Ok(sum);
        }
        n += 1;
    }
}

/// Sums `f(n) = (term, exponent)` until the exponent passes 45.
fn exp_series(f: impl Fn(usize) -> (f64, f64)) -> f64 {
    let mut sum = 0.0;
    let mut n = 1;
    loop {
        let (term, e) = f(n);
        sum += term;
        if e > 45.0 {
            return sum;
        }
        n += 1;
    }
}

fn eval_l10(p: &Params, _: &EvalConfig) -> Result<(C64, C64)> {
    let shape = p.shape("p")?;
    let seq = sequence(shape, 16)?;
    let mut lhs = 0.0;
    for (l, w) in seq.iter() {
        let e = (-2.0 * PI * l).exp();
        let term = match shape {
            ShapeParam::Finite(pp) => {
                let den = (pp + l) - (pp - l) * e;
                e * (PI * (pp * pp - l * l) + pp) / (den * den)
            }
            ShapeParam::Infinity => PI * e / ((1.0 - e) * (1.0 - e)),
            ShapeParam::Zero => -PI * e / ((1.0 + e) * (1.0 + e)),
        };
        lhs += w * term;
        if 2.0 * PI * l > 45.0 {
            break;
        }
    }
    let rhs = match shape {
        ShapeParam::Infinity => PI / 24.0 - 0.125,
        ShapeParam::Zero => -0.125,
        ShapeParam::Finite(pp) => {
            let q = 1.0 / (PI * pp);
            PI / 24.0 * (1.0 + 3.0 * q * (1.0 + q)) / (1.0 + q).powi(3) - 0.125
        }
    };
    Ok((c(lhs), c(rhs)))
}
