//! Epstein zeta analogues: series against Bessel forms, Laurent data, functional equations.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::{
    c, ci, fin, grid, param, positive, require, Grid, IdentityEntry, IdentityId, Independence, ParamKind, ParamSpec,
    Params, ParamsExt, INF, ZERO,
};
use crate::config::EvalConfig;
use crate::epstein::{
    epstein1, epstein1_bessel, epstein1_central, epstein1_continued, epstein1_direct, epstein2, epstein2_central,
    epstein2_completed, kronecker1_constant, kronecker2_constant, laurent_extract, real_zero, EpsteinParams,
    Epstein2Route,
};
use crate::error::{KoshError, Result};
use crate::kernels::b_kernel;
use crate::koshzeta::constants;
use crate::sequence::{sequence, ShapeParam};
use crate::specfun::{gamma, riemann_zeta, rpow, EULER_GAMMA};

use ParamKind::{Complex, Real, Shape};

const LATTICE: &[ParamSpec] = &[param("c", Real), param("p", Shape), param("pprime", Shape)];
const LATTICE_S: &[ParamSpec] = &[param("c", Real), param("p", Shape), param("pprime", Shape), param("s", Complex)];
const P_C: &[ParamSpec] = &[param("c", Real), param("p", Shape)];
const PP_C: &[ParamSpec] = &[param("c", Real), param("pprime", Shape)];

const LAURENT: f64 = 1e-5;

const PP_C_S: &[ParamSpec] = &[param("c", Real), param("pprime", Shape), param("s", Complex)];

pub(super) fn entries() -> Vec<IdentityEntry> {
    vec![
        IdentityEntry {
            id: IdentityId { id: "E1", anchor: "first analogue: double series = Bessel form" },
            params: LATTICE_S,
            domain: "Re s > 1, c > 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "nested Gregory double series",
            rhs_route: "K-Bessel Selberg-Chowla form",
            tolerance: 1e-7,
            check: |p| {
                check_c(p)?;
                let s = p.complex("s")?;
                require(s.re > 1.0, || format!("needs Re s > 1, got {s}"))
            },
            eval: |p, cfg| {
                let (e, s) = (lattice(p)?, p.complex("s")?);
                Ok((epstein1_direct(&e, s, cfg)?.value, epstein1_bessel(&e, s, cfg)?))
            },
            grid: || triples(&mixed()).complexes("s", &[c(1.2), c(1.5), c(2.5), ci(2.0, 1.0)]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E2", anchor: "first analogue: residue pi/sqrt(c) at s = 1" },
            params: LATTICE,
            domain: "c > 0",
            independence: Independence::ClosedForm,
            lhs_route: "symmetric Laurent extraction across s = 1",
            rhs_route: "pi/sqrt(c)",
            tolerance: LAURENT,
            check: check_c,
            eval: |p, cfg| {
                let e = lattice(p)?;
                let d = laurent_extract(|t| epstein1(&e, c(t), cfg), 1.0, cfg)?;
                Ok((d.residue, c(PI / e.c.sqrt())))
            },
            grid: || triples(&mixed()).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E3", anchor: "first analogue: Kronecker limit constant at s = 1" },
            params: LATTICE,
            domain: "c > 0",
            independence: Independence::DistinctModules,
            lhs_route: "symmetric Laurent extraction across s = 1",
            rhs_route: "zeta_p(2), C1(p') and a B_p row sum",
            tolerance: LAURENT,
            check: check_c,
            eval: |p, cfg| {
                let e = lattice(p)?;
                let d = laurent_extract(|t| epstein1(&e, c(t), cfg), 1.0, cfg)?;
                Ok((d.constant_term, kronecker1_constant(&e, cfg)?))
            },
            grid: || triples(&mixed()).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E4", anchor: "Kronecker constant for p' -> 0: (pi/sqrt c)(2 gamma - log(c/4) + 8 sum B_p/(2n-1))" },
            params: P_C,
            domain: "c > 0, p finite or 0",
            independence: Independence::DistinctModules,
            lhs_route: "printed limit formula over odd integers",
            rhs_route: "symmetric Laurent extraction across s = 1",
            tolerance: LAURENT,
            check: |p| {
                check_c(p)?;
                require(p.shape("p")? != INF, || "p must be finite or 0".into())
            },
            eval: |p, cfg| {
                let (shape, cc) = (p.shape("p")?, p.real("c")?);
                let sc = cc.sqrt();
                let rows = odd_or_int_sum(true, |m| b_kernel(shape, sc * m / 2.0) / m, sc);
                let lhs = PI / sc * (2.0 * EULER_GAMMA - (cc / 4.0).ln() + 8.0 * rows);
                Ok((c(lhs), kronecker_by_extraction(shape, ZERO, cc, cfg)?))
            },
            grid: || grid().reals("c", &[1.0, 2.0]).shapes("p", &[fin(0.5), fin(1.0), fin(2.0), ZERO]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E5", anchor: "Kronecker constant for p' -> inf: 2 zeta_p(2) + (pi/sqrt c)(2 gamma - log 4c + 4 sum B_p/n)" },
            params: P_C,
            domain: "c > 0; p = inf is the classical diagonal form",
            independence: Independence::DistinctModules,
            lhs_route: "printed limit formula over the integers",
            rhs_route: "symmetric Laurent extraction across s = 1",
            tolerance: LAURENT,
            check: check_c,
            eval: |p, cfg| {
                let (shape, cc) = (p.shape("p")?, p.real("c")?);
                let sc = cc.sqrt();
                let two_zeta2 = match shape {
                    ShapeParam::Infinity => PI * PI / 3.0,
                    ShapeParam::Zero => PI * PI,
                    ShapeParam::Finite(pp) => {
                        let q = 1.0 / (PI * pp);
                        PI * PI / 3.0 * (1.0 + 3.0 * q * (1.0 + q)) / ((1.0 + q) * (1.0 + q))
                    }
                };
                let rows = odd_or_int_sum(false, |n| b_kernel(shape, sc * n) / n, sc);
                let lhs = two_zeta2 + PI / sc * (2.0 * EULER_GAMMA - (4.0 * cc).ln() + 4.0 * rows);
                Ok((c(lhs), kronecker_by_extraction(shape, INF, cc, cfg)?))
            },
            grid: || grid().reals("c", &[1.0, 2.0]).shapes("p", &[fin(0.5), fin(1.0), fin(2.0), ZERO, INF]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E6", anchor: "Kronecker constant for p -> inf: kappa' pi^2/3 + (pi/sqrt c)(2 C1(p') - log 4c + 4 sum w'/(lambda'(e^{2 pi sqrt c lambda'} - 1)))" },
            params: PP_C,
            domain: "c > 0, p' finite or 0",
            independence: Independence::DistinctModules,
            lhs_route: "printed limit formula over the p'-sequence",
            rhs_route: "symmetric Laurent extraction across s = 1",
            tolerance: LAURENT,
            check: |p| {
                check_c(p)?;
                require(p.shape("pprime")? != INF, || "p' must be finite or 0".into())
            },
            eval: |p, cfg| {
                let (pp, cc) = (p.shape("pprime")?, p.real("c")?);
                let sc = cc.sqrt();
                let c1 = constants(pp, cfg)?.c1;
                let rows = weighted_rows(pp, sc, |t| 1.0 / (2.0 * PI * t).exp_m1())?;
                let lhs = pp.kappa() * PI * PI / 3.0 + PI / sc * (2.0 * c1 - (4.0 * cc).ln() + 4.0 * rows);
                Ok((c(lhs), kronecker_by_extraction(INF, pp, cc, cfg)?))
            },
            grid: || grid().reals("c", &[1.0, 2.0]).shapes("pprime", &[fin(0.5), fin(1.0), fin(2.0), ZERO]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E7", anchor: "Kronecker constant for p -> 0: kappa' pi^2 + (pi/sqrt c)(2 C1(p') - log 4c - 4 sum w'/(lambda'(e^{2 pi sqrt c lambda'} + 1)))" },
            params: PP_C,
            domain: "c > 0",
            independence: Independence::DistinctModules,
            lhs_route: "printed limit formula over the p'-sequence",
            rhs_route: "symmetric Laurent extraction across s = 1",
            tolerance: LAURENT,
            check: check_c,
            eval: |p, cfg| {
                let (pp, cc) = (p.shape("pprime")?, p.real("c")?);
                let sc = cc.sqrt();
                let c1 = constants(pp, cfg)?.c1;
                let rows = weighted_rows(pp, sc, |t| 1.0 / ((2.0 * PI * t).exp() + 1.0))?;
                let lhs = pp.kappa() * PI * PI + PI / sc * (2.0 * c1 - (4.0 * cc).ln() - 4.0 * rows);
                Ok((c(lhs), kronecker_by_extraction(ZERO, pp, cc, cfg)?))
            },
            grid: || grid().reals("c", &[1.0, 2.0]).shapes("pprime", &[fin(0.5), fin(1.0), fin(2.0), ZERO, INF]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E8", anchor: "first analogue: central value at s = 1/2" },
            params: LATTICE,
            domain: "c > 0",
            independence: Independence::DistinctModules,
            lhs_route: "C1, zeta_p'(0) and a kernel-integral row sum",
            rhs_route: "symmetric Laurent extraction of the continued form at s = 1/2",
            tolerance: LAURENT,
            check: check_c,
            eval: |p, cfg| {
                let e = lattice(p)?;
                let d = laurent_extract(|t| epstein1_continued(&e, c(t), cfg), 0.5, cfg)?;
                Ok((epstein1_central(&e, cfg)?, d.constant_term))
            },
            grid: || triples(&mixed()).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E9", anchor: "zeta_{p,inf}(s, c) has a real zero in (1/2, 1) for large c" },
            params: P_C,
            domain: "c > 0 (a zero exists only above a threshold in c)",
            independence: Independence::ClosedForm,
            lhs_route: "continued first analogue at the bisection root",
            rhs_route: "zero",
            tolerance: 1e-7,
            check: check_c,
            eval: |p, cfg| {
                let e = EpsteinParams::new(p.shape("p")?, INF, p.real("c")?)?;
                let z = real_zero(&e, cfg)?;
                if z.hi - z.lo > 1e-8 {
                    return Err(KoshError::NonConvergence { what: "real zero bracket", estimate: z.root, error: z.hi - z.lo });
                }
                Ok((epstein1_continued(&e, c(z.root), cfg)?, c(0.0)))
            },
            grid: || grid().reals("c", &[200.0]).shapes("p", &[fin(1.0), INF]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E10", anchor: "second analogue at s = 2 for limit shapes: lattice sums in closed form" },
            params: LATTICE,
            domain: "c > 0, p and p' each inf or 0",
            independence: Independence::ClosedForm,
            lhs_route: "J-Bessel definition of the second analogue",
            rhs_route: "coth/sinh row sums and zeta(3), zeta(4)",
            tolerance: 1e-7,
            check: |p| {
                check_c(p)?;
                require(!p.shape("p")?.is_finite() && !p.shape("pprime")?.is_finite(), || {
                    "p and p' must be inf or 0".into()
                })
            },
            eval: |p, cfg| {
                let e = lattice(p)?;
                let lhs = epstein2(&e, c(2.0), cfg, Epstein2Route::Definition)?;
                Ok((lhs, c(limit_lattice_at_two(e.shape_p, e.shape_pprime, e.c))))
            },
            grid: || grid().reals("c", &[1.0, 2.0]).shapes("p", &[INF, ZERO]).shapes("pprime", &[INF, ZERO]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E11", anchor: "second analogue: J-Bessel definition = K-Bessel Selberg-Chowla form" },
            params: LATTICE_S,
            domain: "Re s > 1, c > 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "J-Bessel integrals against B_p",
            rhs_route: "double K-Bessel series",
            tolerance: 1e-7,
            check: |p| {
                check_c(p)?;
                let s = p.complex("s")?;
                require(s.re > 1.0, || format!("needs Re s > 1, got {s}"))
            },
            eval: |p, cfg| {
                let (e, s) = (lattice(p)?, p.complex("s")?);
                Ok((epstein2(&e, s, cfg, Epstein2Route::Definition)?, epstein2(&e, s, cfg, Epstein2Route::SelbergChowla)?))
            },
            grid: || triples(&second()).complexes("s", &[c(1.5), c(2.5), ci(2.0, 1.0)]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E12", anchor: "second analogue: residue pi kappa/sqrt(c) at s = 1" },
            params: LATTICE,
            domain: "c > 0",
            independence: Independence::ClosedForm,
            lhs_route: "symmetric Laurent extraction across s = 1",
            rhs_route: "pi kappa/sqrt(c)",
            tolerance: LAURENT,
            check: check_c,
            eval: |p, cfg| {
                let e = lattice(p)?;
                let d = laurent_extract(|t| epstein2(&e, c(t), cfg, Epstein2Route::SelbergChowla), 1.0, cfg)?;
                Ok((d.residue, c(PI * e.shape_p.kappa() / e.c.sqrt())))
            },
            grid: || triples(&second()).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E13", anchor: "second analogue: Kronecker limit constant at s = 1" },
            params: LATTICE,
            domain: "c > 0",
            independence: Independence::DistinctModules,
            lhs_route: "symmetric Laurent extraction across s = 1",
            rhs_route: "eta_p(2), C1(p') and a sigma_p row sum",
            tolerance: LAURENT,
            check: check_c,
            eval: |p, cfg| {
                let e = lattice(p)?;
                let d = laurent_extract(|t| epstein2(&e, c(t), cfg, Epstein2Route::SelbergChowla), 1.0, cfg)?;
                Ok((d.constant_term, kronecker2_constant(&e, cfg)?))
            },
            grid: || triples(&second()).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E14", anchor: "completed second analogue: Lambda_{p,p'}(s) = Lambda_{p',p}(1-s)" },
            params: LATTICE_S,
            domain: "s != 0, 1, c > 0",
            independence: Independence::DistinctRepresentations,
            lhs_route: "completed Selberg-Chowla form at s",
            rhs_route: "completed Selberg-Chowla form of the transposed lattice at 1 - s",
            tolerance: 1e-6,
            check: |p| {
                check_c(p)?;
                let s = p.complex("s")?;
                require((s - 1.0).norm() > 1e-9 && s.norm() > 1e-9, || format!("s = {s} is a pole"))
            },
            eval: |p, cfg| {
                let (e, s) = (lattice(p)?, p.complex("s")?);
                Ok((epstein2_completed(&e, s, cfg)?, epstein2_completed(&e.transposed(), 1.0 - s, cfg)?))
            },
            grid: || {
                triples(&[(fin(1.0), fin(0.5), 2.0), (fin(2.0), fin(1.0), 1.0), (INF, INF, 1.0)])
                    .complexes("s", &[c(1.3), c(1.7), c(2.5), ci(0.75, 0.5)])
                    .build()
            },
        },
        IdentityEntry {
            id: IdentityId { id: "E15", anchor: "(pi/sqrt c)^{-s} Gamma(s) zeta_{inf,p'}(s,c) = completed second analogue of (p', inf) at 1 - s" },
            params: PP_C_S,
            domain: "s != 0, 1, c > 0",
            independence: Independence::DistinctModules,
            lhs_route: "first analogue with p = inf",
            rhs_route: "completed second analogue",
            tolerance: 1e-6,
            check: |p| {
                check_c(p)?;
                let s = p.complex("s")?;
                require((s - 1.0).norm() > 1e-9 && s.norm() > 1e-9, || format!("s = {s} is a pole"))
            },
            eval: |p, cfg| {
                let (pp, cc, s) = (p.shape("pprime")?, p.real("c")?, p.complex("s")?);
                let e1 = EpsteinParams::new(INF, pp, cc)?;
                let e2 = EpsteinParams::new(pp, INF, cc)?;
                let left = rpow(PI / cc.sqrt(), -s) * gamma(s) * epstein1(&e1, s, cfg)?;
                Ok((left, epstein2_completed(&e2, 1.0 - s, cfg)?))
            },
            grid: || grid().reals("c", &[1.0, 2.0]).shapes("pprime", &[fin(0.5), fin(1.0)]).complexes("s", &[c(1.3), c(1.7), c(2.5)]).build(),
        },
        IdentityEntry {
            id: IdentityId { id: "E16", anchor: "second analogue: central value at s = 1/2" },
            params: LATTICE,
            domain: "c > 0",
            independence: Independence::DistinctModules,
            lhs_route: "C2, zeta_p'(0) and a double K_0 sum",
            rhs_route: "symmetric Laurent extraction at s = 1/2",
            tolerance: LAURENT,
            check: check_c,
            eval: |p, cfg| {
                let e = lattice(p)?;
                let d = laurent_extract(|t| epstein2(&e, c(t), cfg, Epstein2Route::SelbergChowla), 0.5, cfg)?;
                Ok((epstein2_central(&e, cfg)?, d.constant_term))
            },
            grid: || triples(&second()).build(),
        },
    ]
}

fn check_c(p: &Params) -> Result<()> {
    positive(p, "c").map(|_| ())
}

fn lattice(p: &Params) -> Result<EpsteinParams> {
    EpsteinParams::new(p.shape("p")?, p.shape("pprime")?, p.real("c")?)
}

fn mixed() -> Vec<(ShapeParam, ShapeParam, f64)> {
    vec![(fin(1.0), fin(1.0), 1.0), (fin(0.5), fin(2.0), 2.0), (fin(2.0), ZERO, 0.5), (INF, INF, 1.0)]
}

fn second() -> Vec<(ShapeParam, ShapeParam, f64)> {
    vec![(fin(1.0), fin(2.0), 4.0), (fin(0.5), fin(1.0), 1.0), (fin(2.0), fin(2.0), 2.0), (INF, fin(1.0), 1.0)]
}

fn triples(t: &[(ShapeParam, ShapeParam, f64)]) -> Grid {
    let mut g: Option<Grid> = None;
    for &(p, pp, cc) in t {
        let one = grid().reals("c", &[cc]).shapes("p", &[p]).shapes("pprime", &[pp]);
        g = Some(match g {
            None => one,
            Some(g) => g.and(one),
        });
    }
    g.unwrap_or_else(grid)
}

fn kronecker_by_extraction(p: ShapeParam, pp: ShapeParam, cc: f64, cfg: &EvalConfig) -> Result<C64> {
    let e = EpsteinParams::new(p, pp, cc)?;
    Ok(laurent_extract(|t| epstein1(&e, c(t), cfg), 1.0, cfg)?.constant_term)
}

/// `sum_n f(a_n)` over `a_n = 2n - 1` (`odd`) or `a_n = n`, until `2 pi sqrt(c) a_n/2 > 45`.
fn odd_or_int_sum(odd: bool, f: impl Fn(f64) -> f64, sc: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 1;
    loop {
        let a = if odd { (2 * n - 1) as f64 } else { n as f64 };
        sum += f(a);
        let reach = if odd { a / 2.0 } else { a };
        if 2.0 * PI * sc * reach > 45.0 {
            return sum;
        }
        n += 1;
    }
}

/// `sum_n w'_n f(sqrt(c) lambda'_n)/lambda'_n`.
fn weighted_rows(pp: ShapeParam, sc: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 1;
    loop {
        let seq = sequence(pp, n)?;
        let (l, w) = (seq.lambda(n), seq.weight(n));
        sum += w * f(sc * l) / l;
        if 2.0 * PI * sc * l > 45.0 {
            return Ok(sum);
        }
        n += 1;
    }
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

/// `sum_{n>=1} row2(sqrt(c) mu_n)` with `mu_n = n` or `n - 1/2`.
fn column2(cc: f64, half: bool, alternating: bool) -> f64 {
    let sc = cc.sqrt();
    let z3 = riemann_zeta(c(3.0)).re;
    let alg = if alternating { 0.0 } else { PI / (2.0 * sc.powi(3)) * if half { 7.0 * z3 } else { z3 } };
    let mut rest = 0.0;
    for n in 1..400 {
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

/// Second analogue at `s = 2` for shapes in `{inf, 0}`.
fn limit_lattice_at_two(p: ShapeParam, pp: ShapeParam, cc: f64) -> f64 {
    let z4 = PI.powi(4) / 90.0;
    match (p, pp) {
        (ShapeParam::Infinity, ShapeParam::Infinity) => 2.0 * column2(cc, false, false) + 2.0 * z4,
        (ShapeParam::Zero, ShapeParam::Zero) => 2.0 * column2(cc, true, true),
        (ShapeParam::Zero, ShapeParam::Infinity) => 2.0 * column2(cc, false, true) - 2.0 * 7.0 / 8.0 * z4,
        _ => 2.0 * column2(cc, true, false),
    }
}
