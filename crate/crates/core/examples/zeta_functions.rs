//! `zeta_p` and `eta_p` across the plane, the functional equation linking them,
//! and the constants `C1`, `C2`, `gamma_p`.

use std::f64::consts::PI;

use koshliakov::koshzeta::{constants, eta_p_any, kosh_coeff, zeta_p_any, zeta_p_two_closed_form};
use koshliakov::specfun::gamma;
use koshliakov::specfun::riemann_zeta;
use koshliakov::{EvalConfig, ShapeParam, C64};

fn main() -> koshliakov::Result<()> {
    let cfg = EvalConfig::default();
    let shapes = [ShapeParam::Finite(0.5), ShapeParam::Finite(1.0), ShapeParam::Finite(2.0), ShapeParam::Infinity];

    println!("zeta_p(2) against its closed form");
    for &sh in &shapes {
        let v = zeta_p_any(sh, C64::new(2.0, 0.0), &cfg)?.value.re;
        println!("  p = {sh:<4} {v:.15}  closed form {:.15}", zeta_p_two_closed_form(sh));
    }

    println!("\nfunctional equation zeta_p(1-s) = 2 cos(pi s/2) Gamma(s) (2 pi)^-s eta_p(s)");
    for s in [C64::new(1.5, 0.0), C64::new(2.5, 1.0), C64::new(3.0, -2.0)] {
        let sh = ShapeParam::Finite(1.0);
        let lhs = zeta_p_any(sh, 1.0 - s, &cfg)?.value;
        let rhs = 2.0 * (PI * s / 2.0).cos() * gamma(s) * C64::new(2.0 * PI, 0.0).powc(-s) * eta_p_any(sh, s, &cfg)?;
        println!("  s = {s:<8} lhs = {lhs:.12}  rhs = {rhs:.12}");
    }

    println!("\nlarge p approaches the Riemann zeta function at s = 3");
    let z3 = riemann_zeta(C64::new(3.0, 0.0)).re;
    for p in [1.0, 10.0, 100.0, 1000.0] {
        let v = zeta_p_any(ShapeParam::Finite(p), C64::new(3.0, 0.0), &cfg)?.value.re;
        println!("  p = {p:<6} zeta_p(3) - zeta(3) = {:+.3e}", v - z3);
    }

    println!("\ncoefficients (s, nu k)_k with nu = 2 pi, s = 2, tending to (1 + 1/pi)^-2 = {:.12}", (1.0 + 1.0 / PI).powi(-2));
    for k in [1, 4, 16, 64] {
        let v = kosh_coeff(C64::new(2.0, 0.0), k, 2.0 * PI, &cfg.quad)?;
        println!("  k = {k:<3} {:.12}", v.re);
    }

    println!("\nconstants");
    for &sh in &shapes {
        let k = constants(sh, &cfg)?;
        println!("  p = {sh:<4} C1 = {:.12}  C2 = {:.12}  gamma_p = {:.12}", k.c1, k.c2, k.gamma_p);
    }
    Ok(())
}
