//! The two Epstein-type zeta functions of the lattice `(lambda_m, sqrt(c) lambda'_n)`:
//! values, residues and constants at `s = 1`, central values, and a real zero.

use std::f64::consts::PI;

use koshliakov::epstein::{
    epstein1, epstein1_central, epstein1_direct, epstein2, kronecker1_constant, kronecker2_constant, laurent_extract,
    real_zero, Epstein2Route, EpsteinParams,
};
use koshliakov::{EvalConfig, ShapeParam, C64};

fn main() -> koshliakov::Result<()> {
    let cfg = EvalConfig::default();
    let lattice = EpsteinParams::new(ShapeParam::Finite(1.0), ShapeParam::Finite(2.0), 1.5)?;

    let s = C64::new(2.0, 0.5);
    let direct = epstein1_direct(&lattice, s, &cfg)?;
    println!("first analogue at s = {s}");
    println!("  double series {:.13} ({} terms)", direct.value, direct.terms_used);
    println!("  Bessel form   {:.13}", epstein1(&lattice, s, &cfg)?);
    println!("second analogue at s = {s}");
    println!("  definition    {:.13}", epstein2(&lattice, s, &cfg, Epstein2Route::Definition)?);
    println!("  Bessel form   {:.13}", epstein2(&lattice, s, &cfg, Epstein2Route::SelbergChowla)?);

    let l1 = laurent_extract(|t| epstein1(&lattice, C64::new(t, 0.0), &cfg), 1.0, &cfg)?;
    println!("\nresidue at s = 1: {:.10} (pi/sqrt c = {:.10})", l1.residue.re, PI / lattice.c.sqrt());
    println!("constant at s = 1: extracted {:.10}, closed form {:.10}", l1.constant_term.re, kronecker1_constant(&lattice, &cfg)?.re);
    println!("second analogue constant at s = 1: {:.10}", kronecker2_constant(&lattice, &cfg)?.re);
    println!("central value Z(1/2): {:.10}", epstein1_central(&lattice, &cfg)?.re);

    println!("\nreal zero in (1/2, 1) of the p' = inf lattice for large c");
    for p in [ShapeParam::Finite(1.0), ShapeParam::Infinity] {
        let e = EpsteinParams::new(p, ShapeParam::Infinity, 200.0)?;
        let z = real_zero(&e, &cfg)?;
        println!("  p = {p:<4} root {:.10} in [{:.12}, {:.12}], values {:+.2e} {:+.2e}", z.root, z.lo, z.hi, z.value_lo, z.value_hi);
    }
    Ok(())
}
