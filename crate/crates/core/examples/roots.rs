//! Roots of `p sin(pi y) + y cos(pi y) = 0`, their weights, and the two limit shapes.
//!
//! `cargo run --example roots -- 2.5`

use koshliakov::sequence::{build_sequence, offset_residual, solve_offset};
use koshliakov::ShapeParam;

fn main() -> koshliakov::Result<()> {
    let p: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1.0);
    let shape = ShapeParam::finite(p)?;
    let seq = build_sequence(shape, 10)?;
    println!("p = {p}, kappa = {:.12}", shape.kappa());
    println!("{:>3} {:>20} {:>20} {:>10}", "n", "lambda_n", "w_n", "residual");
    for (i, (l, w)) in seq.iter().enumerate() {
        let n = i + 1;
        println!("{n:>3} {l:>20.15} {w:>20.15} {:>10.1e}", offset_residual(p, n, seq.offset(n)));
    }

    // lambda_n tends to n as p grows and to n - 1/2 as p shrinks
    println!("\nn = 3 along both ladders");
    for q in [1e-4, 1e-2, 1.0, 1e2, 1e4] {
        let l = 3.0 - solve_offset(q, 3, 1e-15)?;
        println!("  p = {q:<8e} lambda_3 = {l:.15}");
    }
    for limit in [ShapeParam::Zero, ShapeParam::Infinity] {
        let s = build_sequence(limit, 3)?;
        println!("  p = {limit:<8} lambda = {:?}", s.lambdas());
    }
    Ok(())
}
