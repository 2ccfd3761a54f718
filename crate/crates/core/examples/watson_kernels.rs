//! The kernels `B_p` and `G_p` and the Watson-type series `sum w (lambda^2 + x^2)^-s`
//! evaluated by its defining series, its K-Bessel expansion and its kernel integral.

use koshliakov::kernels::{b_kernel, g_kernel, watson_rhs_bessel, watson_rhs_integral, watson_series_any};
use koshliakov::koshzeta::sigma_p_series;
use koshliakov::{EvalConfig, ShapeParam, C64};

fn main() -> koshliakov::Result<()> {
    let cfg = EvalConfig::default();
    let shape = ShapeParam::Finite(1.0);

    println!("{:>6} {:>22} {:>22}", "t", "B_1(t)", "G_1(t)");
    for t in [0.1, 0.5, 1.0, 2.0, 4.0] {
        println!("{t:>6} {:>22.15e} {:>22.15e}", b_kernel(shape, t), g_kernel(shape, t)?);
    }

    println!("\nphi_1(s, x) at x = 0.8 by three routes");
    let x = 0.8;
    for s in [C64::new(0.75, 0.0), C64::new(0.9, 0.4), C64::new(2.0, 1.0)] {
        let series = watson_series_any(shape, s, x, &cfg)?.value;
        let bessel = watson_rhs_bessel(shape, s, x, &cfg)?;
        let line = match watson_rhs_integral(shape, s, x, &cfg) {
            Ok(v) => format!("{v:.13}"),
            Err(e) => format!("({e})"),
        };
        println!("  s = {s}\n    series   {series:.13}\n    bessel   {bessel:.13}\n    integral {line}");
    }

    println!("\nsigma_p(z) = sum w e^(-lambda z) for the three shape types");
    for sh in [ShapeParam::Zero, shape, ShapeParam::Infinity] {
        let v = sigma_p_series(sh, C64::new(1.0, 2.0), &cfg)?.value;
        println!("  p = {sh:<4} sigma_p(1+2i) = {v:.13}");
    }
    Ok(())
}
