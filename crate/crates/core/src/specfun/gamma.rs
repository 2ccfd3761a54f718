use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::csinpi;

// Lanczos approximation, g = 671/128, 14 terms.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn ln_gamma_right(z: C64) -> C64 {
    let t = z + LANCZOS_G;
    let mut ser = C64::new(LANCZOS_C0, 0.0);
    for (j, c) in LANCZOS.iter().enumerate() {
        ser += c / (z + (j + 1) as f64);
    }
    (z + 0.5) * t.ln() - t + (ser * SQRT_2PI / z).ln()
}

/// `log Gamma(z)` (some branch; `exp` of it is `Gamma(z)`).
pub fn ln_gamma(z: C64) -> C64 {
    if z.re >= 0.5 {
        ln_gamma_right(z)
    } else {
        C64::new(PI.ln(), 0.0) - csinpi(z).ln() - ln_gamma_right(1.0 - z)
    }
}

/// `Gamma(z)`; infinite at non-positive integers.
pub fn gamma(z: C64) -> C64 {
    if z.re >= 0.5 {
        ln_gamma_right(z).exp()
    } else {
        let s = csinpi(z);
        if s == C64::new(0.0, 0.0) {
            return C64::new(f64::INFINITY, 0.0);
        }
        PI / (s * ln_gamma_right(1.0 - z).exp())
    }
}

/// `1/Gamma(z)`; exactly zero at non-positive integers.
pub fn rgamma(z: C64) -> C64 {
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        csinpi(z) * ln_gamma_right(1.0 - z).exp() / PI
    }
}
