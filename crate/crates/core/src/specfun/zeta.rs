use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use super::{cexpm1, csinpi, gamma, rpow};

const BORWEIN_N: usize = 64;

fn borwein_d() -> &'static [f64; BORWEIN_N + 1] {
    static D: OnceLock<[f64; BORWEIN_N + 1]> = OnceLock::new();
    D.get_or_init(|| {
        let n = BORWEIN_N as f64;
        let mut d = [0.0; BORWEIN_N + 1];
        let mut term = 1.0;
        let mut acc = 1.0;
        d[0] = acc;
        for i in 1..=BORWEIN_N {
            let fi = i as f64;
            term *= 4.0 * (n + fi - 1.0) * (n - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
            acc += term;
            d[i] = acc;
        }
        d
    })
}

/// Dirichlet eta by Borwein's alternating series acceleration.
fn dirichlet_eta(s: C64) -> C64 {
    let d = borwein_d();
    let dn = d[BORWEIN_N];
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..BORWEIN_N {
        let t = (d[k] - dn) * rpow((k + 1) as f64, -s);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    -sum / dn
}

/// Riemann zeta function; infinite at `s = 1`.
pub fn riemann_zeta(s: C64) -> C64 {
    if s == C64::new(1.0, 0.0) {
        return C64::new(f64::INFINITY, 0.0);
    }
    if s.re >= -1.0 {
        // 1 - 2^{1-s} = -expm1((1-s) ln 2)
        let den = -cexpm1((1.0 - s) * std::f64::consts::LN_2);
        dirichlet_eta(s) / den
    } else {
        let t = 1.0 - s;
        rpow(2.0, s) * rpow(PI, s - 1.0) * csinpi(s / 2.0) * gamma(t) * riemann_zeta(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // independent Euler-Maclaurin evaluation
    fn zeta_em(s: C64) -> C64 {
        let n = 30usize;
        let mut sum = C64::new(0.0, 0.0);
        for k in 1..n {
            sum += rpow(k as f64, -s);
        }
        let nf = n as f64;
        sum += rpow(nf, 1.0 - s) / (s - 1.0) + 0.5 * rpow(nf, -s);
        let b2 = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
        let mut fact = 1.0;
        let mut poch = s;
        for (j, b) in b2.iter().enumerate() {
            let k = 2 * j + 2;
            fact *= ((k - 1) * k) as f64;
            sum += b / fact * poch * rpow(nf, -s - (k - 1) as f64);
            poch = poch * (s + k as f64 - 1.0) * (s + k as f64);
        }
        sum
    }

    #[test]
    fn known_values() {
        let z2 = riemann_zeta(C64::new(2.0, 0.0));
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-14);
        let zm1 = riemann_zeta(C64::new(-1.0, 0.0));
        assert!((zm1.re + 1.0 / 12.0).abs() < 1e-14);
        assert_eq!(riemann_zeta(C64::new(-2.0, 0.0)).re, 0.0);
        let z0 = riemann_zeta(C64::new(0.0, 0.0));
        assert!((z0.re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn against_euler_maclaurin() {
        for &s in &[
            C64::new(0.5, 14.134_725_141_734_693),
            C64::new(1.5, 0.0),
            C64::new(0.6, 0.3),
            C64::new(2.0, 1.0),
            C64::new(-0.5, 0.5),
            C64::new(1.0 + 1e-7, 0.0),
            C64::new(9.0, -4.0),
        ] {
            let a = riemann_zeta(s);
            let b = zeta_em(s);
            assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()), "{s}: {a} vs {b}");
        }
    }
}
