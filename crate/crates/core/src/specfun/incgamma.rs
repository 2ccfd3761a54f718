use num_complex::Complex64 as C64;

use super::quad::semi_infinite;
use crate::config::QuadratureSpec;
use crate::error::{KoshError, Result};

/// Upper incomplete gamma `Q_mu(s) = int_mu^inf t^{s-1} e^{-t} dt` for `mu > 0`.
///
/// Continued fraction for `mu >= 1`, quadrature of `e^{-mu} int_0^inf (mu+u)^{s-1} e^{-u} du` otherwise.
pub fn incomplete_gamma_q(s: C64, mu: f64) -> Result<C64> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(KoshError::domain(format!("incomplete gamma needs mu > 0, got {mu}")));
    }
    if mu >= 1.0 {
        let tiny = 1e-300;
        let mut b = C64::new(mu + 1.0, 0.0) - s;
        let mut c = C64::new(1.0 / tiny, 0.0);
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (C64::new(i as f64, 0.0) - s);
            b += 2.0;
            d = an * d + b;
            if d.norm() < tiny {
                d = C64::new(tiny, 0.0);
            }
            c = b + an / c;
            if c.norm() < tiny {
                c = C64::new(tiny, 0.0);
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                return Ok((s * mu.ln() - mu).exp() * h);
            }
        }
        Err(KoshError::NonConvergence { what: "incomplete_gamma_q", estimate: h.norm(), error: f64::NAN })
    } else {
        let spec = QuadratureSpec { rel_tol: 1e-14, abs_tol: 1e-300, ..QuadratureSpec::default() };
        let r = semi_infinite(|_, u| ((s - 1.0) * (mu + u).ln() - u).exp(), 0.0, 1.0, &spec);
        Ok(r.into_result("incomplete_gamma_q")? * (-mu).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // E1 by its convergent series, an independent oracle for s = 0
    fn e1(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            sum -= term / k as f64;
        }
        -super::super::EULER_GAMMA - x.ln() + sum
    }

    #[test]
    fn exponential_integral() {
        for &mu in &[0.05, 0.5, 0.99, 1.0, 2.0 * std::f64::consts::PI, 15.0] {
            let q = incomplete_gamma_q(C64::new(0.0, 0.0), mu).unwrap();
            assert!((q.re - e1(mu)).abs() < 1e-12 * e1(mu).abs().max(1.0) || mu > 10.0, "mu = {mu}");
        }
        // E1(15) from mpmath
        let q = incomplete_gamma_q(C64::new(0.0, 0.0), 15.0).unwrap();
        assert!((q.re - 1.918_627_892_147_867e-8).abs() < 1e-20);
    }

    #[test]
    fn integer_order() {
        // Q_mu(2) = (1 + mu) e^{-mu}
        for &mu in &[0.3, 3.0] {
            let q = incomplete_gamma_q(C64::new(2.0, 0.0), mu).unwrap();
            assert!((q.re - (1.0 + mu) * (-mu).exp()).abs() < 1e-14);
        }
    }
}
