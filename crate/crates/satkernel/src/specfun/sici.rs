use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use super::EULER_GAMMA;
use crate::error::{domain, Result};

/// Below this argument Si and Ci use their power series; above it the
/// continued fraction for E₁(ix).
pub const SICI_CROSSOVER: f64 = 2.0;

/// Sine integral Si(A) = ∫₀^A sin(y)/y dy.
pub fn sin_integral(a: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return domain(format!("Si needs A >= 0, got {a}"));
    }
    Ok(si_ci(a).0)
}

/// Cosine integral Ci(A) = −∫_A^∞ cos(y)/y dy.
pub fn cos_integral(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return domain(format!("Ci needs A > 0, got {a}"));
    }
    Ok(si_ci(a).1)
}

/// (Si(x), Ci(x)) for x ≥ 0; Ci(0) is returned as −∞.
pub fn si_ci(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    if x.is_infinite() {
        return (FRAC_PI_2, 0.0);
    }
    if x <= SICI_CROSSOVER {
        let mut si = 0.0;
        let mut ci = 0.0;
        // running x^k / k!
        let mut fact = 1.0;
        let mut k = 1usize;
        loop {
            fact *= x / k as f64;
            let t = fact / k as f64;
            if k % 2 == 1 {
                let s = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
                si += s * t;
            } else {
                let s = if (k / 2) % 2 == 1 { -1.0 } else { 1.0 };
                ci += s * t;
            }
            if t < 1e-18 * (si.abs() + ci.abs() + 1.0) && k > 4 {
                break;
            }
            k += 1;
            if k > 200 {
                break;
            }
        }
        (si, EULER_GAMMA + x.ln() + ci)
    } else {
        // E₁(ix) by modified Lentz evaluation of the even continued fraction
        let b0 = Complex64::new(1.0, x);
        let tiny = 1e-300;
        let mut b = b0;
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 2..10_000 {
            let a = -((i - 1) as f64).powi(2);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        h *= Complex64::new(x.cos(), -x.sin());
        (FRAC_PI_2 + h.im, -h.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        // Abramowitz & Stegun table 5.1
        let (si, ci) = si_ci(1.0);
        assert!((si - 0.946_083_070_367_183).abs() < 1e-14);
        assert!((ci - 0.337_403_922_900_968).abs() < 1e-14);
        let (si, ci) = si_ci(10.0);
        assert!((si - 1.658_347_594_218_874).abs() < 1e-13);
        assert!((ci + 0.045_456_433_004_455).abs() < 1e-13);
    }

    #[test]
    fn continuity_at_crossover() {
        let a = si_ci(SICI_CROSSOVER * (1.0 - 1e-15));
        let b = si_ci(SICI_CROSSOVER * (1.0 + 1e-15));
        assert!((a.0 - b.0).abs() < 1e-13 && (a.1 - b.1).abs() < 1e-13);
    }

    #[test]
    fn domain_errors() {
        assert!(cos_integral(0.0).is_err());
        assert!(sin_integral(-1.0).is_err());
        assert_eq!(sin_integral(0.0).unwrap(), 0.0);
    }
}
