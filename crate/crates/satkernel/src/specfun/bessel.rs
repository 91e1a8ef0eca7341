use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Integer orders switch from the ascending series to the Hankel asymptotic
/// expansion at this argument.
pub const BESSEL_CROSSOVER: f64 = 12.0;

/// Bessel function J_ν(x) for ν ∈ {−½, ½} or a nonnegative integer, x ≥ 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("bessel_j needs x >= 0, got {x}"));
    }
    if nu == 0.5 || nu == -0.5 {
        return Ok(half_integer(nu, x));
    }
    if nu >= 0.0 && nu.fract() == 0.0 && nu <= 1000.0 {
        return Ok(integer_order(nu as u32, x));
    }
    domain(format!("bessel_j order {nu} is not supported"))
}

/// Closed forms for ν = ±½, ±3/2.
pub(crate) fn half_integer(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.5 || nu == 1.5 { 0.0 } else { f64::INFINITY };
    }
    let c = (2.0 / (PI * x)).sqrt();
    if nu == 0.5 {
        c * x.sin()
    } else if nu == -0.5 {
        c * x.cos()
    } else if nu == 1.5 {
        c * (x.sin() / x - x.cos())
    } else if nu == -1.5 {
        c * (-x.cos() / x - x.sin())
    } else {
        f64::NAN
    }
}

pub(crate) fn integer_order(n: u32, x: f64) -> f64 {
    if x < BESSEL_CROSSOVER {
        let h = 0.5 * x;
        let mut term = 1.0;
        for k in 1..=n {
            term *= h / k as f64;
        }
        let mut sum = term;
        let h2 = h * h;
        for k in 1..200u32 {
            term *= -h2 / (k as f64 * (k + n) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 2 {
                break;
            }
        }
        sum
    } else {
        let mu = 4.0 * (n as f64).powi(2);
        let chi = x - (n as f64) * PI / 2.0 - PI / 4.0;
        let mut p = 0.0f64;
        let mut q = 0.0;
        let mut a = 1.0f64;
        let mut last = f64::INFINITY;
        for k in 0..200u32 {
            let t = a;
            if t.abs() > last {
                break;
            }
            last = t.abs();
            match k % 4 {
                0 => p += t,
                1 => q += t,
                2 => p -= t,
                _ => q -= t,
            }
            if t.abs() < 1e-17 {
                break;
            }
            let odd = (2 * k + 1) as f64;
            a *= (mu - odd * odd) / ((k + 1) as f64 * 8.0 * x);
        }
        (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}

/// J_ν for the orders reachable from the supported set by ν ± 1.
pub(crate) fn j_any(nu: f64, x: f64) -> f64 {
    if (nu.abs() - 0.5).abs() < 1e-12 || (nu.abs() - 1.5).abs() < 1e-12 {
        half_integer(nu, x)
    } else if nu < 0.0 {
        let n = (-nu) as u32;
        let s = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        s * integer_order(n, x)
    } else {
        integer_order(nu as u32, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-15);
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert!(bessel_j(0.3, 1.0).is_err());
    }

    #[test]
    fn table_values() {
        // Abramowitz & Stegun table 9.1
        assert!((bessel_j(0.0, 1.0).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_j(1.0, 10.0).unwrap() - 0.043_472_746_168_861_44).abs() < 1e-12);
        assert!((bessel_j(0.0, 20.0).unwrap() - 0.167_024_664_340_583_2).abs() < 1e-10);
    }

    #[test]
    fn regimes_agree_across_crossover() {
        for n in 0..3 {
            let lo = integer_order(n, BESSEL_CROSSOVER - 1e-13);
            let hi = integer_order(n, BESSEL_CROSSOVER + 1e-13);
            assert!((lo - hi).abs() < 1e-10, "order {n}: {lo} {hi}");
        }
    }
}
