use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Argument pair for the Jacobi theta functions.
#[derive(Debug, Clone, Copy)]
pub struct ThetaArg {
    pub x: Complex64,
    pub tau: Complex64,
}

impl ThetaArg {
    pub fn new(x: Complex64, tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return domain(format!("theta modulus needs Im(tau) > 0, got {tau}"));
        }
        Ok(ThetaArg { x, tau })
    }

    pub fn real(x: f64, tau: Complex64) -> Result<Self> {
        Self::new(Complex64::new(x, 0.0), tau)
    }
}

/// Jacobi theta function `k` (1..=4) with nome exp(iπτ):
///
/// θ₁ = i Σ (−1)ⁿ e^{iπτ(n−½)² + iπ(2n−1)x}, θ₂ = Σ e^{iπτ(n−½)² + iπ(2n−1)x},
/// θ₃ = Σ e^{iπτn² + 2iπnx}, θ₄ = Σ (−1)ⁿ e^{iπτn² + 2iπnx}.
pub fn theta(k: u8, arg: ThetaArg, tol: f64) -> Result<Complex64> {
    if !(tol > 0.0) {
        return domain("theta tolerance must be positive");
    }
    if !(arg.tau.im > 0.0) {
        return domain("theta modulus needs Im(tau) > 0");
    }
    let i = Complex64::i();
    let (x, tau) = (arg.x, arg.tau);
    // terms decay like exp(−π Im τ n²) once |n| exceeds the shift set by Im x
    let shift = (x.im.abs() / tau.im).ceil();
    let n_star = ((-tol.ln()) / (PI * tau.im)).sqrt().ceil() + 2.0 + shift;
    let n_max = n_star as i64;
    let half = matches!(k, 1 | 2);
    let sign = |n: i64| if matches!(k, 1 | 4) && n.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    let term = |n: i64| -> Complex64 {
        let e = if half {
            let m = n as f64 - 0.5;
            i * PI * tau * m * m + i * PI * (2.0 * n as f64 - 1.0) * x
        } else {
            let m = n as f64;
            i * PI * tau * m * m + 2.0 * i * PI * m * x
        };
        sign(n) * e.exp()
    };
    let mut sum = Complex64::new(0.0, 0.0);
    // pair terms symmetric about the centre of the exponent
    let (first, pair): (i64, fn(i64) -> i64) = if half { (1, |n| 1 - n) } else { (0, |n| -n) };
    if !half {
        sum += term(0);
    }
    let start = if half { first } else { 1 };
    let mut n = start;
    loop {
        let t = term(n) + term(pair(n));
        sum += t;
        if n >= n_max && t.norm() < tol * (sum.norm() + 1.0) {
            break;
        }
        if n > n_max + 200 {
            break;
        }
        n += 1;
    }
    Ok(if k == 1 { i * sum } else if (1..=4).contains(&k) { sum } else { return domain(format!("theta index {k} not in 1..=4")) })
}

/// θ_k(x; τ) at real x.
pub fn theta_real(k: u8, x: f64, tau: Complex64) -> Result<Complex64> {
    theta(k, ThetaArg::real(x, tau)?, 1e-17)
}

/// Theta functions on the imaginary modulus τ = i·t at real x, as real
/// numbers. For k = 1, 2 the common factor e^{−πt/4} is removed so that
/// large t does not underflow.
pub fn theta_imag_scaled(k: u8, x: f64, t: f64) -> f64 {
    let pi = PI;
    let mut sum = 0.0;
    let mut n = 1u32;
    loop {
        let nf = n as f64;
        let (w, term) = match k {
            1 => {
                let w = (-pi * t * nf * (nf - 1.0)).exp();
                let s = if n % 2 == 1 { 1.0 } else { -1.0 };
                (w, s * w * ((2.0 * nf - 1.0) * pi * x).sin())
            }
            2 => {
                let w = (-pi * t * nf * (nf - 1.0)).exp();
                (w, w * ((2.0 * nf - 1.0) * pi * x).cos())
            }
            3 => {
                let w = (-pi * t * nf * nf).exp();
                (w, w * (2.0 * nf * pi * x).cos())
            }
            _ => {
                let w = (-pi * t * nf * nf).exp();
                let s = if n % 2 == 1 { -1.0 } else { 1.0 };
                (w, s * w * (2.0 * nf * pi * x).cos())
            }
        };
        sum += term;
        if w < 1e-18 {
            break;
        }
        n += 1;
    }
    match k {
        1 | 2 => 2.0 * sum,
        _ => 1.0 + 2.0 * sum,
    }
}

/// e^{πt/4}·θ₁(x; it)/x, finite at x = 0.
pub fn theta1_scaled_over_x(x: f64, t: f64) -> f64 {
    let pi = PI;
    let mut sum = 0.0;
    let mut n = 1u32;
    loop {
        let nf = n as f64;
        let w = (-pi * t * nf * (nf - 1.0)).exp();
        let s = if n % 2 == 1 { 1.0 } else { -1.0 };
        let k = (2.0 * nf - 1.0) * pi;
        sum += s * w * k * crate::kernels::sinc(k * x);
        if w < 1e-18 {
            break;
        }
        n += 1;
    }
    2.0 * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta3_brute_force() {
        let tau = Complex64::new(0.0, 1.0);
        let v = theta_real(3, 0.0, tau).unwrap();
        let brute: f64 = (-10i32..=10).map(|n| (-PI * (n * n) as f64).exp()).sum();
        assert!((v.re - brute).abs() < 1e-14 && v.im.abs() < 1e-14);
    }

    #[test]
    fn theta1_odd_at_zero() {
        let v = theta_real(1, 0.0, Complex64::new(0.0, 1.0)).unwrap();
        assert!(v.norm() < 1e-16);
    }

    #[test]
    fn scaled_forms_match_series() {
        for &t in &[0.3, 1.0, 3.0] {
            let tau = Complex64::new(0.0, t);
            let scale = (-PI * t / 4.0).exp();
            for &x in &[0.0, 0.17, -0.6, 1.3] {
                for k in 1..=4u8 {
                    let full = theta_real(k, x, tau).unwrap();
                    let mut v = theta_imag_scaled(k, x, t);
                    if k <= 2 {
                        v *= scale;
                    }
                    assert!((full.re - v).abs() < 1e-14 && full.im.abs() < 1e-14, "k={k} t={t} x={x}");
                }
                if x != 0.0 {
                    let r = theta1_scaled_over_x(x, t) * x;
                    assert!((r - theta_imag_scaled(1, x, t)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(ThetaArg::real(0.0, Complex64::new(0.0, -1.0)).is_err());
        assert!(theta(5, ThetaArg::real(0.0, Complex64::i()).unwrap(), 1e-12).is_err());
    }
}
