use num_complex::Complex64;

use super::EULER_GAMMA;
use crate::error::{domain, Result};
use crate::quad::GaussLegendre;

/// Radius separating the power-series regime of the exponential integral
/// from the far-field regime.
pub const FG_CROSSOVER: f64 = 4.0;

/// The auxiliary integrals f(z) = ∫₀^∞ sin t/(t+z) dt and
/// g(z) = ∫₀^∞ cos t/(t+z) dt for Re z > 0, or Re z = 0 with Im z ≠ 0.
pub fn fg(z: Complex64) -> Result<(Complex64, Complex64)> {
    if !(z.re > 0.0 || (z.re == 0.0 && z.im != 0.0)) || !z.re.is_finite() || !z.im.is_finite() {
        return domain(format!("f, g need Re z > 0 or Re z = 0, Im z != 0; got {z}"));
    }
    let plus = oscillatory(z, 1.0);
    let minus = oscillatory(z, -1.0);
    let g = 0.5 * (plus + minus);
    let f = (plus - minus) / Complex64::new(0.0, 2.0);
    Ok((f, g))
}

/// ∫₀^∞ e^{±it}/(t+z) dt, which equals g(z) ± i f(z).
pub fn oscillatory(z: Complex64, sign: f64) -> Complex64 {
    let i = Complex64::i();
    // substituting s = t + z gives e^{∓iz} E₁(∓iz)
    let mut zeta = -sign * i * z;
    if zeta.im == 0.0 && zeta.re < 0.0 {
        // approach the cut from the side selected by Re z > 0
        zeta.im = if sign > 0.0 { -0.0 } else { 0.0 };
    }
    if zeta.norm() <= FG_CROSSOVER {
        zeta.exp() * e1_series(zeta)
    } else if zeta.re >= 0.0 {
        e1_scaled_cf(zeta)
    } else {
        ray_integral(z, sign)
    }
}

/// E₁(ζ) = −γ − log ζ − Σ (−ζ)^k/(k·k!), principal branch.
fn e1_series(zeta: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 1..200 {
        term *= -zeta / k as f64;
        let t = term / k as f64;
        sum += t;
        if t.norm() < 1e-18 * (sum.norm() + 1.0) {
            break;
        }
    }
    -EULER_GAMMA - zeta.ln() - sum
}

/// e^ζ E₁(ζ) by the continued fraction 1/(ζ+1− 1²/(ζ+3− 2²/(ζ+5− …))), Re ζ ≥ 0.
fn e1_scaled_cf(zeta: Complex64) -> Complex64 {
    let tiny = 1e-300;
    let mut b = zeta + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..20_000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}

/// Direct quadrature along the ray t = r·e^{±iπ/4}, where e^{±it} decays.
/// The pole t = −z lies outside the swept sector for Re z ≥ 0.
fn ray_integral(z: Complex64, sign: f64) -> Complex64 {
    let i = Complex64::i();
    let dir = Complex64::from_polar(1.0, sign * std::f64::consts::FRAC_PI_4);
    let rule = GaussLegendre::cached(24);
    let mut sum = Complex64::new(0.0, 0.0);
    let width = 1.0;
    let r_max = 60.0;
    let panels = (r_max / width) as usize;
    for p in 0..panels {
        let lo = p as f64 * width;
        for (r, w) in rule.mapped(lo, lo + width) {
            let t = dir * r;
            sum += w * (sign * i * t).exp() / (t + z);
        }
    }
    dir * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_argument_asymptotics() {
        let (f, g) = fg(Complex64::new(100.0, 0.0)).unwrap();
        assert!((f.re - 0.01).abs() < 5e-6);
        // g(z) = 1/z² − 3!/z⁴ + O(z⁻⁶); the z⁻⁴ term alone is 6e-8 here
        assert!((g.re - (1e-4 - 6e-8)).abs() < 2e-10);
        assert!((g.re - 1e-4).abs() < 6.1e-8);
        assert!(f.im.abs() < 1e-15 && g.im.abs() < 1e-15);
    }

    #[test]
    fn regimes_agree_across_crossover() {
        for &r in &[3.9, 4.1, 6.0] {
            for k in 0..8 {
                let ang = -1.5 + 3.0 * k as f64 / 7.0;
                let z = Complex64::from_polar(r, ang);
                for &s in &[1.0, -1.0] {
                    let a = oscillatory(z, s);
                    let b = ray_integral(z, s);
                    assert!((a - b).norm() < 1e-11 * b.norm().max(1e-3), "{z} {s} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn imaginary_axis() {
        let z = Complex64::new(0.0, 2.0 * std::f64::consts::PI * 1.5);
        let (f, g) = fg(z).unwrap();
        let ray_p = ray_integral(z, 1.0);
        let ray_m = ray_integral(z, -1.0);
        assert!((g + Complex64::i() * f - ray_p).norm() < 1e-11);
        assert!((g - Complex64::i() * f - ray_m).norm() < 1e-11);
        assert!(fg(Complex64::new(-1.0, 0.0)).is_err());
        assert!(fg(Complex64::new(0.0, 0.0)).is_err());
    }
}
