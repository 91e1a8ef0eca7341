use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use super::{VarianceMethod, VarianceReport};
use crate::error::{domain, Result};
use crate::kernels::{Boundary, EndTime, EquidistantModel};
use crate::quad::{adaptive, composite_nodes};
use crate::specfun::{fg, oscillatory, si_ci, EULER_GAMMA};

const PI2: f64 = PI * PI;

fn check_length(l: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return domain(format!("interval length must be positive, got {l}"));
    }
    Ok(())
}

fn check_free(model: &EquidistantModel) -> Result<()> {
    if model.boundary != Boundary::Free || model.t != EndTime::Infinite {
        return domain("closed form needs the free-boundary model with T = infinity");
    }
    Ok(())
}

/// 1 + x(π/2 − Si x) − cos x − Ci x, the part shared by the sine-kernel and
/// averaged forms.
fn oscillating_part(x: f64) -> f64 {
    let (si, ci) = si_ci(x);
    1.0 + x * (FRAC_PI_2 - si) - x.cos() - ci
}

/// Sine-kernel variance (1/π²)[log(2πℓ) + γ + 1 + 2πℓ(π/2 − Si 2πℓ) − cos 2πℓ − Ci 2πℓ], ℓ = L/a.
pub fn variance_sine_closed(a: f64, l: f64) -> Result<VarianceReport> {
    if !(a > 0.0) {
        return domain(format!("spacing must be positive, got {a}"));
    }
    check_length(l)?;
    let x = 2.0 * PI * l / a;
    let v = (x.ln() + EULER_GAMMA + oscillating_part(x)) / PI2;
    Ok(VarianceReport::exact(0.0, l, v, VarianceMethod::Sine))
}

/// Variance over [R, R+L] of the two-term approximation of K_S, with
/// θ/π = frac((R−Δ)/a), φ/π = frac(L/a), A = πL/a.
pub fn variance_offset(model: &EquidistantModel, r: f64, l: f64) -> Result<VarianceReport> {
    offset_variance(model, r, l, FourthBlock::Derived)
}

/// Which 4θ block [`offset_variance`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourthBlock {
    /// h₂, h₄ block with prefactor sin 2φ/(8π³d), as usually quoted.
    Quoted,
    /// Block re-derived from the kernel; agrees with direct quadrature.
    Derived,
}

/// The closed form with a choice of 4θ block; the quoted block is kept
/// for comparison.
pub fn offset_variance(model: &EquidistantModel, r: f64, l: f64, form: FourthBlock) -> Result<VarianceReport> {
    check_free(model)?;
    check_length(l)?;
    let (a, d) = (model.a, model.d());
    let frac = |t: f64| t - t.floor();
    let theta = PI * frac((r - model.delta) / a);
    let phi = PI * frac(l / a);
    let big_a = PI * l / a;
    let (si, ci) = si_ci(2.0 * big_a);

    let z = C64::new(2.0 * big_a, 2.0 * PI * d);
    let (f, g) = fg(z)?;
    let (h1, h2, h3, h4) = (2.0 * f.re, 2.0 * f.im, 2.0 * g.re, 2.0 * g.im);
    let h3_0 = 2.0 * fg(C64::new(0.0, 2.0 * PI * d))?.1.re;

    let tp = theta + phi;
    let c2 = (2.0 * tp).cos() + (2.0 * theta).cos();
    let s2 = (2.0 * tp).sin() - (2.0 * theta).sin();
    let log_term = (2.0 * PI * big_a * d / big_a.hypot(PI * d)).ln() + EULER_GAMMA - ci;

    let first = (1.0 + c2 / (PI * d)) * log_term / PI2;
    let second = (1.0 + 2.0 * big_a * (FRAC_PI_2 - si) - (2.0 * big_a).cos()) / PI2;
    let third = (c2 * (h3_0 - h3) + s2 * (h1 + PI - 2.0 * si)) / (2.0 * PI2 * PI * d);
    let fourth = match form {
        FourthBlock::Quoted => {
            (2.0 * phi).sin() / (8.0 * PI2 * PI * d)
                * (h2 * ((4.0 * tp).sin() - (4.0 * theta).sin()) - h4 * ((4.0 * tp).cos() + (4.0 * theta).cos()))
        }
        FourthBlock::Derived => fourth_harmonic(theta, l / a, d),
    };
    let v = first + second + third + fourth;
    Ok(VarianceReport::exact(r, l, v, VarianceMethod::ClosedForm))
}

/// The 4θ part of the variance, from the cos 2π(x+y)/(2π²(d² + (x−y)²))
/// piece of K(x,y)K(y,x) (units a = 1):
///
/// [Re(e^{i(4θ+4πℓ)}G) + Re(e^{4iθ}Ḡ)]/(2π²),
/// G = ∫₀^∞ e^{2πip}(1 − e^{−4πi·min(p,ℓ)})/(4πi(d² + p²)) dp.
fn fourth_harmonic(theta: f64, ell: f64, d: f64) -> f64 {
    let i = C64::i();
    let k = 2.0 * PI;
    // ∫_x^∞ e^{2πip}/(d² + p²) dp through 1/(d²+p²) = (1/(p−id) − 1/(p+id))/(2id)
    let tail = |x: f64| {
        let lo = oscillatory(C64::new(k * x, -k * d), 1.0);
        let hi = oscillatory(C64::new(k * x, k * d), 1.0);
        (i * k * x).exp() * (lo - hi) / (2.0 * i * d)
    };
    let p0 = tail(0.0);
    let pl = tail(ell);
    let q = (p0 - pl).conj();
    let g = (p0 - q - (-2.0 * i * k * ell).exp() * pl) / (4.0 * PI * i);
    let psi = 4.0 * theta;
    (((i * (psi + 2.0 * k * ell)).exp() * g).re + ((i * psi).exp() * g.conj()).re) / (2.0 * PI2)
}

/// Offset-averaged variance of the free model:
/// sine-kernel variance + (1/π²)log(d/√(d² + ℓ²)), ℓ = L/a.
pub fn variance_averaged(model: &EquidistantModel, l: f64) -> Result<VarianceReport> {
    check_free(model)?;
    check_length(l)?;
    let (ell, d) = (l / model.a, model.d());
    let x = 2.0 * PI * ell;
    let v = ((2.0 * PI * ell * d / ell.hypot(d)).ln() + EULER_GAMMA + oscillating_part(x)) / PI2;
    Ok(VarianceReport::exact(0.0, l, v, VarianceMethod::Averaged))
}

/// (1/π²)(log(2πd) + γ + 1).
pub fn saturation_level_d(d: f64) -> f64 {
    ((2.0 * PI * d).ln() + EULER_GAMMA + 1.0) / PI2
}

/// Large-L limit of the averaged variance of the free model.
pub fn saturation_level(model: &EquidistantModel) -> f64 {
    saturation_level_d(model.d())
}

/// The d whose saturation level is `level`.
pub fn d_for_level(level: f64) -> f64 {
    (PI2 * level - EULER_GAMMA - 1.0).exp() / (2.0 * PI)
}

/// (x/sinh x)².
fn w2(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 3.0
    } else if x > 350.0 {
        0.0
    } else {
        let w = x / x.sinh();
        w * w
    }
}

/// Beyond u = 2d·WEIGHT_CUT the weight (x/sinh x)² is below 1e−30.
const WEIGHT_CUT: f64 = 40.0;

/// Beyond this the sin² factor is split into its mean and an oscillating
/// part handled by two integrations by parts.
const DIRECT_SPAN: f64 = 2000.0;

/// ∫_a^b h(u) sin²u du for smooth h that varies on scales ≫ 1 when u is large.
fn sin2_integral(a: f64, b: f64, order: usize, h: impl Fn(f64) -> f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let split = a.max(DIRECT_SPAN).min(b);
    let mut total: f64 = composite_nodes(a, split, 1.0, order)
        .into_iter()
        .map(|(u, w)| {
            let s = u.sin();
            w * h(u) * s * s
        })
        .sum();
    if b > split {
        // mean part in log variable
        total += adaptive(split.ln(), b.ln(), 1e-15, |t| {
            let u = t.exp();
            0.5 * h(u) * u
        })
        .value;
        // −½∫ h cos 2u ≈ −½[h sin 2u/2 + h′ cos 2u/4]
        let edge = |u: f64| {
            let dh = (h(u * (1.0 + 1e-4)) - h(u * (1.0 - 1e-4))) / (2e-4 * u);
            h(u) * (2.0 * u).sin() / 2.0 + dh * (2.0 * u).cos() / 4.0
        };
        total -= 0.5 * (edge(b) - edge(split));
    }
    total
}

/// The three pieces of V_d, each at the given Gauss–Legendre order.
fn vd_parts(ell: f64, d: f64, order: usize) -> f64 {
    let top = PI * ell;
    let umax = 2.0 * d * WEIGHT_CUT;
    let first = sin2_integral(0.0, top.min(umax), order, |u| w2(u / (2.0 * d)) / u);
    let second = sin2_integral(top, umax.max(top), order, |u| w2(u / (2.0 * d)) / (u * u));
    let c = top / (2.0 * d);
    // c − log cosh c, written without overflow
    let third = 2f64.ln() - (-2.0 * c).exp().ln_1p();
    2.0 * first / PI2 + 2.0 * ell * second / PI + third / PI2
}

/// Leading part of the variance of the (S,S) model:
///
/// V_d = (2/π²)∫₀^{πℓ} w(u/2d)² sin²u/u du + (2ℓ/π)∫_{πℓ}^∞ w(u/2d)² sin²u/u² du
///     + (1/π²)∫₀^∞ min(t, πℓ/2d)/cosh²t dt,   w(x) = x/sinh x, ℓ = L/a.
pub fn variance_vd(model: &EquidistantModel, l: f64) -> Result<VarianceReport> {
    if !model.is_ss() || model.boundary != Boundary::Free {
        return domain("V_d needs the free (S,S) model");
    }
    check_length(l)?;
    let (ell, d) = (l / model.a, model.d());
    let v = vd_parts(ell, d, 24);
    let coarse = vd_parts(ell, d, 16);
    Ok(VarianceReport {
        r: 0.0,
        l,
        value: v,
        method: VarianceMethod::Vd,
        err_estimate: (v - coarse).abs() + 1e-15 * v.abs(),
        warning: None,
    })
}

/// lim_{L→∞} V_d(L) = (2/π²)∫₀^∞ w(u/2d)² sin²u/u du + (log 2)/π².
pub fn vd_limit(d: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return domain(format!("d must be positive, got {d}"));
    }
    let first = sin2_integral(0.0, 2.0 * d * WEIGHT_CUT, 24, |u| w2(u / (2.0 * d)) / u);
    Ok((2.0 * first + 2f64.ln()) / PI2)
}

/// Variance of the number of eigenvalues of an n×n CUE matrix on an arc of
/// the given length:
/// n·arc/2π − n·arc²/4π² − (2/π²)Σ_{k<n}(n−k)/k²·sin²(k·arc/2).
pub fn variance_un(n: usize, arc: f64) -> Result<VarianceReport> {
    if n == 0 {
        return domain("matrix size must be at least 1");
    }
    if !(0.0..=2.0 * PI).contains(&arc) {
        return domain(format!("arc must lie in [0, 2π], got {arc}"));
    }
    let nf = n as f64;
    let sum: f64 = (1..n)
        .map(|k| {
            let kf = k as f64;
            let s = (0.5 * kf * arc).sin();
            (nf - kf) / (kf * kf) * s * s
        })
        .sum();
    let v = nf * arc / (2.0 * PI) - nf * arc * arc / (4.0 * PI2) - 2.0 * sum / PI2;
    Ok(VarianceReport::exact(0.0, arc, v, VarianceMethod::Un))
}
