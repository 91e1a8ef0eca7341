use std::f64::consts::PI;

use super::basic::{sinc, sinhc};
use super::{Boundary, EndTime, EquidistantModel, FarField, KernelDomain, KernelHandle, Representation};
use crate::error::{domain, Result};
use crate::specfun::{theta1_scaled_over_x, theta_imag_scaled};

/// L_S(x,y) in units a = 1:
/// (1/π) Re Σ_n e^{−πd·n(n−1)} e^{iπ(y+(2n−1)x)} / (nd + i(y−x)).
///
/// The n = 0 term is the sine kernel; terms n and 1−n share a weight and
/// are summed in pairs.
pub fn ls_series(x: f64, y: f64, d: f64, tol: f64) -> f64 {
    let delta = y - x;
    let sigma = x + y;
    let mut sum = sinc(PI * delta);
    sum += (d * (PI * sigma).cos() + delta * (PI * sigma).sin()) / (PI * (d * d + delta * delta));
    let mut m = 1.0f64;
    loop {
        let w = (-PI * d * m * (m + 1.0)).exp();
        if w < tol * (sum.abs() + 1.0) * d.min(1.0) {
            break;
        }
        // n = m + 1 and n = −m
        let mut pair = 0.0;
        for &n in &[m + 1.0, -m] {
            let phase = PI * (y + (2.0 * n - 1.0) * x);
            let (re, im) = (n * d, delta);
            // Re[e^{iφ}/(re + i im)]
            pair += (re * phase.cos() + im * phase.sin()) / (re * re + im * im);
        }
        sum += w * pair / PI;
        m += 1.0;
        if m > 10_000.0 {
            break;
        }
    }
    sum
}

/// Two-term approximation of L_S in units a = 1.
pub fn ls_approx_unit(x: f64, y: f64, d: f64) -> f64 {
    let delta = y - x;
    let sigma = x + y;
    sinc(PI * delta) + (d * (PI * sigma).cos() + delta * (PI * sigma).sin()) / (PI * (d * d + delta * delta))
}

fn check_free_infinite(model: &EquidistantModel) -> Result<()> {
    if model.boundary != Boundary::Free {
        return domain("kernel needs the free-boundary model; use boundary_combine for the half line");
    }
    if model.t != EndTime::Infinite {
        return domain("kernel needs the model with T = infinity");
    }
    Ok(())
}

fn ls_far_field(d: f64) -> FarField {
    // the sine and d-terms cancel in the mean; oscillating remainder ~ (1+d)/r²
    FarField::InverseSquare { coeff: 0.0, remainder: (1.0 + d) / (PI * PI) }
}

/// K_S(u,v) = a⁻¹·L_S((u−Δ)/a, (v−Δ)/a), series form.
pub fn kernel_ls(model: &EquidistantModel, tol: f64) -> Result<KernelHandle> {
    check_free_infinite(model)?;
    if !(tol > 0.0) {
        return domain(format!("series tolerance must be positive, got {tol}"));
    }
    let (a, delta, d) = (model.a, model.delta, model.d());
    Ok(KernelHandle::new(
        format!("LS(a={a}, d={d}, offset={delta})"),
        KernelDomain::WholeLine,
        Representation::Series,
        false,
        ls_far_field(d),
        move |u, v| ls_series((u - delta) / a, (v - delta) / a, d, tol) / a,
    ))
}

/// Two-term approximation of K_S: sine kernel plus the d-term.
pub fn kernel_ls_approx(model: &EquidistantModel) -> Result<KernelHandle> {
    check_free_infinite(model)?;
    let (a, delta, d) = (model.a, model.delta, model.d());
    Ok(KernelHandle::new(
        format!("LS-approx(a={a}, d={d}, offset={delta})"),
        KernelDomain::WholeLine,
        Representation::Approximate,
        false,
        ls_far_field(d),
        move |u, v| ls_approx_unit((u - delta) / a, (v - delta) / a, d) / a,
    ))
}

/// Theta-function form of L_{S,S} in units a = 1:
///
/// [θ₃(u+v;2id)θ₁(u−v;2id)/sinh(π(u−v)/2d) + θ₂(u+v;2id)θ₄(u−v;2id)/cosh(π(u−v)/2d)]
/// / (d·θ₂(0;id)²·√(θ₃(0;id)θ₄(0;id))).
///
/// θ₁ and θ₂ are carried with their common factor e^{−πτ/4i} removed, which
/// cancels between numerator and normalization.
pub fn lss_theta(u: f64, v: f64, d: f64) -> f64 {
    LssNorm::new(d).eval(u, v)
}

#[derive(Debug, Clone, Copy)]
struct LssNorm {
    d: f64,
    norm: f64,
}

impl LssNorm {
    fn new(d: f64) -> Self {
        let t2 = theta_imag_scaled(2, 0.0, d);
        let t3 = theta_imag_scaled(3, 0.0, d);
        let t4 = theta_imag_scaled(4, 0.0, d);
        LssNorm { d, norm: 1.0 / (d * t2 * t2 * (t3 * t4).sqrt()) }
    }

    fn eval(&self, u: f64, v: f64) -> f64 {
        let d = self.d;
        let t = 2.0 * d;
        let (sigma, delta) = (u + v, u - v);
        let c = PI / (2.0 * d);
        // θ₁(δ)/sinh(cδ) = [θ₁(δ)/δ]/[c·sinhc(cδ)]
        let first = theta_imag_scaled(3, sigma, t) * theta1_scaled_over_x(delta, t) / (c * sinhc(c * delta));
        let second = theta_imag_scaled(2, sigma, t) * theta_imag_scaled(4, delta, t) / (c * delta).cosh();
        self.norm * (first + second)
    }
}

/// K_{S,S}(u,v) = a⁻¹·L_{S,S}((u−Δ)/a, (v−Δ)/a), theta form.
pub fn kernel_lss(model: &EquidistantModel, tol: f64) -> Result<KernelHandle> {
    if !model.is_ss() || model.boundary != Boundary::Free {
        return domain("theta kernel needs the free (S,S) model with T = S");
    }
    if !(tol > 0.0) {
        return domain(format!("series tolerance must be positive, got {tol}"));
    }
    let (a, delta, d) = (model.a, model.delta, model.d());
    let norm = LssNorm::new(d);
    Ok(KernelHandle::new(
        format!("LSS(a={a}, d={d}, offset={delta})"),
        KernelDomain::WholeLine,
        Representation::Theta,
        true,
        FarField::Exponential { rate: PI / (a * d), scale: 1.0 / (a * a) },
        move |u, v| norm.eval((u - delta) / a, (v - delta) / a) / a,
    ))
}

/// Leading part of L_{S,S} in units a = 1:
/// sin π(u−v)/(2d sinh(π(u−v)/2d)) + cos π(u+v)/(2d cosh(π(u−v)/2d)).
pub fn lss_approx_unit(u: f64, v: f64, d: f64) -> f64 {
    let delta = u - v;
    let c = PI / (2.0 * d);
    sinc(PI * delta) / sinhc(c * delta) + (PI * (u + v)).cos() / (2.0 * d * (c * delta).cosh())
}

/// Leading part of K_{S,S}.
pub fn kernel_lss_approx(model: &EquidistantModel) -> Result<KernelHandle> {
    if !model.is_ss() || model.boundary != Boundary::Free {
        return domain("theta kernel needs the free (S,S) model with T = S");
    }
    let (a, delta, d) = (model.a, model.delta, model.d());
    Ok(KernelHandle::new(
        format!("LSS-approx(a={a}, d={d}, offset={delta})"),
        KernelDomain::WholeLine,
        Representation::Approximate,
        true,
        FarField::Exponential { rate: PI / (a * d), scale: 1.0 / (a * a) },
        move |u, v| lss_approx_unit((u - delta) / a, (v - delta) / a, d) / a,
    ))
}

/// Which equidistant family an averaged pair product refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Ls,
    Lss,
}

/// Offset-averaged pair product (1/a)∫₀^a K(x−Δ,y−Δ)K(y−Δ,x−Δ)dΔ of the
/// leading kernels, as a function of x − y.
pub fn averaged_pair_product(model: &EquidistantModel, which: PairKind) -> Result<Box<dyn Fn(f64, f64) -> f64 + Send + Sync>> {
    let (a, d) = (model.a, model.d());
    match which {
        PairKind::Ls => {
            check_free_infinite(model)?;
            Ok(Box::new(move |x, y| averaged_ls(x - y, a, d)))
        }
        PairKind::Lss => {
            if !model.is_ss() {
                return domain("LSS pair product needs the (S,S) model");
            }
            Ok(Box::new(move |x, y| averaged_lss(x - y, a, d)))
        }
    }
}

/// sin²(πr/a)/(π²r²) + (d² − (r/a)²)/(2π²a²(d² + (r/a)²)²).
pub(crate) fn averaged_ls(r: f64, a: f64, d: f64) -> f64 {
    let s = r / a;
    let sc = sinc(PI * s) / a;
    let den = d * d + s * s;
    sc * sc + (d * d - s * s) / (2.0 * PI * PI * a * a * den * den)
}

/// sin²(πr/a)/(4a²d² sinh²(πr/2ad)) + 1/(8a²d² cosh²(πr/2ad)).
pub(crate) fn averaged_lss(r: f64, a: f64, d: f64) -> f64 {
    let s = r / a;
    let c = PI / (2.0 * d);
    let first = sinc(PI * s) / sinhc(c * s) / a;
    let ch = (c * s).cosh();
    first * first + 1.0 / (8.0 * a * a * d * d * ch * ch)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_of_approximation() {
        for &x in &[0.0, 0.21, 0.77] {
            let d = 1.7;
            let v = ls_approx_unit(x, x, d);
            assert!((v - (1.0 + (2.0 * PI * x).cos() / (PI * d))).abs() < 1e-14);
            let w = lss_approx_unit(x, x, d);
            assert!((w - (1.0 + (2.0 * PI * x).cos() / (2.0 * d))).abs() < 1e-14);
        }
    }

    #[test]
    fn averaged_forms_on_diagonal() {
        let (a, d) = (1.3, 2.0);
        assert!((averaged_ls(0.0, a, d) - (1.0 / (a * a) + 1.0 / (2.0 * PI * PI * a * a * d * d))).abs() < 1e-14);
    }

    #[test]
    fn model_checks() {
        let m = EquidistantModel::ss_with_d(1.0, 2.0).unwrap();
        assert!(kernel_ls(&m, 1e-15).is_err());
        let f = EquidistantModel::with_d(1.0, 2.0).unwrap();
        assert!(kernel_lss(&f, 1e-15).is_err());
        assert!(kernel_ls(&f, 0.0).is_err());
    }
}
