use std::f64::consts::PI;
use std::sync::Arc;

use super::{FarField, KernelDomain, KernelHandle, Representation};
use crate::error::{domain, Result};
use crate::specfun::j_any;

/// Removable-singularity threshold for the sinc-type ratios, in units of the
/// natural length.
pub(crate) const TAYLOR_THRESHOLD: f64 = 1e-4;

/// sin(t)/t.
#[inline]
pub fn sinc(t: f64) -> f64 {
    if t.abs() < TAYLOR_THRESHOLD {
        let t2 = t * t;
        1.0 - t2 / 6.0 * (1.0 - t2 / 20.0)
    } else {
        t.sin() / t
    }
}

/// sinh(t)/t.
#[inline]
pub(crate) fn sinhc(t: f64) -> f64 {
    if t.abs() < TAYLOR_THRESHOLD {
        let t2 = t * t;
        1.0 + t2 / 6.0 * (1.0 + t2 / 20.0)
    } else {
        t.sinh() / t
    }
}

/// Sine kernel sin(π(x−y)/a)/(π(x−y)) with density 1/a.
pub fn sine_kernel(a: f64) -> Result<KernelHandle> {
    if !(a > 0.0) {
        return domain(format!("spacing must be positive, got {a}"));
    }
    Ok(KernelHandle::new(
        format!("sine(a={a})"),
        KernelDomain::WholeLine,
        Representation::Series,
        true,
        FarField::InverseSquare { coeff: 1.0 / (2.0 * PI * PI), remainder: 1.0 / (2.0 * PI * PI) },
        move |x, y| sinc(PI * (x - y) / a) / a,
    ))
}

/// Boundary mode for [`boundary_combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    Absorbing,
    Reflecting,
}

/// K(u,v) = base(u,v) ∓ base(−u,v) on [0, ∞).
pub fn boundary_combine(base: &KernelHandle, mode: BoundaryMode) -> Result<KernelHandle> {
    let absorbing = mode == BoundaryMode::Absorbing;
    if base.domain != KernelDomain::WholeLine {
        return domain("boundary combination needs a kernel on the whole line");
    }
    let sign = if absorbing { -1.0 } else { 1.0 };
    let b = base.clone();
    let label = format!("{}({})", if absorbing { "absorbing" } else { "reflecting" }, base.label);
    Ok(KernelHandle::new(
        label,
        KernelDomain::HalfLine,
        Representation::Composite,
        false,
        base.far_field,
        move |u, v| b.evaluate(u, v) + sign * b.evaluate(-u, v),
    ))
}

fn check_nu(nu: f64) -> Result<()> {
    let ok = [-0.5, 0.5, 0.0, 1.0, 2.0].contains(&nu);
    if ok {
        Ok(())
    } else {
        domain(format!("Bessel kernel order {nu} not in {{-1/2, 1/2, 0, 1, 2}}"))
    }
}

/// Bessel kernel
/// B_ν(x,y) = [√x J_{ν+1}(√x) J_ν(√y) − J_ν(√x) √y J_{ν+1}(√y)] / (2(x−y)),
/// with the confluent value ¼[J_ν(√x)² − J_{ν+1}(√x) J_{ν−1}(√x)] on the diagonal.
pub fn bessel_kernel(nu: f64, x: f64, y: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(x > 0.0 && y > 0.0) {
        return domain(format!("Bessel kernel needs x, y > 0, got ({x}, {y})"));
    }
    Ok(bessel_unchecked(nu, x, y))
}

fn bessel_unchecked(nu: f64, x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if (x - y).abs() < 1e-6 * scale {
        // B is symmetric, so the midpoint diagonal value is second-order accurate
        let m = 0.5 * (x + y);
        let s = m.sqrt();
        let jn = j_any(nu, s);
        return 0.25 * (jn * jn - j_any(nu + 1.0, s) * j_any(nu - 1.0, s));
    }
    let (sx, sy) = (x.sqrt(), y.sqrt());
    let num = sx * j_any(nu + 1.0, sx) * j_any(nu, sy) - j_any(nu, sx) * sy * j_any(nu + 1.0, sy);
    num / (2.0 * (x - y))
}

/// Rescaled Bessel kernel B̃_ν(x,y) = √(2π²x·2π²y)·B_ν(π²x², π²y²).
pub fn rescaled_bessel(nu: f64, x: f64, y: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(x > 0.0 && y > 0.0) {
        return domain(format!("rescaled Bessel kernel needs x, y > 0, got ({x}, {y})"));
    }
    Ok(2.0 * PI * PI * (x * y).sqrt() * bessel_unchecked(nu, PI * PI * x * x, PI * PI * y * y))
}

/// K̃(x,y) = base(G(x), G(y))·√(G′(x)G′(y)). G′ is checked on `probe`.
pub fn rescale(
    base: &KernelHandle,
    g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    g_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
    probe: &[f64],
) -> Result<KernelHandle> {
    if let Some(&x) = probe.iter().find(|&&x| !(g_prime(x) > 0.0)) {
        return domain(format!("rescaling map has nonpositive derivative at x = {x}"));
    }
    let b = base.clone();
    let g = Arc::new(g);
    let gp = Arc::new(g_prime);
    Ok(KernelHandle::new(
        format!("rescaled({})", base.label),
        base.domain,
        Representation::Composite,
        base.symmetric,
        FarField::Unknown,
        move |x, y| b.evaluate(g(x), g(y)) * (gp(x) * gp(y)).sqrt(),
    ))
}
