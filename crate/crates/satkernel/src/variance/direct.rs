use std::f64::consts::PI;

use rayon::prelude::*;

use super::{VarianceMethod, VarianceReport};
use crate::error::{domain, Result};
use crate::kernels::{FarField, KernelDomain, KernelHandle};
use crate::quad::composite_nodes;

/// Quadrature settings for [`variance_direct`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectOptions {
    /// Length of each complement window beyond the interval.
    pub cutoff: f64,
    /// Gauss–Legendre order per panel; the error estimate reruns at order + 8.
    pub order: usize,
    /// Panel width; by default half the local mean spacing 1/K(x,x).
    pub panel: Option<f64>,
    /// Fraction of each window over which the integrand is tapered to zero.
    pub taper: f64,
}

impl DirectOptions {
    pub fn new(cutoff: f64) -> Self {
        DirectOptions { cutoff, order: 16, panel: None, taper: 0.2 }
    }
}

/// Var(#[R, R+L]) = ∫_I dx ∫_{I^c} dy K(x,y)K(y,x) for a reproducing kernel.
///
/// The complement is cut at distance `cutoff` from the interval. The last
/// part of each window carries a raised-cosine taper, which averages away the
/// oscillating 1/(x−y)² tails; a non-oscillating 1/(x−y)² mean declared in
/// the kernel's far field is added back in closed form.
pub fn variance_direct(k: &KernelHandle, r: f64, l: f64, cutoff: f64) -> Result<VarianceReport> {
    variance_direct_with(k, r, l, &DirectOptions::new(cutoff))
}

pub fn variance_direct_with(k: &KernelHandle, r: f64, l: f64, opts: &DirectOptions) -> Result<VarianceReport> {
    if !(l > 0.0 && l.is_finite()) {
        return domain(format!("interval length must be positive, got {l}"));
    }
    if !(opts.cutoff > 0.0 && opts.cutoff.is_finite()) {
        return domain(format!("cutoff must be positive, got {}", opts.cutoff));
    }
    if !(0.0..1.0).contains(&opts.taper) || opts.order < 2 {
        return domain("taper must lie in [0, 1) and the order be at least 2");
    }
    if k.domain == KernelDomain::HalfLine && r < 0.0 {
        return domain(format!("half-line kernel needs R >= 0, got {r}"));
    }
    let mid = r + 0.5 * l;
    let density = k.evaluate(mid, mid);
    let scale = if density.is_finite() && density > 0.0 { 1.0 / density } else { l };
    let width = opts.panel.unwrap_or(0.5 * scale).min(l);

    let coarse = integrate(k, r, l, opts, width, opts.order);
    let fine = integrate(k, r, l, opts, width, opts.order + 8);
    let quad_err = (fine - coarse).abs();

    let c = opts.cutoff;
    let tail = match k.far_field {
        // the taper leaves the non-oscillating cubic part of the decay
        FarField::InverseSquare { remainder, .. } => 2.0 * remainder * scale * scale / (c * c),
        FarField::Exponential { rate, scale: amp } => 2.0 * amp * (-rate * c).exp() / (rate * rate),
        FarField::Unknown => f64::NAN,
    };
    let warning = if tail.is_nan() {
        Some("kernel decay unknown; no tail bound".to_string())
    } else if tail > 0.1 * fine.abs() {
        Some(format!("cutoff {c} too small: tail bound {tail:.3e} exceeds 10% of the value"))
    } else {
        None
    };
    let err = quad_err + if tail.is_nan() { 0.0 } else { tail };
    Ok(VarianceReport { r, l, value: fine, method: VarianceMethod::Direct, err_estimate: err, warning })
}

/// Complement window starting at the interval edge `edge` and running
/// outward in direction `dir`, as (y, weight·taper, weight·(1 − taper)).
fn window(edge: f64, dir: f64, len: f64, taper: f64, width: f64, order: usize) -> Vec<(f64, f64, f64)> {
    let plain = len * (1.0 - taper);
    let mut out: Vec<(f64, f64, f64)> =
        composite_nodes(0.0, plain, width, order).into_iter().map(|(t, w)| (edge + dir * t, w, 0.0)).collect();
    if taper > 0.0 {
        let tl = len - plain;
        for (t, w) in composite_nodes(plain, len, width, order) {
            let s = 0.5 * (1.0 + (PI * (t - plain) / tl).cos());
            out.push((edge + dir * t, w * s, w * (1.0 - s)));
        }
    }
    out
}

fn integrate(k: &KernelHandle, r: f64, l: f64, opts: &DirectOptions, width: f64, order: usize) -> f64 {
    let c = opts.cutoff;
    let right = window(r + l, 1.0, c, opts.taper, width, order);
    let left_len = if k.domain == KernelDomain::HalfLine { c.min(r) } else { c };
    // a window cut short by the origin is not tapered
    let left_taper = if left_len < c { 0.0 } else { opts.taper };
    let left = if left_len > 0.0 { window(r, -1.0, left_len, left_taper, width, order) } else { Vec::new() };
    let mean = match k.far_field {
        FarField::InverseSquare { coeff, .. } => coeff,
        _ => 0.0,
    };
    let xs = composite_nodes(r, r + l, width, order);
    let rows: Vec<f64> = xs
        .par_iter()
        .map(|&(x, wx)| {
            let mut inner = 0.0;
            for &(y, w, rest) in right.iter().chain(&left) {
                inner += w * k.pair(x, y);
                if mean != 0.0 {
                    inner += rest * mean / ((y - x) * (y - x));
                }
            }
            if mean != 0.0 {
                // ∫ mean/(y−x)² over the parts beyond each window
                inner += mean / (r + l + c - x);
                if left_taper > 0.0 {
                    inner += mean / (x - r + c);
                }
            }
            wx * inner
        })
        .collect();
    rows.iter().sum()
}
