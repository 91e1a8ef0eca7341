use std::f64::consts::PI;

use serde::Serialize;

use super::config::{GeneralConfiguration, IndexData};
use crate::contour::{ContourSpec, InfiniteAbsorbing};
use crate::error::{domain, precondition, Result};
use crate::kernels::{kernel_ls, sinc, Boundary, EquidistantModel};

/// Default number of explicit terms in ξ_m.
pub const XI_TAIL: u64 = 10_000;

/// Result of searching for m(α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Located {
    pub data: IndexData,
    /// |ζ_m − α| ≤ λ_m
    pub within_bracket: bool,
}

/// m minimizing |ζ_m − α|, ties toward smaller m.
///
/// ζ_m = α means y_m = α + ξ_m·S, so m is iterated as round(F(α + ξ_m·S))
/// until it repeats, then the neighbours m ± 3 are scanned.
pub fn locate_m(cfg: &GeneralConfiguration, alpha: f64, s: f64, tail_len: u64) -> Result<Located> {
    if !(alpha > 0.0 && s > 0.0) {
        return domain(format!("locate_m needs α > 0 and S > 0, got α = {alpha}, S = {s}"));
    }
    let f = cfg.source();
    let index = |x: f64| (f.value(x).round() as u64).max(1);
    let mut m = index(alpha);
    for _ in 0..20 {
        let d = cfg.index_data(m, s, tail_len)?;
        let next = index(alpha + d.xi * s);
        if next == m {
            break;
        }
        m = next;
    }
    let lo = m.saturating_sub(3).max(1);
    let mut best: Option<IndexData> = None;
    for k in lo..=m + 3 {
        let d = cfg.index_data(k, s, tail_len)?;
        if best.is_none_or(|b| (d.zeta - alpha).abs() < (b.zeta - alpha).abs()) {
            best = Some(d);
        }
    }
    let data = best.expect("scan is nonempty");
    Ok(Located { data, within_bracket: (data.zeta - alpha).abs() <= data.lambda })
}

/// Local equidistant model at height α: spacing λ(α), same S, absorbing
/// boundary, together with the gauge rate ξ(α) and the shift ζ(α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Surrogate {
    pub model: EquidistantModel,
    pub located: Located,
    /// e^{−xi·(u−v)} multiplies the exact kernel in the comparison
    pub xi: f64,
    pub zeta: f64,
    pub lambda: f64,
    pub eta: f64,
    pub m: u64,
}

pub fn surrogate_model(cfg: &GeneralConfiguration, alpha: f64, s: f64) -> Result<Surrogate> {
    let located = locate_m(cfg, alpha, s, XI_TAIL)?;
    let d = located.data;
    let model = EquidistantModel::free(d.lambda, s)?.with_boundary(Boundary::Absorbing);
    Ok(Surrogate { model, located, xi: d.xi, zeta: d.zeta, lambda: d.lambda, eta: d.eta, m: d.m })
}

/// T₀(α) = min(1/(4√η(α)), m(α)^{(1+δ)²/2(1−δ)}).
pub fn t0(sur: &Surrogate, delta: f64) -> f64 {
    let first = 1.0 / (4.0 * sur.eta.sqrt());
    let second = (sur.m as f64).powf((1.0 + delta).powi(2) / (2.0 * (1.0 - delta)));
    first.min(second)
}

/// Error between the gauge-transformed exact kernel at height α and the
/// lattice kernel of the surrogate.
#[derive(Debug, Clone, Serialize)]
pub struct HeightComparison {
    pub alpha: f64,
    pub s: f64,
    pub t: f64,
    pub m: u64,
    pub lambda: f64,
    pub xi: f64,
    pub zeta: f64,
    pub d: f64,
    pub within_bracket: bool,
    /// S ≥ F′(F(α)) read literally, and S ≥ F′(F⁻¹(α)); S ≤ 1 in both
    pub s_range_forward: bool,
    pub s_range_inverse: bool,
    /// (u, v, lhs)
    pub points: Vec<(f64, f64, f64)>,
    pub max_lhs: f64,
    /// λS^{−3/2}e^{−R²/8S} + (T² + R²)m^{−(1−δ)²/(1+δ)}/S with R² at the low
    /// end of its admissible range, c₀ = 1, ε = 0.01
    pub bound_shape: f64,
    /// max_lhs / bound_shape
    pub fitted_c: f64,
}

fn exact_kernel(cfg: &GeneralConfiguration, s: f64, window: (f64, f64)) -> Result<InfiniteAbsorbing> {
    InfiniteAbsorbing::new(&cfg.point_sequence()?, s, window, &ContourSpec::default())
}

/// |e^{−ξ(α)(u−v)}K^{ab}(y; u, v) − K(ỹ; u − ζ(α), v − ζ(α))| on `grid`,
/// where K(ỹ) is the lattice kernel with spacing λ(α) in the bulk.
pub fn compare_at_height(
    cfg: &GeneralConfiguration,
    alpha: f64,
    s: f64,
    t: f64,
    grid: &[(f64, f64)],
) -> Result<HeightComparison> {
    let sur = surrogate_model(cfg, alpha, s)?;
    let delta = cfg.source().delta();
    let t_max = t0(&sur, delta);
    if !(t > 0.0 && t <= t_max) {
        return precondition(format!("window half-width T = {t} outside (0, T₀ = {t_max:.4}]"));
    }
    let (lo, hi) = (alpha - t, alpha + t);
    if let Some(&(u, v)) = grid.iter().find(|&&(u, v)| !(lo..=hi).contains(&u) || !(lo..=hi).contains(&v)) {
        return domain(format!("grid point ({u}, {v}) outside [α − T, α + T]"));
    }
    let exact = exact_kernel(cfg, s, (lo, hi))?;
    let lattice = kernel_ls(&EquidistantModel::free(sur.lambda, s)?, 1e-15)?;
    let mut points = Vec::with_capacity(grid.len());
    for &(u, v) in grid {
        let k = (-sur.xi * (u - v)).exp() * exact.evaluate(u, v)?;
        let r = lattice.evaluate(u - sur.zeta, v - sur.zeta);
        points.push((u, v, (k - r).abs()));
    }
    let max_lhs = points.iter().map(|p| p.2).fold(0.0, f64::max);

    let eps = 0.01;
    let m = sur.m as f64;
    let r2 = [
        (s / sur.lambda).powf(2.0 / (1.0 - eps)),
        t.powf(1.0 + delta + eps) * s,
        t.powf(1.0 + eps) * s / sur.lambda,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let decay = m.powf(-(1.0 - delta).powi(2) / (1.0 + delta));
    let bound_shape = sur.lambda * s.powf(-1.5) * (-r2 / (8.0 * s)).exp() + (t * t + r2) * decay / s;

    let f = cfg.source();
    let fp_forward = f.prime(f.value(alpha));
    let fp_inverse = f.prime(super::counting::invert_counting(f, alpha)?);
    Ok(HeightComparison {
        alpha,
        s,
        t,
        m: sur.m,
        lambda: sur.lambda,
        xi: sur.xi,
        zeta: sur.zeta,
        d: sur.model.d(),
        within_bracket: sur.located.within_bracket,
        s_range_forward: s >= fp_forward && s <= 1.0,
        s_range_inverse: s >= fp_inverse && s <= 1.0,
        points,
        max_lhs,
        bound_shape,
        fitted_c: max_lhs / bound_shape,
    })
}

/// sup over the n×n grid on [−h, h]² of
/// |λ·e^{−ξλ(x−y)}K^{ab}(y; α + λx, α + λy) − sin π(x−y)/π(x−y)|.
pub fn local_sine_error(cfg: &GeneralConfiguration, alpha: f64, s: f64, h: f64, n: usize) -> Result<f64> {
    if n < 2 || !(h > 0.0) {
        return domain("local sine grid needs n ≥ 2 and h > 0");
    }
    let sur = surrogate_model(cfg, alpha, s)?;
    let lam = sur.lambda;
    let exact = exact_kernel(cfg, s, (alpha - lam * h, alpha + lam * h))?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = -h + 2.0 * h * i as f64 / (n - 1) as f64;
            let y = -h + 2.0 * h * j as f64 / (n - 1) as f64;
            let k = lam * (-sur.xi * lam * (x - y)).exp() * exact.evaluate(alpha + lam * x, alpha + lam * y)?;
            worst = worst.max((k - sinc(PI * (x - y))).abs());
        }
    }
    Ok(worst)
}
