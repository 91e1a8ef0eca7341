use num_complex::Complex64 as C64;

use crate::error::{config, Result};
use crate::quad::GaussLegendre;

const ENVELOPE_CUTOFF: f64 = 1e-18;
const MAX_LINE_NODES: usize = 400_000;

/// ∫ f(w) dw along w = L + it, t ∈ ℝ. `f` returns the integrand value and an
/// envelope (a bound on the magnitude of everything summed into it).
pub(crate) fn line_trapezoid(
    l: f64,
    h: f64,
    trunc: Option<f64>,
    min_extent: f64,
    mut f: impl FnMut(C64) -> (C64, f64),
) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    let mut peak = 0.0f64;
    let mut quiet = 0;
    let fixed = trunc.map(|t| (t / h).ceil() as usize);
    for j in 0..MAX_LINE_NODES {
        let t = (j as f64 + 0.5) * h;
        if let Some(n) = fixed {
            if j >= n {
                break;
            }
        }
        let (up, eu) = f(C64::new(l, t));
        let (down, ed) = f(C64::new(l, -t));
        sum += up + down;
        let env = eu + ed;
        peak = peak.max(env);
        if fixed.is_none() {
            if env <= ENVELOPE_CUTOFF * peak && t > min_extent {
                quiet += 1;
                if quiet >= 4 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
    }
    sum * C64::new(0.0, h)
}

/// A branch of log Π(x − x_j), multiplied in chunks to limit the logs taken.
pub(crate) fn log_prod(x: C64, xs: &[f64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for chunk in xs.chunks(8) {
        let mut p = C64::new(1.0, 0.0);
        for &xj in chunk {
            p *= x - xj;
        }
        acc += p.ln();
    }
    acc
}

/// Barycentric data for Lagrange bases on real nodes x₁ < … < x_N:
/// ℓ_k(x) = P(x)·β_k/(x − x_k), P(x) = Π(x − x_j), β_k = 1/Π_{j≠k}(x_k − x_j).
pub(crate) struct Lagrange {
    xs: Vec<f64>,
    log_beta: Vec<f64>,
    sign: Vec<f64>,
}

impl Lagrange {
    pub(crate) fn new(xs: Vec<f64>) -> Self {
        let n = xs.len();
        let mut log_beta = vec![0.0; n];
        let mut sign = vec![1.0; n];
        for k in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                if j != k {
                    s -= (xs[k] - xs[j]).abs().ln();
                }
            }
            log_beta[k] = s;
            // x_k − x_j < 0 for the N − 1 − k nodes above x_k
            if (n - 1 - k) % 2 == 1 {
                sign[k] = -1.0;
            }
        }
        Lagrange { xs, log_beta, sign }
    }

    pub(crate) fn len(&self) -> usize {
        self.xs.len()
    }

    /// A branch of log P(x).
    pub(crate) fn log_p(&self, x: C64) -> C64 {
        log_prod(x, &self.xs)
    }

    /// e^g·Σ_k σ_k e^{c_k} ℓ_k(x) with log-coefficients c_k and signs σ_k.
    /// Coefficients equal to −∞ are skipped. Returns (sum, Σ|terms|).
    pub(crate) fn combine(&self, x: C64, g: C64, log_c: &[f64], sign_c: &[f64]) -> (C64, f64) {
        let base = g + self.log_p(x);
        let mut sum = C64::new(0.0, 0.0);
        let mut env = 0.0;
        for k in 0..self.xs.len() {
            if log_c[k] == f64::NEG_INFINITY {
                continue;
            }
            let e = base - (x - self.xs[k]).ln() + (self.log_beta[k] + log_c[k]);
            if e.re < -745.0 {
                continue;
            }
            let term = e.exp() * (self.sign[k] * sign_c[k]);
            env += term.norm();
            sum += term;
        }
        (sum, env)
    }
}

/// Gauss–Legendre nodes (z, dz·weight) on the counterclockwise boundary of
/// [x0, x1] × [−m, m], with panels no wider than `panel`.
pub(crate) fn rectangle_nodes(x0: f64, x1: f64, m: f64, panel: f64, order: usize) -> Vec<(C64, C64)> {
    let rule = GaussLegendre::cached(order);
    let corners = [
        C64::new(x0, -m),
        C64::new(x1, -m),
        C64::new(x1, m),
        C64::new(x0, m),
    ];
    let mut out = Vec::new();
    for i in 0..4 {
        let (p, q) = (corners[i], corners[(i + 1) % 4]);
        let len = (q - p).norm();
        let panels = ((len / panel).ceil() as usize).max(1);
        let dir = (q - p) / len;
        let h = len / panels as f64;
        for k in 0..panels {
            for (s, w) in rule.mapped(k as f64 * h, (k + 1) as f64 * h) {
                out.push((p + dir * s, dir * w));
            }
        }
    }
    out
}

/// Placement of Γ_L between groups of real poles for a double contour
/// integral: the poles left and right of L are enclosed by separate
/// rectangles of half-height `margin`.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub l: f64,
    /// x-ranges of the rectangles.
    pub boxes: Vec<(f64, f64)>,
    /// Distance from Γ_L to the nearest rectangle.
    pub gap: f64,
}

/// Chooses L near `saddle` unless fixed, with rectangles of margin `margin`
/// around the pole groups on either side.
pub(crate) fn layout(poles: &[f64], saddle: f64, fixed: Option<f64>, margin: f64, min_gap: f64) -> Result<Layout> {
    let n = poles.len();
    let l = match fixed {
        Some(l) => l,
        None => {
            let mut candidates = vec![poles[0] - 2.0 * margin, poles[n - 1] + 2.0 * margin];
            candidates.extend(poles.windows(2).map(|w| 0.5 * (w[0] + w[1])));
            candidates
                .into_iter()
                .min_by(|a, b| (a - saddle).abs().total_cmp(&(b - saddle).abs()))
                .unwrap_or(saddle)
        }
    };
    let left: Vec<f64> = poles.iter().copied().filter(|&p| p < l).collect();
    let right: Vec<f64> = poles.iter().copied().filter(|&p| p >= l).collect();
    let mut boxes = Vec::new();
    let mut gap = f64::INFINITY;
    if let (Some(&lo), Some(&hi)) = (left.first(), left.last()) {
        boxes.push((lo - margin, hi + margin));
        gap = gap.min(l - (hi + margin));
    }
    if let (Some(&lo), Some(&hi)) = (right.first(), right.last()) {
        boxes.push((lo - margin, hi + margin));
        gap = gap.min((lo - margin) - l);
    }
    if !(gap >= min_gap) {
        return config(format!(
            "contour Γ_L at L = {l} passes within {gap:.3e} of the pole rectangles (minimum {min_gap:.3e})"
        ));
    }
    Ok(Layout { l, boxes, gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_encloses_pole() {
        let nodes = rectangle_nodes(-1.0, 2.0, 0.5, 0.25, 16);
        let s: C64 = nodes.iter().map(|(z, dz)| dz / (z - 0.3)).sum();
        assert!((s - C64::new(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-13);
        let s: C64 = nodes.iter().map(|(z, dz)| dz / (z - 3.0)).sum();
        assert!(s.norm() < 1e-12);
    }

    #[test]
    fn lagrange_partition_of_unity() {
        let lg = Lagrange::new(vec![-2.0, -0.5, 1.0, 3.0]);
        let x = C64::new(0.7, 0.4);
        let (s, _) = lg.combine(x, C64::new(0.0, 0.0), &[0.0; 4], &[1.0; 4]);
        assert!((s - 1.0).norm() < 1e-13);
    }

    #[test]
    fn gaussian_line_integral() {
        // ∫ e^{(w−1)²/2} dw over Γ_L equals i√(2π)
        let v = line_trapezoid(0.3, 0.2, None, 1.0, |w| {
            let e = ((w - 1.0) * (w - 1.0) / 2.0).exp();
            (e, e.norm())
        });
        assert!((v - C64::new(0.0, (2.0 * std::f64::consts::PI).sqrt())).norm() < 1e-13);
    }
}
