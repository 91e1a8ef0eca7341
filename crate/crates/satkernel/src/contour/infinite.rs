use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::ContourSpec;
use crate::error::{config, domain, numerical, Result};
use crate::quad::composite_nodes;
use crate::specfun::{EvenProduct, PointSequence, Tail};

const GL_ORDER: usize = 16;
/// Gaussian cut: e^{−x²/2S} is dropped beyond x² = 90S.
const GAUSS_CUT: f64 = 90.0;

/// ∫ e^{(w−v)²/2S − (w−u)²/2S} dw/(2πiS) over the segment w = L + it,
/// |t| ≤ M.
pub fn segment_term(u: f64, v: f64, l: f64, m: f64, s: f64) -> f64 {
    let d = u - v;
    if d == 0.0 {
        return m / (PI * s);
    }
    (d * (2.0 * l - u - v) / (2.0 * s)).exp() * (m * d / s).sin() / (PI * d)
}

/// z-quadrature on the two horizontal lines Im z = ±m, restricted to bands
/// of real parts.
struct Lines {
    /// sorted real parts
    x: Vec<f64>,
    /// (z, dz, −ln z − ln F(z)) on the lower and upper line
    lower: Vec<(C64, C64, C64)>,
    upper: Vec<(C64, C64, C64)>,
}

impl Lines {
    fn new(bands: &[(f64, f64)], m: f64, width: f64, f: &EvenProduct) -> Self {
        let nodes: Vec<(f64, f64)> = bands
            .iter()
            .flat_map(|&(a, b)| composite_nodes(a, b, width, GL_ORDER))
            .collect();
        let side = |im: f64, dir: f64| -> Vec<(C64, C64, C64)> {
            nodes
                .iter()
                .map(|&(x, wt)| {
                    let z = C64::new(x, im);
                    (z, C64::new(dir * wt, 0.0), -z.ln() - f.ln(z))
                })
                .collect()
        };
        Lines {
            x: nodes.iter().map(|n| n.0).collect(),
            // counterclockwise around the strip
            lower: side(-m, 1.0),
            upper: side(m, -1.0),
        }
    }

    /// Nodes with |Re z − u| ≤ r, with the Gaussian folded into the weight:
    /// (z, dz·e^{−(z−u)²/2S − ln z − ln F(z) − shift}) and the shift.
    fn weighted(&self, u: f64, r: f64, s: f64) -> (Vec<(C64, C64)>, f64) {
        let lo = self.x.partition_point(|&x| x < u - r);
        let hi = self.x.partition_point(|&x| x <= u + r);
        let logs: Vec<(C64, C64, C64)> = self.lower[lo..hi]
            .iter()
            .chain(&self.upper[lo..hi])
            .map(|&(z, dz, lf)| (z, dz, lf - (z - u) * (z - u) / (2.0 * s)))
            .collect();
        let shift = logs.iter().map(|t| t.2.re).fold(f64::NEG_INFINITY, f64::max);
        (logs.into_iter().map(|(z, dz, l)| (z, dz * (l - shift).exp())).collect(), shift)
    }
}

/// N = ∞ absorbing kernel on the half line for paths started from an
/// arbitrary sequence 0 < y₁ < y₂ < …, for u, v in a fixed window.
///
/// With F(z) = Π(1 − z²/y_j²) and
/// J_u(w) = ∮_strip e^{−(z−u)²/2S}/(z F(z)(w − z)) dz, the strip contour
/// excluding z = w,
///
/// K(u, v) = K*(u, v) − K*(−u, v), K*(u, v) = 1/((2πi)²S) ∫_{Γ_L} e^{(w−v)²/2S} w F(w) J_u(w) dw.
///
/// The strip has height M₀ where |Im w| ≥ 2M₀ and 3M₀ elsewhere; in the
/// latter part z = w lies inside and its residue is removed in closed form.
pub struct InfiniteAbsorbing {
    s: f64,
    window: (f64, f64),
    l: f64,
    m0: f64,
    reach: f64,
    near: Lines,
    far: Lines,
    /// (w, dw, ln w + ln F(w)) on |t| < 2M₀ and |t| ≥ 2M₀
    w_near: Vec<(C64, C64, C64)>,
    w_far: Vec<(C64, C64, C64)>,
}

impl InfiniteAbsorbing {
    pub fn new(seq: &PointSequence, s: f64, window: (f64, f64), spec: &ContourSpec) -> Result<Self> {
        spec.validate()?;
        let (lo, hi) = window;
        if !(s > 0.0) {
            return config(format!("time must be positive, got S = {s}"));
        }
        if !(0.0 <= lo && lo <= hi && hi.is_finite()) {
            return config(format!("window [{lo}, {hi}] must satisfy 0 ≤ lo ≤ hi"));
        }
        if let Tail::PowerLaw { power, .. } = seq.tail() {
            if *power >= 2.0 {
                return config(format!("tail power {power} ≥ 2: Σ y_j⁻² diverges"));
            }
        }
        let y = seq.values();
        let l = 0.5 * (lo + hi);
        // spacing of the points near the window
        let i = y.partition_point(|&x| x < l).min(y.len().saturating_sub(2));
        let lambda = if y.len() >= 2 {
            let a = i.saturating_sub(2);
            let b = (i + 2).min(y.len() - 1);
            if b > a {
                (y[b] - y[a]) / (b - a) as f64
            } else {
                y[0]
            }
        } else {
            y[0]
        };
        let m_opt = PI * s / lambda;
        let m0 = spec.m.unwrap_or(m_opt / 3.0);
        let reach = 1.1 * (GAUSS_CUT * s).sqrt();
        let t_max = spec
            .trunc
            .unwrap_or(1.2 * (m_opt + (m_opt * m_opt + GAUSS_CUT * s).sqrt()))
            .max(2.0 * m0 * 1.01);

        let f = EvenProduct::new(seq);
        let zmax = (hi + reach).hypot(3.0 * m0);
        let wmax = l.hypot(t_max);
        if zmax.max(wmax) > f.radius() {
            return config(format!(
                "contours reach |z| = {:.3}, beyond the product's accurate radius {:.3}; supply more initial points",
                zmax.max(wmax),
                f.radius()
            ));
        }

        let mut bands = vec![(-hi - reach, -lo + reach), (lo - reach, hi + reach)];
        if bands[0].1 >= bands[1].0 {
            bands = vec![(bands[0].0, bands[1].1)];
        }
        let width = (0.5 * m0).min(0.5 * s.sqrt()) * 8.0 / spec.nodes_per_unit as f64;
        let near = Lines::new(&bands, 3.0 * m0, width, &f);
        let far = Lines::new(&bands, m0, width, &f);

        let w_nodes = |a: f64, b: f64| -> Vec<(C64, C64, C64)> {
            composite_nodes(a, b, width, GL_ORDER)
                .into_iter()
                .flat_map(|(t, wt)| [(t, wt), (-t, wt)])
                .map(|(t, wt)| {
                    let w = C64::new(l, t);
                    (w, C64::new(0.0, wt), w.ln() + f.ln(w))
                })
                .collect()
        };
        let w_near = w_nodes(0.0, 2.0 * m0);
        let w_far = w_nodes(2.0 * m0, t_max);
        Ok(InfiniteAbsorbing { s, window, l, m0, reach, near, far, w_near, w_far })
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    /// K*(u, v) without the removed residue.
    fn k_star(&self, u: f64, v: f64) -> C64 {
        let s = self.s;
        let mut total = C64::new(0.0, 0.0);
        for (lines, ws) in [(&self.near, &self.w_near), (&self.far, &self.w_far)] {
            let (zs, shift) = lines.weighted(u, self.reach, s);
            for &(w, dw, lf) in ws {
                let mut inner = C64::new(0.0, 0.0);
                for &(z, b) in &zs {
                    inner += b / (w - z);
                }
                total += dw * inner * ((w - v) * (w - v) / (2.0 * s) + lf + shift).exp();
            }
        }
        total / C64::new(-4.0 * PI * PI * s, 0.0)
    }

    pub fn evaluate(&self, u: f64, v: f64) -> Result<f64> {
        if u < 0.0 || v < 0.0 {
            return domain(format!("half-line kernel evaluated at ({u}, {v})"));
        }
        let k = self.k_star(u, v) - self.k_star(-u, v);
        // residue at z = w over |t| < 2M₀, where w lies inside the tall strip
        let seg = segment_term(u, v, self.l, 2.0 * self.m0, self.s) - segment_term(-u, v, self.l, 2.0 * self.m0, self.s);
        let val = k + seg;
        if !(val.re.is_finite() && val.im.is_finite()) {
            return numerical("infinite absorbing kernel: non-finite value", f64::INFINITY);
        }
        if val.im.abs() > 1e-8 * val.re.abs().max(1.0) {
            return numerical("infinite absorbing kernel: imaginary part does not cancel", val.im.abs());
        }
        Ok(val.re)
    }
}

/// One-shot evaluation of the infinite absorbing kernel at (u, v).
pub fn kernel_infinite_absorbing(seq: &PointSequence, s: f64, spec: &ContourSpec, u: f64, v: f64) -> Result<f64> {
    let lo = u.min(v);
    let hi = u.max(v);
    InfiniteAbsorbing::new(seq, s, (lo, hi), spec)?.evaluate(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;

    #[test]
    fn segment_term_matches_quadrature() {
        let (l, m, s) = (0.7, 1.3, 0.9);
        for &(u, v) in &[(0.4, 1.1), (-0.5, 0.2), (0.3, 0.3)] {
            let rule = GaussLegendre::new(40);
            let re = rule.integrate(-m, m, |t| {
                let w = C64::new(l, t);
                let e = ((w - v) * (w - v) / (2.0 * s) - (w - u) * (w - u) / (2.0 * s)).exp();
                // dw/(2πiS) = dt/(2πS)
                (e / (2.0 * PI * s)).re
            });
            assert!((re - segment_term(u, v, l, m, s)).abs() < 1e-13, "{re}");
        }
    }
}
