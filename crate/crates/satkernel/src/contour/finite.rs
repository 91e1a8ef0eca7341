use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::lines::{layout, line_trapezoid, log_prod, rectangle_nodes, Lagrange};
use super::{ContourSpec, FiniteModel};
use crate::error::{config, domain, numerical, Result};
use crate::kernels::{Boundary, EndTime, FarField, KernelDomain, KernelHandle, Representation};

/// Relative size of an imaginary part that is tolerated in a real kernel.
const IMAG_TOL: f64 = 1e-9;
const GL_ORDER: usize = 16;

/// Which of the two equivalent representations to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// Double contour integral.
    Double,
    /// Sum over the poles of single line integrals.
    Residue,
}

fn real_part(z: C64, what: &str) -> Result<f64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return numerical(format!("{what}: non-finite value"), f64::INFINITY);
    }
    if z.im.abs() > IMAG_TOL * z.re.abs().max(1.0) {
        return numerical(format!("{what}: imaginary part does not cancel"), z.im.abs());
    }
    Ok(z.re)
}

fn min_gap(y: &[f64]) -> f64 {
    y.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// Parameters of the free model with finite end time.
#[derive(Debug, Clone, Copy)]
struct StParams {
    s: f64,
    t: f64,
    /// T + S
    c: f64,
    a: f64,
    n: f64,
}

impl StParams {
    fn new(model: &FiniteModel) -> Result<Self> {
        let t = match (model.boundary, model.t) {
            (Boundary::Free, EndTime::Finite(t)) => t,
            _ => return domain("finite-T kernel needs the free model with finite end time"),
        };
        Ok(StParams { s: model.s, t, c: t + model.s, a: model.a, n: ((model.len() - 1) / 2) as f64 })
    }

    /// Gaussian width of the w-integrand.
    fn sigma(&self) -> f64 {
        (self.s * self.c / self.t).sqrt()
    }
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    FiniteT(StParams),
    Free,
    HalfLine { absorbing: bool },
}

impl Kind {
    fn of(model: &FiniteModel) -> Result<Self> {
        Ok(match (model.boundary, model.t) {
            (Boundary::Free, EndTime::Finite(_)) => Kind::FiniteT(StParams::new(model)?),
            (Boundary::Free, EndTime::Infinite) => Kind::Free,
            (Boundary::Absorbing, EndTime::Infinite) => Kind::HalfLine { absorbing: true },
            (Boundary::Reflecting, EndTime::Infinite) => Kind::HalfLine { absorbing: false },
            _ => return domain("half-line kernels need T = infinity"),
        })
    }
}

/// Residue-sum evaluator with the Lagrange data cached.
///
/// Finite T: K = e^{(u²−v²)/2T}/(2πiS) Σ_k e^{−T(y_k−cu/T)²/2Sc} ∫ e^{T(w−cv/T)²/2Sc}
/// e^{na(y_k−w)/c} Π_{j≠k} (e^{aw/c} − e^{ay_j/c})/(e^{ay_k/c} − e^{ay_j/c}) dw, c = T + S.
///
/// T = ∞: K = 1/(2πiS) Σ_k e^{−(y_k−u)²/2S} ∫ e^{(w−v)²/2S} Π_{j≠k} (w − y_j)/(y_k − y_j) dw.
///
/// Half line: the same with the basis in w², coefficients
/// e^{−(y_k−u)²/2S} ∓ e^{−(y_k+u)²/2S} and an extra w/y_k when absorbing.
struct Residue {
    kind: Kind,
    y: Vec<f64>,
    s: f64,
    lag: Lagrange,
    spec: ContourSpec,
}

impl Residue {
    fn new(model: &FiniteModel, spec: &ContourSpec) -> Result<Self> {
        spec.validate()?;
        let kind = Kind::of(model)?;
        let nodes = match kind {
            Kind::FiniteT(p) => model.y.iter().map(|y| (p.a * y / p.c).exp()).collect(),
            Kind::Free => model.y.clone(),
            Kind::HalfLine { .. } => model.y.iter().map(|y| y * y).collect(),
        };
        Ok(Residue { kind, y: model.y.clone(), s: model.s, lag: Lagrange::new(nodes), spec: *spec })
    }

    fn eval(&self, u: f64, v: f64) -> Result<f64> {
        let s = self.s;
        let npu = self.spec.nodes_per_unit as f64;
        let ones = vec![1.0; self.lag.len()];
        let integral = match self.kind {
            Kind::FiniteT(p) => {
                let k = p.a / p.c;
                let saddle = p.c * v / p.t;
                let log_c: Vec<f64> = self
                    .y
                    .iter()
                    .map(|&y| -p.t * (y - p.c * u / p.t).powi(2) / (2.0 * s * p.c) + p.n * k * y)
                    .collect();
                let pre = (u * u - v * v) / (2.0 * p.t);
                let sigma = p.sigma();
                let l = self.spec.l_offset.unwrap_or(saddle);
                line_trapezoid(l, 2.0 * sigma / npu, self.spec.trunc, 3.0 * sigma, |w| {
                    let g = p.t * (w - saddle) * (w - saddle) / (2.0 * s * p.c) - p.n * k * w + pre;
                    self.lag.combine((w * k).exp(), g, &log_c, &ones)
                })
            }
            Kind::Free => {
                let log_c: Vec<f64> = self.y.iter().map(|&y| -(y - u).powi(2) / (2.0 * s)).collect();
                let sigma = s.sqrt();
                let l = self.spec.l_offset.unwrap_or(v);
                line_trapezoid(l, 2.0 * sigma / npu, self.spec.trunc, 3.0 * sigma, |w| {
                    self.lag.combine(w, (w - v) * (w - v) / (2.0 * s), &log_c, &ones)
                })
            }
            Kind::HalfLine { absorbing } => {
                if u < 0.0 || v < 0.0 {
                    return domain(format!("half-line kernel evaluated at ({u}, {v})"));
                }
                let log_c: Vec<f64> = self
                    .y
                    .iter()
                    .map(|&y| {
                        let gauss = -(y - u).powi(2) / (2.0 * s);
                        let mirror = (-2.0 * y * u / s).exp();
                        if absorbing {
                            if u == 0.0 {
                                f64::NEG_INFINITY
                            } else {
                                gauss + (-(-2.0 * y * u / s).exp_m1()).ln() - y.ln()
                            }
                        } else {
                            gauss + mirror.ln_1p()
                        }
                    })
                    .collect();
                if log_c.iter().all(|c| *c == f64::NEG_INFINITY) {
                    return Ok(0.0);
                }
                let sigma = s.sqrt();
                let l = self.spec.l_offset.unwrap_or(v);
                line_trapezoid(l, 2.0 * sigma / npu, self.spec.trunc, 3.0 * sigma, |w| {
                    let mut g = (w - v) * (w - v) / (2.0 * s);
                    if absorbing {
                        g += w.ln();
                    }
                    self.lag.combine(w * w, g, &log_c, &ones)
                })
            }
        };
        real_part(integral / C64::new(0.0, 2.0 * PI * s), "residue-form kernel")
    }
}

/// Residue form of the finite-T free kernel.
pub fn kernel_finite_st_residue(model: &FiniteModel, spec: &ContourSpec, u: f64, v: f64) -> Result<f64> {
    StParams::new(model)?;
    Residue::new(model, spec)?.eval(u, v)
}

/// T = ∞ free kernel as a sum of single line integrals.
pub fn kernel_finite_free(model: &FiniteModel, spec: &ContourSpec, u: f64, v: f64) -> Result<f64> {
    if model.boundary != Boundary::Free || model.t != EndTime::Infinite {
        return domain("free T = infinity kernel needs the free model with T = infinity");
    }
    Residue::new(model, spec)?.eval(u, v)
}

/// Double contour form of the finite-T free kernel,
///
/// K = a e^{(u²−v²)/2T}/((2πi)²Sc) ∫_{Γ_L} dw ∮_γ dz (e^{a(w−z)/c} − 1)⁻¹
/// e^{T[(w−cv/T)² − (z−cu/T)²]/2Sc + an(z−w)/c} Π_j (e^{aw/c} − e^{ay_j/c})/(e^{az/c} − e^{ay_j/c}).
///
/// γ is one rectangle on each side of Γ_L; L defaults to the gap between
/// initial points nearest the saddle cv/T.
pub fn kernel_finite_st(model: &FiniteModel, spec: &ContourSpec, u: f64, v: f64) -> Result<f64> {
    spec.validate()?;
    let p = StParams::new(model)?;
    let y = &model.y;
    let k = p.a / p.c;
    let margin = spec.m.unwrap_or(0.25 * p.a.min(min_gap(y)));
    // images of the poles sit at y_j + 2πick/a
    if margin >= PI * p.c / p.a {
        return config(format!("rectangle half-height {margin} reaches the periodic pole images"));
    }
    let saddle = p.c * v / p.t;
    let lay = layout(y, saddle, spec.l_offset, margin, 0.1 * p.a)?;
    let sigma = p.sigma();
    let h = (2.0 * sigma).min(lay.gap) / spec.nodes_per_unit as f64;
    let panel = margin.min(lay.gap);

    let ex: Vec<f64> = y.iter().map(|y| (k * y).exp()).collect();
    let zs: Vec<(C64, C64)> = lay
        .boxes
        .iter()
        .flat_map(|&(x0, x1)| rectangle_nodes(x0, x1, margin, panel, GL_ORDER))
        .collect();
    let logb: Vec<(C64, C64, C64)> = zs
        .iter()
        .map(|&(z, dz)| {
            let ez = (z * k).exp();
            let lb = -p.t * (z - p.c * u / p.t) * (z - p.c * u / p.t) / (2.0 * p.s * p.c) + p.n * k * z
                - log_prod(ez, &ex);
            (ez, dz, lb)
        })
        .collect();
    let bmax = logb.iter().map(|b| b.2.re).fold(f64::NEG_INFINITY, f64::max);
    let bz: Vec<(C64, C64)> = logb.iter().map(|&(ez, dz, lb)| (ez, dz * (lb - bmax).exp())).collect();
    let pre = (u * u - v * v) / (2.0 * p.t) + bmax;

    let integral = line_trapezoid(lay.l, h, spec.trunc, 3.0 * sigma, |w| {
        let ew = (w * k).exp();
        let la = p.t * (w - saddle) * (w - saddle) / (2.0 * p.s * p.c) - p.n * k * w + log_prod(ew, &ex) + pre;
        let mut inner = C64::new(0.0, 0.0);
        let mut env = 0.0;
        for &(ez, b) in &bz {
            let term = b * ez / (ew - ez);
            inner += term;
            env += term.norm();
        }
        let scale = la.exp();
        (scale * inner, scale.norm() * env)
    });
    let val = integral * (p.a / (p.s * p.c)) / C64::new(-4.0 * PI * PI, 0.0);
    real_part(val, "double-contour kernel")
}

/// Half-line kernel with T = ∞, in either representation. The double form is
///
/// K = 1/((2πi)²S) ∫_{Γ_L} dw ∮_γ dz e^{(w−v)²/2S} (e^{−(z−u)²/2S} ∓ e^{−(z+u)²/2S})
/// · {2w or 2z}/(w² − z²) · Π_j (w² − y_j²)/(z² − y_j²),
///
/// with γ around the positive y_j only.
pub fn kernel_finite_boundary(model: &FiniteModel, spec: &ContourSpec, u: f64, v: f64, form: Form) -> Result<f64> {
    let absorbing = match model.boundary {
        Boundary::Absorbing => true,
        Boundary::Reflecting => false,
        Boundary::Free => return domain("half-line kernel needs an absorbing or reflecting model"),
    };
    if u < 0.0 || v < 0.0 {
        return domain(format!("half-line kernel evaluated at ({u}, {v})"));
    }
    match form {
        Form::Residue => Residue::new(model, spec)?.eval(u, v),
        Form::Double => boundary_double(model, spec, u, v, absorbing),
    }
}

fn boundary_double(model: &FiniteModel, spec: &ContourSpec, u: f64, v: f64, absorbing: bool) -> Result<f64> {
    spec.validate()?;
    if absorbing && u == 0.0 {
        return Ok(0.0);
    }
    let y = &model.y;
    let s = model.s;
    let margin = spec.m.unwrap_or(0.25 * min_gap(y).min(y[0]));
    let min_dist = 0.1 * min_gap(y).min(y[0]).min(model.a);
    let lay = layout(y, v, spec.l_offset, margin, min_dist)?;
    // the poles at z = −w must stay off the rectangles as well
    let mirror_gap = lay
        .boxes
        .iter()
        .map(|&(x0, x1)| {
            let x = -lay.l;
            if x < x0 {
                x0 - x
            } else if x > x1 {
                x - x1
            } else {
                -1.0
            }
        })
        .fold(f64::INFINITY, f64::min);
    if mirror_gap < min_dist {
        return config(format!("mirror of Γ_L at {} meets the pole rectangles", -lay.l));
    }
    let gap = lay.gap.min(mirror_gap);
    let sigma = s.sqrt();
    let h = (2.0 * sigma).min(gap) / spec.nodes_per_unit as f64;
    let panel = margin.min(gap);
    let ysq: Vec<f64> = y.iter().map(|y| y * y).collect();
    let sign = if absorbing { -1.0 } else { 1.0 };

    let zs: Vec<(C64, C64)> = lay
        .boxes
        .iter()
        .flat_map(|&(x0, x1)| rectangle_nodes(x0, x1, margin, panel, GL_ORDER))
        .collect();
    let logb: Vec<(C64, C64, C64)> = zs
        .iter()
        .map(|&(z, dz)| {
            let mirror = 1.0 + sign * (-2.0 * z * u / s).exp();
            let lb = -(z - u) * (z - u) / (2.0 * s) + mirror.ln() - log_prod(z * z, &ysq);
            (z, dz, lb)
        })
        .collect();
    let bmax = logb.iter().map(|b| b.2.re).fold(f64::NEG_INFINITY, f64::max);
    let bz: Vec<(C64, C64)> = logb.iter().map(|&(z, dz, lb)| (z, dz * (lb - bmax).exp())).collect();

    let integral = line_trapezoid(lay.l, h, spec.trunc, 3.0 * sigma, |w| {
        let w2 = w * w;
        let la = (w - v) * (w - v) / (2.0 * s) + log_prod(w2, &ysq) + bmax;
        let mut inner = C64::new(0.0, 0.0);
        let mut env = 0.0;
        for &(z, b) in &bz {
            let num = if absorbing { 2.0 * w } else { 2.0 * z };
            let term = b * num / (w2 - z * z);
            inner += term;
            env += term.norm();
        }
        let scale = la.exp();
        (scale * inner, scale.norm() * env)
    });
    real_part(integral / C64::new(-4.0 * PI * PI * s, 0.0), "double-contour kernel")
}

/// Value at `spec` together with the change from halving the step, as an
/// error estimate.
pub fn refined(spec: &ContourSpec, f: impl Fn(&ContourSpec) -> Result<f64>) -> Result<(f64, f64)> {
    let coarse = f(spec)?;
    let fine = f(&spec.with_nodes(2 * spec.nodes_per_unit))?;
    Ok((fine, (fine - coarse).abs()))
}

/// The finite-N kernel of `model` in residue form, as a kernel handle.
/// Evaluation failures show up as NaN.
pub fn finite_kernel_handle(model: &FiniteModel, spec: &ContourSpec) -> Result<KernelHandle> {
    let ev = Arc::new(Residue::new(model, spec)?);
    let domain = match model.boundary {
        Boundary::Free => KernelDomain::WholeLine,
        _ => KernelDomain::HalfLine,
    };
    let label = format!("finite(N={}, S={}, {:?}, {:?})", model.len(), model.s, model.t, model.boundary);
    Ok(KernelHandle::new(label, domain, Representation::Contour, false, FarField::Unknown, move |u, v| {
        ev.eval(u, v).unwrap_or(f64::NAN)
    }))
}
