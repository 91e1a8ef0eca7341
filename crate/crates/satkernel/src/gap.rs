//! Gap probabilities and the first-particle law via Nyström discretization
//! of Fredholm determinants.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, numerical, Error, Result};
use crate::kernels::{KernelDomain, KernelHandle};
use crate::quad::GaussLegendre;

/// Default Nyström order.
pub const DEFAULT_ORDER: usize = 40;
const MAX_ORDER: usize = 640;
const MONOTONE_TOL: f64 = 1e-8;

/// det(I − K) on [lo, hi] and the matching first-particle probability.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapResult {
    pub xi: f64,
    pub det_value: f64,
    pub cdf: f64,
    pub order: usize,
    pub err_estimate: f64,
}

fn det_once(k: &KernelHandle, lo: f64, hi: f64, order: usize) -> Result<f64> {
    let rule = GaussLegendre::cached(order);
    let (x, w): (Vec<f64>, Vec<f64>) = rule.mapped(lo, hi).unzip();
    let sw: Vec<f64> = w.iter().map(|w| w.sqrt()).collect();
    let mut m = DMatrix::<f64>::identity(order, order);
    for i in 0..order {
        for j in 0..order {
            let kij = k.evaluate(x[i], x[j]);
            if !kij.is_finite() {
                return Err(Error::Numerical {
                    msg: format!("kernel {} is not finite at ({}, {})", k.label, x[i], x[j]),
                    residual: kij,
                });
            }
            m[(i, j)] -= sw[i] * kij * sw[j];
        }
    }
    Ok(m.lu().determinant())
}

/// det(δ_ij − √w_i K(x_i,x_j) √w_j) with Gauss–Legendre nodes on [lo, hi].
/// The error estimate compares against half the order.
pub fn fredholm_det(k: &KernelHandle, lo: f64, hi: f64, order: usize) -> Result<GapResult> {
    if order < 4 {
        return domain(format!("Nyström order must be at least 4, got {order}"));
    }
    if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
        return domain(format!("bad interval [{lo}, {hi}]"));
    }
    if k.domain == KernelDomain::HalfLine && lo < 0.0 {
        return domain(format!("half-line kernel on [{lo}, {hi}]"));
    }
    if hi == lo {
        return Ok(GapResult { xi: hi, det_value: 1.0, cdf: 0.0, order, err_estimate: 0.0 });
    }
    let det = det_once(k, lo, hi, order)?;
    let coarse = det_once(k, lo, hi, order / 2)?;
    Ok(GapResult { xi: hi, det_value: det, cdf: 1.0 - det, order, err_estimate: (det - coarse).abs() })
}

/// Doubles the order from [`DEFAULT_ORDER`] until successive values agree to `tol`.
pub fn fredholm_det_auto(k: &KernelHandle, lo: f64, hi: f64, tol: f64) -> Result<GapResult> {
    let mut order = DEFAULT_ORDER;
    loop {
        let r = fredholm_det(k, lo, hi, order)?;
        if r.err_estimate < tol {
            return Ok(r);
        }
        if order >= MAX_ORDER {
            return numerical(format!("Nyström refinement stalled at order {order}"), r.err_estimate);
        }
        order *= 2;
    }
}

/// P[first particle right of 0 lies in [0, ξ]] for every ξ on the grid.
pub fn first_particle_cdf(k: &KernelHandle, xi_grid: &[f64], order: usize) -> Result<Vec<GapResult>> {
    if xi_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("ξ grid must be strictly increasing");
    }
    if xi_grid.first().is_some_and(|&x| x < 0.0) {
        return domain("ξ grid must be nonnegative");
    }
    let out: Vec<GapResult> = xi_grid.iter().map(|&xi| fredholm_det(k, 0.0, xi, order)).collect::<Result<_>>()?;
    for w in out.windows(2) {
        let drop = w[0].cdf - w[1].cdf;
        if drop > MONOTONE_TOL {
            return numerical(format!("first-particle cdf decreases between ξ = {} and {}", w[0].xi, w[1].xi), drop);
        }
    }
    Ok(out)
}
