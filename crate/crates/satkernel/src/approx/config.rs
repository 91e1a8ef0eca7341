use std::sync::Arc;

use super::counting::{invert_counting, CountingFunction};
use crate::error::{config, domain, Result};
use crate::quad::{adaptive, GaussLegendre};
use crate::specfun::{PointSequence, Tail};

/// Initial points y_j = F⁻¹(j), with a materialized prefix and on-demand
/// inversion beyond it. Negative indices follow y_{−j} = −y_j, y₀ = 0.
#[derive(Clone)]
pub struct GeneralConfiguration {
    source: Arc<dyn CountingFunction>,
    prefix: Vec<f64>,
}

impl std::fmt::Debug for GeneralConfiguration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeneralConfiguration")
            .field("source", &self.source.name())
            .field("prefix_len", &self.prefix.len())
            .finish()
    }
}

/// Per-index quantities λ_m = 1/F′(y_m), η_m = F″(y_m), ξ_m, ζ_m = y_m − ξ_m·S.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexData {
    pub m: u64,
    pub y: f64,
    pub lambda: f64,
    pub eta: f64,
    pub xi: f64,
    pub xi_err: f64,
    pub zeta: f64,
}

impl GeneralConfiguration {
    pub fn new(source: Arc<dyn CountingFunction>, prefix_len: usize) -> Result<Self> {
        if prefix_len == 0 {
            return domain("prefix must hold at least one point");
        }
        let prefix = (1..=prefix_len)
            .map(|j| invert_counting(source.as_ref(), j as f64))
            .collect::<Result<Vec<_>>>()?;
        if let Some(i) = prefix.windows(2).position(|w| !(w[1] > w[0])) {
            return config(format!("counting function not strictly increasing near y_{}", i + 1));
        }
        Ok(GeneralConfiguration { source, prefix })
    }

    pub fn source(&self) -> &dyn CountingFunction {
        self.source.as_ref()
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    /// y_j for any integer j.
    pub fn y(&self, j: i64) -> f64 {
        match j {
            0 => 0.0,
            j if j < 0 => -self.y(-j),
            j => match self.prefix.get(j as usize - 1) {
                Some(&v) => v,
                None => invert_counting(self.source.as_ref(), j as f64).unwrap_or(f64::NAN),
            },
        }
    }

    /// y at a real index, through F⁻¹ and reflection.
    fn y_real(&self, t: f64) -> f64 {
        if t < 0.0 {
            return -self.y_real(-t);
        }
        invert_counting(self.source.as_ref(), t).unwrap_or(f64::NAN)
    }

    /// The prefix as a sequence for the canonical product, with the counting
    /// density F′ as tail model.
    pub fn point_sequence(&self) -> Result<PointSequence> {
        let src = self.source.clone();
        PointSequence::new(self.prefix.clone(), self.source.delta(), Tail::Density(Arc::new(move |t| src.prime(t))))
    }

    pub fn lambda(&self, m: u64) -> f64 {
        1.0 / self.source.prime(self.y(m as i64))
    }

    pub fn eta(&self, m: u64) -> f64 {
        self.source.second(self.y(m as i64))
    }

    /// ξ_m = Σ_{j≥1} (2y_m − y_{m−j} − y_{m+j})/((y_m − y_{m−j})(y_{m+j} − y_m)),
    /// summed to `tail_len` and completed by the integral over real j.
    /// Returns (value, error estimate).
    pub fn xi_m(&self, m: u64, tail_len: u64) -> Result<(f64, f64)> {
        if m == 0 || tail_len < 2 {
            return domain("ξ_m needs m ≥ 1 and tail_len ≥ 2");
        }
        let mi = m as i64;
        let ym = self.y(mi);
        let term = |lo: f64, hi: f64| (2.0 * ym - lo - hi) / ((ym - lo) * (hi - ym));
        let mut sum = 0.0;
        let mut last_block = 0.0;
        for j in 1..=tail_len as i64 {
            let t = term(self.y(mi - j), self.y(mi + j));
            if !t.is_finite() {
                return config(format!("coincident points in ξ_{m} at j = {j}"));
            }
            sum += t;
            if j as u64 > tail_len / 2 {
                last_block += t;
            }
        }
        let mf = m as f64;
        let src = self.source.as_ref();
        let slope = |tau: f64| 1.0 / src.prime(self.y_real(tau));
        let cont = |t: f64| {
            if t < 2.0 * mf {
                return term(self.y_real(mf - t), self.y_real(mf + t));
            }
            // y(t+m) − y(t−m) by quadrature of y′ avoids cancelling two large values
            let rise = GaussLegendre::cached(8).integrate(t - mf, t + mf, slope);
            let lo = self.y_real(t - mf);
            (2.0 * ym - rise) / ((ym + lo) * (lo + rise - ym))
        };
        let j0 = tail_len as f64 + 0.5;
        // t = j₀e^u; the summand decays like t^{−2/(1+δ)}
        let delta = self.source.delta();
        let u_max = 40.0 * (1.0 + delta) / (1.0 - delta);
        let tail = adaptive(0.0, u_max, 1e-11 * sum.abs().max(1e-300), |u| {
            let t = j0 * u.exp();
            t * cont(t)
        })
        .value;
        // how well the integral stands in for the sum over the last block
        let half = (tail_len / 2) as f64 + 0.5;
        let block_integral = adaptive(half, j0, 1e-9 * last_block.abs().max(1e-300), cont).value;
        let err = (last_block - block_integral).abs() + 1e-15 * sum.abs();
        Ok((sum + tail, err))
    }

    pub fn index_data(&self, m: u64, s: f64, tail_len: u64) -> Result<IndexData> {
        let (xi, xi_err) = self.xi_m(m, tail_len)?;
        let y = self.y(m as i64);
        Ok(IndexData { m, y, lambda: self.lambda(m), eta: self.eta(m), xi, xi_err, zeta: y - xi * s })
    }
}
