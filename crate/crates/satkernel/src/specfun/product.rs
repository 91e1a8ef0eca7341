use num_complex::Complex64;
use std::sync::Arc;

use crate::error::{config, Result};
use crate::quad;

/// Asymptotic description of a sequence beyond its stored prefix.
#[derive(Clone)]
pub enum Tail {
    /// Nothing is known beyond the prefix; the product is truncated.
    None,
    /// Counting function n(t) ≈ coeff·t^power beyond the prefix.
    PowerLaw { coeff: f64, power: f64 },
    /// Counting density n′(t) beyond the prefix.
    Density(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for Tail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tail::None => write!(f, "None"),
            Tail::PowerLaw { coeff, power } => write!(f, "PowerLaw({coeff}, {power})"),
            Tail::Density(_) => write!(f, "Density(..)"),
        }
    }
}

/// Increasing sequence of positive reals with polynomial counting growth
/// n(t) ≤ C·t^(1+δ).
#[derive(Debug, Clone)]
pub struct PointSequence {
    values: Vec<f64>,
    growth_exponent: f64,
    growth_constant: f64,
    tail: Tail,
}

impl PointSequence {
    pub fn new(values: Vec<f64>, growth_exponent: f64, tail: Tail) -> Result<Self> {
        if !(0.0..1.0).contains(&growth_exponent) {
            return config(format!("growth exponent {growth_exponent} outside [0, 1)"));
        }
        if values.is_empty() {
            return config("point sequence is empty");
        }
        if values[0] <= 0.0 || !values[0].is_finite() {
            return config("point sequence values must be positive");
        }
        if let Some(i) = values.windows(2).position(|w| !(w[1] > w[0])) {
            return config(format!("point sequence not strictly increasing at index {}", i + 1));
        }
        let p = 1.0 + growth_exponent;
        let growth_constant = values
            .iter()
            .enumerate()
            .map(|(j, &t)| (j + 1) as f64 / t.powf(p))
            .fold(0.0, f64::max);
        Ok(PointSequence { values, growth_exponent, growth_constant, tail })
    }

    /// The sequence c_j = j·spacing, j = 1..=len.
    pub fn equidistant(spacing: f64, len: usize) -> Result<Self> {
        let values = (1..=len).map(|j| spacing * j as f64).collect();
        Self::new(values, 0.0, Tail::PowerLaw { coeff: 1.0 / spacing, power: 1.0 })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn growth_exponent(&self) -> f64 {
        self.growth_exponent
    }

    pub fn growth_constant(&self) -> f64 {
        self.growth_constant
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Estimate of Σ_{j>len} c_j^{−k} from the tail model, by comparing the
    /// sum with the integral of t^{−k} against the counting density from the
    /// midpoint beyond the last stored value.
    pub fn tail_power_sum(&self, k: u32) -> f64 {
        let n = self.values.len();
        let last = self.values[n - 1];
        let gap = if n >= 2 { last - self.values[n - 2] } else { last };
        let x = last + 0.5 * gap;
        tail_integral(&self.tail, x, k)
    }
}

/// ∫_x^∞ t^{−k} n′(t) dt for the given tail model.
pub(crate) fn tail_integral(tail: &Tail, x: f64, k: u32) -> f64 {
    match tail {
        Tail::None => 0.0,
        Tail::PowerLaw { coeff, power } => {
            let e = power - k as f64;
            coeff * power * x.powf(e) / (-e)
        }
        Tail::Density(rho) => {
            // t = x / s⁴ maps (0, 1] onto [x, ∞)
            quad::adaptive(0.0, 1.0, 1e-15 * x.powi(1 - k as i32).abs(), |r| {
                if r <= 0.0 {
                    return 0.0;
                }
                let s = r.powi(4);
                let t = x / s;
                t.powi(-(k as i32)) * rho(t) * x * 4.0 * r.powi(3) / (s * s)
            })
            .value
        }
    }
}

/// Canonical product P(z) = Π (1 − z/c_j)·e^{z/c_j} with value and error
/// estimate. The tail beyond the prefix contributes
/// exp(−Σ_{k≥2} z^k·S_k/k), S_k = Σ_{j>J} c_j^{−k}; the first dropped term
/// of that series is reported as the error estimate.
pub fn canonical_product(seq: &PointSequence, z: Complex64) -> (Complex64, f64) {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut log_scale = 0.0;
    for (j, &c) in seq.values.iter().enumerate() {
        let r = z / c;
        let f = 1.0 - r;
        if f == Complex64::new(0.0, 0.0) {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        acc *= f * r.exp();
        if j % 32 == 31 {
            let m = acc.norm();
            if !(1e-100..=1e100).contains(&m) {
                log_scale += m.ln();
                acc /= m;
            }
        }
    }
    let sums = tail_sums(seq, PRODUCT_TAIL_TERMS as u32 + 2);
    let mut tail = Complex64::new(0.0, 0.0);
    let mut zk = z;
    for (k, s) in sums.iter().enumerate().take(PRODUCT_TAIL_TERMS + 2).skip(2) {
        zk *= z;
        tail -= zk * (s / k as f64);
    }
    let value = acc * (tail + log_scale).exp();
    let next = PRODUCT_TAIL_TERMS + 2;
    let err = z.norm().powi(next as i32) * sums[next] / next as f64 * value.norm();
    (value, err)
}

const PRODUCT_TAIL_TERMS: usize = 12;

/// S_k = Σ_{j>J} c_j^{−k} for k = 0..=kmax (entries 0 and 1 unused), by
/// Euler–Maclaurin in the index from the tail model, assuming n(c_J) = J.
fn tail_sums(seq: &PointSequence, kmax: u32) -> Vec<f64> {
    let tail = seq.tail();
    let last = seq.values[seq.values.len() - 1];
    let rho = tail_density(tail, last);
    (0..=kmax)
        .map(|k| {
            if k < 2 || matches!(tail, Tail::None) {
                return 0.0;
            }
            let g = last.powi(-(k as i32));
            // g′(J) = d/dj c_j^{−k} = −k·c_J^{−k−1}/n′(c_J)
            let gp = -(k as f64) * g / last / rho;
            tail_integral(tail, last, k) - 0.5 * g - gp / 12.0
        })
        .collect()
}

/// Counting density n′(t) of a tail model.
fn tail_density(tail: &Tail, t: f64) -> f64 {
    match tail {
        Tail::None => 0.0,
        Tail::PowerLaw { coeff, power } => coeff * power * t.powf(power - 1.0),
        Tail::Density(rho) => rho(t),
    }
}

/// Even product F(z) = Π (1 − z²/c_j²), evaluated in log form.
///
/// Beyond the stored prefix log F picks up −Σ_k z^{2k}·S_{2k}/k with
/// S_{2k} = Σ_{j>J} c_j^{−2k}. The sums come from the tail model by
/// Euler–Maclaurin in the index, which assumes n(c_J) = J.
#[derive(Debug, Clone)]
pub struct EvenProduct {
    inv_sq: Vec<f64>,
    tail_sums: Vec<f64>,
    radius: f64,
}

const EVEN_TAIL_TERMS: usize = 16;

impl EvenProduct {
    pub fn new(seq: &PointSequence) -> Self {
        let values = seq.values();
        let last = values[values.len() - 1];
        let sums = tail_sums(seq, 2 * EVEN_TAIL_TERMS as u32);
        EvenProduct {
            inv_sq: values.iter().map(|c| 1.0 / (c * c)).collect(),
            tail_sums: (1..=EVEN_TAIL_TERMS).map(|k| sums[2 * k]).collect(),
            radius: 0.25 * last,
        }
    }

    /// Largest |z| for which the tail expansion is accurate to ~1e−16.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// A branch of log F(z).
    pub fn ln(&self, z: Complex64) -> Complex64 {
        let z2 = z * z;
        let mut acc = Complex64::new(0.0, 0.0);
        for chunk in self.inv_sq.chunks(16) {
            let mut p = Complex64::new(1.0, 0.0);
            for &q in chunk {
                p *= 1.0 - z2 * q;
            }
            acc += p.ln();
        }
        let mut zk = Complex64::new(1.0, 0.0);
        for (k, s) in self.tail_sums.iter().enumerate() {
            zk *= z2;
            acc -= zk * (*s / (k + 1) as f64);
        }
        acc
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.ln(z).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin() {
        let seq = PointSequence::equidistant(1.0, 100).unwrap();
        let (p, _) = canonical_product(&seq, Complex64::new(0.0, 0.0));
        assert!((p - 1.0).norm() < 1e-15);
    }

    #[test]
    fn sine_product() {
        let seq = PointSequence::equidistant(1.0, 10_000).unwrap();
        let z = Complex64::new(0.5, 0.0);
        let (p, _) = canonical_product(&seq, z);
        let (m, _) = canonical_product(&seq, -z);
        assert!(((p * m).re - 2.0 / std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn zero_at_sequence_point() {
        let seq = PointSequence::equidistant(1.0, 10).unwrap();
        let (p, _) = canonical_product(&seq, Complex64::new(3.0, 0.0));
        assert_eq!(p, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn even_product_matches_sine() {
        let seq = PointSequence::equidistant(1.0, 400).unwrap();
        let f = EvenProduct::new(&seq);
        for &z in &[Complex64::new(0.3, 0.0), Complex64::new(2.7, 1.5), Complex64::new(-13.2, 3.0)] {
            let pz = std::f64::consts::PI * z;
            let exact = pz.sin() / pz;
            assert!((f.eval(z) - exact).norm() < 1e-12 * exact.norm().max(1.0), "{z}");
        }
    }

    #[test]
    fn rejects_non_increasing() {
        assert!(PointSequence::new(vec![1.0, 1.0], 0.0, Tail::None).is_err());
        assert!(PointSequence::new(vec![1.0, 2.0], 1.0, Tail::None).is_err());
    }
}
