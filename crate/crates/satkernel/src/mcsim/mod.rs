//! Exact sampler for Dyson's Hermitian Brownian motion at time S, started
//! from N equidistant points, with count and density estimators.

mod eigen;
mod io;

pub use eigen::{tridiagonal_ql, Hermitian};
pub use io::{read_samples, write_samples, FORMAT_VERSION};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Result};

/// Eigenvalues closer than this count as a tie and trigger a redraw.
const TIE: f64 = 1e-12;
const MAX_REDRAWS: u32 = 8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub a: f64,
    pub s: f64,
    pub delta: f64,
    pub samples: usize,
    pub seed: u64,
    /// Measurement interval [r, r + l].
    pub window: (f64, f64),
    /// Histogram bins across the window.
    pub bins: usize,
    /// Non-overlapping batches for standard errors.
    pub batches: usize,
}

impl SimConfig {
    pub fn new(n: usize, a: f64, s: f64, samples: usize, seed: u64, window: (f64, f64)) -> Result<Self> {
        let cfg = SimConfig { n, a, s, delta: 0.0, samples, seed, window, bins: 50, batches: 40 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_multiple_of(2) {
            return domain(format!("N must be odd, got {}", self.n));
        }
        if !(self.a > 0.0 && self.s > 0.0) {
            return domain(format!("need a > 0 and S > 0, got a = {}, S = {}", self.a, self.s));
        }
        if self.samples == 0 || self.bins == 0 || self.batches == 0 {
            return domain("samples, bins and batches must be positive");
        }
        if !(self.window.1 > 0.0 && self.delta.is_finite() && self.window.0.is_finite()) {
            return domain(format!("bad window ({}, {})", self.window.0, self.window.1));
        }
        Ok(())
    }

    /// y_j = Δ + a(j − (N+1)/2), j = 1..N.
    pub fn initial_points(&self) -> Vec<f64> {
        let c = (self.n as f64 + 1.0) / 2.0;
        (1..=self.n).map(|j| self.delta + self.a * (j as f64 - c)).collect()
    }

    fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// One draw of the eigenvalues of diag(y) + H, where H has real diagonal
/// N(0, S) and off-diagonal entries with independent N(0, S/2) real and
/// imaginary parts. Returns the sorted sample and the number of redraws.
pub fn sample_configuration(cfg: &SimConfig, rng: &mut ChaCha8Rng) -> Result<(Vec<f64>, u32)> {
    let y = cfg.initial_points();
    let (sd, so) = (cfg.s.sqrt(), (cfg.s / 2.0).sqrt());
    let mut redraws = 0;
    loop {
        let mut h = Hermitian::zeros(cfg.n);
        for (j, &yj) in y.iter().enumerate() {
            let g: f64 = StandardNormal.sample(rng);
            h.set_diag(j, yj + sd * g);
            for i in j + 1..cfg.n {
                let (re, im): (f64, f64) = (StandardNormal.sample(rng), StandardNormal.sample(rng));
                h.set(i, j, so * re, so * im);
            }
        }
        let ev = h.eigenvalues()?;
        if ev.windows(2).all(|w| w[1] - w[0] > TIE) || redraws >= MAX_REDRAWS {
            return Ok((ev, redraws));
        }
        redraws += 1;
    }
}

/// Draw number `index` of the configured stream; identical for any worker count.
pub fn sample_indexed(cfg: &SimConfig, index: u64) -> Result<Vec<f64>> {
    Ok(sample_configuration(cfg, &mut cfg.stream(index))?.0)
}

/// All draws in order.
pub fn sample_all(cfg: &SimConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    (0..cfg.samples as u64).into_par_iter().map(|i| sample_indexed(cfg, i)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    /// Total counts per bin over all samples.
    pub counts: Vec<u64>,
    /// Mean density per bin (counts per unit length per sample).
    pub density: Vec<f64>,
    /// Batch-means standard error of `density`.
    pub stderr: Vec<f64>,
    /// Root-mean-square of `stderr`: one error bar for all bins.
    pub pooled_stderr: f64,
}

impl Histogram {
    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let w = self.width();
        (0..self.counts.len()).map(|i| self.lo + w * (i as f64 + 0.5)).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmpiricalStats {
    pub samples: usize,
    pub batches: usize,
    pub mean_count: f64,
    pub stderr_mean: f64,
    pub var_count: f64,
    pub stderr_var: f64,
    pub density_histogram: Histogram,
    pub redraws: u64,
}

struct Batch {
    n: f64,
    sum: Vec<f64>,
    sum2: Vec<f64>,
    bins: Vec<Vec<u64>>,
    redraws: u64,
}

fn run_batch(cfg: &SimConfig, windows: &[(f64, f64)], range: std::ops::Range<u64>) -> Result<Batch> {
    let nw = windows.len();
    let mut b = Batch { n: 0.0, sum: vec![0.0; nw], sum2: vec![0.0; nw], bins: vec![vec![0; cfg.bins]; nw], redraws: 0 };
    for i in range {
        let (ev, redraws) = sample_configuration(cfg, &mut cfg.stream(i))?;
        b.redraws += redraws as u64;
        b.n += 1.0;
        for (k, &(r, l)) in windows.iter().enumerate() {
            let w = l / cfg.bins as f64;
            let lo = ev.partition_point(|&x| x < r);
            let hi = ev.partition_point(|&x| x <= r + l);
            for &x in &ev[lo..hi] {
                b.bins[k][(((x - r) / w) as usize).min(cfg.bins - 1)] += 1;
            }
            let count = (hi - lo) as f64;
            b.sum[k] += count;
            b.sum2[k] += count * count;
        }
    }
    Ok(b)
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (k - 1.0);
    (m, (v / k).sqrt())
}

fn unbiased_var(n: f64, s1: f64, s2: f64) -> f64 {
    if n > 1.0 {
        ((s2 - s1 * s1 / n) / (n - 1.0)).max(0.0)
    } else {
        0.0
    }
}

/// Counts in the configured window: mean, variance and batch-means standard
/// errors, plus a density histogram across the window.
pub fn estimate_variance(cfg: &SimConfig) -> Result<EmpiricalStats> {
    Ok(estimate_windows(cfg, &[cfg.window])?.remove(0))
}

/// Like [`estimate_variance`] for several windows measured on the same draws.
pub fn estimate_windows(cfg: &SimConfig, windows: &[(f64, f64)]) -> Result<Vec<EmpiricalStats>> {
    cfg.validate()?;
    let bulk = cfg.a * (cfg.n as f64 - 1.0) / 2.0 - 10.0 * cfg.a.max(cfg.s.sqrt());
    for &(r, l) in windows {
        if !(l > 0.0) {
            return domain(format!("window length must be positive, got {l}"));
        }
        if (r - cfg.delta).abs().max((r + l - cfg.delta).abs()) > bulk {
            return precondition(format!("window [{r}, {}] is not inside the bulk |x − Δ| ≤ {bulk}", r + l));
        }
    }
    let nb = cfg.batches.min(cfg.samples);
    let total = cfg.samples as u64;
    let edges: Vec<u64> = (0..=nb as u64).map(|k| k * total / nb as u64).collect();
    let batches: Vec<Batch> =
        (0..nb).into_par_iter().map(|k| run_batch(cfg, windows, edges[k]..edges[k + 1])).collect::<Result<_>>()?;

    // merged in batch order, so the result does not depend on the worker count
    let n: f64 = batches.iter().map(|b| b.n).sum();
    let redraws = batches.iter().map(|b| b.redraws).sum();
    let mut out = Vec::with_capacity(windows.len());
    for (k, &(r, l)) in windows.iter().enumerate() {
        let s1: f64 = batches.iter().map(|b| b.sum[k]).sum();
        let s2: f64 = batches.iter().map(|b| b.sum2[k]).sum();
        let bmeans: Vec<f64> = batches.iter().map(|b| b.sum[k] / b.n).collect();
        let bvars: Vec<f64> = batches.iter().map(|b| unbiased_var(b.n, b.sum[k], b.sum2[k])).collect();
        let w = l / cfg.bins as f64;
        let mut counts = vec![0u64; cfg.bins];
        let mut stderr = Vec::with_capacity(cfg.bins);
        for (j, c) in counts.iter_mut().enumerate() {
            *c = batches.iter().map(|b| b.bins[k][j]).sum();
            let per: Vec<f64> = batches.iter().map(|b| b.bins[k][j] as f64 / (b.n * w)).collect();
            stderr.push(mean_and_stderr(&per).1);
        }
        let density = counts.iter().map(|&c| c as f64 / (n * w)).collect();
        let pooled_stderr = (stderr.iter().map(|e| e * e).sum::<f64>() / cfg.bins as f64).sqrt();
        out.push(EmpiricalStats {
            samples: cfg.samples,
            batches: nb,
            mean_count: s1 / n,
            stderr_mean: mean_and_stderr(&bmeans).1,
            var_count: unbiased_var(n, s1, s2),
            stderr_var: mean_and_stderr(&bvars).1,
            density_histogram: Histogram { lo: r, hi: r + l, counts, density, stderr, pooled_stderr },
            redraws,
        });
    }
    Ok(out)
}
