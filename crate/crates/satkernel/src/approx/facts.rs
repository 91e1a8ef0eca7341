use super::config::GeneralConfiguration;
use super::counting::{invert_counting, CountingFunction};

/// Which of the elementary inequalities for admissible F hold on a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Facts {
    /// F′(s + t) ≤ F′(s) + F′(t)
    pub prime_subadditive: bool,
    /// F⁻¹(s + t) ≤ F⁻¹(s) + F⁻¹(t)
    pub inverse_subadditive: bool,
    /// tF′(t) ≤ 4F(t)
    pub prime_bound: bool,
    /// tF″(t) ≤ F′(t)
    pub second_bound: bool,
    /// |y_{m+1} − y_m − λ_m| ≤ λ_m³η_m
    pub spacing_expansion: bool,
    /// λ_{m+1} ≤ y_{m+1} − y_m ≤ λ_m
    pub spacing_sandwich: bool,
    /// |F(y_m + t) − m − t/λ_m| ≤ η_m t²
    pub taylor: bool,
    /// n_c(t) = ⌊F(y_m + t) − m⌋ ≤ t/λ_m + C·t^{1+δ}
    pub counting_bound: bool,
}

impl Facts {
    pub fn all(&self) -> bool {
        self.prime_subadditive
            && self.inverse_subadditive
            && self.prime_bound
            && self.second_bound
            && self.spacing_expansion
            && self.spacing_sandwich
            && self.taylor
            && self.counting_bound
    }
}

/// Checks the inequalities at the points `xs` (pairs drawn from `xs`) and
/// the indices `ms`; the last two use offsets t ∈ `xs`.
pub fn check_facts(cfg: &GeneralConfiguration, xs: &[f64], ms: &[u64]) -> Facts {
    let f: &dyn CountingFunction = cfg.source();
    let tol = 1e-12;
    let pairs = || xs.iter().flat_map(|&s| xs.iter().map(move |&t| (s, t)));
    let inv = |t: f64| invert_counting(f, t).unwrap_or(f64::NAN);
    let prime_subadditive = pairs().all(|(s, t)| f.prime(s + t) <= (f.prime(s) + f.prime(t)) * (1.0 + tol));
    let inverse_subadditive = pairs().all(|(s, t)| inv(s + t) <= (inv(s) + inv(t)) * (1.0 + tol));
    let prime_bound = xs.iter().all(|&t| t * f.prime(t) <= 4.0 * f.value(t) * (1.0 + tol));
    let second_bound = xs.iter().all(|&t| t * f.second(t) <= f.prime(t) * (1.0 + tol));
    let mut spacing_expansion = true;
    let mut spacing_sandwich = true;
    for &m in ms {
        let gap = cfg.y(m as i64 + 1) - cfg.y(m as i64);
        let (lm, lm1) = (cfg.lambda(m), cfg.lambda(m + 1));
        spacing_expansion &= (gap - lm).abs() <= lm.powi(3) * cfg.eta(m) * (1.0 + tol);
        spacing_sandwich &= lm1 <= gap * (1.0 + tol) && gap <= lm * (1.0 + tol);
    }
    let mut taylor = true;
    let mut counting_bound = true;
    let p = 1.0 + f.delta();
    for &m in ms {
        let (ym, lm, eta) = (cfg.y(m as i64), cfg.lambda(m), cfg.eta(m));
        let mf = m as f64;
        for &t in xs {
            let rise = f.value(ym + t) - mf;
            taylor &= (rise - t / lm).abs() <= eta * t * t * (1.0 + tol) + 1e-12 * mf;
            counting_bound &= rise.floor() <= t / lm + f.c_growth() * t.powf(p);
        }
    }
    Facts {
        prime_subadditive,
        inverse_subadditive,
        prime_bound,
        second_bound,
        spacing_expansion,
        spacing_sandwich,
        taylor,
        counting_bound,
    }
}
