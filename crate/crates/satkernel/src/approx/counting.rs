use std::f64::consts::{E, PI};
use std::sync::Arc;

use crate::error::{config, domain, numerical, Result};
use crate::quad::GaussLegendre;

/// Counting function F of an initial configuration y_j = F⁻¹(j).
///
/// F should be C² with F(x) ≤ C·x^{1+δ}, F′(0) = 0, F′ > 0 on (0, ∞) and F″
/// decreasing; [`check_conditions`] samples these.
pub trait CountingFunction: Send + Sync {
    fn name(&self) -> String;
    fn value(&self, x: f64) -> f64;
    fn prime(&self, x: f64) -> f64;
    fn second(&self, x: f64) -> f64;
    /// growth exponent δ ∈ (0, 1)
    fn delta(&self) -> f64;
    fn c_growth(&self) -> f64;
    /// Below this point the function is a completion rather than the named
    /// formula; zero when there is none.
    fn completion_end(&self) -> f64 {
        0.0
    }
}

/// F(x) = x^{1+δ}.
#[derive(Debug, Clone, Copy)]
pub struct PowerCounting {
    pub delta: f64,
}

impl PowerCounting {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return domain(format!("power counting needs δ in (0, 1), got {delta}"));
        }
        Ok(PowerCounting { delta })
    }
}

impl CountingFunction for PowerCounting {
    fn name(&self) -> String {
        format!("power:{}", self.delta)
    }
    fn value(&self, x: f64) -> f64 {
        x.powf(1.0 + self.delta)
    }
    fn prime(&self, x: f64) -> f64 {
        (1.0 + self.delta) * x.powf(self.delta)
    }
    fn second(&self, x: f64) -> f64 {
        (1.0 + self.delta) * self.delta * x.powf(self.delta - 1.0)
    }
    fn delta(&self) -> f64 {
        self.delta
    }
    fn c_growth(&self) -> f64 {
        1.0
    }
}

/// C² continuation below a point x_c where F(x_c) = 1:
/// F(x) = (x/x_c)²·exp(β(x − x_c) + γ(x − x_c)²/2), matching F, F′, F″ at x_c.
///
/// F(0) = F′(0) = 0 and F′ > 0, so the points y_j, j ≥ 1, are those of the
/// main formula.
#[derive(Debug, Clone, Copy)]
struct Completion {
    xc: f64,
    beta: f64,
    gamma: f64,
}

impl Completion {
    /// From F′(x_c) and F″(x_c), with F(x_c) = 1.
    fn new(xc: f64, f1: f64, f2: f64) -> Result<Self> {
        // log-derivative g = 2/x + β + γ(x − x_c): g(x_c) = F′, g′(x_c) = F″ − F′²
        let beta = f1 - 2.0 / xc;
        let gamma = f2 - f1 * f1 + 2.0 / (xc * xc);
        let c = Completion { xc, beta, gamma };
        // g must stay positive on (0, x_c]
        let worst = (1..=64).map(|i| c.log_derivative(xc * i as f64 / 64.0)).fold(f64::INFINITY, f64::min);
        if !(worst > 0.0) {
            return config("small-x completion is not increasing");
        }
        Ok(c)
    }

    fn log_derivative(&self, x: f64) -> f64 {
        2.0 / x + self.beta + self.gamma * (x - self.xc)
    }

    fn value(&self, x: f64) -> f64 {
        let t = x - self.xc;
        (x / self.xc).powi(2) * (self.beta * t + 0.5 * self.gamma * t * t).exp()
    }

    fn prime(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.value(x) * self.log_derivative(x)
    }

    fn second(&self, x: f64) -> f64 {
        let t = x - self.xc;
        let e = (self.beta * t + 0.5 * self.gamma * t * t).exp() / (self.xc * self.xc);
        // F = e·x², F′ = e·(2x + x²h), F″ = e·(2 + 4xh + x²h² + x²γ), h = β + γt
        let h = self.beta + self.gamma * t;
        e * (2.0 + 4.0 * x * h + x * x * (h * h + self.gamma))
    }
}

/// Smoothed zero-counting function of the zeta function,
/// F(x) = (x/2π)log(x/2π) − x/2π, completed below F = 1.
#[derive(Debug, Clone, Copy)]
pub struct ZetaCounting {
    completion: Completion,
}

impl ZetaCounting {
    pub fn new() -> Result<Self> {
        // t(log t − 1) = 1 for t = x/2π, by Newton from t = 3.6
        let mut t: f64 = 3.6;
        for _ in 0..50 {
            let step = (t * (t.ln() - 1.0) - 1.0) / t.ln();
            t -= step;
            if step.abs() < 1e-16 * t {
                break;
            }
        }
        let xc = 2.0 * PI * t;
        let completion = Completion::new(xc, Self::main_prime(xc), Self::main_second(xc))?;
        Ok(ZetaCounting { completion })
    }

    fn main_prime(x: f64) -> f64 {
        (x / (2.0 * PI)).ln() / (2.0 * PI)
    }

    fn main_second(x: f64) -> f64 {
        1.0 / (2.0 * PI * x)
    }
}

impl CountingFunction for ZetaCounting {
    fn name(&self) -> String {
        "zeta-counting".into()
    }
    fn value(&self, x: f64) -> f64 {
        if x < self.completion.xc {
            return self.completion.value(x);
        }
        let t = x / (2.0 * PI);
        t * (t.ln() - 1.0)
    }
    fn prime(&self, x: f64) -> f64 {
        if x < self.completion.xc {
            return self.completion.prime(x);
        }
        Self::main_prime(x)
    }
    fn second(&self, x: f64) -> f64 {
        if x < self.completion.xc {
            return self.completion.second(x);
        }
        Self::main_second(x)
    }
    fn delta(&self) -> f64 {
        0.05
    }
    fn c_growth(&self) -> f64 {
        2.0
    }
    fn completion_end(&self) -> f64 {
        self.completion.xc
    }
}

/// F(x) = 1 + ∫_{2πe}^x (log(t/2π))^{1/2} dt for x ≥ 2πe, completed below.
/// Rescaling with G = F⁻¹ gives a process with unit density whose local
/// saturation level grows like (1/π²)log log(x/2π).
#[derive(Clone)]
pub struct Unfolding {
    completion: Completion,
    rule: Arc<GaussLegendre>,
}

impl Unfolding {
    pub const START: f64 = 2.0 * PI * E;

    pub fn new() -> Result<Self> {
        let xc = Self::START;
        let completion = Completion::new(xc, 1.0, 1.0 / (2.0 * xc))?;
        Ok(Unfolding { completion, rule: GaussLegendre::cached(30) })
    }
}

impl std::fmt::Debug for Unfolding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Unfolding").finish()
    }
}

impl CountingFunction for Unfolding {
    fn name(&self) -> String {
        "unfolding".into()
    }
    fn value(&self, x: f64) -> f64 {
        if x < Self::START {
            return self.completion.value(x);
        }
        // t = 2π e^σ: ∫ √(log(t/2π)) dt = 2π∫₁^s √σ e^σ dσ
        let s = (x / (2.0 * PI)).ln();
        let panels = (s - 1.0).ceil().max(1.0) as usize;
        let h = (s - 1.0) / panels as f64;
        let integral: f64 = (0..panels)
            .map(|i| {
                let lo = 1.0 + i as f64 * h;
                self.rule.integrate(lo, lo + h, |sig| sig.sqrt() * sig.exp())
            })
            .sum();
        1.0 + 2.0 * PI * integral
    }
    fn prime(&self, x: f64) -> f64 {
        if x < Self::START {
            return self.completion.prime(x);
        }
        (x / (2.0 * PI)).ln().sqrt()
    }
    fn second(&self, x: f64) -> f64 {
        if x < Self::START {
            return self.completion.second(x);
        }
        1.0 / (2.0 * x * (x / (2.0 * PI)).ln().sqrt())
    }
    fn delta(&self) -> f64 {
        0.05
    }
    fn c_growth(&self) -> f64 {
        3.0
    }
    fn completion_end(&self) -> f64 {
        Self::START
    }
}

/// Catalog lookup: "power:<δ>", "zeta-counting" or "unfolding".
pub fn counting_function(name: &str) -> Result<Arc<dyn CountingFunction>> {
    if let Some(rest) = name.strip_prefix("power:") {
        let delta: f64 = rest.trim().parse().map_err(|_| crate::Error::Domain(format!("bad exponent in {name:?}")))?;
        return Ok(Arc::new(PowerCounting::new(delta)?));
    }
    match name {
        "zeta-counting" => Ok(Arc::new(ZetaCounting::new()?)),
        "unfolding" => Ok(Arc::new(Unfolding::new()?)),
        _ => domain(format!("unknown counting function {name:?}; expected power:<δ>, zeta-counting or unfolding")),
    }
}

/// Names accepted by [`counting_function`].
pub const COUNTING_FUNCTIONS: &[&str] = &["power:<δ>", "zeta-counting", "unfolding"];

/// y = F⁻¹(t) for t ≥ 0, to |F(y) − t| ≤ 1e−12·max(t, 1).
pub fn invert_counting(cf: &dyn CountingFunction, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return domain(format!("cannot invert the counting function at {t}"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let p = 1.0 + cf.delta();
    let mut hi = (t / cf.c_growth()).powf(1.0 / p) * 10.0;
    let mut lo = 0.0;
    let mut expansions = 0;
    while cf.value(hi) < t {
        lo = hi;
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 || !hi.is_finite() {
            return config(format!("could not bracket F⁻¹({t})"));
        }
    }
    // safeguarded Newton, run to machine precision
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = cf.value(x) - t;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let step = fx / cf.prime(x);
        let nx = x - step;
        let newton = nx > lo && nx < hi && step.is_finite();
        x = if newton { nx } else { 0.5 * (lo + hi) };
        if (newton && step.abs() <= 2.0 * f64::EPSILON * x) || hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    if (cf.value(x) - t).abs() > 1e-12 * t.max(1.0) {
        return numerical(format!("F⁻¹({t}) did not converge"), (cf.value(x) - t).abs());
    }
    Ok(x)
}

/// y_j = F⁻¹(j) for an integer j ≥ 1.
pub fn invert_f(cf: &dyn CountingFunction, j: u64) -> Result<f64> {
    if j == 0 {
        return domain("index must be at least 1");
    }
    invert_counting(cf, j as f64)
}

/// Outcome of sampling the standing assumptions on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub growth: bool,
    pub increasing: bool,
    pub second_decreasing: bool,
}

/// Samples F ≤ C·x^{1+δ}, F′(0) = 0 < F′ and F″ decreasing at the points
/// of `grid` (sorted).
pub fn check_conditions(cf: &dyn CountingFunction, grid: &[f64]) -> ConditionCheck {
    let p = 1.0 + cf.delta();
    let growth = grid.iter().all(|&x| cf.value(x) <= cf.c_growth() * x.powf(p) * (1.0 + 1e-12));
    let increasing = cf.prime(0.0) == 0.0 && grid.iter().filter(|&&x| x > 0.0).all(|&x| cf.prime(x) > 0.0);
    let second_decreasing = grid.windows(2).all(|w| cf.second(w[1]) <= cf.second(w[0]) * (1.0 + 1e-12));
    ConditionCheck { growth, increasing, second_decreasing }
}
