//! Name-keyed catalogs of kernel families, variance engines and counting
//! functions, so front ends can pick strategies from strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::approx::{counting_function, CountingFunction, COUNTING_FUNCTIONS};
use crate::contour::{finite_kernel_handle, ContourSpec, FiniteModel, InfiniteAbsorbing};
use crate::error::{domain, Result};
use crate::kernels::*;
use crate::specfun::PointSequence;
use crate::variance::*;

/// Parameters shared by all kernel families. Unused fields are ignored.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelParams {
    pub a: f64,
    pub s: f64,
    /// Overrides `s` through d = 2πS/a² when set.
    pub d: Option<f64>,
    pub delta: f64,
    /// Bessel order.
    pub nu: f64,
    /// Number of paths for the finite contour kernel.
    pub n: usize,
    /// Evaluation window, needed by the infinite contour kernel.
    pub window: (f64, f64),
    pub tol: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams { a: 1.0, s: 1.0, d: None, delta: 0.0, nu: 0.5, n: 21, window: (0.0, 5.0), tol: 1e-14 }
    }
}

impl KernelParams {
    pub fn time(&self) -> f64 {
        match self.d {
            Some(d) => d * self.a * self.a / (2.0 * std::f64::consts::PI),
            None => self.s,
        }
    }

    pub fn free_model(&self) -> Result<EquidistantModel> {
        EquidistantModel::free(self.a, self.time())?.with_offset(self.delta)
    }

    pub fn ss_model(&self) -> Result<EquidistantModel> {
        let s = self.time();
        EquidistantModel::new(self.a, s, self.delta, Boundary::Free, EndTime::Finite(s))
    }
}

pub trait KernelFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn build(&self, p: &KernelParams) -> Result<KernelHandle>;
}

struct Sine;
struct Ls;
struct LsApprox;
struct Lss;
struct LssApprox;
struct HalfLine(BoundaryMode);
struct Bessel;
struct ContourFinite;
struct ContourInfinite;

impl KernelFamily for Sine {
    fn name(&self) -> &'static str {
        "sine"
    }
    fn describe(&self) -> &'static str {
        "sin(π(x−y)/a)/(π(x−y))"
    }
    fn build(&self, p: &KernelParams) -> Result<KernelHandle> {
        sine_kernel(p.a)
    }
}

impl KernelFamily for Ls {
    fn name(&self) -> &'static str {
        "LS"
    }
    fn describe(&self) -> &'static str {
        "equidistant start, T = ∞, series form"
    }
    fn build(&self, p: &KernelParams) -> Result<KernelHandle> {
        kernel_ls(&p.free_model()?, p.tol)
    }
}

impl KernelFamily for LsApprox {
    fn name(&self) -> &'static str {
        "LS-approx"
    }
    fn describe(&self) -> &'static str {
        "sine kernel plus the leading d-term"
    }
    fn build(&self, p: &KernelParams) -> Result<KernelHandle> {
        kernel_ls_approx(&p.free_model()?)
    }
}

impl KernelFamily for Lss {
    fn name(&self) -> &'static str {
        "LSS"
    }
    fn describe(&self) -> &'static str {
        "equidistant start and end, T = S, theta form"
    }
    fn build(&self, p: &KernelParams) -> Result<KernelHandle> {
        kernel_lss(&p.ss_model()?, p.tol)
    }
}

impl KernelFamily for LssApprox {
    fn name(&self) -> &'static str {
        "LSS-approx"
    }
    fn describe(&self) -> &'static str {
        "leading part of the theta form"
    }
    fn build(&self, p: &KernelParams) -> Result<KernelHandle> {
        kernel_lss_approx(&p.ss_model()?)
    }
}

impl KernelFamily for HalfLine {
    fn name(&self) -> &'static str {
        match self.0 {
            BoundaryMode::Absorbing => "absorbing",
            BoundaryMode::Reflecting => "reflecting",
        }
    }
    fn describe(&self) -> &'static str {
        "K_S(u,v) ∓ K_S(−u,v) for y_j = a·j"
    }
    fn build(&self, p: &KernelParams) -> Result<KernelHandle> {
        let base = kernel_ls(&EquidistantModel::free(p.a, p.time())?, p.tol)?;
        boundary_combine(&base, self.0)
    }
}

impl KernelFamily for Bessel {
    fn name(&self) -> &'static str {
        "bessel"
    }
    fn describe(&self) -> &'static str {
        "rescaled Bessel kernel, ν ∈ {−1/2, 1/2, 0, 1, 2}"
    }
    fn build(&self, p: &KernelParams) -> Result<KernelHandle> {
        let nu = p.nu;
        // validates ν
        rescaled_bessel(nu, 1.0, 1.0)?;
        Ok(KernelHandle::new(
            format!("bessel(nu={nu})"),
            KernelDomain::HalfLine,
            Representation::Composite,
            true,
            FarField::Unknown,
            move |x, y| rescaled_bessel(nu, x, y).unwrap_or(f64::NAN),
        ))
    }
}

impl KernelFamily for ContourFinite {
    fn name(&self) -> &'static str {
        "contour-finite"
    }
    fn describe(&self) -> &'static str {
        "N paths from a(j − n) + Δ, T = ∞, residue form"
    }
    fn build(&self, p: &KernelParams) -> Result<KernelHandle> {
        let m = FiniteModel::equidistant(p.n, p.a, p.time(), EndTime::Infinite, p.delta)?;
        finite_kernel_handle(&m, &ContourSpec::default())
    }
}

impl KernelFamily for ContourInfinite {
    fn name(&self) -> &'static str {
        "contour-infinite"
    }
    fn describe(&self) -> &'static str {
        "absorbing kernel from the canonical product of y_j = a·j"
    }
    fn build(&self, p: &KernelParams) -> Result<KernelHandle> {
        let seq = PointSequence::equidistant(p.a, 4000)?;
        let k = Arc::new(InfiniteAbsorbing::new(&seq, p.time(), p.window, &ContourSpec::default())?);
        Ok(KernelHandle::new(
            format!("contour-infinite(a={}, S={})", p.a, p.time()),
            KernelDomain::HalfLine,
            Representation::Contour,
            false,
            FarField::Unknown,
            move |u, v| k.evaluate(u, v).unwrap_or(f64::NAN),
        ))
    }
}

/// Inputs for a variance engine.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarianceQuery {
    pub kernel: KernelParams,
    pub r: f64,
    pub l: f64,
    /// Circle size for the `un` engine (then `l` is the arc).
    pub n: usize,
    /// Kernel family used by the direct engine.
    pub family: String,
    pub cutoff: Option<f64>,
}

impl Default for VarianceQuery {
    fn default() -> Self {
        VarianceQuery { kernel: KernelParams::default(), r: 0.0, l: 1.0, n: 64, family: "LS-approx".into(), cutoff: None }
    }
}

impl VarianceQuery {
    /// Cutoff for the direct engine: max(200a, 20ad).
    pub fn effective_cutoff(&self) -> f64 {
        let a = self.kernel.a;
        let d = 2.0 * std::f64::consts::PI * self.kernel.time() / (a * a);
        self.cutoff.unwrap_or((200.0 * a).max(20.0 * a * d))
    }
}

pub trait VarianceEngine: Send + Sync {
    fn method(&self) -> VarianceMethod;
    fn compute(&self, q: &VarianceQuery, kernels: &Registry) -> Result<VarianceReport>;
}

struct Direct;
struct Closed;
struct Averaged;
struct Vd;
struct SineClosed;
struct Un;

impl VarianceEngine for Direct {
    fn method(&self) -> VarianceMethod {
        VarianceMethod::Direct
    }
    fn compute(&self, q: &VarianceQuery, reg: &Registry) -> Result<VarianceReport> {
        let k = reg.kernel(&q.family)?.build(&q.kernel)?;
        variance_direct(&k, q.r, q.l, q.effective_cutoff())
    }
}

impl VarianceEngine for Closed {
    fn method(&self) -> VarianceMethod {
        VarianceMethod::ClosedForm
    }
    fn compute(&self, q: &VarianceQuery, _: &Registry) -> Result<VarianceReport> {
        variance_offset(&q.kernel.free_model()?, q.r, q.l)
    }
}

impl VarianceEngine for Averaged {
    fn method(&self) -> VarianceMethod {
        VarianceMethod::Averaged
    }
    fn compute(&self, q: &VarianceQuery, _: &Registry) -> Result<VarianceReport> {
        variance_averaged(&q.kernel.free_model()?, q.l)
    }
}

impl VarianceEngine for Vd {
    fn method(&self) -> VarianceMethod {
        VarianceMethod::Vd
    }
    fn compute(&self, q: &VarianceQuery, _: &Registry) -> Result<VarianceReport> {
        variance_vd(&q.kernel.ss_model()?, q.l)
    }
}

impl VarianceEngine for SineClosed {
    fn method(&self) -> VarianceMethod {
        VarianceMethod::Sine
    }
    fn compute(&self, q: &VarianceQuery, _: &Registry) -> Result<VarianceReport> {
        variance_sine_closed(q.kernel.a, q.l)
    }
}

impl VarianceEngine for Un {
    fn method(&self) -> VarianceMethod {
        VarianceMethod::Un
    }
    fn compute(&self, q: &VarianceQuery, _: &Registry) -> Result<VarianceReport> {
        variance_un(q.n, q.l)
    }
}

/// All strategies, keyed by their command-line names.
pub struct Registry {
    kernels: BTreeMap<&'static str, Box<dyn KernelFamily>>,
    engines: BTreeMap<&'static str, Box<dyn VarianceEngine>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry { kernels: BTreeMap::new(), engines: BTreeMap::new() };
        let families: Vec<Box<dyn KernelFamily>> = vec![
            Box::new(Sine),
            Box::new(Ls),
            Box::new(LsApprox),
            Box::new(Lss),
            Box::new(LssApprox),
            Box::new(HalfLine(BoundaryMode::Absorbing)),
            Box::new(HalfLine(BoundaryMode::Reflecting)),
            Box::new(Bessel),
            Box::new(ContourFinite),
            Box::new(ContourInfinite),
        ];
        for f in families {
            r.register_kernel(f);
        }
        let engines: Vec<Box<dyn VarianceEngine>> =
            vec![Box::new(Direct), Box::new(Closed), Box::new(Averaged), Box::new(Vd), Box::new(SineClosed), Box::new(Un)];
        for e in engines {
            r.register_engine(e);
        }
        r
    }
}

impl Registry {
    pub fn register_kernel(&mut self, family: Box<dyn KernelFamily>) {
        self.kernels.insert(family.name(), family);
    }

    pub fn register_engine(&mut self, engine: Box<dyn VarianceEngine>) {
        self.engines.insert(engine.method().name(), engine);
    }

    pub fn kernel(&self, name: &str) -> Result<&dyn KernelFamily> {
        match self.kernels.get(name) {
            Some(f) => Ok(f.as_ref()),
            None => domain(format!("unknown kernel family '{name}' (known: {})", self.kernel_names().join(", "))),
        }
    }

    pub fn engine(&self, name: &str) -> Result<&dyn VarianceEngine> {
        match self.engines.get(name) {
            Some(e) => Ok(e.as_ref()),
            None => domain(format!("unknown variance method '{name}' (known: {})", self.engine_names().join(", "))),
        }
    }

    /// Counting functions are parametric ("power:<δ>"), so they are parsed
    /// rather than stored.
    pub fn counting(&self, name: &str) -> Result<Arc<dyn CountingFunction>> {
        counting_function(name)
    }

    pub fn kernel_names(&self) -> Vec<&'static str> {
        self.kernels.keys().copied().collect()
    }

    pub fn engine_names(&self) -> Vec<&'static str> {
        self.engines.keys().copied().collect()
    }

    pub fn counting_names(&self) -> &'static [&'static str] {
        COUNTING_FUNCTIONS
    }
}
