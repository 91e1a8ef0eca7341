use std::f64::consts::PI;
use std::sync::Arc;

use super::counting::{invert_counting, CountingFunction, Unfolding};
use crate::error::{domain, Result};
use crate::kernels::{kernel_ls, kernel_ls_approx, rescale, EquidistantModel, KernelHandle};
use crate::variance::saturation_level;

/// The lattice kernel at height α, unfolded to unit density with G = F⁻¹.
#[derive(Debug, Clone)]
pub struct UnfoldedModel {
    pub alpha: f64,
    /// λ = 1/F′(F⁻¹(α))
    pub lambda: f64,
    /// 2π/λ²
    pub d: f64,
    /// K(ỹ; G(x) − G(α), G(y) − G(α))·√(G′(x)G′(y)) with ỹ_j = λj, S = 1
    pub rescaled: KernelHandle,
    /// sin π(x−y)/π(x−y) + (d cos π(x+y−2α) + (y−x) sin π(x+y−2α))/π(d² + (y−x)²)
    pub local: KernelHandle,
    /// (1/π²)(log 2πd + γ + 1) of the local model
    pub saturation: f64,
}

pub fn unfolded_model(alpha: f64) -> Result<UnfoldedModel> {
    if !(alpha >= Unfolding::START) {
        return domain(format!("unfolded model needs α ≥ 2πe, got {alpha}"));
    }
    let f: Arc<dyn CountingFunction> = Arc::new(Unfolding::new()?);
    let g_alpha = invert_counting(f.as_ref(), alpha)?;
    let lambda = 1.0 / f.prime(g_alpha);
    let model = EquidistantModel::free(lambda, 1.0)?;
    let d = model.d();

    let lattice = kernel_ls(&model, 1e-15)?;
    let shifted = KernelHandle::new(
        format!("lattice(λ={lambda:.6})"),
        lattice.domain,
        lattice.representation,
        false,
        lattice.far_field,
        move |u, v| lattice.evaluate(u - g_alpha, v - g_alpha),
    );
    let (fg, fp) = (f.clone(), f.clone());
    let g = move |x: f64| invert_counting(fg.as_ref(), x).unwrap_or(f64::NAN);
    let g_prime = move |x: f64| 1.0 / fp.prime(invert_counting(fp.as_ref(), x).unwrap_or(f64::NAN));
    let probe: Vec<f64> = (0..=16).map(|i| alpha - 4.0 + 0.5 * i as f64).filter(|&x| x > 0.0).collect();
    let rescaled = rescale(&shifted, g, g_prime, &probe)?.relabel(format!("unfolded(α={alpha})"));

    // unit-spacing approximate kernel, translated to the height α
    let unit = kernel_ls_approx(&EquidistantModel::with_d(1.0, d)?)?;
    let local = KernelHandle::new(
        format!("unfolded-local(α={alpha}, d={d:.4})"),
        unit.domain,
        unit.representation,
        false,
        unit.far_field,
        move |x, y| unit.evaluate(x - alpha, y - alpha),
    );
    Ok(UnfoldedModel { alpha, lambda, d, rescaled, local, saturation: saturation_level(&model) })
}

/// (1/π²)log log(α/2π), the saturation level expected at height α.
pub fn log_log_level(alpha: f64) -> f64 {
    (alpha / (2.0 * PI)).ln().ln() / (PI * PI)
}
