use std::f64::consts::PI;

use proptest::prelude::*;
use satkernel::kernels::*;
use satkernel::quad::{adaptive_to_infinity, composite};
use satkernel::specfun::{sin_integral, EULER_GAMMA};
use satkernel::variance::*;

/// 2∫₀^L r f(r) dr + 2L∫_L^∞ f(r) dr for an even pair product f(r).
fn reduction(f: impl Fn(f64) -> f64, l: f64, tail: f64) -> f64 {
    let panels = (l * 8.0).ceil() as usize;
    2.0 * composite(0.0, l, panels, 16, |r| r * f(r)) + 2.0 * l * tail
}

#[test]
fn sine_closed_form_matches_direct_quadrature() {
    let k = sine_kernel(1.0).unwrap();
    for l in [0.5, 1.0, 5.0, 10.0, 20.0] {
        let d = variance_direct(&k, 0.0, l, 50.0).unwrap();
        let c = variance_sine_closed(1.0, l).unwrap();
        assert!((d.value - c.value).abs() < 1e-6, "L={l}: {} vs {}", d.value, c.value);
        assert!(d.value >= -d.err_estimate && d.warning.is_none());
    }
    // pinned on first evaluation
    let v1 = variance_sine_closed(1.0, 1.0).unwrap().value;
    assert!((v1 - 0.344_162_593_514_038_3).abs() < 1e-13, "{v1}");
}

#[test]
fn sine_variance_grows_logarithmically() {
    let n = 400;
    let mean: f64 = (0..=n)
        .map(|i| {
            let l = 50.0 + 10.0 * i as f64 / n as f64;
            variance_sine_closed(1.0, l).unwrap().value - ((2.0 * PI * l).ln() + EULER_GAMMA + 1.0) / (PI * PI)
        })
        .sum::<f64>()
        / (n + 1) as f64;
    assert!(mean.abs() < 1e-3, "{mean}");
}

#[test]
fn small_intervals_count_the_mean() {
    let m = EquidistantModel::with_d(1.0, 2.0).unwrap();
    let k = sine_kernel(1.0).unwrap();
    let l = 1e-3;
    let v = variance_direct(&k, 0.0, l, 50.0).unwrap().value;
    assert!((v - l).abs() < 2.0 * l * l, "{v}");
    let t = variance_offset(&m, 0.0, l).unwrap().value;
    // the density at R = 0 is 1 + 1/(πd)
    let rho = 1.0 + 1.0 / (PI * 2.0);
    assert!((t - rho * l).abs() < 5.0 * l * l, "{t}");
    let ss = EquidistantModel::ss_with_d(1.0, 1.0).unwrap();
    assert!((variance_vd(&ss, l).unwrap().value - l).abs() < 5.0 * l * l);
}

#[test]
fn offset_form_matches_direct_quadrature() {
    for &(r, l, d) in &[(0.3, 7.6, 2.0), (0.0, 3.3, 1.5), (0.71, 12.25, 3.0)] {
        let m = EquidistantModel::with_d(1.0, d).unwrap();
        let k = kernel_ls_approx(&m).unwrap();
        let direct = variance_direct(&k, r, l, 200.0).unwrap();
        let closed = variance_offset(&m, r, l).unwrap();
        assert!((direct.value - closed.value).abs() < 1e-5, "({r},{l},{d}): {} vs {}", direct.value, closed.value);
    }
}

#[test]
fn quoted_fourth_block_differs_by_a_pure_four_theta_harmonic() {
    let m = EquidistantModel::with_d(1.0, 2.0).unwrap();
    let diff = |r: f64| {
        offset_variance(&m, r, 7.6, FourthBlock::Quoted).unwrap().value - variance_offset(&m, r, 7.6).unwrap().value
    };
    assert!(diff(0.3).abs() > 1e-4);
    // period a/4 in θ/π means period a/2 in R, and zero mean over it
    for r in [0.1, 0.3, 0.45] {
        assert!((diff(r) - diff(r + 0.5)).abs() < 1e-14);
        assert!((diff(r) + diff(r + 0.25)).abs() < 1e-14);
    }
}

#[test]
fn theta_average_reproduces_averaged_form() {
    for &(l, d) in &[(7.6, 2.0), (2.3, 0.7), (40.0, 5.0)] {
        let m = EquidistantModel::with_d(1.0, d).unwrap();
        let avg: f64 = (0..64).map(|i| variance_offset(&m, i as f64 / 64.0, l).unwrap().value).sum::<f64>() / 64.0;
        let v = variance_averaged(&m, l).unwrap().value;
        assert!((avg - v).abs() < 1e-8, "L={l} d={d}: {avg} vs {v}");
    }
}

#[test]
fn averaged_form_matches_reduction() {
    let (l, d) = (5.0, 2.0);
    let m = EquidistantModel::with_d(1.0, d).unwrap();
    let f = averaged_pair_product(&m, PairKind::Ls).unwrap();
    // f(r) = −cos 2πr/(2π²r²) + (d⁴ + 3d²r²)/(2π²r²(d² + r²)²)
    let smooth = adaptive_to_infinity(l, 1e-14, |r| {
        let q = d * d + r * r;
        (d.powi(4) + 3.0 * d * d * r * r) / (2.0 * PI * PI * r * r * q * q)
    })
    .value;
    let k = 2.0 * PI;
    let osc = (k * l).cos() / l - k * (PI / 2.0 - sin_integral(k * l).unwrap());
    let tail = smooth - osc / (2.0 * PI * PI);
    let oracle = reduction(|r| f(r, 0.0), l, tail);
    let v = variance_averaged(&m, l).unwrap().value;
    assert!((v - oracle).abs() < 1e-6, "{v} vs {oracle}");
}

#[test]
fn averaged_form_limits() {
    let m = EquidistantModel::with_d(1.0, 50.0).unwrap();
    let v = variance_averaged(&m, 1.0).unwrap().value;
    let s = variance_sine_closed(1.0, 1.0).unwrap().value;
    assert!((v - s).abs() < 0.02 * s);
    for d in [2.0, 20.0] {
        let m = EquidistantModel::with_d(1.0, d).unwrap();
        let v = variance_averaged(&m, 1e4 * d).unwrap().value;
        assert!((v - saturation_level(&m)).abs() < 1e-3);
    }
    let m = EquidistantModel::with_d(1.0, 1e3).unwrap();
    assert!((variance_averaged(&m, 1e7).unwrap().value - saturation_level(&m)).abs() < 5e-3);
}

#[test]
fn saturation_level_is_scale_invariant_and_invertible() {
    let base = EquidistantModel::free(1.3, 0.8).unwrap();
    for c in [0.1, 2.0, 7.5] {
        let m = EquidistantModel::free(1.3 * c, 0.8 * c * c).unwrap();
        assert!((saturation_level(&m) - saturation_level(&base)).abs() < 1e-14);
    }
    for d in [0.3, 2.0, 1e3] {
        let back = d_for_level(saturation_level_d(d));
        assert!((back - d).abs() < 1e-12 * d);
    }
}

#[test]
fn direct_variance_saturates_after_offset_average() {
    let m = EquidistantModel::with_d(1.0, 2.0).unwrap();
    let k = kernel_ls_approx(&m).unwrap();
    let avg: f64 = (0..16).map(|i| variance_direct(&k, i as f64 / 16.0, 100.0, 50.0).unwrap().value).sum::<f64>() / 16.0;
    let level = saturation_level(&m);
    assert!((avg - level).abs() < 0.02 * level, "{avg} vs {level}");
}

#[test]
fn translation_covariance() {
    let m = EquidistantModel::with_d(1.0, 1.5).unwrap();
    let shifted = m.with_offset(0.37).unwrap();
    let k0 = kernel_ls_approx(&m).unwrap();
    let k1 = kernel_ls_approx(&shifted).unwrap();
    let a = variance_direct(&k0, 0.2, 2.5, 30.0).unwrap().value;
    let b = variance_direct(&k1, 0.57, 2.5, 30.0).unwrap().value;
    assert!((a - b).abs() < 1e-8, "{a} vs {b}");
}

#[test]
fn vd_matches_reduction() {
    let (l, d) = (3.0, 1.0);
    let m = EquidistantModel::ss_with_d(1.0, d).unwrap();
    let f = averaged_pair_product(&m, PairKind::Lss).unwrap();
    let tail = composite(l, 200.0, 1600, 16, |r| f(r, 0.0));
    let oracle = reduction(|r| f(r, 0.0), l, tail);
    let v = variance_vd(&m, l).unwrap();
    assert!((v.value - oracle).abs() < 1e-5, "{} vs {oracle}", v.value);
}

#[test]
fn vd_saturation_ratio_trend() {
    let ratios: Vec<f64> = [1e2, 1e3, 1e4].iter().map(|&d| vd_limit(d).unwrap() * PI * PI / d.ln()).collect();
    assert!(ratios.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs()), "{ratios:?}");
    // the limit is reached from large L
    let m = EquidistantModel::ss_with_d(1.0, 100.0).unwrap();
    let far = variance_vd(&m, 1e5).unwrap().value;
    assert!((far - vd_limit(100.0).unwrap()).abs() < 1e-6);
}

#[test]
fn un_formula_properties() {
    for arc in [0.3, 1.0, 2.2] {
        let a = variance_un(20, arc).unwrap().value;
        let b = variance_un(20, 2.0 * PI - arc).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }
    let n = 64;
    let peak = variance_un(n, PI).unwrap().value;
    let predicted = ((2.0 * n as f64).ln() + EULER_GAMMA + 1.0) / (PI * PI);
    assert!((peak - predicted).abs() < 2.0 / n as f64);
    assert!(variance_un(n, 2.0 * PI).unwrap().value.abs() < 1e-12);
    assert!(variance_un(n, 7.0).is_err());
    assert!(variance_un(0, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn averaged_variance_crosses_over(logl in -1.0f64..6.0, which in 0usize..3) {
        let d = [1.0, 10.0, 100.0][which];
        let l = 10f64.powf(logl);
        let m = EquidistantModel::with_d(1.0, d).unwrap();
        let v = variance_averaged(&m, l).unwrap().value;
        let bound = variance_sine_closed(1.0, l).unwrap().value.min(saturation_level(&m));
        prop_assert!(v > 0.5 * bound && v < 1.5 * bound, "L={} d={}: {} vs {}", l, d, v, bound);
    }

    #[test]
    fn closed_forms_are_nonnegative(r in 0.0f64..1.0, l in 0.01f64..50.0, d in 0.5f64..20.0) {
        let m = EquidistantModel::with_d(1.0, d).unwrap();
        prop_assert!(variance_offset(&m, r, l).unwrap().value > 0.0);
        let ss = EquidistantModel::ss_with_d(1.0, d).unwrap();
        prop_assert!(variance_vd(&ss, l).unwrap().value > 0.0);
    }
}
