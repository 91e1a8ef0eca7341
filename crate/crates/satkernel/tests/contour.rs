use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satkernel::contour::*;
use satkernel::kernels::{boundary_combine, kernel_ls, Boundary, BoundaryMode, EndTime, EquidistantModel};
use satkernel::quad::composite;
use satkernel::specfun::PointSequence;

fn phi(x: f64, s: f64) -> f64 {
    (-x * x / (2.0 * s)).exp() / (2.0 * PI * s).sqrt()
}

#[test]
fn finite_t_forms_agree_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = ContourSpec::default();
    for n in [3, 5, 7] {
        let m = FiniteModel::equidistant(n, 1.0, 0.8, EndTime::Finite(1.3), 0.2).unwrap();
        for _ in 0..10 {
            let (u, v) = (rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5));
            let d = kernel_finite_st(&m, &spec, u, v).unwrap();
            let r = kernel_finite_st_residue(&m, &spec, u, v).unwrap();
            assert!((d - r).abs() < 1e-8, "N={n} ({u},{v}): {d} vs {r}");
        }
    }
}

#[test]
fn half_line_forms_agree_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let spec = ContourSpec::default();
    for (n, b) in [(3, Boundary::Absorbing), (5, Boundary::Reflecting), (7, Boundary::Absorbing)] {
        let y: Vec<f64> = (1..=n).map(|j| 0.6 * j as f64 + 0.1 * (j * j) as f64).collect();
        let m = FiniteModel::half_line(y, 0.9, b).unwrap();
        for _ in 0..10 {
            let (u, v) = (rng.random_range(0.0..4.0), rng.random_range(0.0..4.0));
            let d = kernel_finite_boundary(&m, &spec, u, v, Form::Double).unwrap();
            let r = kernel_finite_boundary(&m, &spec, u, v, Form::Residue).unwrap();
            assert!((d - r).abs() < 1e-8, "{b:?} N={n} ({u},{v}): {d} vs {r}");
        }
    }
}

#[test]
fn single_bridge_density() {
    let (s, t) = (0.6, 1.7);
    let m = FiniteModel::new(vec![0.0], 1.0, s, EndTime::Finite(t), Boundary::Free).unwrap();
    for &u in &[-1.2, -0.1, 0.5, 2.0] {
        let exact = phi(u, s) * phi(u, t) / phi(0.0, s + t);
        let k = kernel_finite_st(&m, &ContourSpec::default(), u, u).unwrap();
        assert!((k - exact).abs() < 1e-10, "{k} vs {exact}");
    }
}

#[test]
fn two_paths_match_karlin_mcgregor() {
    let s = 0.7;
    let y = [-0.4, 0.9];
    let m = FiniteModel::new(y.to_vec(), 1.0, s, EndTime::Infinite, Boundary::Free).unwrap();
    for &u in &[-1.0, 0.2, 1.3] {
        // one-point density of the Vandermonde h-transform
        let rho = composite(-15.0, 15.0, 300, 16, |x| {
            (x - u) / (y[1] - y[0]) * (phi(u - y[0], s) * phi(x - y[1], s) - phi(u - y[1], s) * phi(x - y[0], s))
        });
        let k = kernel_finite_free(&m, &ContourSpec::default(), u, u).unwrap();
        assert!((k - rho).abs() < 1e-12, "{k} vs {rho}");
    }
}

fn mass(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    composite(a, b, ((b - a) * 8.0) as usize, 16, f)
}

#[test]
fn total_mass_is_n() {
    let spec = ContourSpec::default();
    let st = FiniteModel::equidistant(5, 1.0, 1.0, EndTime::Finite(1.0), 0.0).unwrap();
    let m = mass(|u| kernel_finite_st_residue(&st, &spec, u, u).unwrap(), -20.0, 20.0);
    assert!((m - 5.0).abs() < 1e-6, "{m}");

    let free = FiniteModel::equidistant(11, 1.0, 1.0, EndTime::Infinite, 0.0).unwrap();
    let w = 5.0 + 10.0;
    let m = mass(|u| kernel_finite_free(&free, &spec, u, u).unwrap(), -w, w);
    assert!((m - 11.0).abs() < 1e-6, "{m}");

    for b in [Boundary::Absorbing, Boundary::Reflecting] {
        let half = FiniteModel::half_line(vec![1.0, 2.0, 3.0, 4.0], 1.0, b).unwrap();
        let m = mass(|u| kernel_finite_boundary(&half, &spec, u, u, Form::Residue).unwrap(), 0.0, 14.0);
        assert!((m - 4.0).abs() < 1e-6, "{b:?}: {m}");
    }
}

#[test]
fn reflection_symmetry_of_equidistant_start() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let m = FiniteModel::equidistant(9, 1.0, 0.5, EndTime::Infinite, 0.0).unwrap();
    let spec = ContourSpec::default();
    let k = |u, v| kernel_finite_free(&m, &spec, u, v).unwrap();
    for _ in 0..5 {
        let (u, v) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let a = k(u, v) * k(v, u);
        let b = k(-u, -v) * k(-v, -u);
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn finite_free_kernel_approaches_the_limit() {
    let lim = EquidistantModel::with_d(1.0, 1.0).unwrap();
    let ls = kernel_ls(&lim, 1e-15).unwrap();
    let (u, v) = (0.3, 0.7);
    let errs: Vec<f64> = [51, 101, 201, 401]
        .iter()
        .map(|&n| {
            let m = FiniteModel::equidistant(n, 1.0, lim.s, EndTime::Infinite, 0.0).unwrap();
            (kernel_finite_free(&m, &ContourSpec::default(), u, v).unwrap() - ls.evaluate(u, v)).abs()
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    // the deficit decays like 1/N
    assert!(errs[3] < 2e-3, "{errs:?}");
}

#[test]
fn half_line_kernel_approaches_mirrored_limit() {
    let s = 1.0 / (2.0 * PI);
    let ls = kernel_ls(&EquidistantModel::free(1.0, s).unwrap(), 1e-15).unwrap();
    let ab = boundary_combine(&ls, BoundaryMode::Absorbing).unwrap();
    let err = |n: i32, u: f64, v: f64| {
        let y: Vec<f64> = (1..=n).map(f64::from).collect();
        let m = FiniteModel::half_line(y, s, Boundary::Absorbing).unwrap();
        (kernel_finite_boundary(&m, &ContourSpec::default(), u, v, Form::Residue).unwrap() - ab.evaluate(u, v)).abs()
    };
    for &(u, v) in &[(0.5, 0.8), (1.2, 2.1), (2.5, 2.5)] {
        let (e1, e2) = (err(101, u, v), err(201, u, v));
        // finite-size error ∝ 1/N
        assert!(e2 < 4e-3, "({u},{v}): {e2}");
        assert!((0.4..0.6).contains(&(e2 / e1)), "({u},{v}): {e1} {e2}");
    }
}

#[test]
fn contour_independence() {
    let m = FiniteModel::equidistant(5, 1.0, 1.0, EndTime::Finite(1.0), 0.0).unwrap();
    let base = ContourSpec::default().with_l(0.5).with_m(0.15);
    let (u, v) = (0.3, -0.2);
    let k0 = kernel_finite_st(&m, &base, u, v).unwrap();
    for spec in [base.with_l(-0.5), base.with_l(1.5), base.with_m(0.3)] {
        let k = kernel_finite_st(&m, &spec, u, v).unwrap();
        assert!((k - k0).abs() < 1e-9, "{spec:?}: {k} vs {k0}");
    }
    let r0 = kernel_finite_st_residue(&m, &base, u, v).unwrap();
    for l in [0.0, 1.0] {
        let r = kernel_finite_st_residue(&m, &base.with_l(l), u, v).unwrap();
        assert!((r - r0).abs() < 1e-9, "L={l}: {r} vs {r0}");
    }
}

#[test]
fn refinement_delta_is_small() {
    let m = FiniteModel::equidistant(7, 1.0, 0.7, EndTime::Finite(0.9), 0.0).unwrap();
    let (_, delta) = refined(&ContourSpec::default(), |s| kernel_finite_st(&m, s, 0.1, 0.4)).unwrap();
    assert!(delta < 1e-10, "{delta}");
}

#[test]
fn crossing_contours_are_rejected() {
    let m = FiniteModel::equidistant(5, 1.0, 1.0, EndTime::Finite(1.0), 0.0).unwrap();
    let spec = ContourSpec::default().with_l(0.02);
    assert!(matches!(kernel_finite_st(&m, &spec, 0.0, 0.0), Err(satkernel::Error::Configuration(_))));
}

#[test]
fn infinite_absorbing_matches_lattice_limit() {
    let seq = PointSequence::equidistant(1.0, 400).unwrap();
    let ls = kernel_ls(&EquidistantModel::free(1.0, 1.0).unwrap(), 1e-15).unwrap();
    let ab = boundary_combine(&ls, BoundaryMode::Absorbing).unwrap();
    let k = InfiniteAbsorbing::new(&seq, 1.0, (0.0, 3.0), &ContourSpec::default()).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            let (u, v) = (0.5 + 0.625 * i as f64, 0.5 + 0.625 * j as f64);
            let x = k.evaluate(u, v).unwrap();
            assert!((x - ab.evaluate(u, v)).abs() < 1e-4, "({u},{v}): {x}");
        }
    }
    assert!(k.evaluate(0.0, 1.3).unwrap().abs() < 1e-9);
}

#[test]
fn infinite_absorbing_irregular_start_has_valid_correlations() {
    // y_j = j + 0.3 sin j: positive density and ρ₂(u,v) = K(u,u)K(v,v) − K(u,v)K(v,u) ≥ 0
    let y: Vec<f64> = (1..=500).map(|j| j as f64 + 0.3 * (j as f64).sin()).collect();
    let seq = PointSequence::new(y, 0.0, satkernel::specfun::Tail::PowerLaw { coeff: 1.0, power: 1.0 }).unwrap();
    let k = InfiniteAbsorbing::new(&seq, 0.5, (0.2, 3.0), &ContourSpec::default()).unwrap();
    let pts = [0.4, 1.1, 1.9, 2.7];
    for &u in &pts {
        let d = k.evaluate(u, u).unwrap();
        assert!(d > 0.0, "{d}");
        for &v in &pts {
            let o = k.evaluate(u, v).unwrap() * k.evaluate(v, u).unwrap();
            assert!(o <= d * k.evaluate(v, v).unwrap() + 1e-10);
        }
    }
}

#[test]
fn divergent_sequences_are_rejected() {
    let y: Vec<f64> = (1..=100).map(|j| (j as f64).sqrt()).collect();
    let seq = PointSequence::new(y, 0.0, satkernel::specfun::Tail::PowerLaw { coeff: 1.0, power: 2.0 });
    if let Ok(seq) = seq {
        assert!(InfiniteAbsorbing::new(&seq, 1.0, (0.0, 1.0), &ContourSpec::default()).is_err());
    }
}
