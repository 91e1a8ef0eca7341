use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use satkernel::quad::{adaptive, composite};
use satkernel::specfun::*;

fn th(k: u8, x: C64, tau: C64) -> C64 {
    theta(k, ThetaArg::new(x, tau).unwrap(), 1e-17).unwrap()
}

#[test]
fn theta3_matches_partial_sum() {
    let direct: f64 = (-10i32..=10).map(|n| (-PI * (n * n) as f64).exp()).sum();
    let t = th(3, C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    assert!((t.re - direct).abs() < 1e-14 && t.im.abs() < 1e-15);
    assert!(th(1, C64::new(0.0, 0.0), C64::new(0.0, 1.0)).norm() < 1e-16);
}

#[test]
fn theta1_derivative_identity() {
    let tau = C64::new(0.0, 1.0 / 3.0);
    let d = |h: f64| (th(1, C64::new(h, 0.0), tau) - th(1, C64::new(-h, 0.0), tau)) / (2.0 * h);
    // Richardson on the central difference
    let h = 1e-5;
    let deriv = (4.0 * d(h / 2.0) - d(h)) / 3.0;
    let z = C64::new(0.0, 0.0);
    let rhs = PI * th(2, z, tau) * th(3, z, tau) * th(4, z, tau);
    assert!((deriv - rhs).norm() < 1e-12 * rhs.norm().max(1.0), "{deriv} {rhs}");
}

#[test]
fn jacobi_quartic_identity() {
    let z = C64::new(0.0, 0.0);
    for t in [1.0, 2.0, 0.5] {
        let tau = C64::new(0.0, t);
        let lhs = th(2, z, tau).powi(4) + th(4, z, tau).powi(4);
        assert!((lhs - th(3, z, tau).powi(4)).norm() < 1e-10);
    }
}

#[test]
fn rejects_lower_half_plane_modulus() {
    assert!(ThetaArg::new(C64::new(0.1, 0.0), C64::new(0.3, 0.0)).is_err());
}

proptest! {
    #[test]
    fn theta_parity(x in -2.0f64..2.0, xi in -0.5f64..0.5, tr in -1.0f64..1.0, ti in 0.3f64..3.0) {
        let x = C64::new(x, xi);
        let tau = C64::new(tr, ti);
        for (k, sign) in [(1u8, -1.0), (2, 1.0), (3, 1.0), (4, 1.0)] {
            let a = th(k, -x, tau);
            let b = th(k, x, tau) * sign;
            prop_assert!((a - b).norm() < 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn theta3_quasi_periodicity(x in -1.0f64..1.0, tr in -0.5f64..0.5, ti in 0.5f64..2.0) {
        let x = C64::new(x, 0.0);
        let tau = C64::new(tr, ti);
        let t = th(3, x, tau);
        prop_assert!((th(3, x + 1.0, tau) - t).norm() < 1e-10 * t.norm().max(1.0));
        let factor = (C64::new(0.0, -PI) * tau - C64::new(0.0, 2.0 * PI) * x).exp();
        let shifted = th(3, x + tau, tau);
        prop_assert!((shifted - factor * t).norm() < 1e-10 * shifted.norm().max(1.0));
    }

    #[test]
    fn fg_matches_direct_quadrature(re in 0.2f64..6.0, im in -6.0f64..6.0) {
        let z = C64::new(re, im);
        let (f, g) = fg(z).unwrap();
        // rotate t onto the ray t = r·e^{iπ/4}, where e^{it} decays; no pole crossed for Re z > 0
        let rot = C64::new(1.0, 1.0) / 2f64.sqrt();
        let integral = |r: f64| {
            let t = rot * r;
            (C64::new(0.0, 1.0) * t).exp() / (t + z) * rot
        };
        let re_part = adaptive(0.0, 80.0, 1e-13, |r| integral(r).re).value;
        let im_part = adaptive(0.0, 80.0, 1e-13, |r| integral(r).im).value;
        let direct = C64::new(re_part, im_part);
        prop_assert!((g + C64::new(0.0, 1.0) * f - direct).norm() < 1e-8, "{} {}", g + C64::new(0.0, 1.0) * f, direct);
    }
}

#[test]
fn sine_integral_limits() {
    assert_eq!(sin_integral(0.0).unwrap(), 0.0);
    assert!((sin_integral(1e6).unwrap() - PI / 2.0).abs() < 1e-5);
    assert!(cos_integral(0.0).is_err());
}

#[test]
fn cosine_integral_matches_quadrature() {
    let x = 1e5;
    let body = composite(1.0, x, 100_000, 10, |y| y.cos() / y);
    let tail = -x.sin() / x + x.cos() / (x * x) + 2.0 * x.sin() / x.powi(3);
    let oracle = -(body + tail);
    assert!((cos_integral(1.0).unwrap() - oracle).abs() < 1e-12, "{oracle}");
}

#[test]
fn fg_asymptotics_and_oracle() {
    let (f, g) = fg(C64::new(100.0, 0.0)).unwrap();
    assert!((f.re - 0.01).abs() < 5e-6);
    assert!((g.re - 1e-4).abs() < 6.1e-8);
    // f(1), g(1) by quadrature to 10⁴ plus the two-term asymptotic tail
    let x = 1e4;
    let f_body = composite(0.0, x, 40_000, 10, |t| t.sin() / (t + 1.0));
    let g_body = composite(0.0, x, 40_000, 10, |t| t.cos() / (t + 1.0));
    let w = x + 1.0;
    let f_tail = x.cos() / w + x.sin() / (w * w) - 2.0 * x.cos() / w.powi(3);
    let g_tail = -x.sin() / w + x.cos() / (w * w) + 2.0 * x.sin() / w.powi(3);
    let (f1, g1) = fg(C64::new(1.0, 0.0)).unwrap();
    assert!((f1.re - (f_body + f_tail)).abs() < 1e-8);
    assert!((g1.re - (g_body + g_tail)).abs() < 1e-8);
    assert!(fg(C64::new(-1.0, 0.0)).is_err());
}

#[test]
fn bessel_values() {
    assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-16);
    assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
    let series: f64 = (0..30)
        .map(|k| {
            let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
            (-1f64).powi(k as i32) / (fact(k) * fact(k + 1))
        })
        .sum();
    assert!((bessel_j(1.0, 2.0).unwrap() - series).abs() < 1e-12);
    assert!(bessel_j(0.3, 1.0).is_err());
}

#[test]
fn canonical_product_values() {
    let seq = PointSequence::equidistant(1.0, 2000).unwrap();
    let (p, _) = canonical_product(&seq, C64::new(0.0, 0.0));
    assert_eq!(p, C64::new(1.0, 0.0));
    // P(z)P(−z) = Π(1 − z²/j²) = sin πz/(πz)
    let z = C64::new(0.5, 0.0);
    let v = canonical_product(&seq, z).0 * canonical_product(&seq, -z).0;
    assert!((v.re - 2.0 / PI).abs() < 1e-10, "{v}");
}

#[test]
fn canonical_product_against_longer_prefix() {
    let mk = |n: usize| {
        let y = (1..=n).map(|j| (j as f64).powf(1.0 / 1.1)).collect();
        PointSequence::new(y, 0.1, Tail::PowerLaw { coeff: 1.0, power: 1.1 }).unwrap()
    };
    let (short, long) = (mk(10_000), mk(100_000));
    for z in [C64::new(0.7, 0.0), C64::new(2.3, 1.1), C64::new(-4.0, 0.5)] {
        let a = canonical_product(&short, z).0;
        let b = canonical_product(&long, z).0;
        assert!((a - b).norm() < 1e-8 * b.norm(), "{z}: {a} {b}");
    }
}

#[test]
fn canonical_product_sign_changes() {
    let y: Vec<f64> = (1..=60).map(|j| j as f64 + 0.3 * (j as f64).sin()).collect();
    let seq = PointSequence::new(y.clone(), 0.0, Tail::None).unwrap();
    let mut crossings = 0;
    let mut prev = canonical_product(&seq, C64::new(0.5, 0.0)).0.re;
    let mut x = 0.5;
    while x < 40.0 {
        x += 0.01;
        let p = canonical_product(&seq, C64::new(x, 0.0)).0.re;
        if p.signum() != prev.signum() {
            crossings += 1;
        }
        prev = p;
    }
    assert_eq!(crossings, y.iter().filter(|&&c| c > 0.5 && c < x).count());
}
