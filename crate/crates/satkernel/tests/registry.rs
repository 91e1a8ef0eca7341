use satkernel::registry::*;
use satkernel::variance::VarianceMethod;

#[test]
fn every_family_builds_and_evaluates() {
    let reg = Registry::default();
    assert_eq!(reg.kernel_names().len(), 10);
    let p = KernelParams { d: Some(1.5), window: (0.5, 1.5), n: 11, ..Default::default() };
    for name in reg.kernel_names() {
        let k = reg.kernel(name).unwrap().build(&p).unwrap();
        let v = k.evaluate(0.7, 1.1);
        assert!(v.is_finite(), "{name}: {v}");
        assert!(k.evaluate(1.0, 1.0) > 0.0, "{name}");
    }
}

#[test]
fn families_agree_where_they_should() {
    let reg = Registry::default();
    let p = KernelParams { d: Some(3.0), window: (0.5, 1.5), ..Default::default() };
    let get = |n: &str| reg.kernel(n).unwrap().build(&p).unwrap();
    let (ls, approx) = (get("LS"), get("LS-approx"));
    assert!((ls.evaluate(0.3, 0.8) - approx.evaluate(0.3, 0.8)).abs() < 10.0 * (-2.0 * std::f64::consts::PI * 3.0f64).exp());
    let (ab, inf) = (get("absorbing"), get("contour-infinite"));
    assert!((ab.evaluate(0.6, 1.2) - inf.evaluate(0.6, 1.2)).abs() < 1e-4);
    let bessel = reg.kernel("bessel").unwrap().build(&KernelParams { nu: -0.5, ..Default::default() }).unwrap();
    let sine = get("sine");
    assert!((bessel.evaluate(0.3, 0.9) - sine.evaluate(0.3, 0.9) - sine.evaluate(-0.3, 0.9)).abs() < 1e-10);
}

#[test]
fn unknown_names_are_rejected() {
    let reg = Registry::default();
    assert!(reg.kernel("LSX").is_err());
    assert!(reg.engine("fast").is_err());
    assert!(reg.counting("power:x").is_err());
    assert!(reg.counting("zeta-counting").is_ok());
    assert_eq!(reg.counting_names().len(), 3);
    let bad = KernelParams { nu: 0.7, ..Default::default() };
    assert!(reg.kernel("bessel").unwrap().build(&bad).is_err());
}

#[test]
fn engines_dispatch_by_method() {
    let reg = Registry::default();
    for name in reg.engine_names() {
        assert_eq!(reg.engine(name).unwrap().method().name(), name);
    }
    let q = VarianceQuery { kernel: KernelParams { d: Some(2.0), ..Default::default() }, r: 0.3, l: 7.6, ..Default::default() };
    let closed = reg.engine("closed").unwrap().compute(&q, &reg).unwrap();
    let direct = reg.engine("direct").unwrap().compute(&q, &reg).unwrap();
    assert_eq!(direct.method, VarianceMethod::Direct);
    assert!((closed.value - direct.value).abs() < 1e-5, "{} vs {}", closed.value, direct.value);
    let un = reg.engine("un").unwrap().compute(&VarianceQuery { n: 64, l: std::f64::consts::PI, ..Default::default() }, &reg).unwrap();
    assert!(un.value > 0.0);
}
