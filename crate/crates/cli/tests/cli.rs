use std::f64::consts::PI;
use std::process::{Command, Output};

use satkernel::mcsim::read_samples;
use satkernel::registry::{KernelParams, Registry};
use satkernel::variance::saturation_level_d;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satkernel")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satkernel")).args(args).env(key, val).output().expect("binary runs")
}

fn csv(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    (header, lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn sine_rows() {
    let (h, rows) = csv(&run(&["kernel", "--family", "sine", "--a", "1", "--grid", "0:0.1:1", "x", "0"]));
    assert_eq!(h, ["x", "y", "K"]);
    assert_eq!(rows.len(), 11);
    assert_eq!(column(&h, &rows, "K")[0], 1.0);
}

#[test]
fn kernel_values_round_trip_exactly() {
    let (h, rows) = csv(&run(&["kernel", "--family", "LS", "--d", "2", "--grid", "-1:0.25:1"]));
    let k = Registry::default().kernel("LS").unwrap().build(&KernelParams { d: Some(2.0), ..KernelParams::default() }).unwrap();
    let (x, y, v) = (column(&h, &rows, "x"), column(&h, &rows, "y"), column(&h, &rows, "K"));
    assert_eq!(v.len(), 81);
    for i in 0..v.len() {
        assert_eq!(v[i].to_bits(), k.evaluate(x[i], y[i]).to_bits());
    }
}

#[test]
fn compare_column_stays_under_the_truncation_bound() {
    for d in ["1.5", "2", "3"] {
        let r = json(&run(&["kernel", "--family", "LS", "--d", d, "--compare", "LS-approx", "--grid", "-2:0.2:2", "--json"]));
        let worst = r["summary"]["max_abs_diff"].as_f64().unwrap();
        let d: f64 = d.parse().unwrap();
        assert!(worst < 10.0 * (-2.0 * PI * d).exp(), "d = {d}: {worst}");
        assert_eq!(r["columns"].as_array().unwrap().len(), 5);
    }
}

#[test]
fn averaged_variance_plateaus() {
    let (h, rows) = csv(&run(&["variance", "--method", "averaged", "--d", "20", "--L", "0.1:log:1e5"]));
    let v = column(&h, &rows, "value");
    assert!(v[0] < 0.1 && v.windows(2).take(30).all(|w| w[1] > w[0]));
    assert!((v.last().unwrap() - saturation_level_d(20.0)).abs() < 1e-3);
}

#[test]
fn circle_variance_peaks_at_pi() {
    let (h, rows) = csv(&run(&["variance", "--method", "un", "--n", "64", "--arc", "0:0.05:6.28"]));
    let (arc, v) = (column(&h, &rows, "L"), column(&h, &rows, "value"));
    let i = (0..v.len()).max_by(|&i, &j| v[i].total_cmp(&v[j])).unwrap();
    assert!((arc[i] - PI).abs() <= 0.05, "max at {}", arc[i]);
}

#[test]
fn crosscheck_deviation() {
    let r = json(&run(&["variance", "--crosscheck", "--R", "0.3", "--L", "7.6", "--d", "2", "--json"]));
    assert!(r["summary"]["max_deviation"].as_f64().unwrap() < 1e-5);
    assert_eq!(r["summary"]["reference_method"], "closed");
}

#[test]
fn gap_cdf_is_monotone() {
    let (h, rows) = csv(&run(&["gap", "--boundary", "absorbing", "--xi", "0:0.1:4"]));
    let cdf = column(&h, &rows, "cdf");
    assert_eq!(cdf.len(), 41);
    assert_eq!(cdf[0], 0.0);
    assert!(cdf.windows(2).all(|w| w[1] >= w[0]));
    assert!(cdf[40] > 0.99);
}

#[test]
fn simulation_is_reproducible_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("s.bin");
    let args = ["simulate", "--N", "41", "--samples", "200", "--window", "-2:3", "--seed", "11"];
    let mut first = args.to_vec();
    first.extend(["--workers", "1", "--samples-out", bin.to_str().unwrap()]);
    let a = run(&first);
    let b = run_env(&args, "SATKERNEL_WORKERS", "3");
    let c = run(&[&args[..], &["--workers", "2"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let (n, rows) = read_samples(std::fs::File::open(&bin).unwrap()).unwrap();
    assert_eq!((n, rows.len()), (41, 200));
    assert!(rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1])));
}

#[test]
fn approx_error_decreases_with_height() {
    let r = json(&run(&["approx", "--F", "power:0.05", "--alpha", "50,100,200", "--T", "2", "--json"]));
    let rows = r["rows"].as_array().unwrap();
    let err: Vec<f64> = rows.iter().map(|row| row[6].as_f64().unwrap()).collect();
    assert_eq!(r["columns"][6], "max_error");
    assert!(err[0] > err[1] && err[1] > err[2], "{err:?}");
    assert_eq!(r["summary"]["max_error_decreasing"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["kernel", "--family", "nope", "--grid", "0"]).status.code(), Some(2));
    assert_eq!(run(&["kernel", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["variance", "--method", "closed"]).status.code(), Some(2));
    assert_eq!(run(&["approx", "--F", "power:zzz"]).status.code(), Some(2));
    assert_eq!(run_env(&["gap"], "SATKERNEL_WORKERS", "0").status.code(), Some(2));
    assert_eq!(run(&["simulate", "--N", "51", "--samples", "10", "--window", "20:30"]).status.code(), Some(3));
    assert_eq!(run(&["approx", "--alpha", "50", "--T", "50"]).status.code(), Some(3));
    let out = run(&["simulate", "--N", "51", "--samples", "10", "--window", "20:30"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bulk"));
}

#[test]
fn config_file_fills_flags_and_the_command_line_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"command": "kernel", "family": "LS", "d": 2, "grid": "0:0.5:1 x 0"}"#).unwrap();
    let (_, rows) = csv(&run(&["--config", cfg.to_str().unwrap()]));
    assert_eq!(rows.len(), 3);
    let with = |d: f64| {
        let k = Registry::default().kernel("LS").unwrap().build(&KernelParams { d: Some(d), ..KernelParams::default() }).unwrap();
        k.evaluate(0.5, 0.0)
    };
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), with(2.0));
    let (_, rows) = csv(&run(&["kernel", "--config", cfg.to_str().unwrap(), "--d", "3"]));
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), with(3.0));
}

#[test]
fn json_reports_echo_inputs_and_digits_round() {
    let r = json(&run(&["gap", "--boundary", "reflecting", "--xi", "0.5,1", "--order", "24", "--json", "--digits", "3"]));
    assert_eq!(r["command"], "gap");
    assert_eq!(r["parameters"]["boundary"], "reflecting");
    assert_eq!(r["parameters"]["order"], 24);
    assert_eq!(r["parameters"]["S"], 1.0);
    let cdf = r["rows"][0][2].as_f64().unwrap();
    assert_eq!(cdf, format!("{cdf:.3e}").parse::<f64>().unwrap());
    assert_eq!(format!("{:.2e}", cdf).parse::<f64>().unwrap(), cdf);
}

#[test]
fn out_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.csv");
    let run1 = run(&["kernel", "--grid", "0:0.5:1", "--out", out.to_str().unwrap()]);
    assert!(run1.status.success());
    let first = std::fs::read(&out).unwrap();
    let m: Value = serde_json::from_slice(&std::fs::read(dir.path().join("k.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "kernel");
    assert_eq!(m["outputs"][0], out.to_str().unwrap());
    assert_eq!(m["input_hash"].as_str().unwrap().len(), 64);
    run(&["kernel", "--grid", "0:0.5:1", "--out", out.to_str().unwrap()]);
    assert_eq!(std::fs::read(&out).unwrap(), first);
}

#[test]
fn selftest_subset() {
    let r = json(&run(&["selftest", "--only", "1,3,11", "--json"]));
    assert_eq!(r["rows"].as_array().unwrap().len(), 3);
    assert_eq!(r["summary"]["success"], true);
    let text = run(&["--selftest", "--only", "5"]);
    assert_eq!(text.status.code(), Some(2), "--only belongs to the subcommand");
    let strict = run(&["selftest", "--only", "6", "--strict"]);
    assert_eq!(strict.status.code(), Some(1));
    let lenient = run(&["selftest", "--only", "6"]);
    assert!(lenient.status.success());
    assert!(String::from_utf8_lossy(&lenient.stdout).contains("FAIL (known"));
}
