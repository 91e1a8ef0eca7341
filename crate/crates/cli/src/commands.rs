use std::f64::consts::PI;
use std::io::{BufWriter, Write};

use rayon::prelude::*;
use satkernel::acceptance;
use satkernel::approx::{compare_at_height, local_sine_error, GeneralConfiguration};
use satkernel::gap::first_particle_cdf;
use satkernel::kernels::KernelHandle;
use satkernel::mcsim::{estimate_variance, sample_all, write_samples, SimConfig};
use satkernel::registry::{KernelParams, Registry, VarianceQuery};
use satkernel::variance::saturation_level_d;

use crate::args::*;
use crate::error::CliError;
use crate::output::{Cell, Format, Report};
use crate::ranges::{parse_grid, parse_values, parse_window};

fn family(reg: &Registry, name: &str, p: &KernelParams) -> Result<KernelHandle, CliError> {
    let f = reg.kernel(name).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(f.build(p)?)
}

pub fn kernel(args: &KernelArgs, reg: &Registry) -> Result<Report, CliError> {
    let p = args.params()?;
    let k = family(reg, &args.family, &p)?;
    let other = args.compare.as_deref().map(|name| family(reg, name, &p)).transpose()?;
    let pts = parse_grid(&args.grid)?;
    let mut columns = vec!["x", "y", "K"];
    if other.is_some() {
        columns.extend(["K_compare", "abs_diff"]);
    }
    let mut report = Report::new("kernel", args, columns);
    report.note("label", &k.label);
    let values: Vec<(f64, Option<f64>)> =
        pts.par_iter().map(|&(x, y)| (k.evaluate(x, y), other.as_ref().map(|o| o.evaluate(x, y)))).collect();
    let mut worst: f64 = 0.0;
    for (&(x, y), (v, w)) in pts.iter().zip(values) {
        let mut row: Vec<Cell> = vec![x.into(), y.into(), v.into()];
        if let Some(w) = w {
            worst = worst.max((v - w).abs());
            row.extend([w.into(), (v - w).abs().into()]);
        }
        report.push(row);
    }
    if let Some(o) = &other {
        report.note("compare_label", &o.label);
        report.note("max_abs_diff", worst);
    }
    Ok(report)
}

pub fn variance(args: &VarianceArgs, reg: &Registry) -> Result<Report, CliError> {
    let engine = reg.engine(&args.method).map_err(|e| CliError::Usage(e.to_string()))?;
    let lengths = match (&args.l, &args.arc) {
        (_, Some(arc)) => parse_values(arc)?,
        (Some(l), None) => parse_values(l)?,
        (None, None) => return Err(CliError::Usage("give --L (or --arc for the circle model)".into())),
    };
    let starts = parse_values(&args.r)?;
    let ds: Vec<Option<f64>> = match &args.d {
        Some(d) => parse_values(d)?.into_iter().map(Some).collect(),
        None => vec![None],
    };
    let mut queries = Vec::new();
    for &r in &starts {
        for &l in &lengths {
            for &d in &ds {
                let kernel = KernelParams { a: args.model.a, s: args.model.s, d, delta: args.model.delta, ..KernelParams::default() };
                queries.push(VarianceQuery { kernel, r, l, n: args.n, family: args.family.clone(), cutoff: args.cutoff });
            }
        }
    }
    let d_of = |q: &VarianceQuery| 2.0 * PI * q.kernel.time() / (q.kernel.a * q.kernel.a);

    if args.crosscheck {
        let direct = reg.engine("direct")?;
        let reference = if args.method == "direct" { reg.engine("closed")? } else { engine };
        let pairs: Vec<(f64, f64)> = queries
            .par_iter()
            .map(|q| Ok((direct.compute(q, reg)?.value, reference.compute(q, reg)?.value)))
            .collect::<Result<_, satkernel::Error>>()?;
        let mut report = Report::new("variance", args, vec!["R", "L", "d", "direct", "reference", "abs_diff"]);
        report.note("reference_method", reference.method().name());
        let mut worst: f64 = 0.0;
        for (q, (a, b)) in queries.iter().zip(pairs) {
            worst = worst.max((a - b).abs());
            report.push(vec![q.r.into(), q.l.into(), d_of(q).into(), a.into(), b.into(), (a - b).abs().into()]);
        }
        report.note("max_deviation", worst);
        return Ok(report);
    }

    let results = queries.par_iter().map(|q| engine.compute(q, reg)).collect::<Result<Vec<_>, _>>()?;
    let averaged = args.method == "averaged";
    let mut columns = vec!["R", "L", "d", "value", "err_estimate"];
    if averaged {
        columns.push("saturation_level");
    }
    let mut report = Report::new("variance", args, columns);
    report.note("method", engine.method().name());
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for (q, v) in queries.iter().zip(&results) {
        let d = d_of(q);
        let mut row: Vec<Cell> = vec![q.r.into(), q.l.into(), d.into(), v.value.into(), v.err_estimate.into()];
        if averaged {
            row.push(saturation_level_d(d).into());
        }
        if v.value > best.1 {
            best = (q.l, v.value);
        }
        report.push(row);
        if let Some(w) = &v.warning {
            eprintln!("warning at R = {}, L = {}: {w}", q.r, q.l);
        }
    }
    report.note("argmax_L", best.0);
    report.note("max_value", best.1);
    Ok(report)
}

pub fn gap(args: &GapArgs, reg: &Registry) -> Result<Report, CliError> {
    let name = match (&args.family, args.boundary.as_str()) {
        (Some(f), _) => f.as_str(),
        (None, "free") => "LS",
        (None, "absorbing") => "absorbing",
        (None, "reflecting") => "reflecting",
        (None, other) => return Err(CliError::Usage(format!("unknown boundary '{other}' (free, absorbing, reflecting)"))),
    };
    let p = KernelParams {
        a: args.model.a,
        s: args.model.s,
        d: args.d,
        delta: args.model.delta,
        nu: args.nu,
        n: args.n,
        ..KernelParams::default()
    };
    let k = family(reg, name, &p)?;
    let xs = parse_values(&args.xi)?;
    let res = first_particle_cdf(&k, &xs, args.order)?;
    let mut report = Report::new("gap", args, vec!["xi", "det", "cdf", "err_estimate"]);
    report.note("label", &k.label);
    for g in &res {
        report.push(vec![g.xi.into(), g.det_value.into(), g.cdf.into(), g.err_estimate.into()]);
    }
    report.note("monotone", res.windows(2).all(|w| w[1].cdf >= w[0].cdf));
    Ok(report)
}

pub fn simulate(args: &SimulateArgs) -> Result<Report, CliError> {
    let mut cfg = SimConfig::new(args.n, args.model.a, args.model.s, args.samples, args.seed, parse_window(&args.window)?)?;
    cfg.delta = args.model.delta;
    cfg.bins = args.bins;
    cfg.batches = args.batches;
    cfg.validate()?;
    let stats = estimate_variance(&cfg)?;
    if let Some(path) = &args.samples_out {
        let rows = sample_all(&cfg)?;
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        write_samples(&mut w, cfg.n, &rows)?;
        w.flush()?;
    }
    let mut report = Report::new("simulate", args, vec!["quantity", "x", "value", "stderr"]);
    report.push(vec!["mean_count".into(), Cell::Empty, stats.mean_count.into(), stats.stderr_mean.into()]);
    report.push(vec!["var_count".into(), Cell::Empty, stats.var_count.into(), stats.stderr_var.into()]);
    let h = &stats.density_histogram;
    for ((c, d), e) in h.centers().into_iter().zip(&h.density).zip(&h.stderr) {
        report.push(vec!["density".into(), c.into(), (*d).into(), (*e).into()]);
    }
    report.note("mean_count", stats.mean_count);
    report.note("var_count", stats.var_count);
    report.note("stderr_var", stats.stderr_var);
    report.note("pooled_density_stderr", h.pooled_stderr);
    report.note("redraws", stats.redraws);
    Ok(report)
}

pub fn approx(args: &ApproxArgs, reg: &Registry) -> Result<Report, CliError> {
    let cf = reg.counting(&args.f).map_err(|e| CliError::Usage(e.to_string()))?;
    if args.points < 2 || args.sine_n < 2 {
        return Err(CliError::Usage("--points and --sine-n must be at least 2".into()));
    }
    let cfg = GeneralConfiguration::new(cf, args.prefix)?;
    let alphas = parse_values(&args.alpha)?;
    let rows = alphas
        .par_iter()
        .map(|&alpha| {
            let (lo, h) = (alpha - args.t, 2.0 * args.t / (args.points - 1) as f64);
            let grid: Vec<(f64, f64)> = (0..args.points)
                .flat_map(|i| (0..args.points).map(move |j| (lo + h * i as f64, lo + h * j as f64)))
                .collect();
            let c = compare_at_height(&cfg, alpha, args.s, args.t, &grid)?;
            let sine = local_sine_error(&cfg, alpha, args.s, args.sine_h, args.sine_n)?;
            Ok((c, sine))
        })
        .collect::<Result<Vec<_>, satkernel::Error>>()?;
    let columns = vec!["alpha", "m", "lambda", "xi", "zeta", "d", "max_error", "bound_shape", "fitted_c", "within_bracket", "sine_error"];
    let mut report = Report::new("approx", args, columns);
    for (c, sine) in &rows {
        report.push(vec![
            c.alpha.into(),
            c.m.into(),
            c.lambda.into(),
            c.xi.into(),
            c.zeta.into(),
            c.d.into(),
            c.max_lhs.into(),
            c.bound_shape.into(),
            c.fitted_c.into(),
            c.within_bracket.into(),
            (*sine).into(),
        ]);
    }
    report.note("max_error_decreasing", rows.windows(2).all(|w| w[1].0.max_lhs < w[0].0.max_lhs));
    Ok(report)
}

/// Runs the acceptance suite, streaming one line per criterion in text mode.
/// Returns the report and whether the run counts as a success.
pub fn selftest(args: &SelftestArgs, format: Format) -> Result<(Report, bool), CliError> {
    let ids: Vec<u32> = match &args.only {
        Some(list) => list
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| CliError::Usage(format!("bad criterion id '{s}'"))))
            .collect::<Result<_, _>>()?,
        None => acceptance::ids(),
    };
    let mut report = Report::new("selftest", args, vec!["id", "title", "passed", "gate", "known", "seconds", "detail"]);
    let mut ok = true;
    let mut text = String::new();
    for id in ids {
        let o = acceptance::run(id).ok_or_else(|| CliError::Usage(format!("no criterion {id}")))?;
        if format == Format::Text {
            println!("{}", o.line());
        }
        text += &o.line();
        text.push('\n');
        ok &= o.gate && (o.passed || !args.strict);
        report.push(vec![
            (o.id as u64).into(),
            o.title.into(),
            o.passed.into(),
            o.gate.into(),
            o.known.unwrap_or("").into(),
            o.seconds.into(),
            o.detail.into(),
        ]);
    }
    report.note("success", ok);
    report.text = Some(text);
    Ok((report, ok))
}
