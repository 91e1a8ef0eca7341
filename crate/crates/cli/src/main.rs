mod args;
mod commands;
mod error;
mod output;
mod ranges;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use args::{Cli, Command, SelftestArgs, COMMANDS};
use error::CliError;
use output::{emit, Format};
use satkernel::registry::Registry;

/// Splices the flags from a `--config` file in right after the command
/// name, so that anything typed on the command line overrides them.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let path = argv.iter().enumerate().find_map(|(i, a)| match a.strip_prefix("--config=") {
        Some(p) => Some(p.to_string()),
        None if a == "--config" => argv.get(i + 1).cloned(),
        None => None,
    });
    let Some(path) = path else { return Ok(argv) };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let obj = match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(o)) => o,
        Ok(_) => return Err(CliError::Usage(format!("config {path} must hold a JSON object"))),
        Err(e) => return Err(CliError::Usage(format!("config {path}: {e}"))),
    };

    let mut flags = Vec::new();
    let mut command = None;
    for (key, value) in &obj {
        let key = key.trim_start_matches('-');
        if key == "command" {
            command = value.as_str().map(str::to_string);
            continue;
        }
        if key == "config" {
            continue;
        }
        let flag = format!("--{key}");
        match value {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => flags.extend([flag, n.to_string()]),
            Value::String(s) => {
                flags.push(flag);
                flags.extend(s.split_whitespace().map(str::to_string));
            }
            Value::Array(items) => {
                let parts: Vec<String> = items.iter().map(|v| v.as_str().map_or_else(|| v.to_string(), str::to_string)).collect();
                flags.extend([flag, parts.join(",")]);
            }
            Value::Object(_) => return Err(CliError::Usage(format!("config key '{key}' cannot hold an object"))),
        }
    }

    let mut out = argv;
    let at = match out.iter().skip(1).position(|a| COMMANDS.contains(&a.as_str())) {
        Some(i) => i + 2,
        None => match command {
            Some(c) => {
                out.insert(1, c);
                2
            }
            None => out.len(),
        },
    };
    out.splice(at..at, flags);
    Ok(out)
}

/// `--grid X x Y` arrives as three tokens; clap sees it as one value.
fn join_grid(argv: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter().peekable();
    while let Some(a) = it.next() {
        if a != "--grid" {
            out.push(a);
            continue;
        }
        let Some(x) = it.next() else {
            out.push(a);
            break;
        };
        let mut value = x;
        if it.peek().map(String::as_str) == Some("x") {
            it.next();
            value += " x ";
            value += &it.next().unwrap_or_default();
        }
        out.push(format!("--grid={value}"));
    }
    out
}

fn configure_workers(requested: Option<usize>) -> Result<(), CliError> {
    let cap = match std::env::var("SATKERNEL_WORKERS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => return Err(CliError::Usage(format!("SATKERNEL_WORKERS must be a positive integer, got '{v}'"))),
        },
        Err(_) => None,
    };
    if requested == Some(0) {
        return Err(CliError::Usage("--workers must be positive".into()));
    }
    let available = std::thread::available_parallelism().map_or(1, usize::from);
    let n = requested.unwrap_or(available).min(cap.unwrap_or(usize::MAX));
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failed(format!("thread pool: {e}")))
}

fn run() -> Result<bool, CliError> {
    let argv = join_grid(expand_config(std::env::args().collect())?);
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            return Err(CliError::Usage(e.to_string().trim_end().trim_start_matches("error: ").to_string()));
        }
        Err(e) => {
            // --help and --version
            e.print()?;
            return Ok(true);
        }
    };
    let g = &cli.global;
    configure_workers(g.workers)?;
    let reg = Registry::default();
    let digits = g.digits();
    let out = g.out.as_deref();

    let command = match cli.command {
        Some(c) => c,
        None if cli.selftest => Command::Selftest(SelftestArgs::default()),
        None => return Err(CliError::Usage(format!("a command is required: {}", COMMANDS.join(", ")))),
    };
    let mut extra: Vec<PathBuf> = Vec::new();
    let report = match &command {
        Command::Kernel(a) => commands::kernel(a, &reg)?,
        Command::Variance(a) => commands::variance(a, &reg)?,
        Command::Gap(a) => commands::gap(a, &reg)?,
        Command::Simulate(a) => {
            extra.extend(a.samples_out.clone());
            commands::simulate(a)?
        }
        Command::Approx(a) => commands::approx(a, &reg)?,
        Command::Selftest(a) => {
            let format = g.format(Format::Text)?;
            let (report, ok) = commands::selftest(a, format)?;
            if format != Format::Text || out.is_some() {
                emit(&report, format, digits, out, extra)?;
            }
            return Ok(ok);
        }
    };
    emit(&report, g.format(Format::Csv)?, digits, out, extra)?;
    Ok(true)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("self test failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("satkernel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
