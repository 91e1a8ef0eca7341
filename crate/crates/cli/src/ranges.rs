//! Value lists on the command line: `x`, `a,b,c`, `lo:step:hi` and
//! `lo:log:hi[:per_decade]`.

use crate::error::CliError;

/// Points per decade when a log range gives no count.
pub const PER_DECADE: usize = 10;

fn num(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::Usage(format!("'{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("'{s}' is not finite")));
    }
    Ok(v)
}

pub fn parse_values(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [one] => one.split(',').map(num).collect(),
        [lo, "log", hi] => log_range(num(lo)?, num(hi)?, PER_DECADE),
        [lo, "log", hi, k] => {
            let k: usize = k.parse().map_err(|_| CliError::Usage(format!("bad points per decade '{k}'")))?;
            log_range(num(lo)?, num(hi)?, k)
        }
        [lo, step, hi] => linear_range(num(lo)?, num(step)?, num(hi)?),
        _ => Err(CliError::Usage(format!("cannot read range '{spec}'"))),
    }
}

fn linear_range(lo: f64, step: f64, hi: f64) -> Result<Vec<f64>, CliError> {
    if step <= 0.0 || hi < lo {
        return Err(CliError::Usage(format!("empty range {lo}:{step}:{hi}")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err(CliError::Usage("range has too many points".into()));
    }
    Ok((0..=n).map(|i| lo + step * i as f64).collect())
}

fn log_range(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>, CliError> {
    if lo <= 0.0 || hi < lo || per_decade == 0 {
        return Err(CliError::Usage(format!("bad log range {lo}:log:{hi}")));
    }
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64) - 1e-9).ceil().max(0.0) as usize;
    if n == 0 {
        return Ok(vec![lo]);
    }
    let mut v: Vec<f64> = (0..=n).map(|i| lo * 10f64.powf(decades * i as f64 / n as f64)).collect();
    v[n] = hi;
    Ok(v)
}

/// `lo:hi` as (start, length).
pub fn parse_window(spec: &str) -> Result<(f64, f64), CliError> {
    let (lo, hi) = spec.split_once(':').ok_or_else(|| CliError::Usage(format!("window '{spec}' must be lo:hi")))?;
    let (lo, hi) = (num(lo)?, num(hi)?);
    if hi <= lo {
        return Err(CliError::Usage(format!("empty window {spec}")));
    }
    Ok((lo, hi - lo))
}

/// Kernel grids: `X` (the square X×X) or `X x Y`.
pub fn parse_grid(spec: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let tokens: Vec<&str> = spec.split_whitespace().collect();
    let (xs, ys) = match tokens.as_slice() {
        [x] => (parse_values(x)?, parse_values(x)?),
        [x, "x", y] => (parse_values(x)?, parse_values(y)?),
        _ => return Err(CliError::Usage("grid must be 'X' or 'X x Y'".into())),
    };
    Ok(xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect())
}
