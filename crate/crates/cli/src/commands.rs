use std::time::{Duration, Instant};

use gapflow::determinants::{fredholm_gap, gap_table, toeplitz_gap, toeplitz_precision_hint, GapTable, Method};
use gapflow::oracles::{p_k_n, p_k_n_rsk, plancherel_p_oracle, poissonized_p, zmeasure_q_oracle};
use gapflow::painleve::{dp2_pii_residual, dp5_to_dp2_check};
use gapflow::{par, ArithContext, GapError, HalfInt, KernelSpec, Result};
use rug::Float;

use crate::args::{BenchArgs, Format, KernelKind, ModelArgs, NumericArgs, OutputArgs, RunArgs};
use crate::report::{decimal, gap_report, short, GapRow, Report};

/// A finished command: its table, whether its pass condition held, and
/// anything worth telling the user on stderr.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn pass(report: Report) -> Self {
        Self { report, passed: true, warnings: Vec::new() }
    }
}

fn missing(flag: &str, kernel: &str) -> GapError {
    GapError::InvalidParameter(format!("--{flag} is required for the {kernel} kernel"))
}

pub fn build_spec(model: &ModelArgs, ctx: &ArithContext) -> Result<KernelSpec> {
    match model.kernel {
        KernelKind::Bessel => {
            let eta = model.eta.as_deref().ok_or_else(|| missing("eta", "bessel"))?;
            KernelSpec::bessel(ctx.parse_real(eta)?)
        }
        KernelKind::Hyp => {
            let z = model.z.as_deref().ok_or_else(|| missing("z", "hyp"))?;
            let zp = model.zp.as_deref().ok_or_else(|| missing("zp", "hyp"))?;
            let xi = model.xi.as_deref().ok_or_else(|| missing("xi", "hyp"))?;
            KernelSpec::hypergeometric(ctx.parse_complex(z)?, ctx.parse_complex(zp)?, ctx.parse_real(xi)?)
        }
    }
}

fn pair(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

fn model_config(model: &ModelArgs) -> Vec<(String, String)> {
    let kernel = match model.kernel {
        KernelKind::Bessel => "bessel",
        KernelKind::Hyp => "hyp",
    };
    let mut config = vec![pair("kernel", kernel)];
    for (key, value) in [("eta", &model.eta), ("z", &model.z), ("zp", &model.zp), ("xi", &model.xi)] {
        if let Some(v) = value {
            config.push(pair(key, v));
        }
    }
    config
}

fn common_config(numeric: &NumericArgs, output: &OutputArgs) -> Vec<(String, String)> {
    let format = match output.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    vec![pair("precision_bits", numeric.precision), pair("tol", &numeric.tol), pair("format", format)]
}

fn run_config(args: &RunArgs, methods: &[Method]) -> Vec<(String, String)> {
    let mut config = model_config(&args.model);
    let names: Vec<&str> = methods.iter().map(|m| m.as_str()).collect();
    config.push(pair("methods", names.join(";")));
    config.push(pair("kmax", args.kmax));
    config.extend(common_config(&args.numeric, &args.output));
    config
}

fn precision_warnings(spec: &KernelSpec, methods: &[Method], k_max: usize, ctx: &ArithContext) -> Vec<String> {
    let mut warnings = Vec::new();
    if let (Some(eta), true) = (spec.eta(), methods.contains(&Method::Toeplitz)) {
        let hint = toeplitz_precision_hint(eta.to_f64(), k_max);
        if ctx.precision_bits() < hint {
            warnings.push(format!(
                "warning: {} bits is below the {hint} bits suggested for Bessel Toeplitz determinants at eta={} k={k_max}; expect cancellation",
                ctx.precision_bits(),
                eta.to_f64()
            ));
        }
    }
    warnings
}

fn tables(spec: &KernelSpec, args: &RunArgs, ctx: &ArithContext) -> Result<Vec<GapTable>> {
    let tol = ctx.parse_real(&args.numeric.tol)?;
    args.methods.iter().map(|&m| gap_table(spec, args.kmax, m, ctx, &tol)).collect()
}

pub fn compute(args: &RunArgs) -> Result<Outcome> {
    let ctx = ArithContext::new(args.numeric.precision)?;
    let spec = build_spec(&args.model, &ctx)?;
    let warnings = precision_warnings(&spec, &args.methods, args.kmax, &ctx);
    let rows: Vec<GapRow> = tables(&spec, args, &ctx)?.iter().flat_map(GapRow::from_table).collect();
    let report = gap_report(run_config(args, &args.methods), &rows);
    Ok(Outcome { report, passed: true, warnings })
}

pub fn compare(args: &RunArgs) -> Result<Outcome> {
    if args.methods.len() < 2 {
        return Err(GapError::InvalidParameter("compare needs at least two --method flags".into()));
    }
    let ctx = ArithContext::new(args.numeric.precision)?;
    let spec = build_spec(&args.model, &ctx)?;
    let tol = ctx.parse_real(&args.numeric.tol)?;
    let mut warnings = precision_warnings(&spec, &args.methods, args.kmax, &ctx);
    let tables = tables(&spec, args, &ctx)?;
    let prec = ctx.precision_bits();
    let digits = ctx.decimal_digits();

    let mut columns = vec!["k".to_string()];
    columns.extend(args.methods.iter().map(|m| m.to_string()));
    columns.extend(["abs_diff", "rel_diff", "max"].map(String::from));
    let mut report = Report { config: run_config(args, &args.methods), columns, rows: Vec::new() };

    let mut worst: Option<(usize, Float)> = None;
    for k in 0..=args.kmax {
        let base = &tables[0].values[k];
        let abs =
            tables[1..].iter().fold(ctx.zero(), |acc, t| acc.max(&Float::with_val(prec, &t.values[k] - base).abs()));
        let rel = Float::with_val(prec, &abs / Float::with_val(prec, base.abs_ref()));
        let mut row = vec![k.to_string()];
        row.extend(tables.iter().map(|t| decimal(&t.values[k], digits)));
        row.push(short(&abs));
        row.push(short(&rel));
        row.push(String::new());
        report.rows.push(row);
        if worst.as_ref().is_none_or(|(_, w)| abs > *w) {
            worst = Some((k, abs));
        }
    }
    let (k_worst, max_abs) = worst.expect("k range is never empty");
    let last = report.columns.len() - 1;
    report.rows[k_worst][last] = "*".into();
    let passed = max_abs < tol;
    if !passed {
        warnings.push(format!(
            "max discrepancy {} at k={k_worst} is not below tol {}",
            short(&max_abs),
            args.numeric.tol
        ));
    }
    Ok(Outcome { report, passed, warnings })
}

pub fn oracle_lis(
    eta: &str,
    k_max: usize,
    n_max: usize,
    numeric: &NumericArgs,
    output: &OutputArgs,
) -> Result<Outcome> {
    let ctx = ArithContext::new(numeric.precision)?;
    let tol = ctx.parse_real(&numeric.tol)?;
    let spec = KernelSpec::bessel(ctx.parse_real(eta)?)?;
    let eta_value = spec.eta().expect("bessel spec").clone();
    let mut config = vec![pair("oracle", "lis"), pair("eta", eta), pair("kmax", k_max), pair("nmax", n_max)];
    config.extend(common_config(numeric, output));
    let mut report = Report::new(config, &["k", "oracle", "determinant", "abs_diff", "bound", "exact_counts_agree"]);
    let mut passed = true;
    for k in 1..=k_max {
        let (oracle, tail) = poissonized_p(k, &eta_value, n_max, &ctx)?;
        let det = toeplitz_gap(&spec, k, &ctx)?;
        let diff = Float::with_val(ctx.precision_bits(), &oracle - &det).abs();
        let mut exact = true;
        for n in 0..=n_max {
            exact &= p_k_n(k, n)? == p_k_n_rsk(k, n)?;
        }
        passed &= exact && diff <= Float::with_val(ctx.precision_bits(), &tail + &tol);
        report.push(value_row(k, &oracle, &det, &diff, &tail, &ctx, vec![exact.to_string()]));
    }
    Ok(Outcome { report, passed, warnings: Vec::new() })
}

pub fn oracle_plancherel(
    eta: &str,
    k_max: usize,
    size_max: usize,
    numeric: &NumericArgs,
    output: &OutputArgs,
) -> Result<Outcome> {
    let ctx = ArithContext::new(numeric.precision)?;
    let tol = ctx.parse_real(&numeric.tol)?;
    let spec = KernelSpec::bessel(ctx.parse_real(eta)?)?;
    let eta_value = spec.eta().expect("bessel spec").clone();
    let mut config =
        vec![pair("oracle", "plancherel"), pair("eta", eta), pair("kmax", k_max), pair("sizemax", size_max)];
    config.extend(common_config(numeric, output));
    let mut report = Report::new(config, &["k", "oracle", "determinant", "abs_diff", "bound"]);
    let mut passed = true;
    for k in 1..=k_max {
        let (oracle, rep) = plancherel_p_oracle(k, &eta_value, size_max, &ctx)?;
        let det = toeplitz_gap(&spec, k, &ctx)?;
        let diff = Float::with_val(ctx.precision_bits(), &oracle - &det).abs();
        passed &= diff <= Float::with_val(ctx.precision_bits(), &rep.tail_bound + &tol);
        report.push(value_row(k, &oracle, &det, &diff, &rep.tail_bound, &ctx, vec![]));
    }
    Ok(Outcome { report, passed, warnings: Vec::new() })
}

pub struct ZmeasureArgs<'a> {
    pub z: &'a str,
    pub zp: &'a str,
    pub xi: &'a str,
    pub k_max: usize,
    pub size_max: usize,
}

pub fn oracle_zmeasure(args: &ZmeasureArgs<'_>, numeric: &NumericArgs, output: &OutputArgs) -> Result<Outcome> {
    let ctx = ArithContext::new(numeric.precision)?;
    let tol = ctx.parse_real(&numeric.tol)?;
    let spec =
        KernelSpec::hypergeometric(ctx.parse_complex(args.z)?, ctx.parse_complex(args.zp)?, ctx.parse_real(args.xi)?)?;
    let params = spec.as_hyp().expect("hypergeometric spec").clone();
    let mut config = vec![
        pair("oracle", "zmeasure"),
        pair("z", args.z),
        pair("zp", args.zp),
        pair("xi", args.xi),
        pair("kmax", args.k_max),
        pair("sizemax", args.size_max),
    ];
    config.extend(common_config(numeric, output));
    let mut report = Report::new(config, &["k", "oracle", "determinant", "abs_diff", "bound", "tail_bound"]);
    let mut passed = true;
    for k in 1..=args.k_max {
        let (oracle, rep) = zmeasure_q_oracle(k, &params, args.size_max, &ctx)?;
        let det = toeplitz_gap(&spec, k, &ctx)?;
        let diff = Float::with_val(ctx.precision_bits(), &oracle - &det).abs();
        passed &= diff <= Float::with_val(ctx.precision_bits(), &rep.shell_bound + &tol);
        report.push(value_row(k, &oracle, &det, &diff, &rep.shell_bound, &ctx, vec![short(&rep.tail_bound)]));
    }
    Ok(Outcome { report, passed, warnings: Vec::new() })
}

fn value_row(
    k: usize,
    oracle: &Float,
    det: &Float,
    diff: &Float,
    bound: &Float,
    ctx: &ArithContext,
    extra: Vec<String>,
) -> Vec<String> {
    let digits = ctx.decimal_digits();
    let mut row = vec![k.to_string(), decimal(oracle, digits), decimal(det, digits), short(diff), short(bound)];
    row.extend(extra);
    row
}

/// Median wall time of `repeats` runs of one method, and the Fredholm
/// truncation size when applicable.
///
/// The recurrence produces the whole series `k = 0..=k_max`; the Toeplitz
/// route is charged only for the single determinant at `k_max`, and the
/// Fredholm route for the single gap at `s = k_max + 1/2`.
pub fn time_method(
    spec: &KernelSpec,
    method: Method,
    k_max: usize,
    repeats: u32,
    ctx: &ArithContext,
    tol: &Float,
) -> Result<(Duration, Option<usize>)> {
    let mut times = Vec::with_capacity(repeats as usize);
    let mut peak = None;
    for _ in 0..repeats {
        let start = Instant::now();
        match method {
            Method::Recurrence => {
                gap_table(spec, k_max, method, ctx, tol)?;
            }
            Method::Toeplitz => {
                toeplitz_gap(spec, k_max, ctx)?;
            }
            Method::Fredholm => {
                let (_, rep) = fredholm_gap(spec, HalfInt::from_index(k_max), tol, ctx)?;
                peak = peak.max(Some(rep.size));
            }
        }
        times.push(start.elapsed());
    }
    times.sort();
    Ok((times[times.len() / 2], peak))
}

pub fn bench(args: &BenchArgs) -> Result<Outcome> {
    let ctx = ArithContext::new(args.numeric.precision)?;
    let tol = ctx.parse_real(&args.numeric.tol)?;
    let spec = build_spec(&args.model, &ctx)?;
    let methods =
        if args.methods.is_empty() { vec![Method::Toeplitz, Method::Recurrence] } else { args.methods.clone() };
    let mut config = model_config(&args.model);
    config.push(pair("methods", methods.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(";")));
    config.push(pair("kmax", args.kmax));
    config.push(pair("repeats", args.repeats));
    config.push(pair("parallel", par::is_parallel()));
    config.extend(common_config(&args.numeric, &args.output));

    let timings = methods
        .iter()
        .map(|&m| time_method(&spec, m, args.kmax, args.repeats, &ctx, &tol))
        .collect::<Result<Vec<_>>>()?;
    let slowest = timings.iter().map(|(t, _)| *t).max().expect("at least one method");
    let mut report =
        Report::new(config, &["method", "median_seconds", "runs", "speedup_vs_slowest", "peak_truncation"]);
    for (m, (t, peak)) in methods.iter().zip(&timings) {
        let ratio = slowest.as_secs_f64() / t.as_secs_f64().max(1e-9);
        report.push(vec![
            m.to_string(),
            format!("{:.6e}", t.as_secs_f64()),
            args.repeats.to_string(),
            format!("{ratio:.3}"),
            peak.map_or(String::new(), |p| p.to_string()),
        ]);
    }
    Ok(Outcome::pass(report))
}

fn strictly_decreasing(column: &[Float]) -> bool {
    column.windows(2).all(|w| w[1] < w[0])
}

fn need_two(points: usize) -> Result<()> {
    if points < 2 {
        return Err(GapError::InvalidParameter("a trend needs at least two scale points".into()));
    }
    Ok(())
}

pub fn limits_dpv(eta: &str, n_list: &[u64], numeric: &NumericArgs, output: &OutputArgs) -> Result<Outcome> {
    need_two(n_list.len())?;
    let ctx = ArithContext::new(numeric.precision)?;
    let eta_value = ctx.parse_real(eta)?;
    let rows = dp5_to_dp2_check(&eta_value, n_list, &ctx)?;
    let mut config = vec![pair("limit", "dpv-to-dpii"), pair("eta", eta)];
    config.push(pair("N", n_list.iter().map(u64::to_string).collect::<Vec<_>>().join(";")));
    config.extend(common_config(numeric, output));
    let mut report = Report::new(config, &["N", "alpha_dev", "b_dev", "beta_dev", "q_dev"]);
    for r in &rows {
        report.push(vec![r.n.to_string(), short(&r.alpha_dev), short(&r.b_dev), short(&r.beta_dev), short(&r.q_dev)]);
    }
    let column = |f: fn(&gapflow::painleve::LimitRow) -> &Float| rows.iter().map(|r| f(r).clone()).collect::<Vec<_>>();
    let passed = strictly_decreasing(&column(|r| &r.alpha_dev))
        && strictly_decreasing(&column(|r| &r.b_dev))
        && strictly_decreasing(&column(|r| &r.beta_dev))
        && strictly_decreasing(&column(|r| &r.q_dev));
    Ok(Outcome { report, passed, warnings: Vec::new() })
}

/// Parses `start:end:step` into an inclusive grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || GapError::InvalidParameter(format!("grid `{text}` is not start:end:step"));
    let parts: Vec<f64> =
        text.split(':').map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    let [start, end, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || !(end >= start) || !start.is_finite() || !end.is_finite() {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

pub fn limits_pii(etas: &[String], t: &str, numeric: &NumericArgs, output: &OutputArgs) -> Result<Outcome> {
    need_two(etas.len())?;
    let ctx = ArithContext::new(numeric.precision)?;
    let grid = parse_grid(t)?;
    let profiles =
        etas.iter().map(|e| dp2_pii_residual(&ctx.parse_real(e)?, &grid, &ctx)).collect::<Result<Vec<_>>>()?;
    let mut config = vec![pair("limit", "dpii-to-pii"), pair("eta", etas.join(";")), pair("t", t)];
    config.extend(common_config(numeric, output));
    let mut columns = vec!["t".to_string()];
    columns.extend(etas.iter().map(|e| format!("residual_eta_{e}")));
    let mut report = Report { config, columns, rows: Vec::new() };
    let mut passed = true;
    for (i, t) in grid.iter().enumerate() {
        let column: Vec<Float> = profiles.iter().map(|p| p[i].residual.clone()).collect();
        passed &= strictly_decreasing(&column);
        let mut row = vec![format!("{t}")];
        row.extend(column.iter().map(short));
        report.push(row);
    }
    Ok(Outcome { report, passed, warnings: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("-4:2:0.5").unwrap();
        assert_eq!(g.len(), 13);
        assert_eq!(g[0], -4.0);
        assert_eq!(g[12], 2.0);
        assert!(parse_grid("1:0:0.5").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }
}
