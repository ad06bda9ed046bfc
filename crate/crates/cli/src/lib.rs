//! `sadslab` command-line front end. [`run`] parses argv, runs one command
//! and maps failures to exit codes: 2 for invalid input, 3 for numerical
//! failures, 1 when the acceptance suite has failing criteria.

// `!(x > 0.0)` is deliberate: NaN must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accept;
pub mod args;
pub mod output;

use std::ffi::OsString;
use std::f64::consts::PI;
use std::path::PathBuf;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use sadslab::conformal::{invariance_trials, SphereGrid};
use sadslab::counterexample::{counterexample_report, shipped_metric, CounterexampleReport};
use sadslab::fit::{BasisFn, ExpansionFit};
use sadslab::metric::{make_hyperbolic, make_perturbed, make_sads, MetricSpec, PerturbationTerm, RadialMetric};
use sadslab::profile::{
    derivative_laws, foliation_mass_curve, isoballs_fit, linear_grid, profile_constant, profile_constant_fit,
    profile_curve, profile_summary,
};
use sadslab::sphere::{sphere_report, stability_spectrum};
use sadslab::LabError;

use args::{Cli, Command, FitKind, Format, MetricArgs, MetricChoice, OutputArgs, Range};
use output::{emit, Cell, Table};

/// Worker-count override for the parallel per-row computations.
pub const WORKERS_ENV: &str = "SADSLAB_WORKERS";
/// Largest `|S(u) − S(v)|` that conformal-check accepts.
pub const INVARIANCE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("bad metric spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error("check failed: {0}")]
    Check(String),
    #[error("{0} acceptance criteria failed")]
    Acceptance(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lab(e) if e.is_numerical() => 3,
            CliError::Check(_) => 3,
            CliError::Acceptance(_) => 1,
            _ => 2,
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match with_workers(|| execute(cli.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn with_workers(f: impl FnOnce() -> Result<(), CliError> + Send) -> Result<(), CliError> {
    let Some(raw) = std::env::var_os(WORKERS_ENV) else {
        return f();
    };
    let n = raw
        .to_str()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got {raw:?}")))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?;
    pool.install(f)
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze { metric, range, output } => analyze(&resolve_metric(&metric)?, range, &output),
        Command::Profile { metric, range, fit, output } => profile(&resolve_metric(&metric)?, range, fit, &output),
        Command::Foliation { metric, range, output } => foliation(&resolve_metric(&metric)?, range, &output),
        Command::Spectrum { metric, range, lmax, output } => spectrum(&resolve_metric(&metric)?, range, lmax, &output),
        Command::ConformalCheck { seed, trials, lmax, grid, dilation, output } => {
            conformal_check(seed, trials, lmax, grid, dilation, &output)
        }
        Command::Counterexample { metric, output } => counterexample(&metric, &output),
        Command::Accept => {
            let results = accept::run_suite();
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("{} passed, {failed} failed", results.len() - failed);
            if failed > 0 {
                return Err(CliError::Acceptance(failed));
            }
            Ok(())
        }
    }
}

/// Reads a metric spec document. The JSON output of any command is accepted
/// too, through its `metric` field.
pub fn read_spec(path: &std::path::Path) -> Result<MetricSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
    let spec = match doc.get("metric") {
        Some(inner) if doc.get("kind").is_none() => inner.clone(),
        _ => doc,
    };
    serde_json::from_value(spec).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
}

pub fn resolve_metric(args: &MetricArgs) -> Result<RadialMetric, CliError> {
    if let Some(path) = &args.spec {
        if !args.perturb.is_empty() {
            return Err(CliError::Usage("--perturb cannot be combined with --spec".into()));
        }
        return Ok(read_spec(path)?.build()?);
    }
    let choice = args.metric.unwrap_or(if args.perturb.is_empty() { MetricChoice::Sads } else { MetricChoice::Perturbed });
    let mass = args.mass.unwrap_or(1.0);
    if choice != MetricChoice::Perturbed && !args.perturb.is_empty() {
        return Err(CliError::Usage("--perturb needs --metric perturbed".into()));
    }
    Ok(match choice {
        MetricChoice::Hyperbolic => {
            if args.mass.is_some() {
                return Err(CliError::Usage("--mass does not apply to the hyperbolic metric".into()));
            }
            make_hyperbolic()
        }
        MetricChoice::Sads => make_sads(mass)?,
        MetricChoice::Perturbed => make_perturbed(
            mass,
            args.perturb.iter().map(|&[amplitude, rate]| PerturbationTerm { amplitude, rate }).collect(),
        )?,
    })
}

fn metric_value(metric: &RadialMetric) -> Value {
    serde_json::to_value(metric.to_spec()).expect("metric spec serializes")
}

fn grid_of(range: Range) -> Vec<f64> {
    linear_grid(range.lo, range.hi, range.step)
}

fn write_table(
    table: &Table,
    command: &str,
    metric: Option<&RadialMetric>,
    extra: Map<String, Value>,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let text = match output.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(command, metric.map(metric_value), extra),
    };
    emit(output.out.as_deref(), &text)
}

fn analyze(metric: &RadialMetric, range: Range, output: &OutputArgs) -> Result<(), CliError> {
    let rows = grid_of(range)
        .par_iter()
        .map(|&r| {
            let rep = sphere_report(metric, r)?;
            let lambda1 = stability_spectrum(metric, r, 1)?.eigenvalue(1).unwrap_or(f64::NAN);
            Ok(vec![
                rep.r, rep.s, rep.area, rep.h, rep.k, rep.hawking, rep.cy_slack, rep.gauss_residual,
                rep.deltar_residual, lambda1,
            ])
        })
        .collect::<Result<Vec<_>, LabError>>()?;
    let mut table = Table::new(&[
        "r", "s", "area", "H", "K", "hawking", "cy_slack", "gauss_residual", "deltar_residual", "lambda1",
    ]);
    for row in rows {
        table.push(row.into_iter().map(Cell::from).collect());
    }
    write_table(&table, "analyze", Some(metric), Map::new(), output)
}

#[derive(Debug, Serialize)]
struct IsoballsReport {
    constant: f64,
    constant_reference: f64,
    mass_coefficient: f64,
    mass_coefficient_reference: f64,
    renorm_volume: f64,
    renorm_error: f64,
    drift_star: f64,
    constant_fit: ExpansionFit,
    mass_fit: ExpansionFit,
}

fn isoballs_report(metric: &RadialMetric) -> Result<IsoballsReport, LabError> {
    let constant_fit = profile_constant_fit(metric)?;
    let mass_fit = isoballs_fit(metric)?;
    let summary = profile_summary(metric)?;
    Ok(IsoballsReport {
        constant: constant_fit.coefficients[0],
        constant_reference: profile_constant(),
        mass_coefficient: mass_fit.coefficient(&BasisFn::Power { exponent: -0.5 }).unwrap_or(f64::NAN),
        mass_coefficient_reference: -8.0 * PI.powf(1.5) * metric.mass(),
        renorm_volume: summary.renorm_volume,
        renorm_error: summary.renorm_error,
        drift_star: summary.drift_star,
        constant_fit,
        mass_fit,
    })
}

fn profile(metric: &RadialMetric, range: Range, fit: Option<FitKind>, output: &OutputArgs) -> Result<(), CliError> {
    let curve = profile_curve(metric, &grid_of(range))?;
    let laws = derivative_laws(&curve)?;
    let mut table = Table::new(&["r", "A", "V", "H", "dVdA", "second_law", "mono23"]);
    for (i, s) in curve.samples.iter().enumerate() {
        table.push(
            [s.r, s.area, s.volume, s.h, laws.dvda[i].1, laws.second_law[i].1, laws.mono23[i].1]
                .into_iter()
                .map(Cell::from)
                .collect(),
        );
    }
    match fit {
        None => write_table(&table, "profile", Some(metric), Map::new(), output),
        Some(FitKind::Isoballs) => {
            let report = isoballs_report(metric)?;
            let mut doc = Map::new();
            doc.insert("metric".into(), metric_value(metric));
            doc.insert("isoballs".into(), serde_json::to_value(&report).expect("fit report serializes"));
            let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("fit report serializes");
            text.push('\n');
            emit(None, &text)?;
            if output.out.is_some() {
                let mut extra = Map::new();
                extra.insert("isoballs".into(), serde_json::to_value(&report).expect("fit report serializes"));
                write_table(&table, "profile", Some(metric), extra, output)?;
            }
            Ok(())
        }
    }
}

fn foliation(metric: &RadialMetric, range: Range, output: &OutputArgs) -> Result<(), CliError> {
    let samples = foliation_mass_curve(metric, &grid_of(range))?;
    let mut table = Table::new(&["r", "A", "F", "dF"]);
    for s in samples {
        table.push([s.r, s.area, s.hawking, s.dhawking].into_iter().map(Cell::from).collect());
    }
    write_table(&table, "foliation", Some(metric), Map::new(), output)
}

fn spectrum(metric: &RadialMetric, range: Range, lmax: u32, output: &OutputArgs) -> Result<(), CliError> {
    let reports = grid_of(range)
        .par_iter()
        .map(|&r| stability_spectrum(metric, r, lmax))
        .collect::<Result<Vec<_>, LabError>>()?;
    let mut table = Table::new(&["r", "l", "lambda"]);
    for rep in reports {
        for (l, lambda) in rep.lambda {
            table.push(vec![Cell::Real(rep.r), Cell::Int(l.into()), Cell::Real(lambda)]);
        }
    }
    write_table(&table, "spectrum", Some(metric), Map::new(), output)
}

fn conformal_check(
    seed: u64,
    trials: usize,
    lmax: usize,
    (n_theta, n_phi): (usize, usize),
    dilation: [f64; 2],
    output: &OutputArgs,
) -> Result<(), CliError> {
    let grid = SphereGrid::new(n_theta, n_phi)?;
    let results = invariance_trials(&grid, seed, trials, lmax, dilation)?;
    let worst = results.iter().map(|t| t.defect()).fold(0.0, f64::max);
    if output.out.is_some() {
        let mut table = Table::new(&["trial", "dilation", "s_before", "s_after", "defect"]);
        for t in &results {
            table.push(vec![
                Cell::Int(t.trial as i64),
                Cell::Real(t.params.dilation),
                Cell::Real(t.s_before),
                Cell::Real(t.s_after),
                Cell::Real(t.defect()),
            ]);
        }
        let mut extra = Map::new();
        extra.insert("seed".into(), json!(seed));
        extra.insert("grid".into(), json!([n_theta, n_phi]));
        extra.insert("max_defect".into(), json!(worst));
        write_table(&table, "conformal-check", None, extra, output)?;
    }
    println!("max |S(u)-S(v)| = {worst:.3e} over {trials} trials (seed {seed}, lmax {lmax}, grid {n_theta}x{n_phi})");
    if !(worst < INVARIANCE_TOLERANCE) {
        return Err(CliError::Check(format!("max defect {worst:.3e} is not below {INVARIANCE_TOLERANCE:e}")));
    }
    Ok(())
}

fn summary_text(rep: &CounterexampleReport) -> String {
    let threshold = rep.threshold_area.map_or("none".to_string(), |a| format!("{a:.6e}"));
    format!(
        "metric: {:?}\nmin scalar_R = {:.6} at r = {:.4}\nrenormalized volume = {:.9}\nboundary area = {:.9}\n\
         drift_star = {:.9}\nA* = {threshold}\nverdict: {}\n",
        rep.metric_id,
        rep.min_scalar_r,
        rep.min_scalar_r_at,
        rep.renorm_volume,
        rep.boundary_area,
        rep.drift_star,
        rep.verdict
    )
}

fn counterexample(args: &MetricArgs, output: &OutputArgs) -> Result<(), CliError> {
    let inline = args.metric.is_some() || args.mass.is_some() || args.spec.is_some() || !args.perturb.is_empty();
    let metric = if inline { resolve_metric(args)? } else { shipped_metric()? };
    let rep = counterexample_report(&metric)?;
    let report_json = || {
        let mut doc = Map::new();
        doc.insert("command".into(), json!("counterexample"));
        doc.insert("metric".into(), metric_value(&metric));
        doc.insert("report".into(), serde_json::to_value(&rep).expect("report serializes"));
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("report serializes");
        text.push('\n');
        text
    };
    match (&output.out, output.format) {
        (None, Format::Json) => emit(None, &report_json()),
        (None, Format::Csv) => emit(None, &summary_text(&rep)),
        (Some(path), format) => {
            let text = match format {
                Format::Json => report_json(),
                Format::Csv => {
                    let mut table = Table::new(&["r", "A", "gap"]);
                    for c in &rep.comparison {
                        table.push(vec![Cell::Real(c.r), Cell::Real(c.area), Cell::Real(c.gap)]);
                    }
                    table.to_csv()
                }
            };
            emit(Some(path), &text)?;
            emit(None, &summary_text(&rep))
        }
    }
}
