use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sadslab", version, about = "Centered spheres, profiles and conformal checks on rotationally symmetric AH metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-sphere table: area, H, K, Hawking mass, residuals, λ₁
    Analyze {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long = "r", value_name = "LO:HI:STEP", default_value = "3:12:0.25", value_parser = parse_range)]
        range: Range,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Centered-ball profile with derivative laws, optionally with expansion fits
    Profile {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long = "r", value_name = "LO:HI:STEP", default_value = "3:12:0.1", value_parser = parse_range)]
        range: Range,
        #[arg(long, value_enum)]
        fit: Option<FitKind>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Hawking mass along the centered foliation and its area derivative
    Foliation {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long = "r", value_name = "LO:HI:STEP", default_value = "3:12:0.1", value_parser = parse_range)]
        range: Range,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Stability eigenvalues λ_ℓ of centered spheres
    Spectrum {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long = "r", value_name = "LO:HI:STEP", default_value = "4:10:1", value_parser = parse_range)]
        range: Range,
        #[arg(long, default_value_t = 4)]
        lmax: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded check that S(u) is unchanged by Möbius pullbacks
    ConformalCheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        lmax: usize,
        #[arg(long, value_name = "NTHETAxNPHI", default_value = "64x128", value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long, value_name = "LO:HI", default_value = "0.5:2", value_parser = parse_interval)]
        dilation: [f64; 2],
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Curvature dip, (∗) and far-competitor verdict; the shipped family by default
    Counterexample {
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the acceptance suite
    Accept,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricChoice {
    Hyperbolic,
    Sads,
    Perturbed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitKind {
    Isoballs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MetricArgs {
    #[arg(long, value_enum, conflicts_with = "spec")]
    pub metric: Option<MetricChoice>,
    #[arg(long, conflicts_with = "spec")]
    pub mass: Option<f64>,
    /// Perturbation term of a perturbed metric, repeatable
    #[arg(long = "perturb", value_name = "AMP:RATE", value_parser = parse_interval)]
    pub perturb: Vec<[f64; 2]>,
    /// Metric spec file, or JSON output of an earlier run
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

fn parse_number(text: &str) -> Result<f64, String> {
    let x: f64 = text.trim().parse().map_err(|_| format!("`{text}` is not a number"))?;
    if !x.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    Ok(x)
}

pub fn parse_range(text: &str) -> Result<Range, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(format!("expected LO:HI:STEP, got `{text}`"));
    };
    let range = Range { lo: parse_number(lo)?, hi: parse_number(hi)?, step: parse_number(step)? };
    if !(range.step > 0.0) || range.hi < range.lo {
        return Err(format!("need LO <= HI and STEP > 0, got `{text}`"));
    }
    Ok(range)
}

pub fn parse_interval(text: &str) -> Result<[f64; 2], String> {
    let (a, b) = text.split_once(':').ok_or_else(|| format!("expected A:B, got `{text}`"))?;
    Ok([parse_number(a)?, parse_number(b)?])
}

pub fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text.split_once('x').ok_or_else(|| format!("expected NTHETAxNPHI, got `{text}`"))?;
    let n = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("`{s}` is not a grid size"));
    Ok((n(a)?, n(b)?))
}
