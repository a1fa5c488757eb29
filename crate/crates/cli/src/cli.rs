use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::format::parse_complex;

#[derive(Debug, Parser)]
#[command(name = "heraldlab", version, about = "Heralded non-Gaussian states from two-mode Gaussian states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report for one (a, b, c) and photon count n, as JSON.
    Analyze(AnalyzeArgs),
    /// Metric curves over |z| or n, as long-format CSV.
    Sweep(SweepArgs),
    /// Free parameter a maximizing the heralding probability at fixed z.
    Optimize(OptimizeArgs),
    /// Wigner function samples on a rectangular grid, as CSV.
    Wigner(WignerArgs),
    /// Photon-number distribution of the measured mode, as CSV.
    Distribution(DistributionArgs),
    /// Cross-check closed forms against the numerical oracles.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct Abc {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub b: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub c: Complex64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub abc: Abc,
    #[arg(long)]
    pub n: usize,
    /// Absolute tolerance of the Wigner negativity.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVariable {
    #[value(name = "z_abs")]
    ZAbs,
    #[value(name = "n")]
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    #[value(name = "wigner_negativity")]
    WignerNegativity,
    #[value(name = "ng_measure")]
    NgMeasure,
    #[value(name = "fidelity")]
    Fidelity,
    #[value(name = "d_x")]
    DX,
    #[value(name = "d_p")]
    DP,
    #[value(name = "mean_number")]
    MeanNumber,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::WignerNegativity => "wigner_negativity",
            Metric::NgMeasure => "ng_measure",
            Metric::Fidelity => "fidelity",
            Metric::DX => "d_x",
            Metric::DP => "d_p",
            Metric::MeanNumber => "mean_number",
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub variable: SweepVariable,
    #[arg(long, allow_hyphen_values = true)]
    pub start: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub stop: f64,
    #[arg(long)]
    pub count: usize,
    /// Photon counts to sweep over (z_abs sweeps only).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Fixed |z| (n sweeps only).
    #[arg(long = "z-abs", allow_hyphen_values = true)]
    pub z_abs: Option<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "wigner_negativity,ng_measure")]
    pub metrics: Vec<Metric>,
    /// Absolute tolerance of the Wigner negativity.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    /// Fock state |k>.
    #[arg(long, conflicts_with_all = ["a", "b", "c", "z", "big_r", "n"])]
    pub fock: Option<usize>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires_all = ["b", "c", "n"], conflicts_with_all = ["z", "big_r"])]
    pub a: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "a")]
    pub b: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "a")]
    pub c: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires_all = ["big_r", "n"])]
    pub z: Option<Complex64>,
    #[arg(long = "R", id = "big_r", value_parser = parse_complex, allow_hyphen_values = true, requires = "z")]
    pub big_r: Option<Complex64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "x-min", default_value_t = -6.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long = "x-max", default_value_t = 6.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long = "p-min", default_value_t = -6.0, allow_hyphen_values = true)]
    pub p_min: f64,
    #[arg(long = "p-max", default_value_t = 6.0, allow_hyphen_values = true)]
    pub p_max: f64,
    #[arg(long, default_value_t = 241)]
    pub nx: usize,
    #[arg(long, default_value_t = 241)]
    pub np: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    #[command(flatten)]
    pub abc: Abc,
    #[arg(long = "n-max", default_value_t = 40)]
    pub n_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(value_enum, default_value = "quick")]
    pub level: LevelArg,
}
