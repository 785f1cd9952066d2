//! Argument definitions and command dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use aaa_mor_core::{Method, ReduceOptions};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use crate::compare::compare;
use crate::error::{CliError, Result};
use crate::reduce::{aaa, balanced, Outcome};
use crate::{model_file, sigma};

#[derive(Debug, Parser)]
#[command(name = "aaa-mor", version, about = "Model order reduction for LTI state-space systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce one model with one method.
    Reduce(ReduceArgs),
    /// Tabulate error against order for several methods.
    Compare(CompareArgs),
    /// Turn a raw whitespace-separated matrix dump into a model file.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    SysAaa,
    LowrankAaa,
    Balanced,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::SysAaa => Method::SysAaa,
            MethodArg::LowrankAaa => Method::LowrankAaa,
            MethodArg::Balanced => Method::Balanced,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Tuning {
    /// Maximum number of interpolation iterations.
    #[arg(long, default_value_t = 10)]
    pub iters: usize,
    /// Stop once the L-inf error is at or below this value.
    #[arg(long)]
    pub target_linf: Option<f64>,
    /// Relative distance under which low-rank AAA grows an existing point.
    #[arg(long, default_value_t = aaa_mor_core::lowrank::DEFAULT_MIN_DIST)]
    pub min_dist: f64,
    /// Return the iterate with the smallest L-inf error.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub keep_best: bool,
    /// Relative tolerance of the L-inf bisection.
    #[arg(long, default_value_t = aaa_mor_core::norms::DEFAULT_REL_TOL)]
    pub tol_bisect: f64,
    /// Rank tolerance of the minimal-realization passes.
    #[arg(long, default_value_t = aaa_mor_core::statespace::DEFAULT_MINREAL_TOL)]
    pub tol_minreal: f64,
}

impl Tuning {
    pub fn options(&self, order: Option<usize>) -> ReduceOptions {
        ReduceOptions {
            max_iterations: self.iters,
            target_linf: self.target_linf,
            target_order: order,
            keep_best: self.keep_best,
            bisect_tol: self.tol_bisect,
            minreal_tol: self.tol_minreal,
            min_dist: self.min_dist,
            ..ReduceOptions::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    pub model: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::SysAaa)]
    pub method: MethodArg,
    /// Target order; required for balanced truncation.
    #[arg(long)]
    pub order: Option<usize>,
    #[command(flatten)]
    pub tuning: Tuning,
    /// Write sigma-plot data of G, R and G - R to this CSV file.
    #[arg(long)]
    pub sigma_csv: Option<PathBuf>,
    /// Write the machine-readable report to this JSON file.
    #[arg(long)]
    pub report_json: Option<PathBuf>,
    /// Reduced model file [default: <MODEL>.reduced]
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Show frequencies in Hz instead of rad/s.
    #[arg(long)]
    pub hz: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub model: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "sys-aaa,lowrank-aaa,balanced")]
    pub methods: Vec<MethodArg>,
    #[arg(long)]
    pub max_order: usize,
    #[command(flatten)]
    pub tuning: Tuning,
    /// Write the table as JSON to this file.
    #[arg(long)]
    pub report_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// Raw dump: A, B, C and optionally D, row-major, whitespace-separated.
    pub raw: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub p: usize,
    /// Model file to write [default: stdout]
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn default_output(model: &Path) -> PathBuf {
    let mut name = model.as_os_str().to_owned();
    name.push(".reduced");
    PathBuf::from(name)
}

pub fn run_reduce(args: &ReduceArgs, out: &mut dyn Write) -> Result<Outcome> {
    let g = model_file::read(&args.model)?;
    let outcome = match args.method {
        MethodArg::Balanced => {
            let order = args
                .order
                .ok_or_else(|| CliError::Usage("--order is required with --method balanced".into()))?;
            Outcome::Balanced(balanced(&g, order, args.tuning.tol_bisect)?)
        }
        m => Outcome::Aaa(Box::new(aaa(&g, m.into(), &args.tuning.options(args.order))?)),
    };
    let output = args.output.clone().unwrap_or_else(|| default_output(&args.model));
    model_file::write(&output, outcome.reduced())?;
    if let Some(path) = &args.report_json {
        write_text(path, &outcome.to_json())?;
    }
    if let Some(path) = &args.sigma_csv {
        write_text(path, &sigma::sigma_csv(&g, outcome.reduced(), sigma::DEFAULT_POINTS)?)?;
    }
    let stdout_err = |e| CliError::io("<stdout>", e);
    out.write_all(outcome.to_human(args.hz).as_bytes()).map_err(stdout_err)?;
    writeln!(out, "reduced model written to {}", output.display()).map_err(stdout_err)?;
    Ok(outcome)
}

pub fn run_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<()> {
    let g = model_file::read(&args.model)?;
    let methods: Vec<Method> = args.methods.iter().map(|&m| m.into()).collect();
    let table = compare(&g, &methods, args.max_order, &args.tuning.options(None))?;
    if let Some(path) = &args.report_json {
        write_text(path, &table.to_json())?;
    }
    out.write_all(table.to_human().as_bytes()).map_err(|e| CliError::io("<stdout>", e))
}

pub fn run_convert(args: &ConvertArgs, out: &mut dyn Write) -> Result<()> {
    let text = std::fs::read_to_string(&args.raw).map_err(|e| CliError::io(&args.raw, e))?;
    let g = model_file::parse_raw(&text, args.n, args.q, args.p)?;
    match &args.output {
        Some(path) => model_file::write(path, &g),
        None => out.write_all(model_file::format(&g).as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Reduce(a) => run_reduce(a, out).map(|_| ()),
        Command::Compare(a) => run_compare(a, out),
        Command::Convert(a) => run_convert(a, out),
    }
}
