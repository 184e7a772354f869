//! Convergence tables and error profiles for the model problems.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dgtime::bench::{profile_csv, run_experiment_with, Experiment, ExperimentReport, ExperimentSpec, DEFAULT_SAMPLES};

#[derive(Parser)]
#[command(name = "dg-bench", version, about = "DG time stepping convergence benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scalar test equation, closed-form reference.
    Ode(Options),
    /// 1D heat equation against the Laplace-inverted continuous solution.
    Heat1d(Options),
    /// 2D heat equation against the Laplace-inverted semidiscrete solution.
    Heat2d(Options),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(Args)]
struct Options {
    /// Polynomial degree plus one (dG(r-1)).
    #[arg(long)]
    r: Option<usize>,
    /// Comma-separated number of time steps; values must double.
    #[arg(long = "N", value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Spatial intervals per direction.
    #[arg(long = "P")]
    p: Option<usize>,
    /// Weight t^alpha on U; U* and nodal use alpha + 1 and alpha + r - 1.
    #[arg(long, value_name = "ALPHA")]
    weighted: Option<f64>,
    /// Measure errors on [T/4, T] only.
    #[arg(long)]
    cutoff: bool,
    /// Sample points per interval.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Set the source term to zero.
    #[arg(long)]
    homogeneous: bool,
    /// Fix the contour size K instead of choosing it from the window.
    #[arg(long, value_name = "K")]
    contour_nodes: Option<usize>,
    /// Recompute the reference with K + 8 nodes and report the change.
    #[arg(long)]
    check_contour: bool,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dump per-interval samples of U - u and U - U* as CSV.
    #[arg(long)]
    profile: bool,
}

fn spec_from(experiment: Experiment, o: &Options) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(experiment);
    if let Some(r) = o.r {
        spec.r = r;
    }
    if let Some(ns) = &o.n {
        spec.ns = ns.clone();
    }
    if let Some(p) = o.p {
        spec.p = p;
    }
    spec.weighted = o.weighted;
    spec.cutoff = o.cutoff;
    spec.samples = o.samples;
    spec.homogeneous = o.homogeneous;
    spec.half_nodes = o.contour_nodes;
    spec
}

fn render(report: &ExperimentReport, format: Format) -> String {
    match format {
        Format::Csv => report.table.to_csv(),
        Format::Md => {
            let mut s = report.table.to_markdown();
            if let Some(c) = &report.contour {
                s.push_str(&format!("\nreference contour: K = {}, window [{:e}, {}]", c.half_nodes, c.window.0, c.window.1));
                if let Some(change) = c.self_check {
                    s.push_str(&format!(", K+8 relative change {change:.2e}"));
                }
                s.push('\n');
            }
            s
        }
    }
}

fn run(cli: Cli) -> dgtime::Result<String> {
    let (experiment, o) = match &cli.command {
        Command::Ode(o) => (Experiment::Ode, o),
        Command::Heat1d(o) => (Experiment::Heat1d, o),
        Command::Heat2d(o) => (Experiment::Heat2d, o),
    };
    let spec = spec_from(experiment, o);
    if o.profile {
        return profile_csv(&spec);
    }
    let report = run_experiment_with(&spec, o.check_contour)?;
    Ok(render(&report, o.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Ode(o) | Command::Heat1d(o) | Command::Heat2d(o) => o.out.clone(),
    };
    match run(cli) {
        Ok(text) => match out {
            Some(path) => match fs::write(&path, text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("dg-bench: cannot write {}: {e}", path.display());
                    ExitCode::FAILURE
                }
            },
            None => {
                print!("{text}");
                ExitCode::SUCCESS
            }
        },
        Err(e) => {
            eprintln!("dg-bench: {e}");
            ExitCode::from(2)
        }
    }
}
