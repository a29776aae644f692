use anyhow::Context;
use clap::Parser;
use parapost::harness::config::{self, Elements, OutputFormat, ProblemChoice, Settings};
use parapost::harness::table::{run_table, to_csv, to_markdown, EstimatorChoice};
use std::path::PathBuf;
use std::process::ExitCode;

// an alias keeps clap from treating the list as repeated values
type StepList = Vec<usize>;

/// Extrapolated backward Euler with maximum-norm error bounds: convergence
/// and efficiency tables.
#[derive(Parser, Debug)]
#[command(name = "parapost", version)]
struct Cli {
    /// builtin, manufactured or file=<path>
    #[arg(long, value_parser = config::parse_problem_choice)]
    problem: Option<ProblemChoice>,
    /// Number of extrapolation levels (>= 2)
    #[arg(long = "L", value_parser = config::parse_order)]
    order: Option<usize>,
    /// Comma-separated numbers of time steps
    #[arg(long = "M", value_parser = config::parse_steps)]
    steps: Option<StepList>,
    /// Number of elements, or auto
    #[arg(long = "N", value_parser = config::parse_elements)]
    elements: Option<Elements>,
    /// h=tau or fixed
    #[arg(long, value_parser = config::parse_couple)]
    couple: Option<config::CoupleMode>,
    /// default or zero
    #[arg(long, value_parser = config::parse_estimator)]
    estimator: Option<EstimatorChoice>,
    /// Output file (standard output if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or md
    #[arg(long, value_parser = config::parse_format)]
    format: Option<OutputFormat>,
    /// Oracle refinement factor (even)
    #[arg(long = "oracle-factor", value_parser = config::parse_oracle_factor)]
    oracle_factor: Option<usize>,
    /// Reserved
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    verbose: bool,
    /// key = value settings file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

fn settings(cli: Cli) -> Result<Settings, String> {
    let mut s = Settings::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        s.apply_file_contents(&text)?;
    }
    if let Some(v) = cli.problem {
        s.problem = v;
    }
    if let Some(v) = cli.order {
        s.order = v;
    }
    if let Some(v) = cli.steps {
        s.steps = v;
    }
    if let Some(v) = cli.elements {
        s.elements = v;
    }
    if let Some(v) = cli.couple {
        s.couple = v;
    }
    if let Some(v) = cli.estimator {
        s.estimator = v;
    }
    if cli.out.is_some() {
        s.out = cli.out;
    }
    if let Some(v) = cli.format {
        s.format = v;
    }
    if let Some(v) = cli.oracle_factor {
        s.oracle_factor = v;
    }
    if cli.seed.is_some() {
        s.seed = cli.seed;
    }
    s.verbose |= cli.verbose;
    Ok(s)
}

/// Runs the table; `Ok(false)` when some row's oracle failed its check.
fn execute(s: &Settings) -> anyhow::Result<bool> {
    let table = s.table_config().map_err(anyhow::Error::msg)?;
    let problem = s.problem.load().context("loading problem")?;
    if s.verbose {
        eprintln!(
            "problem {} L={} M={:?} coupling {:?} oracle factor {}",
            problem.name, table.order, table.steps, table.coupling, table.oracle_factor
        );
    }
    let rows = run_table(&problem, &table).context("running table")?;
    let text = match s.format {
        OutputFormat::Csv => to_csv(&rows),
        OutputFormat::Markdown => to_markdown(&rows),
    };
    match &s.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    let mut ok = true;
    for row in &rows {
        if s.verbose {
            eprintln!("M={} oracle error estimate {:.3e}", row.m, row.oracle_error);
        }
        if let Some(err) = &row.oracle_failure {
            eprintln!("M={}: {err}", row.m);
            ok = false;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let s = match settings(cli) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = s.table_config() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match execute(&s) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
