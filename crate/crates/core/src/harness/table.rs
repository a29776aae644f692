//! Convergence and efficiency tables.

use super::oracle::{measure_error, reference_solution};
use crate::error::{Error, Result};
use crate::estimator::{self, default_elliptic_estimator, EllipticEstimator, EstimatorReport, ZeroEstimator};
use crate::fem1d::SpaceMesh;
use crate::par;
use crate::problem::ProblemSpec;
use crate::reconstruct::NodeLayout;
use crate::timestepper::{run, TimeMesh};
use std::fmt::Write as _;
use std::time::Instant;

pub const CSV_HEADER: &str = "M,N,L,e_M,p_M,eta_init,eta_f,eta_t,eta_ell,eta_total,chi_M,wall_s";

/// How the number of elements follows from the number of steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// `h = τ`, so `N = round(M (x_b - x_a) / T)`.
    HEqualsTau,
    /// The same `N` for every row.
    Fixed(usize),
}

impl Coupling {
    pub fn elements(&self, problem: &ProblemSpec, m: usize) -> usize {
        match *self {
            Coupling::HEqualsTau => ((m as f64) * problem.length() / problem.final_time).round().max(2.0) as usize,
            Coupling::Fixed(n) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EstimatorChoice {
    #[default]
    Default,
    Zero,
}

#[derive(Debug, Clone)]
pub struct TableConfig {
    pub order: usize,
    pub steps: Vec<usize>,
    pub coupling: Coupling,
    pub estimator: EstimatorChoice,
    pub oracle_factor: usize,
}

impl TableConfig {
    pub fn new(order: usize, steps: Vec<usize>) -> Self {
        Self {
            order,
            steps,
            coupling: Coupling::HEqualsTau,
            estimator: EstimatorChoice::Default,
            oracle_factor: 16,
        }
    }
}

/// One row of the table.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub m: usize,
    pub n: usize,
    pub order: usize,
    /// Error against the oracle at the final time.
    pub error: f64,
    /// Experimental order against the previous row; `None` on the first.
    pub rate: Option<f64>,
    pub report: EstimatorReport,
    /// `e_M / η^M`
    pub efficiency: f64,
    pub wall_seconds: f64,
    /// Estimated error of the oracle.
    pub oracle_error: f64,
    /// Set when the oracle failed its self-consistency check.
    pub oracle_failure: Option<Error>,
    /// Error against the exact solution, when the problem provides one.
    pub exact_error: Option<f64>,
}

/// Solves, estimates and measures one configuration.
pub fn run_row(problem: &ProblemSpec, config: &TableConfig, m: usize) -> Result<RunResult> {
    let start = Instant::now();
    let n = config.coupling.elements(problem, m);
    let mesh = SpaceMesh::uniform(problem.x_left, problem.x_right, n)?;
    let time_mesh = TimeMesh::uniform(problem.final_time, m)?;
    let trajectory = run(problem, &mesh, &time_mesh, config.order, NodeLayout::Equispaced)?;
    let report = match config.estimator {
        EstimatorChoice::Default => {
            let est = default_elliptic_estimator(problem)?;
            estimator::estimate(problem, &trajectory, &est as &dyn EllipticEstimator)?
        }
        EstimatorChoice::Zero => estimator::estimate(problem, &trajectory, &ZeroEstimator)?,
    };
    let reference = reference_solution(problem, n, m, config.order, config.oracle_factor)?;
    let u_h = trajectory.final_state();
    let error = measure_error(&mesh, u_h, &|x| reference.eval(x));
    let exact_error = problem.exact.as_ref().map(|u| {
        let t = problem.final_time;
        measure_error(&mesh, u_h, &|x| u(x, t))
    });
    let efficiency = error / report.total;
    Ok(RunResult {
        m,
        n,
        order: config.order,
        error,
        rate: None,
        report,
        efficiency,
        wall_seconds: start.elapsed().as_secs_f64(),
        oracle_error: reference.estimated_error(),
        oracle_failure: reference.check(error).err(),
        exact_error,
    })
}

/// `p = ln(e_prev / e) / ln(M / M_prev)`, which is the usual
/// `(ln e_{M/2} - ln e_M) / ln 2` for doubling sequences.
pub fn observed_rate(prev: (usize, f64), next: (usize, f64)) -> f64 {
    (prev.1 / next.1).ln() / (next.0 as f64 / prev.0 as f64).ln()
}

/// Runs every row (concurrently) and returns them in the order of `config.steps`.
pub fn run_table(problem: &ProblemSpec, config: &TableConfig) -> Result<Vec<RunResult>> {
    if config.steps.is_empty() {
        return Err(Error::InvalidMesh("empty list of step counts".into()));
    }
    if config.steps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidMesh("step counts must increase".into()));
    }
    problem.validate()?;
    let mut rows = par::try_map_range(config.steps.len(), |k| run_row(problem, config, config.steps[k]))?;
    for k in 1..rows.len() {
        let prev = (rows[k - 1].m, rows[k - 1].error);
        rows[k].rate = Some(observed_rate(prev, (rows[k].m, rows[k].error)));
    }
    Ok(rows)
}

fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

fn fields(row: &RunResult) -> [String; 12] {
    [
        row.m.to_string(),
        row.n.to_string(),
        row.order.to_string(),
        sci(row.error),
        row.rate.map(sci).unwrap_or_default(),
        sci(row.report.eta_init),
        sci(row.report.eta_f),
        sci(row.report.eta_t),
        sci(row.report.eta_ell),
        sci(row.report.total),
        sci(row.efficiency),
        sci(row.wall_seconds),
    ]
}

/// CSV with [`CSV_HEADER`] and six significant digits.
pub fn to_csv(rows: &[RunResult]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&fields(row).join(","));
        out.push('\n');
    }
    out
}

/// Markdown table with the CSV columns.
pub fn to_markdown(rows: &[RunResult]) -> String {
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
    for row in rows {
        let _ = writeln!(out, "| {} |", fields(row).join(" | "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{builtin_test_problem, manufactured_problem};

    #[test]
    fn coupling() {
        let p = builtin_test_problem();
        assert_eq!(Coupling::HEqualsTau.elements(&p, 32), 64);
        assert_eq!(Coupling::Fixed(10).elements(&p, 32), 10);
        assert_eq!(Coupling::HEqualsTau.elements(&manufactured_problem(), 8), 8);
    }

    #[test]
    fn rates() {
        assert!((observed_rate((8, 4.0), (16, 1.0)) - 2.0).abs() < 1e-15);
        assert!((observed_rate((10, 1.0), (30, 1.0 / 27.0)) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn small_table_is_consistent() {
        let p = builtin_test_problem();
        let config = TableConfig::new(2, vec![4, 8]);
        let rows = run_table(&p, &config).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].rate.is_none() && rows[1].rate.is_some());
        for row in &rows {
            assert_eq!(row.n, 2 * row.m);
            assert!((row.efficiency - row.error / row.report.total).abs() <= 1e-14 * row.efficiency);
            assert!(row.efficiency <= 1.0);
        }
        let csv = to_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1].split(',').nth(4), Some(""));
        assert_eq!(lines[1].split(',').count(), 12);
        let md = to_markdown(&rows);
        assert!(md.starts_with("| M | N | L | e_M |"));
        assert_eq!(md.lines().count(), 4);
    }

    #[test]
    fn rejects_bad_step_lists() {
        let p = builtin_test_problem();
        assert!(run_table(&p, &TableConfig::new(2, vec![])).is_err());
        assert!(run_table(&p, &TableConfig::new(2, vec![8, 4])).is_err());
    }
}
