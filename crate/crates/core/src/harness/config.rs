//! Run settings. A config file holds `key = value` lines whose keys are the
//! long CLI flag names without dashes (`problem`, `L`, `M`, `N`, `couple`,
//! `estimator`, `out`, `format`, `oracle-factor`, `seed`, `verbose`).
//! Flags given on the command line override the file.

use super::problem_file::{load_problem, parse_key_values};
use super::table::{Coupling, EstimatorChoice, TableConfig};
use crate::error::Result;
use crate::problem::{builtin_test_problem, manufactured_problem, ProblemSpec};
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemChoice {
    Builtin,
    Manufactured,
    File(PathBuf),
}

impl ProblemChoice {
    pub fn load(&self) -> Result<ProblemSpec> {
        match self {
            ProblemChoice::Builtin => Ok(builtin_test_problem()),
            ProblemChoice::Manufactured => Ok(manufactured_problem()),
            ProblemChoice::File(path) => load_problem(path),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elements {
    Auto,
    Count(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoupleMode {
    HEqualsTau,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub problem: ProblemChoice,
    pub order: usize,
    pub steps: Vec<usize>,
    pub elements: Elements,
    pub couple: CoupleMode,
    pub estimator: EstimatorChoice,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub oracle_factor: usize,
    /// Accepted for forward compatibility; nothing is random.
    pub seed: Option<u64>,
    pub verbose: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            problem: ProblemChoice::Builtin,
            order: 2,
            steps: vec![32, 64, 128],
            elements: Elements::Auto,
            couple: CoupleMode::HEqualsTau,
            estimator: EstimatorChoice::Default,
            out: None,
            format: OutputFormat::Csv,
            oracle_factor: 16,
            seed: None,
            verbose: false,
        }
    }
}

pub fn parse_problem_choice(s: &str) -> std::result::Result<ProblemChoice, String> {
    match s {
        "builtin" => Ok(ProblemChoice::Builtin),
        "manufactured" => Ok(ProblemChoice::Manufactured),
        _ => match s.strip_prefix("file=") {
            Some(path) if !path.is_empty() => Ok(ProblemChoice::File(PathBuf::from(path))),
            _ => Err(format!("expected builtin, manufactured or file=<path>, got `{s}`")),
        },
    }
}

pub fn parse_order(s: &str) -> std::result::Result<usize, String> {
    let order: usize = s
        .trim()
        .parse()
        .map_err(|_| format!("L must be an integer, got `{s}`"))?;
    if order < 2 {
        return Err(format!("L must be >= 2, got {order}"));
    }
    Ok(order)
}

pub fn parse_steps(s: &str) -> std::result::Result<Vec<usize>, String> {
    let steps = s
        .split(',')
        .map(|p| match p.trim().parse::<usize>() {
            Ok(m) if m > 0 => Ok(m),
            _ => Err(format!(
                "M must be a comma-separated list of positive integers, got `{s}`"
            )),
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if steps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("M values must increase, got `{s}`"));
    }
    Ok(steps)
}

pub fn parse_elements(s: &str) -> std::result::Result<Elements, String> {
    if s == "auto" {
        return Ok(Elements::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(Elements::Count(n)),
        _ => Err(format!("N must be `auto` or an integer >= 2, got `{s}`")),
    }
}

pub fn parse_couple(s: &str) -> std::result::Result<CoupleMode, String> {
    match s {
        "h=tau" => Ok(CoupleMode::HEqualsTau),
        "fixed" => Ok(CoupleMode::Fixed),
        _ => Err(format!("couple must be h=tau or fixed, got `{s}`")),
    }
}

pub fn parse_estimator(s: &str) -> std::result::Result<EstimatorChoice, String> {
    match s {
        "default" => Ok(EstimatorChoice::Default),
        "zero" => Ok(EstimatorChoice::Zero),
        _ => Err(format!("estimator must be default or zero, got `{s}`")),
    }
}

pub fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "md" => Ok(OutputFormat::Markdown),
        _ => Err(format!("format must be csv or md, got `{s}`")),
    }
}

pub fn parse_oracle_factor(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(f) if f >= 2 && f % 2 == 0 => Ok(f),
        _ => Err(format!("oracle factor must be an even integer >= 2, got `{s}`")),
    }
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(format!("expected true or false, got `{s}`")),
    }
}

impl Settings {
    /// Applies one `key = value` setting.
    pub fn apply(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "problem" => self.problem = parse_problem_choice(value)?,
            "L" => self.order = parse_order(value)?,
            "M" => self.steps = parse_steps(value)?,
            "N" => self.elements = parse_elements(value)?,
            "couple" => self.couple = parse_couple(value)?,
            "estimator" => self.estimator = parse_estimator(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = parse_format(value)?,
            "oracle-factor" => self.oracle_factor = parse_oracle_factor(value)?,
            "seed" => {
                self.seed = Some(
                    value
                        .parse()
                        .map_err(|_| format!("seed must be an integer, got `{value}`"))?,
                )
            }
            "verbose" => self.verbose = parse_bool(value)?,
            _ => return Err(format!("unknown setting `{key}`")),
        }
        Ok(())
    }

    /// Applies every setting of a config file.
    pub fn apply_file_contents(&mut self, text: &str) -> std::result::Result<(), String> {
        let map = parse_key_values(text).map_err(|e| e.to_string())?;
        for (key, value) in &map {
            self.apply(key, value)?;
        }
        Ok(())
    }

    /// Table configuration; fails when `couple` and `N` disagree.
    pub fn table_config(&self) -> std::result::Result<TableConfig, String> {
        let coupling = match (self.couple, self.elements) {
            (CoupleMode::HEqualsTau, Elements::Auto) => Coupling::HEqualsTau,
            (CoupleMode::Fixed, Elements::Count(n)) => Coupling::Fixed(n),
            (CoupleMode::HEqualsTau, Elements::Count(_)) => return Err("--N must be auto with --couple h=tau".into()),
            (CoupleMode::Fixed, Elements::Auto) => return Err("--couple fixed needs an integer --N".into()),
        };
        Ok(TableConfig {
            order: self.order,
            steps: self.steps.clone(),
            coupling,
            estimator: self.estimator,
            oracle_factor: self.oracle_factor,
        })
    }
}
