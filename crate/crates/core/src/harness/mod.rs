//! Experiment driver: problem files, the reference oracle, and convergence
//! and efficiency tables.

pub mod config;
pub mod expr;
pub mod oracle;
pub mod problem_file;
pub mod table;

pub use oracle::{measure_error, reference_solution, Reference};
pub use table::{run_table, Coupling, EstimatorChoice, RunResult, TableConfig};
