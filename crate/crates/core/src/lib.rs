//! P1 finite elements in space with Richardson-extrapolated backward Euler in
//! time for `∂_t u - (d u')' + r u = f` on an interval, together with a
//! maximum-norm a posteriori error bound and an experiment harness.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimator;
pub mod fem1d;
pub mod harness;
pub mod par;
pub mod polybasis;
pub mod problem;
pub mod quadrature;
pub mod reconstruct;
pub mod timestepper;

pub use error::{Error, Result};
pub use estimator::{EllipticEstimator, EstimatorReport, GreenFunctionBounds};
pub use fem1d::{GridFunction, SpaceMesh};
pub use problem::ProblemSpec;
pub use reconstruct::NodeLayout;
pub use timestepper::{ExtrapolationTableau, TimeMesh, Trajectory};
