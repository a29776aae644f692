//! Reference solutions by self-refinement.
//!
//! The same solver is run with `L_ref = min(L + 2, 5)` on meshes refined by
//! `factor / 2` and `factor` in both space and time. The gap between the two
//! runs estimates the error of the finer one: with second order in `h` and
//! `h = τ` refinement, `error(fine) ≈ gap / (2² - 1)`.

use crate::error::{Error, Result};
use crate::fem1d::{self, GridFunction, SpaceMesh, SUP_SAMPLES};
use crate::problem::ProblemSpec;
use crate::reconstruct::NodeLayout;
use crate::timestepper::{Integrator, TimeMesh};

/// Highest order the oracle uses.
pub const MAX_REFERENCE_ORDER: usize = 5;

/// Final state of a refined run, evaluable anywhere in the domain.
#[derive(Debug, Clone)]
pub struct Reference {
    pub mesh: SpaceMesh,
    pub values: GridFunction,
    /// Sampled maximum difference to the run at half the refinement.
    pub gap: f64,
    pub order: usize,
}

impl Reference {
    pub fn eval(&self, x: f64) -> f64 {
        self.values.eval(&self.mesh, x)
    }

    /// Estimated error of the reference itself.
    pub fn estimated_error(&self) -> f64 {
        self.gap / 3.0
    }

    /// Checks that the reference error is at most 1% of `measured`.
    pub fn check(&self, measured: f64) -> Result<()> {
        let oracle_error = self.estimated_error();
        if oracle_error <= 0.01 * measured {
            Ok(())
        } else {
            Err(Error::OracleNotConverged { oracle_error, measured })
        }
    }
}

/// Final state of one run on uniform meshes with `n` elements and `m` steps.
pub fn final_state(problem: &ProblemSpec, n: usize, m: usize, order: usize) -> Result<(SpaceMesh, GridFunction)> {
    let mesh = SpaceMesh::uniform(problem.x_left, problem.x_right, n)?;
    let time_mesh = TimeMesh::uniform(problem.final_time, m)?;
    let state = Integrator::new(problem, &mesh, &time_mesh, order, NodeLayout::Equispaced)?.finish()?;
    Ok((mesh, state))
}

/// Reference for a run with `n` elements, `m` steps and order `order`.
/// `factor` must be even and at least 2.
pub fn reference_solution(problem: &ProblemSpec, n: usize, m: usize, order: usize, factor: usize) -> Result<Reference> {
    if factor < 2 || !factor.is_multiple_of(2) {
        return Err(Error::InvalidProblem(format!(
            "oracle factor must be even and >= 2, got {factor}"
        )));
    }
    let ref_order = (order + 2).min(MAX_REFERENCE_ORDER);
    let half = factor / 2;
    let (coarse_mesh, coarse) = final_state(problem, half * n, half * m, ref_order)?;
    let (mesh, values) = final_state(problem, factor * n, factor * m, ref_order)?;
    let gap = fem1d::sup_norm_sampled(
        &mesh,
        |e, x| values.eval_on_element(&mesh, e, x) - coarse.eval(&coarse_mesh, x),
        SUP_SAMPLES,
    );
    Ok(Reference {
        mesh,
        values,
        gap,
        order: ref_order,
    })
}

/// `max_e max_{r=0..7} |(u_h - u_ref)(x_{e} + r h_e / 7)|`.
pub fn measure_error(mesh: &SpaceMesh, u_h: &GridFunction, u_ref: &(dyn Fn(f64) -> f64 + Sync)) -> f64 {
    fem1d::sup_norm_sampled(mesh, |e, x| u_h.eval_on_element(mesh, e, x) - u_ref(x), SUP_SAMPLES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{manufactured_problem, stationary_problem};

    #[test]
    fn measure_error_basics() {
        let mesh = SpaceMesh::uniform(0.0, 1.0, 4).unwrap();
        let u = fem1d::interpolate(&mesh, |x| x * (1.0 - x));
        assert_eq!(measure_error(&mesh, &u, &|x| u.eval(&mesh, x)), 0.0);
        let zero = GridFunction::zeros(3);
        let hat = |x: f64| (1.0 - (x - 0.5).abs() * 4.0).max(0.0);
        assert_eq!(measure_error(&mesh, &zero, &hat), 1.0);
    }

    #[test]
    fn stationary_reference_is_the_discrete_steady_state() {
        let p = stationary_problem();
        let r = reference_solution(&p, 4, 2, 2, 4).unwrap();
        assert_eq!(r.order, 4);
        assert_eq!(r.mesh.n_elements(), 16);
        for (k, &x) in r.mesh.nodes()[1..16].iter().enumerate() {
            assert!((r.values.values()[k] - x * (1.0 - x)).abs() < 1e-10);
        }
    }

    #[test]
    fn manufactured_reference_matches_exact_solution() {
        let p = manufactured_problem();
        let exact = p.exact.clone().unwrap();
        let r = reference_solution(&p, 64, 64, 2, 16).unwrap();
        let err = fem1d::sup_norm_sampled(
            &r.mesh,
            |e, x| r.values.eval_on_element(&r.mesh, e, x) - exact(x, 1.0),
            8,
        );
        assert!(err <= 1e-6, "oracle error {err}");
        assert!(r.estimated_error() <= 1e-6);
        assert!(r.check(1e-4).is_ok());
        assert!(matches!(r.check(0.0), Err(Error::OracleNotConverged { .. })));
    }

    #[test]
    fn rejects_odd_factor() {
        assert!(reference_solution(&stationary_problem(), 2, 2, 2, 3).is_err());
    }
}
