//! `L`-step Richardson extrapolation of the backward Euler method.
//!
//! Every level `ℓ = 1..L` is an independent backward Euler integration that
//! starts from `v_ℓ^0 = u_h^0` and crosses each interval `I_j` in `ℓ` substeps
//! of size `τ_j/ℓ`, loading `f̂` at each substep target time. The reported
//! value is `u_h^j = Σ_ℓ α_ℓ v_ℓ^j`, where the weights cancel the
//! `τ, τ², ..., τ^{L-1}` terms of the global Euler error expansion. The level
//! chains are never reset to `u_h^j`.

use crate::error::{Error, Result};
use crate::fem1d::{self, EulerOperator, GridFunction, OperatorMatrices, SpaceMesh};
use crate::par;
use crate::polybasis::IntervalMap;
use crate::problem::ProblemSpec;
use crate::reconstruct::{DeltaWeights, NodeLayout, SourceInterpolant};
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

/// Extrapolation weights `α_1..α_L` with `Σ α_ℓ = 1` and
/// `Σ α_ℓ ℓ^{-m} = 0` for `m = 1..L-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationTableau {
    alpha: Vec<f64>,
}

impl ExtrapolationTableau {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder(order));
        }
        // With β_ℓ = α_ℓ ℓ^{1-L} the conditions read Σ_ℓ β_ℓ ℓ^k = δ_{k,L-1},
        // k = 0..L-1, an integer Vandermonde system.
        let last = order as i32 - 1;
        let matrix = DMatrix::from_fn(order, order, |k, l| ((l + 1) as f64).powi(k as i32));
        let mut rhs = DVector::zeros(order);
        rhs[order - 1] = 1.0;
        let lu = matrix.clone().lu();
        let singular = Error::IllConditionedTableau {
            order,
            residual: f64::INFINITY,
        };
        let mut beta = lu.solve(&rhs).ok_or(singular.clone())?;
        let correction = lu.solve(&(&rhs - &matrix * &beta)).ok_or(singular)?;
        beta += correction;
        let alpha: Vec<f64> = beta
            .iter()
            .enumerate()
            .map(|(l, b)| b * ((l + 1) as f64).powi(last))
            .collect();
        let tableau = Self { alpha };
        let residual = tableau.max_residual();
        if !(residual <= 1e-10) {
            return Err(Error::IllConditionedTableau { order, residual });
        }
        Ok(tableau)
    }

    /// `L`
    pub fn order(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `Σ_ℓ α_ℓ ℓ^{-m}` for `m = 0..L-1`; ideally `(1, 0, ..., 0)`.
    pub fn moments(&self) -> Vec<f64> {
        (0..self.order())
            .map(|m| {
                self.alpha
                    .iter()
                    .enumerate()
                    .map(|(l, a)| a * ((l + 1) as f64).powi(-(m as i32)))
                    .sum()
            })
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.moments()
            .iter()
            .enumerate()
            .map(|(m, v)| if m == 0 { (v - 1.0).abs() } else { v.abs() })
            .fold(0.0, f64::max)
    }
}

/// Time nodes `0 = t_0 < t_1 < ... < t_M = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeMesh {
    nodes: Vec<f64>,
}

impl TimeMesh {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidMesh("time mesh needs at least one interval".into()));
        }
        if nodes[0] != 0.0 {
            return Err(Error::InvalidMesh(format!(
                "time mesh must start at 0, got {}",
                nodes[0]
            )));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidMesh("time nodes must be strictly increasing".into()));
        }
        Ok(Self { nodes })
    }

    pub fn uniform(final_time: f64, intervals: usize) -> Result<Self> {
        if intervals == 0 || !(final_time > 0.0) {
            return Err(Error::InvalidMesh(format!(
                "cannot split (0, {final_time}) into {intervals} intervals"
            )));
        }
        let tau = final_time / intervals as f64;
        let mut nodes: Vec<f64> = (0..=intervals).map(|j| tau * j as f64).collect();
        nodes[intervals] = final_time;
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `M`
    pub fn n_intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn t(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    /// `τ_j = t_j - t_{j-1}` for `j = 1..M`.
    pub fn tau(&self, j: usize) -> f64 {
        self.nodes[j] - self.nodes[j - 1]
    }

    pub fn final_time(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Map of `I_j = (t_{j-1}, t_j)` onto `[-1, 1]`.
    pub fn interval(&self, j: usize) -> IntervalMap {
        IntervalMap::new(self.nodes[j - 1], self.nodes[j]).expect("nodes are strictly increasing")
    }
}

/// Everything computed on one interval.
#[derive(Debug, Clone)]
pub struct StepRecord {
    /// `chains[ℓ-1]` holds `v_ℓ^{j-(ℓ-1)/ℓ}, ..., v_ℓ^{j}` in time order.
    pub chains: Vec<Vec<GridFunction>>,
    pub u: GridFunction,
    pub psi: GridFunction,
}

impl StepRecord {
    /// `v_ℓ^j`
    pub fn final_state(&self, level: usize) -> &GridFunction {
        self.chains[level - 1].last().expect("chains are non-empty")
    }
}

/// `ψ^j = -Σ_ℓ α_ℓ (v_ℓ^j - v_ℓ^{j-1/ℓ}) / (τ_j/ℓ)`.
///
/// `last_two[ℓ-1] = (v_ℓ^{j-1/ℓ}, v_ℓ^j)`; for `ℓ = 1` the first entry is `v_1^{j-1}`.
pub fn psi_nodal(
    tableau: &ExtrapolationTableau,
    last_two: &[(&GridFunction, &GridFunction)],
    tau: f64,
) -> GridFunction {
    assert_eq!(last_two.len(), tableau.order(), "one pair per level");
    GridFunction::combination(tableau.alpha().iter().zip(last_two).enumerate().flat_map(
        |(l, (alpha, (before, last)))| {
            let c = -alpha * (l + 1) as f64 / tau;
            [(c, *last), (-c, *before)]
        },
    ))
}

/// Factored Euler operators for each level, keyed by the interval length.
#[derive(Debug, Clone)]
pub struct LevelOperators {
    tau: f64,
    ops: Vec<EulerOperator>,
}

impl LevelOperators {
    pub fn new(mats: &OperatorMatrices, order: usize, tau: f64) -> Result<Self> {
        let ops = par::try_map_range(order, |l| EulerOperator::new(mats, tau / (l + 1) as f64))?;
        Ok(Self { tau, ops })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// Advances every level over the interval of `source`; `levels[ℓ-1]` is
/// `v_ℓ^{j-1}`. The level chains are independent and run concurrently.
pub fn step(
    mats: &OperatorMatrices,
    tableau: &ExtrapolationTableau,
    ops: &LevelOperators,
    levels: &[GridFunction],
    source: &SourceInterpolant,
) -> Result<StepRecord> {
    let map = source.map();
    let tau = map.length();
    debug_assert_eq!(ops.tau, tau);
    if levels.len() != tableau.order() {
        return Err(Error::DimensionMismatch {
            expected: tableau.order(),
            found: levels.len(),
        });
    }
    let chains = par::try_map_range(tableau.order(), |l| -> Result<Vec<GridFunction>> {
        let level = l + 1;
        let op = &ops.ops[l];
        let mut states = Vec::with_capacity(level);
        let mut prev = levels[l].clone();
        for k in (0..level).rev() {
            // target time t_{j - k/ℓ}
            let t = if k == 0 {
                map.right()
            } else {
                map.right() - tau * k as f64 / level as f64
            };
            let load = source.load_at(t)?;
            let next = op.apply(mats, &prev, load.values());
            states.push(next.clone());
            prev = next;
        }
        Ok(states)
    })?;
    let u = GridFunction::combination(
        tableau
            .alpha()
            .iter()
            .zip(&chains)
            .map(|(a, c)| (*a, c.last().expect("non-empty chain"))),
    );
    let pairs: Vec<(&GridFunction, &GridFunction)> = chains
        .iter()
        .zip(levels)
        .map(|(c, start)| {
            let last = c.last().expect("non-empty chain");
            let before = if c.len() >= 2 { &c[c.len() - 2] } else { start };
            (before, last)
        })
        .collect();
    let psi = psi_nodal(tableau, &pairs, tau);
    Ok(StepRecord { chains, u, psi })
}

/// `ψ⁰` from `<ψ⁰, χ>_h = a_h(u_h⁰, χ) - <f̂(0), χ>_h`.
pub fn initial_psi(mats: &OperatorMatrices, u0: &GridFunction, load0: &GridFunction) -> Result<GridFunction> {
    let mut rhs = mats.stiffness.mul(u0.values());
    for (r, f) in rhs.iter_mut().zip(load0.values()) {
        *r -= f;
    }
    fem1d::mass_solve(mats, &rhs)
}

/// Streaming driver over the intervals of a time mesh. Keeps only the
/// current level states, so it serves long fine-grid runs.
pub struct Integrator<'a> {
    problem: &'a ProblemSpec,
    mesh: &'a SpaceMesh,
    time_mesh: &'a TimeMesh,
    mats: Arc<OperatorMatrices>,
    tableau: ExtrapolationTableau,
    weights: Arc<DeltaWeights>,
    ops: Option<LevelOperators>,
    left_load: Option<GridFunction>,
    state: GridFunction,
    /// `v_ℓ^j` for every level
    levels: Vec<GridFunction>,
    j: usize,
}

impl<'a> Integrator<'a> {
    pub fn new(
        problem: &'a ProblemSpec,
        mesh: &'a SpaceMesh,
        time_mesh: &'a TimeMesh,
        order: usize,
        layout: NodeLayout,
    ) -> Result<Self> {
        let tableau = ExtrapolationTableau::new(order)?;
        let mats = Arc::new(fem1d::assemble(problem, mesh)?);
        let weights = Arc::new(DeltaWeights::new(&layout.reference_nodes(order))?);
        let state = fem1d::interpolate(mesh, |x| (problem.initial)(x));
        let levels = vec![state.clone(); order];
        Ok(Self {
            problem,
            mesh,
            time_mesh,
            mats,
            tableau,
            weights,
            ops: None,
            left_load: None,
            state,
            levels,
            j: 0,
        })
    }

    pub fn mats(&self) -> &Arc<OperatorMatrices> {
        &self.mats
    }

    pub fn tableau(&self) -> &ExtrapolationTableau {
        &self.tableau
    }

    pub fn weights(&self) -> &Arc<DeltaWeights> {
        &self.weights
    }

    /// Current accepted state `u_h^j`.
    pub fn state(&self) -> &GridFunction {
        &self.state
    }

    /// Current level states `v_ℓ^j`, `ℓ = 1..L`.
    pub fn levels(&self) -> &[GridFunction] {
        &self.levels
    }

    /// Index `j` of the current state.
    pub fn index(&self) -> usize {
        self.j
    }

    /// Advances over the next interval, returning its record and `f̂` slab,
    /// or `None` at the final time.
    pub fn advance(&mut self) -> Option<Result<(StepRecord, SourceInterpolant)>> {
        if self.j >= self.time_mesh.n_intervals() {
            return None;
        }
        Some(self.advance_inner())
    }

    fn advance_inner(&mut self) -> Result<(StepRecord, SourceInterpolant)> {
        let j = self.j + 1;
        let map = self.time_mesh.interval(j);
        let tau = map.length();
        let source = SourceInterpolant::build(
            self.problem,
            self.mesh,
            map,
            self.weights.clone(),
            self.left_load.take(),
        )?;
        if self.ops.as_ref().map(|o| o.tau()) != Some(tau) {
            self.ops = Some(LevelOperators::new(&self.mats, self.tableau.order(), tau)?);
        }
        let ops = self.ops.as_ref().expect("operators set above");
        let record = step(&self.mats, &self.tableau, ops, &self.levels, &source)?;
        self.left_load = Some(source.right_load());
        self.state = record.u.clone();
        self.levels = (1..=self.tableau.order())
            .map(|l| record.final_state(l).clone())
            .collect();
        self.j = j;
        Ok((record, source))
    }

    /// Runs to the final time and returns `u_h^M`.
    pub fn finish(mut self) -> Result<GridFunction> {
        while let Some(r) = self.advance() {
            r?;
        }
        Ok(self.state)
    }
}

/// Nodal trajectory `u_h^j`, `ψ^j` for `j = 0..M`, with the data needed to
/// rebuild the temporal reconstruction.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub mesh: SpaceMesh,
    pub time_mesh: TimeMesh,
    pub tableau: ExtrapolationTableau,
    pub mats: Arc<OperatorMatrices>,
    pub u: Vec<GridFunction>,
    pub psi: Vec<GridFunction>,
    /// `f̂` on each interval, `sources[j-1]` for `I_j`.
    pub sources: Vec<SourceInterpolant>,
}

impl Trajectory {
    pub fn order(&self) -> usize {
        self.tableau.order()
    }

    pub fn final_state(&self) -> &GridFunction {
        self.u.last().expect("trajectory includes the initial state")
    }
}

/// Runs the extrapolated scheme over the whole time mesh, keeping nodal
/// values of `u_h` and `ψ`. Substep chains are discarded after each interval.
pub fn run(
    problem: &ProblemSpec,
    mesh: &SpaceMesh,
    time_mesh: &TimeMesh,
    order: usize,
    layout: NodeLayout,
) -> Result<Trajectory> {
    run_with(problem, mesh, time_mesh, order, layout, |_, _| {})
}

/// Like [`run`], calling `inspect(j, record)` for every step before the
/// substep chains are dropped.
pub fn run_with(
    problem: &ProblemSpec,
    mesh: &SpaceMesh,
    time_mesh: &TimeMesh,
    order: usize,
    layout: NodeLayout,
    mut inspect: impl FnMut(usize, &StepRecord),
) -> Result<Trajectory> {
    let mut integrator = Integrator::new(problem, mesh, time_mesh, order, layout)?;
    let m = time_mesh.n_intervals();
    let mut u = Vec::with_capacity(m + 1);
    let mut psi = Vec::with_capacity(m + 1);
    let mut sources = Vec::with_capacity(m);
    u.push(integrator.state().clone());
    while let Some(next) = integrator.advance() {
        let (record, source) = next?;
        if sources.is_empty() {
            psi.push(initial_psi(integrator.mats(), &u[0], &source.left_load())?);
        }
        inspect(integrator.index(), &record);
        u.push(record.u);
        psi.push(record.psi);
        sources.push(source);
    }
    Ok(Trajectory {
        mesh: mesh.clone(),
        time_mesh: time_mesh.clone(),
        tableau: integrator.tableau().clone(),
        mats: integrator.mats().clone(),
        u,
        psi,
        sources,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{manufactured_problem, stationary_problem};
    use approx::assert_abs_diff_eq;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    /// `α_ℓ = (-1)^{L-ℓ} ℓ^{L-1} / ((ℓ-1)! (L-ℓ)!)`
    fn closed_form_alpha(order: usize) -> Vec<f64> {
        (1..=order)
            .map(|l| {
                let sign = if (order - l).is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * (l as f64).powi(order as i32 - 1) / (factorial(l - 1) * factorial(order - l))
            })
            .collect()
    }

    #[test]
    fn tableau_values() {
        let t = ExtrapolationTableau::new(2).unwrap();
        assert_abs_diff_eq!(t.alpha()[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.alpha()[1], 2.0, epsilon = 1e-12);
        let t = ExtrapolationTableau::new(3).unwrap();
        for (a, b) in t.alpha().iter().zip([0.5, -4.0, 4.5]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        for order in 2..=6 {
            let t = ExtrapolationTableau::new(order).unwrap();
            assert!(t.max_residual() <= 1e-12);
            for (a, b) in t.alpha().iter().zip(closed_form_alpha(order)) {
                assert!(
                    (a - b).abs() <= 1e-12 * b.abs().max(1.0),
                    "L={order} {a} {b} {}",
                    (a - b).abs() / b.abs()
                );
            }
        }
        assert_eq!(ExtrapolationTableau::new(1), Err(Error::InvalidOrder(1)));
        assert_eq!(ExtrapolationTableau::new(0), Err(Error::InvalidOrder(0)));
    }

    #[test]
    fn time_mesh_validation() {
        assert!(TimeMesh::new(vec![0.0]).is_err());
        assert!(TimeMesh::new(vec![0.1, 1.0]).is_err());
        assert!(TimeMesh::new(vec![0.0, 0.5, 0.5]).is_err());
        let tm = TimeMesh::uniform(2.0, 4).unwrap();
        assert_eq!(tm.tau(3), 0.5);
        assert_eq!(tm.final_time(), 2.0);
    }

    #[test]
    fn scalar_surrogate_two_levels() {
        // u' = -u as a single interior node: mass = stiffness = 1
        let mats = OperatorMatrices {
            mass: fem1d::SymTridiagonal::new(vec![1.0], vec![]),
            stiffness: fem1d::SymTridiagonal::new(vec![1.0], vec![]),
        };
        let tableau = ExtrapolationTableau::new(2).unwrap();
        let tau = 0.1;
        let ops = LevelOperators::new(&mats, 2, tau).unwrap();
        let mesh = SpaceMesh::uniform(0.0, 1.0, 2).unwrap();
        let problem = ProblemSpec::builder(0.0, 1.0, 1.0).build();
        let weights = Arc::new(DeltaWeights::new(&[-1.0, 1.0]).unwrap());
        let source =
            SourceInterpolant::build(&problem, &mesh, IntervalMap::new(0.0, tau).unwrap(), weights, None).unwrap();
        let u_prev = GridFunction::from_vec(vec![1.0]);
        let rec = step(&mats, &tableau, &ops, &[u_prev.clone(), u_prev.clone()], &source).unwrap();
        let v1 = 1.0 / 1.1;
        let v2_half = 1.0 / 1.05;
        let v2 = 1.0 / (1.05 * 1.05);
        assert_abs_diff_eq!(rec.final_state(1).values()[0], v1, epsilon = 1e-15);
        assert_abs_diff_eq!(rec.final_state(2).values()[0], v2, epsilon = 1e-15);
        assert_abs_diff_eq!(rec.u.values()[0], -v1 + 2.0 * v2, epsilon = 1e-15);
        let psi = -(-(v1 - 1.0) / tau + 2.0 * (v2 - v2_half) / (tau / 2.0));
        assert_abs_diff_eq!(rec.psi.values()[0], psi, epsilon = 1e-13);
        // ψ = u for u' = -u, f = 0: a_h(u, χ) - <f, χ> = <u, χ>
        assert_abs_diff_eq!(rec.psi.values()[0], rec.u.values()[0], epsilon = 1e-13);
    }

    #[test]
    fn stationary_data_is_a_fixed_point() {
        let problem = stationary_problem();
        let mesh = SpaceMesh::uniform(0.0, 1.0, 16).unwrap();
        for order in 2..=5 {
            let tm = TimeMesh::uniform(1.0, 16).unwrap();
            let traj = run(&problem, &mesh, &tm, order, NodeLayout::Equispaced).unwrap();
            for (u, psi) in traj.u.iter().zip(&traj.psi) {
                let diff = GridFunction::combination([(1.0, u), (-1.0, &traj.u[0])]);
                assert!(diff.max_abs() <= 1e-12);
                assert!(psi.max_abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn single_interval_matches_step() {
        let problem = manufactured_problem();
        let mesh = SpaceMesh::uniform(0.0, 1.0, 8).unwrap();
        let tm = TimeMesh::uniform(0.25, 1).unwrap();
        let traj = run(&problem, &mesh, &tm, 3, NodeLayout::Equispaced).unwrap();
        let ops = LevelOperators::new(&traj.mats, 3, 0.25).unwrap();
        let rec = step(
            &traj.mats,
            &traj.tableau,
            &ops,
            &vec![traj.u[0].clone(); 3],
            &traj.sources[0],
        )
        .unwrap();
        assert_eq!(rec.u, traj.u[1]);
        assert_eq!(rec.psi, traj.psi[1]);
    }

    #[test]
    fn psi_matches_mass_solve_of_defect() {
        let problem = crate::problem::builtin_test_problem();
        let mesh = SpaceMesh::uniform(-1.0, 1.0, 16).unwrap();
        let tm = TimeMesh::uniform(1.0, 16).unwrap();
        for order in 2..=4 {
            let traj = run(&problem, &mesh, &tm, order, NodeLayout::Equispaced).unwrap();
            for j in 1..=16 {
                let mut rhs = traj.mats.stiffness.mul(traj.u[j].values());
                for (r, f) in rhs.iter_mut().zip(traj.sources[j - 1].right_load().values()) {
                    *r -= f;
                }
                let oracle = fem1d::mass_solve(&traj.mats, &rhs).unwrap();
                let diff = GridFunction::combination([(1.0, &oracle), (-1.0, &traj.psi[j])]);
                assert!(diff.max_abs() <= 1e-10 * (1.0 + traj.psi[j].max_abs()));
            }
        }
    }

    #[test]
    fn chain_lengths_and_combination() {
        let problem = manufactured_problem();
        let mesh = SpaceMesh::uniform(0.0, 1.0, 8).unwrap();
        let tm = TimeMesh::uniform(1.0, 4).unwrap();
        let mut lengths = Vec::new();
        run_with(&problem, &mesh, &tm, 4, NodeLayout::Equispaced, |_, rec| {
            lengths.push(rec.chains.iter().map(Vec::len).collect::<Vec<_>>());
            let combined = GridFunction::combination(
                [-1.0 / 6.0, 4.0, -13.5, 32.0 / 3.0]
                    .iter()
                    .enumerate()
                    .map(|(l, a)| (*a, rec.final_state(l + 1))),
            );
            let diff = GridFunction::combination([(1.0, &combined), (-1.0, &rec.u)]);
            assert!(diff.max_abs() < 1e-12);
        })
        .unwrap();
        assert_eq!(lengths, vec![vec![1, 2, 3, 4]; 4]);
    }

    #[test]
    fn levels_continue_their_own_chains() {
        let problem = manufactured_problem();
        let mesh = SpaceMesh::uniform(0.0, 1.0, 8).unwrap();
        let tm = TimeMesh::uniform(0.5, 2).unwrap();
        let mut integrator = Integrator::new(&problem, &mesh, &tm, 2, NodeLayout::Equispaced).unwrap();
        let (first, _) = integrator.advance().unwrap().unwrap();
        assert_eq!(integrator.levels()[0], *first.final_state(1));
        assert_eq!(integrator.levels()[1], *first.final_state(2));
        assert!(GridFunction::combination([(1.0, integrator.state()), (-1.0, first.final_state(1))]).max_abs() > 0.0);
        let (second, source) = integrator.advance().unwrap().unwrap();
        let ops = LevelOperators::new(integrator.mats(), 2, 0.25).unwrap();
        let load = source.load_at(0.5).unwrap();
        let v1 = ops.ops[0].apply(integrator.mats(), first.final_state(1), load.values());
        assert_eq!(*second.final_state(1), v1);
    }

    #[test]
    fn local_order_of_three_level_step() {
        // One step of an order-3 method has local error O(τ⁴) once τ is small
        // against the stiffness of the semi-discrete system.
        let problem = manufactured_problem();
        let mesh = SpaceMesh::uniform(0.0, 1.0, 4).unwrap();
        let local_error = |tau: f64| {
            let tm = TimeMesh::new(vec![0.0, tau]).unwrap();
            let traj = run(&problem, &mesh, &tm, 3, NodeLayout::Equispaced).unwrap();
            // compare against a fine-step run on the same spatial mesh
            let fine = TimeMesh::uniform(tau, 64).unwrap();
            let reference = Integrator::new(&problem, &mesh, &fine, 5, NodeLayout::Equispaced)
                .unwrap()
                .finish()
                .unwrap();
            GridFunction::combination([(1.0, &traj.u[1]), (-1.0, &reference)]).max_abs()
        };
        let e1 = local_error(0.004);
        let e2 = local_error(0.002);
        let rate = (e1 / e2).log2();
        assert!(rate > 3.6, "local rate {rate} ({e1:e}, {e2:e})");
    }
}
