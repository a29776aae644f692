//! Piecewise polynomial temporal reconstructions.
//!
//! On each interval `I_j` a field of degree `L - 1` in time is stored in the
//! Δ-representation
//!
//! ```text
//! φ = Δ⁰ + Δ¹ P₁∘ξ_j + Σ_{i=2}^{L-1} Δⁱ N_i∘ξ_j
//! ```
//!
//! where `N_i` are integrated Legendre polynomials. Since every `N_i` vanishes
//! at `±1`, `Δ⁰ ± Δ¹` are the endpoint values and the higher coefficients are
//! interior bubbles.

use crate::error::{Error, Result};
use crate::fem1d::{self, GridFunction, OperatorMatrices, SpaceMesh};
use crate::par;
use crate::polybasis::{integrated_legendre, legendre, IntervalMap};
use crate::problem::{ProblemSpec, SpaceTimeFn};
use crate::timestepper::{TimeMesh, Trajectory};
use nalgebra::DMatrix;
use std::sync::Arc;

/// Placement of the `L` interpolation nodes of `f̂` inside each interval.
/// Both layouts include the two endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodeLayout {
    #[default]
    Equispaced,
    /// Chebyshev–Lobatto points `-cos(πk / (L-1))`.
    ChebyshevInterior,
}

impl NodeLayout {
    /// The `order` nodes on `[-1, 1]`, increasing, starting at `-1` and ending at `1`.
    pub fn reference_nodes(self, order: usize) -> Vec<f64> {
        assert!(order >= 2, "need at least the two endpoints");
        let last = (order - 1) as f64;
        (0..order)
            .map(|k| {
                if k == 0 {
                    -1.0
                } else if k + 1 == order {
                    1.0
                } else {
                    match self {
                        NodeLayout::Equispaced => -1.0 + 2.0 * k as f64 / last,
                        NodeLayout::ChebyshevInterior => -(std::f64::consts::PI * k as f64 / last).cos(),
                    }
                }
            })
            .collect()
    }
}

/// The `i`-th function of the Δ-basis `{1, P₁, N₂, N₃, ...}`.
pub fn delta_basis(i: usize, xi: f64) -> f64 {
    match i {
        0 => 1.0,
        1 => xi,
        _ => integrated_legendre(i, xi).expect("degree checked"),
    }
}

/// Linear map from values at collocation nodes to Δ-coefficients:
/// `Δⁱ = Σ_k w[i][k] φ(ξ_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaWeights {
    nodes: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl DeltaWeights {
    /// Builds the weights for nodes `ξ_0 = -1 < ... < ξ_{L-1} = 1`.
    pub fn new(nodes: &[f64]) -> Result<Self> {
        let order = nodes.len();
        if order < 2 || nodes[0] != -1.0 || nodes[order - 1] != 1.0 {
            return Err(Error::SingularCollocation);
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::SingularCollocation);
        }
        let mut rows = vec![vec![0.0; order]; order];
        rows[0][0] = 0.5;
        rows[0][order - 1] = 0.5;
        rows[1][0] = -0.5;
        rows[1][order - 1] = 0.5;
        let bubbles = order - 2;
        if bubbles > 0 {
            // interior collocation: φ(ξ_k) - Δ⁰ - Δ¹ξ_k = Σ_{i≥2} Δⁱ N_i(ξ_k)
            let matrix = DMatrix::from_fn(bubbles, bubbles, |k, i| delta_basis(i + 2, nodes[k + 1]));
            let inverse = matrix.try_inverse().ok_or(Error::SingularCollocation)?;
            if inverse.iter().any(|v| !v.is_finite()) {
                return Err(Error::SingularCollocation);
            }
            for i in 0..bubbles {
                let row = &mut rows[i + 2];
                for k in 0..bubbles {
                    let c = inverse[(i, k)];
                    let xi = nodes[k + 1];
                    row[k + 1] += c;
                    // remove the affine part Δ⁰ + Δ¹ ξ_k
                    row[0] -= c * 0.5 * (1.0 - xi);
                    row[order - 1] -= c * 0.5 * (1.0 + xi);
                }
            }
        }
        Ok(Self {
            nodes: nodes.to_vec(),
            rows,
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// Δ-coefficients of scalar node values.
    pub fn apply_scalar(&self, values: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(values).map(|(w, v)| w * v).sum())
            .collect()
    }
}

/// Δ-representation of a `GridFunction`-valued polynomial on one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSlab {
    map: IntervalMap,
    entries: Vec<GridFunction>,
}

impl DeltaSlab {
    pub fn new(map: IntervalMap, entries: Vec<GridFunction>) -> Self {
        assert!(entries.len() >= 2, "a slab stores at least Δ⁰ and Δ¹");
        Self { map, entries }
    }

    /// Slab of the affine function through the two endpoint values, padded
    /// with zero bubbles up to `order` entries.
    pub fn from_endpoints(map: IntervalMap, left: &GridFunction, right: &GridFunction, order: usize) -> Self {
        let mut entries = Vec::with_capacity(order);
        entries.push(GridFunction::combination([(0.5, right), (0.5, left)]));
        entries.push(GridFunction::combination([(0.5, right), (-0.5, left)]));
        entries.resize(order.max(2), GridFunction::zeros(left.len()));
        Self { map, entries }
    }

    pub fn map(&self) -> &IntervalMap {
        &self.map
    }

    /// Number of stored coefficients (`L`).
    pub fn order(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[GridFunction] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &GridFunction {
        &self.entries[i]
    }

    pub fn entry_mut(&mut self, i: usize) -> &mut GridFunction {
        &mut self.entries[i]
    }

    pub fn eval_reference(&self, xi: f64) -> GridFunction {
        GridFunction::combination(self.entries.iter().enumerate().map(|(i, d)| (delta_basis(i, xi), d)))
    }

    pub fn eval(&self, t: f64) -> Result<GridFunction> {
        if !self.map.contains(t) {
            return Err(Error::OutOfInterval {
                t,
                left: self.map.left(),
                right: self.map.right(),
            });
        }
        Ok(self.eval_reference(self.map.to_reference(t).clamp(-1.0, 1.0)))
    }

    /// Legendre coefficients of the time derivative: entry `i - 1` multiplies
    /// `P_{i-1}∘ξ_j` and equals `(2/τ_j) Δⁱ`, from `N_i' = P_{i-1}`.
    pub fn derivative_coeffs(&self) -> Vec<GridFunction> {
        let jac = self.map.jacobian();
        self.entries[1..].iter().map(|d| d.scaled(jac)).collect()
    }

    pub fn eval_derivative(&self, t: f64) -> Result<GridFunction> {
        if !self.map.contains(t) {
            return Err(Error::OutOfInterval {
                t,
                left: self.map.left(),
                right: self.map.right(),
            });
        }
        let xi = self.map.to_reference(t).clamp(-1.0, 1.0);
        let coeffs = self.derivative_coeffs();
        Ok(GridFunction::combination(
            coeffs.iter().enumerate().map(|(k, c)| (legendre(k, xi), c)),
        ))
    }
}

/// Solves the collocation problem for node values of a field, returning its
/// Δ-representation on `map`.
pub fn to_delta_basis(map: IntervalMap, weights: &DeltaWeights, values: &[GridFunction]) -> Result<DeltaSlab> {
    if values.len() != weights.order() {
        return Err(Error::DimensionMismatch {
            expected: weights.order(),
            found: values.len(),
        });
    }
    let entries = (0..weights.order())
        .map(|i| GridFunction::combination(weights.row(i).iter().copied().zip(values.iter())))
        .collect();
    Ok(DeltaSlab::new(map, entries))
}

/// The interpolant `f̂` of the source on one interval: polynomial of degree
/// `L - 1` in time through `f(·, t_k)` at the `L` collocation times.
#[derive(Clone)]
pub struct SourceInterpolant {
    map: IntervalMap,
    times: Vec<f64>,
    weights: Arc<DeltaWeights>,
    source: SpaceTimeFn,
    /// Δ-representation of the load vectors `(<f̂(t), φ_k>)_k`.
    loads: DeltaSlab,
}

impl std::fmt::Debug for SourceInterpolant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SourceInterpolant")
            .field("map", &self.map)
            .field("times", &self.times)
            .finish_non_exhaustive()
    }
}

impl SourceInterpolant {
    /// Builds the interpolant on `map`. `left_load`, when given, is reused as
    /// the load vector at the left endpoint.
    pub fn build(
        problem: &ProblemSpec,
        mesh: &SpaceMesh,
        map: IntervalMap,
        weights: Arc<DeltaWeights>,
        left_load: Option<GridFunction>,
    ) -> Result<Self> {
        let times: Vec<f64> = weights
            .nodes()
            .iter()
            .enumerate()
            .map(|(k, &xi)| {
                // endpoints exactly, so neighbouring intervals share them bit for bit
                if k == 0 {
                    map.left()
                } else if k + 1 == weights.order() {
                    map.right()
                } else {
                    map.from_reference(xi)
                }
            })
            .collect();
        let mut node_loads = Vec::with_capacity(times.len());
        for (k, &t) in times.iter().enumerate() {
            match (&left_load, k) {
                (Some(load), 0) => node_loads.push(load.clone()),
                _ => {
                    let f = &problem.source;
                    node_loads.push(GridFunction::from_vec(fem1d::load_vector(mesh, |x| f(x, t))));
                }
            }
        }
        let loads = to_delta_basis(map, &weights, &node_loads)?;
        Ok(Self {
            map,
            times,
            weights,
            source: problem.source.clone(),
            loads,
        })
    }

    pub fn map(&self) -> &IntervalMap {
        &self.map
    }

    pub fn order(&self) -> usize {
        self.times.len()
    }

    /// Interpolation times, endpoints included.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn loads(&self) -> &DeltaSlab {
        &self.loads
    }

    /// Load vector of `f̂(t)`.
    pub fn load_at(&self, t: f64) -> Result<GridFunction> {
        self.loads.eval(t)
    }

    /// Load vector of the right endpoint, `f(t_j)`.
    pub fn right_load(&self) -> GridFunction {
        GridFunction::combination([(1.0, self.loads.entry(0)), (1.0, self.loads.entry(1))])
    }

    /// Load vector of the left endpoint, `f(t_{j-1})`.
    pub fn left_load(&self) -> GridFunction {
        GridFunction::combination([(1.0, self.loads.entry(0)), (-1.0, self.loads.entry(1))])
    }

    /// Source values `f(x, t_k)` at the collocation times.
    pub fn node_values(&self, x: f64) -> Vec<f64> {
        self.times.iter().map(|&t| (self.source)(x, t)).collect()
    }

    /// Pointwise `Δⁱf̂(x)` for every `i`.
    pub fn deltas_at(&self, x: f64) -> Vec<f64> {
        self.weights.apply_scalar(&self.node_values(x))
    }

    /// Pointwise `Δⁱf̂(x)` for one `i`.
    pub fn delta_at(&self, i: usize, x: f64) -> f64 {
        self.weights
            .row(i)
            .iter()
            .zip(&self.times)
            .map(|(w, &t)| w * (self.source)(x, t))
            .sum()
    }

    /// Pointwise `f̂(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let xi = self.map.to_reference(t).clamp(-1.0, 1.0);
        self.deltas_at(x)
            .iter()
            .enumerate()
            .map(|(i, d)| d * delta_basis(i, xi))
            .sum()
    }

    pub fn source(&self) -> &SpaceTimeFn {
        &self.source
    }
}

/// Builds `f̂` on every interval of `time_mesh` with `order` collocation nodes.
pub fn interpolate_f(
    problem: &ProblemSpec,
    mesh: &SpaceMesh,
    time_mesh: &TimeMesh,
    order: usize,
    layout: NodeLayout,
) -> Result<Vec<SourceInterpolant>> {
    let weights = Arc::new(DeltaWeights::new(&layout.reference_nodes(order))?);
    par::try_map_range(time_mesh.n_intervals(), |k| {
        SourceInterpolant::build(problem, mesh, time_mesh.interval(k + 1), weights.clone(), None)
    })
}

/// Reconstruction of `u_h` and `ψ` on one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalReconstruction {
    pub u: DeltaSlab,
    pub psi: DeltaSlab,
}

impl IntervalReconstruction {
    pub fn tau(&self) -> f64 {
        self.u.map().length()
    }
}

/// Reconstructions on all intervals.
#[derive(Debug, Clone)]
pub struct ReconstructionSet {
    pub intervals: Vec<IntervalReconstruction>,
}

impl ReconstructionSet {
    pub fn interval(&self, j: usize) -> &IntervalReconstruction {
        &self.intervals[j - 1]
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Builds the Δ-representations of `u_h` and `ψ` on interval `j` (1-based)
/// from the nodal trajectory.
///
/// `Δ⁰`, `Δ¹` come from the endpoint values. The bubbles are defined by the
/// interleaved recursion
///
/// ```text
/// Δ²ψ = 3 (Δ⁰ψ + (2/τ) Δ¹u)
/// a_h(Δⁱu, χ) = <Δⁱψ + Δⁱf̂, χ>_h                      i = 2..L-1
/// Δ^{i+1}ψ = (2i+1) (Δ^{i-1}ψ / (2i-3) + (2/τ) Δⁱu)     i = 2..L-2
/// ```
///
/// which makes `ψ + ∂_t u_h` a combination of `P_{L-2}` and `P_{L-1}` only.
pub fn reconstruct_interval(trajectory: &Trajectory, j: usize) -> Result<IntervalReconstruction> {
    let order = trajectory.tableau.order();
    let map = trajectory.time_mesh.interval(j);
    let tau = map.length();
    let mats: &OperatorMatrices = &trajectory.mats;
    let source = &trajectory.sources[j - 1];

    let mut u = DeltaSlab::from_endpoints(map, &trajectory.u[j - 1], &trajectory.u[j], order);
    let mut psi = DeltaSlab::from_endpoints(map, &trajectory.psi[j - 1], &trajectory.psi[j], order);
    if order >= 3 {
        *psi.entry_mut(2) = GridFunction::combination([(3.0, psi.entry(0)), (6.0 / tau, u.entry(1))]);
    }
    for i in 2..order {
        let mut rhs = mats.mass.mul(psi.entry(i).values());
        for (r, f) in rhs.iter_mut().zip(source.loads().entry(i).values()) {
            *r += f;
        }
        *u.entry_mut(i) = fem1d::elliptic_solve(mats, &rhs)?;
        if i + 1 < order {
            let fi = i as f64;
            let next = GridFunction::combination([
                ((2.0 * fi + 1.0) / (2.0 * fi - 3.0), psi.entry(i - 1)),
                ((2.0 * fi + 1.0) * 2.0 / tau, u.entry(i)),
            ]);
            *psi.entry_mut(i + 1) = next;
        }
    }
    Ok(IntervalReconstruction { u, psi })
}

/// Builds the reconstruction on every interval.
pub fn build_reconstruction(trajectory: &Trajectory) -> Result<ReconstructionSet> {
    let intervals = par::try_map_range(trajectory.time_mesh.n_intervals(), |k| {
        reconstruct_interval(trajectory, k + 1)
    })?;
    Ok(ReconstructionSet { intervals })
}

/// Legendre coefficients `(A_j, B_j)` with `ψ + ∂_t u_h = A_j P_{L-2}∘ξ_j + B_j P_{L-1}∘ξ_j`
/// on the interval.
pub fn psi_plus_dudt_coeffs(rec: &IntervalReconstruction) -> (GridFunction, GridFunction) {
    let order = rec.u.order();
    let tau = rec.tau();
    if order == 2 {
        let a = GridFunction::combination([(1.0, rec.psi.entry(0)), (2.0 / tau, rec.u.entry(1))]);
        let b = rec.psi.entry(1).clone();
        return (a, b);
    }
    let l = order as f64;
    let a = GridFunction::combination([
        (1.0 / (2.0 * l - 5.0), rec.psi.entry(order - 2)),
        (2.0 / tau, rec.u.entry(order - 1)),
    ]);
    let b = rec.psi.entry(order - 1).scaled(1.0 / (2.0 * l - 3.0));
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn scalar(v: f64) -> GridFunction {
        GridFunction::from_vec(vec![v])
    }

    #[test]
    fn node_layouts() {
        assert_eq!(NodeLayout::Equispaced.reference_nodes(2), vec![-1.0, 1.0]);
        assert_eq!(NodeLayout::Equispaced.reference_nodes(3), vec![-1.0, 0.0, 1.0]);
        let cheb = NodeLayout::ChebyshevInterior.reference_nodes(4);
        assert_abs_diff_eq!(cheb[1], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(cheb[2], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn constant_and_affine_fields() {
        let map = IntervalMap::new(0.0, 0.5).unwrap();
        for order in 2..=6 {
            let w = DeltaWeights::new(&NodeLayout::Equispaced.reference_nodes(order)).unwrap();
            let slab = to_delta_basis(map, &w, &vec![scalar(3.0); order]).unwrap();
            assert_abs_diff_eq!(slab.entry(0).values()[0], 3.0, epsilon = 1e-14);
            for i in 1..order {
                assert!(slab.entry(i).values()[0].abs() < 1e-13);
            }
            let values: Vec<_> = w.nodes().iter().map(|&xi| scalar(1.0 + 2.0 * xi)).collect();
            let slab = to_delta_basis(map, &w, &values).unwrap();
            assert_eq!(slab.entry(0).values()[0], 1.0);
            assert_eq!(slab.entry(1).values()[0], 2.0);
            for i in 2..order {
                assert!(slab.entry(i).values()[0].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn bubble_recovered_from_samples() {
        let map = IntervalMap::new(-1.0, 1.0).unwrap();
        let w = DeltaWeights::new(&[-1.0, 0.0, 1.0]).unwrap();
        let slab = to_delta_basis(map, &w, &[scalar(0.0), scalar(-0.5), scalar(0.0)]).unwrap();
        assert_abs_diff_eq!(slab.entry(0).values()[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(slab.entry(1).values()[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(slab.entry(2).values()[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn singular_collocation() {
        assert_eq!(
            DeltaWeights::new(&[-1.0, 0.2, 0.2, 1.0]),
            Err(Error::SingularCollocation)
        );
        assert_eq!(DeltaWeights::new(&[-0.5, 1.0]), Err(Error::SingularCollocation));
    }

    #[test]
    fn endpoint_and_node_round_trip() {
        let map = IntervalMap::new(1.0, 1.3).unwrap();
        for layout in [NodeLayout::Equispaced, NodeLayout::ChebyshevInterior] {
            for order in 2..=6 {
                let w = DeltaWeights::new(&layout.reference_nodes(order)).unwrap();
                let values: Vec<_> = w
                    .nodes()
                    .iter()
                    .map(|&xi| GridFunction::from_vec(vec![(3.0 * xi).sin(), xi.exp()]))
                    .collect();
                let slab = to_delta_basis(map, &w, &values).unwrap();
                for (xi, v) in w.nodes().iter().zip(&values) {
                    let got = slab.eval(map.from_reference(*xi)).unwrap();
                    for (a, b) in got.values().iter().zip(v.values()) {
                        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
                    }
                }
                assert_eq!(
                    slab.eval(1.3).unwrap(),
                    GridFunction::combination([(1.0, slab.entry(0)), (1.0, slab.entry(1))])
                );
                assert!(slab.eval(1.5).is_err());
            }
        }
    }

    #[test]
    fn derivative_by_finite_differences() {
        let map = IntervalMap::new(0.2, 0.45).unwrap();
        let slab = DeltaSlab::new(
            map,
            vec![scalar(0.3), scalar(-1.2), scalar(0.7), scalar(0.4), scalar(-0.25)],
        );
        let eps = 1e-6 * map.length();
        for k in 1..10 {
            let t = map.left() + map.length() * k as f64 / 10.0;
            let fd = (slab.eval(t + eps).unwrap().values()[0] - slab.eval(t - eps).unwrap().values()[0]) / (2.0 * eps);
            let exact = slab.eval_derivative(t).unwrap().values()[0];
            assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1.0), "{fd} vs {exact}");
        }
        let constant = DeltaSlab::new(map, vec![scalar(2.0), scalar(0.0)]);
        assert_eq!(constant.eval_derivative(0.3).unwrap().values()[0], 0.0);
        let affine = DeltaSlab::new(map, vec![scalar(2.0), scalar(0.5)]);
        assert_abs_diff_eq!(
            affine.eval_derivative(0.3).unwrap().values()[0],
            1.0 / 0.25,
            epsilon = 1e-12
        );
    }

    #[test]
    fn l2_psi_plus_dudt_scalar_surrogate() {
        let tau = 0.1;
        let map = IntervalMap::new(0.0, tau).unwrap();
        let rec = IntervalReconstruction {
            u: DeltaSlab::new(map, vec![scalar(0.0), scalar(tau / 2.0)]),
            psi: DeltaSlab::new(map, vec![scalar(1.0), scalar(3.0)]),
        };
        let (a, b) = psi_plus_dudt_coeffs(&rec);
        assert_abs_diff_eq!(a.values()[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b.values()[0], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn source_interpolant_reproduces_polynomials() {
        let mesh = SpaceMesh::uniform(0.0, 1.0, 4).unwrap();
        for order in 2..=5 {
            let deg = order as i32 - 1;
            let problem = ProblemSpec::builder(0.0, 1.0, 1.0)
                .source(move |x, t| (1.0 + x) * (0.5 + t).powi(deg) - t)
                .build();
            let tm = TimeMesh::uniform(1.0, 3).unwrap();
            let slabs = interpolate_f(&problem, &mesh, &tm, order, NodeLayout::Equispaced).unwrap();
            for slab in &slabs {
                for k in 0..50 {
                    let t = slab.map().left() + slab.map().length() * k as f64 / 49.0;
                    for x in [0.0, 0.3, 0.9] {
                        let exact = (problem.source)(x, t);
                        assert!((slab.eval(x, t) - exact).abs() <= 1e-12 * exact.abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn linear_interpolation_of_t_squared() {
        let mesh = SpaceMesh::uniform(0.0, 1.0, 2).unwrap();
        let problem = ProblemSpec::builder(0.0, 1.0, 1.0).source(|_, t| t * t).build();
        let tm = TimeMesh::uniform(1.0, 1).unwrap();
        let slabs = interpolate_f(&problem, &mesh, &tm, 2, NodeLayout::Equispaced).unwrap();
        assert_abs_diff_eq!(slabs[0].eval(0.4, 0.5), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(slabs[0].eval(0.4, 0.5) - 0.25, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn source_continuity_and_loads() {
        let mesh = SpaceMesh::uniform(-1.0, 1.0, 8).unwrap();
        let problem = crate::problem::builtin_test_problem();
        let tm = TimeMesh::uniform(1.0, 4).unwrap();
        let slabs = interpolate_f(&problem, &mesh, &tm, 3, NodeLayout::Equispaced).unwrap();
        for j in 1..slabs.len() {
            let t = tm.t(j);
            for x in [-0.7, 0.1, 0.55] {
                assert_abs_diff_eq!(slabs[j - 1].eval(x, t), slabs[j].eval(x, t), epsilon = 1e-14);
                assert_abs_diff_eq!(slabs[j].eval(x, t), (problem.source)(x, t), epsilon = 1e-14);
            }
            let l = slabs[j - 1].right_load();
            let r = slabs[j].left_load();
            for (a, b) in l.values().iter().zip(r.values()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-15);
            }
        }
        // load vector of f̂(t) equals the quadrature of the pointwise interpolant
        let slab = &slabs[1];
        let t = slab.map().from_reference(0.3);
        let direct = fem1d::load_vector(&mesh, |x| slab.eval(x, t));
        let via = slab.load_at(t).unwrap();
        for (a, b) in direct.iter().zip(via.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
    }
}
