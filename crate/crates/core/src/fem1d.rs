//! P1 finite elements on an interval with homogeneous Dirichlet conditions.

use crate::error::{Error, Result};
use crate::par;
use crate::polybasis::GaussRule;
use crate::problem::ProblemSpec;
use std::sync::OnceLock;

/// Gauss nodes per element used for every coefficient integral.
pub const ELEMENT_QUADRATURE_POINTS: usize = 5;

/// Sample points per element used for sampled maximum norms.
pub const SUP_SAMPLES: usize = 8;

const PAR_CHUNK: usize = 2048;

pub(crate) fn element_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::new(ELEMENT_QUADRATURE_POINTS))
}

/// Nodes `x_0 < x_1 < ... < x_N` of a spatial mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceMesh {
    nodes: Vec<f64>,
}

impl SpaceMesh {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidMesh(format!(
                "need at least 2 elements, got {}",
                nodes.len().saturating_sub(1)
            )));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMesh("non-finite node".into()));
        }
        if let Some(w) = nodes.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidMesh(format!(
                "nodes not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Self { nodes })
    }

    pub fn uniform(left: f64, right: f64, elements: usize) -> Result<Self> {
        if !(left < right) {
            return Err(Error::InvalidMesh(format!("empty domain ({left}, {right})")));
        }
        let h = (right - left) / elements as f64;
        let mut nodes: Vec<f64> = (0..=elements).map(|i| left + h * i as f64).collect();
        if let Some(last) = nodes.last_mut() {
            *last = right;
        }
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn n_interior(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn left(&self) -> f64 {
        self.nodes[0]
    }

    pub fn right(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }

    pub fn h(&self, e: usize) -> f64 {
        self.nodes[e + 1] - self.nodes[e]
    }

    pub fn h_max(&self) -> f64 {
        (0..self.n_elements()).map(|e| self.h(e)).fold(0.0, f64::max)
    }

    /// Index of the element containing `x` (points outside are clamped).
    pub fn locate(&self, x: f64) -> usize {
        let n = self.n_elements();
        match self.nodes.partition_point(|&node| node <= x) {
            0 => 0,
            k => (k - 1).min(n - 1),
        }
    }

    /// `samples` equispaced points of element `e`, both endpoints included.
    pub fn element_samples(&self, e: usize, samples: usize) -> impl Iterator<Item = f64> {
        debug_assert!(samples >= 2);
        let (a, b) = self.element(e);
        let step = (b - a) / (samples - 1) as f64;
        (0..samples).map(move |r| if r + 1 == samples { b } else { a + step * r as f64 })
    }
}

/// Interior nodal coefficients of a continuous piecewise linear function that
/// vanishes at both boundary nodes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridFunction(Vec<f64>);

impl GridFunction {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn from_vec(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Maximum of `|v|` over the nodes, which is the exact maximum norm of a
    /// P1 function.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self += a * other`
    pub fn add_scaled(&mut self, a: f64, other: &GridFunction) {
        debug_assert_eq!(self.len(), other.len());
        for (s, o) in self.0.iter_mut().zip(&other.0) {
            *s += a * o;
        }
    }

    pub fn scaled(&self, a: f64) -> GridFunction {
        GridFunction(self.0.iter().map(|v| a * v).collect())
    }

    /// `Σ c_k v_k` over `terms`; all functions must have the same length.
    pub fn combination<'a>(terms: impl IntoIterator<Item = (f64, &'a GridFunction)>) -> GridFunction {
        let mut iter = terms.into_iter();
        let (c0, v0) = iter.next().expect("empty linear combination");
        let mut out = v0.scaled(c0);
        for (c, v) in iter {
            out.add_scaled(c, v);
        }
        out
    }

    /// Boundary-inclusive nodal value `k` (0 at both boundary nodes).
    pub fn node_value(&self, k: usize) -> f64 {
        if k == 0 || k > self.0.len() {
            0.0
        } else {
            self.0[k - 1]
        }
    }

    /// Evaluates the P1 function at `x`.
    pub fn eval(&self, mesh: &SpaceMesh, x: f64) -> f64 {
        let e = mesh.locate(x);
        self.eval_on_element(mesh, e, x)
    }

    pub fn eval_on_element(&self, mesh: &SpaceMesh, e: usize, x: f64) -> f64 {
        let (a, b) = mesh.element(e);
        let s = (x - a) / (b - a);
        (1.0 - s) * self.node_value(e) + s * self.node_value(e + 1)
    }

    /// Constant derivative on element `e`.
    pub fn slope(&self, mesh: &SpaceMesh, e: usize) -> f64 {
        (self.node_value(e + 1) - self.node_value(e)) / mesh.h(e)
    }
}

/// Nodal interpolant of `f` in the P1 space (boundary values are dropped).
pub fn interpolate(mesh: &SpaceMesh, f: impl Fn(f64) -> f64) -> GridFunction {
    GridFunction(mesh.nodes()[1..mesh.nodes().len() - 1].iter().map(|&x| f(x)).collect())
}

/// Symmetric tridiagonal matrix: `diag` of length n, `off` of length n - 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Row `k` as `(sub, diag, super)`, with zeros outside the matrix.
    pub fn row(&self, k: usize) -> (f64, f64, f64) {
        let sub = if k > 0 { self.off[k - 1] } else { 0.0 };
        let sup = if k + 1 < self.dim() { self.off[k] } else { 0.0 };
        (sub, self.diag[k], sup)
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        debug_assert_eq!(x.len(), n);
        (0..n)
            .map(|k| {
                let mut y = self.diag[k] * x[k];
                if k > 0 {
                    y += self.off[k - 1] * x[k - 1];
                }
                if k + 1 < n {
                    y += self.off[k] * x[k + 1];
                }
                y
            })
            .collect()
    }

    /// `a * self + b * other`
    pub fn combine(&self, a: f64, other: &SymTridiagonal, b: f64) -> SymTridiagonal {
        let lin = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| a * p + b * q).collect();
        SymTridiagonal {
            diag: lin(&self.diag, &other.diag),
            off: lin(&self.off, &other.off),
        }
    }

    pub fn factor(&self) -> Result<TridiagonalFactor> {
        TridiagonalFactor::new(self)
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        Ok(self.factor()?.solve(rhs))
    }
}

/// Forward-elimination coefficients of the Thomas algorithm, reusable for
/// several right-hand sides.
#[derive(Debug, Clone)]
pub struct TridiagonalFactor {
    off: Vec<f64>,
    inv_pivot: Vec<f64>,
    upper: Vec<f64>,
}

impl TridiagonalFactor {
    fn new(m: &SymTridiagonal) -> Result<Self> {
        let n = m.dim();
        let scale = m.diag.iter().fold(0.0f64, |s, d| s.max(d.abs())).max(f64::MIN_POSITIVE);
        let mut inv_pivot = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n.saturating_sub(1));
        let mut prev_upper = 0.0;
        for k in 0..n {
            let sub = if k > 0 { m.off[k - 1] } else { 0.0 };
            let pivot = m.diag[k] - sub * prev_upper;
            if !(pivot.abs() > 1e-14 * scale) || !pivot.is_finite() {
                return Err(Error::SingularMatrix { row: k, pivot });
            }
            inv_pivot.push(1.0 / pivot);
            if k + 1 < n {
                prev_upper = m.off[k] / pivot;
                upper.push(prev_upper);
            }
        }
        Ok(Self {
            off: m.off.clone(),
            inv_pivot,
            upper,
        })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.inv_pivot.len();
        assert_eq!(rhs.len(), n, "right-hand side length mismatch");
        let mut y = Vec::with_capacity(n);
        for k in 0..n {
            let carry = if k > 0 { self.off[k - 1] * y[k - 1] } else { 0.0 };
            y.push((rhs[k] - carry) * self.inv_pivot[k]);
        }
        for k in (0..n.saturating_sub(1)).rev() {
            y[k] -= self.upper[k] * y[k + 1];
        }
        y
    }
}

/// Mass matrix and stiffness-plus-reaction matrix on the interior nodes.
#[derive(Debug, Clone)]
pub struct OperatorMatrices {
    pub mass: SymTridiagonal,
    pub stiffness: SymTridiagonal,
}

/// Sampled extremes of the coefficients over a mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientBounds {
    pub diffusion_min: f64,
    pub reaction_min: f64,
    pub reaction_max: f64,
}

/// Samples `d` and `r` at the quadrature points and sup-norm sample points of
/// every element.
pub fn coefficient_bounds(problem: &ProblemSpec, mesh: &SpaceMesh) -> CoefficientBounds {
    let rule = element_rule();
    let per_chunk = par::map_chunks(mesh.n_elements(), PAR_CHUNK, |range| {
        let mut b = CoefficientBounds {
            diffusion_min: f64::INFINITY,
            reaction_min: f64::INFINITY,
            reaction_max: f64::NEG_INFINITY,
        };
        for e in range {
            let (a, c) = mesh.element(e);
            let points = rule
                .mapped(a, c)
                .map(|(x, _)| x)
                .chain(mesh.element_samples(e, SUP_SAMPLES));
            for x in points {
                let d = (problem.diffusion)(x);
                let r = (problem.reaction)(x);
                b.diffusion_min = b.diffusion_min.min(d);
                b.reaction_min = b.reaction_min.min(r);
                b.reaction_max = b.reaction_max.max(r);
            }
        }
        b
    });
    per_chunk.into_iter().fold(
        CoefficientBounds {
            diffusion_min: f64::INFINITY,
            reaction_min: f64::INFINITY,
            reaction_max: f64::NEG_INFINITY,
        },
        |acc, b| CoefficientBounds {
            diffusion_min: acc.diffusion_min.min(b.diffusion_min),
            reaction_min: acc.reaction_min.min(b.reaction_min),
            reaction_max: acc.reaction_max.max(b.reaction_max),
        },
    )
}

/// Assembles the P1 mass and stiffness-plus-reaction matrices with a
/// 5-point Gauss rule on every element.
pub fn assemble(problem: &ProblemSpec, mesh: &SpaceMesh) -> Result<OperatorMatrices> {
    let bounds = coefficient_bounds(problem, mesh);
    if !(bounds.diffusion_min > 0.0) {
        return Err(Error::NonPositiveDiffusion(bounds.diffusion_min));
    }
    if bounds.reaction_min < 0.0 {
        return Err(Error::NegativeReaction(bounds.reaction_min));
    }
    let rule = element_rule();
    // per element: [m_ll, m_lr, m_rr, k_ll, k_lr, k_rr]
    let local: Vec<[f64; 6]> = par::map_chunks(mesh.n_elements(), PAR_CHUNK, |range| {
        range
            .map(|e| {
                let (a, b) = mesh.element(e);
                let h = b - a;
                let mut out = [0.0; 6];
                for (x, w) in rule.mapped(a, b) {
                    let right = (x - a) / h;
                    let left = 1.0 - right;
                    let d = (problem.diffusion)(x) / (h * h);
                    let r = (problem.reaction)(x);
                    out[0] += w * left * left;
                    out[1] += w * left * right;
                    out[2] += w * right * right;
                    out[3] += w * (d + r * left * left);
                    out[4] += w * (-d + r * left * right);
                    out[5] += w * (d + r * right * right);
                }
                out
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();

    let n = mesh.n_interior();
    let mut mass_diag = vec![0.0; n];
    let mut stiff_diag = vec![0.0; n];
    let mut mass_off = vec![0.0; n - 1];
    let mut stiff_off = vec![0.0; n - 1];
    for (e, m) in local.iter().enumerate() {
        // element e joins global nodes e and e + 1; interior index = node - 1
        if e >= 1 {
            mass_diag[e - 1] += m[0];
            stiff_diag[e - 1] += m[3];
        }
        if e < n {
            mass_diag[e] += m[2];
            stiff_diag[e] += m[5];
        }
        if e >= 1 && e < n {
            mass_off[e - 1] = m[1];
            stiff_off[e - 1] = m[4];
        }
    }
    Ok(OperatorMatrices {
        mass: SymTridiagonal::new(mass_diag, mass_off),
        stiffness: SymTridiagonal::new(stiff_diag, stiff_off),
    })
}

/// Load vector `(∫ g φ_k)_k` with the 5-point element rule.
pub fn load_vector<G>(mesh: &SpaceMesh, g: G) -> Vec<f64>
where
    G: Fn(f64) -> f64 + Sync + Send,
{
    let rule = element_rule();
    let local: Vec<(f64, f64)> = par::map_chunks(mesh.n_elements(), PAR_CHUNK, |range| {
        range
            .map(|e| {
                let (a, b) = mesh.element(e);
                let h = b - a;
                rule.mapped(a, b).fold((0.0, 0.0), |(l, r), (x, w)| {
                    let s = (x - a) / h;
                    let gw = w * g(x);
                    (l + gw * (1.0 - s), r + gw * s)
                })
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let n = mesh.n_interior();
    let mut load = vec![0.0; n];
    for (e, (l, r)) in local.into_iter().enumerate() {
        if e >= 1 {
            load[e - 1] += l;
        }
        if e < n {
            load[e] += r;
        }
    }
    load
}

/// Solves `a_h(y, χ) = <g, χ>_h` for all test functions, given the load vector.
pub fn elliptic_solve(mats: &OperatorMatrices, load: &[f64]) -> Result<GridFunction> {
    Ok(GridFunction(mats.stiffness.solve(load)?))
}

/// Solves the mass system `<v, χ>_h = rhs(χ)`.
pub fn mass_solve(mats: &OperatorMatrices, rhs: &[f64]) -> Result<GridFunction> {
    Ok(GridFunction(mats.mass.solve(rhs)?))
}

/// A factored backward Euler operator `mass/δ + stiffness` for a fixed step.
#[derive(Debug, Clone)]
pub struct EulerOperator {
    step: f64,
    factor: TridiagonalFactor,
}

impl EulerOperator {
    pub fn new(mats: &OperatorMatrices, step: f64) -> Result<Self> {
        assert!(step > 0.0, "Euler step must be positive, got {step}");
        let matrix = mats.mass.combine(1.0 / step, &mats.stiffness, 1.0);
        Ok(Self {
            step,
            factor: matrix.factor()?,
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// One backward Euler substep from `prev` with the load vector `fvec`.
    pub fn apply(&self, mats: &OperatorMatrices, prev: &GridFunction, fvec: &[f64]) -> GridFunction {
        let mut rhs = mats.mass.mul(prev.values());
        let inv = 1.0 / self.step;
        for (r, f) in rhs.iter_mut().zip(fvec) {
            *r = *r * inv + f;
        }
        GridFunction(self.factor.solve(&rhs))
    }
}

/// Solves `(mass/δ + stiffness) v = mass v_prev / δ + fvec`.
pub fn euler_substep(mats: &OperatorMatrices, v_prev: &GridFunction, delta: f64, fvec: &[f64]) -> Result<GridFunction> {
    Ok(EulerOperator::new(mats, delta)?.apply(mats, v_prev, fvec))
}

/// Maximum of `|v|` over `samples` equispaced points per element, both
/// endpoints included.
pub fn sup_norm_sampled<F>(mesh: &SpaceMesh, v: F, samples: usize) -> f64
where
    F: Fn(usize, f64) -> f64 + Sync + Send,
{
    assert!(samples >= 2, "need at least two samples per element");
    par::map_chunks(mesh.n_elements(), PAR_CHUNK, |range| {
        range.fold(0.0f64, |m, e| {
            mesh.element_samples(e, samples).fold(m, |m, x| m.max(v(e, x).abs()))
        })
    })
    .into_iter()
    .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ProblemSpec;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn unit_problem(d: f64, r: f64) -> ProblemSpec {
        ProblemSpec::builder(0.0, 1.0, 1.0)
            .diffusion(move |_| d)
            .reaction(move |_| r)
            .build()
    }

    #[test]
    fn uniform_stiffness_and_mass_rows() {
        let n = 10;
        let h = 0.1;
        let mesh = SpaceMesh::uniform(0.0, 1.0, n).unwrap();
        let mats = assemble(&unit_problem(1.0, 0.0), &mesh).unwrap();
        for k in 1..mesh.n_interior() - 1 {
            let (s, d, u) = mats.stiffness.row(k);
            assert_abs_diff_eq!(s, -1.0 / h, epsilon = 1e-10);
            assert_abs_diff_eq!(d, 2.0 / h, epsilon = 1e-10);
            assert_abs_diff_eq!(u, -1.0 / h, epsilon = 1e-10);
            let (s, d, u) = mats.mass.row(k);
            assert_abs_diff_eq!(s, h / 6.0, epsilon = 1e-14);
            assert_abs_diff_eq!(d, 2.0 * h / 3.0, epsilon = 1e-14);
            assert_abs_diff_eq!(u, h / 6.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_diffusion_is_rejected() {
        let mesh = SpaceMesh::uniform(0.0, 1.0, 4).unwrap();
        assert!(matches!(
            assemble(&unit_problem(0.0, 1.0), &mesh),
            Err(Error::NonPositiveDiffusion(_))
        ));
        assert!(matches!(
            assemble(&unit_problem(1.0, -1.0), &mesh),
            Err(Error::NegativeReaction(_))
        ));
    }

    #[test]
    fn invalid_meshes() {
        assert!(SpaceMesh::new(vec![0.0, 1.0]).is_err());
        assert!(SpaceMesh::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(SpaceMesh::uniform(1.0, 0.0, 4).is_err());
    }

    #[test]
    fn poisson_is_nodally_exact() {
        let mesh = SpaceMesh::uniform(0.0, 1.0, 16).unwrap();
        let mats = assemble(&unit_problem(1.0, 0.0), &mesh).unwrap();
        let load = load_vector(&mesh, |_| 1.0);
        let y = elliptic_solve(&mats, &load).unwrap();
        for (k, &x) in mesh.nodes()[1..16].iter().enumerate() {
            assert_abs_diff_eq!(y.values()[k], x * (1.0 - x) / 2.0, epsilon = 1e-13);
        }
        let residual: Vec<f64> = mats.stiffness.mul(y.values());
        let bmax = load.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (r, b) in residual.iter().zip(&load) {
            assert!((r - b).abs() <= 1e-12 * bmax);
        }
        let zero = elliptic_solve(&mats, &[0.0; 15]).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn galerkin_reproduces_p1_functions() {
        // For w in V_h the Galerkin load a(w, φ_k) is exactly stiffness * w.
        let mesh = SpaceMesh::new(vec![0.0, 0.1, 0.25, 0.3, 0.55, 0.7, 0.9, 1.0]).unwrap();
        let problem = ProblemSpec::builder(0.0, 1.0, 1.0)
            .diffusion(|x| 1.0 + x)
            .reaction(|x| 5.0 * x + 6.0)
            .build();
        let mats = assemble(&problem, &mesh).unwrap();
        let w = GridFunction::from_vec(vec![0.3, -0.2, 0.8, 1.0, 0.1, -0.5]);
        let load = mats.stiffness.mul(w.values());
        let y = elliptic_solve(&mats, &load).unwrap();
        for (a, b) in y.values().iter().zip(w.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn euler_fixed_point_and_decay() {
        let mesh = SpaceMesh::uniform(0.0, 1.0, 20).unwrap();
        let mats = assemble(&unit_problem(1.0, 2.0), &mesh).unwrap();
        let fvec = load_vector(&mesh, |x| 1.0 + x);
        let steady = elliptic_solve(&mats, &fvec).unwrap();
        let next = euler_substep(&mats, &steady, 0.01, &fvec).unwrap();
        for (a, b) in next.values().iter().zip(steady.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }

        let mats = assemble(&unit_problem(1.0, 50.0), &mesh).unwrap();
        let mut v = interpolate(&mesh, |x| (std::f64::consts::PI * x).sin());
        let zero = vec![0.0; mesh.n_interior()];
        let mut last = v.max_abs();
        for _ in 0..30 {
            v = euler_substep(&mats, &v, 0.02, &zero).unwrap();
            let now = v.max_abs();
            assert!(now <= last);
            last = now;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn two_half_steps_differ_from_one_step_by_second_order() {
        // Local defect of backward Euler is O(δ²): halving δ quarters the gap.
        let mesh = SpaceMesh::uniform(0.0, 1.0, 32).unwrap();
        let mats = assemble(&unit_problem(1.0, 1.0), &mesh).unwrap();
        let v0 = interpolate(&mesh, |x| (std::f64::consts::PI * x).sin());
        let zero = vec![0.0; mesh.n_interior()];
        let gap = |delta: f64| {
            let full = euler_substep(&mats, &v0, delta, &zero).unwrap();
            let half = euler_substep(&mats, &v0, delta / 2.0, &zero).unwrap();
            let half = euler_substep(&mats, &half, delta / 2.0, &zero).unwrap();
            GridFunction::combination([(1.0, &full), (-1.0, &half)]).max_abs()
        };
        let ratio = gap(1e-3) / gap(5e-4);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn sampled_sup_norms() {
        let mesh = SpaceMesh::uniform(0.0, 1.0, 4).unwrap();
        let mut hat = GridFunction::zeros(3);
        hat.values_mut()[1] = 1.0;
        assert_eq!(sup_norm_sampled(&mesh, |e, x| hat.eval_on_element(&mesh, e, x), 8), 1.0);
        assert_eq!(sup_norm_sampled(&mesh, |_, _| 0.0, 8), 0.0);

        let one = SpaceMesh::new(vec![0.0, 1.0, 2.0]).unwrap();
        let v = sup_norm_sampled(&one, |e, x| if e == 0 { x * (1.0 - x) } else { 0.0 }, 8);
        assert_abs_diff_eq!(v, 12.0 / 49.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.24489795918367346, epsilon = 1e-15);
    }

    #[test]
    fn locate_and_eval() {
        let mesh = SpaceMesh::new(vec![-1.0, -0.2, 0.4, 1.0]).unwrap();
        assert_eq!(mesh.locate(-1.0), 0);
        assert_eq!(mesh.locate(-0.2), 1);
        assert_eq!(mesh.locate(0.9), 2);
        assert_eq!(mesh.locate(1.0), 2);
        let v = GridFunction::from_vec(vec![2.0, 4.0]);
        assert_abs_diff_eq!(v.eval(&mesh, 0.1), 3.0, epsilon = 1e-14);
        assert_eq!(v.eval(&mesh, 1.0), 0.0);
        assert_eq!(v.eval(&mesh, -1.0), 0.0);
    }

    #[test]
    fn matrices_are_exactly_symmetric_positive() {
        let mesh = SpaceMesh::new(vec![0.0, 0.05, 0.3, 0.31, 0.6, 1.0]).unwrap();
        let problem = ProblemSpec::builder(0.0, 1.0, 1.0)
            .diffusion(|x| 2.0 + x.sin())
            .reaction(|x| x * x)
            .build();
        let mats = assemble(&problem, &mesh).unwrap();
        assert!(mats.mass.factor().is_ok());
        assert!(mats.stiffness.factor().is_ok());
        assert!(mats.mass.diag().iter().all(|&d| d > 0.0));
    }

    proptest! {
        #[test]
        fn discrete_maximum_principle(load in proptest::collection::vec(0.0f64..1.0, 31), r in 0.0f64..5.0) {
            // Non-negative loads give non-negative solutions bounded by the
            // r = 0 solution with the maximal load.
            let mesh = SpaceMesh::uniform(0.0, 1.0, 32).unwrap();
            let mats = assemble(&unit_problem(1.0, r), &mesh).unwrap();
            let h = 1.0 / 32.0;
            let b: Vec<f64> = load.iter().map(|g| g * h).collect();
            let y = elliptic_solve(&mats, &b).unwrap();
            let gmax = load.iter().fold(0.0f64, |m, v| m.max(*v));
            prop_assert!(y.values().iter().all(|&v| v >= -1e-14));
            prop_assert!(y.max_abs() <= gmax / 8.0 * 1.05 + 1e-14);
        }

        #[test]
        fn implicit_euler_is_max_norm_stable(v in proptest::collection::vec(-1.0f64..1.0, 15), r in 0.0f64..10.0, delta in 1e-2f64..1.0) {
            // consistent mass keeps the M-matrix sign pattern only for δ ≳ h²/6
            let mesh = SpaceMesh::uniform(0.0, 1.0, 16).unwrap();
            let mats = assemble(&unit_problem(1.0, r), &mesh).unwrap();
            let prev = GridFunction::from_vec(v);
            let next = euler_substep(&mats, &prev, delta, &[0.0; 15]).unwrap();
            prop_assert!(next.max_abs() <= prev.max_abs() * (1.0 + 1e-12));
        }
    }
}
