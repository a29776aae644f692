//! Maximum-norm a posteriori bound for the extrapolated scheme.
//!
//! The bound has four parts:
//!
//! * `η_init = κ₀ σ₀ ‖u⁰ - u_h⁰‖∞`
//! * `η_f = κ₀ Σ_j σ_j ∫_{I_j} ‖(f - f̂)(s)‖∞ ds`
//! * `η_t = Σ_j σ_j (μ_{j,L-2} ‖A_j‖∞ + μ_{j,L-1} ‖B_j‖∞)` with
//!   `ψ + ∂_t u_h = A_j P_{L-2}∘ξ_j + B_j P_{L-1}∘ξ_j` on `I_j`
//! * `η_ell = κ₀ (σ₀ η_ell⁰ + η_ell^M) + κ₀ Σ_j σ_j Σ_{i=1}^{L-1} η^j_{ell,i} ‖P_{i-1}‖₁`
//!
//! with `σ_j = exp(-γ (T - t_j))`.

use crate::error::{Error, Result};
use crate::fem1d::{self, GridFunction, SpaceMesh, SUP_SAMPLES};
use crate::par;
use crate::polybasis::{legendre_l1_norm, GaussRule};
use crate::problem::{ProblemSpec, SpatialFn};
use crate::quadrature::adaptive_integrate;
use crate::reconstruct::{delta_basis, psi_plus_dudt_coeffs, ReconstructionSet, SourceInterpolant};
use crate::timestepper::{TimeMesh, Trajectory};

/// Constants of `‖G(t)‖₁ ≤ κ₀ e^{-γt}` and `‖∂_t G(t)‖₁ ≤ (κ₁/t + κ₁') e^{-γt}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenFunctionBounds {
    pub kappa0: f64,
    pub kappa1: f64,
    pub kappa1_prime: f64,
    pub gamma: f64,
}

impl Default for GreenFunctionBounds {
    /// `κ₀ = 1`, `γ = 0` and no bound on `∂_t G` (`κ₁ = ∞`).
    fn default() -> Self {
        Self {
            kappa0: 1.0,
            kappa1: f64::INFINITY,
            kappa1_prime: 0.0,
            gamma: 0.0,
        }
    }
}

impl GreenFunctionBounds {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v >= 0.0 && !v.is_nan();
        if ok(self.kappa0) && ok(self.kappa1) && ok(self.kappa1_prime) && ok(self.gamma) {
            Ok(())
        } else {
            Err(Error::InvalidProblem(format!(
                "Green's function bounds must be non-negative: {self:?}"
            )))
        }
    }
}

/// `σ_j = exp(-γ (T - t_j))`.
pub fn sigma(j: usize, time_mesh: &TimeMesh, gamma: f64) -> f64 {
    (-gamma * (time_mesh.final_time() - time_mesh.t(j))).exp()
}

/// `∫_{I_j} (t_j - t)(t - t_{j-1}) / (T - t) dt` in closed form.
///
/// With `a = T - t_j` and `x = τ_j / a` the integral equals
/// `τ²/2 + aτ - a(a + τ) ln(1 + x) = a² (x + x²/2 - (1+x) ln(1+x))`, and
/// `τ_M²/2` on the last interval. For small `x` the bracket is summed as
/// `Σ_{n≥3} (-1)^{n+1} xⁿ / (n(n-1))` to avoid cancellation.
pub fn weight_integral(j: usize, time_mesh: &TimeMesh) -> f64 {
    let tau = time_mesh.tau(j);
    let a = time_mesh.final_time() - time_mesh.t(j);
    if j == time_mesh.n_intervals() || a <= 0.0 {
        return 0.5 * tau * tau;
    }
    let x = tau / a;
    if x < 0.1 {
        let mut sum = 0.0;
        let mut power = x * x;
        for n in 3..60 {
            power *= x;
            let nf = n as f64;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * power / (nf * (nf - 1.0));
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        a * a * sum
    } else {
        0.5 * tau * tau + a * tau - a * (a + tau) * x.ln_1p()
    }
}

/// Adaptive-quadrature value of the same integral.
pub fn weight_integral_quadrature(j: usize, time_mesh: &TimeMesh) -> f64 {
    let (left, right) = (time_mesh.t(j - 1), time_mesh.t(j));
    let end = time_mesh.final_time();
    if j == time_mesh.n_intervals() {
        // the integrand reduces to t - t_{M-1}
        return adaptive_integrate(|t| t - left, left, right, 1e-14);
    }
    adaptive_integrate(|t| (right - t) * (t - left) / (end - t), left, right, 1e-14)
}

/// `μ_{j,0} = κ₀ τ_j`;
/// `μ_{j,i} = min{κ₀ τ_j ‖P_i‖₁ / 2, κ₁ W_j / τ_j + κ₁' τ_j² / 24}` for `i ≥ 1`,
/// where `W_j` is [`weight_integral`].
pub fn mu(j: usize, i: usize, time_mesh: &TimeMesh, bounds: &GreenFunctionBounds) -> f64 {
    let tau = time_mesh.tau(j);
    if i == 0 {
        return bounds.kappa0 * tau;
    }
    let first = 0.5 * bounds.kappa0 * tau * legendre_l1_norm(i);
    let second = if bounds.kappa1.is_infinite() {
        f64::INFINITY
    } else {
        bounds.kappa1 / tau * weight_integral(j, time_mesh) + bounds.kappa1_prime * tau * tau / 24.0
    };
    first.min(second)
}

/// Maximum-norm error bound for the elliptic problem `a(y, χ) = <g, χ>`
/// given its P1 approximation `y_h`.
pub trait EllipticEstimator: Send + Sync {
    fn estimate(&self, mesh: &SpaceMesh, y_h: &GridFunction, g: &(dyn Fn(f64) -> f64 + Sync)) -> Result<f64>;
}

/// Always returns zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroEstimator;

impl EllipticEstimator for ZeroEstimator {
    fn estimate(&self, _: &SpaceMesh, _: &GridFunction, _: &(dyn Fn(f64) -> f64 + Sync)) -> Result<f64> {
        Ok(0.0)
    }
}

/// Element residual estimator for `-(d y')' + r y = g`.
///
/// On element `e` let `ρ_e = h_e² / (8 d_min) · max |g - r y_h|`, the maximum
/// taken over 8 equispaced samples. Then
///
/// ```text
/// η = max_e ρ_e + K · max_e (r_max,e ρ_e),   K = min(1 / r_min, (x_b - x_a)² / (8 d_min))
/// ```
///
/// The first term bounds `w - y_h`, where `w` solves `-(d w')' = g - r y_h`
/// (P1 elements reproduce `w` at the nodes when `d` is constant); the second
/// bounds `y - w`, which solves the full problem with load `-r (w - y_h)`.
/// With `r ≡ 0` this is `max_e h_e²/8 · max |g| / d`.
#[derive(Clone)]
pub struct ResidualEstimator {
    reaction: SpatialFn,
    diffusion_min: f64,
    inverse_bound: f64,
}

impl std::fmt::Debug for ResidualEstimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResidualEstimator")
            .field("diffusion_min", &self.diffusion_min)
            .field("inverse_bound", &self.inverse_bound)
            .finish_non_exhaustive()
    }
}

impl ResidualEstimator {
    pub fn diffusion_min(&self) -> f64 {
        self.diffusion_min
    }

    /// `K`, a bound on `‖L⁻¹‖` in the maximum norm.
    pub fn inverse_bound(&self) -> f64 {
        self.inverse_bound
    }
}

/// The shipped default elliptic estimator, [`ResidualEstimator`], with
/// coefficient extremes sampled on 4097 points of the domain.
pub fn default_elliptic_estimator(problem: &ProblemSpec) -> Result<ResidualEstimator> {
    let samples = 4097;
    let (mut d_min, mut r_min) = (f64::INFINITY, f64::INFINITY);
    for k in 0..samples {
        let x = problem.x_left + problem.length() * k as f64 / (samples - 1) as f64;
        d_min = d_min.min((problem.diffusion)(x));
        r_min = r_min.min((problem.reaction)(x));
    }
    if !(d_min > 0.0) {
        return Err(Error::NonPositiveDiffusion(d_min));
    }
    if !(r_min >= 0.0) {
        return Err(Error::NegativeReaction(r_min));
    }
    let poisson = problem.length().powi(2) / (8.0 * d_min);
    let inverse_bound = if r_min > 0.0 { poisson.min(1.0 / r_min) } else { poisson };
    Ok(ResidualEstimator {
        reaction: problem.reaction.clone(),
        diffusion_min: d_min,
        inverse_bound,
    })
}

impl EllipticEstimator for ResidualEstimator {
    fn estimate(&self, mesh: &SpaceMesh, y_h: &GridFunction, g: &(dyn Fn(f64) -> f64 + Sync)) -> Result<f64> {
        if y_h.len() != mesh.n_interior() {
            return Err(Error::DimensionMismatch {
                expected: mesh.n_interior(),
                found: y_h.len(),
            });
        }
        let per_chunk = par::map_chunks(mesh.n_elements(), 1024, |range| {
            let mut local_max = 0.0f64;
            let mut weighted_max = 0.0f64;
            for e in range {
                let h = mesh.h(e);
                let mut residual = 0.0f64;
                let mut r_max = 0.0f64;
                for x in mesh.element_samples(e, SUP_SAMPLES) {
                    let r = (self.reaction)(x);
                    r_max = r_max.max(r);
                    residual = residual.max((g(x) - r * y_h.eval_on_element(mesh, e, x)).abs());
                }
                let rho = h * h / (8.0 * self.diffusion_min) * residual;
                local_max = local_max.max(rho);
                weighted_max = weighted_max.max(r_max * rho);
            }
            (local_max, weighted_max)
        });
        let (local, weighted) = per_chunk
            .into_iter()
            .fold((0.0f64, 0.0f64), |(a, b), (c, d)| (a.max(c), b.max(d)));
        Ok(local + self.inverse_bound * weighted)
    }
}

/// `κ₀ σ₀ ‖u⁰ - u_h⁰‖∞`, sampled at 8 points per element.
pub fn eta_init(
    u0: &(dyn Fn(f64) -> f64 + Sync),
    mesh: &SpaceMesh,
    u_h0: &GridFunction,
    bounds: &GreenFunctionBounds,
    time_mesh: &TimeMesh,
) -> f64 {
    if bounds.kappa0 == 0.0 {
        return 0.0;
    }
    let err = fem1d::sup_norm_sampled(mesh, |e, x| u0(x) - u_h0.eval_on_element(mesh, e, x), SUP_SAMPLES);
    bounds.kappa0 * sigma(0, time_mesh, bounds.gamma) * err
}

/// `∫_{I_j} ‖(f - f̂)(s)‖∞ ds` by a `(2L+2)`-point Gauss rule in time with
/// the spatial maximum sampled at 8 points per element.
pub fn interpolation_defect_integral(mesh: &SpaceMesh, source: &SourceInterpolant) -> f64 {
    let order = source.order();
    let rule = GaussRule::new(2 * order + 2);
    let map = *source.map();
    let points: Vec<(f64, f64)> = rule.mapped(map.left(), map.right()).collect();
    let basis: Vec<Vec<f64>> = points
        .iter()
        .map(|&(t, _)| {
            let xi = map.to_reference(t);
            (0..order).map(|i| delta_basis(i, xi)).collect()
        })
        .collect();
    let f = source.source();
    let chunk_maxima = par::map_chunks(mesh.n_elements(), 256, |range| {
        let mut maxima = vec![0.0f64; points.len()];
        for e in range {
            for x in mesh.element_samples(e, SUP_SAMPLES) {
                let deltas = source.deltas_at(x);
                for (q, &(t, _)) in points.iter().enumerate() {
                    let fhat: f64 = deltas.iter().zip(&basis[q]).map(|(d, b)| d * b).sum();
                    maxima[q] = maxima[q].max((f(x, t) - fhat).abs());
                }
            }
        }
        maxima
    });
    let mut maxima = vec![0.0f64; points.len()];
    for chunk in &chunk_maxima {
        for (m, c) in maxima.iter_mut().zip(chunk) {
            *m = m.max(*c);
        }
    }
    points.iter().zip(&maxima).map(|(&(_, w), m)| w * m).sum()
}

/// Per-interval contributions `κ₀ σ_j ∫_{I_j} ‖f - f̂‖∞` to `η_f`.
pub fn eta_f_per_interval(
    mesh: &SpaceMesh,
    sources: &[SourceInterpolant],
    bounds: &GreenFunctionBounds,
    time_mesh: &TimeMesh,
) -> Vec<f64> {
    if bounds.kappa0 == 0.0 {
        return vec![0.0; sources.len()];
    }
    sources
        .iter()
        .enumerate()
        .map(|(k, source)| {
            bounds.kappa0 * sigma(k + 1, time_mesh, bounds.gamma) * interpolation_defect_integral(mesh, source)
        })
        .collect()
}

/// `η_f`, summed over intervals in order.
pub fn eta_f(
    mesh: &SpaceMesh,
    sources: &[SourceInterpolant],
    bounds: &GreenFunctionBounds,
    time_mesh: &TimeMesh,
) -> f64 {
    eta_f_per_interval(mesh, sources, bounds, time_mesh).iter().sum()
}

/// Per-interval contributions `σ_j (μ_{j,L-2} ‖A_j‖∞ + μ_{j,L-1} ‖B_j‖∞)` to `η_t`.
///
/// For `L = 2` this is `σ_j (μ_{j,0} ‖Δ⁰ψ + (2/τ)Δ¹u_h‖∞ + μ_{j,1} ‖Δ¹ψ‖∞)`.
pub fn eta_t_per_interval(recs: &ReconstructionSet, bounds: &GreenFunctionBounds, time_mesh: &TimeMesh) -> Vec<f64> {
    par::map_range(recs.len(), |k| {
        let j = k + 1;
        let rec = recs.interval(j);
        let order = rec.u.order();
        let (a, b) = psi_plus_dudt_coeffs(rec);
        let sigma_j = sigma(j, time_mesh, bounds.gamma);
        sigma_j
            * (mu(j, order - 2, time_mesh, bounds) * a.max_abs() + mu(j, order - 1, time_mesh, bounds) * b.max_abs())
    })
}

/// `η_t`, summed over intervals in order.
pub fn eta_t(recs: &ReconstructionSet, bounds: &GreenFunctionBounds, time_mesh: &TimeMesh) -> f64 {
    eta_t_per_interval(recs, bounds, time_mesh).iter().sum()
}

/// Contributions to `η_ell`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticTerms {
    /// `η_ell⁰ = η(u_h⁰, f(0) + ψ⁰)`
    pub initial: f64,
    /// `η_ell^M = η(u_h^M, f(T) + ψ^M)`
    pub last: f64,
    /// `η^j_{ell,i}` for `i = 1..L-1`, row `j-1`.
    pub deltas: Vec<Vec<f64>>,
    /// `κ₀ σ_j Σ_i η^j_{ell,i} ‖P_{i-1}‖₁`, entry `j-1`.
    pub per_interval: Vec<f64>,
}

impl EllipticTerms {
    /// `η_ell = κ₀ (σ₀ η_ell⁰ + η_ell^M) + Σ_j per_interval[j]`.
    pub fn total(&self, bounds: &GreenFunctionBounds, time_mesh: &TimeMesh) -> f64 {
        let endpoints = bounds.kappa0 * (sigma(0, time_mesh, bounds.gamma) * self.initial + self.last);
        self.per_interval.iter().fold(endpoints, |acc, v| acc + v)
    }
}

/// Evaluates every elliptic estimate entering `η_ell`.
///
/// On `I_j` the data of the `i`-th estimate are `y_h = Δⁱu_h^j` and
/// `g = Δⁱψ^j + Δⁱf̂^j`.
pub fn elliptic_terms(
    estimator: &dyn EllipticEstimator,
    recs: &ReconstructionSet,
    trajectory: &Trajectory,
    bounds: &GreenFunctionBounds,
) -> Result<EllipticTerms> {
    let mesh = &trajectory.mesh;
    let time_mesh = &trajectory.time_mesh;
    let m = time_mesh.n_intervals();
    if recs.len() != m || trajectory.sources.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: recs.len().min(trajectory.sources.len()),
        });
    }
    let f = trajectory.sources[0].source().clone();
    let endpoint = |j: usize| {
        let t = time_mesh.t(j);
        let psi = &trajectory.psi[j];
        estimator.estimate(mesh, &trajectory.u[j], &|x| f(x, t) + psi.eval(mesh, x))
    };
    let initial = endpoint(0)?;
    let last = endpoint(m)?;
    let deltas = par::try_map_range(m, |k| {
        let rec = recs.interval(k + 1);
        let source = &trajectory.sources[k];
        (1..rec.u.order())
            .map(|i| {
                let psi = rec.psi.entry(i);
                estimator.estimate(mesh, rec.u.entry(i), &|x| psi.eval(mesh, x) + source.delta_at(i, x))
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    let per_interval = deltas
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let inner: f64 = row.iter().enumerate().map(|(i, eta)| eta * legendre_l1_norm(i)).sum();
            bounds.kappa0 * sigma(k + 1, time_mesh, bounds.gamma) * inner
        })
        .collect();
    Ok(EllipticTerms {
        initial,
        last,
        deltas,
        per_interval,
    })
}

/// `η_ell = κ₀ (σ₀ η_ell⁰ + η_ell^M) + κ₀ Σ_j σ_j Σ_{i=1}^{L-1} η^j_{ell,i} ‖P_{i-1}‖₁`.
pub fn eta_ell_component(
    estimator: &dyn EllipticEstimator,
    recs: &ReconstructionSet,
    trajectory: &Trajectory,
    bounds: &GreenFunctionBounds,
) -> Result<f64> {
    Ok(elliptic_terms(estimator, recs, trajectory, bounds)?.total(bounds, &trajectory.time_mesh))
}

/// The bound `η^M` and its parts.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorReport {
    pub eta_init: f64,
    pub eta_f: f64,
    pub eta_t: f64,
    pub eta_ell: f64,
    pub total: f64,
    /// Contributions of each interval, entry `j-1` for `I_j`.
    pub f_per_interval: Vec<f64>,
    pub t_per_interval: Vec<f64>,
    pub ell_per_interval: Vec<f64>,
    /// `κ₀ (σ₀ η_ell⁰ + η_ell^M)`
    pub ell_endpoints: f64,
    /// `σ_0, ..., σ_M`
    pub sigma: Vec<f64>,
    /// `μ_{j,i}` for `i = 0..L-1`, row `j-1`.
    pub mu: Vec<Vec<f64>>,
}

/// Parts of [`EstimatorReport`] computed elsewhere.
#[derive(Debug, Clone, Default)]
pub struct Components {
    pub eta_init: f64,
    pub f_per_interval: Vec<f64>,
    pub t_per_interval: Vec<f64>,
    pub ell_per_interval: Vec<f64>,
    pub ell_endpoints: f64,
}

/// Sums the components in the order init, f, t, ell; each of `η_f`, `η_t`,
/// `η_ell` is itself summed over intervals in index order.
pub fn assemble_report(
    components: Components,
    order: usize,
    bounds: &GreenFunctionBounds,
    time_mesh: &TimeMesh,
) -> EstimatorReport {
    let eta_f: f64 = components.f_per_interval.iter().sum();
    let eta_t: f64 = components.t_per_interval.iter().sum();
    let eta_ell = components
        .ell_per_interval
        .iter()
        .fold(components.ell_endpoints, |acc, v| acc + v);
    let total = components.eta_init + eta_f + eta_t + eta_ell;
    let m = time_mesh.n_intervals();
    EstimatorReport {
        eta_init: components.eta_init,
        eta_f,
        eta_t,
        eta_ell,
        total,
        f_per_interval: components.f_per_interval,
        t_per_interval: components.t_per_interval,
        ell_per_interval: components.ell_per_interval,
        ell_endpoints: components.ell_endpoints,
        sigma: (0..=m).map(|j| sigma(j, time_mesh, bounds.gamma)).collect(),
        mu: (1..=m)
            .map(|j| (0..order).map(|i| mu(j, i, time_mesh, bounds)).collect())
            .collect(),
    }
}

/// Computes `η^M` for a finished run with the problem's Green's function bounds.
pub fn estimate(
    problem: &ProblemSpec,
    trajectory: &Trajectory,
    estimator: &dyn EllipticEstimator,
) -> Result<EstimatorReport> {
    let bounds = &problem.green;
    let time_mesh = &trajectory.time_mesh;
    let recs = crate::reconstruct::build_reconstruction(trajectory)?;
    let eta_init = eta_init(
        &|x| (problem.initial)(x),
        &trajectory.mesh,
        &trajectory.u[0],
        bounds,
        time_mesh,
    );
    let f_per_interval = eta_f_per_interval(&trajectory.mesh, &trajectory.sources, bounds, time_mesh);
    let t_per_interval = eta_t_per_interval(&recs, bounds, time_mesh);
    let ell = elliptic_terms(estimator, &recs, trajectory, bounds)?;
    let ell_endpoints = bounds.kappa0 * (sigma(0, time_mesh, bounds.gamma) * ell.initial + ell.last);
    Ok(assemble_report(
        Components {
            eta_init,
            f_per_interval,
            t_per_interval,
            ell_per_interval: ell.per_interval,
            ell_endpoints,
        },
        trajectory.order(),
        bounds,
        time_mesh,
    ))
}
