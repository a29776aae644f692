//! Problem data for `∂_t u - (d u')' + r u = f` on `(x_a, x_b) × (0, T]` with
//! homogeneous Dirichlet conditions.

use crate::error::{Error, Result};
use crate::estimator::GreenFunctionBounds;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type SpatialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub x_left: f64,
    pub x_right: f64,
    pub final_time: f64,
    pub diffusion: SpatialFn,
    pub reaction: SpatialFn,
    /// `f(x, t)`
    pub source: SpaceTimeFn,
    pub initial: SpatialFn,
    pub green: GreenFunctionBounds,
    /// Exact solution `u(x, t)`, when known.
    pub exact: Option<SpaceTimeFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("domain", &(self.x_left, self.x_right))
            .field("final_time", &self.final_time)
            .field("green", &self.green)
            .field("has_exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    pub fn builder(x_left: f64, x_right: f64, final_time: f64) -> ProblemBuilder {
        ProblemBuilder {
            spec: ProblemSpec {
                name: "custom".into(),
                x_left,
                x_right,
                final_time,
                diffusion: Arc::new(|_| 1.0),
                reaction: Arc::new(|_| 0.0),
                source: Arc::new(|_, _| 0.0),
                initial: Arc::new(|_| 0.0),
                green: GreenFunctionBounds::default(),
                exact: None,
            },
        }
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    /// Checks the domain, the sign conditions `d > 0` and `r >= 0` on a sample
    /// grid, and that `u⁰` vanishes on the boundary.
    pub fn validate(&self) -> Result<()> {
        if !(self.x_left < self.x_right) {
            return Err(Error::InvalidProblem(format!(
                "empty domain ({}, {})",
                self.x_left, self.x_right
            )));
        }
        if !(self.final_time > 0.0) || !self.final_time.is_finite() {
            return Err(Error::InvalidProblem(format!(
                "final time must be positive, got {}",
                self.final_time
            )));
        }
        self.green.validate()?;
        let samples = 1001;
        let mut d_min = f64::INFINITY;
        let mut r_min = f64::INFINITY;
        for k in 0..samples {
            let x = self.x_left + self.length() * k as f64 / (samples - 1) as f64;
            d_min = d_min.min((self.diffusion)(x));
            r_min = r_min.min((self.reaction)(x));
        }
        if !(d_min > 0.0) {
            return Err(Error::NonPositiveDiffusion(d_min));
        }
        if !(r_min >= 0.0) {
            return Err(Error::NegativeReaction(r_min));
        }
        let scale = (0..samples)
            .map(|k| {
                let x = self.x_left + self.length() * k as f64 / (samples - 1) as f64;
                (self.initial)(x).abs()
            })
            .fold(1.0f64, f64::max);
        for x in [self.x_left, self.x_right] {
            let v = (self.initial)(x);
            if v.abs() > 1e-10 * scale {
                return Err(Error::InvalidProblem(format!(
                    "initial data must vanish on the boundary, u0({x}) = {v}"
                )));
            }
        }
        Ok(())
    }
}

pub struct ProblemBuilder {
    spec: ProblemSpec,
}

impl ProblemBuilder {
    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.spec.name = name.into();
        self
    }

    pub fn diffusion(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.spec.diffusion = Arc::new(d);
        self
    }

    pub fn reaction(mut self, r: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.spec.reaction = Arc::new(r);
        self
    }

    pub fn source(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.spec.source = Arc::new(f);
        self
    }

    pub fn initial(mut self, u0: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.spec.initial = Arc::new(u0);
        self
    }

    pub fn green(mut self, green: GreenFunctionBounds) -> Self {
        self.spec.green = green;
        self
    }

    pub fn exact(mut self, u: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.spec.exact = Some(Arc::new(u));
        self
    }

    pub fn build(self) -> ProblemSpec {
        self.spec
    }
}

/// `∂_t u - u_xx + (5x + 6) u = e^{-4t} + cos(π (x + t)²)` on `(-1, 1) × (0, 1]`
/// with `u(x, 0) = sin(π (1 + x) / 2)`.
///
/// Its Green's function satisfies `‖G(t)‖₁ ≤ e^{-t/2}` and
/// `‖∂_t G(t)‖₁ ≤ 3 / 2^{3/2} · e^{-t/2} / t`.
pub fn builtin_test_problem() -> ProblemSpec {
    ProblemSpec::builder(-1.0, 1.0, 1.0)
        .name("builtin")
        .diffusion(|_| 1.0)
        .reaction(|x| 5.0 * x + 6.0)
        .source(|x, t| (-4.0 * t).exp() + (PI * (x + t) * (x + t)).cos())
        .initial(|x| (PI * (1.0 + x) / 2.0).sin())
        .green(GreenFunctionBounds {
            kappa0: 1.0,
            kappa1: 3.0 / 2f64.powf(1.5),
            kappa1_prime: 0.0,
            gamma: 0.5,
        })
        .build()
}

/// Smooth problem with exact solution `u = e^{-t} sin(πx)` on `(0, 1) × (0, 1]`,
/// `d ≡ 1`, `r ≡ 1`, `f = π² e^{-t} sin(πx)`.
///
/// Every power of the spatial operator maps `u⁰` to a multiple of `sin(πx)`,
/// so the data satisfy compatibility conditions of all orders and time
/// discretisations show their full order. The Green's function bounds are
/// `κ₀ = 1`, `γ = 0` from the maximum principle; `κ₁` reuses the value of the
/// built-in problem.
pub fn manufactured_problem() -> ProblemSpec {
    ProblemSpec::builder(0.0, 1.0, 1.0)
        .name("manufactured")
        .diffusion(|_| 1.0)
        .reaction(|_| 1.0)
        .source(|x, t| PI * PI * (-t).exp() * (PI * x).sin())
        .initial(|x| (PI * x).sin())
        .exact(|x, t| (-t).exp() * (PI * x).sin())
        .green(GreenFunctionBounds {
            kappa0: 1.0,
            kappa1: 3.0 / 2f64.powf(1.5),
            kappa1_prime: 0.0,
            gamma: 0.0,
        })
        .build()
}

/// Time-independent problem `-u'' = 2` on `(0, 1)` started from its steady
/// state `u⁰ = x (1 - x)`, which P1 elements reproduce at the nodes.
pub fn stationary_problem() -> ProblemSpec {
    ProblemSpec::builder(0.0, 1.0, 1.0)
        .name("stationary")
        .diffusion(|_| 1.0)
        .reaction(|_| 0.0)
        .source(|_, _| 2.0)
        .initial(|x| x * (1.0 - x))
        .exact(|x, _| x * (1.0 - x))
        .green(GreenFunctionBounds {
            kappa0: 1.0,
            kappa1: 3.0 / 2f64.powf(1.5),
            kappa1_prime: 0.0,
            gamma: 0.0,
        })
        .build()
}
