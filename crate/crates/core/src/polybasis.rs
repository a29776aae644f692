//! Legendre and integrated Legendre polynomials on the reference interval
//! `[-1, 1]`, Gauss–Legendre rules, and affine maps from time intervals onto
//! the reference interval.

use crate::error::{Error, Result};

/// Evaluates the Legendre polynomial `P_i` at `xi` by the three-term recurrence
/// `(k+1) P_{k+1} = (2k+1) xi P_k - k P_{k-1}`.
pub fn legendre(i: usize, xi: f64) -> f64 {
    debug_assert!(
        (-1.0 - 1e-12..=1.0 + 1e-12).contains(&xi),
        "legendre evaluated outside [-1, 1]: {xi}"
    );
    legendre_and_previous(i, xi).0
}

/// Returns `(P_i(xi), P_{i-1}(xi))`, with `P_{-1} := 0`.
fn legendre_and_previous(i: usize, xi: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..i {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * xi * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Returns `(P_i(xi), P_i'(xi))`.
pub fn legendre_with_derivative(i: usize, xi: f64) -> (f64, f64) {
    if i == 0 {
        return (1.0, 0.0);
    }
    let (p, q) = legendre_and_previous(i, xi);
    let n = i as f64;
    let one_minus = 1.0 - xi * xi;
    if one_minus.abs() < 1e-14 {
        // P_i'(±1) = (±1)^{i+1} i(i+1)/2
        let sign = if xi > 0.0 || i % 2 == 1 { 1.0 } else { -1.0 };
        return (p, sign * n * (n + 1.0) / 2.0);
    }
    (p, n * (q - xi * p) / one_minus)
}

/// Evaluates the integrated Legendre polynomial `N_i(xi) = ∫_{-1}^{xi} P_{i-1}`
/// through `N_i = (P_i - P_{i-2}) / (2i - 1)`.
pub fn integrated_legendre(i: usize, xi: f64) -> Result<f64> {
    if i < 2 {
        return Err(Error::InvalidDegree(i));
    }
    let (p, _) = legendre_and_previous(i, xi);
    let pm2 = legendre(i - 2, xi);
    Ok((p - pm2) / (2.0 * i as f64 - 1.0))
}

/// Roots of `P_n` in ascending order, by Newton iteration from Chebyshev-like
/// initial guesses.
pub fn legendre_roots(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut roots: Vec<f64> = (1..=n)
        .map(|k| {
            let mut x = (std::f64::consts::PI * (k as f64 - 0.25) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            x
        })
        .collect();
    roots.reverse();
    // odd degree: the middle root is exactly zero
    if n % 2 == 1 {
        roots[n / 2] = 0.0;
    }
    roots
}

/// `‖P_i‖_{L1(-1,1)}`, integrated exactly between consecutive roots of `P_i`
/// using the antiderivative `N_{i+1}`.
pub fn legendre_l1_norm(i: usize) -> f64 {
    if i == 0 {
        return 2.0;
    }
    let mut breaks = Vec::with_capacity(i + 2);
    breaks.push(-1.0);
    breaks.extend(legendre_roots(i));
    breaks.push(1.0);
    let antiderivative = |x: f64| {
        // N_{i+1} = (P_{i+1} - P_{i-1}) / (2i + 1)
        let (p_next, _) = legendre_and_previous(i + 1, x);
        (p_next - legendre(i - 1, x)) / (2.0 * i as f64 + 1.0)
    };
    breaks
        .windows(2)
        .map(|w| (antiderivative(w[1]) - antiderivative(w[0])).abs())
        .sum()
}

/// `‖P_i'‖_{∞,(-1,1)} = i(i+1)/2`, attained at `xi = 1`.
pub fn legendre_derivative_sup_norm(i: usize) -> f64 {
    let n = i as f64;
    n * (n + 1.0) / 2.0
}

/// A polynomial on `[-1, 1]` stored by its Legendre coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RefPolynomial {
    coeffs: Vec<f64>,
}

impl RefPolynomial {
    pub fn from_legendre(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Clenshaw summation of `Σ c_k P_k(xi)`.
    pub fn eval(&self, xi: f64) -> f64 {
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for k in (1..self.coeffs.len()).rev() {
            let kf = k as f64;
            let alpha = (2.0 * kf + 1.0) / (kf + 1.0) * xi;
            let beta = (kf + 1.0) / (kf + 2.0);
            let b0 = self.coeffs[k] + alpha * b1 - beta * b2;
            b2 = b1;
            b1 = b0;
        }
        // P_1 = xi, and beta for k = 0 is 1/2
        self.coeffs[0] + xi * b1 - 0.5 * b2
    }
}

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        let nodes = legendre_roots(n);
        let weights = nodes
            .iter()
            .map(|&x| {
                let (_, dp) = legendre_with_derivative(n, x);
                2.0 / ((1.0 - x * x) * dp * dp)
            })
            .collect();
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// The affine map `s ↦ 2 (s - midpoint) / (right - left)` from a time interval
/// onto `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalMap {
    left: f64,
    right: f64,
}

impl IntervalMap {
    pub fn new(left: f64, right: f64) -> Result<Self> {
        if !(left < right) || !left.is_finite() || !right.is_finite() {
            return Err(Error::DegenerateInterval(left, right));
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn right(&self) -> f64 {
        self.right
    }

    pub fn length(&self) -> f64 {
        self.right - self.left
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * self.length();
        t >= self.left - slack && t <= self.right + slack
    }

    pub fn to_reference(&self, t: f64) -> f64 {
        2.0 * (t - self.midpoint()) / self.length()
    }

    pub fn from_reference(&self, xi: f64) -> f64 {
        self.midpoint() + 0.5 * self.length() * xi
    }

    /// `dξ/dt`.
    pub fn jacobian(&self) -> f64 {
        2.0 / self.length()
    }
}
