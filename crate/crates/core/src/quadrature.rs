//! Adaptive Gauss–Legendre quadrature by interval bisection.

use crate::polybasis::GaussRule;
use std::sync::OnceLock;

fn rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::new(10))
}

/// Integrates `f` over `[a, b]`, bisecting until the 10-point estimate on a
/// panel agrees with the sum over its two halves to `tol` (relative to the
/// running magnitude of the integral).
pub fn adaptive_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let rule = rule();
    let whole = rule.integrate(a, b, &f);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    refine(&f, rule, a, b, whole, tol, scale, 0)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &impl Fn(f64) -> f64,
    rule: &GaussRule,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    scale: f64,
    depth: usize,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let halves = left + right;
    if (halves - whole).abs() <= tol * scale || depth >= 50 {
        return halves;
    }
    refine(f, rule, a, mid, left, tol, scale, depth + 1) + refine(f, rule, mid, b, right, tol, scale, depth + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_and_kinked_integrands() {
        let v = adaptive_integrate(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-14);
        assert!((v - 2.0).abs() < 1e-13);
        let v = adaptive_integrate(|x: f64| (x - 0.3).abs(), -1.0, 1.0, 1e-13);
        assert!((v - (0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7)).abs() < 1e-12);
        let v = adaptive_integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-13);
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }
}
