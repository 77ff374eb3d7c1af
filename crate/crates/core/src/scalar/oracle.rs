//! Independent check of the closed forms: `∫₀^∞ |k(s)| ds` by adaptive
//! Gauss-Kronrod quadrature, split at the analytically known zeros of `k` and
//! truncated where an explicit exponential envelope bounds the tail.

use super::{classify_regime, RegimeData, Roots, ScalarParams, CRITICAL_TOLERANCE};
use crate::error::{require, Result};
use crate::estimate::{BoundEstimate, BoundKind};
use crate::quadrature::{integrate, QuadratureResult};

/// Default cap on the number of quadrature panels.
pub const DEFAULT_PANEL_BUDGET: usize = 8_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `g`, whose L1 norm is the optimal velocity constant.
    Velocity,
    /// `G`, whose L1 norm is the optimal position constant.
    Position,
}

impl Kernel {
    fn eval(self, r: &RegimeData, s: f64) -> f64 {
        match self {
            Kernel::Velocity => r.velocity_kernel(s),
            Kernel::Position => r.position_kernel(s),
        }
    }

    fn zeros(self, r: &RegimeData, horizon: f64) -> Vec<f64> {
        match self {
            Kernel::Velocity => super::kernel_sign_changes(r, horizon),
            Kernel::Position => r.combination_zeros(0.0, 1.0, horizon),
        }
    }
}

/// `K(b, c)` by quadrature, `|result − K| ≤ abs_tol`.
pub fn quadrature_bound_oracle(p: ScalarParams, abs_tol: f64) -> Result<BoundEstimate> {
    let r = classify_regime(p, CRITICAL_TOLERANCE);
    kernel_l1_norm(&r, Kernel::Velocity, abs_tol, DEFAULT_PANEL_BUDGET)
}

/// Optimal position constant by quadrature of `|G|`.
pub fn quadrature_position_oracle(p: ScalarParams, abs_tol: f64) -> Result<BoundEstimate> {
    let r = classify_regime(p, CRITICAL_TOLERANCE);
    kernel_l1_norm(&r, Kernel::Position, abs_tol, DEFAULT_PANEL_BUDGET)
}

/// `∫₀^∞ |k(s)| ds` with the tail beyond the truncation point bounded
/// analytically. The returned tolerance is the quadrature error estimate plus
/// the tail bound.
pub fn kernel_l1_norm(
    r: &RegimeData,
    kernel: Kernel,
    abs_tol: f64,
    budget: usize,
) -> Result<BoundEstimate> {
    require(abs_tol > 0.0, "abs_tol", abs_tol, "abs_tol > 0")?;
    let (cut, tail) = truncation_point(r, kernel, 0.25 * abs_tol);
    let q = kernel_l1_norm_on(r, kernel, cut, 0.5 * abs_tol, budget)?;
    let provenance = format!(
        "Gauss-Kronrod on [0, {cut:.6e}] with {} panels, tail bound {tail:.3e}",
        q.panels
    );
    Ok(BoundEstimate::new(q.value, BoundKind::QuadratureOracle, provenance)
        .with_tolerance(q.error + tail))
}

/// `∫₀^horizon |k(s)| ds` without any tail.
pub fn kernel_l1_norm_on(
    r: &RegimeData,
    kernel: Kernel,
    horizon: f64,
    abs_tol: f64,
    budget: usize,
) -> Result<QuadratureResult> {
    require(horizon > 0.0, "horizon", horizon, "horizon > 0")?;
    let mut points = vec![0.0];
    points.extend(kernel.zeros(r, horizon));

    // Past the last zero the integrand is a smooth decaying function; doubling
    // panels keep its varying scales apart.
    let fast = match r.roots {
        Roots::Real { alpha, .. } => alpha,
        Roots::Double { rate } => rate,
        Roots::Complex { .. } => f64::INFINITY,
    };
    if fast.is_finite() {
        let mut t = points.last().copied().unwrap().max(1.0 / fast);
        while t < horizon {
            if t > *points.last().unwrap() {
                points.push(t);
            }
            t *= 2.0;
        }
    }
    if *points.last().unwrap() < horizon {
        points.push(horizon);
    }

    integrate(|s| kernel.eval(r, s).abs(), &points, abs_tol, budget)
}

/// Smallest-ish `S` with `∫_S^∞ |k| ≤ target`, together with that bound.
fn truncation_point(r: &RegimeData, kernel: Kernel, target: f64) -> (f64, f64) {
    let tail = |s: f64| tail_bound(r, kernel, s);
    let rate = match r.roots {
        Roots::Real { beta, .. } => beta,
        Roots::Double { rate } => rate,
        Roots::Complex { gamma, .. } => gamma,
    };
    let mut hi = 1.0 / rate;
    while tail(hi) > target {
        hi *= 2.0;
    }
    let mut lo = 0.5 * hi;
    if tail(lo) <= target {
        return (hi, tail(hi));
    }
    // The bounds are decreasing in S; bisect to avoid overshooting by up to 2x,
    // which matters for oscillatory kernels where panels scale with S.
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi, tail(hi))
}

/// Analytic majorant of `∫_S^∞ |k(s)| ds`.
fn tail_bound(r: &RegimeData, kernel: Kernel, s: f64) -> f64 {
    match (r.roots, kernel) {
        (Roots::Real { alpha, beta }, Kernel::Velocity) => {
            // |g| ≤ e^{−βs}·(α+β)/(α−β) and |g| ≤ e^{−βs}(1 + αs)
            let e = (-beta * s).exp();
            let d = alpha - beta;
            let a = e * (alpha + beta) / (d * beta);
            let b = e * ((1.0 + alpha * s) / beta + alpha / (beta * beta));
            a.min(b)
        }
        (Roots::Real { alpha, beta }, Kernel::Position) => {
            // |G| ≤ e^{−βs}·min(1/(α−β), s)
            let e = (-beta * s).exp();
            let a = e / ((alpha - beta) * beta);
            let b = e * (s / beta + 1.0 / (beta * beta));
            a.min(b)
        }
        (Roots::Double { rate }, Kernel::Velocity) => (-rate * s).exp() * (2.0 / rate + s),
        (Roots::Double { rate }, Kernel::Position) => {
            (-rate * s).exp() * (s / rate + 1.0 / (rate * rate))
        }
        (Roots::Complex { gamma, omega }, Kernel::Velocity) => {
            (-gamma * s).exp() * (1.0 + (gamma / omega).powi(2)).sqrt() / gamma
        }
        (Roots::Complex { gamma, omega }, Kernel::Position) => {
            (-gamma * s).exp() / (omega * gamma)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{optimal_position_bound, optimal_velocity_bound};
    use super::*;

    fn params(b: f64, c: f64) -> ScalarParams {
        ScalarParams::new(b, c).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let k = quadrature_bound_oracle(params(1.0, 2.0), 1e-10).unwrap();
        assert_eq!(k.kind, BoundKind::QuadratureOracle);
        assert!((k.value - 0.735_758_882_3).abs() < 1e-10);
        assert!(k.tolerance.unwrap() <= 1e-10);

        let k = quadrature_bound_oracle(params(2.0, 3.0), 1e-10).unwrap();
        assert!((k.value - 0.5).abs() < 1e-10);

        let k = quadrature_bound_oracle(params(2.0, 2.0), 1e-10).unwrap();
        let closed = optimal_velocity_bound(params(2.0, 2.0)).value;
        assert!((k.value - closed).abs() < 1e-10);
    }

    #[test]
    fn large_stiffness_approaches_four_over_pi() {
        let k = quadrature_bound_oracle(params(1e6, 1.0), 1e-8).unwrap();
        assert!((k.value - 4.0 / std::f64::consts::PI).abs() < 1e-2);
        let closed = optimal_velocity_bound(params(1e6, 1.0)).value;
        assert!((k.value - closed).abs() < 1e-8);
    }

    #[test]
    fn position_oracle_matches_closed_form() {
        for &(b, c) in &[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0), (4.0, 0.5), (0.2, 5.0)] {
            let p = params(b, c);
            let q = quadrature_position_oracle(p, 1e-10).unwrap();
            let closed = optimal_position_bound(p).value;
            assert!((q.value - closed).abs() < 1e-8, "({b},{c}): {} vs {closed}", q.value);
        }
    }

    #[test]
    fn signed_integrals_of_kernels() {
        // ∫g = 0 and ∫G = 1/b, the signed counterparts of the L1 norms.
        for &(b, c) in &[(2.0, 3.0), (1.0, 2.0), (2.0, 2.0), (0.5, 0.3)] {
            let r = classify_regime(params(b, c), CRITICAL_TOLERANCE);
            let (cut, _) = truncation_point(&r, Kernel::Velocity, 1e-13);
            let mut points = vec![0.0];
            points.extend(super::super::kernel_sign_changes(&r, cut));
            points.push(cut);
            let g = integrate(|s| r.velocity_kernel(s), &points, 1e-12, 1 << 20).unwrap();
            assert!(g.value.abs() < 1e-9, "({b},{c}) ∫g = {}", g.value);
            let big_g = integrate(|s| r.position_kernel(s), &points, 1e-12, 1 << 20).unwrap();
            assert!((big_g.value - 1.0 / b).abs() < 1e-9, "({b},{c}) ∫G = {}", big_g.value);
        }
    }

    #[test]
    fn tail_bounds_dominate_actual_tails() {
        for &(b, c) in &[(2.0, 3.0), (1.0, 2.0), (2.0, 2.0), (1e-4, 1.0)] {
            let r = classify_regime(params(b, c), CRITICAL_TOLERANCE);
            for kernel in [Kernel::Velocity, Kernel::Position] {
                let s = 3.0 * r.first_zero;
                let far = s + 60.0 / r.params.c().min(r.stiffness() / r.params.c());
                let tol = 1e-12 / b.min(1.0);
                let actual = kernel_l1_norm_on(&r, kernel, far, tol, 1 << 20).unwrap().value
                    - kernel_l1_norm_on(&r, kernel, s, tol, 1 << 20).unwrap().value;
                assert!(actual <= tail_bound(&r, kernel, s) + 2.0 * tol);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        assert!(quadrature_bound_oracle(params(1.0, 1.0), 0.0).is_err());
    }
}
