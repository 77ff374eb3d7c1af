//! The scalar equation `u'' + c u' + b u = f`.
//!
//! Regime classification, the closed-form optimal velocity and position
//! constants, the Green kernels, and an independent quadrature oracle for the
//! velocity constant `K(b, c) = ∫₀^∞ |g(s)| ds`.

mod envelope;
mod kernel;
mod oracle;

use std::f64::consts::{E, PI};

pub use envelope::{decay_envelope, DecayEnvelope, CRITICAL_RATE_MARGIN};
pub(crate) use envelope::spectral_norm;
pub use oracle::{
    kernel_l1_norm, kernel_l1_norm_on, quadrature_bound_oracle, quadrature_position_oracle,
    Kernel, DEFAULT_PANEL_BUDGET,
};

use crate::error::{require, Result};
use crate::estimate::{BoundEstimate, BoundKind};

/// Relative tolerance on `|c² − 4b| / c²` below which the critical formulas
/// are used.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

/// Stiffness `b` and damping `c` of the scalar equation; both positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarParams {
    b: f64,
    c: f64,
}

impl ScalarParams {
    pub fn new(b: f64, c: f64) -> Result<Self> {
        require(b.is_finite() && b > 0.0, "b", b, "b > 0")?;
        require(c.is_finite() && c > 0.0, "c", c, "c > 0")?;
        Ok(Self { b, c })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `c² − 4b`, rounded once.
    pub fn discriminant(&self) -> f64 {
        self.c.mul_add(self.c, -4.0 * self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    NonOscillatory,
    Critical,
    Oscillatory,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::NonOscillatory => "non-oscillatory",
            Regime::Critical => "critical",
            Regime::Oscillatory => "oscillatory",
        }
    }
}

/// Roots of `x² + c x + b = 0`, stored as decay rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Roots {
    /// Roots `−alpha`, `−beta` with `alpha > beta > 0`.
    Real { alpha: f64, beta: f64 },
    /// Double root `−rate`, `rate = c/2`.
    Double { rate: f64 },
    /// Roots `−gamma ± i·omega`.
    Complex { gamma: f64, omega: f64 },
}

/// Regime of a scalar problem together with every derived quantity the
/// kernels need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeData {
    pub params: ScalarParams,
    pub regime: Regime,
    /// `|1 − 4b/c²|^{1/2}`; zero in the critical regime.
    pub delta: f64,
    pub roots: Roots,
    /// First positive zero of the velocity kernel: `s₀` (non-oscillatory and
    /// critical) or `y₀/ω` with `y₀ = arctan Δ` (oscillatory).
    pub first_zero: f64,
}

impl RegimeData {
    pub fn alpha_beta(&self) -> Option<(f64, f64)> {
        match self.roots {
            Roots::Real { alpha, beta } => Some((alpha, beta)),
            _ => None,
        }
    }

    pub fn gamma_omega(&self) -> Option<(f64, f64)> {
        match self.roots {
            Roots::Complex { gamma, omega } => Some((gamma, omega)),
            _ => None,
        }
    }

    /// `y₀ = arctan Δ`, only in the oscillatory regime.
    pub fn y0(&self) -> Option<f64> {
        (self.regime == Regime::Oscillatory).then(|| self.delta.atan())
    }

    /// Stiffness consistent with the stored roots. Equals `b` except in the
    /// critical regime, where it is `(c/2)²`.
    pub fn stiffness(&self) -> f64 {
        match self.roots {
            Roots::Double { rate } => rate * rate,
            _ => self.params.b,
        }
    }
}

/// Classifies `(b, c)` by the sign of `c² − 4b`, mapping
/// `|c² − 4b| ≤ tol·c²` to the critical regime.
pub fn classify_regime(p: ScalarParams, tol: f64) -> RegimeData {
    assert!(tol >= 0.0, "regime tolerance must be nonnegative");
    let (b, c) = (p.b, p.c);
    let disc = p.discriminant();
    if disc.abs() <= tol * c * c {
        let rate = 0.5 * c;
        return RegimeData {
            params: p,
            regime: Regime::Critical,
            delta: 0.0,
            roots: Roots::Double { rate },
            first_zero: 1.0 / rate,
        };
    }
    if disc > 0.0 {
        let sq = disc.sqrt();
        let alpha = 0.5 * (c + sq);
        // Product form avoids cancellation in (c − √disc)/2.
        let beta = b / alpha;
        let delta = sq / c;
        let first_zero = (sq / beta).ln_1p() / sq;
        RegimeData {
            params: p,
            regime: Regime::NonOscillatory,
            delta,
            roots: Roots::Real { alpha, beta },
            first_zero,
        }
    } else {
        let sq = (-disc).sqrt();
        let gamma = 0.5 * c;
        let omega = 0.5 * sq;
        let delta = sq / c;
        RegimeData {
            params: p,
            regime: Regime::Oscillatory,
            delta,
            roots: Roots::Complex { gamma, omega },
            first_zero: delta.atan() / omega,
        }
    }
}

/// `atanh(Δ)` for `Δ ∈ (0, 1)`, accurate at both ends. Near 1 it uses
/// `atanh Δ = ln(α/√b)`, which avoids forming `1 − Δ`.
fn atanh_delta(r: &RegimeData) -> f64 {
    let Roots::Real { alpha, .. } = r.roots else {
        unreachable!("atanh_delta is only used for real roots")
    };
    if r.delta < 0.5 {
        r.delta.atanh()
    } else {
        (alpha / r.params.b.sqrt()).ln()
    }
}

/// Optimal velocity constant `K(b, c)` in closed form.
pub fn optimal_velocity_bound(p: ScalarParams) -> BoundEstimate {
    let r = classify_regime(p, CRITICAL_TOLERANCE);
    let (value, branch) = match r.regime {
        Regime::NonOscillatory => {
            // ((1−Δ)/(1+Δ))^{1/(2Δ)} = exp(−atanh(Δ)/Δ)
            let v = 2.0 / p.b.sqrt() * (-atanh_delta(&r) / r.delta).exp();
            (v, "closed form, non-oscillatory branch")
        }
        Regime::Critical => (4.0 / (E * p.c), "closed form, critical branch 4/(ec)"),
        Regime::Oscillatory => {
            let d = r.delta;
            let v = 2.0 / p.b.sqrt() * (-d.atan() / d).exp() / -(-PI / d).exp_m1();
            (v, "closed form, oscillatory branch")
        }
    };
    BoundEstimate::new(value, BoundKind::ExactClosedForm, branch)
}

/// Optimal position constant: `(1/b)·coth(cπ / (2√(4b − c²)))` when
/// `c < 2√b`, else `1/b`.
pub fn optimal_position_bound(p: ScalarParams) -> BoundEstimate {
    let r = classify_regime(p, CRITICAL_TOLERANCE);
    match r.regime {
        Regime::Oscillatory => {
            let arg = p.c * PI / (2.0 * (-p.discriminant()).sqrt());
            BoundEstimate::new(
                1.0 / (p.b * arg.tanh()),
                BoundKind::ExactClosedForm,
                "optimal position bound, oscillatory branch",
            )
        }
        _ => BoundEstimate::new(
            1.0 / p.b,
            BoundKind::ExactClosedForm,
            "optimal position bound, 1/b branch",
        ),
    }
}

/// Velocity Green kernel `g(s)`; `u'(0) = ∫₀^∞ g(s) f(−s) ds` for the bounded
/// solution.
pub fn velocity_kernel(r: &RegimeData, s: f64) -> f64 {
    r.velocity_kernel(s)
}

/// Position Green kernel `G(s)`; `u(0) = ∫₀^∞ G(s) f(−s) ds`.
pub fn position_kernel(r: &RegimeData, s: f64) -> f64 {
    r.position_kernel(s)
}

/// Zeros of the velocity kernel in `(0, horizon]`, increasing.
pub fn kernel_sign_changes(r: &RegimeData, horizon: f64) -> Vec<f64> {
    assert!(horizon > 0.0, "horizon must be positive");
    match r.roots {
        Roots::Real { .. } | Roots::Double { .. } => {
            if r.first_zero <= horizon {
                vec![r.first_zero]
            } else {
                Vec::new()
            }
        }
        Roots::Complex { omega, .. } => {
            let y0 = r.delta.atan();
            (0..)
                .map(|k| (y0 + k as f64 * PI) / omega)
                .take_while(|&s| s <= horizon)
                .collect()
        }
    }
}

/// Published comparison constants for the scalar problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoricalBounds {
    /// Loud: `min{1/b + 4/c², 1/b + 4/(c√b)}` on `limsup |u|`.
    pub loud_u: f64,
    /// Loud: `4/c` on `limsup |u'|`.
    pub loud_v: f64,
    /// Fitzgibbon–Haraux: `max{1/b, 2/(c√b)}` on `limsup |u|`.
    pub fithar_u: f64,
    /// Fitzgibbon–Haraux: `2/c + 1/√b` if `c < 2√b`, else `2/√b`.
    pub fithar_v: f64,
    /// Haraux's optimal position constant.
    pub haraux_u: f64,
}

pub fn historical_bounds(p: ScalarParams) -> HistoricalBounds {
    let (b, c) = (p.b, p.c);
    let sb = b.sqrt();
    let fithar_v = if c < 2.0 * sb { 2.0 / c + 1.0 / sb } else { 2.0 / sb };
    HistoricalBounds {
        loud_u: (1.0 / b + 4.0 / (c * c)).min(1.0 / b + 4.0 / (c * sb)),
        loud_v: 4.0 / c,
        fithar_u: (1.0 / b).max(2.0 / (c * sb)),
        fithar_v,
        haraux_u: optimal_position_bound(p).value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::BoundKind;

    fn params(b: f64, c: f64) -> ScalarParams {
        ScalarParams::new(b, c).unwrap()
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(ScalarParams::new(0.0, 1.0).is_err());
        assert!(ScalarParams::new(1.0, -1.0).is_err());
        assert!(ScalarParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn classify_examples() {
        let r = classify_regime(params(1.0, 2.0), CRITICAL_TOLERANCE);
        assert_eq!(r.regime, Regime::Critical);
        assert_eq!(r.delta, 0.0);

        let r = classify_regime(params(2.0, 3.0), CRITICAL_TOLERANCE);
        assert_eq!(r.regime, Regime::NonOscillatory);
        assert!((r.delta - 1.0 / 3.0).abs() < 1e-15);
        let (alpha, beta) = r.alpha_beta().unwrap();
        assert!((alpha - 2.0).abs() < 1e-15 && (beta - 1.0).abs() < 1e-15);

        let r = classify_regime(params(2.0, 2.0), CRITICAL_TOLERANCE);
        assert_eq!(r.regime, Regime::Oscillatory);
        let (gamma, omega) = r.gamma_omega().unwrap();
        assert_eq!((r.delta, gamma, omega), (1.0, 1.0, 1.0));
        assert!((r.y0().unwrap() - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn root_identities_hold_across_scales() {
        for &(b, c) in &[(2.0, 3.0), (1e-6, 1e3), (1e4, 200.1), (0.3, 1.2), (5.0, 1e6)] {
            let r = classify_regime(params(b, c), CRITICAL_TOLERANCE);
            let (alpha, beta) = r.alpha_beta().unwrap();
            assert!(alpha >= beta && beta > 0.0);
            assert!((alpha * beta - b).abs() <= 1e-12 * b, "αβ = b at ({b}, {c})");
            assert!((alpha + beta - c).abs() <= 1e-12 * c, "α+β = c at ({b}, {c})");
        }
    }

    #[test]
    fn critical_tolerance_band() {
        let c = 2.0;
        let r = classify_regime(params(1.0 + 1e-13, c), CRITICAL_TOLERANCE);
        assert_eq!(r.regime, Regime::Critical);
        let r = classify_regime(params(1.0 + 1e-9, c), CRITICAL_TOLERANCE);
        assert_eq!(r.regime, Regime::Oscillatory);
        let r = classify_regime(params(1.0 - 1e-9, c), CRITICAL_TOLERANCE);
        assert_eq!(r.regime, Regime::NonOscillatory);
    }

    #[test]
    fn velocity_bound_examples() {
        let k = optimal_velocity_bound(params(1.0, 2.0));
        assert_eq!(k.kind, BoundKind::ExactClosedForm);
        assert!((k.value - 2.0 / E).abs() < 1e-15);
        assert!((k.value - 0.735_758_882_3).abs() < 1e-10);

        // √2·(1/2)^{3/2} = 1/2
        let k = optimal_velocity_bound(params(2.0, 3.0));
        assert!((k.value - 0.5).abs() < 1e-15);

        let expected = 2f64.sqrt() * (-PI / 4.0).exp() / (1.0 - (-PI).exp());
        let k = optimal_velocity_bound(params(2.0, 2.0));
        assert!((k.value - expected).abs() < 1e-15);
        assert!((k.value - 0.673_916_454_5).abs() < 1e-10);
    }

    #[test]
    fn velocity_bound_continuous_at_critical_line() {
        for &b in &[0.1, 1.0, 100.0] {
            let c = 2.0 * f64::sqrt(b);
            let crit = 4.0 / (E * c);
            for c_off in [c - 1e-6, c + 1e-6] {
                let k = optimal_velocity_bound(params(b, c_off)).value;
                assert!((k - crit).abs() <= 1e-4 * crit, "b={b}, c={c_off}: {k} vs {crit}");
            }
        }
    }

    #[test]
    fn position_bound_examples() {
        assert_eq!(optimal_position_bound(params(1.0, 2.0)).value, 1.0);
        assert_eq!(optimal_position_bound(params(1.0, 3.0)).value, 1.0);
        let v = optimal_position_bound(params(1.0, 1.0)).value;
        let expected = 1.0 / (PI / (2.0 * 3f64.sqrt())).tanh();
        assert!((v - expected).abs() < 1e-14);
        assert!((v - 1.389_582_000_2).abs() < 1e-10);
    }

    #[test]
    fn sign_change_examples() {
        let r = classify_regime(params(2.0, 3.0), CRITICAL_TOLERANCE);
        let z = kernel_sign_changes(&r, 10.0);
        assert_eq!(z.len(), 1);
        assert!((z[0] - 2f64.ln()).abs() < 1e-15);

        let r = classify_regime(params(1.0, 2.0), CRITICAL_TOLERANCE);
        // 1 − cs/2 vanishes at s = 2/c = 1.
        assert_eq!(kernel_sign_changes(&r, 10.0), vec![1.0]);

        let r = classify_regime(params(2.0, 2.0), CRITICAL_TOLERANCE);
        let z = kernel_sign_changes(&r, 10.0);
        assert_eq!(z.len(), 3);
        for (k, s) in z.iter().enumerate() {
            assert!((s - (PI / 4.0 + k as f64 * PI)).abs() < 1e-14);
        }
        assert!(kernel_sign_changes(&r, 0.5).is_empty());
    }

    #[test]
    fn historical_examples() {
        let h = historical_bounds(params(1.0, 2.0));
        assert_eq!(h.loud_v, 2.0);
        assert_eq!(h.fithar_v, 2.0);
        assert_eq!(h.loud_u, 2.0);
        assert_eq!(h.fithar_u, 1.0);
        assert_eq!(h.haraux_u, 1.0);
        let h = historical_bounds(params(1.0, 1.0));
        assert_eq!(h.fithar_v, 3.0);
    }

    #[test]
    fn optimal_beats_historical() {
        for &(b, c) in &[(1.0, 0.5), (1.0, 2.0), (2.0, 3.0), (100.0, 1.0), (0.01, 5.0)] {
            let p = params(b, c);
            let k = optimal_velocity_bound(p).value;
            let h = historical_bounds(p);
            assert!(k <= h.loud_v && k <= h.fithar_v);
            assert!(h.haraux_u <= h.fithar_u + 1e-15);
        }
    }
}
