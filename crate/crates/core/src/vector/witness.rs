//! Two operators `A₁ < A₂` with `K(A₁, c) < K(A₂, c)`: the optimal velocity
//! constant is not monotone in the operator.
//!
//! `A₂` has eigenvalues `R₀` and `R₀²` with `R₀ = 2L₀/ε₀`, so the two-mode
//! construction applies and gives `K(A₂, c) ≥ (e^{−ε₀} − 2e^{−L₀})·√5/c`,
//! which exceeds `2/c` when the margin is at least `2/√5`. `A₁ = b·I` with `b`
//! below the spectrum of `A₂` has `K(A₁, c) = K(b, c) < 2/c`.

use super::{evaluate_construction, SpectrumModel};
use crate::error::{require, Error, Result};
use crate::scalar::{optimal_velocity_bound, ScalarParams};
use crate::signal::ExtremalConstruction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessConfig {
    pub eps0: f64,
    pub l0: f64,
    /// `b = b_fraction · λ_min(A₂)`.
    pub b_fraction: f64,
    /// Search interval for `c`; defaults to `[threshold, 10·threshold]`.
    pub c_range: Option<(f64, f64)>,
    /// Number of geometric grid points in the search.
    pub grid: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            eps0: 0.01,
            l0: 3.2,
            b_fraction: 0.5,
            c_range: None,
            grid: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub a1: SpectrumModel,
    pub a2: SpectrumModel,
    pub c_star: f64,
    /// Exact construction value for `A₂` at `c_star`, a lower bound on
    /// `K(A₂, c_star)`.
    pub lower_a2: f64,
    /// `(e^{−ε₀} − 2e^{−L₀})·√5/c_star`.
    pub guaranteed_a2: f64,
    /// `2/c_star`.
    pub two_over_c: f64,
    /// Closed-form `K(b, c_star) = K(A₁, c_star)`.
    pub k_a1: f64,
    pub threshold: f64,
}

/// Witness with the default configuration.
pub fn nonmonotonicity_witness(c_range: Option<(f64, f64)>) -> Result<WitnessReport> {
    nonmonotonicity_witness_with(WitnessConfig {
        c_range,
        ..WitnessConfig::default()
    })
}

/// Scans `c` geometrically and returns the first value with
/// `lower(A₂, c) > 2/c ≥ K(b, c)`.
pub fn nonmonotonicity_witness_with(cfg: WitnessConfig) -> Result<WitnessReport> {
    require(
        cfg.b_fraction > 0.0 && cfg.b_fraction < 1.0,
        "b_fraction",
        cfg.b_fraction,
        "0 < b_fraction < 1",
    )?;
    require(cfg.grid >= 2, "grid", cfg.grid as f64, "grid >= 2")?;
    let r0 = 2.0 * cfg.l0 / cfg.eps0;
    let con = ExtremalConstruction::new(cfg.eps0, cfg.l0, vec![r0, r0 * r0])?;
    let a2 = SpectrumModel::finite(con.modes().to_vec())?;
    let b = cfg.b_fraction * a2.lambda_min();
    let a1 = SpectrumModel::finite(vec![b, b])?;
    let threshold = con.c_threshold();
    let (lo, hi) = cfg.c_range.unwrap_or((threshold, 10.0 * threshold));
    require(lo >= threshold * (1.0 - 1e-12), "c_lo", lo, &format!("c >= threshold {threshold}"))?;
    require(hi >= lo, "c_hi", hi, "c_hi >= c_lo")?;

    let ratio = (hi / lo).powf(1.0 / (cfg.grid - 1) as f64);
    for k in 0..cfg.grid {
        let c = if k + 1 == cfg.grid { hi } else { lo * ratio.powi(k as i32) };
        let lower_a2 = evaluate_construction(&con, c)?.norm_v0;
        let k_a1 = optimal_velocity_bound(ScalarParams::new(b, c)?).value;
        let two_over_c = 2.0 / c;
        if lower_a2 > two_over_c && two_over_c >= k_a1 {
            return Ok(WitnessReport {
                a1,
                a2,
                c_star: c,
                lower_a2,
                guaranteed_a2: con.guaranteed_gain() / c,
                two_over_c,
                k_a1,
                threshold,
            });
        }
    }
    Err(Error::Precondition(format!(
        "no witness found for c in [{lo}, {hi}]"
    )))
}
