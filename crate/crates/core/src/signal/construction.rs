//! The n-mode worst-case forcing behind the lower bounds on `K(A, c)`.
//!
//! Given `ε < L` with `e^{−ε} − 2e^{−L} > 0` and eigenvalues growing by at
//! least `2L/ε` per step, mode `i` is pushed with `−1` on `(−T_{i−1}, −T_i]`
//! where `T_i = ε/β_i`, and the last mode additionally with `+1` on
//! `(−T_n, 0]`. Each mode then reaches a velocity of order `1/c` at time 0
//! while the forcing keeps unit norm.

use super::ForcingSignal;
use crate::error::{require, Error, Result};

/// Relative slack on the inequality preconditions, so that parameters sitting
/// exactly on a boundary are not rejected by rounding.
const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalConstruction {
    epsilon: f64,
    big_l: f64,
    modes: Vec<f64>,
    c: f64,
    /// `T₁ > … > Tₙ`; `T₀ = +∞` is implicit.
    switch_times: Vec<f64>,
}

impl ExtremalConstruction {
    /// Checks every precondition except the one on `c`.
    pub fn new(epsilon: f64, big_l: f64, modes: Vec<f64>) -> Result<Self> {
        require(epsilon.is_finite() && epsilon > 0.0, "epsilon", epsilon, "ε > 0")?;
        require(big_l.is_finite() && big_l > epsilon, "L", big_l, "L > ε")?;
        let margin = (-epsilon).exp() - 2.0 * (-big_l).exp();
        if !(margin > 0.0) {
            return Err(Error::Precondition(format!(
                "e^(-ε) - 2e^(-L) > 0 fails: ε = {epsilon}, L = {big_l} give {margin:e}"
            )));
        }
        if modes.is_empty() {
            return Err(Error::Precondition("construction needs at least one mode".into()));
        }
        if let Some(&bad) = modes.iter().find(|&&l| !(l.is_finite() && l > 0.0)) {
            return Err(Error::NonPositiveEigenvalue { value: bad });
        }
        let ratio = 2.0 * big_l / epsilon;
        for (i, w) in modes.windows(2).enumerate() {
            if w[1] < ratio * w[0] * (1.0 - SLACK) {
                return Err(Error::Precondition(format!(
                    "λ_(i+1) >= (2L/ε)·λ_i fails at i = {}: {} / {} = {} < {ratio}",
                    i + 1,
                    w[1],
                    w[0],
                    w[1] / w[0]
                )));
            }
        }
        Ok(Self {
            epsilon,
            big_l,
            modes,
            c: f64::NAN,
            switch_times: Vec::new(),
        })
    }

    /// Minimal admissible damping `√(4Lλₙ/ε)`.
    pub fn c_threshold(&self) -> f64 {
        (4.0 * self.big_l * self.modes.last().unwrap() / self.epsilon).sqrt()
    }

    /// `e^{−ε} − 2e^{−L}`, the per-mode floor on `c·u_i'(0)`.
    pub fn margin(&self) -> f64 {
        (-self.epsilon).exp() - 2.0 * (-self.big_l).exp()
    }

    /// `(e^{−ε} − 2e^{−L})·√(n + 3)`, the guaranteed lower bound on
    /// `c·K(A, c)`.
    pub fn guaranteed_gain(&self) -> f64 {
        self.margin() * ((self.modes.len() + 3) as f64).sqrt()
    }

    /// Binds the damping, computing `T_i = ε/β_i`.
    pub fn with_damping(&self, c: f64) -> Result<Self> {
        require(c.is_finite() && c > 0.0, "c", c, "c > 0")?;
        let threshold = self.c_threshold();
        if c < threshold * (1.0 - SLACK) {
            return Err(Error::InvalidParameter {
                name: "c",
                value: c,
                constraint: format!("c >= sqrt(4Lλ_n/ε) = {threshold}"),
            });
        }
        let switch_times = self
            .modes
            .iter()
            .map(|&l| self.epsilon / slow_rate(l, c))
            .collect();
        Ok(Self {
            c,
            switch_times,
            ..self.clone()
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn big_l(&self) -> f64 {
        self.big_l
    }

    pub fn modes(&self) -> &[f64] {
        &self.modes
    }

    pub fn n(&self) -> usize {
        self.modes.len()
    }

    /// Bound damping, `NaN` before [`with_damping`](Self::with_damping).
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn switch_times(&self) -> &[f64] {
        &self.switch_times
    }

    /// The forcing, one channel per mode.
    pub fn forcing(&self) -> Result<ForcingSignal> {
        if self.switch_times.is_empty() {
            return Err(Error::Precondition("damping not bound; call with_damping".into()));
        }
        let n = self.n();
        let mut breakpoints: Vec<f64> = self.switch_times.iter().map(|t| -t).collect();
        breakpoints.push(0.0);
        // Segment k covers (−T_k, −T_{k+1}] with T₀ = ∞; mode k is active there.
        let mut rows = Vec::with_capacity(n + 2);
        for k in 0..n {
            let mut row = vec![0.0; n];
            row[k] = -1.0;
            rows.push(row);
        }
        let mut last = vec![0.0; n];
        last[n - 1] = 1.0;
        rows.push(last);
        rows.push(vec![0.0; n]);
        ForcingSignal::aperiodic(breakpoints, rows)
    }
}

/// `β = (c − √(c² − 4λ))/2`, computed as `2λ/(c + √(c² − 4λ))`.
pub(crate) fn slow_rate(lambda: f64, c: f64) -> f64 {
    2.0 * lambda / (c + c.mul_add(c, -4.0 * lambda).max(0.0).sqrt())
}

/// Validates `(ε, L, modes, c)` and returns the construction with its forcing.
pub fn build_construction(
    epsilon: f64,
    big_l: f64,
    modes: Vec<f64>,
    c: f64,
) -> Result<(ExtremalConstruction, ForcingSignal)> {
    let con = ExtremalConstruction::new(epsilon, big_l, modes)?.with_damping(c)?;
    let f = con.forcing()?;
    Ok((con, f))
}
