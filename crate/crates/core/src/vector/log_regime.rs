//! The `(log c)^{1/2}/c` regime: spectra whose consecutive eigenvalue ratios
//! stay within `[R₀, R]`, as happens for Laplacian-like spectra after
//! extracting a subsequence.

use super::{Dimension, SpectrumModel};
use crate::error::{require, Error, Result};
use crate::estimate::{BoundEstimate, BoundKind};

/// Constants of the logarithmic lower bound: `R₀ = 2L₀/ε₀`, a ratio cap
/// `R ≥ R₀`, and the first eigenvalue `λ₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRegimeParams {
    eps0: f64,
    l0: f64,
    r0: f64,
    r: f64,
    lambda1: f64,
}

impl LogRegimeParams {
    /// Requires `e^{−ε₀} − 2e^{−L₀} ≥ 1/2` and `R ≥ R₀ > 1`.
    pub fn new(eps0: f64, l0: f64, r: f64, lambda1: f64) -> Result<Self> {
        require(eps0.is_finite() && eps0 > 0.0, "eps0", eps0, "ε₀ > 0")?;
        require(l0.is_finite() && l0 > eps0, "L0", l0, "L₀ > ε₀")?;
        require(lambda1.is_finite() && lambda1 > 0.0, "lambda1", lambda1, "λ₁ > 0")?;
        let margin = (-eps0).exp() - 2.0 * (-l0).exp();
        if margin < 0.5 {
            return Err(Error::Precondition(format!(
                "e^(-ε₀) - 2e^(-L₀) >= 1/2 fails: {margin}"
            )));
        }
        let r0 = 2.0 * l0 / eps0;
        require(r0 > 1.0, "R0", r0, "R₀ > 1")?;
        require(r.is_finite() && r >= r0, "R", r, &format!("R >= R₀ = {r0}"))?;
        Ok(Self {
            eps0,
            l0,
            r0,
            r,
            lambda1,
        })
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    /// `σₙ = (2R₀R^{n−1}λ₁)^{1/2}` for `n ≥ 1`.
    pub fn sigma(&self, n: u32) -> f64 {
        assert!(n >= 1, "σ is indexed from 1");
        (2.0 * self.r0 * self.r.powi(n as i32 - 1) * self.lambda1).sqrt()
    }

    /// Smallest `n ≥ 1` with `σₙ ≥ 1` and `R^{n−1} ≥ 2R₀λ₁`.
    pub fn n0(&self) -> u32 {
        (1..)
            .find(|&n| {
                self.sigma(n) >= 1.0 && self.r.powi(n as i32 - 1) >= 2.0 * self.r0 * self.lambda1
            })
            .expect("R > 1 makes both conditions eventually true")
    }

    /// The `n` with `σₙ ≤ c < σ_{n+1}`, if `c ≥ σ₁`.
    pub fn bracket(&self, c: f64) -> Option<u32> {
        if !(c >= self.sigma(1)) {
            return None;
        }
        let mut n = 1;
        while self.sigma(n + 1) <= c {
            n += 1;
        }
        Some(n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegimeBound {
    pub estimate: BoundEstimate,
    /// `n` with `σₙ ≤ c < σ_{n+1}`.
    pub bracket: u32,
}

/// `(1/2)·(log₂ c)^{1/2} / (c·(log₂ R)^{1/2})`, valid for `c ≥ σ_{n₀}`.
pub fn log_regime_bound(params: &LogRegimeParams, c: f64) -> Result<LogRegimeBound> {
    let floor = params.sigma(params.n0());
    if !(c.is_finite() && c >= floor) {
        return Err(Error::InvalidParameter {
            name: "c",
            value: c,
            constraint: format!("c >= σ_n0 = {floor}"),
        });
    }
    let value = 0.5 * c.log2().sqrt() / (c * params.r.log2().sqrt());
    Ok(LogRegimeBound {
        estimate: BoundEstimate::new(
            value,
            BoundKind::GuaranteedLower,
            format!("logarithmic regime, R = {}", params.r),
        ),
        bracket: params.bracket(c).expect("c >= σ_n0 >= σ_1"),
    })
}

/// `λ_k = (k/γ)^{2/d}` for `k = 1..=count`, inverting `N(λ) = γ λ^{d/2}`.
pub fn weyl_spectrum(d: u32, gamma: f64, count: usize) -> Result<SpectrumModel> {
    require(d >= 1, "d", d as f64, "d >= 1")?;
    require(gamma.is_finite() && gamma > 0.0, "gamma", gamma, "γ > 0")?;
    require(count >= 1, "count", count as f64, "N >= 1")?;
    let exponent = 2.0 / d as f64;
    let eigenvalues = (1..=count)
        .map(|k| match d {
            // Exact in the common cases.
            1 => (k as f64 / gamma).powi(2),
            2 => k as f64 / gamma,
            _ => (k as f64 / gamma).powf(exponent),
        })
        .collect();
    SpectrumModel::new(eigenvalues, Dimension::TruncatedInfinite)
}

/// Greedy chain of 0-based indices starting at the first eigenvalue: each
/// step takes the smallest later index whose ratio to the last selected
/// eigenvalue lies in `[r_lo, r_hi]`, and stops when the first eigenvalue
/// reaching `r_lo` overshoots `r_hi`.
pub fn ratio_subsequence(spec: &SpectrumModel, r_lo: f64, r_hi: f64) -> Result<Vec<usize>> {
    require(r_lo > 1.0, "r_lo", r_lo, "r_lo > 1")?;
    require(r_hi >= r_lo, "r_hi", r_hi, "r_hi >= r_lo")?;
    let e = spec.eigenvalues();
    let mut chain = vec![0usize];
    let mut j = 1;
    loop {
        let last = e[*chain.last().unwrap()];
        while j < e.len() && e[j] < r_lo * last {
            j += 1;
        }
        if j == e.len() || e[j] > r_hi * last {
            break;
        }
        chain.push(j);
        j += 1;
    }
    Ok(chain)
}
