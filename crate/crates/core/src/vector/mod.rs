//! Bounds for `u'' + c u' + A u = f` with `A` self-adjoint and coercive,
//! modelled by its eigenvalues.
//!
//! Upper bounds come from splitting the spectrum into dyadic blocks, each
//! handled by the bounded-operator estimate. Lower bounds come from the
//! n-mode construction in [`crate::signal::ExtremalConstruction`], evaluated
//! exactly.

mod construction;
mod io;
mod jacobi;
mod log_regime;
mod witness;

pub use construction::{evaluate_construction, guaranteed_lower_bound, ConstructionEvaluation};
pub use io::{parse_matrix, parse_spectrum, read_matrix, read_spectrum};
pub use jacobi::{symmetric_eigenvalues, symmetric_eigenvalues_with_cap, DEFAULT_DIMENSION_CAP};
pub use log_regime::{
    log_regime_bound, ratio_subsequence, weyl_spectrum, LogRegimeBound, LogRegimeParams,
};
pub use witness::{nonmonotonicity_witness, nonmonotonicity_witness_with, WitnessConfig, WitnessReport};

use crate::error::{require, Error, Result};
use crate::estimate::{BoundEstimate, BoundKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Finite(usize),
    /// The leading eigenvalues of an operator with infinitely many.
    TruncatedInfinite,
}

/// Nondecreasing positive eigenvalues `λ₁ ≤ … ≤ λ_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumModel {
    eigenvalues: Vec<f64>,
    dimension: Dimension,
}

impl SpectrumModel {
    pub fn new(eigenvalues: Vec<f64>, dimension: Dimension) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Precondition("spectrum needs at least one eigenvalue".into()));
        }
        if let Some(&bad) = eigenvalues.iter().find(|&&l| !(l.is_finite() && l > 0.0)) {
            return Err(Error::NonPositiveEigenvalue { value: bad });
        }
        if let Some(w) = eigenvalues.windows(2).find(|w| w[1] < w[0]) {
            return Err(Error::Precondition(format!(
                "eigenvalues must be nondecreasing ({} then {})",
                w[0], w[1]
            )));
        }
        if let Dimension::Finite(d) = dimension {
            if d != eigenvalues.len() {
                return Err(Error::Precondition(format!(
                    "dimension {d} but {} eigenvalues",
                    eigenvalues.len()
                )));
            }
        }
        Ok(Self {
            eigenvalues,
            dimension,
        })
    }

    /// Finite-dimensional operator with exactly these eigenvalues.
    pub fn finite(eigenvalues: Vec<f64>) -> Result<Self> {
        let d = eigenvalues.len();
        Self::new(eigenvalues, Dimension::Finite(d))
    }

    pub fn truncated(eigenvalues: Vec<f64>) -> Result<Self> {
        Self::new(eigenvalues, Dimension::TruncatedInfinite)
    }

    /// `first·ratio^k` for `k = 0..count`.
    pub fn geometric(first: f64, ratio: f64, count: usize) -> Result<Self> {
        require(ratio >= 1.0, "ratio", ratio, "ratio >= 1")?;
        Self::truncated((0..count).map(|k| first * ratio.powi(k as i32)).collect())
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    /// Coercivity constant `λ₁`.
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// The eigenvalues at `indices`, as a finite spectrum.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        Self::finite(indices.iter().map(|&i| self.eigenvalues[i]).collect())
    }
}

/// `4/c` if `c² ≤ 4λ₁`, else `(4/c)·√(log₂(c²/λ₁))`; valid for any coercive
/// self-adjoint `A`.
pub fn upper_bound_general(spec: &SpectrumModel, c: f64) -> Result<BoundEstimate> {
    require(c.is_finite() && c > 0.0, "c", c, "c > 0")?;
    let l1 = spec.lambda_min();
    let est = if c * c <= 4.0 * l1 {
        BoundEstimate::new(4.0 / c, BoundKind::GuaranteedUpper, "general upper bound, 4/c branch")
    } else {
        BoundEstimate::new(
            4.0 / c * (c * c / l1).log2().sqrt(),
            BoundKind::GuaranteedUpper,
            "general upper bound, (4/c)·sqrt(log2(c²/λ₁)) branch",
        )
    };
    Ok(est)
}

/// `2√d/c`, a strict upper bound in dimension `d`.
pub fn upper_bound_finite_dim(d: usize, c: f64) -> Result<BoundEstimate> {
    require(d >= 1, "d", d as f64, "d >= 1")?;
    require(c.is_finite() && c > 0.0, "c", c, "c > 0")?;
    Ok(BoundEstimate::new(
        2.0 * (d as f64).sqrt() / c,
        BoundKind::GuaranteedUpper,
        "finite-dimensional upper bound 2·sqrt(d)/c",
    ))
}

/// `(1 + √(3M/m))/c` for `m ≤ A ≤ M` in the non-oscillatory regime
/// `c² ≥ 4m`.
pub fn mm_bound(m: f64, big_m: f64, c: f64) -> Result<BoundEstimate> {
    require(m.is_finite() && m > 0.0, "m", m, "m > 0")?;
    require(big_m.is_finite() && big_m >= m, "M", big_m, "M >= m")?;
    require(c.is_finite() && c > 0.0, "c", c, "c > 0")?;
    if c * c < 4.0 * m * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter {
            name: "c",
            value: c,
            constraint: format!("c² >= 4m = {}", 4.0 * m),
        });
    }
    Ok(BoundEstimate::new(
        (1.0 + (3.0 * big_m / m).sqrt()) / c,
        BoundKind::GuaranteedUpper,
        "bounded-operator estimate (1 + sqrt(3M/m))/c",
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockIndex {
    Dyadic(u32),
    Tail,
}

/// Eigenvalues in `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionBlock {
    pub index: BlockIndex,
    pub lo: f64,
    pub hi: f64,
    /// Indices into the spectrum.
    pub members: Vec<usize>,
}

/// Splits `[λ₁, ∞)` into `I_j = [2^j λ₁, 2^{j+1} λ₁)` for `j = 0..=k` and a
/// tail `[2^{k+1} λ₁, ∞)`, where `2^k < c²/(4λ₁) ≤ 2^{k+1}`. When
/// `c² ≤ 4λ₁` the tail block alone covers the spectrum.
pub fn dyadic_partition(spec: &SpectrumModel, c: f64) -> Result<Vec<PartitionBlock>> {
    require(c.is_finite() && c > 0.0, "c", c, "c > 0")?;
    let l1 = spec.lambda_min();
    let x = c * c / (4.0 * l1);
    let mut blocks = Vec::new();
    let tail_lo = if x <= 1.0 {
        l1
    } else {
        let k = dyadic_level(x);
        for j in 0..=k {
            blocks.push(PartitionBlock {
                index: BlockIndex::Dyadic(j),
                lo: l1 * 2f64.powi(j as i32),
                hi: l1 * 2f64.powi(j as i32 + 1),
                members: Vec::new(),
            });
        }
        l1 * 2f64.powi(k as i32 + 1)
    };
    blocks.push(PartitionBlock {
        index: BlockIndex::Tail,
        lo: tail_lo,
        hi: f64::INFINITY,
        members: Vec::new(),
    });
    for (i, &l) in spec.eigenvalues().iter().enumerate() {
        let block = blocks
            .iter_mut()
            .find(|b| l >= b.lo && l < b.hi)
            .expect("blocks cover [λ₁, ∞)");
        block.members.push(i);
    }
    Ok(blocks)
}

/// The `k ≥ 0` with `2^k < x ≤ 2^{k+1}`, for `x > 1`.
pub(crate) fn dyadic_level(x: f64) -> u32 {
    debug_assert!(x > 1.0);
    let mut k = (x.log2().ceil() as i64 - 1).max(0) as u32;
    // Fix up rounding in log2 near powers of two.
    while 2f64.powi(k as i32 + 1) < x {
        k += 1;
    }
    while k > 0 && 2f64.powi(k as i32) >= x {
        k -= 1;
    }
    k
}
