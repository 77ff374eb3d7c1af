use std::fmt;

/// How a bound value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    ExactClosedForm,
    QuadratureOracle,
    GuaranteedUpper,
    GuaranteedLower,
    Empirical,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::ExactClosedForm => "exact",
            BoundKind::QuadratureOracle => "quadrature",
            BoundKind::GuaranteedUpper => "upper",
            BoundKind::GuaranteedLower => "lower",
            BoundKind::Empirical => "empirical",
        }
    }
}

/// A nonnegative bound constant together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEstimate {
    pub value: f64,
    pub kind: BoundKind,
    pub provenance: String,
    /// Absolute error bound, when one is known.
    pub tolerance: Option<f64>,
}

impl BoundEstimate {
    pub fn new(value: f64, kind: BoundKind, provenance: impl Into<String>) -> Self {
        debug_assert!(value >= 0.0, "bound values are nonnegative, got {value}");
        Self {
            value,
            kind,
            provenance: provenance.into(),
            tolerance: None,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        debug_assert!(tolerance >= 0.0);
        self.tolerance = Some(tolerance);
        self
    }
}

impl fmt::Display for BoundEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12} [{}; {}]", self.value, self.kind.as_str(), self.provenance)?;
        if let Some(tol) = self.tolerance {
            write!(f, " ±{tol:.1e}")?;
        }
        Ok(())
    }
}
