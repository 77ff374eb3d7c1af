use crate::error::Result;
use crate::estimate::{BoundEstimate, BoundKind};
use crate::signal::ExtremalConstruction;

/// Exact velocities at time 0 of the bounded solution driven by the
/// construction forcing.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionEvaluation {
    pub c: f64,
    pub per_mode_v0: Vec<f64>,
    /// Euclidean norm of `per_mode_v0`, a lower bound for `K(A, c)`.
    pub norm_v0: f64,
}

/// `(e^{−ε} − 2e^{−L})·√(n + 3)/c`.
pub fn guaranteed_lower_bound(con: &ExtremalConstruction, c: f64) -> Result<BoundEstimate> {
    let bound = con.with_damping(c)?;
    Ok(BoundEstimate::new(
        bound.guaranteed_gain() / c,
        BoundKind::GuaranteedLower,
        format!("n-mode construction, n = {}", con.n()),
    ))
}

/// Per-mode `u_i'(0)` from the explicit two-exponential expressions.
///
/// Writing `E_i(T) = e^{−β_i T} − e^{−α_i T}`, mode `i < n` receives
/// `(E_i(T_i) − E_i(T_{i−1}))/√(c² − 4λ_i)` and mode `n` receives
/// `(2E_n(T_n) − E_n(T_{n−1}))/√(c² − 4λ_n)`, with `E(∞) = 0`.
pub fn evaluate_construction(con: &ExtremalConstruction, c: f64) -> Result<ConstructionEvaluation> {
    let bound = con.with_damping(c)?;
    let n = bound.n();
    let times = bound.switch_times();
    let per_mode_v0: Vec<f64> = bound
        .modes()
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let sq = c.mul_add(c, -4.0 * l).sqrt();
            let alpha = 0.5 * (c + sq);
            let beta = l / alpha;
            let e = |t: f64| (-beta * t).exp() - (-alpha * t).exp();
            let prev = if i == 0 { 0.0 } else { e(times[i - 1]) };
            let here = e(times[i]);
            let weight = if i + 1 == n { 2.0 } else { 1.0 };
            (weight * here - prev) / sq
        })
        .collect();
    let norm_v0 = crate::signal::euclidean_norm(&per_mode_v0);
    Ok(ConstructionEvaluation {
        c,
        per_mode_v0,
        norm_v0,
    })
}
