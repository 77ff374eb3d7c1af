use super::exact::step;
use super::{mode_regimes, Method, Trajectory};
use crate::error::{Error, Result};
use crate::signal::euclidean_norm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    /// `‖u'‖`
    Velocity,
    /// `‖u‖`
    Position,
    /// `(Σ λ_i u_i² + ‖u'‖²)^{1/2}`
    Energy,
}

impl Functional {
    pub fn as_str(self) -> &'static str {
        match self {
            Functional::Velocity => "velocity",
            Functional::Position => "position",
            Functional::Energy => "energy",
        }
    }

    fn eval(self, spectrum: &[f64], u: &[f64], v: &[f64]) -> f64 {
        match self {
            Functional::Velocity => euclidean_norm(v),
            Functional::Position => euclidean_norm(u),
            Functional::Energy => spectrum
                .iter()
                .zip(u.iter().zip(v))
                .map(|(l, (u, v))| l * u * u + v * v)
                .sum::<f64>()
                .sqrt(),
        }
    }
}

/// `sup_{t ≥ burn_in} p(U(t))` over the trajectory.
///
/// On exact trajectories the velocity and position functionals also visit
/// every interior critical point of each mode's closed-form solution between
/// samples. For a single mode this makes the supremum exact; with several
/// modes the norm is evaluated at the union of per-mode critical points. The
/// energy functional uses the samples only.
pub fn ultimate_sup_estimator(traj: &Trajectory, burn_in: f64, functional: Functional) -> Result<f64> {
    let times = traj.times();
    let first = times.partition_point(|&t| t < burn_in);
    let spectrum = traj.spectrum();
    let crosses = first > 0 && first < times.len() && times[first] > burn_in;
    if first == times.len() {
        return Err(Error::EmptyWindow { burn_in });
    }

    let mut best = (first..times.len())
        .map(|k| functional.eval(spectrum, traj.u_at(k), traj.v_at(k)))
        .fold(0.0, f64::max);

    if traj.method() != Method::ExactPiecewise || functional == Functional::Energy {
        return Ok(best);
    }

    let regimes = mode_regimes(spectrum, traj.damping())?;
    let n = spectrum.len();
    let mut u = vec![0.0; n];
    let mut v = vec![0.0; n];
    let start = if crosses { first - 1 } else { first };
    for k in start..times.len() - 1 {
        let phi = traj.interval_forcing(k).expect("exact trajectories record forcing");
        let (uk, vk) = (traj.u_at(k), traj.v_at(k));
        let dt = times[k + 1] - times[k];
        let offset = (burn_in - times[k]).max(0.0);

        let mut candidates = Vec::new();
        if offset > 0.0 {
            candidates.push(offset);
        }
        for (i, r) in regimes.iter().enumerate() {
            // Free part w = u − φ/λ; then v(τ) = p g(τ) + q G(τ).
            let lambda = r.stiffness();
            let p = vk[i];
            let q = -lambda * (uk[i] - phi[i] / lambda);
            let zeros = match functional {
                // v' = (q − c p) g − λ p G
                Functional::Velocity => r.combination_zeros(q - r.params.c() * p, -lambda * p, dt),
                Functional::Position => r.combination_zeros(p, q, dt),
                Functional::Energy => unreachable!(),
            };
            candidates.extend(zeros.into_iter().filter(|&s| s >= offset && s < dt));
        }
        for tau in candidates {
            for (i, r) in regimes.iter().enumerate() {
                (u[i], v[i]) = step(r, uk[i], vk[i], phi[i], tau);
            }
            best = best.max(functional.eval(spectrum, &u, &v));
        }
    }
    Ok(best)
}
