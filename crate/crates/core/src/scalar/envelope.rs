use super::{classify_regime, Regime, RegimeData, Roots, ScalarParams, CRITICAL_TOLERANCE};

/// Relative reduction of the critical decay rate that absorbs the `t e^{−ct/2}`
/// factor into an exponential.
pub const CRITICAL_RATE_MARGIN: f64 = 1e-3;

const SAFETY_FACTOR: f64 = 1.1;
const SAMPLES: usize = 4096;

/// Exponential majorant `‖S(t)‖ ≤ constant · e^{−rate·t}` of the companion
/// semigroup in the Euclidean norm on `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayEnvelope {
    pub rate: f64,
    pub constant: f64,
}

/// Rate from the slow root; constant fitted by sampling `‖S(t)‖ e^{rate·t}`
/// and inflating the maximum by 10%.
pub fn decay_envelope(p: ScalarParams) -> DecayEnvelope {
    let r = classify_regime(p, CRITICAL_TOLERANCE);
    let rate = match r.roots {
        Roots::Real { beta, .. } => beta,
        Roots::Double { rate } => rate * (1.0 - CRITICAL_RATE_MARGIN),
        Roots::Complex { gamma, .. } => gamma,
    };
    let weighted = |t: f64| spectral_norm(r.propagator(t)) * (rate * t).exp();

    let mut peak = 1.0f64;
    match r.regime {
        Regime::Oscillatory => {
            // e^{γt} S(t) is a rotation-like matrix function with period 2π/ω.
            let (_, omega) = r.gamma_omega().unwrap();
            let period = 2.0 * std::f64::consts::PI / omega;
            for i in 0..=SAMPLES {
                peak = peak.max(weighted(period * i as f64 / SAMPLES as f64));
            }
        }
        _ => {
            for t in sample_grid(&r, rate) {
                peak = peak.max(weighted(t));
            }
        }
    }
    DecayEnvelope {
        rate,
        constant: SAFETY_FACTOR * peak,
    }
}

/// Geometric grid from the fast time scale out to where the weighted norm has
/// settled (non-oscillatory) or peaked (critical: maximum near 1/(c·margin)).
fn sample_grid(r: &RegimeData, rate: f64) -> Vec<f64> {
    let (fast, gap) = match r.roots {
        Roots::Real { alpha, beta } => (alpha, alpha - beta),
        Roots::Double { rate: full } => (full, full - rate),
        Roots::Complex { .. } => unreachable!(),
    };
    let t_min = 1e-3 / fast;
    let t_max = 50.0 / rate + 50.0 / gap;
    let ratio = (t_max / t_min).powf(1.0 / SAMPLES as f64);
    let mut grid = Vec::with_capacity(SAMPLES + 2);
    grid.push(0.0);
    let mut t = t_min;
    for _ in 0..=SAMPLES {
        grid.push(t);
        t *= ratio;
    }
    grid
}

/// Largest singular value of a 2×2 matrix.
pub(crate) fn spectral_norm(m: [[f64; 2]; 2]) -> f64 {
    let [[a, b], [c, d]] = m;
    let fro2 = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    (0.5 * (fro2 + disc)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn envelope(b: f64, c: f64) -> DecayEnvelope {
        decay_envelope(ScalarParams::new(b, c).unwrap())
    }

    #[test]
    fn rates_follow_slow_root() {
        assert!((envelope(2.0, 3.0).rate - 1.0).abs() < 1e-15);
        assert_eq!(envelope(2.0, 2.0).rate, 1.0);
        assert!((envelope(1.0, 2.0).rate - (1.0 - 1e-3)).abs() < 1e-15);
    }

    #[test]
    fn constant_dominates_sampled_norms() {
        for &(b, c) in &[(2.0, 3.0), (1.0, 2.0), (2.0, 2.0), (100.0, 0.1), (1e-3, 10.0)] {
            let p = ScalarParams::new(b, c).unwrap();
            let env = decay_envelope(p);
            assert!(env.constant >= 1.0);
            let r = classify_regime(p, CRITICAL_TOLERANCE);
            // Off-grid check, including times past the fitted window.
            for i in 0..5000 {
                let t = 0.013 * i as f64 * (1.0 + 1.0 / env.rate);
                let n = spectral_norm(r.propagator(t));
                assert!(n <= env.constant * (-env.rate * t).exp() * (1.0 + 1e-12), "({b},{c}) t={t}");
            }
        }
    }

    #[test]
    fn spectral_norm_known_matrices() {
        assert!((spectral_norm([[3.0, 0.0], [0.0, -5.0]]) - 5.0).abs() < 1e-15);
        assert!((spectral_norm([[1.0, 1.0], [0.0, 1.0]]) - (1.5 + 1.25f64.sqrt()).sqrt()).abs() < 1e-15);
    }
}
