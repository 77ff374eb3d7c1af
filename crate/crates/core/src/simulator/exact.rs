use super::{check_channels, mode_regimes, Method, ModalState, Trajectory};
use crate::error::{require, Error, Result};
use crate::quadrature::Neumaier;
use crate::scalar::{spectral_norm, RegimeData};
use crate::signal::ForcingSignal;

/// Condition number of `I − M_T` above which the periodic problem is
/// reported as ill-conditioned.
pub const MAX_CONDITION: f64 = 1e12;

/// Advances one mode across a segment of constant forcing `phi`:
/// `(u − φ/λ, v)` evolves by the free propagator.
pub(crate) fn step(r: &RegimeData, u: f64, v: f64, phi: f64, dt: f64) -> (f64, f64) {
    let rest = phi / r.stiffness();
    let w = u - rest;
    let m = r.propagator(dt);
    (m[0][0] * w + m[0][1] * v + rest, m[1][0] * w + m[1][1] * v)
}

/// Initial-value evolution from `initial.t` to `t_end`, sampled at every
/// forcing breakpoint in between.
pub fn evolve_exact(
    spectrum: &[f64],
    c: f64,
    f: &ForcingSignal,
    initial: &ModalState,
    t_end: f64,
) -> Result<Trajectory> {
    evolve_exact_sampled(spectrum, c, f, initial, t_end, f64::INFINITY)
}

/// As [`evolve_exact`], with extra samples so that no sample interval
/// exceeds `max_step`.
pub fn evolve_exact_sampled(
    spectrum: &[f64],
    c: f64,
    f: &ForcingSignal,
    initial: &ModalState,
    t_end: f64,
    max_step: f64,
) -> Result<Trajectory> {
    let regimes = mode_regimes(spectrum, c)?;
    check_channels(spectrum.len(), f.channels())?;
    check_channels(spectrum.len(), initial.modes())?;
    require(t_end.is_finite() && t_end >= initial.t, "t_end", t_end, "t_end >= initial time")?;
    require(max_step > 0.0, "max_step", max_step, "max_step > 0")?;

    let n = spectrum.len();
    let mut traj = Trajectory::start(Method::ExactPiecewise, spectrum, c, initial);
    let mut u = initial.u.clone();
    let mut v = initial.v.clone();
    for piece in f.pieces(initial.t, t_end) {
        let len = piece.end - piece.start;
        let parts = if max_step.is_finite() { (len / max_step).ceil().max(1.0) as usize } else { 1 };
        for j in 1..=parts {
            // Sample times are computed from the piece start so they do not
            // drift within a long piece.
            let t = if j == parts { piece.end } else { piece.start + len * j as f64 / parts as f64 };
            let t_prev = *traj.times.last().unwrap();
            let dt = t - t_prev;
            for i in 0..n {
                (u[i], v[i]) = step(&regimes[i], u[i], v[i], piece.values[i], dt);
            }
            traj.push(t, &u, &v, Some(piece.values));
        }
    }
    Ok(traj)
}

/// State at time `t` of the unique globally bounded solution.
///
/// For aperiodic forcing each constant segment contributes
/// `φ·(G(s_b) − G(s_a))` to `u'` and `φ·(P(s_b) − P(s_a))` to `u`, where
/// `s` runs over the segment in lag time and `P` is the primitive of `G`.
/// Periodic forcing is delegated to [`periodic_solution`].
pub fn bounded_solution_at(spectrum: &[f64], c: f64, f: &ForcingSignal, t: f64) -> Result<ModalState> {
    let regimes = mode_regimes(spectrum, c)?;
    check_channels(spectrum.len(), f.channels())?;
    require(t.is_finite(), "t", t, "finite time")?;

    if let Some(period) = f.period() {
        let sol = periodic_solution(spectrum, c, f)?;
        let phase = t - (t / period).floor() * period;
        let traj = evolve_exact(spectrum, c, f, &sol.state, phase)?;
        let mut state = traj.final_state();
        state.t = t;
        return Ok(state);
    }

    let n = spectrum.len();
    let mut u = vec![Neumaier::default(); n];
    let mut v = vec![Neumaier::default(); n];
    for k in 0..f.segment_count() {
        let (a, b) = f.segment_bounds(k);
        if a >= t {
            break;
        }
        let s_lo = (t - b).max(0.0);
        let s_hi = t - a;
        for (i, r) in regimes.iter().enumerate() {
            let phi = f.segment_values(k)[i];
            if phi == 0.0 {
                continue;
            }
            let g_hi = if s_hi.is_finite() { r.position_kernel(s_hi) } else { 0.0 };
            v[i].add(phi * (g_hi - r.position_kernel(s_lo)));
            u[i].add(phi * (r.position_primitive(s_hi) - r.position_primitive(s_lo)));
        }
    }
    Ok(ModalState {
        t,
        u: u.iter().map(Neumaier::sum).collect(),
        v: v.iter().map(Neumaier::sum).collect(),
    })
}

/// [`bounded_solution_at`] at `t = 0`.
pub fn bounded_solution_at_zero(spectrum: &[f64], c: f64, f: &ForcingSignal) -> Result<ModalState> {
    bounded_solution_at(spectrum, c, f, 0.0)
}

#[derive(Debug, Clone)]
pub struct PeriodicSolution {
    /// `U(0)`.
    pub state: ModalState,
    /// One period `[0, T]` started from `U(0)`.
    pub trajectory: Trajectory,
    /// Largest condition number of `I − M_T` over the modes.
    pub condition: f64,
}

/// Periodic solution under periodic forcing: per mode, solves
/// `U(0) = M_T U(0) + D_T` with the monodromy `M_T` and the one-period
/// response `D_T` of the zero state.
pub fn periodic_solution(spectrum: &[f64], c: f64, f: &ForcingSignal) -> Result<PeriodicSolution> {
    let regimes = mode_regimes(spectrum, c)?;
    check_channels(spectrum.len(), f.channels())?;
    let period = f
        .period()
        .ok_or_else(|| Error::Precondition("periodic_solution needs a periodic signal".into()))?;

    let n = spectrum.len();
    let pieces = f.pieces(0.0, period);
    let mut u0 = vec![0.0; n];
    let mut v0 = vec![0.0; n];
    let mut worst = 1.0f64;
    for (i, r) in regimes.iter().enumerate() {
        let (mut du, mut dv) = (0.0, 0.0);
        for p in &pieces {
            (du, dv) = step(r, du, dv, p.values[i], p.end - p.start);
        }
        let m = r.propagator(period);
        let a = [[1.0 - m[0][0], -m[0][1]], [-m[1][0], 1.0 - m[1][1]]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
        let condition = spectral_norm(a) * spectral_norm(inv);
        if !(condition <= MAX_CONDITION) {
            return Err(Error::IllConditioned { condition });
        }
        worst = worst.max(condition);
        u0[i] = inv[0][0] * du + inv[0][1] * dv;
        v0[i] = inv[1][0] * du + inv[1][1] * dv;
    }
    let state = ModalState { t: 0.0, u: u0, v: v0 };
    let trajectory = evolve_exact(spectrum, c, f, &state, period)?;
    Ok(PeriodicSolution {
        state,
        trajectory,
        condition: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{classify_regime, ScalarParams, CRITICAL_TOLERANCE};
    use crate::signal::{build_construction, extremal_scalar_forcing};

    #[test]
    fn free_decay_matches_closed_form() {
        let f = ForcingSignal::zero(1).unwrap();
        let init = ModalState::new(0.0, vec![1.0], vec![0.0]).unwrap();
        let traj = evolve_exact_sampled(&[2.0], 3.0, &f, &init, 5.0, 0.1).unwrap();
        for k in 0..traj.len() {
            let t = traj.times()[k];
            let u = 2.0 * (-t).exp() - (-2.0 * t).exp();
            let v = -2.0 * (-t).exp() + 2.0 * (-2.0 * t).exp();
            assert!((traj.u_at(k)[0] - u).abs() < 1e-14, "t={t}");
            assert!((traj.v_at(k)[0] - v).abs() < 1e-14, "t={t}");
        }
        assert_eq!(traj.len(), 51);
    }

    #[test]
    fn constant_forcing_settles_at_rest_point() {
        for &(b, c) in &[(2.0, 3.0), (1.0, 2.0), (4.0, 0.5)] {
            let f = ForcingSignal::constant(vec![1.0]).unwrap();
            let traj = evolve_exact(&[b], c, &f, &ModalState::zero(1, 0.0), 200.0).unwrap();
            let end = traj.final_state();
            assert!((end.u[0] - 1.0 / b).abs() < 1e-12);
            assert!(end.v[0].abs() < 1e-12);
        }
    }

    #[test]
    fn breakpoints_become_samples() {
        let r = classify_regime(ScalarParams::new(2.0, 2.0).unwrap(), CRITICAL_TOLERANCE);
        let f = extremal_scalar_forcing(&r, 10.0).unwrap().shifted(10.0);
        let traj = evolve_exact(&[2.0], 2.0, &f, &ModalState::zero(1, 0.0), 12.0).unwrap();
        for b in f.breakpoints() {
            assert!(traj.times().contains(b), "missing breakpoint {b}");
        }
        assert!(traj.times().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn duhamel_simulation_reaches_truncated_kernel_norm() {
        // v(10) from rest equals ∫₀^10 |g|, the bounded solution at 0 of the
        // unshifted signal.
        let r = classify_regime(ScalarParams::new(2.0, 3.0).unwrap(), CRITICAL_TOLERANCE);
        let f = extremal_scalar_forcing(&r, 10.0).unwrap();
        let traj = evolve_exact(&[2.0], 3.0, &f.shifted(10.0), &ModalState::zero(1, 0.0), 10.0)
            .unwrap();
        let at_zero = bounded_solution_at_zero(&[2.0], 3.0, &f).unwrap();
        let v = traj.final_state().v[0];
        assert!((v - at_zero.v[0]).abs() < 1e-14);
        // ∫₀^10 |g| = 0.5 − tail, with tail = ∫_10^∞ |g| = e^{-10} − e^{-20}.
        let expected = 0.5 - ((-10f64).exp() - (-20f64).exp());
        assert!((v - expected).abs() < 1e-14, "{v} vs {expected}");
    }

    #[test]
    fn bounded_solution_of_constant_forcing() {
        let f = ForcingSignal::constant(vec![2.0, -1.0]).unwrap();
        let s = bounded_solution_at(&[4.0, 0.5], 1.0, &f, 3.0).unwrap();
        assert!((s.u[0] - 0.5).abs() < 1e-15 && (s.u[1] + 2.0).abs() < 1e-15);
        assert!(s.v.iter().all(|v| v.abs() < 1e-15));
        let zero = bounded_solution_at_zero(&[4.0], 1.0, &ForcingSignal::zero(1).unwrap()).unwrap();
        assert_eq!(zero.u, vec![0.0]);
        assert_eq!(zero.v, vec![0.0]);
    }

    #[test]
    fn construction_velocities_by_duhamel() {
        let (con, f) = build_construction(1.0, 2.0, vec![4.0, 16.0, 64.0], 23.0).unwrap();
        let s = bounded_solution_at_zero(con.modes(), con.c(), &f).unwrap();
        let floor = con.margin() / con.c();
        for (i, v) in s.v.iter().enumerate() {
            let want = if i + 1 == con.n() { 2.0 * floor } else { floor };
            assert!(*v >= want, "mode {i}: {v} < {want}");
        }
    }

    #[test]
    fn periodic_solution_of_constant_and_zero() {
        let f = ForcingSignal::constant(vec![3.0]).unwrap().periodize(2.0).unwrap();
        let sol = periodic_solution(&[1.5], 0.7, &f).unwrap();
        assert!((sol.state.u[0] - 2.0).abs() < 1e-13);
        assert!(sol.state.v[0].abs() < 1e-13);

        let z = ForcingSignal::zero(1).unwrap().periodize(5.0).unwrap();
        let sol = periodic_solution(&[1.5], 0.7, &z).unwrap();
        assert_eq!(sol.state.u, vec![0.0]);
        assert_eq!(sol.state.v, vec![0.0]);
    }

    #[test]
    fn periodic_trajectory_closes() {
        for &(b, c, t) in &[(2.0, 3.0, 5.0), (1.0, 2.0, 3.0), (2.0, 2.0, 7.0), (50.0, 0.05, 9.0)] {
            let r = classify_regime(ScalarParams::new(b, c).unwrap(), CRITICAL_TOLERANCE);
            let f = extremal_scalar_forcing(&r, t).unwrap().periodize(t).unwrap();
            let sol = periodic_solution(&[b], c, &f).unwrap();
            let end = sol.trajectory.final_state();
            let scale = 1.0 + sol.state.u[0].hypot(sol.state.v[0]);
            let gap = (end.u[0] - sol.state.u[0]).hypot(end.v[0] - sol.state.v[0]);
            assert!(gap <= 1e-10 * scale, "({b},{c}) gap {gap}");
            assert!((end.t - t).abs() < 1e-15);
        }
    }

    #[test]
    fn periodic_forcing_bounded_solution_is_periodic_solution() {
        let f = ForcingSignal::periodic(vec![0.0, 1.0], vec![vec![1.0], vec![-0.5]], 2.5).unwrap();
        let s0 = bounded_solution_at(&[3.0], 0.4, &f, 0.0).unwrap();
        let s1 = bounded_solution_at(&[3.0], 0.4, &f, 2.5 * 4.0).unwrap();
        assert!((s0.v[0] - s1.v[0]).abs() < 1e-12);
        assert!((s0.u[0] - s1.u[0]).abs() < 1e-12);
    }

    #[test]
    fn mismatched_channels_rejected() {
        let f = ForcingSignal::zero(2).unwrap();
        let err = evolve_exact(&[1.0], 1.0, &f, &ModalState::zero(1, 0.0), 1.0).unwrap_err();
        assert!(matches!(err, Error::ChannelMismatch { expected: 1, found: 2 }));
        assert!(bounded_solution_at_zero(&[1.0], 1.0, &f).is_err());
    }
}
