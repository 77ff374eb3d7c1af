use super::{check_channels, Method, ModalState, Trajectory};
use crate::error::{require, Result};
use crate::signal::ForcingSignal;

/// Forcing as seen by the RK4 integrator.
///
/// The mesh is split at `breakpoints`, and on each resulting piece the forcing
/// must be smooth. `sample` is told which piece the step belongs to, so that
/// piecewise-constant signals return the piece value even at its endpoints.
pub trait Forcing {
    fn channels(&self) -> usize;

    /// Writes `f(t)` into `out`, for `t` in the piece `[lo, hi]`.
    fn sample(&self, t: f64, lo: f64, hi: f64, out: &mut [f64]);

    /// Points in `(lo, hi)` where the forcing may be non-smooth, increasing.
    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64>;
}

impl Forcing for ForcingSignal {
    fn channels(&self) -> usize {
        ForcingSignal::channels(self)
    }

    fn sample(&self, _t: f64, lo: f64, hi: f64, out: &mut [f64]) {
        out.copy_from_slice(self.value_at(0.5 * (lo + hi)));
    }

    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let pieces = self.pieces(lo, hi);
        pieces[..pieces.len().saturating_sub(1)].iter().map(|p| p.end).collect()
    }
}

/// Smooth forcing given by a closure `(t, out)`.
pub struct FnForcing<F> {
    channels: usize,
    f: F,
}

impl<F: Fn(f64, &mut [f64])> FnForcing<F> {
    pub fn new(channels: usize, f: F) -> Self {
        Self { channels, f }
    }
}

impl<F: Fn(f64, &mut [f64])> Forcing for FnForcing<F> {
    fn channels(&self) -> usize {
        self.channels
    }

    fn sample(&self, t: f64, _lo: f64, _hi: f64, out: &mut [f64]) {
        (self.f)(t, out)
    }

    fn breakpoints(&self, _lo: f64, _hi: f64) -> Vec<f64> {
        Vec::new()
    }
}

/// Classical fourth-order Runge-Kutta on the first-order modal system. The
/// mesh includes every forcing breakpoint; between breakpoints the step is
/// the largest value not exceeding `dt` that divides the piece evenly.
pub fn evolve_rk4(
    spectrum: &[f64],
    c: f64,
    f: &dyn Forcing,
    initial: &ModalState,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    require(dt.is_finite() && dt > 0.0, "dt", dt, "dt > 0")?;
    require(c.is_finite() && c > 0.0, "c", c, "c > 0")?;
    require(t_end.is_finite() && t_end >= initial.t, "t_end", t_end, "t_end >= initial time")?;
    check_channels(spectrum.len(), f.channels())?;
    check_channels(spectrum.len(), initial.modes())?;

    let n = spectrum.len();
    let mut traj = Trajectory::start(Method::Rk4 { dt }, spectrum, c, initial);
    let mut u = initial.u.clone();
    let mut v = initial.v.clone();

    let mut knots = vec![initial.t];
    knots.extend(f.breakpoints(initial.t, t_end));
    if t_end > initial.t {
        knots.push(t_end);
    }

    let mut f0 = vec![0.0; n];
    let mut fh = vec![0.0; n];
    let mut f1 = vec![0.0; n];
    let accel = |u: f64, v: f64, i: usize, force: f64| force - c * v - spectrum[i] * u;

    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let steps = ((hi - lo) / dt).ceil().max(1.0) as usize;
        let h = (hi - lo) / steps as f64;
        for j in 0..steps {
            let t = lo + j as f64 * h;
            let t_next = if j + 1 == steps { hi } else { lo + (j + 1) as f64 * h };
            f.sample(t, lo, hi, &mut f0);
            f.sample(t + 0.5 * h, lo, hi, &mut fh);
            f.sample(t_next, lo, hi, &mut f1);
            for i in 0..n {
                let (x, y) = (u[i], v[i]);
                let k1u = y;
                let k1v = accel(x, y, i, f0[i]);
                let k2u = y + 0.5 * h * k1v;
                let k2v = accel(x + 0.5 * h * k1u, y + 0.5 * h * k1v, i, fh[i]);
                let k3u = y + 0.5 * h * k2v;
                let k3v = accel(x + 0.5 * h * k2u, y + 0.5 * h * k2v, i, fh[i]);
                let k4u = y + h * k3v;
                let k4v = accel(x + h * k3u, y + h * k3v, i, f1[i]);
                u[i] = x + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
                v[i] = y + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            }
            traj.push(t_next, &u, &v, None);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::super::evolve_exact;
    use super::*;
    use crate::scalar::{classify_regime, ScalarParams, CRITICAL_TOLERANCE};
    use crate::signal::extremal_scalar_forcing;

    fn max_gap(a: &Trajectory, b: &ModalState) -> f64 {
        let end = a.final_state();
        (end.u[0] - b.u[0]).abs().max((end.v[0] - b.v[0]).abs())
    }

    #[test]
    fn matches_exact_under_constant_forcing() {
        let f = ForcingSignal::constant(vec![1.0]).unwrap();
        let init = ModalState::zero(1, 0.0);
        for &(b, c) in &[(2.0, 3.0), (1.0, 2.0), (2.0, 2.0)] {
            let exact = evolve_exact(&[b], c, &f, &init, 5.0).unwrap().final_state();
            let rk = evolve_rk4(&[b], c, &f, &init, 5.0, 1e-3).unwrap();
            assert!(max_gap(&rk, &exact) <= 1e-9, "({b},{c})");
        }
    }

    #[test]
    fn fourth_order_on_smooth_forcing() {
        // Reference from a much finer RK4 run.
        let f = FnForcing::new(1, |t: f64, out: &mut [f64]| out[0] = (1.3 * t).sin());
        let init = ModalState::new(0.0, vec![0.2], vec![-0.1]).unwrap();
        let fine = evolve_rk4(&[2.0], 0.5, &f, &init, 4.0, 1e-4).unwrap().final_state();
        let e1 = max_gap(&evolve_rk4(&[2.0], 0.5, &f, &init, 4.0, 0.02).unwrap(), &fine);
        let e2 = max_gap(&evolve_rk4(&[2.0], 0.5, &f, &init, 4.0, 0.01).unwrap(), &fine);
        let ratio = e1 / e2;
        assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn piecewise_forcing_keeps_fourth_order() {
        let r = classify_regime(ScalarParams::new(2.0, 2.0).unwrap(), CRITICAL_TOLERANCE);
        let f = extremal_scalar_forcing(&r, 8.0).unwrap().shifted(8.0);
        let init = ModalState::zero(1, 0.0);
        let exact = evolve_exact(&[2.0], 2.0, &f, &init, 9.0).unwrap().final_state();
        let e1 = max_gap(&evolve_rk4(&[2.0], 2.0, &f, &init, 9.0, 0.02).unwrap(), &exact);
        let e2 = max_gap(&evolve_rk4(&[2.0], 2.0, &f, &init, 9.0, 0.01).unwrap(), &exact);
        assert!(e2 < 1e-8);
        assert!((12.0..20.0).contains(&(e1 / e2)), "ratio {}", e1 / e2);
    }

    #[test]
    fn zero_stays_zero() {
        let f = ForcingSignal::zero(2).unwrap();
        let rk = evolve_rk4(&[1.0, 3.0], 1.0, &f, &ModalState::zero(2, 0.0), 3.0, 0.1).unwrap();
        for k in 0..rk.len() {
            assert_eq!(rk.u_at(k), &[0.0, 0.0]);
            assert_eq!(rk.v_at(k), &[0.0, 0.0]);
        }
    }
}
