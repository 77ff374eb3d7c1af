//! Piecewise-constant multichannel forcing.
//!
//! Segments are left-open and right-closed: a breakpoint belongs to the
//! segment that ends there. An aperiodic signal with breakpoints
//! `b₀ < … < b_{m−1}` has `m + 1` segments `(−∞, b₀], (b₀, b₁], …, (b_{m−1}, ∞)`.
//! A periodic signal stores breakpoints in `[b₀, b₀ + T)` and `m` segments
//! `(b_k, b_{k+1}]` with `b_m = b₀ + T`, repeated with period `T`.

mod construction;
mod io;

pub use construction::{build_construction, ExtremalConstruction};
pub use io::{read_signal, write_signal};

use crate::error::{require, Error, Result};
use crate::scalar::RegimeData;

#[derive(Debug, Clone, PartialEq)]
pub struct ForcingSignal {
    channels: usize,
    breakpoints: Vec<f64>,
    /// Row-major: `values[k * channels + j]` is channel `j` on segment `k`.
    values: Vec<f64>,
    period: Option<f64>,
}

/// One constant piece `(start, end]` of a signal restricted to a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece<'a> {
    pub start: f64,
    pub end: f64,
    pub values: &'a [f64],
}

impl ForcingSignal {
    /// Aperiodic signal; `segment_values` has one row per segment, i.e.
    /// `breakpoints.len() + 1` rows.
    pub fn aperiodic(breakpoints: Vec<f64>, segment_values: Vec<Vec<f64>>) -> Result<Self> {
        let channels = check_rows(&segment_values)?;
        check_breakpoints(&breakpoints)?;
        if segment_values.len() != breakpoints.len() + 1 {
            return Err(Error::Precondition(format!(
                "aperiodic signal with {} breakpoints needs {} segments, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                segment_values.len()
            )));
        }
        Ok(Self {
            channels,
            breakpoints,
            values: segment_values.concat(),
            period: None,
        })
    }

    /// Periodic signal with one row per breakpoint; all breakpoints must lie
    /// in `[b₀, b₀ + period)`.
    pub fn periodic(
        breakpoints: Vec<f64>,
        segment_values: Vec<Vec<f64>>,
        period: f64,
    ) -> Result<Self> {
        require(period.is_finite() && period > 0.0, "period", period, "T > 0")?;
        let channels = check_rows(&segment_values)?;
        check_breakpoints(&breakpoints)?;
        if breakpoints.is_empty() {
            return Err(Error::Precondition(
                "periodic signal needs at least one breakpoint".into(),
            ));
        }
        if segment_values.len() != breakpoints.len() {
            return Err(Error::Precondition(format!(
                "periodic signal with {} breakpoints needs as many segments, got {}",
                breakpoints.len(),
                segment_values.len()
            )));
        }
        let b0 = breakpoints[0];
        if *breakpoints.last().unwrap() >= b0 + period {
            return Err(Error::Precondition(format!(
                "breakpoints must span less than one period {period}"
            )));
        }
        Ok(Self {
            channels,
            breakpoints,
            values: segment_values.concat(),
            period: Some(period),
        })
    }

    /// Constant signal for all time.
    pub fn constant(values: Vec<f64>) -> Result<Self> {
        Self::aperiodic(Vec::new(), vec![values])
    }

    /// All-zero signal with `channels` channels.
    pub fn zero(channels: usize) -> Result<Self> {
        Self::constant(vec![0.0; channels])
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }

    pub fn segment_count(&self) -> usize {
        self.values.len() / self.channels
    }

    pub fn segment_values(&self, k: usize) -> &[f64] {
        &self.values[k * self.channels..(k + 1) * self.channels]
    }

    /// Bounds `(start, end]` of segment `k` within the stored period or line.
    pub fn segment_bounds(&self, k: usize) -> (f64, f64) {
        let m = self.breakpoints.len();
        match self.period {
            None => {
                let start = if k == 0 { f64::NEG_INFINITY } else { self.breakpoints[k - 1] };
                let end = if k == m { f64::INFINITY } else { self.breakpoints[k] };
                (start, end)
            }
            Some(period) => {
                let start = self.breakpoints[k];
                let end = if k + 1 == m { self.breakpoints[0] + period } else { self.breakpoints[k + 1] };
                (start, end)
            }
        }
    }

    /// Values of all channels at time `t`.
    pub fn value_at(&self, t: f64) -> &[f64] {
        let k = match self.period {
            None => self.breakpoints.partition_point(|&b| b < t),
            Some(period) => {
                let tau = self.reduce(t, period);
                self.breakpoints.partition_point(|&b| b < tau) - 1
            }
        };
        self.segment_values(k)
    }

    /// Maps `t` into `(b₀, b₀ + T]`.
    fn reduce(&self, t: f64, period: f64) -> f64 {
        let b0 = self.breakpoints[0];
        let shift = ((t - b0) / period).ceil() - 1.0;
        let mut tau = t - shift * period;
        // Guard against rounding at the window edges.
        if tau <= b0 {
            tau += period;
        } else if tau > b0 + period {
            tau -= period;
        }
        tau
    }

    /// `sup_t ‖f(t)‖` with the Euclidean norm across channels.
    pub fn sup_norm(&self) -> f64 {
        self.values
            .chunks_exact(self.channels)
            .map(euclidean_norm)
            .fold(0.0, f64::max)
    }

    /// Time-translated copy `t ↦ f(t − dt)`.
    pub fn shifted(&self, dt: f64) -> Self {
        let mut out = self.clone();
        for b in &mut out.breakpoints {
            *b += dt;
        }
        out
    }

    /// Single channel `j` as its own signal.
    pub fn channel(&self, j: usize) -> Self {
        assert!(j < self.channels, "channel index out of range");
        Self {
            channels: 1,
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().skip(j).step_by(self.channels).copied().collect(),
            period: self.period,
        }
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= factor;
        }
        out
    }

    /// Constant pieces covering `(lo, hi]`, in time order. Both ends must be
    /// finite.
    pub fn pieces(&self, lo: f64, hi: f64) -> Vec<Piece<'_>> {
        assert!(lo.is_finite() && hi.is_finite() && lo <= hi, "window must be finite");
        let mut out = Vec::new();
        let mut t = lo;
        while t < hi {
            let (k, seg_end) = self.segment_after(t);
            let end = seg_end.min(hi);
            out.push(Piece {
                start: t,
                end,
                values: self.segment_values(k),
            });
            t = end;
        }
        out
    }

    /// Segment containing times just after `t`, and that segment's end in
    /// absolute time.
    fn segment_after(&self, t: f64) -> (usize, f64) {
        match self.period {
            None => {
                let k = self.breakpoints.partition_point(|&b| b <= t);
                let end = self.breakpoints.get(k).copied().unwrap_or(f64::INFINITY);
                (k, end)
            }
            Some(period) => {
                let b0 = self.breakpoints[0];
                // Reduce into [b₀, b₀ + T).
                let cycles = ((t - b0) / period).floor();
                let mut tau = t - cycles * period;
                let mut base = cycles * period;
                if tau >= b0 + period {
                    tau -= period;
                    base += period;
                } else if tau < b0 {
                    tau += period;
                    base -= period;
                }
                let k = self.breakpoints.partition_point(|&b| b <= tau) - 1;
                let (_, end) = self.segment_bounds(k);
                let end = base + end;
                // Rounding in the reduction can land the end on or before t.
                let end = if end <= t { t.next_up() } else { end };
                (k, end)
            }
        }
    }

    /// Periodic signal agreeing with `f` on the window `(−T, 0]`.
    pub fn periodize(&self, period: f64) -> Result<Self> {
        self.periodize_window(-period, period)
    }

    /// Periodic signal agreeing with `f` on `(start, start + T]`.
    /// Breakpoints outside the window are dropped.
    pub fn periodize_window(&self, start: f64, period: f64) -> Result<Self> {
        if self.is_periodic() {
            return Err(Error::Precondition("periodize expects an aperiodic signal".into()));
        }
        require(period.is_finite() && period > 0.0, "period", period, "T > 0")?;
        require(start.is_finite(), "start", start, "finite window start")?;
        let end = start + period;
        let mut breakpoints = vec![start];
        let mut rows = vec![self.segment_values(self.segment_after(start).0).to_vec()];
        for (k, &b) in self.breakpoints.iter().enumerate() {
            if b > start && b < end {
                breakpoints.push(b);
                rows.push(self.segment_values(k + 1).to_vec());
            }
        }
        Self::periodic(breakpoints, rows, period)
    }
}

pub(crate) fn euclidean_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_rows(rows: &[Vec<f64>]) -> Result<usize> {
    let channels = rows.first().map_or(0, Vec::len);
    if channels == 0 {
        return Err(Error::Precondition("signal needs at least one channel".into()));
    }
    for (k, row) in rows.iter().enumerate() {
        if row.len() != channels {
            return Err(Error::Precondition(format!(
                "segment {k} has {} channels, expected {channels}",
                row.len()
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition(format!("segment {k} has a non-finite value")));
        }
    }
    Ok(channels)
}

fn check_breakpoints(b: &[f64]) -> Result<()> {
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::Precondition("breakpoints must be finite".into()));
    }
    if let Some(w) = b.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(format!(
            "breakpoints must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Unit-amplitude forcing with `f(−s) = sign g(s)` for `s ∈ [0, horizon)`,
/// zero outside `(−horizon, 0]`. Its bounded solution has
/// `u'(0) = ∫₀^horizon |g(s)| ds`.
pub fn extremal_scalar_forcing(r: &RegimeData, horizon: f64) -> Result<ForcingSignal> {
    require(horizon.is_finite() && horizon > 0.0, "horizon", horizon, "horizon > 0")?;
    let zeros: Vec<f64> = crate::scalar::kernel_sign_changes(r, horizon)
        .into_iter()
        .filter(|&z| z < horizon)
        .collect();
    Ok(sign_pattern(&zeros, horizon))
}

/// Same as [`extremal_scalar_forcing`] for the position kernel `G`.
pub fn extremal_position_forcing(r: &RegimeData, horizon: f64) -> Result<ForcingSignal> {
    require(horizon.is_finite() && horizon > 0.0, "horizon", horizon, "horizon > 0")?;
    let zeros: Vec<f64> = r
        .combination_zeros(0.0, 1.0, horizon)
        .into_iter()
        .filter(|&z| z < horizon)
        .collect();
    Ok(sign_pattern(&zeros, horizon))
}

/// `+1` on `(−z₀, 0]`, alternating sign across each `−z_k`, zero outside
/// `(−horizon, 0]`.
fn sign_pattern(zeros: &[f64], horizon: f64) -> ForcingSignal {
    let n = zeros.len();
    let mut breakpoints = Vec::with_capacity(n + 2);
    breakpoints.push(-horizon);
    breakpoints.extend(zeros.iter().rev().map(|z| -z));
    breakpoints.push(0.0);
    let mut rows = Vec::with_capacity(n + 3);
    rows.push(vec![0.0]);
    for k in (0..=n).rev() {
        rows.push(vec![if k % 2 == 0 { 1.0 } else { -1.0 }]);
    }
    rows.push(vec![0.0]);
    ForcingSignal::aperiodic(breakpoints, rows).expect("zeros are strictly increasing")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{classify_regime, ScalarParams, CRITICAL_TOLERANCE};
    use std::f64::consts::PI;

    fn regime(b: f64, c: f64) -> RegimeData {
        classify_regime(ScalarParams::new(b, c).unwrap(), CRITICAL_TOLERANCE)
    }

    #[test]
    fn segment_membership_is_left_open() {
        let f = ForcingSignal::aperiodic(vec![0.0, 1.0], vec![vec![1.0], vec![2.0], vec![3.0]])
            .unwrap();
        assert_eq!(f.value_at(0.0), &[1.0]);
        assert_eq!(f.value_at(1e-300), &[2.0]);
        assert_eq!(f.value_at(1.0), &[2.0]);
        assert_eq!(f.value_at(5.0), &[3.0]);
        assert_eq!(f.segment_bounds(0), (f64::NEG_INFINITY, 0.0));
        assert_eq!(f.segment_bounds(2), (1.0, f64::INFINITY));
    }

    #[test]
    fn extremal_examples() {
        let f = extremal_scalar_forcing(&regime(2.0, 3.0), 10.0).unwrap();
        assert_eq!(f.breakpoints(), &[-10.0, -(2f64.ln()), 0.0]);
        assert_eq!(f.value_at(-0.1), &[1.0]);
        assert_eq!(f.value_at(-1.0), &[-1.0]);
        assert_eq!(f.value_at(-11.0), &[0.0]);
        assert_eq!(f.value_at(0.5), &[0.0]);

        // Critical zero at s = 2/c = 1.
        let f = extremal_scalar_forcing(&regime(1.0, 2.0), 10.0).unwrap();
        assert_eq!(f.breakpoints(), &[-10.0, -1.0, 0.0]);

        let f = extremal_scalar_forcing(&regime(2.0, 2.0), 10.0).unwrap();
        let inner = &f.breakpoints()[1..4];
        for (b, k) in inner.iter().zip([2.0, 1.0, 0.0]) {
            assert!((b + PI / 4.0 + k * PI).abs() < 1e-14);
        }
        assert_eq!(f.value_at(-0.1), &[1.0]);
        assert_eq!(f.value_at(-1.0), &[-1.0]);
        assert_eq!(f.value_at(-5.0), &[1.0]);
        assert_eq!(f.sup_norm(), 1.0);
    }

    #[test]
    fn periodic_lookup_wraps() {
        let f = ForcingSignal::periodic(vec![-2.0, -1.0], vec![vec![1.0], vec![-1.0]], 2.0)
            .unwrap();
        assert_eq!(f.value_at(-1.5), &[1.0]);
        assert_eq!(f.value_at(-1.0), &[1.0]);
        assert_eq!(f.value_at(-0.5), &[-1.0]);
        assert_eq!(f.value_at(0.0), &[-1.0]);
        assert_eq!(f.value_at(0.5), &[1.0]);
        assert_eq!(f.value_at(101.5), &[-1.0]);
        assert_eq!(f.value_at(-100.0), &[-1.0]);
    }

    #[test]
    fn periodize_examples() {
        let f = ForcingSignal::constant(vec![0.5, -0.25]).unwrap();
        let p = f.periodize(3.0).unwrap();
        assert!(p.is_periodic());
        for t in [-7.0, -1.0, 0.0, 2.9, 100.0] {
            assert_eq!(p.value_at(t), &[0.5, -0.25]);
        }

        let e = extremal_scalar_forcing(&regime(2.0, 3.0), 10.0).unwrap();
        let p = e.periodize(10.0).unwrap();
        for t in [-9.9, -5.0, -0.5, -0.01, 0.0] {
            assert_eq!(p.value_at(t), e.value_at(t));
            assert_eq!(p.value_at(t + 30.0), e.value_at(t));
        }

        // Breakpoint at −20 lies outside (−10, 0] and is dropped.
        let f = ForcingSignal::aperiodic(vec![-20.0, -3.0], vec![vec![2.0], vec![1.0], vec![-1.0]])
            .unwrap();
        let p = f.periodize(10.0).unwrap();
        assert_eq!(p.breakpoints(), &[-10.0, -3.0]);
        assert!(p.sup_norm() <= f.sup_norm());

        assert!(p.periodize(10.0).is_err());
    }

    #[test]
    fn pieces_cover_window() {
        let f = ForcingSignal::periodic(vec![0.0, 0.3], vec![vec![1.0], vec![-1.0]], 1.0).unwrap();
        let ps = f.pieces(-0.5, 1.2);
        let ends: Vec<f64> = ps.iter().map(|p| p.end).collect();
        assert_eq!(ps[0].start, -0.5);
        assert_eq!(ends.last().copied(), Some(1.2));
        for w in ps.windows(2) {
            assert_eq!(w[0].end, w[1].start);
        }
        for p in &ps {
            let mid = 0.5 * (p.start + p.end);
            assert_eq!(p.values, f.value_at(mid));
        }
        assert_eq!(ps.len(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ForcingSignal::aperiodic(vec![1.0, 0.0], vec![vec![1.0]; 3]).is_err());
        assert!(ForcingSignal::aperiodic(vec![], vec![vec![]]).is_err());
        assert!(ForcingSignal::aperiodic(vec![0.0], vec![vec![1.0]]).is_err());
        assert!(ForcingSignal::periodic(vec![0.0, 2.0], vec![vec![1.0]; 2], 2.0).is_err());
        assert!(ForcingSignal::constant(vec![f64::NAN]).is_err());
    }

    #[test]
    fn shift_translates_values() {
        let e = extremal_scalar_forcing(&regime(2.0, 2.0), 10.0).unwrap();
        let s = e.shifted(10.0);
        for t in [-9.0, -3.3, -0.2, 0.0] {
            assert_eq!(s.value_at(t + 10.0), e.value_at(t));
        }
    }
}
