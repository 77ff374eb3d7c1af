//! Trajectories of the modal system `u_i'' + c u_i' + λ_i u_i = f_i`.
//!
//! Piecewise-constant forcing is propagated exactly, segment by segment, with
//! the closed-form propagator of each mode. A fixed-step RK4 integrator serves
//! as an independent cross-check and handles general forcing.

mod estimator;
mod exact;
mod rk4;

pub use estimator::{ultimate_sup_estimator, Functional};
pub use exact::{
    bounded_solution_at, bounded_solution_at_zero, evolve_exact, evolve_exact_sampled,
    periodic_solution, PeriodicSolution, MAX_CONDITION,
};
pub use rk4::{evolve_rk4, FnForcing, Forcing};

use std::io::Write;
use std::path::Path;

use crate::error::{require, Error, Result};
use crate::scalar::{classify_regime, RegimeData, ScalarParams, CRITICAL_TOLERANCE};

/// Position and velocity of every mode at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalState {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl ModalState {
    pub fn new(t: f64, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::ChannelMismatch {
                expected: u.len(),
                found: v.len(),
            });
        }
        Ok(Self { t, u, v })
    }

    pub fn zero(modes: usize, t: f64) -> Self {
        Self {
            t,
            u: vec![0.0; modes],
            v: vec![0.0; modes],
        }
    }

    pub fn modes(&self) -> usize {
        self.u.len()
    }

    pub fn velocity_norm(&self) -> f64 {
        crate::signal::euclidean_norm(&self.v)
    }

    pub fn position_norm(&self) -> f64 {
        crate::signal::euclidean_norm(&self.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Closed-form propagation across constant forcing segments.
    ExactPiecewise,
    Rk4 { dt: f64 },
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactPiecewise => "exact-piecewise",
            Method::Rk4 { .. } => "rk4",
        }
    }
}

/// Sampled solution. Exact trajectories also remember the forcing on each
/// sample interval, so that the closed-form solution between samples can be
/// recovered.
#[derive(Debug, Clone)]
pub struct Trajectory {
    method: Method,
    spectrum: Vec<f64>,
    c: f64,
    times: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    forcing: Vec<f64>,
}

impl Trajectory {
    fn start(method: Method, spectrum: &[f64], c: f64, initial: &ModalState) -> Self {
        Self {
            method,
            spectrum: spectrum.to_vec(),
            c,
            times: vec![initial.t],
            u: initial.u.clone(),
            v: initial.v.clone(),
            forcing: Vec::new(),
        }
    }

    fn push(&mut self, t: f64, u: &[f64], v: &[f64], forcing: Option<&[f64]>) {
        self.times.push(t);
        self.u.extend_from_slice(u);
        self.v.extend_from_slice(v);
        if let Some(f) = forcing {
            self.forcing.extend_from_slice(f);
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn damping(&self) -> f64 {
        self.c
    }

    pub fn modes(&self) -> usize {
        self.spectrum.len()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn u_at(&self, k: usize) -> &[f64] {
        let n = self.modes();
        &self.u[k * n..(k + 1) * n]
    }

    pub fn v_at(&self, k: usize) -> &[f64] {
        let n = self.modes();
        &self.v[k * n..(k + 1) * n]
    }

    pub fn state(&self, k: usize) -> ModalState {
        ModalState {
            t: self.times[k],
            u: self.u_at(k).to_vec(),
            v: self.v_at(k).to_vec(),
        }
    }

    pub fn final_state(&self) -> ModalState {
        self.state(self.len() - 1)
    }

    /// Forcing on `(t_k, t_{k+1}]`; only recorded for exact trajectories.
    pub fn interval_forcing(&self, k: usize) -> Option<&[f64]> {
        let n = self.modes();
        self.forcing.get(k * n..(k + 1) * n)
    }

    /// Comma-separated table `t,u1,v1,u2,v2,…` with a header row.
    pub fn write_csv_to<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        write!(out, "t")?;
        for i in 1..=self.modes() {
            write!(out, ",u{i},v{i}")?;
        }
        writeln!(out)?;
        for k in 0..self.len() {
            write!(out, "{:.16e}", self.times[k])?;
            for (u, v) in self.u_at(k).iter().zip(self.v_at(k)) {
                write!(out, ",{u:.16e},{v:.16e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv_to(&mut out)?;
        out.flush()?;
        Ok(())
    }
}

/// Regime data of each mode `(λ_i, c)`.
pub(crate) fn mode_regimes(spectrum: &[f64], c: f64) -> Result<Vec<RegimeData>> {
    require(!spectrum.is_empty(), "modes", 0.0, "at least one mode")?;
    spectrum
        .iter()
        .map(|&l| {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::NonPositiveEigenvalue { value: l });
            }
            Ok(classify_regime(ScalarParams::new(l, c)?, CRITICAL_TOLERANCE))
        })
        .collect()
}

fn check_channels(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::ChannelMismatch { expected, found })
    }
}
