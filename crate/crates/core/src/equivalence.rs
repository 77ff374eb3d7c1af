//! Numerical check that the ultimate, global and periodic optimal bounds
//! coincide for a single mode `u'' + cu' + bu = f`.
//!
//! The global bound at time 0 comes from the quadrature oracle. The periodic
//! bound is probed with one near-extremal family: the extremal forcing cut to
//! `(−T, 0]` and repeated with period `T`. Its periodic solution differs from
//! the global value by at most `2‖F‖·C e^{−δT}/δ`, where `C e^{−δt}` majorizes
//! the semigroup. The ultimate bound is probed by driving zero data with the
//! same repeated window and taking the supremum after a long burn-in.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{require, Error, Result};
use crate::scalar::{
    classify_regime, decay_envelope, quadrature_bound_oracle, quadrature_position_oracle,
    DecayEnvelope, ScalarParams, CRITICAL_TOLERANCE,
};
use crate::signal::{extremal_position_forcing, extremal_scalar_forcing, ForcingSignal};
use crate::simulator::{
    bounded_solution_at, evolve_exact, periodic_solution, ultimate_sup_estimator, Functional,
    ModalState,
};

/// Oracle tolerance for the global value.
const ORACLE_TOL: f64 = 1e-13;
/// Burn-in in units of the decay time `1/δ`.
const BURN_IN_DECAY_TIMES: f64 = 40.0;
/// Relative slack for comparisons between numerically computed values.
const RELATIVE_SLACK: f64 = 1e-10;
/// Time shift used for the translation check.
const TRANSLATION_SHIFT: f64 = 1.25;

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceConfig {
    /// Periods `T` for the periodic probe; nonempty and increasing.
    pub periods: Vec<f64>,
    /// Window lengths `h` for the ultimate probe; nonempty and increasing.
    pub horizons: Vec<f64>,
    /// Velocity or position. The energy functional has no closed-form
    /// oracle and is rejected.
    pub functional: Functional,
    /// Forcing amplitude `‖F‖`; zero gives the control run.
    pub amplitude: f64,
}

impl EquivalenceConfig {
    pub fn new(periods: Vec<f64>, horizons: Vec<f64>, functional: Functional) -> Self {
        Self {
            periods,
            horizons,
            functional,
            amplitude: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCell {
    pub period: f64,
    pub ob_p: f64,
    /// `|ob_p − ob_g0|`.
    pub gap: f64,
    /// `2‖F‖·C e^{−δT}/δ`.
    pub predicted_gap: f64,
    /// Rounding allowance added to `predicted_gap` in the verdict.
    pub allowance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UltimateCell {
    pub horizon: f64,
    pub burn_in: f64,
    pub ob_u: f64,
    /// `ob_u − ob_g0`; should not be positive beyond the allowance.
    pub excess: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub params: ScalarParams,
    pub functional: Functional,
    pub amplitude: f64,
    pub ob_g0: f64,
    pub oracle_tolerance: f64,
    pub tail_model: DecayEnvelope,
    pub periodic: Vec<PeriodicCell>,
    pub ultimate: Vec<UltimateCell>,
    /// Largest state difference between `U(t)` for `f` and `U(t + Δ)` for
    /// `f(· − Δ)`, over a few probe times.
    pub translation_error: f64,
}

impl EquivalenceReport {
    /// All cells pass and the translation check holds to `1e-12`.
    pub fn pass(&self) -> bool {
        self.periodic.iter().all(|c| c.pass)
            && self.ultimate.iter().all(|c| c.pass)
            && self.translation_error <= 1e-12
    }

    /// Human-readable table.
    pub fn write_table_to<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(
            out,
            "b = {}, c = {}, functional = {}, amplitude = {}",
            self.params.b(),
            self.params.c(),
            self.functional.as_str(),
            self.amplitude
        )?;
        writeln!(out, "ob_g0 = {:.15} (±{:.1e})", self.ob_g0, self.oracle_tolerance)?;
        writeln!(
            out,
            "tail model: C = {:.6}, delta = {:.6}",
            self.tail_model.constant, self.tail_model.rate
        )?;
        writeln!(out, "{:>10} {:>20} {:>12} {:>12}  verdict", "T", "ob_p", "gap", "predicted")?;
        for c in &self.periodic {
            writeln!(
                out,
                "{:>10} {:>20.15} {:>12.3e} {:>12.3e}  {}",
                c.period,
                c.ob_p,
                c.gap,
                c.predicted_gap,
                verdict(c.pass)
            )?;
        }
        writeln!(out, "{:>10} {:>20} {:>12} {:>12}  verdict", "h", "ob_u", "excess", "burn-in")?;
        for c in &self.ultimate {
            writeln!(
                out,
                "{:>10} {:>20.15} {:>12.3e} {:>12.3}  {}",
                c.horizon,
                c.ob_u,
                c.excess,
                c.burn_in,
                verdict(c.pass)
            )?;
        }
        writeln!(out, "translation error = {:.3e}", self.translation_error)?;
        writeln!(out, "overall: {}", verdict(self.pass()))
    }

    /// Machine-readable summary, one row per cell:
    /// `kind,param,estimate,ob_g0,gap,predicted_gap,pass`.
    pub fn write_csv_to<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "kind,param,estimate,ob_g0,gap,predicted_gap,pass")?;
        for c in &self.periodic {
            writeln!(
                out,
                "periodic,{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                c.period, c.ob_p, self.ob_g0, c.gap, c.predicted_gap, c.pass
            )?;
        }
        for c in &self.ultimate {
            writeln!(
                out,
                "ultimate,{:.16e},{:.16e},{:.16e},{:.16e},,{}",
                c.horizon, c.ob_u, self.ob_g0, c.excess, c.pass
            )?;
        }
        writeln!(
            out,
            "translation,{TRANSLATION_SHIFT:.16e},{:.16e},,,,{}",
            self.translation_error,
            self.translation_error <= 1e-12
        )
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv_to(&mut out)?;
        out.flush()?;
        Ok(())
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Estimates the three bounds for `(b, c)` and compares them.
pub fn run_equivalence(p: ScalarParams, cfg: &EquivalenceConfig) -> Result<EquivalenceReport> {
    check_increasing("periods", &cfg.periods)?;
    check_increasing("horizons", &cfg.horizons)?;
    require(cfg.amplitude.is_finite(), "amplitude", cfg.amplitude, "finite amplitude")?;
    if cfg.functional == Functional::Energy {
        return Err(Error::InvalidParameter {
            name: "functional",
            value: f64::NAN,
            constraint: "velocity or position (energy has no oracle)".into(),
        });
    }

    let r = classify_regime(p, CRITICAL_TOLERANCE);
    let amp = cfg.amplitude.abs();
    let oracle = match cfg.functional {
        Functional::Position => quadrature_position_oracle(p, ORACLE_TOL)?,
        _ => quadrature_bound_oracle(p, ORACLE_TOL)?,
    };
    let ob_g0 = amp * oracle.value;
    let oracle_tolerance = amp * oracle.tolerance.unwrap_or(0.0);
    let tail = decay_envelope(p);
    let allowance = oracle_tolerance + RELATIVE_SLACK * ob_g0.max(f64::MIN_POSITIVE);

    let window = |h: f64| -> Result<ForcingSignal> {
        let f = match cfg.functional {
            Functional::Position => extremal_position_forcing(&r, h)?,
            _ => extremal_scalar_forcing(&r, h)?,
        };
        Ok(f.scaled(cfg.amplitude))
    };
    let pick = |s: &ModalState| match cfg.functional {
        Functional::Position => s.u[0].abs(),
        _ => s.v[0].abs(),
    };
    let spectrum = [p.b()];

    let periodic = cfg
        .periods
        .par_iter()
        .map(|&period| -> Result<PeriodicCell> {
            let f = window(period)?.periodize(period)?;
            let sol = periodic_solution(&spectrum, p.c(), &f)?;
            let ob_p = pick(&sol.state);
            let gap = (ob_p - ob_g0).abs();
            let predicted_gap = 2.0 * amp * tail.constant * (-tail.rate * period).exp() / tail.rate;
            Ok(PeriodicCell {
                period,
                ob_p,
                gap,
                predicted_gap,
                allowance,
                pass: gap <= predicted_gap + allowance,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let min_burn_in = BURN_IN_DECAY_TIMES / tail.rate;
    let mut ultimate = cfg
        .horizons
        .par_iter()
        .map(|&h| -> Result<UltimateCell> {
            let f = window(h)?.periodize(h)?;
            let burn_in = (min_burn_in / h).ceil() * h;
            let traj = evolve_exact(&spectrum, p.c(), &f, &ModalState::zero(1, 0.0), burn_in + 2.0 * h)?;
            let ob_u = ultimate_sup_estimator(&traj, burn_in, cfg.functional)?;
            Ok(UltimateCell {
                horizon: h,
                burn_in,
                ob_u,
                excess: ob_u - ob_g0,
                pass: ob_u <= ob_g0 + allowance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // Nondecreasing in h, up to the allowance.
    for j in 1..ultimate.len() {
        if ultimate[j].ob_u < ultimate[j - 1].ob_u - allowance {
            ultimate[j].pass = false;
        }
    }

    let translation_error = translation_check(&spectrum, p.c(), &window(*cfg.periods.last().unwrap())?)?;

    Ok(EquivalenceReport {
        params: p,
        functional: cfg.functional,
        amplitude: cfg.amplitude,
        ob_g0,
        oracle_tolerance,
        tail_model: tail,
        periodic,
        ultimate,
        translation_error,
    })
}

/// `U_f(t)` against `U_{f(·−Δ)}(t + Δ)` at a few times around the window.
fn translation_check(spectrum: &[f64], c: f64, f: &ForcingSignal) -> Result<f64> {
    let g = f.shifted(TRANSLATION_SHIFT);
    let mut worst = 0.0f64;
    for t in [-1.0, -0.3, 0.0, 0.7, 2.5] {
        let a = bounded_solution_at(spectrum, c, f, t)?;
        let b = bounded_solution_at(spectrum, c, &g, t + TRANSLATION_SHIFT)?;
        for (x, y) in a.u.iter().chain(&a.v).zip(b.u.iter().chain(&b.v)) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}

fn check_increasing(name: &'static str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::Precondition(format!("{name} must be nonempty")));
    }
    if let Some(&bad) = xs.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidParameter {
            name,
            value: bad,
            constraint: "positive and finite".into(),
        });
    }
    if let Some(w) = xs.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(format!(
            "{name} must be increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}
