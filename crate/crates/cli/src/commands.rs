use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use ubound::scalar::{quadrature_position_oracle, Roots};
use ubound::signal::write_signal;
use ubound::simulator::bounded_solution_at_zero;
use ubound::vector::{
    evaluate_construction, guaranteed_lower_bound, log_regime_bound, ratio_subsequence,
    read_matrix, read_spectrum, symmetric_eigenvalues, upper_bound_finite_dim, upper_bound_general,
    weyl_spectrum, LogRegimeParams, SpectrumModel,
};
use ubound::{
    build_construction, classify_regime, decay_envelope, historical_bounds, optimal_position_bound,
    optimal_velocity_bound, quadrature_bound_oracle, run_equivalence, EquivalenceConfig,
    ExtremalConstruction, ForcingSignal, ScalarParams,
};

use crate::range::GridRange;
use crate::{Axis, CliError, CliResult, FunctionalArg};

const ORACLE_TOL: f64 = 1e-9;

pub fn constants(b: f64, c: f64) -> CliResult<()> {
    let p = ScalarParams::new(b, c)?;
    let r = classify_regime(p, ubound::scalar::CRITICAL_TOLERANCE);
    let mut s = String::new();
    writeln!(s, "b = {b}, c = {c}").unwrap();
    writeln!(s, "regime: {} (Delta = {:.12e})", r.regime.as_str(), r.delta).unwrap();
    match r.roots {
        Roots::Real { alpha, beta } => writeln!(s, "roots: -{alpha:.12e}, -{beta:.12e}"),
        Roots::Double { rate } => writeln!(s, "roots: -{rate:.12e} (double)"),
        Roots::Complex { gamma, omega } => writeln!(s, "roots: -{gamma:.12e} +/- {omega:.12e} i"),
    }
    .unwrap();
    writeln!(s, "first zero of g: {:.12e}", r.first_zero).unwrap();
    writeln!(s, "K = {}", optimal_velocity_bound(p)).unwrap();
    writeln!(s, "K oracle = {}", quadrature_bound_oracle(p, ORACLE_TOL)?).unwrap();
    writeln!(s, "position bound = {}", optimal_position_bound(p)).unwrap();
    let h = historical_bounds(p);
    writeln!(s, "historical: Loud |u'| <= {:.12}, |u| <= {:.12}", h.loud_v, h.loud_u).unwrap();
    writeln!(s, "historical: Fitzgibbon-Haraux |u'| <= {:.12}, |u| <= {:.12}", h.fithar_v, h.fithar_u).unwrap();
    writeln!(s, "historical: Haraux |u| <= {:.12}", h.haraux_u).unwrap();
    writeln!(s, "envelope: 4/(pi c) = {:.12}, 2/c = {:.12}", 4.0 / (PI * c), 2.0 / c).unwrap();
    let env = decay_envelope(p);
    writeln!(s, "decay envelope: C = {:.6}, delta = {:.12e}", env.constant, env.rate).unwrap();
    print!("{s}");
    Ok(())
}

pub fn sweep(
    axis: Axis,
    range: &GridRange,
    b: f64,
    c: f64,
    functional: FunctionalArg,
    out: Option<&Path>,
) -> CliResult<()> {
    if functional == FunctionalArg::Energy {
        return Err(CliError::Param("sweep supports velocity and position only".into()));
    }
    let position = functional == FunctionalArg::Position;
    let points = range.points();
    let mut text = String::new();
    match axis {
        Axis::B | Axis::C => {
            text.push_str(
                "b,c,closed,oracle,loud_v,fithar_v,loud_u,fithar_u,haraux_u,lower_envelope,two_over_c,c_times_closed\n",
            );
            let rows = points
                .par_iter()
                .map(|&x| {
                    let (bb, cc) = if axis == Axis::B { (x, c) } else { (b, x) };
                    let p = ScalarParams::new(bb, cc)?;
                    let (closed, oracle) = if position {
                        (optimal_position_bound(p).value, quadrature_position_oracle(p, ORACLE_TOL)?.value)
                    } else {
                        (optimal_velocity_bound(p).value, quadrature_bound_oracle(p, ORACLE_TOL)?.value)
                    };
                    let h = historical_bounds(p);
                    Ok(csv_row(&[
                        bb,
                        cc,
                        closed,
                        oracle,
                        h.loud_v,
                        h.fithar_v,
                        h.loud_u,
                        h.fithar_u,
                        h.haraux_u,
                        4.0 / (PI * cc),
                        2.0 / cc,
                        cc * closed,
                    ]))
                })
                .collect::<CliResult<Vec<_>>>()?;
            rows.iter().for_each(|r| text.push_str(r));
        }
        Axis::Dimension => {
            let spec = SpectrumModel::truncated(vec![b])?;
            let k = optimal_velocity_bound(ScalarParams::new(b, c)?).value;
            let general = upper_bound_general(&spec, c)?.value;
            text.push_str("dimension,c,k_scalar,upper_finite_dim,upper_general\n");
            let mut dims: Vec<usize> = points.iter().map(|x| x.round().max(1.0) as usize).collect();
            dims.dedup();
            for d in dims {
                let fd = upper_bound_finite_dim(d, c)?.value;
                text.push_str(&csv_row(&[d as f64, c, k, fd, general]));
            }
        }
        Axis::Period => {
            let cfg = EquivalenceConfig::new(points.clone(), vec![range.hi], functional.into());
            let rep = run_equivalence(ScalarParams::new(b, c)?, &cfg)?;
            text.push_str("period,ob_p,ob_g0,gap,predicted_gap\n");
            for cell in &rep.periodic {
                text.push_str(&csv_row(&[cell.period, cell.ob_p, rep.ob_g0, cell.gap, cell.predicted_gap]));
            }
        }
    }
    emit(&text, out)
}

pub fn construct(
    epsilon: f64,
    length_l: f64,
    modes: Option<&str>,
    matrix: Option<&Path>,
    c: f64,
    out: Option<&Path>,
) -> CliResult<()> {
    let spectrum = match (modes, matrix) {
        (_, Some(path)) => symmetric_eigenvalues(&read_matrix(path)?)?,
        (Some(spec), None) => parse_modes(spec)?,
        (None, None) => return Err(CliError::Param("one of --modes or --matrix is required".into())),
    };
    let modes = spectrum.eigenvalues().to_vec();
    let n = modes.len();
    let base = ExtremalConstruction::new(epsilon, length_l, modes.clone())?;
    let mut s = String::new();
    writeln!(s, "epsilon = {epsilon}, L = {length_l}, n = {n}").unwrap();
    writeln!(s, "modes: {}", join(&modes)).unwrap();
    writeln!(s, "threshold c = {:.12e}", base.c_threshold()).unwrap();
    writeln!(s, "margin e^-eps - 2e^-L = {:.12}", base.margin()).unwrap();

    let (con, forcing) = build_construction(epsilon, length_l, modes, c)?;
    let lower = guaranteed_lower_bound(&con, c)?;
    let ev = evaluate_construction(&con, c)?;
    let upper_fd = upper_bound_finite_dim(n, c)?;
    let upper_gen = upper_bound_general(&spectrum, c)?;
    writeln!(s, "c = {c}").unwrap();
    writeln!(s, "switch times: {}", join(con.switch_times())).unwrap();
    writeln!(s, "guaranteed lower bound = {lower}").unwrap();
    writeln!(s, "exact norm_v0 = {:.12}", ev.norm_v0).unwrap();
    writeln!(s, "per-mode u'(0): {}", join(&ev.per_mode_v0)).unwrap();
    writeln!(s, "upper bound (finite dimension) = {upper_fd}").unwrap();
    writeln!(s, "upper bound (general) = {upper_gen}").unwrap();
    let ok = lower.value <= ev.norm_v0 && ev.norm_v0 <= upper_fd.value.min(upper_gen.value);
    writeln!(s, "sandwich lower <= exact <= upper: {}", if ok { "holds" } else { "VIOLATED" }).unwrap();
    if let Some(path) = out {
        write_signal(&forcing, path)?;
        writeln!(s, "forcing written to {}", path.display()).unwrap();
    }
    print!("{s}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn equivalence(
    b: f64,
    c: f64,
    periods: Vec<f64>,
    horizons: Vec<f64>,
    functional: FunctionalArg,
    amplitude: f64,
    out: Option<&Path>,
) -> CliResult<()> {
    let cfg = EquivalenceConfig {
        periods,
        horizons,
        functional: functional.into(),
        amplitude,
    };
    let rep = run_equivalence(ScalarParams::new(b, c)?, &cfg)?;
    let mut table = Vec::new();
    rep.write_table_to(&mut table).expect("writing to memory");
    print!("{}", String::from_utf8(table).expect("ASCII table"));
    if let Some(path) = out {
        rep.write_csv(path)?;
    }
    Ok(())
}

pub fn laplacian_demo(
    dimension: u32,
    gamma: f64,
    count: usize,
    range: &GridRange,
    epsilon: f64,
    length_l: f64,
    out: Option<&Path>,
) -> CliResult<()> {
    let spec = weyl_spectrum(dimension, gamma, count)?;
    let r0 = 2.0 * length_l / epsilon;
    let chain_idx = ratio_subsequence(&spec, r0, 2.0 * r0)?;
    let chain: Vec<f64> = chain_idx.iter().map(|&i| spec.eigenvalues()[i]).collect();
    // The log-regime column needs margin ≥ 1/2; leave it empty otherwise.
    let log_params = LogRegimeParams::new(epsilon, length_l, 2.0 * r0, chain[0]).ok();
    // Validates ε and L once, so per-row errors can only come from c.
    ExtremalConstruction::new(epsilon, length_l, vec![chain[0]])?;

    let rows = range
        .points()
        .par_iter()
        .map(|&c| -> CliResult<String> {
            let admissible = chain
                .iter()
                .take_while(|&&l| c * c >= 4.0 * length_l * l / epsilon * (1.0 - 1e-12))
                .count();
            let upper = c * upper_bound_general(&spec, c)?.value;
            // Only meaningful when the chain reaches the bracketing index.
            let log_lower = log_params
                .as_ref()
                .and_then(|p| log_regime_bound(p, c).ok())
                .filter(|b| b.bracket as usize <= admissible)
                .map(|b| c * b.estimate.value);
            let mut row = format!("{c:.16e},{admissible}");
            if admissible == 0 {
                row.push_str(",,");
            } else {
                let con = ExtremalConstruction::new(epsilon, length_l, chain[..admissible].to_vec())?;
                let lower = c * guaranteed_lower_bound(&con, c)?.value;
                let exact = c * evaluate_construction(&con, c)?.norm_v0;
                write!(row, ",{lower:.16e},{exact:.16e}").unwrap();
            }
            match log_lower {
                Some(v) => write!(row, ",{v:.16e}").unwrap(),
                None => row.push(','),
            }
            writeln!(row, ",{upper:.16e}").unwrap();
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut text = format!(
        "# weyl spectrum d = {dimension}, gamma = {gamma}, {count} eigenvalues; chain of {} with ratios in [{r0}, {}]\n",
        chain.len(),
        2.0 * r0
    );
    text.push_str("c,modes_used,c_times_guaranteed_lower,c_times_construction,c_times_log_lower,c_times_upper_general\n");
    rows.iter().for_each(|r| text.push_str(r));
    emit(&text, out)
}

pub fn duality_check(b: f64, c: f64, seed: u64, count: usize) -> CliResult<()> {
    let p = ScalarParams::new(b, c)?;
    let k = optimal_velocity_bound(p).value;
    let kp = optimal_position_bound(p).value;
    let span = 20.0 / decay_envelope(p).rate;
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut worst_v, mut worst_u) = (0.0f64, 0.0f64);
    for _ in 0..count {
        let f = random_forcing(&mut rng, span)?;
        let sup = f.sup_norm();
        if sup == 0.0 {
            continue;
        }
        let s = bounded_solution_at_zero(&[b], c, &f)?;
        worst_v = worst_v.max(s.v[0].abs() / (k * sup));
        worst_u = worst_u.max(s.u[0].abs() / (kp * sup));
    }
    let tol = 1.0 + 1e-12;
    println!("seed = {seed}, forcings = {count}, b = {b}, c = {c}");
    println!("max |u'(0)| / (K sup|f|) = {worst_v:.12}");
    println!("max |u(0)| / (K_pos sup|f|) = {worst_u:.12}");
    println!(
        "duality: {}",
        if worst_v <= tol && worst_u <= tol { "holds" } else { "VIOLATED" }
    );
    Ok(())
}

fn random_forcing(rng: &mut StdRng, span: f64) -> CliResult<ForcingSignal> {
    let m = rng.gen_range(1..=16);
    let mut cuts: Vec<f64> = (0..m).map(|_| -rng.gen_range(0.0..span)).collect();
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut rows = vec![vec![0.0]];
    rows.extend((1..cuts.len()).map(|_| vec![rng.gen_range(-1.0..=1.0)]));
    rows.push(vec![0.0]);
    Ok(ForcingSignal::aperiodic(cuts, rows)?)
}

/// Comma list, `geometric:first:ratio:count`, or a spectrum file.
fn parse_modes(spec: &str) -> CliResult<SpectrumModel> {
    if let Some(rest) = spec.strip_prefix("geometric:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Param(format!("expected geometric:first:ratio:count, got {spec:?}")));
        }
        let first = parse_f64(parts[0])?;
        let ratio = parse_f64(parts[1])?;
        let count: usize = parts[2]
            .parse()
            .map_err(|e| CliError::Param(format!("bad count {:?}: {e}", parts[2])))?;
        return Ok(SpectrumModel::geometric(first, ratio, count)?);
    }
    let list: Option<Vec<f64>> = spec.split(',').map(|x| x.trim().parse().ok()).collect();
    match list {
        Some(values) => Ok(SpectrumModel::finite(values)?),
        None => Ok(read_spectrum(&PathBuf::from(spec))?),
    }
}

fn parse_f64(x: &str) -> CliResult<f64> {
    x.parse().map_err(|e| CliError::Param(format!("bad number {x:?}: {e}")))
}

fn csv_row(values: &[f64]) -> String {
    let mut row = values.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(",");
    row.push('\n');
    row
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.12e}")).collect::<Vec<_>>().join(", ")
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}
