//! Experiment orchestration behind the `mcac` binary.
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime model error,
//! 4 verification failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::{ConfigError, ExperimentConfig, InitKind};
use crate::diagnostics::{
    decay_rate_estimate, energy, stationary_residual, ConservationReport, SeparationTracker,
};
use crate::io::{
    read_checkpoint, write_checkpoint, Checkpoint, IoError, SeriesWriter, TimeSeriesRow,
};
use crate::solver::{
    initial_condition, ConservedAllenCahn, InitialCondition, RunOutcome, SimulationState,
    SolverError,
};
use crate::verify::{run as run_suites, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Everything produced by one experiment, kept in memory for reporting.
pub struct RunArtifacts {
    pub outcome: RunOutcome,
    pub rows: Vec<TimeSeriesRow>,
    pub separation: Option<(f64, f64)>,
    pub stationary_residual: f64,
    pub decay: Option<(f64, f64)>,
    pub out_dir: PathBuf,
}

/// `mcac run`: executes the configured experiment, writing `series.csv`,
/// optional snapshots, `final_state.mcac` and `summary.txt`.
pub fn cmd_run(config_path: &Path, overrides: &[(String, String)], out_dir: Option<&Path>) -> i32 {
    match load_config(config_path, overrides, out_dir).and_then(|cfg| {
        execute_run(&cfg).map_err(|e| {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        })
    }) {
        Ok(art) => {
            println!(
                "run finished: {} after {} steps (t = {:.6}), outputs in {}",
                art.outcome.reason,
                art.outcome.state.step_count(),
                art.outcome.state.t(),
                art.out_dir.display()
            );
            EXIT_OK
        }
        Err(code) => code,
    }
}

/// `mcac verify`: runs the named property suite with fixed seeds and
/// prints one pass/fail line per property.
pub fn cmd_verify(suite_name: &str) -> i32 {
    let suite = match Suite::parse(suite_name) {
        Some(s) => s,
        None => {
            eprintln!(
                "error: unknown suite '{suite_name}' (simplex | potential | discretization | scheme | lemmas | all)"
            );
            return EXIT_CONFIG;
        }
    };
    let reports = run_suites(suite);
    let mut passed = 0usize;
    let mut failed = 0usize;
    for report in &reports {
        for r in &report.results {
            let tag = if r.passed { "PASS" } else { "FAIL" };
            println!("[{tag}] {}/{}: {}", report.suite, r.name, r.detail);
            if r.passed {
                passed += 1;
            } else {
                failed += 1;
            }
        }
    }
    println!("{passed} passed, {failed} failed");
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

/// `mcac sweep-epsilon`: reruns the same seeded experiment across the
/// given regularization strengths and tabulates the regularization ladder.
pub fn cmd_sweep_epsilon(
    config_path: &Path,
    overrides: &[(String, String)],
    epsilons: &[f64],
    out_dir: Option<&Path>,
) -> i32 {
    if epsilons.is_empty() {
        eprintln!("error: --epsilons requires at least one value");
        return EXIT_CONFIG;
    }
    let base = match load_config(config_path, overrides, out_dir) {
        Ok(cfg) => cfg,
        Err(code) => return code,
    };
    let root = base.output.dir.clone();
    let mut table = Vec::new();
    for &eps in epsilons {
        let mut cfg = base.clone();
        cfg.model.epsilon = eps;
        cfg.output.dir = root.join(format!("eps-{eps:e}"));
        let art = match execute_run(&cfg) {
            Ok(a) => a,
            Err(e) => {
                eprintln!("error at epsilon = {eps:e}: {e}");
                return EXIT_RUNTIME;
            }
        };
        let final_energy = art.rows.last().map(|r| r.total_energy).unwrap_or(f64::NAN);
        let floor = art
            .rows
            .iter()
            .map(|r| r.separation_floor)
            .fold(f64::INFINITY, f64::min);
        let deviation = match phi_deviation(&cfg, eps) {
            Ok(d) => d,
            Err(e) => {
                eprintln!("error at epsilon = {eps:e}: {e}");
                return EXIT_RUNTIME;
            }
        };
        table.push((eps, final_energy, floor, deviation));
    }

    println!(
        "{:>12}  {:>22}  {:>18}  {:>22}",
        "epsilon", "final_energy", "separation_floor", "max|phi_eps - phi|"
    );
    for (eps, e, floor, dev) in &table {
        println!("{eps:>12.3e}  {e:>22.15e}  {floor:>18.12}  {dev:>22.15e}");
    }
    if let Err(e) = write_sweep_csv(&root, &table) {
        eprintln!("error: {e}");
        return EXIT_RUNTIME;
    }
    EXIT_OK
}

fn write_sweep_csv(root: &Path, table: &[(f64, f64, f64, f64)]) -> Result<(), IoError> {
    fs::create_dir_all(root)?;
    let mut f = fs::File::create(root.join("sweep.csv"))?;
    writeln!(f, "epsilon,final_energy,separation_floor,max_phi_deviation")?;
    for (eps, e, floor, dev) in table {
        writeln!(f, "{eps:.16e},{e:.16e},{floor:.16e},{dev:.16e}")?;
    }
    Ok(())
}

/// `max over s in [0.1, 0.9] of |phi_eps(s) - phi(s)|` on a 401-point grid.
fn phi_deviation(cfg: &ExperimentConfig, eps: f64) -> Result<f64, SolverError> {
    let spec = crate::potential::EntropySpec::logarithmic(cfg.model.theta);
    if eps == 0.0 {
        return Ok(0.0);
    }
    let y = crate::potential::YosidaRegularization::new(eps, spec.clone())?;
    let mut worst = 0.0_f64;
    for i in 0..=400 {
        let s = 0.1 + 0.8 * i as f64 / 400.0;
        worst = worst.max((y.derivative(s)? - spec.derivative(s)?).abs());
    }
    Ok(worst)
}

fn load_config(
    config_path: &Path,
    overrides: &[(String, String)],
    out_dir: Option<&Path>,
) -> Result<ExperimentConfig, i32> {
    let text = fs::read_to_string(config_path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", config_path.display());
        EXIT_CONFIG
    })?;
    let mut cfg = ExperimentConfig::parse_with_overrides(&text, overrides).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_CONFIG
    })?;
    if let Some(dir) = out_dir {
        cfg.output.dir = dir.to_path_buf();
    }
    Ok(cfg)
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Os(#[from] std::io::Error),
    #[error("checkpoint does not match the configuration: {0}")]
    CheckpointMismatch(String),
}

/// Builds the solver and initial state from a validated configuration,
/// runs it with the full diagnostic hook, and writes every artifact.
pub fn execute_run(cfg: &ExperimentConfig) -> Result<RunArtifacts, RunError> {
    let grid = cfg.build_grid()?;
    let mobility = cfg.mobility()?;
    let free_energy = cfg.free_energy()?;
    let solver = ConservedAllenCahn::new(&grid, cfg.solver_config(), &mobility, free_energy)?;

    let initial = match cfg.solver.init {
        InitKind::Custom => {
            let path = cfg
                .solver
                .init_checkpoint
                .as_ref()
                .expect("validated: custom init carries a checkpoint path");
            let cp = read_checkpoint(path)?;
            check_header(cfg, &cp)?;
            let u = cp.to_field(&cfg.grid.extent)?;
            u.validate(1e-10, 1e-10).map_err(SolverError::from)?;
            SimulationState::resume(u, cp.t, cp.step_count)
        }
        _ => {
            let kind: InitialCondition = cfg.initial_condition()?;
            SimulationState::new(initial_condition(&kind, &grid)?)
        }
    };

    fs::create_dir_all(&cfg.output.dir)?;
    let mut series = SeriesWriter::create(&cfg.output.dir.join("series.csv"))?;

    let cadence = cfg.output.cadence;
    let tau = 0.05 * cfg.solver.t_end;
    let mut tracker = SeparationTracker::new(tau);
    let mut rows: Vec<TimeSeriesRow> = Vec::new();
    let mut prev_energy: Option<f64> = None;
    let mut hook_error: Option<RunError> = None;
    let first_step = initial.step_count();

    let outcome = {
        let hook = |state: &mut SimulationState| -> Result<(), SolverError> {
            if !(state.step_count() - first_step).is_multiple_of(cadence) {
                return Ok(());
            }
            let w = solver.chemical_potential(state.u())?;
            let report = energy(state.u(), solver.energy_density(), solver.config().gamma)?;
            let dissipation = solver.mobility_gain() * w.fluctuation_norm().powi(2);
            state.set_potential(w);
            tracker.observe(state.t(), state.u());
            let cons = ConservationReport::from_state(state);
            let row = TimeSeriesRow {
                t: state.t(),
                total_energy: report.total,
                bulk_energy: report.bulk,
                gradient_energy: report.gradient,
                dissipation,
                mean_drift_max: cons.max_mean_drift(),
                constraint_violation: cons.constraint_violation,
                potential_sum_violation: cons.potential_sum_violation,
                separation_floor: cons.separation_floor,
                step_energy_delta: prev_energy.map(|p| report.total - p).unwrap_or(0.0),
            };
            prev_energy = Some(report.total);
            if let Err(e) = series.append(&row) {
                hook_error = Some(e.into());
                return Err(SolverError::Config("output write failed".into()));
            }
            if cfg.output.snapshots {
                let cp = snapshot(cfg, state);
                let name = format!("snapshot_{:010}.mcac", state.step_count());
                if let Err(e) = write_checkpoint(&cfg.output.dir.join(name), &cp) {
                    hook_error = Some(e.into());
                    return Err(SolverError::Config("snapshot write failed".into()));
                }
            }
            rows.push(row);
            Ok(())
        };
        match solver.run(initial, hook) {
            Ok(outcome) => outcome,
            Err(e) => {
                return Err(hook_error.unwrap_or(RunError::Solver(e)));
            }
        }
    };

    write_checkpoint(
        &cfg.output.dir.join("final_state.mcac"),
        &snapshot(cfg, &outcome.state),
    )?;

    let residual = stationary_residual(
        outcome.state.u(),
        solver.energy_density(),
        solver.config().gamma,
    )?;
    let decay = fit_decay(&rows);
    let separation = tracker.report();

    write_summary(cfg, &outcome, &rows, separation, residual, decay)?;

    Ok(RunArtifacts {
        outcome,
        rows,
        separation,
        stationary_residual: residual,
        decay,
        out_dir: cfg.output.dir.clone(),
    })
}

fn snapshot(cfg: &ExperimentConfig, state: &SimulationState) -> Checkpoint {
    Checkpoint::from_field(
        state.u(),
        state.t(),
        state.step_count(),
        cfg.model.gamma,
        cfg.model.theta,
        cfg.model.epsilon,
        cfg.model.xi,
    )
}

fn check_header(cfg: &ExperimentConfig, cp: &Checkpoint) -> Result<(), RunError> {
    let shape: Vec<u32> = cfg.grid.shape.iter().map(|&n| n as u32).collect();
    if cp.shape != shape {
        return Err(RunError::CheckpointMismatch(format!(
            "grid shape {:?} vs configured {:?}",
            cp.shape, shape
        )));
    }
    if cp.n_phases as usize != cfg.model.n_phases {
        return Err(RunError::CheckpointMismatch(format!(
            "{} phases vs configured {}",
            cp.n_phases, cfg.model.n_phases
        )));
    }
    for (name, a, b) in [
        ("gamma", cp.gamma, cfg.model.gamma),
        ("theta", cp.theta, cfg.model.theta),
        ("epsilon", cp.epsilon, cfg.model.epsilon),
        ("xi", cp.xi, cfg.model.xi),
    ] {
        if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
            return Err(RunError::CheckpointMismatch(format!(
                "{name} = {a} vs configured {b}"
            )));
        }
    }
    Ok(())
}

/// Decay fit on the middle 60% of the post-transient tail (samples past
/// 20% of the covered time), with the run's terminal energy as the offset.
fn fit_decay(rows: &[TimeSeriesRow]) -> Option<(f64, f64)> {
    let last = rows.last()?;
    let e_inf = last.total_energy;
    let t_final = last.t;
    let tail: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.t >= 0.2 * t_final)
        .map(|r| (r.t, r.total_energy))
        .collect();
    if tail.len() < 10 {
        return None;
    }
    let lo = tail.len() / 5;
    let hi = tail.len() - tail.len() / 5;
    let window: Vec<(f64, f64)> = tail[lo..hi]
        .iter()
        .copied()
        .filter(|(_, e)| e - e_inf > f64::EPSILON * (1.0 + e_inf.abs()))
        .collect();
    decay_rate_estimate(&window, e_inf).ok()
}

fn write_summary(
    cfg: &ExperimentConfig,
    outcome: &RunOutcome,
    rows: &[TimeSeriesRow],
    separation: Option<(f64, f64)>,
    residual: f64,
    decay: Option<(f64, f64)>,
) -> Result<(), std::io::Error> {
    let mut out = fs::File::create(cfg.output.dir.join("summary.txt"))?;
    writeln!(out, "stop_reason = {}", outcome.reason)?;
    writeln!(out, "steps = {}", outcome.state.step_count())?;
    writeln!(out, "t_final = {:.16e}", outcome.state.t())?;
    if let Some(last) = rows.last() {
        writeln!(out, "final_energy = {:.16e}", last.total_energy)?;
    }
    let max_drift = rows.iter().map(|r| r.mean_drift_max).fold(0.0, f64::max);
    let max_sum = rows
        .iter()
        .map(|r| r.constraint_violation)
        .fold(0.0, f64::max);
    let max_wsum = rows
        .iter()
        .map(|r| r.potential_sum_violation)
        .fold(0.0, f64::max);
    let min_floor = rows
        .iter()
        .map(|r| r.separation_floor)
        .fold(f64::INFINITY, f64::min);
    let max_rise = rows
        .windows(2)
        .map(|w| w[1].total_energy - w[0].total_energy)
        .fold(f64::NEG_INFINITY, f64::max);
    writeln!(out, "max_mean_drift = {max_drift:.16e}")?;
    writeln!(out, "max_constraint_violation = {max_sum:.16e}")?;
    writeln!(out, "max_potential_sum_violation = {max_wsum:.16e}")?;
    writeln!(out, "min_separation_floor = {min_floor:.16e}")?;
    writeln!(out, "max_energy_rise = {max_rise:.16e}")?;
    writeln!(out, "stationary_residual = {residual:.16e}")?;
    match decay {
        Some((omega, r2)) => {
            writeln!(out, "decay_rate_omega = {omega:.16e}")?;
            writeln!(out, "decay_fit_r2 = {r2:.16e}")?;
        }
        None => writeln!(out, "decay_rate_omega = not_measured")?,
    }
    match separation {
        Some((delta, at)) => {
            writeln!(out, "separation_delta = {delta:.16e}")?;
            writeln!(out, "separation_attained_at = {at:.16e}")?;
        }
        None => writeln!(out, "separation_delta = not_observed")?,
    }
    Ok(())
}
