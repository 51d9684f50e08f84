//! End-to-end checks of the command-line surface: determinism of run
//! outputs, exit codes, override handling and the sweep table.

use std::fs;
use std::path::Path;
use std::process::Command;

use mcac::cli::{cmd_run, cmd_sweep_epsilon, cmd_verify, EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME};

const CONFIG: &str = "
[grid]
shape = 64
extent = 1.0

[model]
n_phases = 2
theta = 1.0
gamma = 1e-2
a_demix = 5.0
epsilon = 1e-4

[solver]
dt = 1e-3
t_end = 0.2
mean = 0.5 0.5
amplitude = 0.05
seed = 99

[output]
cadence = 4
";

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("exp.conf");
    fs::write(&path, text).unwrap();
    path
}

fn overrides(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[test]
fn seeded_runs_produce_byte_identical_series() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    assert_eq!(cmd_run(&cfg, &[], Some(&out_a)), EXIT_OK);
    assert_eq!(cmd_run(&cfg, &[], Some(&out_b)), EXIT_OK);
    let a = fs::read(out_a.join("series.csv")).unwrap();
    let b = fs::read(out_b.join("series.csv")).unwrap();
    assert_eq!(a, b);
    let fa = fs::read(out_a.join("final_state.mcac")).unwrap();
    let fb = fs::read(out_b.join("final_state.mcac")).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn row_count_follows_cadence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("out");
    assert_eq!(cmd_run(&cfg, &[], Some(&out)), EXIT_OK);
    let text = fs::read_to_string(out.join("series.csv")).unwrap();
    // 200 steps at cadence 4: one initial row plus every fourth step
    let rows = text.lines().count() - 1;
    assert_eq!(rows, 200 / 4 + 1);
}

#[test]
fn uniform_initial_state_reports_zero_drift_and_dissipation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("out");
    let code = cmd_run(
        &cfg,
        &overrides(&[("solver.amplitude", "0"), ("solver.t_end", "0.02")]),
        Some(&out),
    );
    assert_eq!(code, EXIT_OK);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    let field = |name: &str| -> f64 {
        summary
            .lines()
            .find(|l| l.starts_with(name))
            .and_then(|l| l.split('=').nth(1))
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    assert_eq!(field("max_mean_drift"), 0.0);
    assert!(field("max_constraint_violation") < 1e-13);
    // a uniform state has constant chemical potential: no dissipation
    for line in fs::read_to_string(out.join("series.csv"))
        .unwrap()
        .lines()
        .skip(1)
    {
        let dissipation: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(dissipation < 1e-20, "dissipation {dissipation}");
    }
}

#[test]
fn config_violations_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &CONFIG.replace("mean = 0.5 0.5", "mean = 0.5 0.6"),
    );
    assert_eq!(cmd_run(&cfg, &[], None), EXIT_CONFIG);
    // missing file is a configuration problem too
    assert_eq!(
        cmd_run(Path::new("/nonexistent.conf"), &[], None),
        EXIT_CONFIG
    );
}

#[test]
fn exact_entropy_with_reckless_time_step_fails_loudly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("out");
    let code = cmd_run(
        &cfg,
        &overrides(&[
            ("model.epsilon", "0"),
            ("solver.dt", "10.0"),
            ("solver.t_end", "100.0"),
        ]),
        Some(&out),
    );
    assert_eq!(code, EXIT_RUNTIME);
}

#[test]
fn overrides_change_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("out");
    assert_eq!(
        cmd_run(&cfg, &overrides(&[("solver.t_end", "0.05")]), Some(&out)),
        EXIT_OK
    );
    let text = fs::read_to_string(out.join("series.csv")).unwrap();
    assert_eq!(text.lines().count() - 1, 50 / 4 + 1);
}

#[test]
fn verify_subcommand_exit_codes() {
    assert_eq!(cmd_verify("lemmas"), EXIT_OK);
    assert_eq!(cmd_verify("nonsense"), EXIT_CONFIG);
}

#[test]
fn sweep_writes_table_and_per_epsilon_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("sweep");
    let code = cmd_sweep_epsilon(
        &cfg,
        &overrides(&[("solver.t_end", "0.05")]),
        &[1e-2, 1e-3, 1e-4],
        Some(&out),
    );
    assert_eq!(code, EXIT_OK);
    let table = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut energies = Vec::new();
    let mut deviations = Vec::new();
    for line in table.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 4);
        energies.push(cols[1]);
        deviations.push(cols[3]);
    }
    assert_eq!(deviations.len(), 3);
    // the slope deviation column shrinks monotonically with epsilon
    assert!(deviations.windows(2).all(|w| w[1] < w[0]));
    // and the final energies converge: successive gaps shrink
    let gaps: Vec<f64> = energies.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "gaps {gaps:?}");
    assert!(out.join("eps-1e-3/series.csv").exists());
}

#[test]
fn sweep_with_one_epsilon_degenerates_to_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("single");
    let code = cmd_sweep_epsilon(
        &cfg,
        &overrides(&[("solver.t_end", "0.05")]),
        &[1e-4],
        Some(&out),
    );
    assert_eq!(code, EXIT_OK);
    assert!(out.join("eps-1e-4/series.csv").exists());
    assert!(out.join("eps-1e-4/summary.txt").exists());
    assert_eq!(
        fs::read_to_string(out.join("sweep.csv"))
            .unwrap()
            .lines()
            .count(),
        2
    );
}

#[test]
fn checkpoint_restart_through_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("first");
    assert_eq!(cmd_run(&cfg, &[], Some(&out)), EXIT_OK);
    let checkpoint = out.join("final_state.mcac");

    // resume from the final state; means and floors carry over
    let out2 = dir.path().join("second");
    let code = cmd_run(
        &cfg,
        &overrides(&[
            ("solver.init", "custom"),
            ("solver.init_checkpoint", checkpoint.to_str().unwrap()),
            ("solver.t_end", "0.4"),
        ]),
        Some(&out2),
    );
    assert_eq!(code, EXIT_OK);
    let rows = fs::read_to_string(out2.join("series.csv")).unwrap();
    let first_row = rows.lines().nth(1).unwrap();
    let t0: f64 = first_row.split(',').next().unwrap().parse().unwrap();
    assert!((t0 - 0.2).abs() < 1e-9, "resumed at t = {t0}");

    // a mismatched model parameter is rejected before stepping
    let code = cmd_run(
        &cfg,
        &overrides(&[
            ("solver.init", "custom"),
            ("solver.init_checkpoint", checkpoint.to_str().unwrap()),
            ("model.theta", "2.0"),
        ]),
        Some(&dir.path().join("third")),
    );
    assert_eq!(code, EXIT_RUNTIME);
}

#[test]
fn binary_reports_version_and_runs_verify() {
    let exe = env!("CARGO_BIN_EXE_mcac");
    let out = Command::new(exe).arg("--help").output().unwrap();
    assert!(out.status.success());
    let help = String::from_utf8_lossy(&out.stdout);
    for sub in ["run", "verify", "sweep-epsilon"] {
        assert!(help.contains(sub), "help lacks {sub}");
    }

    let out = Command::new(exe)
        .args(["verify", "lemmas"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS]"));

    let out = Command::new(exe)
        .args(["verify", "bogus"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
