//! Experiment configuration: plain `key = value` text.
//!
//! The format is deliberately dependency-free and diffable: UTF-8 lines,
//! `#` comments, four sections `[grid] [model] [solver] [output]`. Values
//! with several numbers are whitespace-separated. Validation collects
//! every violation instead of stopping at the first.
//!
//! ```text
//! [grid]
//! shape = 256            # cells per axis; two numbers in 2D
//! extent = 1.0           # box size per axis (default 1 each)
//!
//! [model]
//! n_phases = 3
//! theta = 1.0            # temperature (default 1)
//! gamma = 1e-2           # interface coefficient (default 1e-2)
//! xi = 1.0               # mobility strength (default 1)
//! a_demix = 6.0          # A = a_demix (I - 11^T/N); or a_matrix = N*N entries
//! epsilon = 1e-4         # Yosida strength, 0 = exact entropy (default 1e-4)
//! entropy = logarithmic
//!
//! [solver]
//! dt = 1e-3
//! t_end = 10.0
//! mean = 0.34 0.33 0.33  # initial per-component means
//! stabilization = auto   # or a nonnegative number
//! equilibrium_tol = 1e-9 # (default)
//! max_steps = 10000000   # (default)
//! seed = 0               # (default)
//! init = uniform_noise   # uniform_noise | step | custom (default uniform_noise)
//! amplitude = 0.01       # (default)
//! init_checkpoint = p    # required when init = custom
//!
//! [output]
//! cadence = 1            # rows/snapshots every this many steps (default)
//! dir = out              # (default; `--out` overrides)
//! snapshots = false      # (default)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::discretization::Grid;
use crate::potential::{EntropyModel, EntropySpec, FreeEnergyDensity};
use crate::simplex::{Composition, InteractionMatrix, MobilityMatrix};
use crate::solver::{InitialCondition, SolverConfig, SolverError, Stabilization};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("configuration invalid:\n{}", .violations.join("\n"))]
    Invalid { violations: Vec<String> },
    #[error(transparent)]
    Build(#[from] SolverError),
}

#[derive(Clone, Debug)]
pub struct GridSpec {
    pub shape: Vec<usize>,
    pub extent: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InteractionSpec {
    /// `A = lambda (I - 11^T / N)`.
    Demixing(f64),
    /// Row-major symmetric `N x N` entries.
    Matrix(Vec<f64>),
}

#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub n_phases: usize,
    pub theta: f64,
    pub gamma: f64,
    pub xi: f64,
    pub interaction: InteractionSpec,
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    UniformNoise,
    Step,
    Custom,
}

#[derive(Clone, Debug)]
pub struct SolverSpec {
    pub dt: f64,
    pub stabilization: Stabilization,
    pub t_end: f64,
    pub equilibrium_tol: f64,
    pub max_steps: u64,
    pub seed: u64,
    pub init: InitKind,
    pub amplitude: f64,
    pub mean: Vec<f64>,
    pub init_checkpoint: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct OutputSpec {
    pub cadence: u64,
    pub dir: PathBuf,
    pub snapshots: bool,
}

/// A fully validated experiment description.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    pub model: ModelSpec,
    pub solver: SolverSpec,
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::parse_with_overrides(text, &[])
    }

    /// Parses `text`, then applies `section.key = value` overrides before
    /// validation.
    pub fn parse_with_overrides(
        text: &str,
        overrides: &[(String, String)],
    ) -> Result<Self, ConfigError> {
        let mut violations = Vec::new();
        let mut map = raw_map(text, &mut violations);
        for (key, value) in overrides {
            match key.split_once('.') {
                Some((section, k)) if !section.is_empty() && !k.is_empty() => {
                    map.insert((section.to_string(), k.to_string()), value.clone());
                }
                _ => violations.push(format!(
                    "override key '{key}' must have the form section.key"
                )),
            }
        }
        build(map, violations)
    }

    pub fn build_grid(&self) -> Result<Grid, ConfigError> {
        Grid::new(&self.grid.shape, &self.grid.extent).map_err(|e| ConfigError::Invalid {
            violations: vec![format!("[grid] {e}")],
        })
    }

    pub fn interaction_matrix(&self) -> Result<InteractionMatrix, ConfigError> {
        let n = self.model.n_phases;
        let m = match &self.model.interaction {
            InteractionSpec::Demixing(lambda) => InteractionMatrix::demixing(n, *lambda),
            InteractionSpec::Matrix(flat) => {
                let rows = (0..n).map(|i| flat[i * n..(i + 1) * n].to_vec()).collect();
                InteractionMatrix::new(rows)
            }
        };
        m.map_err(|e| ConfigError::Invalid {
            violations: vec![format!("[model] interaction: {e}")],
        })
    }

    pub fn mobility(&self) -> Result<MobilityMatrix, ConfigError> {
        MobilityMatrix::structured(self.model.n_phases, self.model.xi).map_err(|e| {
            ConfigError::Invalid {
                violations: vec![format!("[model] xi: {e}")],
            }
        })
    }

    pub fn free_energy(&self) -> Result<FreeEnergyDensity, ConfigError> {
        let spec = EntropySpec::logarithmic(self.model.theta);
        let entropy =
            EntropyModel::with_epsilon(spec, self.model.epsilon).map_err(SolverError::from)?;
        Ok(FreeEnergyDensity::new(entropy, self.interaction_matrix()?))
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            gamma: self.model.gamma,
            dt: self.solver.dt,
            stabilization: self.solver.stabilization,
            yosida_epsilon: self.model.epsilon,
            t_end: self.solver.t_end,
            equilibrium_tol: self.solver.equilibrium_tol,
            max_steps: self.solver.max_steps,
            seed: self.solver.seed,
        }
    }

    /// Initial condition for the non-`custom` kinds; checkpoint-backed
    /// initial data is the caller's business (it owns file access).
    pub fn initial_condition(&self) -> Result<InitialCondition, ConfigError> {
        let mean =
            Composition::new(self.solver.mean.clone()).map_err(|e| ConfigError::Invalid {
                violations: vec![format!("[solver] mean: {e}")],
            })?;
        Ok(match self.solver.init {
            InitKind::UniformNoise => InitialCondition::UniformNoise {
                mean,
                amplitude: self.solver.amplitude,
                seed: self.solver.seed,
            },
            InitKind::Step => InitialCondition::Step {
                mean,
                amplitude: self.solver.amplitude,
            },
            InitKind::Custom => {
                return Err(ConfigError::Invalid {
                    violations: vec![
                        "[solver] init = custom must be realized from its checkpoint".into(),
                    ],
                })
            }
        })
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[grid]")?;
        writeln!(f, "shape = {}", join(&self.grid.shape))?;
        writeln!(f, "extent = {}", join(&self.grid.extent))?;
        writeln!(f, "\n[model]")?;
        writeln!(f, "n_phases = {}", self.model.n_phases)?;
        writeln!(f, "theta = {}", self.model.theta)?;
        writeln!(f, "gamma = {}", self.model.gamma)?;
        writeln!(f, "xi = {}", self.model.xi)?;
        match &self.model.interaction {
            InteractionSpec::Demixing(l) => writeln!(f, "a_demix = {l}")?,
            InteractionSpec::Matrix(m) => writeln!(f, "a_matrix = {}", join(m))?,
        }
        writeln!(f, "epsilon = {}", self.model.epsilon)?;
        writeln!(f, "entropy = logarithmic")?;
        writeln!(f, "\n[solver]")?;
        writeln!(f, "dt = {}", self.solver.dt)?;
        match self.solver.stabilization {
            Stabilization::Auto => writeln!(f, "stabilization = auto")?,
            Stabilization::Fixed(s) => writeln!(f, "stabilization = {s}")?,
        }
        writeln!(f, "t_end = {}", self.solver.t_end)?;
        writeln!(f, "equilibrium_tol = {}", self.solver.equilibrium_tol)?;
        writeln!(f, "max_steps = {}", self.solver.max_steps)?;
        writeln!(f, "seed = {}", self.solver.seed)?;
        let init = match self.solver.init {
            InitKind::UniformNoise => "uniform_noise",
            InitKind::Step => "step",
            InitKind::Custom => "custom",
        };
        writeln!(f, "init = {init}")?;
        writeln!(f, "amplitude = {}", self.solver.amplitude)?;
        writeln!(f, "mean = {}", join(&self.solver.mean))?;
        if let Some(p) = &self.solver.init_checkpoint {
            writeln!(f, "init_checkpoint = {}", p.display())?;
        }
        writeln!(f, "\n[output]")?;
        writeln!(f, "cadence = {}", self.output.cadence)?;
        writeln!(f, "dir = {}", self.output.dir.display())?;
        writeln!(f, "snapshots = {}", self.output.snapshots)
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

type RawMap = BTreeMap<(String, String), String>;

fn raw_map(text: &str, violations: &mut Vec<String>) -> RawMap {
    let mut map = RawMap::new();
    let mut section = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((head, _)) => head,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = name.trim().to_string();
            if !matches!(section.as_str(), "grid" | "model" | "solver" | "output") {
                violations.push(format!("line {}: unknown section [{section}]", lineno + 1));
            }
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                if section.is_empty() {
                    violations.push(format!(
                        "line {}: key '{}' appears before any section",
                        lineno + 1,
                        k.trim()
                    ));
                } else {
                    map.insert(
                        (section.clone(), k.trim().to_string()),
                        v.trim().to_string(),
                    );
                }
            }
            None => violations.push(format!(
                "line {}: expected 'key = value', got '{line}'",
                lineno + 1
            )),
        }
    }
    map
}

struct Reader<'a> {
    map: &'a RawMap,
    violations: Vec<String>,
}

impl<'a> Reader<'a> {
    fn take(&mut self, section: &str, key: &str) -> Option<&'a str> {
        self.map
            .get(&(section.to_string(), key.to_string()))
            .map(|s| s.as_str())
    }

    fn fail(&mut self, section: &str, key: &str, msg: impl fmt::Display) {
        self.violations.push(format!("[{section}] {key}: {msg}"));
    }

    fn parse_one<T: std::str::FromStr>(
        &mut self,
        section: &str,
        key: &str,
        default: Option<T>,
    ) -> Option<T> {
        match self.take(section, key) {
            Some(raw) => match raw.parse::<T>() {
                Ok(v) => Some(v),
                Err(_) => {
                    self.fail(section, key, format!("cannot parse '{raw}'"));
                    None
                }
            },
            None => {
                if default.is_none() {
                    self.fail(section, key, "required key is missing");
                }
                default
            }
        }
    }

    fn parse_list<T: std::str::FromStr>(
        &mut self,
        section: &str,
        key: &str,
        default: Option<Vec<T>>,
    ) -> Option<Vec<T>> {
        match self.take(section, key) {
            Some(raw) => {
                let mut out = Vec::new();
                for tok in raw.split_whitespace() {
                    match tok.parse::<T>() {
                        Ok(v) => out.push(v),
                        Err(_) => {
                            self.fail(section, key, format!("cannot parse '{tok}'"));
                            return None;
                        }
                    }
                }
                if out.is_empty() {
                    self.fail(section, key, "empty value");
                    return None;
                }
                Some(out)
            }
            None => {
                if default.is_none() {
                    self.fail(section, key, "required key is missing");
                }
                default
            }
        }
    }
}

const KNOWN_KEYS: &[(&str, &[&str])] = &[
    ("grid", &["dim", "shape", "extent"]),
    (
        "model",
        &[
            "n_phases", "theta", "gamma", "xi", "a_demix", "a_matrix", "epsilon", "entropy",
        ],
    ),
    (
        "solver",
        &[
            "dt",
            "stabilization",
            "t_end",
            "equilibrium_tol",
            "max_steps",
            "seed",
            "init",
            "amplitude",
            "mean",
            "init_checkpoint",
        ],
    ),
    ("output", &["cadence", "dir", "snapshots"]),
];

fn build(map: RawMap, mut violations: Vec<String>) -> Result<ExperimentConfig, ConfigError> {
    for (section, key) in map.keys() {
        let known = KNOWN_KEYS
            .iter()
            .find(|(s, _)| s == section)
            .map(|(_, keys)| keys.contains(&key.as_str()))
            .unwrap_or(false);
        if !known {
            violations.push(format!("[{section}] unknown key '{key}'"));
        }
    }

    let mut r = Reader {
        map: &map,
        violations,
    };

    // [grid]
    let shape: Vec<usize> = r.parse_list("grid", "shape", None).unwrap_or_default();
    let dim = r
        .parse_one::<usize>("grid", "dim", Some(shape.len().max(1)))
        .unwrap_or(1);
    if !shape.is_empty() && dim != shape.len() {
        r.fail(
            "grid",
            "dim",
            format!("dim = {dim} but shape has {} entries", shape.len()),
        );
    }
    if !(1..=2).contains(&dim) {
        r.fail("grid", "dim", "dimension must be 1 or 2");
    }
    for (axis, &n) in shape.iter().enumerate() {
        if n < 4 {
            r.fail(
                "grid",
                "shape",
                format!("axis {axis} has {n} cells, need >= 4"),
            );
        }
    }
    let extent = r
        .parse_list::<f64>("grid", "extent", Some(vec![1.0; shape.len().max(1)]))
        .unwrap_or_default();
    if !shape.is_empty() && extent.len() != shape.len() {
        r.fail(
            "grid",
            "extent",
            format!("expected {} entries, got {}", shape.len(), extent.len()),
        );
    }
    for &l in &extent {
        if !(l > 0.0) {
            r.fail("grid", "extent", format!("extent {l} must be positive"));
        }
    }

    // [model]
    let n_phases = r.parse_one::<usize>("model", "n_phases", None).unwrap_or(2);
    if n_phases < 2 {
        r.fail("model", "n_phases", "need at least 2 components");
    }
    let theta = r.parse_one("model", "theta", Some(1.0)).unwrap_or(1.0);
    if !(theta > 0.0) {
        r.fail("model", "theta", "temperature must be positive");
    }
    let gamma = r.parse_one("model", "gamma", Some(1e-2)).unwrap_or(1e-2);
    if !(gamma > 0.0) {
        r.fail("model", "gamma", "interface coefficient must be positive");
    }
    let xi = r.parse_one("model", "xi", Some(1.0)).unwrap_or(1.0);
    if !(xi > 0.0) {
        r.fail(
            "model",
            "xi",
            "mobility strength must be positive (structured mobility is positive definite on the tangent space)",
        );
    }
    let epsilon = r.parse_one("model", "epsilon", Some(1e-4)).unwrap_or(1e-4);
    if !(epsilon >= 0.0) {
        r.fail(
            "model",
            "epsilon",
            "regularization strength must be nonnegative",
        );
    }
    if let Some(variant) = r.take("model", "entropy") {
        if variant != "logarithmic" {
            let msg = format!(
                "only the logarithmic entropy can be configured from text, got '{variant}' \
                 (custom entropies enter through the library API and its certification)"
            );
            r.fail("model", "entropy", msg);
        }
    }
    let a_demix = r.take("model", "a_demix").map(str::to_string);
    let a_matrix = r.take("model", "a_matrix").map(str::to_string);
    let interaction = match (a_demix, a_matrix) {
        (Some(_), Some(_)) => {
            r.fail(
                "model",
                "a_matrix",
                "give either a_demix or a_matrix, not both",
            );
            InteractionSpec::Demixing(0.0)
        }
        (Some(_), None) => {
            let l = r.parse_one::<f64>("model", "a_demix", None).unwrap_or(0.0);
            InteractionSpec::Demixing(l)
        }
        (None, Some(_)) => {
            let flat = r
                .parse_list::<f64>("model", "a_matrix", None)
                .unwrap_or_default();
            if flat.len() != n_phases * n_phases {
                r.fail(
                    "model",
                    "a_matrix",
                    format!(
                        "expected {} entries, got {}",
                        n_phases * n_phases,
                        flat.len()
                    ),
                );
            } else {
                for i in 0..n_phases {
                    for j in (i + 1)..n_phases {
                        let (a, b) = (flat[i * n_phases + j], flat[j * n_phases + i]);
                        if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                            r.fail(
                                "model",
                                "a_matrix",
                                format!("entry ({i},{j}) = {a} vs ({j},{i}) = {b}: not symmetric"),
                            );
                        }
                    }
                }
            }
            InteractionSpec::Matrix(flat)
        }
        (None, None) => InteractionSpec::Demixing(0.0),
    };

    // [solver]
    let dt = r.parse_one::<f64>("solver", "dt", None).unwrap_or(0.0);
    if !(dt > 0.0) {
        r.fail("solver", "dt", "time step must be positive");
    }
    let t_end = r.parse_one::<f64>("solver", "t_end", None).unwrap_or(0.0);
    if !(t_end >= 0.0) {
        r.fail("solver", "t_end", "horizon must be nonnegative");
    }
    let stabilization = match r.take("solver", "stabilization") {
        None => Stabilization::Auto,
        Some("auto") => Stabilization::Auto,
        Some(raw) => match raw.parse::<f64>() {
            Ok(s) if s >= 0.0 => Stabilization::Fixed(s),
            Ok(s) => {
                r.fail(
                    "solver",
                    "stabilization",
                    format!("must be nonnegative, got {s}"),
                );
                Stabilization::Auto
            }
            Err(_) => {
                r.fail(
                    "solver",
                    "stabilization",
                    format!("expected 'auto' or a number, got '{raw}'"),
                );
                Stabilization::Auto
            }
        },
    };
    let equilibrium_tol = r
        .parse_one("solver", "equilibrium_tol", Some(1e-9))
        .unwrap_or(1e-9);
    if !(equilibrium_tol > 0.0) {
        r.fail("solver", "equilibrium_tol", "must be positive");
    }
    let max_steps = r
        .parse_one("solver", "max_steps", Some(10_000_000u64))
        .unwrap_or(10_000_000);
    let seed = r.parse_one("solver", "seed", Some(0u64)).unwrap_or(0);
    let init = match r.take("solver", "init") {
        None | Some("uniform_noise") => InitKind::UniformNoise,
        Some("step") => InitKind::Step,
        Some("custom") => InitKind::Custom,
        Some(other) => {
            let msg = format!("unknown kind '{other}' (uniform_noise | step | custom)");
            r.fail("solver", "init", msg);
            InitKind::UniformNoise
        }
    };
    let amplitude = r
        .parse_one("solver", "amplitude", Some(0.01))
        .unwrap_or(0.01);
    if !(amplitude >= 0.0) {
        r.fail("solver", "amplitude", "must be nonnegative");
    }
    let mean: Vec<f64> = r.parse_list("solver", "mean", None).unwrap_or_default();
    if !mean.is_empty() {
        if mean.len() != n_phases {
            r.fail(
                "solver",
                "mean",
                format!("expected {n_phases} entries, got {}", mean.len()),
            );
        }
        let sum: f64 = mean.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            r.fail(
                "solver",
                "mean",
                format!("component means must sum to 1 (unit-sum constraint), got {sum}"),
            );
        }
        for (i, &m) in mean.iter().enumerate() {
            if !(m > 0.0) {
                r.fail(
                    "solver",
                    "mean",
                    format!(
                        "component {i} = {m}: the mean must be interior (every component positive)"
                    ),
                );
            }
        }
    }
    let init_checkpoint = r.take("solver", "init_checkpoint").map(PathBuf::from);
    if init == InitKind::Custom && init_checkpoint.is_none() {
        r.fail("solver", "init_checkpoint", "required when init = custom");
    }

    // [output]
    let cadence = r.parse_one("output", "cadence", Some(1u64)).unwrap_or(1);
    if cadence == 0 {
        r.fail("output", "cadence", "must be at least 1");
    }
    let dir = PathBuf::from(r.take("output", "dir").unwrap_or("out"));
    let snapshots = r
        .parse_one("output", "snapshots", Some(false))
        .unwrap_or(false);

    if !r.violations.is_empty() {
        return Err(ConfigError::Invalid {
            violations: r.violations,
        });
    }
    Ok(ExperimentConfig {
        grid: GridSpec { shape, extent },
        model: ModelSpec {
            n_phases,
            theta,
            gamma,
            xi,
            interaction,
            epsilon,
        },
        solver: SolverSpec {
            dt,
            stabilization,
            t_end,
            equilibrium_tol,
            max_steps,
            seed,
            init,
            amplitude,
            mean,
            init_checkpoint,
        },
        output: OutputSpec {
            cadence,
            dir,
            snapshots,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "
[grid]
shape = 64

[model]
n_phases = 2

[solver]
dt = 1e-3
t_end = 0.1
mean = 0.5 0.5
";

    #[test]
    fn minimal_config_fills_documented_defaults() {
        let cfg = ExperimentConfig::parse(MINIMAL).unwrap();
        assert_eq!(cfg.grid.shape, vec![64]);
        assert_eq!(cfg.grid.extent, vec![1.0]);
        assert_eq!(cfg.model.theta, 1.0);
        assert_eq!(cfg.model.epsilon, 1e-4);
        assert_eq!(cfg.model.interaction, InteractionSpec::Demixing(0.0));
        assert_eq!(cfg.solver.stabilization, Stabilization::Auto);
        assert_eq!(cfg.output.cadence, 1);
        assert!(!cfg.output.snapshots);
        cfg.build_grid().unwrap();
        cfg.free_energy().unwrap();
        cfg.initial_condition().unwrap();
    }

    #[test]
    fn mean_sum_violation_is_reported() {
        let text = MINIMAL.replace("mean = 0.5 0.5", "mean = 0.5 0.6");
        match ExperimentConfig::parse(&text) {
            Err(ConfigError::Invalid { violations }) => {
                assert!(
                    violations.iter().any(|v| v.contains("sum to 1")),
                    "{violations:?}"
                );
            }
            other => panic!("expected invalid config, got {other:?}"),
        }
    }

    #[test]
    fn nonpositive_xi_is_reported() {
        let text = format!("{MINIMAL}\n[model]\nxi = -1.0\n");
        match ExperimentConfig::parse(&text) {
            Err(ConfigError::Invalid { violations }) => {
                assert!(
                    violations.iter().any(|v| v.contains("xi")),
                    "{violations:?}"
                );
            }
            other => panic!("expected invalid config, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_named() {
        let text = format!("{MINIMAL}\n[solver]\nwarp_factor = 9\n");
        match ExperimentConfig::parse(&text) {
            Err(ConfigError::Invalid { violations }) => {
                assert!(
                    violations.iter().any(|v| v.contains("warp_factor")),
                    "{violations:?}"
                );
            }
            other => panic!("expected invalid config, got {other:?}"),
        }
    }

    #[test]
    fn all_violations_are_collected() {
        let text = "
[grid]
shape = 2

[model]
n_phases = 2
xi = 0

[solver]
dt = -1
t_end = 1
mean = 0.7 0.7
";
        match ExperimentConfig::parse(text) {
            Err(ConfigError::Invalid { violations }) => {
                assert!(violations.len() >= 4, "{violations:?}");
            }
            other => panic!("expected invalid config, got {other:?}"),
        }
    }

    #[test]
    fn overrides_apply_before_validation() {
        let cfg = ExperimentConfig::parse_with_overrides(
            MINIMAL,
            &[
                ("solver.dt".into(), "5e-4".into()),
                ("model.a_demix".into(), "6.0".into()),
            ],
        )
        .unwrap();
        assert_eq!(cfg.solver.dt, 5e-4);
        assert_eq!(cfg.model.interaction, InteractionSpec::Demixing(6.0));
    }

    #[test]
    fn matrix_interaction_round_trip() {
        let text = MINIMAL.to_string() + "\n[model]\na_matrix = 0 2 2 0\n";
        let cfg = ExperimentConfig::parse(&text).unwrap();
        let a = cfg.interaction_matrix().unwrap();
        assert!((a.lambda_max() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn asymmetric_matrix_is_rejected() {
        let text = MINIMAL.to_string() + "\n[model]\na_matrix = 0 2 3 0\n";
        assert!(ExperimentConfig::parse(&text).is_err());
    }

    #[test]
    fn two_dimensional_grid() {
        let text = MINIMAL.replace("shape = 64", "shape = 16 12\nextent = 1.0 0.75");
        let cfg = ExperimentConfig::parse(&text).unwrap();
        let grid = cfg.build_grid().unwrap();
        assert_eq!(grid.dim(), 2);
        assert!((grid.spacing()[1] - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn display_round_trips_through_parse() {
        let cfg = ExperimentConfig::parse(MINIMAL).unwrap();
        let text = cfg.to_string();
        let back = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(back.solver.dt, cfg.solver.dt);
        assert_eq!(back.grid.shape, cfg.grid.shape);
        assert_eq!(back.model.n_phases, cfg.model.n_phases);
    }

    #[test]
    fn custom_init_requires_checkpoint_path() {
        let text = MINIMAL.to_string() + "\n[solver]\ninit = custom\n";
        assert!(ExperimentConfig::parse(&text).is_err());
        let ok = text + "init_checkpoint = state.mcac\n";
        let cfg = ExperimentConfig::parse(&ok).unwrap();
        assert_eq!(cfg.solver.init, InitKind::Custom);
    }
}
