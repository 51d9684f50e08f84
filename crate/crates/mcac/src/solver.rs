//! Conservation-by-construction time stepping.
//!
//! One step of the stabilized semi-implicit scheme advances
//! `du/dt = -xi*N*(w - mean(w))` by treating the interface term and a
//! stabilization shift implicitly and the (projected) bulk slope
//! explicitly: per component and per cosine mode `k >= 1`,
//!
//! ```text
//! (1 + dt*xi*N*(S + gamma*mu_k)) u_hat[k]^{n+1}
//!     = (1 + dt*xi*N*S) u_hat[k]^n - dt*xi*N * g_hat[k]^n ,
//! g = P(phi(u^n) - A u^n),
//! ```
//!
//! while the constant mode is pinned to the initial per-component mean.
//! Dropping the constant mode realizes the `w - mean(w)` subtraction
//! exactly, so component masses never drift; the pointwise unit-sum
//! constraint is preserved because every term of the update lies in the
//! tangent space, with accumulated rounding removed after each
//! reconstruction. With `S >= (lambda_A + max psi'')/2` along the step the
//! discrete free energy is non-increasing.
//!
//! Only the structured mobility is accepted: the continuous-dependence
//! estimate behind uniqueness needs it, and it is what turns the nonlocal
//! multiplier into a plain mean subtraction.

use thiserror::Error;

use crate::discretization::{
    laplacian_slice, mean_of_slice, ChemicalPotentialField, FieldError, Grid, PhaseField,
};
use crate::potential::{FreeEnergyDensity, PotentialError};
use crate::rng::CounterRng;
use crate::simplex::{Composition, MobilityMatrix, SimplexError};
use crate::spectral::SpectralSolver;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("time stepping requires the structured mobility form")]
    UnsupportedMobility,
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error(
        "phase counts disagree: mobility {mobility}, interaction {interaction}, field {field}"
    )]
    PhaseCountMismatch {
        mobility: usize,
        interaction: usize,
        field: usize,
    },
    #[error("entropy evaluation failed at cell {cell}, component {component}: {source}")]
    Entropy {
        cell: usize,
        component: usize,
        source: PotentialError,
    },
    #[error("initial mean must be interior: component {component} = {value}")]
    MeanNotInterior { component: usize, value: f64 },
    #[error("noise amplitude {amplitude} leaves the simplex (min {min}, max {max})")]
    AmplitudeTooLarge { amplitude: f64, min: f64, max: f64 },
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

/// Stabilization shift of the implicit part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Stabilization {
    /// `S = (lambda_A + psi''(delta_ref)) / 2`, with `delta_ref` the
    /// running separation floor of the trajectory (monotone
    /// non-increasing), recomputed every step.
    Auto,
    /// Fixed nonnegative shift.
    Fixed(f64),
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Interface coefficient `gamma`.
    pub gamma: f64,
    /// Time step.
    pub dt: f64,
    pub stabilization: Stabilization,
    /// Regularization strength the free energy was built with; recorded in
    /// checkpoints and reports.
    pub yosida_epsilon: f64,
    pub t_end: f64,
    /// Threshold on the discrete `||du/dt||` below which the run stops.
    pub equilibrium_tol: f64,
    pub max_steps: u64,
    /// Root seed of all randomness in the experiment.
    pub seed: u64,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.gamma > 0.0) {
            return Err(SolverError::Config(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.dt > 0.0) {
            return Err(SolverError::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if let Stabilization::Fixed(s) = self.stabilization {
            if !(s >= 0.0) {
                return Err(SolverError::Config(format!(
                    "stabilization must be nonnegative, got {s}"
                )));
            }
        }
        if !(self.equilibrium_tol > 0.0) {
            return Err(SolverError::Config(format!(
                "equilibrium tolerance must be positive, got {}",
                self.equilibrium_tol
            )));
        }
        if !(self.yosida_epsilon >= 0.0) {
            return Err(SolverError::Config(format!(
                "regularization strength must be nonnegative, got {}",
                self.yosida_epsilon
            )));
        }
        Ok(())
    }
}

/// Trajectory state owned by one logical execution at a time.
#[derive(Clone, Debug)]
pub struct SimulationState {
    t: f64,
    u: PhaseField,
    w: Option<ChemicalPotentialField>,
    step_count: u64,
    initial_means: Vec<f64>,
    separation_cap: f64,
}

impl SimulationState {
    /// Fresh state at `t = 0`; records the per-component means that every
    /// later step anchors to.
    pub fn new(u: PhaseField) -> Self {
        let initial_means = u.means();
        let separation_cap = u.min_value();
        Self {
            t: 0.0,
            u,
            w: None,
            step_count: 0,
            initial_means,
            separation_cap,
        }
    }

    /// State resumed from a checkpoint.
    pub fn resume(u: PhaseField, t: f64, step_count: u64) -> Self {
        let mut s = Self::new(u);
        s.t = t;
        s.step_count = step_count;
        s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn u(&self) -> &PhaseField {
        &self.u
    }

    /// Chemical potential last attached by a diagnostic pass, if any.
    pub fn w(&self) -> Option<&ChemicalPotentialField> {
        self.w.as_ref()
    }

    pub fn set_potential(&mut self, w: ChemicalPotentialField) {
        self.w = Some(w);
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn initial_means(&self) -> &[f64] {
        &self.initial_means
    }

    /// Running minimum of all components since the start of the run.
    pub fn separation_cap(&self) -> f64 {
        self.separation_cap
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    ReachedTEnd,
    ReachedEquilibrium,
    MaxSteps,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::ReachedTEnd => "reached_t_end",
            Self::ReachedEquilibrium => "reached_equilibrium",
            Self::MaxSteps => "max_steps",
        };
        f.write_str(s)
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub state: SimulationState,
    pub reason: StopReason,
}

/// The conserved Allen-Cahn stepper bound to one grid and one model.
#[derive(Clone, Debug)]
pub struct ConservedAllenCahn {
    cfg: SolverConfig,
    xi: f64,
    energy: FreeEnergyDensity,
    spectral: SpectralSolver,
    n_phases: usize,
}

impl ConservedAllenCahn {
    pub fn new(
        grid: &Grid,
        cfg: SolverConfig,
        mobility: &MobilityMatrix,
        energy: FreeEnergyDensity,
    ) -> Result<Self, SolverError> {
        cfg.validate()?;
        let xi = match mobility {
            MobilityMatrix::Structured { xi, .. } => *xi,
            MobilityMatrix::General { .. } => return Err(SolverError::UnsupportedMobility),
        };
        let n_phases = mobility.n_phases();
        if energy.n_phases() != n_phases {
            return Err(SolverError::PhaseCountMismatch {
                mobility: n_phases,
                interaction: energy.n_phases(),
                field: n_phases,
            });
        }
        Ok(Self {
            cfg,
            xi,
            energy,
            spectral: SpectralSolver::new(grid),
            n_phases,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn energy_density(&self) -> &FreeEnergyDensity {
        &self.energy
    }

    pub fn grid(&self) -> &Grid {
        self.spectral.grid()
    }

    pub fn n_phases(&self) -> usize {
        self.n_phases
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `xi * N`: the mobility acts as this multiple of the projector.
    pub fn mobility_gain(&self) -> f64 {
        self.xi * self.n_phases as f64
    }

    fn check_field(&self, u: &PhaseField) -> Result<(), SolverError> {
        if u.grid() != self.spectral.grid() {
            return Err(SolverError::Field(FieldError::GridMismatch));
        }
        if u.n_phases() != self.n_phases {
            return Err(SolverError::PhaseCountMismatch {
                mobility: self.n_phases,
                interaction: self.energy.n_phases(),
                field: u.n_phases(),
            });
        }
        Ok(())
    }

    /// Chemical potential `w = -gamma lap(u) + P(phi(u) - A u)`; pointwise
    /// component sums vanish up to the Laplacian of the unit-sum rounding.
    pub fn chemical_potential(
        &self,
        u: &PhaseField,
    ) -> Result<ChemicalPotentialField, SolverError> {
        self.check_field(u)?;
        assemble_chemical_potential(&self.energy, self.cfg.gamma, u)
    }

    /// Stabilization shift for the coming step together with the updated
    /// running separation floor.
    pub fn stabilization(&self, state: &SimulationState) -> Result<(f64, f64), SolverError> {
        let cap = state.separation_cap.min(state.u.min_value());
        let s = match self.cfg.stabilization {
            Stabilization::Fixed(s) => s,
            Stabilization::Auto => {
                let curvature = self.energy.entropy.curvature(cap)?;
                (0.5 * (self.energy.interaction.lambda_max() + curvature)).max(0.0)
            }
        };
        Ok((s, cap))
    }

    /// One stabilized semi-implicit step. Per-component means stay pinned
    /// to the state's initial means; pointwise unit sums are preserved to
    /// rounding; `t` advances by `dt`.
    pub fn step(&self, state: &SimulationState) -> Result<SimulationState, SolverError> {
        self.check_field(&state.u)?;
        let n = self.n_phases;
        let cells = state.u.n_cells();
        let mut g = vec![0.0; n * cells];
        projected_gradient_field(&self.energy, &state.u, &mut g)?;
        let (s_shift, cap) = self.stabilization(state)?;
        let dt_m = self.cfg.dt * self.mobility_gain();
        let explicit_gain = 1.0 + dt_m * s_shift;
        let symbol = self.spectral.symbol();

        let mut new_data = vec![0.0; n * cells];
        for i in 0..n {
            let u_hat = self.spectral.forward(state.u.component(i));
            let mut out_hat = self.spectral.forward(&g[i * cells..(i + 1) * cells]);
            out_hat[0] = state.initial_means[i] * cells as f64;
            for k in 1..cells {
                let denom = 1.0 + dt_m * (s_shift + self.cfg.gamma * symbol[k]);
                out_hat[k] = (u_hat[k] * explicit_gain - dt_m * out_hat[k]) / denom;
            }
            new_data[i * cells..(i + 1) * cells].copy_from_slice(&self.spectral.inverse(&out_hat));
        }

        // remove unit-sum rounding dust; the target is the sum of the
        // anchored means so this never competes with mass conservation
        let sum_target: f64 = state.initial_means.iter().sum();
        for cell in 0..cells {
            let mut sum = 0.0;
            for i in 0..n {
                sum += new_data[i * cells + cell];
            }
            let d = (sum - sum_target) / n as f64;
            for i in 0..n {
                new_data[i * cells + cell] -= d;
            }
        }

        Ok(SimulationState {
            t: state.t + self.cfg.dt,
            u: PhaseField::from_data(state.u.grid(), n, new_data)?,
            w: None,
            step_count: state.step_count + 1,
            initial_means: state.initial_means.clone(),
            separation_cap: cap,
        })
    }

    /// Advances until `t >= t_end`, equilibrium (`||du/dt||` below the
    /// configured tolerance) or the step budget. The hook runs on the
    /// initial state and after every step; cadence filtering is the
    /// hook's business.
    pub fn run<F>(&self, initial: SimulationState, mut hook: F) -> Result<RunOutcome, SolverError>
    where
        F: FnMut(&mut SimulationState) -> Result<(), SolverError>,
    {
        let mut state = initial;
        hook(&mut state)?;
        let mut steps_taken = 0u64;
        loop {
            // half-step slack absorbs the accumulated rounding of t += dt
            if state.t >= self.cfg.t_end - 0.5 * self.cfg.dt {
                return Ok(RunOutcome {
                    state,
                    reason: StopReason::ReachedTEnd,
                });
            }
            if steps_taken >= self.cfg.max_steps {
                return Ok(RunOutcome {
                    state,
                    reason: StopReason::MaxSteps,
                });
            }
            let next = self.step(&state)?;
            let rate = next.u.l2_distance(&state.u)? / self.cfg.dt;
            state = next;
            steps_taken += 1;
            hook(&mut state)?;
            if rate < self.cfg.equilibrium_tol {
                return Ok(RunOutcome {
                    state,
                    reason: StopReason::ReachedEquilibrium,
                });
            }
        }
    }
}

/// Projected bulk slope `g = P(phi(u) - A u)` pointwise, component-major
/// into `out`. Entropy failures carry the cell and component.
pub(crate) fn projected_gradient_field(
    energy: &FreeEnergyDensity,
    u: &PhaseField,
    out: &mut [f64],
) -> Result<(), SolverError> {
    let n = u.n_phases();
    let cells = u.n_cells();
    let mut point = vec![0.0; n];
    let mut grad = vec![0.0; n];
    for cell in 0..cells {
        u.point(cell, &mut point);
        energy
            .gradient_into(&point, &mut grad)
            .map_err(|e| match e {
                PotentialError::ComponentBelowFloor {
                    component,
                    value,
                    floor,
                } => SolverError::Entropy {
                    cell,
                    component,
                    source: PotentialError::BelowFloor { value, floor },
                },
                other => SolverError::Potential(other),
            })?;
        let mean = grad.iter().sum::<f64>() / n as f64;
        for i in 0..n {
            out[i * cells + cell] = grad[i] - mean;
        }
    }
    Ok(())
}

/// Assembles `w = -gamma lap(u) + P(phi(u) - A u)`. The stationary
/// residual reuses this exact path, so the two quantities agree to the
/// last bit.
pub fn assemble_chemical_potential(
    energy: &FreeEnergyDensity,
    gamma: f64,
    u: &PhaseField,
) -> Result<ChemicalPotentialField, SolverError> {
    let n = u.n_phases();
    if energy.n_phases() != n {
        return Err(SolverError::PhaseCountMismatch {
            mobility: n,
            interaction: energy.n_phases(),
            field: n,
        });
    }
    let cells = u.n_cells();
    let mut data = vec![0.0; n * cells];
    projected_gradient_field(energy, u, &mut data)?;
    let mut lap = vec![0.0; cells];
    for i in 0..n {
        laplacian_slice(u.grid(), u.component(i), &mut lap);
        let dst = &mut data[i * cells..(i + 1) * cells];
        for (d, &l) in dst.iter_mut().zip(&lap) {
            *d -= gamma * l;
        }
    }
    Ok(ChemicalPotentialField::from_phase_layout(
        PhaseField::from_data(u.grid(), n, data)?,
    ))
}

/// How to realize the initial datum.
#[derive(Clone, Debug)]
pub enum InitialCondition {
    /// `u = M + amplitude * eta` with `eta` a pointwise tangent-space
    /// perturbation whose per-component means are removed exactly;
    /// deterministic per seed (component-major SplitMix64 stream).
    UniformNoise {
        mean: Composition,
        amplitude: f64,
        seed: u64,
    },
    /// Two half-domain plateaus `M ± amplitude * (e_1 - e_2)` split along
    /// the first axis (middle column zeroed when the count is odd, so
    /// means stay exact).
    Step { mean: Composition, amplitude: f64 },
    /// Caller-supplied field, validated against the simplex invariants.
    Custom(PhaseField),
}

/// Builds the initial phase field on `grid`. Component means are exact,
/// every point lies in the simplex, and equal seeds give bitwise equal
/// fields.
pub fn initial_condition(kind: &InitialCondition, grid: &Grid) -> Result<PhaseField, SolverError> {
    match kind {
        InitialCondition::UniformNoise {
            mean,
            amplitude,
            seed,
        } => {
            require_interior(mean)?;
            let n = mean.n_phases();
            let cells = grid.n_cells();
            let mut eta = vec![0.0; n * cells];
            let mut rng = CounterRng::new(*seed);
            for v in eta.iter_mut() {
                *v = rng.next_symmetric();
            }
            // pointwise projection onto the tangent space
            for cell in 0..cells {
                let mut sum = 0.0;
                for i in 0..n {
                    sum += eta[i * cells + cell];
                }
                let m = sum / n as f64;
                for i in 0..n {
                    eta[i * cells + cell] -= m;
                }
            }
            // exact per-component mean removal
            for i in 0..n {
                let m = mean_of_slice(&eta[i * cells..(i + 1) * cells]);
                for v in &mut eta[i * cells..(i + 1) * cells] {
                    *v -= m;
                }
            }
            let mut data = vec![0.0; n * cells];
            for i in 0..n {
                let base = mean.values()[i];
                for c in 0..cells {
                    data[i * cells + c] = base + amplitude * eta[i * cells + c];
                }
            }
            finish_in_simplex(grid, n, data, *amplitude)
        }
        InitialCondition::Step { mean, amplitude } => {
            require_interior(mean)?;
            let n = mean.n_phases();
            let cells = grid.n_cells();
            let nx = grid.shape()[0];
            let mut data = vec![0.0; n * cells];
            for cell in 0..cells {
                let ix = cell % nx;
                let sign = if 2 * ix + 1 == nx {
                    0.0
                } else if 2 * ix + 1 < nx {
                    1.0
                } else {
                    -1.0
                };
                for i in 0..n {
                    let dir = match i {
                        0 => 1.0,
                        1 => -1.0,
                        _ => 0.0,
                    };
                    data[i * cells + cell] = mean.values()[i] + amplitude * sign * dir;
                }
            }
            finish_in_simplex(grid, n, data, *amplitude)
        }
        InitialCondition::Custom(field) => {
            field.validate(1e-10, 1e-10)?;
            Ok(field.clone())
        }
    }
}

fn require_interior(mean: &Composition) -> Result<(), SolverError> {
    for (component, &value) in mean.values().iter().enumerate() {
        if !(value > 0.0) {
            return Err(SolverError::MeanNotInterior { component, value });
        }
    }
    Ok(())
}

fn finish_in_simplex(
    grid: &Grid,
    n: usize,
    data: Vec<f64>,
    amplitude: f64,
) -> Result<PhaseField, SolverError> {
    let field = PhaseField::from_data(grid, n, data)?;
    let (min, max) = (field.min_value(), field.max_value());
    if min < 0.0 || max > 1.0 {
        return Err(SolverError::AmplitudeTooLarge {
            amplitude,
            min,
            max,
        });
    }
    Ok(field)
}
