//! Quantitative verification layer.
//!
//! Everything here is a pure function of its inputs (the separation
//! tracker is a fold over an ordered sample stream): energy and
//! dissipation accounting, conservation extremes, the exponential
//! decay-rate fit, the stationary residual, and the recursive-sequence
//! lemma that powers level-set truncation arguments.

use thiserror::Error;

use crate::discretization::{compensated_sum, gradient_energy, ChemicalPotentialField, PhaseField};
use crate::potential::{FreeEnergyDensity, PotentialError};
use crate::solver::{assemble_chemical_potential, SimulationState, SolverError};

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("excess energy is not positive at t = {t}: E - E_inf = {excess:e}")]
    NonPositiveExcess { t: f64, excess: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Per-sample energy split.
///
/// `energy` fills the spatial parts; the run loop owns `t`, `dissipation`
/// (from the chemical potential at the same state) and the step-to-step
/// delta.
#[derive(Clone, Copy, Debug, Default)]
pub struct EnergyReport {
    pub t: f64,
    /// `int Psi(u)` by the midpoint rule.
    pub bulk: f64,
    /// `(gamma/2) int |grad u|^2`, discrete Dirichlet form.
    pub gradient: f64,
    /// `bulk + gradient`.
    pub total: f64,
    /// `(alpha (w - mean w), w - mean w) = xi*N*||w - mean w||^2`.
    pub dissipation: f64,
    /// Total energy minus the previous sample's total.
    pub step_energy_delta: f64,
}

/// Midpoint-rule bulk integral plus the discrete Dirichlet energy.
pub fn energy(
    u: &PhaseField,
    f: &FreeEnergyDensity,
    gamma: f64,
) -> Result<EnergyReport, PotentialError> {
    let n = u.n_phases();
    let cells = u.n_cells();
    let vol = u.grid().cell_volume();
    let mut point = vec![0.0; n];
    let mut densities = Vec::with_capacity(cells);
    for cell in 0..cells {
        u.point(cell, &mut point);
        densities.push(f.density(&point)?);
    }
    let bulk = vol * compensated_sum(densities);
    let gradient = gradient_energy(u, gamma);
    Ok(EnergyReport {
        t: 0.0,
        bulk,
        gradient,
        total: bulk + gradient,
        dissipation: 0.0,
        step_energy_delta: 0.0,
    })
}

/// Conservation extremes of one state.
#[derive(Clone, Debug)]
pub struct ConservationReport {
    /// Per-component `|mean(u_i) - mean(u_i)(0)|`.
    pub mean_drift: Vec<f64>,
    /// `max_x |sum_i u_i(x) - 1|`.
    pub constraint_violation: f64,
    /// `max_x |sum_i w_i(x)|` of the supplied chemical potential.
    pub potential_sum_violation: f64,
    /// `min_{x,i} u_i(x)`.
    pub separation_floor: f64,
}

impl ConservationReport {
    pub fn measure(
        u: &PhaseField,
        initial_means: &[f64],
        w: Option<&ChemicalPotentialField>,
    ) -> Self {
        let mean_drift = u
            .means()
            .iter()
            .zip(initial_means)
            .map(|(a, b)| (a - b).abs())
            .collect();
        Self {
            mean_drift,
            constraint_violation: u.max_constraint_violation(),
            potential_sum_violation: w.map(|w| w.max_pointwise_sum()).unwrap_or(0.0),
            separation_floor: u.min_value(),
        }
    }

    pub fn from_state(state: &SimulationState) -> Self {
        Self::measure(state.u(), state.initial_means(), state.w())
    }

    pub fn max_mean_drift(&self) -> f64 {
        self.mean_drift.iter().copied().fold(0.0, f64::max)
    }
}

/// Worst normalized defect of the discrete energy identity
/// `E^{n+1} - E^n + dt * D^n = 0` over consecutive samples, where `D` is
/// the dissipation recorded with the earlier sample. Normalization is
/// `dt * (1 + |D^n|)`; for the first-order scheme the result is `O(dt)`
/// and halves when `dt` does.
pub fn dissipation_identity_residual(
    history: &[(f64, EnergyReport)],
) -> Result<f64, DiagnosticsError> {
    if history.len() < 2 {
        return Err(DiagnosticsError::TooFewSamples {
            needed: 2,
            got: history.len(),
        });
    }
    let mut worst = 0.0_f64;
    for pair in history.windows(2) {
        let (t0, r0) = &pair[0];
        let (t1, r1) = &pair[1];
        let dt = t1 - t0;
        if !(dt > 0.0) {
            return Err(DiagnosticsError::InvalidParams(format!(
                "history times must increase, got {t0} then {t1}"
            )));
        }
        let defect = (r1.total - r0.total + dt * r0.dissipation).abs();
        worst = worst.max(defect / (dt * (1.0 + r0.dissipation.abs())));
    }
    Ok(worst)
}

/// Least-squares fit of `ln(E(t) - e_inf)` over the supplied samples.
/// Returns `(omega, r_squared)` with `omega` the negated slope.
pub fn decay_rate_estimate(
    history: &[(f64, f64)],
    e_inf: f64,
) -> Result<(f64, f64), DiagnosticsError> {
    if history.len() < 2 {
        return Err(DiagnosticsError::TooFewSamples {
            needed: 2,
            got: history.len(),
        });
    }
    let mut xs = Vec::with_capacity(history.len());
    let mut ys = Vec::with_capacity(history.len());
    for &(t, e) in history {
        let excess = e - e_inf;
        if !(excess > 0.0) {
            return Err(DiagnosticsError::NonPositiveExcess { t, excess });
        }
        xs.push(t);
        ys.push(excess.ln());
    }
    let n = xs.len() as f64;
    let mx = compensated_sum(xs.iter().copied()) / n;
    let my = compensated_sum(ys.iter().copied()) / n;
    let sxx = compensated_sum(xs.iter().map(|x| (x - mx) * (x - mx)));
    let sxy = compensated_sum(xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)));
    if sxx == 0.0 {
        return Err(DiagnosticsError::InvalidParams(
            "all samples share one time".into(),
        ));
    }
    let slope = sxy / sxx;
    let ss_tot = compensated_sum(ys.iter().map(|y| (y - my) * (y - my)));
    let ss_res = compensated_sum(xs.iter().zip(&ys).map(|(x, y)| {
        let fit = my + slope * (x - mx);
        (y - fit) * (y - fit)
    }));
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok((-slope, r2))
}

/// `||r - mean(r)||` for `r = -gamma lap(u) + P(phi(u) - A u)`: zero
/// exactly at solutions of the discrete stationary system with the
/// mean-adjusted right-hand side. Shares the assembly path of the
/// chemical potential, so it coincides with `||w - mean(w)||`.
pub fn stationary_residual(
    u: &PhaseField,
    f: &FreeEnergyDensity,
    gamma: f64,
) -> Result<f64, SolverError> {
    Ok(assemble_chemical_potential(f, gamma, u)?.fluctuation_norm())
}

/// Running separation floor of a sample stream, ignoring samples before
/// the cutoff `tau`.
#[derive(Clone, Debug)]
pub struct SeparationTracker {
    tau: f64,
    floor: f64,
    attained_at: Option<f64>,
}

impl SeparationTracker {
    pub fn new(tau: f64) -> Self {
        Self {
            tau,
            floor: f64::INFINITY,
            attained_at: None,
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Feeds one sample. Observes only; a zero or negative floor is
    /// reported, never rejected.
    pub fn observe(&mut self, t: f64, u: &PhaseField) {
        if t < self.tau {
            return;
        }
        let m = u.min_value();
        if m < self.floor {
            self.floor = m;
            self.attained_at = Some(t);
        } else if self.attained_at.is_none() {
            self.attained_at = Some(t);
        }
    }

    /// Largest `delta` such that `u >= delta` held for every observed
    /// sample with `t >= tau`, with the time that floor was first
    /// attained. `None` before any sample qualified.
    pub fn report(&self) -> Option<(f64, f64)> {
        self.attained_at.map(|t| (self.floor, t))
    }
}

/// Parameters of the recursive inequality `y_{n+1} <= C b^n y_n^{1+eps}`.
#[derive(Clone, Copy, Debug)]
pub struct SequenceLemmaParams {
    pub c: f64,
    pub b: f64,
    pub eps: f64,
    pub y0: f64,
}

impl SequenceLemmaParams {
    pub fn validate(&self) -> Result<(), DiagnosticsError> {
        if !(self.c > 0.0 && self.b > 1.0 && self.eps > 0.0 && self.y0 >= 0.0) {
            return Err(DiagnosticsError::InvalidParams(format!(
                "need C > 0, b > 1, eps > 0, y0 >= 0; got C={}, b={}, eps={}, y0={}",
                self.c, self.b, self.eps, self.y0
            )));
        }
        Ok(())
    }

    /// Smallness threshold `theta = C^(-1/eps) * b^(-1/eps^2)`.
    pub fn threshold(&self) -> f64 {
        self.c.powf(-1.0 / self.eps) * self.b.powf(-1.0 / (self.eps * self.eps))
    }

    /// Certified decay bound `theta * b^(-n/eps)`.
    pub fn certified_bound(&self, n: usize) -> f64 {
        self.threshold() * self.b.powf(-(n as f64) / self.eps)
    }
}

#[derive(Clone, Debug)]
pub struct SequenceLemmaOutcome {
    /// `y_0 ..= y_n_max` of the extremal recursion
    /// `y_{n+1} = C b^n y_n^{1+eps}`.
    pub values: Vec<f64>,
    /// Whether `y_0 <= theta`, in which case `y_n <= theta b^(-n/eps)`.
    pub certified: bool,
    pub threshold: f64,
    /// True when an uncertified iteration overflowed and was clamped.
    pub saturated: bool,
}

/// Iterates the extremal recursion. Divergent (uncertified) sequences
/// saturate at `f64::MAX` instead of erroring.
pub fn de_giorgi_sequence(
    p: &SequenceLemmaParams,
    n_max: usize,
) -> Result<SequenceLemmaOutcome, DiagnosticsError> {
    p.validate()?;
    let threshold = p.threshold();
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(p.y0);
    let mut saturated = false;
    let mut y = p.y0;
    for n in 0..n_max {
        let mut next = p.c * p.b.powi(n as i32) * y.powf(1.0 + p.eps);
        if !next.is_finite() {
            next = f64::MAX;
            saturated = true;
        }
        values.push(next);
        y = next;
    }
    Ok(SequenceLemmaOutcome {
        values,
        certified: p.y0 <= threshold,
        threshold,
        saturated,
    })
}
