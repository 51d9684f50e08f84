//! Singular mixing entropies and their Yosida regularization.
//!
//! The bulk free-energy density of the mixture is
//! `Psi(u) = sum_i psi(u_i) - (1/2) u^T A u`, built from a scalar entropy
//! `psi` that is singular at 0 and a symmetric demixing matrix `A`. The
//! default entropy is logarithmic,
//!
//! ```text
//! psi(s)   = theta * s * ln(s) + theta / e        (shifted so psi >= 0 on [0,1])
//! psi'(s)  = theta * (ln(s) + 1)
//! psi''(s) = theta / s
//! ```
//!
//! extended by `psi(s) = psi(1)`, `psi'(s) = psi'(1)`, `psi''(s) = psi''(1)`
//! for `s >= 1` and by `psi(s) = +inf` for `s < 0`. Any entropy in the
//! admissible class must satisfy
//!
//! * (curvature) `psi''(s) >= zeta > 0` on `(0, 1]`,
//! * (singularity) `psi'(s) -> -inf` as `s -> 0+`,
//! * (separation strength) `psi'(s - 2s^2) - psi'(2s^2) -> +inf` as `s -> 0+`.
//!
//! Custom entropies are admitted only after a sampled certification of the
//! three conditions; entropies diverging slower than the logarithm (for
//! example `psi'(s) = -ln|ln s|`, whose separation margin tends to `ln 2`)
//! are rejected.
//!
//! The Yosida regularization replaces `psi'` by the globally Lipschitz
//! `psi_eps'(s) = (s - J_eps(s)) / eps`, where the resolvent `J_eps(s)` is
//! the unique positive root of `r + eps*psi'(r) = s`, and defines
//! `psi_eps(s) = (eps/2) psi_eps'(s)^2 + psi(J_eps(s))`. The resolvent is
//! computed by a bisection-safeguarded Newton iteration to absolute
//! residual 1e-13.

use std::sync::Arc;

use thiserror::Error;

use crate::simplex::InteractionMatrix;

/// Strict-separation floor for exact (unregularized) entropy evaluation.
/// Derivatives of the exact entropy below this floor are an error, never a
/// clamp, so that separation violations surface loudly.
pub const EXACT_EVAL_FLOOR: f64 = 1e-14;

/// Absolute residual tolerance of the resolvent solve.
pub const RESOLVENT_TOL: f64 = 1e-13;

/// Iteration cap of the resolvent solve.
pub const RESOLVENT_MAX_ITERS: usize = 200;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("entropy derivative evaluated at {value:e}, below the separation floor {floor:e}")]
    BelowFloor { value: f64, floor: f64 },
    #[error("component {component} = {value:e} is below the separation floor {floor:e}")]
    ComponentBelowFloor {
        component: usize,
        value: f64,
        floor: f64,
    },
    #[error("separation margin requires 0 < s < 1/2, got {0}")]
    OutsideMarginDomain(f64),
    #[error("regularization strength must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("resolvent iteration did not converge after {iterations} steps (last residual {residual:e})")]
    ResolventDiverged { residual: f64, iterations: usize },
    #[error("could not bracket the resolvent root for s = {0}")]
    BracketFailed(f64),
    #[error("entropy certification failed: {0}")]
    Certification(String),
    #[error("expected {expected} components, got {got}")]
    Dimension { expected: usize, got: usize },
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum EntropyKind {
    Logarithmic,
    Custom {
        psi: ScalarFn,
        dpsi: ScalarFn,
        ddpsi: ScalarFn,
    },
}

impl std::fmt::Debug for EntropyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Logarithmic => f.write_str("Logarithmic"),
            Self::Custom { .. } => f.write_str("Custom"),
        }
    }
}

/// A singular mixing entropy of the admissible class.
#[derive(Clone, Debug)]
pub struct EntropySpec {
    theta: f64,
    kind: EntropyKind,
    zeta_floor: f64,
}

impl EntropySpec {
    /// The logarithmic entropy at absolute temperature `theta`, normalized
    /// so that `psi >= 0` on `[0, 1]` (minimum 0 at `s = 1/e`, which is the
    /// common zero of `psi` and `psi'`). Its curvature floor on `(0, 1]`
    /// is `zeta = theta`.
    pub fn logarithmic(theta: f64) -> Self {
        assert!(theta > 0.0, "temperature must be positive");
        Self {
            theta,
            kind: EntropyKind::Logarithmic,
            zeta_floor: theta,
        }
    }

    /// A custom entropy from scalar hooks for `psi`, `psi'`, `psi''` on
    /// `(0, 1]`, certified against the admissibility class before use. The
    /// hooks define the entropy in absolute terms; `theta` is kept as the
    /// nominal temperature of the model. `zeta_floor` is the claimed
    /// curvature lower bound, verified by sampling.
    pub fn custom(
        theta: f64,
        zeta_floor: f64,
        psi: ScalarFn,
        dpsi: ScalarFn,
        ddpsi: ScalarFn,
    ) -> Result<Self, PotentialError> {
        let spec = Self::custom_unchecked(theta, zeta_floor, psi, dpsi, ddpsi);
        spec.certify()?;
        Ok(spec)
    }

    /// Custom entropy without certification; intended for diagnostics such
    /// as inspecting the separation margin of a candidate entropy.
    pub fn custom_unchecked(
        theta: f64,
        zeta_floor: f64,
        psi: ScalarFn,
        dpsi: ScalarFn,
        ddpsi: ScalarFn,
    ) -> Self {
        Self {
            theta,
            kind: EntropyKind::Custom { psi, dpsi, ddpsi },
            zeta_floor,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Curvature lower bound `zeta` of the entropy on `(0, 1]`.
    pub fn zeta_floor(&self) -> f64 {
        self.zeta_floor
    }

    /// `psi(s)` with the standard extensions: `+inf` for `s < 0`, the
    /// continuous limit at `s = 0`, and the constant `psi(1)` for `s >= 1`.
    pub fn value(&self, s: f64) -> f64 {
        if s < 0.0 {
            return f64::INFINITY;
        }
        let s_eff = s.min(1.0);
        match &self.kind {
            EntropyKind::Logarithmic => {
                if s_eff == 0.0 {
                    self.theta / std::f64::consts::E
                } else {
                    self.theta * s_eff * s_eff.ln() + self.theta / std::f64::consts::E
                }
            }
            EntropyKind::Custom { psi, .. } => {
                let arg = if s_eff == 0.0 {
                    f64::MIN_POSITIVE
                } else {
                    s_eff
                };
                psi(arg)
            }
        }
    }

    /// `psi'(s)` guarded by the separation floor: arguments below
    /// [`EXACT_EVAL_FLOOR`] are an error.
    pub fn derivative(&self, s: f64) -> Result<f64, PotentialError> {
        if s < EXACT_EVAL_FLOOR {
            return Err(PotentialError::BelowFloor {
                value: s,
                floor: EXACT_EVAL_FLOOR,
            });
        }
        Ok(self.derivative_unchecked(s))
    }

    /// `psi''(s)` with the same floor guard as [`EntropySpec::derivative`].
    pub fn second_derivative(&self, s: f64) -> Result<f64, PotentialError> {
        if s < EXACT_EVAL_FLOOR {
            return Err(PotentialError::BelowFloor {
                value: s,
                floor: EXACT_EVAL_FLOOR,
            });
        }
        Ok(self.second_derivative_unchecked(s))
    }

    fn derivative_unchecked(&self, s: f64) -> f64 {
        let s_eff = s.min(1.0);
        match &self.kind {
            EntropyKind::Logarithmic => self.theta * (s_eff.ln() + 1.0),
            EntropyKind::Custom { dpsi, .. } => dpsi(s_eff),
        }
    }

    fn second_derivative_unchecked(&self, s: f64) -> f64 {
        let s_eff = s.min(1.0);
        match &self.kind {
            EntropyKind::Logarithmic => self.theta / s_eff,
            EntropyKind::Custom { ddpsi, .. } => ddpsi(s_eff),
        }
    }

    /// Separation margin `psi'(s - 2s^2) - psi'(2s^2)` for `s` in
    /// `(0, 1/2)`. For the logarithmic entropy this equals
    /// `theta * ln(1/(2s) - 1)` and diverges as `s -> 0+`; a bounded margin
    /// disqualifies the entropy from the admissible class.
    pub fn separation_margin(&self, s: f64) -> Result<f64, PotentialError> {
        if !(s > 0.0 && s < 0.5) {
            return Err(PotentialError::OutsideMarginDomain(s));
        }
        let hi = s - 2.0 * s * s;
        let lo = 2.0 * s * s;
        Ok(self.derivative_unchecked(hi) - self.derivative_unchecked(lo))
    }

    /// Sampled certification of the admissibility class:
    ///
    /// * curvature: `psi''(s) >= zeta_floor` at 10^4 points of `(0, 1]`;
    /// * singularity: `psi'(10^-k)` strictly decreasing for `k = 2..8` with
    ///   total drop at least 2;
    /// * separation strength: the margin at `s = 10^-k`, `k = 2..8`, must
    ///   grow by at least 0.05 per decade and by at least 1 in total.
    pub fn certify(&self) -> Result<(), PotentialError> {
        if !(self.zeta_floor > 0.0) {
            return Err(PotentialError::Certification(format!(
                "curvature floor must be positive, got {}",
                self.zeta_floor
            )));
        }
        let n = 10_000;
        for i in 1..=n {
            let s = i as f64 / n as f64;
            let dd = self.second_derivative_unchecked(s);
            if !(dd >= self.zeta_floor - 1e-12) {
                return Err(PotentialError::Certification(format!(
                    "psi''({s}) = {dd} is below the claimed curvature floor {}",
                    self.zeta_floor
                )));
            }
        }
        let probes: Vec<f64> = (2..=8).map(|k| 10.0_f64.powi(-k)).collect();
        let slopes: Vec<f64> = probes
            .iter()
            .map(|&s| self.derivative_unchecked(s))
            .collect();
        for w in slopes.windows(2) {
            if !(w[1] < w[0]) {
                return Err(PotentialError::Certification(
                    "psi' does not decrease towards 0".into(),
                ));
            }
        }
        if !(slopes[0] - slopes[slopes.len() - 1] >= 2.0) {
            return Err(PotentialError::Certification(
                "psi' does not diverge towards -inf near 0".into(),
            ));
        }
        let margins: Vec<f64> = probes
            .iter()
            .map(|&s| self.separation_margin(s))
            .collect::<Result<_, _>>()?;
        for w in margins.windows(2) {
            if !(w[1] >= w[0] + 0.05) {
                return Err(PotentialError::Certification(format!(
                    "separation margin stalls ({} -> {}): entropy diverges too slowly near 0",
                    w[0], w[1]
                )));
            }
        }
        if !(margins[margins.len() - 1] - margins[0] >= 1.0) {
            return Err(PotentialError::Certification(
                "separation margin is bounded: entropy diverges too slowly near 0".into(),
            ));
        }
        Ok(())
    }
}

/// Yosida regularization of an entropy: the everywhere-defined, globally
/// Lipschitz approximation of `psi'` with constant `1/eps`.
#[derive(Clone, Debug)]
pub struct YosidaRegularization {
    epsilon: f64,
    base: EntropySpec,
}

impl YosidaRegularization {
    pub fn new(epsilon: f64, base: EntropySpec) -> Result<Self, PotentialError> {
        if !(epsilon > 0.0) {
            return Err(PotentialError::NonPositiveEpsilon(epsilon));
        }
        Ok(Self { epsilon, base })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn base(&self) -> &EntropySpec {
        &self.base
    }

    /// The resolvent `J_eps(s)`: unique positive root of
    /// `r + eps * psi'(r) = s`, solved by bisection-safeguarded Newton to
    /// absolute residual [`RESOLVENT_TOL`]. For `s` beyond the constant
    /// extension threshold `1 + eps*psi'(1)` the root is closed-form.
    pub fn resolvent(&self, s: f64) -> Result<f64, PotentialError> {
        let eps = self.epsilon;
        let phi_one = self.base.derivative_unchecked(1.0);
        if s >= 1.0 + eps * phi_one {
            return Ok(s - eps * phi_one);
        }
        match &self.base.kind {
            EntropyKind::Logarithmic => self.resolvent_log(s),
            EntropyKind::Custom { .. } => self.resolvent_custom(s),
        }
    }

    // Root of e^t + eps*theta*(t + 1) - s in t = ln(r). The map is convex
    // and strictly increasing in t, with a guaranteed bracket
    // [(s-1)/(eps*theta) - 1, 0], so the safeguarded Newton always lands.
    fn resolvent_log(&self, s: f64) -> Result<f64, PotentialError> {
        let eps_theta = self.epsilon * self.base.theta;
        let tol = RESOLVENT_TOL.max(4.0 * f64::EPSILON * s.abs());
        let mut lo = (s - 1.0) / eps_theta - 1.0;
        let mut hi = 0.0_f64;
        let mut t = if s > f64::MIN_POSITIVE {
            s.min(1.0).ln()
        } else {
            lo
        };
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        let mut residual = f64::INFINITY;
        for _ in 0..RESOLVENT_MAX_ITERS {
            let et = t.exp();
            residual = et + eps_theta * (t + 1.0) - s;
            if residual.abs() < tol {
                return Ok(et);
            }
            if residual > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let slope = et + eps_theta;
            let newton = t - residual / slope;
            t = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Err(PotentialError::ResolventDiverged {
            residual,
            iterations: RESOLVENT_MAX_ITERS,
        })
    }

    // Generic entropies keep Newton in r-space, but the bisection
    // safeguard works on ln(r): roots sit at logarithmic depth for
    // strongly negative arguments (r ~ exp(s/eps)), where arithmetic
    // halving of the bracket would never arrive.
    fn resolvent_custom(&self, s: f64) -> Result<f64, PotentialError> {
        let eps = self.epsilon;
        let f = |r: f64| r + eps * self.base.derivative_unchecked(r) - s;
        let tol = RESOLVENT_TOL.max(4.0 * f64::EPSILON * s.abs());
        let mut hi = 1.0_f64;
        let mut lo = s.clamp(f64::MIN_POSITIVE, 1.0);
        let mut guard = 0;
        while f(lo) > 0.0 {
            lo *= 0.25;
            guard += 1;
            if guard > 600 || lo < 1e-300 {
                return Err(PotentialError::BracketFailed(s));
            }
        }
        let geometric = |lo: f64, hi: f64| (0.5 * (lo.ln() + hi.ln())).exp();
        let mut r = geometric(lo, hi);
        let mut residual = f64::INFINITY;
        for _ in 0..RESOLVENT_MAX_ITERS {
            residual = f(r);
            if residual.abs() < tol {
                return Ok(r);
            }
            if residual > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let slope = 1.0 + eps * self.base.second_derivative_unchecked(r);
            let newton = r - residual / slope;
            r = if newton > lo && newton < hi {
                newton
            } else {
                geometric(lo, hi)
            };
        }
        Err(PotentialError::ResolventDiverged {
            residual,
            iterations: RESOLVENT_MAX_ITERS,
        })
    }

    /// `psi_eps'(s) = (s - J_eps(s)) / eps`, evaluated through the exact
    /// chain identity `psi_eps'(s) = psi'(J_eps(s))` whenever the resolvent
    /// is large enough for the raw derivative, and through the difference
    /// quotient when `J_eps(s)` underflows towards 0.
    pub fn derivative(&self, s: f64) -> Result<f64, PotentialError> {
        let r = self.resolvent(s)?;
        if r >= EXACT_EVAL_FLOOR {
            Ok(self.base.derivative_unchecked(r))
        } else {
            Ok((s - r) / self.epsilon)
        }
    }

    /// `psi_eps(s) = (eps/2) * psi_eps'(s)^2 + psi(J_eps(s))`.
    pub fn value(&self, s: f64) -> Result<f64, PotentialError> {
        let r = self.resolvent(s)?;
        let a = if r >= EXACT_EVAL_FLOOR {
            self.base.derivative_unchecked(r)
        } else {
            (s - r) / self.epsilon
        };
        Ok(0.5 * self.epsilon * a * a + self.base.value(r))
    }

    /// `psi_eps''(s) = psi''(J) / (1 + eps * psi''(J))`, bounded between
    /// the curvature floor `zeta/(1+zeta)` and the Lipschitz cap `1/eps`.
    pub fn second_derivative(&self, s: f64) -> Result<f64, PotentialError> {
        let r = self.resolvent(s)?;
        if r < 1e-280 {
            return Ok(1.0 / self.epsilon);
        }
        let dd = self.base.second_derivative_unchecked(r);
        if !dd.is_finite() || dd > 1e280 {
            return Ok(1.0 / self.epsilon);
        }
        Ok(dd / (1.0 + self.epsilon * dd))
    }
}

/// Entropy part of the free energy: exact or Yosida-regularized.
#[derive(Clone, Debug)]
pub enum EntropyModel {
    Exact(EntropySpec),
    Regularized(YosidaRegularization),
}

impl EntropyModel {
    /// Builds the regularized model for `epsilon > 0`, the exact model for
    /// `epsilon = 0`.
    pub fn with_epsilon(spec: EntropySpec, epsilon: f64) -> Result<Self, PotentialError> {
        if epsilon == 0.0 {
            Ok(Self::Exact(spec))
        } else {
            Ok(Self::Regularized(YosidaRegularization::new(epsilon, spec)?))
        }
    }

    pub fn epsilon(&self) -> f64 {
        match self {
            Self::Exact(_) => 0.0,
            Self::Regularized(y) => y.epsilon(),
        }
    }

    pub fn spec(&self) -> &EntropySpec {
        match self {
            Self::Exact(e) => e,
            Self::Regularized(y) => y.base(),
        }
    }

    /// `psi'` or `psi_eps'`.
    pub fn phi(&self, s: f64) -> Result<f64, PotentialError> {
        match self {
            Self::Exact(e) => e.derivative(s),
            Self::Regularized(y) => y.derivative(s),
        }
    }

    /// `psi` or `psi_eps`.
    pub fn psi(&self, s: f64) -> Result<f64, PotentialError> {
        match self {
            Self::Exact(e) => Ok(e.value(s)),
            Self::Regularized(y) => y.value(s),
        }
    }

    /// `psi''` or `psi_eps''`; enters the stabilization bound of the
    /// time-stepping scheme.
    pub fn curvature(&self, s: f64) -> Result<f64, PotentialError> {
        match self {
            Self::Exact(e) => e.second_derivative(s),
            Self::Regularized(y) => y.second_derivative(s),
        }
    }
}

/// The full bulk density `Psi(u) = sum_i psi(u_i) - (1/2) u^T A u`.
#[derive(Clone, Debug)]
pub struct FreeEnergyDensity {
    pub entropy: EntropyModel,
    pub interaction: InteractionMatrix,
}

impl FreeEnergyDensity {
    pub fn new(entropy: EntropyModel, interaction: InteractionMatrix) -> Self {
        Self {
            entropy,
            interaction,
        }
    }

    pub fn n_phases(&self) -> usize {
        self.interaction.n_phases()
    }

    /// Pointwise gradient `phi(u) - A u` (no projection). With the exact
    /// entropy, a component at or below the separation floor is an error
    /// naming that component.
    pub fn gradient(&self, u: &[f64]) -> Result<Vec<f64>, PotentialError> {
        let mut out = vec![0.0; self.n_phases()];
        self.gradient_into(u, &mut out)?;
        Ok(out)
    }

    /// Allocation-free form of [`FreeEnergyDensity::gradient`] for hot
    /// loops; `out` must have `n_phases` slots.
    pub fn gradient_into(&self, u: &[f64], out: &mut [f64]) -> Result<(), PotentialError> {
        let n = self.n_phases();
        if u.len() != n || out.len() != n {
            return Err(PotentialError::Dimension {
                expected: n,
                got: u.len(),
            });
        }
        let rows = self.interaction.entries();
        for (component, (&s, row)) in u.iter().zip(rows).enumerate() {
            let phi = self.entropy.phi(s).map_err(|e| match e {
                PotentialError::BelowFloor { value, floor } => {
                    PotentialError::ComponentBelowFloor {
                        component,
                        value,
                        floor,
                    }
                }
                other => other,
            })?;
            let a: f64 = row.iter().zip(u).map(|(r, x)| r * x).sum();
            out[component] = phi - a;
        }
        Ok(())
    }

    /// Pointwise density value `Psi(u)`.
    pub fn density(&self, u: &[f64]) -> Result<f64, PotentialError> {
        let n = self.n_phases();
        if u.len() != n {
            return Err(PotentialError::Dimension {
                expected: n,
                got: u.len(),
            });
        }
        let mut bulk = 0.0;
        for &s in u {
            bulk += self.entropy.psi(s)?;
        }
        let quad = self
            .interaction
            .quadratic(u)
            .map_err(|_| PotentialError::Dimension {
                expected: n,
                got: u.len(),
            })?;
        Ok(bulk - 0.5 * quad)
    }
}
