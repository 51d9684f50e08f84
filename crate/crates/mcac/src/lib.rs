//! Conserved Allen-Cahn dynamics for N-component mixtures on the Gibbs
//! simplex.
//!
//! The model evolves a vector concentration field `u` with pointwise
//! `sum_i u_i = 1` by the nonlocal relaxation
//!
//! ```text
//! du/dt = -alpha (w - mean(w)),    w = -gamma lap(u) + P(phi(u) - A u),
//! ```
//!
//! the gradient flow of the free energy
//! `E(u) = int Psi(u) + (gamma/2) int |grad u|^2` under the structured
//! mobility `alpha = xi*N*P`. Subtracting the spatial mean of the chemical
//! potential makes every component mass exactly conserved; the projector
//! `P` keeps the dynamics on the simplex plane. The bulk density `Psi`
//! combines a singular mixing entropy (logarithmic by default, optionally
//! Yosida-regularized) with a quadratic demixing interaction.
//!
//! The crate is organized as a library-first toolkit:
//!
//! * [`simplex`]: exact algebra of the Gibbs simplex (projector, mobility,
//!   interaction matrix, quadratic-form bounds, simplex projection);
//! * [`potential`]: the entropy class, its certification, the Yosida
//!   regularization and the full free-energy density;
//! * [`discretization`]: cell-centered Neumann grids, mirrored Laplacian,
//!   compensated reductions, gradient energy;
//! * [`spectral`]: cosine-basis diagonalization and the implicit-step
//!   Helmholtz solve;
//! * [`solver`]: conservation-by-construction stabilized semi-implicit
//!   time stepping;
//! * [`diagnostics`]: energy/dissipation accounting, conservation and
//!   separation tracking, decay-rate fits, the recursive-sequence lemma;
//! * [`config`], [`io`], [`verify`], [`cli`]: experiment configuration,
//!   CSV/checkpoint formats, the seeded property-verification suites and
//!   the thin command-line front end.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

// `!(x > 0.0)` is used on purpose throughout validation: it rejects NaN,
// which `x <= 0.0` would let through. Index loops are kept where they
// mirror the stencil/matrix arithmetic.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod discretization;
pub mod io;
pub mod potential;
pub mod rng;
pub mod simplex;
pub mod solver;
pub mod spectral;
pub mod verify;
pub use diagnostics::{ConservationReport, EnergyReport, SeparationTracker, SequenceLemmaParams};
pub use discretization::{ChemicalPotentialField, Grid, PhaseField, ScalarField};
pub use potential::{EntropyModel, EntropySpec, FreeEnergyDensity, YosidaRegularization};
pub use simplex::{Composition, InteractionMatrix, MobilityMatrix, TangentVector};
pub use solver::{
    ConservedAllenCahn, InitialCondition, RunOutcome, SimulationState, SolverConfig, Stabilization,
    StopReason,
};
