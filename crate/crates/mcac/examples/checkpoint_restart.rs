//! Checkpoint round trip: run a quench to equilibrium, write the MCAC1
//! binary state, read it back bitwise, and confirm the restarted
//! trajectory stays on the equilibrium.
//!
//! ```text
//! cargo run --release --example checkpoint_restart
//! ```

use mcac::io::{read_checkpoint, write_checkpoint, Checkpoint};
use mcac::potential::{EntropyModel, EntropySpec, FreeEnergyDensity};
use mcac::solver::{initial_condition, InitialCondition};
use mcac::{
    Composition, ConservedAllenCahn, Grid, InteractionMatrix, MobilityMatrix, SimulationState,
    SolverConfig, Stabilization,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new_1d(64, 1.0)?;
    let cfg = SolverConfig {
        gamma: 1e-2,
        dt: 1e-3,
        stabilization: Stabilization::Auto,
        yosida_epsilon: 1e-4,
        t_end: 100.0,
        equilibrium_tol: 1e-10,
        max_steps: 1_000_000,
        seed: 2024,
    };
    let mobility = MobilityMatrix::structured(2, 1.0)?;
    let free_energy = FreeEnergyDensity::new(
        EntropyModel::with_epsilon(EntropySpec::logarithmic(1.0), cfg.yosida_epsilon)?,
        InteractionMatrix::demixing(2, 5.0)?,
    );
    let solver = ConservedAllenCahn::new(&grid, cfg, &mobility, free_energy)?;

    let u0 = initial_condition(
        &InitialCondition::UniformNoise {
            mean: Composition::new(vec![0.5, 0.5])?,
            amplitude: 0.05,
            seed: 2024,
        },
        &grid,
    )?;
    let outcome = solver.run(SimulationState::new(u0), |_| Ok(()))?;
    println!(
        "quench: {} after {} steps (t = {:.3})",
        outcome.reason,
        outcome.state.step_count(),
        outcome.state.t()
    );

    let path = std::env::temp_dir().join("restart_demo.mcac");
    let cp = Checkpoint::from_field(
        outcome.state.u(),
        outcome.state.t(),
        outcome.state.step_count(),
        1e-2,
        1.0,
        1e-4,
        1.0,
    );
    write_checkpoint(&path, &cp)?;
    let back = read_checkpoint(&path)?;
    println!(
        "checkpoint round trip bitwise: {}",
        back == cp && back.data == outcome.state.u().data()
    );

    let u_eq = back.to_field(&[1.0])?;
    let mut state = SimulationState::resume(u_eq.clone(), back.t, back.step_count);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        state = solver.step(&state)?;
        worst = worst.max(state.u().l2_distance(&u_eq)?);
    }
    println!("restarted 1000 steps: max ||u(t) - u_eq|| = {worst:.3e}");
    Ok(())
}
