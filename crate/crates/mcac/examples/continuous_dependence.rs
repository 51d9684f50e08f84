//! Continuous dependence on initial data: two runs whose initial states
//! differ by 1e-4 (with equal component means) stay within a bounded,
//! monotone-in-time multiple of that distance.
//!
//! ```text
//! cargo run --release --example continuous_dependence
//! ```

use mcac::potential::{EntropyModel, EntropySpec, FreeEnergyDensity};
use mcac::rng::CounterRng;
use mcac::solver::{initial_condition, InitialCondition};
use mcac::{
    Composition, ConservedAllenCahn, Grid, InteractionMatrix, MobilityMatrix, PhaseField,
    SimulationState, SolverConfig, Stabilization,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new_1d(128, 1.0)?;
    let cfg = SolverConfig {
        gamma: 1e-2,
        dt: 1e-3,
        stabilization: Stabilization::Auto,
        yosida_epsilon: 1e-4,
        t_end: 1.0,
        equilibrium_tol: 1e-30,
        max_steps: 10_000,
        seed: 55,
    };
    let mobility = MobilityMatrix::structured(2, 1.0)?;
    // mildly unstable: differences grow, so the bound is a real statement
    let free_energy = FreeEnergyDensity::new(
        EntropyModel::with_epsilon(EntropySpec::logarithmic(1.0), cfg.yosida_epsilon)?,
        InteractionMatrix::demixing(2, 4.5)?,
    );
    let solver = ConservedAllenCahn::new(&grid, cfg, &mobility, free_energy)?;

    let u0 = initial_condition(
        &InitialCondition::UniformNoise {
            mean: Composition::new(vec![0.5, 0.5])?,
            amplitude: 0.05,
            seed: 55,
        },
        &grid,
    )?;

    // mean-free tangent perturbation scaled to distance 1e-4
    let cells = grid.n_cells();
    let mut v = vec![0.0; 2 * cells];
    let mut rng = CounterRng::new(56);
    for c in 0..cells {
        let x = rng.next_symmetric();
        v[c] = x;
        v[cells + c] = -x;
    }
    for half in v.chunks_mut(cells) {
        let m = half.iter().sum::<f64>() / cells as f64;
        for x in half {
            *x -= m;
        }
    }
    let norm = (grid.cell_volume() * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let delta0 = 1e-4;
    for x in &mut v {
        *x *= delta0 / norm;
    }
    let perturbed = PhaseField::from_data(
        &grid,
        2,
        u0.data().iter().zip(&v).map(|(a, b)| a + b).collect(),
    )?;

    let mut s1 = SimulationState::new(u0);
    let mut s2 = SimulationState::new(perturbed);
    println!("||u1(0) - u2(0)|| = {delta0:e}, equal means\n");
    println!("{:>6}  {:>12}  {:>14}", "t", "||u1 - u2||", "growth ratio");
    let mut running_max = 0.0_f64;
    for step in 1..=1000 {
        s1 = solver.step(&s1)?;
        s2 = solver.step(&s2)?;
        if step % 100 == 0 {
            let d = s1.u().l2_distance(s2.u())?;
            running_max = running_max.max(d / delta0);
            println!("{:>6.2}  {:>12.3e}  {:>14.2}", s1.t(), d, d / delta0);
        }
    }
    println!("\nsup over [0, 1] of the ratio: {running_max:.2} (finite, bounded)");
    Ok(())
}
