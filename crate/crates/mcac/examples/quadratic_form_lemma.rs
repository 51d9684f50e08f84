//! The weighted quadratic-form bound of the structured mobility:
//! `zeta^T (diag(c) alpha) zeta >= gamma_N min_i(c_i alpha_ii) |zeta|^2`
//! with `gamma_N = xi N/(N-1)`, sampled over random positive weights and
//! tangent vectors (the regime where the bound is certified).
//!
//! ```text
//! cargo run --example quadratic_form_lemma
//! ```

use mcac::rng::CounterRng;
use mcac::simplex::{apply_projector, quadratic_form_lower_bound, MobilityMatrix, TangentVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // the two-component case is tight: value equals the bound exactly
    let m2 = MobilityMatrix::structured(2, 1.0)?;
    let zeta = TangentVector::new(vec![0.8, -0.8])?;
    let (value, bound) = quadratic_form_lower_bound(&m2, &[1.0, 1.0], &zeta)?;
    println!("N=2, unit weights: value = {value}, bound = {bound} (equality)\n");

    println!(
        "{:>3} {:>8} {:>12} {:>12} {:>12}",
        "N", "draws", "min slack", "mean slack", "violations"
    );
    for &n in &[2usize, 3, 5] {
        let mut rng = CounterRng::substream(2718, n as u64);
        let mut min_slack = f64::INFINITY;
        let mut sum_slack = 0.0;
        let mut violations = 0usize;
        let draws = 1000;
        for _ in 0..draws {
            let xi = 0.1 + 0.9 * rng.next_f64();
            let m = MobilityMatrix::structured(n, xi)?;
            let c: Vec<f64> = (0..n).map(|_| 0.01 + 0.99 * rng.next_f64()).collect();
            let raw: Vec<f64> = (0..n).map(|_| rng.next_symmetric()).collect();
            let zeta = apply_projector(&raw);
            let (value, bound) = quadratic_form_lower_bound(&m, &c, &zeta)?;
            let slack = value - bound;
            if slack < -1e-12 {
                violations += 1;
            }
            min_slack = min_slack.min(slack);
            sum_slack += slack;
        }
        println!(
            "{n:>3} {draws:>8} {min_slack:>12.3e} {:>12.3e} {violations:>12}",
            sum_slack / draws as f64
        );
    }

    // zero weights degenerate gracefully: both sides vanish
    let m3 = MobilityMatrix::structured(3, 1.0)?;
    let zeta = TangentVector::new(vec![0.5, -0.5, 0.0])?;
    let (value, bound) = quadratic_form_lower_bound(&m3, &[0.0, 0.0, 0.0], &zeta)?;
    println!("\nall-zero weights: value = {value}, bound = {bound}");
    Ok(())
}
