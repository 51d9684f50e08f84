//! The simplex algebra layer: the tangent-space projector, the structured
//! mobility acting as `xi*N*P`, its spectrum, and the Euclidean projection
//! of arbitrary vectors onto the Gibbs simplex.
//!
//! ```text
//! cargo run --example simplex_projection
//! ```

use mcac::simplex::{
    apply_mobility, apply_projector, project_to_simplex, symmetric_eigenvalues, MobilityMatrix,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v = [1.0, 0.0, 0.0];
    let p = apply_projector(&v);
    println!("P{v:?} = {:?}  (sums to zero)", p.values());

    let m = MobilityMatrix::structured(3, 1.0)?;
    println!("\nstructured mobility, N = 3, xi = 1:");
    for row in m.to_dense() {
        println!("  {row:?}");
    }
    println!(
        "alpha * (1,1,1) = {:?}",
        apply_mobility(&m, &[1.0, 1.0, 1.0])?
    );
    println!(
        "alpha * (1,-1,0) = {:?}  (= xi*N on the tangent space)",
        apply_mobility(&m, &[1.0, -1.0, 0.0])?
    );
    println!("eigenvalues: {:?}", symmetric_eigenvalues(&m.to_dense()));

    println!("\nEuclidean projection onto the Gibbs simplex:");
    for v in [
        vec![0.5, 0.5],
        vec![1.2, -0.2],
        vec![0.9, 0.8, 0.7],
        vec![-1.0, 0.4, 3.0],
    ] {
        let c = project_to_simplex(&v)?;
        println!("  {v:?} -> {:?}", c.values());
    }
    Ok(())
}
