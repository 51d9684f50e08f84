//! Cosine-basis diagonalization of the mirrored Neumann Laplacian.
//!
//! On a cell-centered grid with ghost-cell reflection, the vectors
//! `v_k(j) = cos(pi k (j + 1/2) / n)` are exact eigenvectors of the
//! discrete Laplacian with eigenvalues `-mu_k`,
//! `mu_k = (2/h^2)(1 - cos(pi k / n)) = (4/h^2) sin^2(pi k / (2n))`,
//! including the boundary rows. A DCT-II maps cell values onto this basis
//! and a scaled DCT-III maps back, so `(a I - b lap)` inverts pointwise in
//! coefficient space. In 2D the transform is applied per axis and the
//! symbols add.

use std::sync::Arc;

use rustdct::{DctPlanner, TransformType2And3};

use crate::discretization::{laplacian, spatial_mean, FieldError, Grid, ScalarField};

/// Residual gate of [`SpectralSolver::helmholtz_solve`], relative to
/// `1 + |rhs|_inf`.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-10;

/// Diagonalizing transform bound to one grid.
#[derive(Clone)]
pub struct SpectralSolver {
    grid: Grid,
    plans: Vec<Arc<dyn TransformType2And3<f64>>>,
    symbol: Vec<f64>,
}

impl std::fmt::Debug for SpectralSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralSolver")
            .field("grid", &self.grid)
            .finish()
    }
}

fn axis_symbol(n: usize, h: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let s = (std::f64::consts::PI * k as f64 / (2.0 * n as f64)).sin();
            4.0 * s * s / (h * h)
        })
        .collect()
}

impl SpectralSolver {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = DctPlanner::new();
        let plans: Vec<_> = grid.shape().iter().map(|&n| planner.plan_dct2(n)).collect();
        let symbol = match grid.dim() {
            1 => axis_symbol(grid.shape()[0], grid.spacing()[0]),
            _ => {
                let sx = axis_symbol(grid.shape()[0], grid.spacing()[0]);
                let sy = axis_symbol(grid.shape()[1], grid.spacing()[1]);
                let mut out = Vec::with_capacity(sx.len() * sy.len());
                for &my in &sy {
                    for &mx in &sx {
                        out.push(mx + my);
                    }
                }
                out
            }
        };
        Self {
            grid: grid.clone(),
            plans,
            symbol,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Symbol of `-lap` per coefficient, same row-major layout as field
    /// data. Entry 0 is the constant mode (symbol 0).
    pub fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    /// Unnormalized DCT-II along every axis.
    pub fn forward(&self, data: &[f64]) -> Vec<f64> {
        let mut buf = data.to_vec();
        self.transform_axes(&mut buf, true);
        buf
    }

    /// Inverse of [`SpectralSolver::forward`]: DCT-III scaled by `2/n` per
    /// axis.
    pub fn inverse(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut buf = coeffs.to_vec();
        self.transform_axes(&mut buf, false);
        let scale: f64 = self.grid.shape().iter().map(|&n| 2.0 / n as f64).product();
        for v in &mut buf {
            *v *= scale;
        }
        buf
    }

    fn transform_axes(&self, buf: &mut [f64], forward: bool) {
        match self.grid.dim() {
            1 => {
                let plan = &self.plans[0];
                let mut scratch = vec![0.0; plan.get_scratch_len()];
                if forward {
                    plan.process_dct2_with_scratch(buf, &mut scratch);
                } else {
                    plan.process_dct3_with_scratch(buf, &mut scratch);
                }
            }
            _ => {
                let (nx, ny) = (self.grid.shape()[0], self.grid.shape()[1]);
                let plan_x = &self.plans[0];
                let plan_y = &self.plans[1];
                let mut scratch = vec![0.0; plan_x.get_scratch_len().max(plan_y.get_scratch_len())];
                for j in 0..ny {
                    let row = &mut buf[j * nx..(j + 1) * nx];
                    if forward {
                        plan_x.process_dct2_with_scratch(row, &mut scratch);
                    } else {
                        plan_x.process_dct3_with_scratch(row, &mut scratch);
                    }
                }
                let mut col = vec![0.0; ny];
                for i in 0..nx {
                    for j in 0..ny {
                        col[j] = buf[j * nx + i];
                    }
                    if forward {
                        plan_y.process_dct2_with_scratch(&mut col, &mut scratch);
                    } else {
                        plan_y.process_dct3_with_scratch(&mut col, &mut scratch);
                    }
                    for j in 0..ny {
                        buf[j * nx + i] = col[j];
                    }
                }
            }
        }
    }

    /// Solves `(a I - b lap) x = rhs` with the Neumann closure.
    ///
    /// Requires `a >= 0`, `b >= 0`. For `a = 0` the operator is singular on
    /// constants: the right-hand side must then have zero mean within
    /// `1e-10 (1 + |rhs|_inf)` and the returned solution is the zero-mean
    /// one. The result is verified against the operator; a residual above
    /// [`SOLVE_RESIDUAL_TOL`]` * (1 + |rhs|_inf)` is an error.
    pub fn helmholtz_solve(
        &self,
        rhs: &ScalarField,
        a: f64,
        b: f64,
    ) -> Result<ScalarField, FieldError> {
        if rhs.grid() != &self.grid {
            return Err(FieldError::GridMismatch);
        }
        if a < 0.0 {
            return Err(FieldError::NegativeCoefficient(a));
        }
        if b < 0.0 {
            return Err(FieldError::NegativeCoefficient(b));
        }
        let scale = 1.0 + rhs.max_abs();
        if a == 0.0 {
            let mean = spatial_mean(rhs);
            if mean.abs() > 1e-10 * scale {
                return Err(FieldError::SingularCompatibility { mean });
            }
        }
        let mut coeffs = self.forward(rhs.data());
        for (c, &mu) in coeffs.iter_mut().zip(&self.symbol) {
            let denom = a + b * mu;
            *c = if denom == 0.0 { 0.0 } else { *c / denom };
        }
        let x = ScalarField::from_data(&self.grid, self.inverse(&coeffs))?;
        let lap_x = laplacian(&x);
        // in the singular case the solvable problem is the mean-free part
        let shift = if a == 0.0 { spatial_mean(rhs) } else { 0.0 };
        let mut residual = 0.0_f64;
        for ((&xv, &lv), &rv) in x.data().iter().zip(lap_x.data()).zip(rhs.data()) {
            residual = residual.max((a * xv - b * lv - (rv - shift)).abs());
        }
        let tol = SOLVE_RESIDUAL_TOL * scale;
        if residual > tol {
            return Err(FieldError::SolveResidual { residual, tol });
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn random_field(grid: &Grid, seed: u64) -> ScalarField {
        let mut rng = CounterRng::new(seed);
        ScalarField::from_data(
            grid,
            (0..grid.n_cells()).map(|_| rng.next_symmetric()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn forward_matches_dense_cosine_basis() {
        let grid = Grid::new_1d(16, 1.0).unwrap();
        let s = SpectralSolver::new(&grid);
        let f = random_field(&grid, 1);
        let coeffs = s.forward(f.data());
        let n = 16;
        for k in 0..n {
            let direct: f64 = (0..n)
                .map(|j| {
                    f.data()[j]
                        * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / n as f64).cos()
                })
                .sum();
            assert_close(coeffs[k], direct, 1e-12);
        }
    }

    #[test]
    fn round_trip_is_identity() {
        for grid in [
            Grid::new_1d(24, 1.0).unwrap(),
            Grid::new_2d(12, 8, 1.0, 0.7).unwrap(),
        ] {
            let s = SpectralSolver::new(&grid);
            let f = random_field(&grid, 2);
            let back = s.inverse(&s.forward(f.data()));
            for (a, b) in back.iter().zip(f.data()) {
                assert_close(*a, *b, 1e-13);
            }
        }
    }

    #[test]
    fn symbol_diagonalizes_laplacian() {
        for grid in [
            Grid::new_1d(20, 2.0).unwrap(),
            Grid::new_2d(10, 6, 1.0, 1.5).unwrap(),
        ] {
            let s = SpectralSolver::new(&grid);
            let f = random_field(&grid, 3);
            let lap = laplacian(&f);
            let lhs = s.forward(lap.data());
            let rhs: Vec<f64> = s
                .forward(f.data())
                .iter()
                .zip(s.symbol())
                .map(|(c, &mu)| -mu * c)
                .collect();
            for (a, b) in lhs.iter().zip(&rhs) {
                assert_close(*a, *b, 1e-10);
            }
        }
    }

    #[test]
    fn identity_solve() {
        let grid = Grid::new_1d(8, 1.0).unwrap();
        let s = SpectralSolver::new(&grid);
        let r = random_field(&grid, 4);
        let x = s.helmholtz_solve(&r, 2.0, 0.0).unwrap();
        for (a, b) in x.data().iter().zip(r.data()) {
            assert_close(*a, b / 2.0, 1e-13);
        }
    }

    #[test]
    fn eigenmode_solve() {
        // rhs built from the k=1 discrete eigenvector recovers it exactly
        let n = 32;
        let l = 1.0;
        let grid = Grid::new_1d(n, l).unwrap();
        let s = SpectralSolver::new(&grid);
        let (a, b) = (0.7, 0.3);
        let mu1 = s.symbol()[1];
        let mode = ScalarField::from_fn(&grid, |x| (std::f64::consts::PI * x[0] / l).cos());
        let rhs = ScalarField::from_data(
            &grid,
            mode.data().iter().map(|&v| (a + b * mu1) * v).collect(),
        )
        .unwrap();
        let x = s.helmholtz_solve(&rhs, a, b).unwrap();
        for (got, want) in x.data().iter().zip(mode.data()) {
            assert_close(*got, *want, 1e-11);
        }
    }

    #[test]
    fn random_solve_has_small_operator_residual() {
        for grid in [
            Grid::new_1d(64, 1.0).unwrap(),
            Grid::new_2d(16, 16, 1.0, 1.0).unwrap(),
        ] {
            let s = SpectralSolver::new(&grid);
            let r = random_field(&grid, 5);
            let (a, b) = (1.0, 0.05);
            let x = s.helmholtz_solve(&r, a, b).unwrap();
            let lap = laplacian(&x);
            for ((&xv, &lv), &rv) in x.data().iter().zip(lap.data()).zip(r.data()) {
                assert!((a * xv - b * lv - rv).abs() < 1e-10 * (1.0 + r.max_abs()));
            }
        }
    }

    #[test]
    fn singular_solve_requires_zero_mean() {
        let grid = Grid::new_1d(16, 1.0).unwrap();
        let s = SpectralSolver::new(&grid);
        let bad = ScalarField::from_fn(&grid, |_| 1.0);
        assert!(matches!(
            s.helmholtz_solve(&bad, 0.0, 1.0),
            Err(FieldError::SingularCompatibility { .. })
        ));

        // zero-mean rhs: solvable, zero-mean solution
        let mut data: Vec<f64> = (0..16).map(|i| (i as f64 - 7.5) / 8.0).collect();
        let m = data.iter().sum::<f64>() / 16.0;
        for v in &mut data {
            *v -= m;
        }
        let rhs = ScalarField::from_data(&grid, data).unwrap();
        let x = s.helmholtz_solve(&rhs, 0.0, 1.0).unwrap();
        assert!(spatial_mean(&x).abs() < 1e-12);
    }

    #[test]
    fn matches_dense_lu_solve_on_small_grids() {
        for grid in [
            Grid::new_1d(16, 1.0).unwrap(),
            Grid::new_1d(32, 2.0).unwrap(),
            Grid::new_2d(6, 5, 1.0, 1.0).unwrap(),
        ] {
            let s = SpectralSolver::new(&grid);
            let n = grid.n_cells();
            let (a, b) = (0.9, 0.2);
            // dense (a I - b lap) assembled column by column
            let mut mat = vec![vec![0.0; n]; n];
            for k in 0..n {
                let mut e = vec![0.0; n];
                e[k] = 1.0;
                let lap = laplacian(&ScalarField::from_data(&grid, e.clone()).unwrap());
                for i in 0..n {
                    mat[i][k] = a * e[i] - b * lap.data()[i];
                }
            }
            let r = random_field(&grid, 6);
            let dense = lu_solve(mat, r.data().to_vec());
            let x = s.helmholtz_solve(&r, a, b).unwrap();
            for (got, want) in x.data().iter().zip(&dense) {
                assert_close(*got, *want, 1e-9);
            }
        }
    }

    // plain partial-pivot LU for the oracle
    fn lu_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
                .unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            for row in col + 1..n {
                let f = a[row][col] / a[col][col];
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let mut s = b[row];
            for k in row + 1..n {
                s -= a[row][k] * x[k];
            }
            x[row] = s / a[row][row];
        }
        x
    }
}
