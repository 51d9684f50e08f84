//! Finite-dimensional algebra of the Gibbs simplex.
//!
//! The pointwise state space of an `N`-component mixture is the Gibbs
//! simplex `G = { u in R^N : u_i >= 0, sum_i u_i = 1 }` sitting inside the
//! affine hyperplane of unit-sum vectors. Its tangent space is
//! `T = { d in R^N : sum_i d_i = 0 }`. This module provides the exact
//! algebra on these sets:
//!
//! * the orthogonal projector `P` of `R^N` onto `T`,
//!   `(P v)_l = v_l - (1/N) sum_m v_m`;
//! * the constant mobility matrix `alpha`, either in the structured form
//!   `alpha = xi * (N*I - 1 1^T)` (equivalently `alpha = xi*N*P`, with
//!   eigenvalues `0` on `span{1}` and `xi*N` on `T`), or as a general
//!   symmetric matrix that must be positive definite on `T`;
//! * the symmetric demixing interaction matrix `A` with its largest
//!   eigenvalue;
//! * the weighted quadratic-form lower bound
//!   `zeta^T (C alpha) zeta >= gamma_N * min_{c_i alpha_ii > 0}(c_i alpha_ii) * |zeta|^2`
//!   with `gamma_N = xi*N/(N-1)`, valid for strictly positive weights and
//!   `xi <= 1`;
//! * the Euclidean projection onto `G` (sort-and-threshold).
//!
//! All operations are pure functions on immutable data and can be called
//! concurrently from any number of threads.

use thiserror::Error;

/// Absolute tolerance for unit-sum / zero-sum invariants of small vectors.
pub const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SimplexError {
    #[error("dimension mismatch: expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("need at least 2 components, got {0}")]
    TooFewComponents(usize),
    #[error("component sums to {sum}, expected 1 within {tol}")]
    NotUnitSum { sum: f64, tol: f64 },
    #[error("component {index} = {value} lies outside [0, 1]")]
    OutOfBounds { index: usize, value: f64 },
    #[error("tangent vector sums to {sum}, expected 0 within {tol}")]
    NotZeroSum { sum: f64, tol: f64 },
    #[error("mobility strength xi must be positive, got {0}")]
    NonPositiveXi(f64),
    #[error("matrix entry ({i},{j}) = {a} does not match ({j},{i}) = {b}: not symmetric")]
    NotSymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("weight {index} = {value} is negative")]
    NegativeWeight { index: usize, value: f64 },
    #[error("operation requires the structured mobility form")]
    RequiresStructured,
    #[error("non-finite entry in input vector")]
    NonFinite,
}

/// A point of the Gibbs simplex: nonnegative components summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Composition {
    values: Vec<f64>,
}

impl Composition {
    /// Validates the unit-sum and `[0, 1]` box constraints (absolute
    /// tolerance [`SUM_TOL`] to absorb rounding).
    pub fn new(values: Vec<f64>) -> Result<Self, SimplexError> {
        if values.len() < 2 {
            return Err(SimplexError::TooFewComponents(values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SimplexError::NonFinite);
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(SimplexError::NotUnitSum { sum, tol: SUM_TOL });
        }
        for (index, &value) in values.iter().enumerate() {
            if !(-SUM_TOL..=1.0 + SUM_TOL).contains(&value) {
                return Err(SimplexError::OutOfBounds { index, value });
            }
        }
        Ok(Self { values })
    }

    pub fn n_phases(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Smallest component.
    pub fn floor(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// True when every component exceeds `delta`.
    pub fn is_interior(&self, delta: f64) -> bool {
        self.values.iter().all(|&v| v > delta)
    }
}

/// A vector of the tangent space `T` (components summing to zero).
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    values: Vec<f64>,
}

impl TangentVector {
    pub fn new(values: Vec<f64>) -> Result<Self, SimplexError> {
        let sum: f64 = values.iter().sum();
        if sum.abs() > SUM_TOL {
            return Err(SimplexError::NotZeroSum { sum, tol: SUM_TOL });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Orthogonal projection of `v` onto the zero-sum tangent space:
/// `(P v)_l = v_l - (1/N) sum_m v_m`. Total on finite vectors; idempotent.
pub fn apply_projector(v: &[f64]) -> TangentVector {
    let n = v.len() as f64;
    let mean: f64 = v.iter().sum::<f64>() / n;
    TangentVector {
        values: v.iter().map(|x| x - mean).collect(),
    }
}

/// The constant mobility matrix coupling component relaxation.
#[derive(Clone, Debug)]
pub enum MobilityMatrix {
    /// `alpha = xi * (N*I - 1 1^T)`: diagonal `xi*(N-1)`, off-diagonal
    /// `-xi`. Annihilates constants and acts as `xi*N` on the tangent
    /// space, i.e. `alpha = xi*N*P`.
    Structured { n_phases: usize, xi: f64 },
    /// General symmetric mobility; must be positive definite on the
    /// tangent space (checked by sampling, see
    /// [`MobilityMatrix::tangent_coercivity`]).
    General { entries: Vec<Vec<f64>> },
}

impl MobilityMatrix {
    pub fn structured(n_phases: usize, xi: f64) -> Result<Self, SimplexError> {
        if n_phases < 2 {
            return Err(SimplexError::TooFewComponents(n_phases));
        }
        if !(xi > 0.0) {
            return Err(SimplexError::NonPositiveXi(xi));
        }
        Ok(Self::Structured { n_phases, xi })
    }

    pub fn general(entries: Vec<Vec<f64>>) -> Result<Self, SimplexError> {
        check_symmetric(&entries)?;
        Ok(Self::General { entries })
    }

    pub fn n_phases(&self) -> usize {
        match self {
            Self::Structured { n_phases, .. } => *n_phases,
            Self::General { entries } => entries.len(),
        }
    }

    pub fn xi(&self) -> Option<f64> {
        match self {
            Self::Structured { xi, .. } => Some(*xi),
            Self::General { .. } => None,
        }
    }

    /// Diagonal entry `alpha_ii`.
    pub fn diagonal(&self, i: usize) -> f64 {
        match self {
            Self::Structured { n_phases, xi } => xi * (*n_phases as f64 - 1.0),
            Self::General { entries } => entries[i][i],
        }
    }

    /// Dense matrix form (structured form materialized on demand).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        match self {
            Self::Structured { n_phases, xi } => {
                let n = *n_phases;
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| if i == j { xi * (n as f64 - 1.0) } else { -xi })
                            .collect()
                    })
                    .collect()
            }
            Self::General { entries } => entries.clone(),
        }
    }

    /// Smallest sampled Rayleigh quotient `eta^T alpha eta / |eta|^2` over
    /// random tangent vectors: an empirical coercivity constant `l_0`.
    /// For the structured form this equals `xi*N` exactly.
    pub fn tangent_coercivity(&self, samples: usize, seed: u64) -> f64 {
        let n = self.n_phases();
        let mut rng = crate::rng::CounterRng::new(seed);
        let mut l0 = f64::INFINITY;
        for _ in 0..samples {
            let raw: Vec<f64> = (0..n).map(|_| rng.next_symmetric()).collect();
            let eta = apply_projector(&raw);
            let nrm2 = eta.norm_squared();
            if nrm2 < 1e-12 {
                continue;
            }
            let a_eta = apply_mobility(self, eta.values()).expect("matched dims");
            let quot = dot(eta.values(), &a_eta) / nrm2;
            l0 = l0.min(quot);
        }
        l0
    }
}

/// Matrix-vector product `alpha * v`.
///
/// The structured form uses the identity `alpha = xi*N*P` instead of a
/// dense product, which makes `alpha * 1 = 0` exact.
pub fn apply_mobility(m: &MobilityMatrix, v: &[f64]) -> Result<Vec<f64>, SimplexError> {
    let n = m.n_phases();
    if v.len() != n {
        return Err(SimplexError::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    match m {
        MobilityMatrix::Structured { xi, .. } => {
            let scale = xi * n as f64;
            Ok(apply_projector(v)
                .values()
                .iter()
                .map(|x| scale * x)
                .collect())
        }
        MobilityMatrix::General { entries } => Ok(entries.iter().map(|row| dot(row, v)).collect()),
    }
}

/// Weighted quadratic form `zeta^T (diag(c) alpha) zeta` together with its
/// certified lower bound
/// `gamma_N * min{ c_i alpha_ii : c_i alpha_ii > 0 } * |zeta|^2`,
/// `gamma_N = xi*N/(N-1)`. Returns `(value, bound)`; when every weighted
/// diagonal vanishes the bound is 0.
///
/// The bound `value >= bound >= 0` is guaranteed for strictly positive
/// weights and `xi <= 1`; see the module documentation.
pub fn quadratic_form_lower_bound(
    m: &MobilityMatrix,
    c: &[f64],
    zeta: &TangentVector,
) -> Result<(f64, f64), SimplexError> {
    let (n, xi) = match m {
        MobilityMatrix::Structured { n_phases, xi } => (*n_phases, *xi),
        MobilityMatrix::General { .. } => return Err(SimplexError::RequiresStructured),
    };
    if c.len() != n {
        return Err(SimplexError::DimensionMismatch {
            expected: n,
            got: c.len(),
        });
    }
    if zeta.values().len() != n {
        return Err(SimplexError::DimensionMismatch {
            expected: n,
            got: zeta.values().len(),
        });
    }
    for (index, &value) in c.iter().enumerate() {
        if value < 0.0 {
            return Err(SimplexError::NegativeWeight { index, value });
        }
    }

    let alpha_zeta = apply_mobility(m, zeta.values())?;
    let value: f64 = zeta
        .values()
        .iter()
        .zip(c)
        .zip(&alpha_zeta)
        .map(|((&z, &ci), &az)| ci * z * az)
        .sum();

    let diag = xi * (n as f64 - 1.0);
    let min_weighted = c
        .iter()
        .map(|&ci| ci * diag)
        .filter(|&w| w > 0.0)
        .fold(f64::INFINITY, f64::min);
    let bound = if min_weighted.is_finite() {
        let gamma_n = xi * n as f64 / (n as f64 - 1.0);
        gamma_n * min_weighted * zeta.norm_squared()
    } else {
        0.0
    };
    Ok((value, bound))
}

/// Euclidean projection of `v` onto the Gibbs simplex by sort and
/// threshold: with `u` the descending sort of `v` and
/// `rho = max{ j : u_j - (sum_{k<=j} u_k - 1)/j > 0 }`, the projection is
/// `max(v - tau, 0)` with `tau = (sum_{k<=rho} u_k - 1)/rho`. Exact up to
/// rounding, idempotent, and the identity on points already in the simplex.
pub fn project_to_simplex(v: &[f64]) -> Result<Composition, SimplexError> {
    if v.len() < 2 {
        return Err(SimplexError::TooFewComponents(v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(SimplexError::NonFinite);
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut cumulative = 0.0;
    let mut tau = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            tau = candidate;
        }
    }
    let values: Vec<f64> = v.iter().map(|&x| (x - tau).max(0.0)).collect();
    Ok(Composition { values })
}

/// The symmetric demixing interaction matrix together with its largest
/// eigenvalue.
#[derive(Clone, Debug)]
pub struct InteractionMatrix {
    entries: Vec<Vec<f64>>,
    lambda_max: f64,
}

impl InteractionMatrix {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self, SimplexError> {
        check_symmetric(&entries)?;
        let lambda_max = symmetric_eigenvalues(&entries)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            entries,
            lambda_max,
        })
    }

    /// The zero matrix (no demixing).
    pub fn zero(n: usize) -> Self {
        Self {
            entries: vec![vec![0.0; n]; n],
            lambda_max: 0.0,
        }
    }

    /// Isotropic demixing `A = lambda * (I - 1 1^T / N)`: eigenvalue 0 on
    /// constants and `lambda` on the whole tangent space, so
    /// `lambda_max = lambda`.
    pub fn demixing(n: usize, lambda: f64) -> Result<Self, SimplexError> {
        let nf = n as f64;
        let entries: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| lambda * (if i == j { 1.0 } else { 0.0 } - 1.0 / nf))
                    .collect()
            })
            .collect();
        Self::new(entries)
    }

    pub fn n_phases(&self) -> usize {
        self.entries.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    /// `A * u`.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>, SimplexError> {
        if u.len() != self.entries.len() {
            return Err(SimplexError::DimensionMismatch {
                expected: self.entries.len(),
                got: u.len(),
            });
        }
        Ok(self.entries.iter().map(|row| dot(row, u)).collect())
    }

    /// `u^T A u`.
    pub fn quadratic(&self, u: &[f64]) -> Result<f64, SimplexError> {
        let au = self.apply(u)?;
        Ok(dot(u, &au))
    }
}

fn check_symmetric(entries: &[Vec<f64>]) -> Result<(), SimplexError> {
    let n = entries.len();
    if n < 2 {
        return Err(SimplexError::TooFewComponents(n));
    }
    for row in entries.iter() {
        if row.len() != n {
            return Err(SimplexError::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (entries[i][j], entries[j][i]);
            if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                return Err(SimplexError::NotSymmetric { i, j, a, b });
            }
        }
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All eigenvalues of a small dense symmetric matrix by the cyclic Jacobi
/// rotation method, ascending. Intended for the N <= 8 component matrices
/// handled here; converges to off-diagonal norm below 1e-14 * scale.
pub fn symmetric_eigenvalues(matrix: &[Vec<f64>]) -> Vec<f64> {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0_f64, |m, &x| m.max(x.abs()))
        .max(1e-300);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    eig
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn projector_kernel_is_constants() {
        let p = apply_projector(&[1.0, 1.0, 1.0]);
        assert_eq!(p.values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn projector_direct_evaluation() {
        let p = apply_projector(&[1.0, 0.0, 0.0]);
        assert_close(p.values()[0], 2.0 / 3.0, 1e-15);
        assert_close(p.values()[1], -1.0 / 3.0, 1e-15);
        assert_close(p.values()[2], -1.0 / 3.0, 1e-15);
    }

    #[test]
    fn projector_is_identity_on_tangent() {
        let a = 0.37;
        let p = apply_projector(&[a, -a]);
        assert_close(p.values()[0], a, 1e-15);
        assert_close(p.values()[1], -a, 1e-15);
    }

    #[test]
    fn projector_zero_sum_and_idempotent_sampled() {
        for &n in &[2usize, 3, 5] {
            let mut rng = CounterRng::substream(2024, n as u64);
            for _ in 0..1000 {
                let v: Vec<f64> = (0..n).map(|_| 10.0 * rng.next_symmetric()).collect();
                let p = apply_projector(&v);
                let sum: f64 = p.values().iter().sum();
                assert!(sum.abs() < SUM_TOL);
                let pp = apply_projector(p.values());
                for (x, y) in p.values().iter().zip(pp.values()) {
                    assert!((x - y).abs() < SUM_TOL);
                }
            }
        }
    }

    #[test]
    fn mobility_annihilates_constants() {
        let m = MobilityMatrix::structured(3, 1.0).unwrap();
        let out = apply_mobility(&m, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(out, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn mobility_row_arithmetic() {
        let m = MobilityMatrix::structured(3, 1.0).unwrap();
        let out = apply_mobility(&m, &[1.0, -1.0, 0.0]).unwrap();
        assert_close(out[0], 3.0, 1e-15);
        assert_close(out[1], -3.0, 1e-15);
        assert_close(out[2], 0.0, 1e-15);
    }

    #[test]
    fn mobility_two_components() {
        // alpha = [[1,-1],[-1,1]] for N=2, xi=1
        let m = MobilityMatrix::structured(2, 1.0).unwrap();
        let out = apply_mobility(&m, &[1.0, 0.0]).unwrap();
        assert_close(out[0], 1.0, 1e-15);
        assert_close(out[1], -1.0, 1e-15);
    }

    #[test]
    fn mobility_matches_scaled_projector_sampled() {
        for &n in &[2usize, 3, 5] {
            let xi = 0.7;
            let m = MobilityMatrix::structured(n, xi).unwrap();
            let mut rng = CounterRng::substream(99, n as u64);
            for _ in 0..1000 {
                let v: Vec<f64> = (0..n).map(|_| rng.next_symmetric()).collect();
                let a = apply_mobility(&m, &v).unwrap();
                let p = apply_projector(&v);
                for (x, y) in a.iter().zip(p.values()) {
                    assert!((x - xi * n as f64 * y).abs() < SUM_TOL);
                }
            }
        }
    }

    #[test]
    fn mobility_dimension_mismatch_is_an_error() {
        let m = MobilityMatrix::structured(3, 1.0).unwrap();
        assert!(matches!(
            apply_mobility(&m, &[1.0, 2.0]),
            Err(SimplexError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn structured_eigenvalues_are_zero_and_xi_n() {
        for &(n, xi) in &[(2usize, 1.0), (3, 0.5), (5, 2.0)] {
            let m = MobilityMatrix::structured(n, xi).unwrap();
            let eig = symmetric_eigenvalues(&m.to_dense());
            assert_close(eig[0], 0.0, 1e-10);
            for &e in &eig[1..] {
                assert_close(e, xi * n as f64, 1e-10);
            }
        }
    }

    #[test]
    fn quadratic_form_two_component_equality() {
        let m = MobilityMatrix::structured(2, 1.0).unwrap();
        let t = 0.8;
        let zeta = TangentVector::new(vec![t, -t]).unwrap();
        let (value, bound) = quadratic_form_lower_bound(&m, &[1.0, 1.0], &zeta).unwrap();
        assert_close(value, 4.0 * t * t, 1e-14);
        assert_close(bound, 4.0 * t * t, 1e-14);
    }

    #[test]
    fn quadratic_form_zero_weights() {
        let m = MobilityMatrix::structured(3, 1.0).unwrap();
        let zeta = TangentVector::new(vec![0.4, -0.4, 0.0]).unwrap();
        let (value, bound) = quadratic_form_lower_bound(&m, &[0.0, 0.0, 0.0], &zeta).unwrap();
        assert_eq!(value, 0.0);
        assert_eq!(bound, 0.0);
    }

    #[test]
    fn quadratic_form_three_component_case() {
        let m = MobilityMatrix::structured(3, 1.0).unwrap();
        let zeta = TangentVector::new(vec![1.0, -1.0, 0.0]).unwrap();
        let (value, bound) = quadratic_form_lower_bound(&m, &[1.0, 1.0, 1.0], &zeta).unwrap();
        // zeta in T: value = xi*N*|zeta|^2 = 6; gamma_3 * min(c_i a_ii) * |zeta|^2
        // = 1.5 * 2 * 2 = 6.
        assert_close(value, 6.0, 1e-14);
        assert_close(bound, 6.0, 1e-14);
    }

    #[test]
    fn quadratic_form_weighted_identity_sampled() {
        // value always equals xi*N*(sum_i c_i zeta_i^2) on the tangent space
        for &n in &[2usize, 3, 5] {
            let xi = 0.6;
            let m = MobilityMatrix::structured(n, xi).unwrap();
            let mut rng = CounterRng::substream(5150, n as u64);
            for _ in 0..500 {
                let raw: Vec<f64> = (0..n).map(|_| rng.next_symmetric()).collect();
                let zeta = apply_projector(&raw);
                let c: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
                let (value, bound) = quadratic_form_lower_bound(&m, &c, &zeta).unwrap();
                let direct: f64 = xi
                    * n as f64
                    * zeta
                        .values()
                        .iter()
                        .zip(&c)
                        .map(|(z, ci)| ci * z * z)
                        .sum::<f64>();
                assert_close(value, direct, 1e-12);
                assert!(value >= bound - 1e-12, "value {value} < bound {bound}");
                assert!(bound >= 0.0);
            }
        }
    }

    #[test]
    fn quadratic_form_rejects_negative_weights() {
        let m = MobilityMatrix::structured(3, 1.0).unwrap();
        let zeta = TangentVector::new(vec![1.0, -1.0, 0.0]).unwrap();
        assert!(matches!(
            quadratic_form_lower_bound(&m, &[1.0, -0.5, 1.0], &zeta),
            Err(SimplexError::NegativeWeight { index: 1, .. })
        ));
    }

    #[test]
    fn quadratic_form_rejects_general_mobility() {
        let m = MobilityMatrix::general(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let zeta = TangentVector::new(vec![1.0, -1.0]).unwrap();
        assert!(matches!(
            quadratic_form_lower_bound(&m, &[1.0, 1.0], &zeta),
            Err(SimplexError::RequiresStructured)
        ));
    }

    #[test]
    fn simplex_projection_fixed_point() {
        let c = project_to_simplex(&[0.5, 0.5]).unwrap();
        assert_eq!(c.values(), &[0.5, 0.5]);
    }

    #[test]
    fn simplex_projection_clamps_to_vertex() {
        let c = project_to_simplex(&[1.2, -0.2]).unwrap();
        assert_close(c.values()[0], 1.0, 1e-15);
        assert_close(c.values()[1], 0.0, 1e-15);
        // brute-force oracle: dense sampling of the segment (t, 1-t)
        let target = [1.2, -0.2];
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..=100_000 {
            let t = k as f64 / 100_000.0;
            let d = (t - target[0]).powi(2) + ((1.0 - t) - target[1]).powi(2);
            if d < best.0 {
                best = (d, t);
            }
        }
        assert_close(best.1, c.values()[0], 1e-5);
    }

    #[test]
    fn simplex_projection_interior_point_unchanged() {
        let eps = 0.1;
        let v = [1.0 / 3.0 + eps, 1.0 / 3.0 - eps, 1.0 / 3.0];
        let c = project_to_simplex(&v).unwrap();
        for (a, b) in c.values().iter().zip(&v) {
            assert_close(*a, *b, 1e-15);
        }
    }

    #[test]
    fn interaction_matrix_lambda_max() {
        let a = InteractionMatrix::demixing(3, 6.0).unwrap();
        assert_close(a.lambda_max(), 6.0, 1e-10);
        let eig = symmetric_eigenvalues(a.entries());
        assert_close(eig[0], 0.0, 1e-10);
        assert_close(eig[1], 6.0, 1e-10);
        assert_close(eig[2], 6.0, 1e-10);
    }

    #[test]
    fn interaction_rejects_asymmetric() {
        assert!(matches!(
            InteractionMatrix::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(SimplexError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn structured_coercivity_is_xi_n() {
        let m = MobilityMatrix::structured(4, 0.5).unwrap();
        let l0 = m.tangent_coercivity(200, 7);
        assert_close(l0, 2.0, 1e-10);
    }

    #[test]
    fn jacobi_known_spectrum() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let eig = symmetric_eigenvalues(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert_close(eig[0], 1.0, 1e-12);
        assert_close(eig[1], 3.0, 1e-12);
    }

    #[test]
    fn composition_validation() {
        assert!(Composition::new(vec![0.5, 0.5]).is_ok());
        assert!(matches!(
            Composition::new(vec![0.5, 0.6]),
            Err(SimplexError::NotUnitSum { .. })
        ));
        assert!(matches!(
            Composition::new(vec![1.2, -0.2]),
            Err(SimplexError::OutOfBounds { .. })
        ));
    }
}
