//! Property tests over randomized inputs: algebraic invariants of the
//! simplex operations, the resolvent, the sequence lemma and the on-disk
//! formats.

use proptest::prelude::*;

use mcac::diagnostics::{de_giorgi_sequence, SequenceLemmaParams};
use mcac::io::{Checkpoint, TimeSeriesRow};
use mcac::potential::{EntropySpec, YosidaRegularization};
use mcac::simplex::{apply_mobility, apply_projector, project_to_simplex, MobilityMatrix};
use mcac::{Grid, PhaseField};

fn small_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, n)
}

proptest! {
    #[test]
    fn projector_output_sums_to_zero_and_is_idempotent(v in small_vec(5)) {
        let p = apply_projector(&v);
        prop_assert!(p.values().iter().sum::<f64>().abs() < 1e-12);
        let pp = apply_projector(p.values());
        for (a, b) in p.values().iter().zip(pp.values()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn projector_is_orthogonal(v in small_vec(4)) {
        // v - Pv is orthogonal to every tangent vector, i.e. constant
        let p = apply_projector(&v);
        let residual: Vec<f64> = v.iter().zip(p.values()).map(|(a, b)| a - b).collect();
        for w in residual.windows(2) {
            prop_assert!((w[0] - w[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn mobility_annihilates_constants_and_scales_tangents(
        v in small_vec(3),
        xi in 0.1..3.0f64,
        c in -5.0..5.0f64,
    ) {
        let m = MobilityMatrix::structured(3, xi).unwrap();
        let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
        let a = apply_mobility(&m, &v).unwrap();
        let b = apply_mobility(&m, &shifted).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10, "shift invariance");
        }
        let p = apply_projector(&v);
        for (x, y) in a.iter().zip(p.values()) {
            prop_assert!((x - xi * 3.0 * y).abs() < 1e-10);
        }
    }

    #[test]
    fn simplex_projection_is_feasible_and_idempotent(v in small_vec(4)) {
        let c = project_to_simplex(&v).unwrap();
        prop_assert!((c.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(c.values().iter().all(|&x| x >= 0.0));
        let again = project_to_simplex(c.values()).unwrap();
        for (a, b) in c.values().iter().zip(again.values()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn resolvent_is_monotone_and_solves_its_equation(
        s1 in -2.0..2.0f64,
        s2 in -2.0..2.0f64,
        log_eps in -5.0..0.0f64,
        theta in 0.2..3.0f64,
    ) {
        let eps = 10.0_f64.powf(log_eps);
        let y = YosidaRegularization::new(eps, EntropySpec::logarithmic(theta)).unwrap();
        let (r1, r2) = (y.resolvent(s1).unwrap(), y.resolvent(s2).unwrap());
        if s1 < s2 {
            prop_assert!(r1 <= r2 + 1e-12, "resolvent must be nondecreasing");
        }
        if r1 >= 1e-300 {
            let resid = r1 + eps * theta * (r1.min(1.0).ln() + 1.0) - s1;
            prop_assert!(resid.abs() < 1e-11 * (1.0 + s1.abs()));
        }
    }

    #[test]
    fn regularized_slope_is_bounded_by_the_exact_one(
        s in 0.01..1.0f64,
        log_eps in -6.0..(-1.0f64),
    ) {
        let base = EntropySpec::logarithmic(1.0);
        let y = YosidaRegularization::new(10.0_f64.powf(log_eps), base.clone()).unwrap();
        let a = y.derivative(s).unwrap().abs();
        prop_assert!(a <= base.derivative(s).unwrap().abs() + 1e-10);
        prop_assert!(y.value(s).unwrap() <= base.value(s) + 1e-12);
    }

    #[test]
    fn certified_sequences_obey_the_decay_bound(
        c in 0.05..10.0f64,
        b in 1.05..6.0f64,
        eps in 0.1..3.0f64,
        frac in 0.0..1.0f64,
    ) {
        let base = SequenceLemmaParams { c, b, eps, y0: 0.0 };
        let p = SequenceLemmaParams { y0: frac * base.threshold(), ..base };
        let out = de_giorgi_sequence(&p, 40).unwrap();
        prop_assert!(out.certified);
        for (n, &y) in out.values.iter().enumerate() {
            prop_assert!(y <= p.certified_bound(n) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn csv_rows_round_trip_all_finite_values(
        vals in prop::collection::vec(-1e12..1e12f64, 10),
    ) {
        let row = TimeSeriesRow {
            t: vals[0],
            total_energy: vals[1],
            bulk_energy: vals[2],
            gradient_energy: vals[3],
            dissipation: vals[4],
            mean_drift_max: vals[5],
            constraint_violation: vals[6],
            potential_sum_violation: vals[7],
            separation_floor: vals[8],
            step_energy_delta: vals[9],
        };
        // 17 significant digits identify an f64 uniquely
        let back = TimeSeriesRow::parse_csv_line(&row.to_csv_line()).unwrap();
        prop_assert_eq!(back, row);
    }

    #[test]
    fn checkpoints_round_trip_bitwise(
        nx in 4usize..12,
        seedling in 0.05..0.95f64,
    ) {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid::new_1d(nx, 1.0).unwrap();
        let vals: Vec<f64> = (0..nx)
            .map(|i| (seedling + 0.31 * i as f64).fract().clamp(0.01, 0.99))
            .collect();
        let mut data = vals.clone();
        data.extend(vals.iter().map(|v| 1.0 - v));
        let u = PhaseField::from_data(&grid, 2, data).unwrap();
        let cp = Checkpoint::from_field(&u, 0.25, 17, 1e-2, 1.0, 1e-4, 1.0);
        let path = dir.path().join("cp.mcac");
        mcac::io::write_checkpoint(&path, &cp).unwrap();
        let back = mcac::io::read_checkpoint(&path).unwrap();
        prop_assert_eq!(back, cp);
    }
}
