mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use seating::discretize::{
    alternate_minimize, default_epsilon, init_rotation, probabilistic_solution, residual, Indicator,
    Termination, DEFAULT_MAX_ITER,
};
use seating::spectral::relaxed_solution;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, rows * cols).prop_map(move |v| DMatrix::from_vec(rows, cols, v))
}

fn z_strategy() -> impl Strategy<Value = DMatrix<f64>> {
    (1usize..6, 1usize..20).prop_flat_map(|(k, extra)| matrix(k + extra, k))
}

fn frobenius(x: &Indicator, z: &DMatrix<f64>, r: &DMatrix<f64>, lambda: &nalgebra::DVector<f64>) -> f64 {
    // direct evaluation of ||X - Z R diag(lambda)||_F
    let m = z * r * DMatrix::from_diagonal(lambda);
    let mut s = 0.0;
    for i in 0..z.nrows() {
        for j in 0..z.ncols() {
            let xij = if x.labels()[i] == j { 1.0 } else { 0.0 };
            s += (xij - m[(i, j)]).powi(2);
        }
    }
    s.sqrt()
}

proptest! {
    #[test]
    fn residual_history_never_increases(z in z_strategy(), max_iter in 1usize..40) {
        let s = alternate_minimize(&z, default_epsilon(z.nrows()), max_iter).unwrap();
        prop_assert!(s.iterations <= max_iter);
        prop_assert!(s.iterations >= 1);
        for w in s.history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-10, "{:?}", s.history);
        }
        prop_assert!((s.residual - s.history.last().copied().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn final_state_residual_is_reproducible(z in z_strategy()) {
        let s = alternate_minimize(&z, default_epsilon(z.nrows()), DEFAULT_MAX_ITER).unwrap();
        let direct = frobenius(&s.indicator, &z, &s.rotation, &s.scaling);
        prop_assert!((direct - s.residual).abs() < 1e-9);
        prop_assert!((residual(&s.indicator, &z, &s.rotation, &s.scaling) - direct).abs() < 1e-9);
    }

    #[test]
    fn rotation_stays_orthogonal(z in z_strategy()) {
        let k = z.ncols();
        let r0 = init_rotation(&z);
        prop_assert!((r0.transpose() * &r0 - DMatrix::identity(k, k)).norm() < 1e-9);
        let s = alternate_minimize(&z, default_epsilon(z.nrows()), 10).unwrap();
        prop_assert!((s.rotation.transpose() * &s.rotation - DMatrix::identity(k, k)).norm() < 1e-9);
        prop_assert!(s.scaling.iter().all(|&l| l >= 1e-8));
    }

    #[test]
    fn probabilistic_rows_are_distributions(z in z_strategy()) {
        let p = probabilistic_solution(&z);
        for i in 0..z.nrows() {
            let row = p.p.row(i);
            prop_assert!(row.iter().all(|&v| v >= 0.0));
            prop_assert!((row.sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn graph_corpus_terminates(n in 2usize..20, d in 0.1f64..1.0, seed: u64, k in 1usize..5) {
        let g = common::random_graph(n, d, seed);
        let Ok(split) = g.split_isolated() else { return Ok(()) };
        prop_assume!(k <= split.core.len());
        let sol = relaxed_solution(&split.core, k).unwrap();
        let s = alternate_minimize(&sol.z, default_epsilon(sol.z.nrows()), DEFAULT_MAX_ITER).unwrap();
        prop_assert!(s.iterations <= DEFAULT_MAX_ITER);
        for w in s.history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-10);
        }
    }
}

#[test]
fn exact_indicator_converges_immediately() {
    let labels = vec![0, 1, 2, 1, 0];
    let z = Indicator::new(labels.clone(), 3).unwrap().to_matrix();
    let s = alternate_minimize(&z, 1e-9, 50).unwrap();
    assert_eq!(s.indicator.labels(), &labels[..]);
    assert_eq!(s.termination, Termination::Converged);
    assert!(s.residual < 1e-9);
}
