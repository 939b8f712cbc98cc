use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wapss_lti::{gramians, lyapunov_solve, LtiError, StateSpace};

fn random_hurwitz(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let shift = wapss_lti::eigenvalues(&m)
        .unwrap()
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max)
        + 0.5;
    m - shift * DMatrix::identity(n, n)
}

fn residual(a: &DMatrix<f64>, x: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    (a * x + x * a.transpose() + q).norm()
}

#[test]
fn scalar_equation() {
    let a = DMatrix::from_element(1, 1, -1.0);
    let q = DMatrix::from_element(1, 1, 2.0);
    let x = lyapunov_solve(&a, &q).unwrap();
    assert!((x[(0, 0)] - 1.0).abs() < 1e-12);
}

#[test]
fn decoupled_diagonal_equation() {
    let a = DMatrix::from_diagonal(&DVector::from_column_slice(&[-1.0, -3.0]));
    let q = DMatrix::identity(2, 2);
    let x = lyapunov_solve(&a, &q).unwrap();
    assert!((x[(0, 0)] - 0.5).abs() < 1e-12);
    assert!((x[(1, 1)] - 1.0 / 6.0).abs() < 1e-12);
    assert!(x[(0, 1)].abs() < 1e-12 && x[(1, 0)].abs() < 1e-12);
}

#[test]
fn rotation_block_equation() {
    // normal A with A + A^T = -0.56 I, so X = I/0.56 solves AX+XA^T+I=0
    let a = DMatrix::from_row_slice(2, 2, &[-0.28, 3.92, -3.92, -0.28]);
    let q = DMatrix::identity(2, 2);
    let x = lyapunov_solve(&a, &q).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { 1.0 / 0.56 } else { 0.0 };
            assert!((x[(i, j)] - want).abs() < 1e-10);
        }
    }
}

#[test]
fn random_problems_match_kronecker_oracle() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 5;
        let a = random_hurwitz(&mut rng, n);
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let q = &m * m.transpose();
        let x = lyapunov_solve(&a, &q).unwrap();

        // vec(AX + XA^T) = (I (x) A + A (x) I) vec(X)
        let eye = DMatrix::identity(n, n);
        let lhs = eye.kronecker(&a) + a.kronecker(&eye);
        let qv = DVector::from_column_slice(q.as_slice());
        let xv = lhs.lu().solve(&(-qv)).expect("kronecker system solvable");
        let xk = DMatrix::from_column_slice(n, n, xv.as_slice());

        assert!(
            (&x - &xk).norm() <= 1e-8 * xk.norm().max(1.0),
            "seed {seed}: solution deviates from kronecker oracle"
        );
        assert!(residual(&a, &x, &q) <= 1e-8 * q.norm());
        assert!((&x - x.transpose()).norm() <= 1e-10 * x.norm().max(1.0));
    }
}

#[test]
fn residual_bound_holds_on_larger_problem() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let n = 12;
    let a = random_hurwitz(&mut rng, n);
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let q = &m * m.transpose();
    let x = lyapunov_solve(&a, &q).unwrap();
    assert!(residual(&a, &x, &q) <= 1e-8 * q.norm());
}

#[test]
fn unstable_a_is_rejected() {
    let a = DMatrix::from_element(1, 1, 1.0);
    let q = DMatrix::from_element(1, 1, 1.0);
    assert!(matches!(
        lyapunov_solve(&a, &q),
        Err(LtiError::Unstable { .. })
    ));
    // marginally stable (imaginary pair) is rejected too
    let a = DMatrix::from_row_slice(2, 2, &[0.0, 4.0, -4.0, 0.0]);
    assert!(lyapunov_solve(&a, &DMatrix::identity(2, 2)).is_err());
}

#[test]
fn gramians_of_scalar_lag() {
    let sys = StateSpace::new(
        DMatrix::from_element(1, 1, -1.0),
        DMatrix::from_element(1, 1, 1.0),
        DMatrix::from_element(1, 1, 1.0),
        DMatrix::zeros(1, 1),
    )
    .unwrap();
    let (wc, wo) = gramians(&sys).unwrap();
    assert!((wc[(0, 0)] - 0.5).abs() < 1e-12);
    assert!((wo[(0, 0)] - 0.5).abs() < 1e-12);
}

#[test]
fn balanced_construction_round_trips() {
    // A normal, B = C^T = sqrt(2 sigma) I gives Wc = Wo = sigma I
    let sigma = 0.7f64;
    let a = DMatrix::from_row_slice(2, 2, &[-1.0, 3.0, -3.0, -1.0]);
    let s = (2.0 * sigma).sqrt();
    let sys = StateSpace::new(
        a,
        s * DMatrix::identity(2, 2),
        s * DMatrix::identity(2, 2),
        DMatrix::zeros(2, 2),
    )
    .unwrap();
    let (wc, wo) = gramians(&sys).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { sigma } else { 0.0 };
            assert!((wc[(i, j)] - want).abs() < 1e-10);
            assert!((wo[(i, j)] - want).abs() < 1e-10);
        }
    }
}

#[test]
fn gramian_residuals_on_random_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 6;
    let a = random_hurwitz(&mut rng, n);
    let b = DMatrix::from_fn(n, 2, |_, _| rng.random_range(-1.0..1.0));
    let cm = DMatrix::from_fn(2, n, |_, _| rng.random_range(-1.0..1.0));
    let sys = StateSpace::new(a.clone(), b.clone(), cm.clone(), DMatrix::zeros(2, 2)).unwrap();
    let (wc, wo) = gramians(&sys).unwrap();
    let bbt = &b * b.transpose();
    let ctc = cm.transpose() * &cm;
    assert!(residual(&a, &wc, &bbt) <= 1e-8 * bbt.norm());
    assert!((a.transpose() * &wo + &wo * &a + &ctc).norm() <= 1e-8 * ctc.norm());
    // positive semidefinite: all eigenvalues nonnegative
    for w in [&wc, &wo] {
        let se = nalgebra::SymmetricEigen::new(w.clone());
        assert!(se.eigenvalues.iter().all(|&l| l > -1e-10 * w.norm()));
    }
}

#[test]
fn gramians_reject_unstable_system() {
    let sys = StateSpace::new(
        DMatrix::from_element(1, 1, 0.5),
        DMatrix::from_element(1, 1, 1.0),
        DMatrix::from_element(1, 1, 1.0),
        DMatrix::zeros(1, 1),
    )
    .unwrap();
    assert!(gramians(&sys).is_err());
}
