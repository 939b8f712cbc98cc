use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wapss_lti::freq::eval;
use wapss_lti::{balanced_truncate, hankel_singular_values, hinf_norm, LtiError, StateSpace};

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn random_stable(rng: &mut ChaCha8Rng, n: usize, nu: usize, ny: usize) -> StateSpace {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let shift = wapss_lti::eigenvalues(&m)
        .unwrap()
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max)
        + 0.5;
    let a = m - shift * DMatrix::identity(n, n);
    let b = DMatrix::from_fn(n, nu, |_, _| rng.random_range(-1.0..1.0));
    let cm = DMatrix::from_fn(ny, n, |_, _| rng.random_range(-1.0..1.0));
    StateSpace::new(a, b, cm, DMatrix::zeros(ny, nu)).unwrap()
}

/// 1/(s+1) in parallel with eps/(s+10).
fn eps_parallel(eps: f64) -> StateSpace {
    let a = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -10.0]);
    let b = DMatrix::from_column_slice(2, 1, &[1.0, 1.0]);
    let cm = DMatrix::from_row_slice(1, 2, &[1.0, eps]);
    StateSpace::new(a, b, cm, DMatrix::zeros(1, 1)).unwrap()
}

#[test]
fn scalar_lag_has_single_half_hsv() {
    let sys = StateSpace::new(
        DMatrix::from_element(1, 1, -1.0),
        DMatrix::from_element(1, 1, 1.0),
        DMatrix::from_element(1, 1, 1.0),
        DMatrix::zeros(1, 1),
    )
    .unwrap();
    let hsvs = hankel_singular_values(&sys).unwrap();
    assert_eq!(hsvs.len(), 1);
    assert!((hsvs[0] - 0.5).abs() < 1e-10);
}

#[test]
fn eps_parallel_hsvs_match_gramian_arithmetic() {
    let eps = 1e-6;
    let sys = eps_parallel(eps);
    let hsvs = hankel_singular_values(&sys).unwrap();
    assert_eq!(hsvs.len(), 2);

    // closed-form gramians of the diagonal realization
    let wc = [[0.5, 1.0 / 11.0], [1.0 / 11.0, 1.0 / 20.0]];
    let wo = [
        [0.5, eps / 11.0],
        [eps / 11.0, eps * eps / 20.0],
    ];
    let mut m = [[0.0f64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = wc[i][0] * wo[0][j] + wc[i][1] * wo[1][j];
        }
    }
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let l1 = 0.5 * (tr + (tr * tr - 4.0 * det).sqrt());
    let l2 = det / l1; // stable form for the tiny eigenvalue
    let (s1, s2) = (l1.sqrt(), l2.sqrt());

    assert!((hsvs[0] - s1).abs() <= 1e-9 * s1);
    assert!((hsvs[1] - s2).abs() <= 5e-3 * s2);
    // decoupled estimate: second value near eps/20, four orders below first
    assert!(hsvs[1] >= 0.5 * eps / 20.0 && hsvs[1] <= 2.0 * eps / 20.0);
    assert!(hsvs[1] <= 1e-4 * hsvs[0]);
}

#[test]
fn hsvs_invariant_under_similarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sys = random_stable(&mut rng, 6, 2, 1);
    let hsvs = hankel_singular_values(&sys).unwrap();

    let t: DMatrix<f64> =
        DMatrix::identity(6, 6) + 0.3 * DMatrix::from_fn(6, 6, |_, _| rng.random_range(-1.0..1.0));
    let ti = t.clone().try_inverse().unwrap();
    let sys2 = StateSpace::new(&t * sys.a() * &ti, &t * sys.b(), sys.c() * &ti, sys.d().clone())
        .unwrap();
    let hsvs2 = hankel_singular_values(&sys2).unwrap();

    assert_eq!(hsvs.len(), hsvs2.len());
    for (a, b) in hsvs.iter().zip(hsvs2.iter()) {
        assert!((a - b).abs() <= 1e-9 * hsvs[0].max(1.0));
    }
    assert!(hsvs.windows(2).all(|w| w[0] >= w[1]));
    assert!(hsvs.iter().all(|&s| s >= -1e-10));
}

#[test]
fn hsv_rejects_unstable_system() {
    let sys = StateSpace::new(
        DMatrix::from_element(1, 1, 0.1),
        DMatrix::from_element(1, 1, 1.0),
        DMatrix::from_element(1, 1, 1.0),
        DMatrix::zeros(1, 1),
    )
    .unwrap();
    assert!(hankel_singular_values(&sys).is_err());
}

#[test]
fn full_order_truncation_is_a_change_of_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sys = random_stable(&mut rng, 5, 1, 1);
    let (red, report) = balanced_truncate(&sys, 5).unwrap();
    assert_eq!(red.nx(), 5);
    assert_eq!(report.bound, 0.0);
    assert_eq!(report.measured, 0.0);
    for i in 0..20 {
        let w = 10f64.powf(-1.0 + 2.0 * i as f64 / 19.0);
        let a = eval(&sys, c(0.0, w)).unwrap()[(0, 0)];
        let b = eval(&red, c(0.0, w)).unwrap()[(0, 0)];
        assert!((a - b).norm() < 1e-9 * a.norm().max(1.0));
    }
    // independent norm of the difference confirms the zero error
    let diff = sys.subtract(&red).unwrap();
    assert!(hinf_norm(&diff, 1e-6).unwrap() < 1e-9);
}

#[test]
fn eps_parallel_truncation_keeps_dominant_branch() {
    let eps = 1e-6;
    let sys = eps_parallel(eps);
    let (red, report) = balanced_truncate(&sys, 1).unwrap();
    assert_eq!(red.nx(), 1);
    assert!(report.measured <= report.bound * (1.0 + 1e-6));

    // independent verification of the measured error via the norm oracle
    let diff = sys.subtract(&red).unwrap();
    let err = hinf_norm(&diff, 1e-6).unwrap();
    assert!(err <= 2.0 * report.hsvs[1] * (1.0 + 1e-6));

    // the kept branch is essentially 1/(s+1)
    let v = eval(&red, c(0.0, 0.5)).unwrap()[(0, 0)];
    assert!((v - c(1.0, 0.5).inv()).norm() < 1e-6);

    // mode map: -1 survives, -10 does not
    let m1 = report
        .mode_map
        .iter()
        .find(|m| (m.original - c(-1.0, 0.0)).norm() < 1e-6)
        .unwrap();
    assert!(m1.retained(0.02));
    let m10 = report
        .mode_map
        .iter()
        .find(|m| (m.original - c(-10.0, 0.0)).norm() < 1e-6)
        .unwrap();
    assert!(!m10.retained(0.02));
}

#[test]
fn error_bound_holds_on_fifty_random_systems() {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = 4 + (seed as usize) % 9; // 4..=12
        let nu = 1 + (seed as usize) % 2;
        let ny = 1 + (seed as usize / 2) % 2;
        let sys = random_stable(&mut rng, n, nu, ny);
        let r0 = 2 + (seed as usize) % (n - 3); // 2..=n-2
        // a near-tied HSV gap at the split is a legitimate refusal; move the split
        let (red, report) = match balanced_truncate(&sys, r0) {
            Ok(out) => out,
            Err(LtiError::NonUniqueTruncation { .. }) => (1..n)
                .filter(|&r| r != r0)
                .find_map(|r| balanced_truncate(&sys, r).ok())
                .expect("every split near-tied"),
            Err(e) => panic!("seed {seed}: {e}"),
        };
        assert!(red.is_stable().unwrap(), "seed {seed}: reduced unstable");
        assert!(
            report.measured <= report.bound * (1.0 + 1e-6),
            "seed {seed}: measured {} exceeds bound {}",
            report.measured,
            report.bound
        );
        assert!(report.hsvs.windows(2).all(|w| w[0] >= w[1]));

        // DC-gain drift obeys the same bound
        let g0 = eval(&sys, c(0.0, 0.0)).unwrap();
        let gr0 = eval(&red, c(0.0, 0.0)).unwrap();
        let drift = (g0 - gr0).singular_values().max();
        assert!(drift <= report.bound * (1.0 + 1e-6), "seed {seed}: DC drift");
    }
}

#[test]
fn order_validation_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sys = random_stable(&mut rng, 4, 1, 1);
    assert!(matches!(
        balanced_truncate(&sys, 0),
        Err(LtiError::BadReductionOrder { .. })
    ));
    assert!(matches!(
        balanced_truncate(&sys, 5),
        Err(LtiError::BadReductionOrder { .. })
    ));
}

#[test]
fn equal_hsvs_make_truncation_non_unique() {
    // normal A with B = C^T = sqrt(2 sigma) I: both gramians sigma I
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
    let hsvs = hankel_singular_values(&sys).unwrap();
    assert!((hsvs[0] - hsvs[1]).abs() < 1e-10);
    assert!(matches!(
        balanced_truncate(&sys, 1),
        Err(LtiError::NonUniqueTruncation { .. })
    ));
}
