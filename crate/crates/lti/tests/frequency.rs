use nalgebra::DMatrix;
use num_complex::Complex;

use wapss_lti::freq::eval;
use wapss_lti::{frequency_response, log_grid, sigma_max, LtiError, StateSpace};

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

#[test]
fn first_order_lowpass_hand_value() {
    let g = StateSpace::from_tf(&[1.0], &[1.0, 1.0]).unwrap();
    let r = frequency_response(&g, &[1.0]).unwrap();
    // 1/(1+j) = (1-j)/2
    assert!((r.values()[0][(0, 0)] - c(0.5, -0.5)).norm() < 1e-14);
}

#[test]
fn response_at_general_complex_point() {
    let g = StateSpace::from_tf(&[1.0], &[1.0, 1.0]).unwrap();
    let v = eval(&g, c(1.0, 1.0)).unwrap()[(0, 0)];
    assert!((v - c(2.0, 1.0).inv()).norm() < 1e-14);
}

#[test]
fn static_system_response_is_constant() {
    let g = StateSpace::static_gain(DMatrix::from_element(1, 1, 2.5));
    let ws = [0.01, 1.0, 100.0];
    let r = frequency_response(&g, &ws).unwrap();
    for v in r.values() {
        assert_eq!(v[(0, 0)], c(2.5, 0.0));
    }
}

#[test]
fn grid_must_be_positive_and_increasing() {
    let g = StateSpace::from_tf(&[1.0], &[1.0, 1.0]).unwrap();
    for bad in [vec![], vec![0.0, 1.0], vec![-1.0, 1.0], vec![2.0, 1.0], vec![1.0, 1.0]] {
        assert!(matches!(
            frequency_response(&g, &bad),
            Err(LtiError::BadFrequencyGrid)
        ));
    }
}

#[test]
fn imaginary_axis_pole_raises_singularity() {
    let a = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, -2.0, 0.0]);
    let sys = StateSpace::new(
        a,
        DMatrix::from_column_slice(2, 1, &[0.0, 1.0]),
        DMatrix::from_row_slice(1, 2, &[1.0, 0.0]),
        DMatrix::zeros(1, 1),
    )
    .unwrap();
    assert!(matches!(
        frequency_response(&sys, &[1.0, 2.0]),
        Err(LtiError::FrequencySingularity { .. })
    ));
    // off the pole the response is fine
    assert!(frequency_response(&sys, &[1.0, 3.0]).is_ok());
}

#[test]
fn sigma_max_of_scalar_equals_magnitude() {
    let g = StateSpace::from_tf(&[1.0], &[1.0, 1.0]).unwrap();
    let s = sigma_max(&g, 1.0).unwrap();
    assert!((s - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn log_grid_endpoints_and_monotonicity() {
    let g = log_grid(1e-2, 1e3, 40);
    assert_eq!(g.len(), 40);
    assert!((g[0] - 1e-2).abs() < 1e-15);
    assert!((g[39] - 1e3).abs() < 1e-10);
    assert!(g.windows(2).all(|w| w[0] < w[1]));
}
