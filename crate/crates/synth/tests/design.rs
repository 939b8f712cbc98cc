use nalgebra::DMatrix;
use wapss_lti::{FeedbackKind, StateSpace};
use wapss_synth::{design_wapss, ConicRegion, DesignSpec, SynthError, WeightSpec};

/// Six states: a badly damped 0.62 Hz pair, a 1.1 Hz pair, two fast real
/// poles. Two measured rows (local, remote), one actuator.
fn bench_plant() -> StateSpace {
    let mut a = DMatrix::zeros(6, 6);
    a[(0, 0)] = -0.10;
    a[(0, 1)] = 3.9;
    a[(1, 0)] = -3.9;
    a[(1, 1)] = -0.10;
    a[(2, 2)] = -0.50;
    a[(2, 3)] = 7.0;
    a[(3, 2)] = -7.0;
    a[(3, 3)] = -0.50;
    a[(4, 4)] = -8.0;
    a[(5, 5)] = -12.0;
    let b = DMatrix::from_column_slice(6, 1, &[0.4, 1.0, 0.3, 0.6, 1.0, 0.5]);
    let c = DMatrix::from_row_slice(
        2,
        6,
        &[
            0.8, 0.1, 0.3, 0.0, 0.2, 0.1, //
            -0.6, 0.2, 0.1, 0.2, 0.0, 0.3,
        ],
    );
    StateSpace::new(a, b, c, DMatrix::zeros(2, 1)).unwrap()
}

fn spec(kind: FeedbackKind, delay_s: Option<f64>) -> DesignSpec {
    DesignSpec {
        kind,
        delay_s,
        weights: WeightSpec::parse("10/(s+10)", "100s/(s+10)").unwrap(),
        region: ConicRegion::from_min_damping(0.15).unwrap(),
        plant_order: 4,
        controller_order: Some(3),
    }
}

#[test]
fn delay_free_design_improves_band_damping() {
    let plant = bench_plant();
    let (k, report) = design_wapss(&plant, &spec(FeedbackKind::Synchronized, None)).unwrap();

    assert!(report.gamma > 0.0);
    assert!(report.hinf <= report.gamma * (1.0 + 1e-6));
    for m in report.margins {
        assert!(m > 0.0);
    }
    // design model: 4 reduced + 2 weight states
    assert_eq!(report.full_controller_order, 6);
    assert!(k.nx() == 3 || report.reduction_note.is_some());
    assert_eq!(report.controller_order, k.nx());
    assert_eq!(report.plant_reduction.r, 4);
    assert!(report.plant_reduction.measured <= report.plant_reduction.bound * (1.0 + 1e-9));

    let before = report.band_damping_before.expect("oscillatory open modes");
    let after = report.band_damping_after.expect("oscillatory closed modes");
    assert!(before < 0.05, "the bench plant starts badly damped");
    assert!(
        after > before,
        "design should lift band damping: {before} -> {after}"
    );
}

#[test]
fn delayed_designs_come_back_stable_for_both_kinds() {
    let plant = bench_plant();
    for kind in [FeedbackKind::Synchronized, FeedbackKind::NonSynchronized] {
        let (k, report) = design_wapss(&plant, &spec(kind, Some(0.1))).unwrap();
        // 4 reduced + 2 delay + 2 weight states
        assert_eq!(report.full_controller_order, 8);
        assert!(k.nx() == 3 || report.reduction_note.is_some());
        assert!(report.closed_modes.iter().all(|m| m.eigenvalue.re < 0.0));
        assert!(report.band_damping_after.is_some());
    }
}

#[test]
fn single_output_plants_are_rejected() {
    let plant = bench_plant();
    let siso = StateSpace::new(
        plant.a().clone(),
        plant.b().clone(),
        plant.c().rows(0, 1).clone_owned(),
        DMatrix::zeros(1, 1),
    )
    .unwrap();
    let err = design_wapss(&siso, &spec(FeedbackKind::Synchronized, None)).unwrap_err();
    assert!(matches!(err, SynthError::Dimension(_)));
}
