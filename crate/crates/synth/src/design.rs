use nalgebra::DMatrix;
use num_complex::Complex;
use wapss_lti::{
    assemble_nonsynchronized, assemble_synchronized, balanced_truncate, modal_decomposition,
    pade2, FeedbackConfig, FeedbackKind, ReductionReport, StateSpace,
};

use crate::certify::{certify, Certificate};
use crate::error::{Result, SynthError};
use crate::lmi::LmiForm;
use crate::plant::{build_generalized_plant, SynthesisProblem};
use crate::reconstruct::reconstruct_controller;
use crate::region::ConicRegion;
use crate::sdp::{
    minimize_gamma, solve_feasibility, solve_feasibility_conditioned, FeasibleSolution,
};
use crate::weights::WeightSpec;

/// Everything a damping-controller design needs besides the plant itself.
#[derive(Debug, Clone)]
pub struct DesignSpec {
    pub kind: FeedbackKind,
    /// Delay folded into the design model; `None` designs delay-free.
    pub delay_s: Option<f64>,
    pub weights: WeightSpec,
    pub region: ConicRegion,
    /// Balanced-truncation order for the design model.
    pub plant_order: usize,
    /// Optional balanced-truncation order for the final controller.
    pub controller_order: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct Mode {
    pub eigenvalue: Complex<f64>,
    pub frequency_hz: f64,
    pub damping: f64,
}

#[derive(Debug, Clone)]
pub struct DesignReport {
    pub gamma: f64,
    pub margins: [f64; 3],
    /// Independent closed-loop norm on the design plant.
    pub hinf: f64,
    pub plant_reduction: ReductionReport,
    pub full_controller_order: usize,
    pub controller_order: usize,
    pub reduction_note: Option<String>,
    /// Oscillatory modes of the plant alone and of the verified full-order
    /// closed loop.
    pub open_modes: Vec<Mode>,
    pub closed_modes: Vec<Mode>,
    /// Minimum damping over modes in the 0.1..=3 Hz band, when any exist.
    pub band_damping_before: Option<f64>,
    pub band_damping_after: Option<f64>,
}

fn modes_of(sys: &StateSpace) -> Result<Vec<Mode>> {
    Ok(modal_decomposition(sys, None)?
        .into_iter()
        .map(|m| Mode {
            eigenvalue: m.eigenvalue,
            frequency_hz: m.frequency_hz,
            damping: m.damping,
        })
        .collect())
}

fn band_min_damping(modes: &[Mode]) -> Option<f64> {
    modes
        .iter()
        .filter(|m| (0.1..=3.0).contains(&m.frequency_hz))
        .map(|m| m.damping)
        .min_by(|a, b| a.partial_cmp(b).unwrap())
}

fn assemble(
    kind: FeedbackKind,
    plant: &StateSpace,
    delay: &wapss_lti::PadeDelay,
    controller: Option<&StateSpace>,
    cfg: &FeedbackConfig,
) -> Result<StateSpace> {
    Ok(match kind {
        FeedbackKind::Synchronized => assemble_synchronized(plant, delay, controller, cfg)?,
        FeedbackKind::NonSynchronized => assemble_nonsynchronized(plant, delay, controller, cfg)?,
    })
}

/// Minimize gamma, rebuild the controller, and certify it. Near the
/// optimum the controller reconstruction can be ill conditioned (R S
/// approaches I); backing gamma off a little and re-solving restores a
/// usable factorization, so a short escalation ladder runs before giving
/// up. The certificate always refers to the gamma actually solved at.
pub fn synthesize_certified(
    p: &SynthesisProblem,
    form: LmiForm,
) -> Result<(StateSpace, FeasibleSolution, Certificate)> {
    let base = minimize_gamma(p, form)?;
    let mut last_err = None;
    for factor in [1.0, 1.1, 1.3, 2.0] {
        let sol = if factor == 1.0 {
            Some(base.clone())
        } else {
            let gamma = (base.gamma * factor).min(p.gamma_max());
            solve_feasibility_conditioned(p, gamma, form)?
                .or(solve_feasibility(p, gamma, form)?)
        };
        let Some(sol) = sol else { continue };
        let attempt = reconstruct_controller(&sol.vars, p)
            .and_then(|k| certify(p, &k, sol.gamma).map(|c| (k, c)));
        match attempt {
            Ok((k, cert)) => return Ok((k, sol, cert)),
            Err(e @ (SynthError::IllConditioned { .. } | SynthError::CertificationFailed(_))) => {
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| {
        SynthError::SolverFailure("no reconstructable solution on the gamma ladder".into())
    }))
}

fn composed_siso(plant: &StateSpace) -> Result<StateSpace> {
    Ok(StateSpace::new(
        plant.a().clone(),
        plant.b().clone(),
        (plant.c().rows(0, 1) + plant.c().rows(1, 1)).clone_owned(),
        DMatrix::zeros(1, plant.nu()),
    )?)
}

/// Full design pipeline on a two-output plant (local and remote measurement
/// rows): reduce, fold in the delay when designing for one, shape with the
/// weights, synthesize, certify on the design plant, optionally reduce the
/// controller, then verify on the full-order model.
pub fn design_wapss(
    full_plant: &StateSpace,
    spec: &DesignSpec,
) -> Result<(StateSpace, DesignReport)> {
    if full_plant.ny() != 2 || full_plant.nu() != 1 {
        return Err(SynthError::Dimension(format!(
            "design plant must be 2 outputs x 1 input, got {}x{}",
            full_plant.ny(),
            full_plant.nu()
        )));
    }
    let (red_plant, plant_reduction) = balanced_truncate(full_plant, spec.plant_order)?;

    let open_design = match spec.delay_s {
        Some(t) => {
            let cfg = FeedbackConfig::from_plant(spec.kind, &red_plant)?;
            assemble(spec.kind, &red_plant, &pade2(t)?, None, &cfg)?
        }
        None => red_plant.clone(),
    };
    let problem = build_generalized_plant(&open_design, &spec.weights, spec.region)?;
    let (k_full, sol, cert) = synthesize_certified(&problem, LmiForm::Appendix)?;

    let full_order = k_full.nx();
    let (controller, reduction_note) = match spec.controller_order {
        Some(r) if r < full_order => {
            if k_full.is_stable()? {
                match balanced_truncate(&k_full, r) {
                    Ok((kr, _)) => (kr, None),
                    Err(e) => (
                        k_full,
                        Some(format!("controller kept at full order: {e}")),
                    ),
                }
            } else {
                (
                    k_full,
                    Some("controller unstable; kept at full order".into()),
                )
            }
        }
        _ => (k_full, None),
    };

    // verify on the full-order model at the design delay (or delay-free)
    let closed_full = match spec.delay_s {
        Some(t) => {
            let cfg = FeedbackConfig::from_plant(spec.kind, full_plant)?;
            assemble(spec.kind, full_plant, &pade2(t)?, Some(&controller), &cfg)?
        }
        None => composed_siso(full_plant)?.feedback(&controller)?,
    };
    if !closed_full.is_stable()? {
        return Err(SynthError::CertificationFailed(
            "full-order closed loop unstable at the design delay".into(),
        ));
    }
    let open_modes = modes_of(full_plant)?;
    let closed_modes = modes_of(&closed_full)?;

    let report = DesignReport {
        gamma: sol.gamma,
        margins: sol.margins,
        hinf: cert.hinf,
        plant_reduction,
        full_controller_order: full_order,
        controller_order: controller.nx(),
        reduction_note,
        band_damping_before: band_min_damping(&open_modes),
        band_damping_after: band_min_damping(&closed_modes),
        open_modes,
        closed_modes,
    };
    Ok((controller, report))
}
