use wapss_lti::{eigenvalues, hinf_norm, StateSpace};

use crate::error::{Result, SynthError};
use crate::plant::SynthesisProblem;

/// Independent closed-loop evidence for a synthesized controller, computed
/// from state-space analysis only, never from the LMI variables.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub gamma: f64,
    pub hinf: f64,
    /// max over eigenvalues of |Im| - tan(theta)*(-Re); <= 0 means inside.
    pub sector_excess: f64,
    pub closed_loop: StateSpace,
}

/// Check the gamma bound and the sector placement on the actual closed
/// loop. Fails rather than returning a bad certificate.
pub fn certify(p: &SynthesisProblem, controller: &StateSpace, gamma: f64) -> Result<Certificate> {
    let cl = p.close(controller)?;
    let eigs = eigenvalues(cl.a())?;
    let tan_t = p.region().theta().tan();
    let mut excess = f64::NEG_INFINITY;
    for l in &eigs {
        if l.re >= 0.0 {
            return Err(SynthError::CertificationFailed(format!(
                "closed-loop eigenvalue {l} not in the open left half-plane"
            )));
        }
        excess = excess.max(l.im.abs() - tan_t * (-l.re));
    }
    let scale: f64 = eigs.iter().map(|l| l.norm()).fold(1.0, f64::max);
    if excess > 1e-9 * scale {
        return Err(SynthError::CertificationFailed(format!(
            "sector violation {excess:.3e} (tan theta = {tan_t:.3})"
        )));
    }
    let hinf = hinf_norm(&cl, 1e-9)?;
    if hinf > gamma * (1.0 + 1e-6) {
        return Err(SynthError::CertificationFailed(format!(
            "closed-loop norm {hinf:.6e} exceeds gamma {gamma:.6e}"
        )));
    }
    Ok(Certificate {
        gamma,
        hinf,
        sector_excess: excess,
        closed_loop: cl,
    })
}
