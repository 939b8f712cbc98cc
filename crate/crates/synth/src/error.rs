use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error(transparent)]
    Lti(#[from] wapss_lti::LtiError),
    #[error("weight must be {0}")]
    BadWeight(String),
    #[error("cannot parse weight '{0}': expected k/(s+a) or k s/(s+a)")]
    WeightParse(String),
    #[error("sector half-angle {0} outside (0, pi/2]")]
    BadRegion(f64),
    #[error("unstabilizable mode at {re}{im:+}j (PBH sigma_min {sigma:.3e})")]
    NotStabilizable { re: f64, im: f64, sigma: f64 },
    #[error("undetectable mode at {re}{im:+}j (PBH sigma_min {sigma:.3e})")]
    NotDetectable { re: f64, im: f64, sigma: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("infeasible at gamma = {gamma_hi}; consider reducing the desired damping value")]
    Infeasible { gamma_hi: f64 },
    #[error("SDP solver failure: {0}")]
    SolverFailure(String),
    #[error("feasibility margin {margin:.3e} below 1e-8 on LMI {which}")]
    WeakMargin { which: &'static str, margin: f64 },
    #[error("reconstruction factor condition number {cond:.3e} exceeds 1e12; increase the gamma margin")]
    IllConditioned { cond: f64 },
    #[error("certification failed: {0}")]
    CertificationFailed(String),
}

pub type Result<T> = std::result::Result<T, SynthError>;
