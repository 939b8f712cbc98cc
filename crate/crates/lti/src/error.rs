use thiserror::Error;

#[derive(Debug, Error)]
pub enum LtiError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in matrix {0}")]
    NonFinite(&'static str),

    #[error("eigen iteration failed to converge: {0}")]
    EigenFailed(String),

    #[error("unstable system: eigenvalue {re:.6e}{im:+.6e}j has nonnegative real part")]
    Unstable { re: f64, im: f64 },

    #[error("infinite norm: system is unstable")]
    InfiniteNorm,

    #[error("frequency {omega} rad/s is within 1e-12 of an eigenvalue of A")]
    FrequencySingularity { omega: f64 },

    #[error("algebraic loop: I - D1*D2 is singular")]
    AlgebraicLoop,

    #[error("zero eigenvalue has no damping ratio")]
    ZeroEigenvalue,

    #[error("omegas must be strictly increasing and positive")]
    BadFrequencyGrid,

    #[error("nonpositive delay: T_d = {0}")]
    NonpositiveDelay(f64),

    #[error("reduction order {r} out of range for {n} states")]
    BadReductionOrder { r: usize, n: usize },

    #[error("non-unique truncation: sigma_{r} - sigma_{r1} = {gap:.3e} < 1e-9")]
    NonUniqueTruncation { r: usize, r1: usize, gap: f64 },

    #[error("unpaired complex eigenvalue {re:.6e}{im:+.6e}j in real matrix spectrum")]
    UnpairedEigenvalue { re: f64, im: f64 },

    #[error("empty candidate set")]
    EmptyCandidates,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, LtiError>;
