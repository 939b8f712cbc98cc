//! Continuous-time LTI state-space toolbox: interconnection, eigenanalysis,
//! Lyapunov solves, H-infinity norms, Pade delay models, modal metrics and
//! balanced truncation. Everything is dense, real, f64.

pub mod delay;
pub mod eig;
pub mod error;
pub mod freq;
pub mod lyap;
pub mod modal;
pub mod norms;
pub mod reduce;
pub mod ss;

pub use delay::{
    assemble_nonsynchronized, assemble_synchronized, pade2, pade_n, FeedbackConfig, FeedbackKind,
    PadeDelay,
};
pub use eig::{eigen, eigenvalues, EigenDecomp};
pub use error::{LtiError, Result};
pub use freq::{eval, frequency_response, log_grid, sigma_max, FrequencyResponse};
pub use lyap::{gramians, lyapunov_solve};
pub use modal::{
    damping_ratio, geometric_measures, modal_decomposition, select_loop, LoopCandidate,
    LoopRanking, ModeClass, ModeReport, RankedLoop, RotorContext,
};
pub use norms::hinf_norm;
pub use reduce::{balanced_truncate, hankel_singular_values, ModeMatch, ReductionReport};
pub use ss::StateSpace;
