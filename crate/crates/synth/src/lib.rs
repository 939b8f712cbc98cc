//! H-infinity output-feedback synthesis with conic-sector pole placement.
//!
//! The pipeline: shape a plant with mixed-sensitivity weights
//! ([`build_generalized_plant`]), minimize the closed-loop gain over the
//! LMI feasibility region ([`minimize_gamma`]), rebuild the dynamic
//! controller from the decision variables ([`reconstruct_controller`]),
//! and certify the result against the gain and sector targets with an
//! independent eigenvalue/norm check ([`certify`]). [`design_wapss`] runs
//! the whole chain on a two-measurement power-system plant, including
//! model and controller order reduction and delay handling.

pub mod certify;
pub mod design;
pub mod error;
pub mod lmi;
pub mod plant;
pub mod reconstruct;
pub mod region;
pub mod sdp;
pub mod weights;

pub use certify::{certify, Certificate};
pub use design::{design_wapss, synthesize_certified, DesignReport, DesignSpec, Mode};
pub use error::{Result, SynthError};
pub use lmi::{assemble_lmis, lmi_sides, LmiForm, LmiVars, VarLayout};
pub use plant::{build_generalized_plant, SynthesisProblem};
pub use reconstruct::reconstruct_controller;
pub use region::ConicRegion;
pub use sdp::{
    minimize_gamma, minimize_gamma_with_tol, solve_affine_feasibility, solve_affine_min,
    solve_feasibility, solve_feasibility_conditioned, AffineLmi, FeasibleSolution,
};
pub use weights::{parse_weight, WeightSpec};
