use nalgebra::DMatrix;
use wapss_lti::StateSpace;

use crate::error::{Result, SynthError};
use crate::lmi::LmiVars;
use crate::plant::SynthesisProblem;

/// Recover the dynamic output-feedback controller from the LMI variables.
///
/// Factors I - RS = U V^T with a balanced square-root SVD split, then
/// inverts the variable changes C_hat = C_c U^T, B_hat = V B_c,
/// A_hat = S A R + S B_u C_hat + B_hat C_y R + V A_c U^T.
pub fn reconstruct_controller(v: &LmiVars, p: &SynthesisProblem) -> Result<StateSpace> {
    let n = p.nx();
    let m = DMatrix::identity(n, n) - &v.r * &v.s;
    let svd = m.clone().svd(true, true);
    let w = svd.u.as_ref().expect("svd vectors");
    let zt = svd.v_t.as_ref().expect("svd vectors");
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 || smax / smin > 1e12 {
        return Err(SynthError::IllConditioned {
            cond: if smin > 0.0 { smax / smin } else { f64::INFINITY },
        });
    }
    let sqrt_sig = DMatrix::from_diagonal(&svd.singular_values.map(f64::sqrt));
    let u_fac = w * &sqrt_sig;
    let v_fac = (sqrt_sig * zt).transpose();
    // guards against a factorization-convention bug, which would show as an
    // O(1) relative error; the bound leaves room for SVD roundoff
    let residual = (&u_fac * v_fac.transpose() - &m).norm();
    if residual > 1e-8 * m.norm() {
        return Err(SynthError::SolverFailure(format!(
            "factor residual {residual:.3e} exceeds 1e-8 of |I - RS|"
        )));
    }

    let u_lu = u_fac.clone().lu();
    let v_lu = v_fac.clone().lu();
    // C_c = C_hat U^-T  via  U C_c^T = C_hat^T
    let c_c = u_lu
        .solve(&v.c_hat.transpose())
        .ok_or(SynthError::IllConditioned { cond: f64::INFINITY })?
        .transpose();
    let b_c = v_lu
        .solve(&v.b_hat)
        .ok_or(SynthError::IllConditioned { cond: f64::INFINITY })?;
    let core = &v.a_hat
        - &v.s * &p.a * &v.r
        - &v.s * &p.b_u * &v.c_hat
        - &v.b_hat * &p.c_y * &v.r;
    let tmp = v_lu
        .solve(&core)
        .ok_or(SynthError::IllConditioned { cond: f64::INFINITY })?;
    // A_c = V^-1 core U^-T  via  (U A_c^T = (V^-1 core)^T)
    let a_c = u_lu
        .solve(&tmp.transpose())
        .ok_or(SynthError::IllConditioned { cond: f64::INFINITY })?
        .transpose();

    Ok(StateSpace::new(
        a_c,
        b_c,
        c_c,
        DMatrix::zeros(p.nu(), p.ny()),
    )?)
}
