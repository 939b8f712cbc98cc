use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettings, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use nalgebra::DMatrix;

use crate::error::{Result, SynthError};
use crate::lmi::{assemble_lmis, LmiForm, LmiVars, VarLayout};
use crate::plant::SynthesisProblem;

/// Strict-feasibility shift: blocks are solved as M(x) <= -SHIFT*I.
const SHIFT: f64 = 1e-7;
/// Post-solve acceptance floor on the true minimum-eigenvalue margins.
const MARGIN_FLOOR: f64 = 1e-8;

/// One affine symmetric-matrix constraint M(x) = m0 + sum x_k grad_k < 0.
#[derive(Debug, Clone)]
pub struct AffineLmi {
    pub m0: DMatrix<f64>,
    pub grads: Vec<(usize, DMatrix<f64>)>,
}

impl AffineLmi {
    pub fn eval(&self, x: &[f64]) -> DMatrix<f64> {
        let mut m = self.m0.clone();
        for (k, g) in &self.grads {
            m += g * x[*k];
        }
        m
    }
}

fn svec_len(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Clarabel triangular-cone packing: column-stacked upper triangle with
/// off-diagonal entries scaled by sqrt(2).
fn svec_into(m: &DMatrix<f64>, out: &mut Vec<f64>) {
    let d = m.nrows();
    let rt2 = std::f64::consts::SQRT_2;
    for j in 0..d {
        for i in 0..=j {
            out.push(if i == j { m[(i, i)] } else { rt2 * m[(i, j)] });
        }
    }
}

fn min_eig_sym(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigen().eigenvalues.min()
}

/// Strict-feasibility solve for a set of affine LMIs in `nvar` scalar
/// variables. Returns the point and the per-block margins lambda_min(-M_i),
/// or `None` when infeasible at the built-in shift.
pub fn solve_affine_feasibility(
    lmis: &[AffineLmi],
    nvar: usize,
) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    solve_affine_min(lmis, nvar, &vec![0.0; nvar])
}

/// Minimize `q . x` over the strict-feasibility region of the blocks.
/// With q = 0 this is a pure feasibility solve. The caller must know the
/// objective is bounded below on the feasible set.
pub fn solve_affine_min(
    lmis: &[AffineLmi],
    nvar: usize,
    q: &[f64],
) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    assert_eq!(q.len(), nvar, "objective length");
    let nrows: usize = lmis.iter().map(|l| svec_len(l.m0.nrows())).sum();

    let mut b = Vec::with_capacity(nrows);
    for l in lmis {
        let mut shifted = -l.m0.clone();
        for i in 0..shifted.nrows() {
            shifted[(i, i)] -= SHIFT;
        }
        svec_into(&shifted, &mut b);
    }

    // constraints packed as A x + s = b, s PSD: column k = stacked svec of
    // the k-th gradients
    let mut colptr = Vec::with_capacity(nvar + 1);
    let mut rowval = Vec::new();
    let mut nzval = Vec::new();
    colptr.push(0);
    let mut col = vec![0.0; nrows];
    for k in 0..nvar {
        col.iter_mut().for_each(|v| *v = 0.0);
        let mut offset = 0;
        for l in lmis {
            let len = svec_len(l.m0.nrows());
            for (kk, g) in &l.grads {
                if *kk == k {
                    let mut tmp = Vec::with_capacity(len);
                    svec_into(g, &mut tmp);
                    for (i, v) in tmp.into_iter().enumerate() {
                        col[offset + i] += v;
                    }
                }
            }
            offset += len;
        }
        for (i, &v) in col.iter().enumerate() {
            if v != 0.0 {
                rowval.push(i);
                nzval.push(v);
            }
        }
        colptr.push(rowval.len());
    }
    let a = CscMatrix::new(nrows, nvar, colptr, rowval, nzval);
    let p_quad = CscMatrix::zeros((nvar, nvar));
    let cones: Vec<SupportedConeT<f64>> = lmis
        .iter()
        .map(|l| SupportedConeT::PSDTriangleConeT(l.m0.nrows()))
        .collect();

    let settings = DefaultSettings {
        verbose: false,
        ..DefaultSettings::default()
    };
    let mut solver = DefaultSolver::new(&p_quad, q, &a, &b, &cones, settings)
        .map_err(|e| SynthError::SolverFailure(format!("{e:?}")))?;
    solver.solve();
    let status = solver.solution.status;

    // Feasibility here means "we hold a point that passes the independent
    // margin check below", so any terminal status that does not yield one
    // (infeasibility certificates, stalls, numerical breakdown) collapses
    // to None. That only costs conservatism: callers bisect over gamma and
    // certify the final design independently.
    if !matches!(status, SolverStatus::Solved | SolverStatus::AlmostSolved) {
        return Ok(None);
    }
    let x = solver.solution.x.clone();
    if x.iter().any(|v| !v.is_finite()) {
        return Ok(None);
    }
    let margins: Vec<f64> = lmis.iter().map(|l| min_eig_sym(&(-l.eval(&x)))).collect();
    if margins.iter().all(|&m| m >= MARGIN_FLOOR) {
        Ok(Some((x, margins)))
    } else {
        Ok(None)
    }
}

#[derive(Debug, Clone)]
pub struct FeasibleSolution {
    pub vars: LmiVars,
    pub gamma: f64,
    /// lambda_min of -M_i(x) for the three blocks, unshifted.
    pub margins: [f64; 3],
}

fn synthesis_lmis(p: &SynthesisProblem, gamma: f64, form: LmiForm) -> (Vec<AffineLmi>, usize) {
    let layout = VarLayout::of(p);
    let nvar = layout.count();
    let zeros = LmiVars::zeros(layout.n, layout.ny, layout.nu);
    let m0 = assemble_lmis(p, gamma, &zeros, form);
    let mut lmis: Vec<AffineLmi> = m0
        .iter()
        .map(|m| AffineLmi {
            m0: m.clone(),
            grads: Vec::new(),
        })
        .collect();
    for k in 0..nvar {
        let mk = assemble_lmis(p, gamma, &layout.basis(k), form);
        for (lmi, (blk, base)) in lmis.iter_mut().zip(mk.iter().zip(&m0)) {
            let g = blk - base;
            if g.iter().any(|&v| v != 0.0) {
                lmi.grads.push((k, g));
            }
        }
    }
    (lmis, nvar)
}

/// One strict-feasibility solve of the three synthesis LMIs at fixed gamma.
/// `Ok(None)` means infeasible at this gamma.
pub fn solve_feasibility(
    p: &SynthesisProblem,
    gamma: f64,
    form: LmiForm,
) -> Result<Option<FeasibleSolution>> {
    let layout = VarLayout::of(p);
    let (lmis, nvar) = synthesis_lmis(p, gamma, form);
    Ok(solve_affine_feasibility(&lmis, nvar)?.map(|(x, margins)| FeasibleSolution {
        vars: layout.unpack(&x),
        gamma,
        margins: [margins[0], margins[1], margins[2]],
    }))
}

/// Like `solve_feasibility`, but picks the point maximizing t in
/// [S, I; I, R] >= t I instead of an arbitrary interior point. Pushing the
/// coupling block away from singularity keeps I - R S well conditioned,
/// which is what the controller reconstruction inverts; a plain
/// feasibility solve is free to return R S arbitrarily close to I.
///
/// t is boxed into [0, 1]: uncapped it drags R and S toward huge
/// Lyapunov-direction values the gamma blocks never see, and without the
/// floor a negative t would *relax* the coupling block, letting the solver
/// trade real feasibility for objective. A small trace penalty on R and S
/// keeps the objective coercive. The returned point is re-validated against
/// the unaugmented coupling block, so no slack arithmetic is trusted.
pub fn solve_feasibility_conditioned(
    p: &SynthesisProblem,
    gamma: f64,
    form: LmiForm,
) -> Result<Option<FeasibleSolution>> {
    let layout = VarLayout::of(p);
    let (mut lmis, nvar) = synthesis_lmis(p, gamma, form);
    let coupling = lmis[2].clone();
    let side = lmis[2].m0.nrows();
    lmis[2].grads.push((nvar, DMatrix::identity(side, side)));
    lmis.push(AffineLmi {
        m0: DMatrix::from_element(1, 1, -1.0),
        grads: vec![(nvar, DMatrix::from_element(1, 1, 1.0))],
    });
    lmis.push(AffineLmi {
        m0: DMatrix::zeros(1, 1),
        grads: vec![(nvar, DMatrix::from_element(1, 1, -1.0))],
    });
    let mut q = vec![0.0; nvar + 1];
    q[nvar] = -1.0;
    for k in layout.diag_positions() {
        q[k] = 1e-8;
    }
    Ok(solve_affine_min(&lmis, nvar + 1, &q)?.and_then(|(x, margins)| {
        let m3 = min_eig_sym(&(-coupling.eval(&x)));
        if m3 < MARGIN_FLOOR {
            return None;
        }
        Some(FeasibleSolution {
            vars: layout.unpack(&x[..nvar]),
            gamma,
            margins: [margins[0], margins[1], m3],
        })
    }))
}

/// Smallest feasible gamma by geometric bisection on [1e-3, gamma_max],
/// to relative bracket width `rel_tol`.
///
/// The upper bracket is found by decade steps up from 1 rather than one
/// probe at gamma_max: with gamma on the block diagonal, a 1e6 probe has
/// a dynamic range the solver handles far less reliably than the decade
/// walk, which stops at the first workable magnitude.
pub fn minimize_gamma_with_tol(
    p: &SynthesisProblem,
    form: LmiForm,
    rel_tol: f64,
) -> Result<FeasibleSolution> {
    let mut lo = 1e-3;
    let mut probe = 1.0f64;
    let mut best = loop {
        let gamma = probe.min(p.gamma_max());
        match solve_feasibility(p, gamma, form)? {
            Some(sol) => break sol,
            None => {
                if gamma >= p.gamma_max() {
                    return Err(SynthError::Infeasible { gamma_hi: gamma });
                }
                lo = gamma;
                probe *= 10.0;
            }
        }
    };
    let mut hi = best.gamma;
    while hi - lo > rel_tol * hi {
        let mid = (lo * hi).sqrt();
        match solve_feasibility(p, mid, form)? {
            Some(sol) => {
                hi = mid;
                best = sol;
            }
            None => lo = mid,
        }
    }
    // one conditioned re-solve at the final gamma; the bisection probes
    // stay cheap and only the returned point needs to reconstruct well
    if let Some(sol) = solve_feasibility_conditioned(p, best.gamma, form)? {
        best = sol;
    }
    Ok(best)
}

pub fn minimize_gamma(p: &SynthesisProblem, form: LmiForm) -> Result<FeasibleSolution> {
    minimize_gamma_with_tol(p, form, 1e-3)
}
