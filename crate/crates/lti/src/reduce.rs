use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex;

use crate::eig::eigenvalues;
use crate::error::{LtiError, Result};
use crate::lyap::gramians;
use crate::norms::hinf_norm;
use crate::ss::StateSpace;

/// How one original mode fares under truncation: the nearest reduced
/// eigenvalue and the relative distance to it. A mode survives when the
/// distance is small (the 2% threshold is applied by callers).
#[derive(Debug, Clone, Copy)]
pub struct ModeMatch {
    pub original: Complex<f64>,
    pub nearest_reduced: Complex<f64>,
    pub rel_dist: f64,
}

impl ModeMatch {
    pub fn retained(&self, tol: f64) -> bool {
        self.rel_dist <= tol
    }
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub hsvs: Vec<f64>,
    pub r: usize,
    /// twice the tail sum of discarded Hankel singular values
    pub bound: f64,
    /// H-infinity norm of the full-minus-reduced difference system
    pub measured: f64,
    /// one entry per original mode (conjugate pairs collapsed)
    pub mode_map: Vec<ModeMatch>,
}

/// Cholesky-like square-root factor L with M = L L^T for a symmetric PSD
/// matrix given with roundoff; eigenvalues below eps * max are clipped.
fn psd_factor(m: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = 0.5 * (m + m.transpose());
    let se = SymmetricEigen::new(sym);
    let lmax = se.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let floor = lmax.max(1.0) * 1e-14;
    let n = se.eigenvectors.nrows();
    let mut l = se.eigenvectors.clone();
    for j in 0..n {
        let s = if se.eigenvalues[j] > floor {
            se.eigenvalues[j].sqrt()
        } else {
            0.0
        };
        for i in 0..n {
            l[(i, j)] *= s;
        }
    }
    l
}

/// Hankel singular values of a stable system, descending.
pub fn hankel_singular_values(sys: &StateSpace) -> Result<Vec<f64>> {
    let (p, q) = gramians(sys)?;
    let lc = psd_factor(&p);
    let lo = psd_factor(&q);
    let svd = SVD::new(lo.transpose() * lc, false, false);
    Ok(svd.singular_values.iter().cloned().collect())
}

/// Square-root balanced truncation to order r.
///
/// Errors when r falls inside a Hankel singular value cluster
/// (gap below 1e-9), since the truncated subspace is then not unique.
/// The reduced system is checked stable before returning.
pub fn balanced_truncate(sys: &StateSpace, r: usize) -> Result<(StateSpace, ReductionReport)> {
    let n = sys.nx();
    if r == 0 || r > n {
        return Err(LtiError::BadReductionOrder { r, n });
    }
    let (p, q) = gramians(sys)?;
    let lc = psd_factor(&p);
    let lo = psd_factor(&q);
    let svd = SVD::new(lo.transpose() * &lc, true, true);
    let hsvs: Vec<f64> = svd.singular_values.iter().cloned().collect();
    if r < n {
        let gap = hsvs[r - 1] - hsvs[r];
        if gap < 1e-9 {
            return Err(LtiError::NonUniqueTruncation { r, r1: r + 1, gap });
        }
    }
    if hsvs[r - 1] <= 1e-13 * hsvs[0].max(1.0) {
        return Err(LtiError::Invalid(format!(
            "order {r} reaches numerically zero Hankel singular values"
        )));
    }
    let u = svd.u.as_ref().expect("svd with u requested");
    let vt = svd.v_t.as_ref().expect("svd with v_t requested");
    // projection maps: t maps reduced to full states, l the reverse
    let mut t = DMatrix::zeros(n, r);
    let mut lproj = DMatrix::zeros(r, n);
    let lot = lo.transpose();
    for k in 0..r {
        let s = hsvs[k].sqrt();
        let tv = &lc * vt.row(k).transpose() / s;
        let lw = (u.column(k).transpose() * &lot) / s;
        for i in 0..n {
            t[(i, k)] = tv[i];
            lproj[(k, i)] = lw[(0, i)];
        }
    }
    let a_r = &lproj * sys.a() * &t;
    let b_r = &lproj * sys.b();
    let c_r = sys.c() * &t;
    let reduced = StateSpace::new(a_r, b_r, c_r, sys.d().clone())?;
    if !reduced.is_stable()? {
        return Err(LtiError::Invalid(
            "balanced truncation produced an unstable reduced system".into(),
        ));
    }
    let bound = 2.0 * hsvs[r..].iter().sum::<f64>();
    let measured = if r == n {
        0.0
    } else {
        hinf_norm(&sys.subtract(&reduced)?, 1e-6)?
    };
    let full_eigs = eigenvalues(sys.a())?;
    let red_eigs = eigenvalues(reduced.a())?;
    let mode_map = full_eigs
        .iter()
        .filter(|l| l.im >= 0.0)
        .map(|&l| {
            let nearest = red_eigs
                .iter()
                .cloned()
                .min_by(|x, y| (x - l).norm().partial_cmp(&(y - l).norm()).unwrap())
                .unwrap();
            ModeMatch {
                original: l,
                nearest_reduced: nearest,
                rel_dist: (nearest - l).norm() / l.norm().max(1e-12),
            }
        })
        .collect();
    Ok((
        reduced,
        ReductionReport {
            hsvs,
            r,
            bound,
            measured,
            mode_map,
        },
    ))
}
