use faer::linalg::solvers::Eigen;
use faer::Mat;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{LtiError, Result};

fn to_faer(a: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Eigenvalues of a real square matrix, conjugate-paired.
///
/// Pairing is enforced by symmetrizing each (lambda, conj lambda) couple;
/// a complex eigenvalue without a partner within 1e-9 relative distance
/// is an error for a real input matrix.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    assert_eq!(a.nrows(), a.ncols(), "eigenvalues: matrix must be square");
    if a.nrows() == 0 {
        return Ok(vec![]);
    }
    // balancing keeps accuracy when blocks differ by many orders of magnitude
    let (_, b) = balance(a);
    let vals = to_faer(&b)
        .eigenvalues()
        .map_err(|e| LtiError::EigenFailed(format!("{e:?}")))?;
    pair_conjugates(vals)
}

fn pair_conjugates(mut vals: Vec<Complex<f64>>) -> Result<Vec<Complex<f64>>> {
    let scale = vals.iter().map(|l| l.norm()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-9 * scale;
    let mut used = vec![false; vals.len()];
    for i in 0..vals.len() {
        if used[i] || vals[i].im.abs() <= tol {
            continue;
        }
        let target = vals[i].conj();
        let mut best: Option<(usize, f64)> = None;
        for j in 0..vals.len() {
            if j == i || used[j] {
                continue;
            }
            let d = (vals[j] - target).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= tol => {
                let m = (vals[i] + vals[j].conj()) * 0.5;
                let (hi, lo) = if vals[i].im > 0.0 { (i, j) } else { (j, i) };
                vals[hi] = Complex::new(m.re, m.im.abs());
                vals[lo] = Complex::new(m.re, -m.im.abs());
                used[i] = true;
                used[j] = true;
            }
            _ => {
                return Err(LtiError::UnpairedEigenvalue {
                    re: vals[i].re,
                    im: vals[i].im,
                })
            }
        }
    }
    // exact zero for near-real eigenvalues after pairing
    for v in vals.iter_mut() {
        if v.im.abs() <= tol {
            v.im = 0.0;
        }
    }
    vals.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });
    Ok(vals)
}

/// Full eigendecomposition with bi-orthogonal right/left eigenvectors.
///
/// `right` holds right eigenvectors as columns; `left` holds left
/// eigenvectors as rows, normalized so left * right = I, which makes
/// left exactly the inverse of right.
pub struct EigenDecomp {
    pub values: Vec<Complex<f64>>,
    pub right: DMatrix<Complex<f64>>,
    pub left: DMatrix<Complex<f64>>,
}

pub fn eigen(a: &DMatrix<f64>) -> Result<EigenDecomp> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigen: matrix must be square");
    let (d, bal) = balance(a);
    let evd = Eigen::new_from_real(to_faer(&bal).as_ref())
        .map_err(|e| LtiError::EigenFailed(format!("{e:?}")))?;
    let values: Vec<Complex<f64>> = {
        let s = evd.S().column_vector();
        (0..n).map(|i| s[i]).collect()
    };
    // vectors of D^-1 A D map back through D; renormalization follows below
    let u = evd.U();
    let mut right = DMatrix::<Complex<f64>>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            right[(i, j)] = u[(i, j)] * d[i];
        }
    }
    // normalize columns for reproducibility: unit norm, largest entry real positive
    for j in 0..n {
        let mut col = right.column_mut(j);
        let norm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            let k = (0..n)
                .max_by(|&p, &q| {
                    col[p]
                        .norm()
                        .partial_cmp(&col[q].norm())
                        .unwrap()
                })
                .unwrap();
            let phase = col[k] / col[k].norm();
            let scale = (phase * norm).inv();
            for x in col.iter_mut() {
                *x *= scale;
            }
        }
    }
    let left = right
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| LtiError::EigenFailed("defective eigenvector matrix".into()))?;
    Ok(EigenDecomp {
        values,
        right,
        left,
    })
}

/// Residual ||A phi - lambda phi|| of eigenpair `i`, for defectiveness checks.
pub fn eigen_residual(a: &DMatrix<f64>, d: &EigenDecomp, i: usize) -> f64 {
    let n = a.nrows();
    let phi = d.right.column(i);
    let mut r = DVector::<Complex<f64>>::zeros(n);
    for row in 0..n {
        let mut acc = Complex::new(0.0, 0.0);
        for k in 0..n {
            acc += Complex::new(a[(row, k)], 0.0) * phi[k];
        }
        r[row] = acc - d.values[i] * phi[row];
    }
    r.norm()
}

/// Parlett-Reinsch diagonal balancing: returns (d, b) with b = D^-1 A D,
/// D = diag(d), powers of 2 so no rounding is introduced.
pub fn balance(a: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut b = a.clone();
    let mut d = DVector::from_element(n, 1.0);
    let radix = 2.0f64;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut col_norm = 0.0;
            let mut row_norm: f64 = 0.0;
            for j in 0..n {
                if j != i {
                    col_norm += b[(j, i)].abs();
                    row_norm += b[(i, j)].abs();
                }
            }
            if col_norm == 0.0 || row_norm == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let mut c = col_norm;
            let s = col_norm + row_norm;
            while c < row_norm / radix {
                f *= radix;
                c *= radix * radix;
            }
            while c > row_norm * radix {
                f /= radix;
                c /= radix * radix;
            }
            if (col_norm * f + row_norm / f) < 0.95 * s {
                done = false;
                d[i] *= f;
                for j in 0..n {
                    b[(i, j)] /= f;
                }
                for j in 0..n {
                    b[(j, i)] *= f;
                }
            }
        }
    }
    (d, b)
}
