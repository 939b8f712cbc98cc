use nalgebra::{DMatrix, Schur};

use crate::error::{LtiError, Result};
use crate::eig::balance;
use crate::ss::StateSpace;

/// Solve A X + X A' + Q = 0 for symmetric X, A Hurwitz, Q symmetric.
///
/// Bartels-Stewart on the real Schur form of the balanced A; the
/// diagonal balancing folds into the back-transformation as a general
/// similarity. Residual contract: ||AX + XA' + Q||_F <= 1e-8 ||Q||_F.
pub fn lyapunov_solve(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n || q.nrows() != n || q.ncols() != n {
        return Err(LtiError::DimensionMismatch(
            "lyapunov_solve: A and Q must be square of equal size".into(),
        ));
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    // A = P T P^-1 with P = diag(d) * U orthogonalized by the Schur factor
    let (d, ab) = balance(a);
    let schur = Schur::try_new(ab, f64::EPSILON, 0)
        .ok_or_else(|| LtiError::EigenFailed("Schur iteration did not converge".into()))?;
    let (u, t) = schur.unpack();

    // stability check on the quasi-triangular diagonal
    let mut i = 0;
    while i < n {
        let two_by_two = i + 1 < n && t[(i + 1, i)].abs() > 0.0;
        if two_by_two {
            let (t11, t12, t21, t22) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let tr = t11 + t22;
            let det = t11 * t22 - t12 * t21;
            // complex pair iff discriminant negative; either way Re >= 0 iff trace/det test fails
            let disc = tr * tr - 4.0 * det;
            if disc < 0.0 {
                if tr >= 0.0 {
                    let im = (-disc).sqrt() / 2.0;
                    return Err(LtiError::Unstable { re: tr / 2.0, im });
                }
            } else {
                let r1 = (tr + disc.sqrt()) / 2.0;
                let r2 = (tr - disc.sqrt()) / 2.0;
                if r1 >= 0.0 || r2 >= 0.0 {
                    return Err(LtiError::Unstable { re: r1.max(r2), im: 0.0 });
                }
            }
            i += 2;
        } else {
            if t[(i, i)] >= 0.0 {
                return Err(LtiError::Unstable { re: t[(i, i)], im: 0.0 });
            }
            i += 1;
        }
    }

    // Y solves T Y + Y T' + Qt = 0 with Qt = P^-1 Q P^-T, X = P Y P'
    let dinv_q = DMatrix::from_fn(n, n, |i, j| q[(i, j)] / (d[i] * d[j]));
    let qt = u.transpose() * dinv_q * &u;
    let y = solve_quasi_triangular(&t, &qt)?;
    let xu = &u * y * u.transpose();
    let x = DMatrix::from_fn(n, n, |i, j| xu[(i, j)] * d[i] * d[j]);
    // exact symmetry
    Ok(DMatrix::from_fn(n, n, |i, j| 0.5 * (x[(i, j)] + x[(j, i)])))
}

/// Back-substitution for T Y + Y T' = -Q over the 1x1/2x2 block structure.
fn solve_quasi_triangular(t: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = t.nrows();
    // block partition of the quasi-triangular diagonal
    let mut starts = Vec::new();
    let mut i = 0;
    while i < n {
        starts.push(i);
        if i + 1 < n && t[(i + 1, i)].abs() > 0.0 {
            i += 2;
        } else {
            i += 1;
        }
    }
    let nb = starts.len();
    let size = |bi: usize| -> usize {
        let s = starts[bi];
        let e = if bi + 1 < nb { starts[bi + 1] } else { n };
        e - s
    };
    let mut y = DMatrix::zeros(n, n);
    // process block rows and columns bottom-right upward; Y is symmetric
    for bi in (0..nb).rev() {
        for bj in (bi..nb).rev() {
            let (si, sj) = (starts[bi], starts[bj]);
            let (pi, pj) = (size(bi), size(bj));
            // rhs = -Q_ij - sum_{k>i} T_ik Y_kj - sum_{k>j} Y_ik T'_kj
            let mut rhs = DMatrix::zeros(pi, pj);
            for r in 0..pi {
                for cc in 0..pj {
                    rhs[(r, cc)] = -q[(si + r, sj + cc)];
                }
            }
            if si + pi < n {
                let t_right = t.view((si, si + pi), (pi, n - si - pi));
                let y_below = y.view((si + pi, sj), (n - si - pi, pj));
                rhs -= t_right * y_below;
            }
            if sj + pj < n {
                let y_right = y.view((si, sj + pj), (pi, n - sj - pj));
                let t_jrow = t.view((sj, sj + pj), (pj, n - sj - pj));
                rhs -= y_right * t_jrow.transpose();
            }
            // solve T_ii Z + Z T_jj' = rhs via the small Kronecker system
            let tii = t.view((si, si), (pi, pi)).clone_owned();
            let tjj = t.view((sj, sj), (pj, pj)).clone_owned();
            let m = pi * pj;
            let mut k = DMatrix::zeros(m, m);
            // vec(T_ii Z) = (I kron T_ii) vec(Z); vec(Z T_jj') = (T_jj kron I) vec(Z)
            for col_z in 0..pj {
                for row_z in 0..pi {
                    let vz = col_z * pi + row_z;
                    for r in 0..pi {
                        k[(col_z * pi + r, vz)] += tii[(r, row_z)];
                    }
                    for cc in 0..pj {
                        k[(cc * pi + row_z, vz)] += tjj[(cc, col_z)];
                    }
                }
            }
            let rhs_vec =
                nalgebra::DVector::from_fn(m, |v, _| rhs[(v % pi, v / pi)]);
            let z_vec = k
                .lu()
                .solve(&rhs_vec)
                .ok_or_else(|| LtiError::EigenFailed("singular Sylvester block".into()))?;
            for cc in 0..pj {
                for r in 0..pi {
                    y[(si + r, sj + cc)] = z_vec[cc * pi + r];
                    y[(sj + cc, si + r)] = z_vec[cc * pi + r];
                }
            }
        }
    }
    Ok(y)
}

/// Controllability and observability gramians of a stable system.
pub fn gramians(sys: &StateSpace) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let bbt = sys.b() * sys.b().transpose();
    let ctc = sys.c().transpose() * sys.c();
    let wc = lyapunov_solve(sys.a(), &bbt)?;
    let wo = lyapunov_solve(&sys.a().transpose(), &ctc)?;
    Ok((wc, wo))
}
