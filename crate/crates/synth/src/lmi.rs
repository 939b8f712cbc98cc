use nalgebra::DMatrix;

use crate::plant::SynthesisProblem;

/// Dense decision variables of the synthesis LMIs.
#[derive(Debug, Clone)]
pub struct LmiVars {
    pub r: DMatrix<f64>,
    pub s: DMatrix<f64>,
    pub a_hat: DMatrix<f64>,
    pub b_hat: DMatrix<f64>,
    pub c_hat: DMatrix<f64>,
}

impl LmiVars {
    pub fn zeros(n: usize, ny: usize, nu: usize) -> Self {
        Self {
            r: DMatrix::zeros(n, n),
            s: DMatrix::zeros(n, n),
            a_hat: DMatrix::zeros(n, n),
            b_hat: DMatrix::zeros(n, ny),
            c_hat: DMatrix::zeros(nu, n),
        }
    }
}

/// Scalar packing of `LmiVars`: upper triangles of R and S column-stacked,
/// then the three general matrices column-major.
#[derive(Debug, Clone, Copy)]
pub struct VarLayout {
    pub n: usize,
    pub ny: usize,
    pub nu: usize,
}

impl VarLayout {
    pub fn of(p: &SynthesisProblem) -> Self {
        Self {
            n: p.nx(),
            ny: p.ny(),
            nu: p.nu(),
        }
    }

    fn sym(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    pub fn count(&self) -> usize {
        2 * self.sym() + self.n * self.n + self.n * self.ny + self.nu * self.n
    }

    pub fn unpack(&self, x: &[f64]) -> LmiVars {
        assert_eq!(x.len(), self.count(), "variable vector length");
        let mut v = LmiVars::zeros(self.n, self.ny, self.nu);
        let mut k = 0;
        for m in [&mut v.r, &mut v.s] {
            for j in 0..self.n {
                for i in 0..=j {
                    m[(i, j)] = x[k];
                    m[(j, i)] = x[k];
                    k += 1;
                }
            }
        }
        for m in [&mut v.a_hat, &mut v.b_hat, &mut v.c_hat] {
            for j in 0..m.ncols() {
                for i in 0..m.nrows() {
                    m[(i, j)] = x[k];
                    k += 1;
                }
            }
        }
        v
    }

    pub fn basis(&self, k: usize) -> LmiVars {
        let mut x = vec![0.0; self.count()];
        x[k] = 1.0;
        self.unpack(&x)
    }

    /// Positions of the diagonal entries of R, then of S, in packing order.
    pub fn diag_positions(&self) -> Vec<usize> {
        let diag = |j: usize| j * (j + 1) / 2 + j;
        (0..self.n)
            .map(diag)
            .chain((0..self.n).map(|j| self.sym() + diag(j)))
            .collect()
    }
}

/// Which printed layout to assemble. The two differ only by the naming of
/// the symmetric variables, so they must agree on feasibility; building
/// both from their respective sources guards transcription errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmiForm {
    Appendix,
    TheoremPrinted,
}

fn hinf_block(
    p: &SynthesisProblem,
    gamma: f64,
    phi1: &DMatrix<f64>,
    phi2: &DMatrix<f64>,
    a12: &DMatrix<f64>,
    b_row1: &DMatrix<f64>,
    b_row2: &DMatrix<f64>,
    z_col1: &DMatrix<f64>,
    z_col2: &DMatrix<f64>,
) -> DMatrix<f64> {
    let (n, nw, nz) = (p.nx(), p.nw(), p.nz());
    let side = 2 * n + nw + nz;
    let mut m = DMatrix::zeros(side, side);
    let (ow, oz) = (2 * n, 2 * n + nw);
    m.view_mut((0, 0), (n, n)).copy_from(&(phi1 + phi1.transpose()));
    m.view_mut((0, n), (n, n)).copy_from(a12);
    m.view_mut((0, ow), (n, nw)).copy_from(b_row1);
    m.view_mut((0, oz), (n, nz)).copy_from(z_col1);
    m.view_mut((n, n), (n, n)).copy_from(&(phi2 + phi2.transpose()));
    m.view_mut((n, ow), (n, nw)).copy_from(b_row2);
    m.view_mut((n, oz), (n, nz)).copy_from(z_col2);
    for i in 0..nw {
        m[(ow + i, ow + i)] = -gamma;
    }
    m.view_mut((ow, oz), (nw, nz)).copy_from(&p.d_zw.transpose());
    for i in 0..nz {
        m[(oz + i, oz + i)] = -gamma;
    }
    // mirror the strict lower triangle from the written upper blocks
    for i in 0..side {
        for j in 0..i {
            m[(i, j)] = m[(j, i)];
        }
    }
    m
}

fn sector_block(theta: f64, phi3: &DMatrix<f64>) -> DMatrix<f64> {
    let q = phi3.nrows();
    let sym = phi3 + phi3.transpose();
    let skew = phi3 - phi3.transpose();
    let (st, ct) = (theta.sin(), theta.cos());
    let mut m = DMatrix::zeros(2 * q, 2 * q);
    m.view_mut((0, 0), (q, q)).copy_from(&(st * &sym));
    m.view_mut((0, q), (q, q)).copy_from(&(ct * &skew));
    m.view_mut((q, 0), (q, q)).copy_from(&(-ct * &skew));
    m.view_mut((q, q), (q, q)).copy_from(&(st * &sym));
    m
}

fn coupling_block(first: &DMatrix<f64>, second: &DMatrix<f64>) -> DMatrix<f64> {
    let n = first.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&(-first));
    m.view_mut((n, n), (n, n)).copy_from(&(-second));
    for i in 0..n {
        m[(i, n + i)] = -1.0;
        m[(n + i, i)] = -1.0;
    }
    m
}

/// Evaluate the three synthesis LMIs at `v`, all oriented as "matrix < 0"
/// (the positivity coupling condition is returned negated). Affine in `v`
/// and in gamma.
pub fn assemble_lmis(
    p: &SynthesisProblem,
    gamma: f64,
    v: &LmiVars,
    form: LmiForm,
) -> [DMatrix<f64>; 3] {
    let theta = p.region().theta();
    let n = p.nx();
    match form {
        LmiForm::Appendix => {
            let phi1 = &p.a * &v.r + &p.b_u * &v.c_hat;
            let phi2 = &v.s * &p.a + &v.b_hat * &p.c_y;
            let a12 = &p.a + v.a_hat.transpose();
            let z1 = &v.r * p.c_z.transpose() + v.c_hat.transpose() * p.d_zu.transpose();
            let z2 = p.c_z.transpose().clone_owned();
            let b2 = &v.s * &p.b_w;
            let hinf = hinf_block(p, gamma, &phi1, &phi2, &a12, &p.b_w, &b2, &z1, &z2);
            let mut phi3 = DMatrix::zeros(2 * n, 2 * n);
            phi3.view_mut((0, 0), (n, n)).copy_from(&phi1);
            phi3.view_mut((0, n), (n, n)).copy_from(&p.a);
            phi3.view_mut((n, 0), (n, n)).copy_from(&v.a_hat);
            phi3.view_mut((n, n), (n, n)).copy_from(&phi2);
            [hinf, sector_block(theta, &phi3), coupling_block(&v.s, &v.r)]
        }
        LmiForm::TheoremPrinted => {
            let phi1 = &p.a * &v.s + &p.b_u * &v.c_hat;
            let phi2 = &v.r * &p.a + &v.b_hat * &p.c_y;
            let a12 = &p.a + v.a_hat.transpose();
            let z1 = &v.s * p.c_z.transpose() + v.c_hat.transpose() * p.d_zu.transpose();
            let z2 = p.c_z.transpose().clone_owned();
            let b2 = &v.r * &p.b_w;
            let hinf = hinf_block(p, gamma, &phi1, &phi2, &a12, &p.b_w, &b2, &z1, &z2);
            let mut phi3 = DMatrix::zeros(2 * n, 2 * n);
            phi3.view_mut((0, 0), (n, n)).copy_from(&phi1);
            phi3.view_mut((0, n), (n, n)).copy_from(&p.a);
            phi3.view_mut((n, 0), (n, n)).copy_from(&v.a_hat);
            phi3.view_mut((n, n), (n, n)).copy_from(&phi2);
            [hinf, sector_block(theta, &phi3), coupling_block(&v.s, &v.r)]
        }
    }
}

/// Sides of the three LMI blocks, in `assemble_lmis` order.
pub fn lmi_sides(p: &SynthesisProblem) -> [usize; 3] {
    let n = p.nx();
    [2 * n + p.nw() + p.nz(), 4 * n, 2 * n]
}
