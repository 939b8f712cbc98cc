use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{LtiError, Result};
use crate::eig;

/// Continuous-time state-space system (A, B, C, D):
/// xdot = A x + B u, y = C x + D u.
///
/// Feedback interconnection uses the positive-feedback convention
/// (loop transfer G*K, return difference 1 - G*K).
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
}

fn check_finite(m: &DMatrix<f64>, name: &'static str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(LtiError::NonFinite(name))
    }
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(LtiError::DimensionMismatch(format!(
                "A must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.nrows() != n || c.ncols() != n {
            return Err(LtiError::DimensionMismatch(format!(
                "A is {n}x{n} but B has {} rows and C has {} cols",
                b.nrows(),
                c.ncols()
            )));
        }
        if d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(LtiError::DimensionMismatch(format!(
                "D must be {}x{}, got {}x{}",
                c.nrows(),
                b.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        check_finite(&a, "A")?;
        check_finite(&b, "B")?;
        check_finite(&c, "C")?;
        check_finite(&d, "D")?;
        Ok(Self { a, b, c, d })
    }

    /// Memoryless system y = D u.
    pub fn static_gain(d: DMatrix<f64>) -> Self {
        let (p, m) = (d.nrows(), d.ncols());
        Self {
            a: DMatrix::zeros(0, 0),
            b: DMatrix::zeros(0, m),
            c: DMatrix::zeros(p, 0),
            d,
        }
    }

    /// SISO transfer function from numerator/denominator coefficients,
    /// highest power first, deg(num) <= deg(den), in controllable
    /// canonical form.
    pub fn from_tf(num: &[f64], den: &[f64]) -> Result<Self> {
        if den.is_empty() || den[0] == 0.0 {
            return Err(LtiError::Invalid("denominator leading coefficient is zero".into()));
        }
        if num.len() > den.len() {
            return Err(LtiError::Invalid("improper transfer function".into()));
        }
        let n = den.len() - 1;
        // normalize monic, scaling the numerator by the same leading coefficient
        let lead = den[0];
        let den: Vec<f64> = den.iter().map(|x| x / lead).collect();
        let mut numf = vec![0.0; n + 1];
        numf[n + 1 - num.len()..].copy_from_slice(num);
        let numf: Vec<f64> = numf.iter().map(|x| x / lead).collect();
        let d0 = numf[0];
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            a[(i, i + 1)] = 1.0;
        }
        for j in 0..n {
            a[(n - 1, j)] = -den[n - j];
        }
        let mut b = DMatrix::zeros(n, 1);
        if n > 0 {
            b[(n - 1, 0)] = 1.0;
        }
        let mut c = DMatrix::zeros(1, n);
        for j in 0..n {
            // c_j = num_{n-j} - d0 * den_{n-j}
            c[(0, j)] = numf[n - j] - d0 * den[n - j];
        }
        let d = DMatrix::from_element(1, 1, d0);
        Self::new(a, b, c, d)
    }

    pub fn nx(&self) -> usize {
        self.a.nrows()
    }

    pub fn nu(&self) -> usize {
        self.b.ncols()
    }

    pub fn ny(&self) -> usize {
        self.c.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn d(&self) -> &DMatrix<f64> {
        &self.d
    }

    pub fn poles(&self) -> Result<Vec<Complex<f64>>> {
        eig::eigenvalues(&self.a)
    }

    pub fn is_stable(&self) -> Result<bool> {
        Ok(self.poles()?.iter().all(|l| l.re < 0.0))
    }

    /// Series interconnection: the output of `self` feeds the input of
    /// `next`, so the composite maps u -> next(self(u)).
    pub fn series(&self, next: &StateSpace) -> Result<StateSpace> {
        if self.ny() != next.nu() {
            return Err(LtiError::DimensionMismatch(format!(
                "series: {} outputs feed {} inputs",
                self.ny(),
                next.nu()
            )));
        }
        let (n1, n2) = (self.nx(), next.nx());
        let n = n1 + n2;
        let mut a = DMatrix::zeros(n, n);
        a.view_mut((0, 0), (n1, n1)).copy_from(&self.a);
        a.view_mut((n1, n1), (n2, n2)).copy_from(&next.a);
        a.view_mut((n1, 0), (n2, n1)).copy_from(&(&next.b * &self.c));
        let mut b = DMatrix::zeros(n, self.nu());
        b.view_mut((0, 0), (n1, self.nu())).copy_from(&self.b);
        b.view_mut((n1, 0), (n2, self.nu())).copy_from(&(&next.b * &self.d));
        let mut c = DMatrix::zeros(next.ny(), n);
        c.view_mut((0, 0), (next.ny(), n1)).copy_from(&(&next.d * &self.c));
        c.view_mut((0, n1), (next.ny(), n2)).copy_from(&next.c);
        let d = &next.d * &self.d;
        StateSpace::new(a, b, c, d)
    }

    /// Positive feedback of `k` around `self`: plant input is w + k(y),
    /// closed loop maps w to y with return difference 1 - G*K.
    pub fn feedback(&self, k: &StateSpace) -> Result<StateSpace> {
        if self.ny() != k.nu() || k.ny() != self.nu() {
            return Err(LtiError::DimensionMismatch(format!(
                "feedback: plant is {}x{} but controller is {}x{}",
                self.ny(),
                self.nu(),
                k.ny(),
                k.nu()
            )));
        }
        // E = (I - Dg*Dk)^-1 must exist for well-posedness
        let e = DMatrix::identity(self.ny(), self.ny()) - &self.d * &k.d;
        let e_inv = e.try_inverse().ok_or(LtiError::AlgebraicLoop)?;
        let (n1, n2) = (self.nx(), k.nx());
        let n = n1 + n2;
        // y = E^-1 (Cg xg + Dg Ck xk + Dg w)
        let y_xg = &e_inv * &self.c;
        let y_xk = &e_inv * (&self.d * &k.c);
        let y_w = &e_inv * &self.d;
        // u = Ck xk + Dk y
        let u_xg = &k.d * &y_xg;
        let u_xk = &k.c + &k.d * &y_xk;
        let u_w = DMatrix::identity(self.nu(), self.nu()) + &k.d * &y_w;
        let mut a = DMatrix::zeros(n, n);
        a.view_mut((0, 0), (n1, n1)).copy_from(&(&self.a + &self.b * &u_xg));
        a.view_mut((0, n1), (n1, n2)).copy_from(&(&self.b * &u_xk));
        a.view_mut((n1, 0), (n2, n1)).copy_from(&(&k.b * &y_xg));
        a.view_mut((n1, n1), (n2, n2)).copy_from(&(&k.a + &k.b * &y_xk));
        let mut b = DMatrix::zeros(n, self.nu());
        b.view_mut((0, 0), (n1, self.nu())).copy_from(&(&self.b * &u_w));
        b.view_mut((n1, 0), (n2, self.nu())).copy_from(&(&k.b * &y_w));
        let mut c = DMatrix::zeros(self.ny(), n);
        c.view_mut((0, 0), (self.ny(), n1)).copy_from(&y_xg);
        c.view_mut((0, n1), (self.ny(), n2)).copy_from(&y_xk);
        StateSpace::new(a, b, c, y_w)
    }

    /// Block-diagonal combination: inputs and outputs are concatenated.
    pub fn append(&self, other: &StateSpace) -> Result<StateSpace> {
        let (n1, n2) = (self.nx(), other.nx());
        let n = n1 + n2;
        let mut a = DMatrix::zeros(n, n);
        a.view_mut((0, 0), (n1, n1)).copy_from(&self.a);
        a.view_mut((n1, n1), (n2, n2)).copy_from(&other.a);
        let mut b = DMatrix::zeros(n, self.nu() + other.nu());
        b.view_mut((0, 0), (n1, self.nu())).copy_from(&self.b);
        b.view_mut((n1, self.nu()), (n2, other.nu())).copy_from(&other.b);
        let mut c = DMatrix::zeros(self.ny() + other.ny(), n);
        c.view_mut((0, 0), (self.ny(), n1)).copy_from(&self.c);
        c.view_mut((self.ny(), n1), (other.ny(), n2)).copy_from(&other.c);
        let mut d = DMatrix::zeros(self.ny() + other.ny(), self.nu() + other.nu());
        d.view_mut((0, 0), (self.ny(), self.nu())).copy_from(&self.d);
        d.view_mut((self.ny(), self.nu()), (other.ny(), other.nu()))
            .copy_from(&other.d);
        StateSpace::new(a, b, c, d)
    }

    /// Difference system self - other (same input, outputs subtracted).
    pub fn subtract(&self, other: &StateSpace) -> Result<StateSpace> {
        if self.nu() != other.nu() || self.ny() != other.ny() {
            return Err(LtiError::DimensionMismatch(
                "subtract: port dimensions differ".into(),
            ));
        }
        let (n1, n2) = (self.nx(), other.nx());
        let n = n1 + n2;
        let mut a = DMatrix::zeros(n, n);
        a.view_mut((0, 0), (n1, n1)).copy_from(&self.a);
        a.view_mut((n1, n1), (n2, n2)).copy_from(&other.a);
        let mut b = DMatrix::zeros(n, self.nu());
        b.view_mut((0, 0), (n1, self.nu())).copy_from(&self.b);
        b.view_mut((n1, 0), (n2, self.nu())).copy_from(&other.b);
        let mut c = DMatrix::zeros(self.ny(), n);
        c.view_mut((0, 0), (self.ny(), n1)).copy_from(&self.c);
        c.view_mut((0, n1), (self.ny(), n2)).copy_from(&(-&other.c));
        StateSpace::new(a, b, c, &self.d - &other.d)
    }
}
