use nalgebra::{Complex, DMatrix};
use wapss_lti::{eigenvalues, LtiError, StateSpace};

use crate::error::{Result, SynthError};
use crate::region::ConicRegion;
use crate::weights::WeightSpec;

/// Generalized plant for mixed-sensitivity synthesis with regional pole
/// placement. The disturbance enters through the control input column, the
/// first performance channel is the W1-weighted measured signal (the same
/// signal the controller sees, so the shaped sensitivity is that of the
/// actual loop), and the second is the W2-weighted control effort.
#[derive(Debug, Clone)]
pub struct SynthesisProblem {
    pub(crate) a: DMatrix<f64>,
    pub(crate) b_w: DMatrix<f64>,
    pub(crate) b_u: DMatrix<f64>,
    pub(crate) c_y: DMatrix<f64>,
    pub(crate) c_z: DMatrix<f64>,
    pub(crate) d_zw: DMatrix<f64>,
    pub(crate) d_zu: DMatrix<f64>,
    region: ConicRegion,
    gamma_max: f64,
}

impl SynthesisProblem {
    /// Assemble a synthesis problem from raw generalized-plant matrices.
    /// Prefer [`build_generalized_plant`]; this is the escape hatch for
    /// problems not in mixed-sensitivity shape.
    #[allow(clippy::too_many_arguments)]
    pub fn from_matrices(
        a: DMatrix<f64>,
        b_w: DMatrix<f64>,
        b_u: DMatrix<f64>,
        c_y: DMatrix<f64>,
        c_z: DMatrix<f64>,
        d_zw: DMatrix<f64>,
        d_zu: DMatrix<f64>,
        region: ConicRegion,
    ) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n
            || b_w.nrows() != n
            || b_u.nrows() != n
            || c_y.ncols() != n
            || c_z.ncols() != n
            || d_zw.nrows() != c_z.nrows()
            || d_zw.ncols() != b_w.ncols()
            || d_zu.nrows() != c_z.nrows()
            || d_zu.ncols() != b_u.ncols()
        {
            return Err(SynthError::Dimension(
                "generalized-plant matrix shapes disagree".into(),
            ));
        }
        let p = Self {
            a,
            b_w,
            b_u,
            c_y,
            c_z,
            d_zw,
            d_zu,
            region,
            gamma_max: 1e6,
        };
        check_stabilizable_detectable(&p)?;
        Ok(p)
    }

    pub fn nx(&self) -> usize {
        self.a.nrows()
    }
    pub fn nw(&self) -> usize {
        self.b_w.ncols()
    }
    pub fn nu(&self) -> usize {
        self.b_u.ncols()
    }
    pub fn ny(&self) -> usize {
        self.c_y.nrows()
    }
    pub fn nz(&self) -> usize {
        self.c_z.nrows()
    }
    pub fn region(&self) -> ConicRegion {
        self.region
    }
    pub fn gamma_max(&self) -> f64 {
        self.gamma_max
    }
    pub fn with_gamma_max(mut self, gamma_max: f64) -> Self {
        self.gamma_max = gamma_max;
        self
    }

    /// Raw generalized-plant matrices (A, B_w, B_u, C_y, C_z, D_zw, D_zu).
    #[allow(clippy::type_complexity)]
    pub fn matrices(
        &self,
    ) -> (
        &DMatrix<f64>,
        &DMatrix<f64>,
        &DMatrix<f64>,
        &DMatrix<f64>,
        &DMatrix<f64>,
        &DMatrix<f64>,
        &DMatrix<f64>,
    ) {
        (&self.a, &self.b_w, &self.b_u, &self.c_y, &self.c_z, &self.d_zw, &self.d_zu)
    }

    /// Closed loop w -> z under `controller` (must be strictly proper,
    /// u = C_c x_c, driven by the measured output).
    pub fn close(&self, controller: &StateSpace) -> Result<StateSpace> {
        if controller.nu() != self.ny() || controller.ny() != self.nu() {
            return Err(SynthError::Dimension(format!(
                "controller {}x{} against plant ny={} nu={}",
                controller.ny(),
                controller.nu(),
                self.ny(),
                self.nu()
            )));
        }
        if controller.d().iter().any(|&x| x != 0.0) {
            return Err(SynthError::Lti(LtiError::AlgebraicLoop));
        }
        let (n, nc) = (self.nx(), controller.nx());
        let mut a = DMatrix::zeros(n + nc, n + nc);
        a.view_mut((0, 0), (n, n)).copy_from(&self.a);
        a.view_mut((0, n), (n, nc))
            .copy_from(&(&self.b_u * controller.c()));
        a.view_mut((n, 0), (nc, n))
            .copy_from(&(controller.b() * &self.c_y));
        a.view_mut((n, n), (nc, nc)).copy_from(controller.a());
        let mut b = DMatrix::zeros(n + nc, self.nw());
        b.view_mut((0, 0), (n, self.nw())).copy_from(&self.b_w);
        let mut c = DMatrix::zeros(self.nz(), n + nc);
        c.view_mut((0, 0), (self.nz(), n)).copy_from(&self.c_z);
        c.view_mut((0, n), (self.nz(), nc))
            .copy_from(&(&self.d_zu * controller.c()));
        Ok(StateSpace::new(a, b, c, self.d_zw.clone())?)
    }
}

/// Compose the measured feedback row of a design plant: a single-output
/// plant is taken as-is (delay already folded in upstream); a two-output
/// plant (local and remote rows) is composed as their sum, the no-delay
/// limit of either feedback structure.
fn measured_row(plant: &StateSpace) -> Result<DMatrix<f64>> {
    match plant.ny() {
        1 => Ok(plant.c().clone()),
        2 => Ok((plant.c().rows(0, 1) + plant.c().rows(1, 1)).clone_owned()),
        ny => Err(SynthError::Dimension(format!(
            "design plant must expose 1 composed or 2 raw measurement rows, got {ny}"
        ))),
    }
}

/// Build the generalized plant from a design plant and the weight pair.
pub fn build_generalized_plant(
    plant: &StateSpace,
    weights: &WeightSpec,
    region: ConicRegion,
) -> Result<SynthesisProblem> {
    if plant.nu() != 1 {
        return Err(SynthError::Dimension(format!(
            "design plant must have one control input, got {}",
            plant.nu()
        )));
    }
    if plant.d().iter().any(|&x| x != 0.0) {
        return Err(SynthError::Lti(LtiError::AlgebraicLoop));
    }
    let c_m = measured_row(plant)?;
    let (w1, w2) = (weights.w1(), weights.w2());
    let (ng, n1, n2) = (plant.nx(), w1.nx(), w2.nx());
    let n = ng + n1 + n2;

    let mut a = DMatrix::zeros(n, n);
    a.view_mut((0, 0), (ng, ng)).copy_from(plant.a());
    a.view_mut((ng, 0), (n1, ng)).copy_from(&(w1.b() * &c_m));
    a.view_mut((ng, ng), (n1, n1)).copy_from(w1.a());
    a.view_mut((ng + n1, ng + n1), (n2, n2)).copy_from(w2.a());

    let mut b_w = DMatrix::zeros(n, 1);
    b_w.view_mut((0, 0), (ng, 1)).copy_from(plant.b());
    let mut b_u = b_w.clone();
    b_u.view_mut((ng + n1, 0), (n2, 1)).copy_from(w2.b());

    let mut c_y = DMatrix::zeros(1, n);
    c_y.view_mut((0, 0), (1, ng)).copy_from(&c_m);

    // z1 = W1 * y_meas (strictly proper), z2 = W2 * u (biproper)
    let mut c_z = DMatrix::zeros(2, n);
    c_z.view_mut((0, ng), (1, n1)).copy_from(w1.c());
    c_z.view_mut((1, ng + n1), (1, n2)).copy_from(w2.c());
    let d_zw = DMatrix::zeros(2, 1);
    let mut d_zu = DMatrix::zeros(2, 1);
    d_zu[(1, 0)] = w2.d()[(0, 0)];

    let problem = SynthesisProblem {
        a,
        b_w,
        b_u,
        c_y,
        c_z,
        d_zw,
        d_zu,
        region,
        gamma_max: 1e6,
    };
    check_stabilizable_detectable(&problem)?;
    Ok(problem)
}

/// PBH scan over the closed right half-plane eigenvalues.
fn check_stabilizable_detectable(p: &SynthesisProblem) -> Result<()> {
    let n = p.nx();
    let scale = p.a.norm() + 1.0;
    let tol = 1e-8 * scale;
    for l in eigenvalues(&p.a)? {
        if l.re < -1e-9 * scale {
            continue;
        }
        let a_shift = DMatrix::from_fn(n, n, |i, j| {
            Complex::new(p.a[(i, j)], 0.0) - if i == j { l } else { Complex::new(0.0, 0.0) }
        });
        let mut ctrb = DMatrix::zeros(n, n + p.nu());
        ctrb.view_mut((0, 0), (n, n)).copy_from(&a_shift);
        ctrb.view_mut((0, n), (n, p.nu()))
            .copy_from(&p.b_u.map(|x| Complex::new(x, 0.0)));
        if ctrb.singular_values().min() <= tol {
            return Err(SynthError::NotStabilizable {
                re: l.re,
                im: l.im,
                sigma: ctrb.singular_values().min(),
            });
        }
        let mut obsv = DMatrix::zeros(n + p.ny(), n);
        obsv.view_mut((0, 0), (n, n)).copy_from(&a_shift);
        obsv.view_mut((n, 0), (p.ny(), n))
            .copy_from(&p.c_y.map(|x| Complex::new(x, 0.0)));
        if obsv.singular_values().min() <= tol {
            return Err(SynthError::NotDetectable {
                re: l.re,
                im: l.im,
                sigma: obsv.singular_values().min(),
            });
        }
    }
    Ok(())
}
