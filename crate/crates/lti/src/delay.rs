use nalgebra::DMatrix;

use crate::error::{LtiError, Result};
use crate::ss::StateSpace;

/// Second-order Pade delay realization with its delay constant.
///
/// Transfer function (s^2 - (6/T)s + 12/T^2) / (s^2 + (6/T)s + 12/T^2):
/// stable, all-pass, DC gain exactly 1.
#[derive(Debug, Clone)]
pub struct PadeDelay {
    t_d: f64,
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
}

impl PadeDelay {
    pub fn t_d(&self) -> f64 {
        self.t_d
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

    pub fn to_ss(&self) -> StateSpace {
        StateSpace::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone())
            .expect("pade realization is consistent")
    }
}

/// Second-order Pade approximation of a transport delay T_d.
pub fn pade2(t_d: f64) -> Result<PadeDelay> {
    if t_d <= 0.0 || !t_d.is_finite() {
        return Err(LtiError::NonpositiveDelay(t_d));
    }
    let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -12.0 / (t_d * t_d), -6.0 / t_d]);
    let b = DMatrix::from_column_slice(2, 1, &[0.0, 1.0]);
    let c = DMatrix::from_row_slice(1, 2, &[0.0, -12.0 / t_d]);
    let d = DMatrix::from_element(1, 1, 1.0);
    Ok(PadeDelay { t_d, a, b, c, d })
}

/// Diagonal [n/n] Pade approximant of e^{-sT} in controllable canonical
/// form. Cross-validation utility for pade2.
pub fn pade_n(t_d: f64, order: usize) -> Result<StateSpace> {
    if t_d <= 0.0 || !t_d.is_finite() {
        return Err(LtiError::NonpositiveDelay(t_d));
    }
    assert!(order >= 1, "pade_n: order must be at least 1");
    let n = order;
    // c_k = (2n-k)! n! / ((2n)! k! (n-k)!), numerator alternates sign
    let mut den = vec![0.0; n + 1];
    let mut num = vec![0.0; n + 1];
    for k in 0..=n {
        let c = factorial_ratio(n, k);
        // coefficient of s^k carries T^k
        den[n - k] = c * t_d.powi(k as i32);
        num[n - k] = c * (-t_d).powi(k as i32);
    }
    StateSpace::from_tf(&num, &den)
}

fn factorial_ratio(n: usize, k: usize) -> f64 {
    // (2n-k)! n! / ((2n)! k! (n-k)!) computed as a running product
    let mut v = 1.0f64;
    for i in 0..k {
        // (n-i) / ((2n-i) (i+1))
        v *= (n - i) as f64 / (((2 * n - i) * (i + 1)) as f64);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedbackKind {
    Synchronized,
    NonSynchronized,
}

/// Split of the plant's measured output into local and remote rows.
///
/// The plant's measured-output matrix must equal the row stacking
/// [C_l; C_r]; the controller sees the scalar composition y_l + y_r with
/// the delay placed per `kind`.
#[derive(Debug, Clone)]
pub struct FeedbackConfig {
    pub kind: FeedbackKind,
    pub c_local: DMatrix<f64>,
    pub c_remote: DMatrix<f64>,
}

impl FeedbackConfig {
    pub fn new(kind: FeedbackKind, c_local: DMatrix<f64>, c_remote: DMatrix<f64>) -> Result<Self> {
        if c_local.nrows() != 1 || c_remote.nrows() != 1 {
            return Err(LtiError::DimensionMismatch(
                "feedback config: C_l and C_r must be single rows".into(),
            ));
        }
        if c_local.ncols() != c_remote.ncols() {
            return Err(LtiError::DimensionMismatch(
                "feedback config: C_l and C_r column counts differ".into(),
            ));
        }
        Ok(Self {
            kind,
            c_local,
            c_remote,
        })
    }

    /// Split a plant's two measured-output rows (local first, remote
    /// second) into a config.
    pub fn from_plant(kind: FeedbackKind, plant: &StateSpace) -> Result<Self> {
        if plant.ny() != 2 {
            return Err(LtiError::DimensionMismatch(format!(
                "plant must expose exactly the stacked (local, remote) rows, got {} outputs",
                plant.ny()
            )));
        }
        let c_local = plant.c().rows(0, 1).clone_owned();
        let c_remote = plant.c().rows(1, 1).clone_owned();
        Self::new(kind, c_local, c_remote)
    }

    fn check_plant(&self, plant: &StateSpace) -> Result<()> {
        if self.c_local.ncols() != plant.nx() {
            return Err(LtiError::DimensionMismatch(format!(
                "feedback config rows have {} columns but plant has {} states",
                self.c_local.ncols(),
                plant.nx()
            )));
        }
        // the plant's measured output is the stacking [C_l; C_r]
        if plant.ny() != 2 {
            return Err(LtiError::DimensionMismatch(format!(
                "plant must expose exactly the stacked (local, remote) rows, got {} outputs",
                plant.ny()
            )));
        }
        let max_err = |row: usize, m: &DMatrix<f64>| -> f64 {
            (0..plant.nx())
                .map(|j| (plant.c()[(row, j)] - m[(0, j)]).abs())
                .fold(0.0, f64::max)
        };
        if max_err(0, &self.c_local) > 0.0 || max_err(1, &self.c_remote) > 0.0 {
            return Err(LtiError::DimensionMismatch(
                "plant measured-output matrix does not stack (C_l, C_r)".into(),
            ));
        }
        Ok(())
    }
}

/// Closed loop (or open augmented plant when `controller` is None) with
/// both feedback channels passing through one shared delay block.
///
/// State ordering (x_p, x_d, x_c). With a controller the A matrix is
///   [ A_p            0        B_p C_c ]
///   [ B_d C_p        A_d      0       ]
///   [ B_c D_d C_p    B_c C_d  A_c     ]
/// where C_p = C_l + C_r is the composed measured row. Without one, the
/// result keeps the plant input and exposes the delayed measurement.
pub fn assemble_synchronized(
    plant: &StateSpace,
    pade: &PadeDelay,
    controller: Option<&StateSpace>,
    config: &FeedbackConfig,
) -> Result<StateSpace> {
    if config.kind != FeedbackKind::Synchronized {
        return Err(LtiError::Invalid(
            "assemble_synchronized requires a Synchronized config".into(),
        ));
    }
    config.check_plant(plant)?;
    let c_p = &config.c_local + &config.c_remote;
    assemble(plant, pade, controller, &c_p, None)
}

/// Closed loop (or open augmented plant) with only the remote channel
/// delayed; the local signal enters the controller directly.
///
///   [ A_p                        0        B_p C_c ]
///   [ B_d C_r                    A_d      0       ]
///   [ B_c C_l + B_c D_d C_r      B_c C_d  A_c     ]
pub fn assemble_nonsynchronized(
    plant: &StateSpace,
    pade: &PadeDelay,
    controller: Option<&StateSpace>,
    config: &FeedbackConfig,
) -> Result<StateSpace> {
    if config.kind != FeedbackKind::NonSynchronized {
        return Err(LtiError::Invalid(
            "assemble_nonsynchronized requires a NonSynchronized config".into(),
        ));
    }
    config.check_plant(plant)?;
    assemble(plant, pade, controller, &config.c_remote, Some(&config.c_local))
}

/// Shared assembly: the delay input is `c_delayed * x_p`; `c_direct`
/// (when present) bypasses the delay straight into the measurement.
fn assemble(
    plant: &StateSpace,
    pade: &PadeDelay,
    controller: Option<&StateSpace>,
    c_delayed: &DMatrix<f64>,
    c_direct: Option<&DMatrix<f64>>,
) -> Result<StateSpace> {
    let np = plant.nx();
    let nd = 2;
    let nu = plant.nu();

    // measurement y = m_p x_p + m_d x_d
    let m_p = match c_direct {
        Some(cl) => cl + pade.d()[(0, 0)] * c_delayed,
        None => pade.d()[(0, 0)] * c_delayed,
    };
    let m_d = pade.c().clone();

    match controller {
        None => {
            let n = np + nd;
            let mut a = DMatrix::zeros(n, n);
            a.view_mut((0, 0), (np, np)).copy_from(plant.a());
            a.view_mut((np, 0), (nd, np)).copy_from(&(pade.b() * c_delayed));
            a.view_mut((np, np), (nd, nd)).copy_from(pade.a());
            let mut b = DMatrix::zeros(n, nu);
            b.view_mut((0, 0), (np, nu)).copy_from(plant.b());
            let mut c = DMatrix::zeros(1, n);
            c.view_mut((0, 0), (1, np)).copy_from(&m_p);
            c.view_mut((0, np), (1, nd)).copy_from(&m_d);
            StateSpace::new(a, b, c, DMatrix::zeros(1, nu))
        }
        Some(k) => {
            if k.nu() != 1 || k.ny() != nu {
                return Err(LtiError::DimensionMismatch(format!(
                    "controller must map the scalar measurement to {} plant inputs, got {}x{}",
                    nu,
                    k.ny(),
                    k.nu()
                )));
            }
            let nc = k.nx();
            let n = np + nd + nc;
            let mut a = DMatrix::zeros(n, n);
            a.view_mut((0, 0), (np, np)).copy_from(plant.a());
            a.view_mut((0, np + nd), (np, nc)).copy_from(&(plant.b() * k.c()));
            a.view_mut((np, 0), (nd, np)).copy_from(&(pade.b() * c_delayed));
            a.view_mut((np, np), (nd, nd)).copy_from(pade.a());
            a.view_mut((np + nd, 0), (nc, np)).copy_from(&(k.b() * &m_p));
            a.view_mut((np + nd, np), (nc, nd)).copy_from(&(k.b() * &m_d));
            a.view_mut((np + nd, np + nd), (nc, nc)).copy_from(k.a());
            // driven by a disturbance entering at the plant input
            let mut b = DMatrix::zeros(n, nu);
            b.view_mut((0, 0), (np, nu)).copy_from(plant.b());
            // monitored output: the undelayed composed signal
            let mut c = DMatrix::zeros(1, n);
            c.view_mut((0, 0), (1, np))
                .copy_from(&(match c_direct {
                    Some(cl) => cl + c_delayed,
                    None => c_delayed.clone(),
                }));
            StateSpace::new(a, b, c, DMatrix::zeros(1, nu))
        }
    }
}
