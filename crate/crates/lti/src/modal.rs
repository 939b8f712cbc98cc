use nalgebra::{DVector, RowDVector};
use num_complex::Complex;

use crate::eig::{eigen, eigen_residual};
use crate::error::{LtiError, Result};
use crate::ss::StateSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeClass {
    InterArea,
    Local,
    NonSwing,
}

/// One oscillatory mode (conjugate pairs collapsed to the Im >= 0
/// representative) or one real mode.
#[derive(Debug, Clone)]
pub struct ModeReport {
    pub eigenvalue: Complex<f64>,
    pub frequency_hz: f64,
    pub damping: f64,
    pub right: DVector<Complex<f64>>,
    pub left: RowDVector<Complex<f64>>,
    /// Complex participation factors, one per state; their sum is 1.
    /// None when the mode is flagged defective.
    pub participation: Option<DVector<Complex<f64>>>,
    pub class: ModeClass,
    pub defective: bool,
}

/// Which states carry rotor speed deviations, and the area of each, for
/// swing classification. Indices refer to states of the analyzed system.
#[derive(Debug, Clone, Default)]
pub struct RotorContext {
    /// (state index, area id) for every rotor speed state
    pub speed_states: Vec<(usize, u32)>,
    /// state indices of rotor angle states
    pub angle_states: Vec<usize>,
}

impl RotorContext {
    fn rotor_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .speed_states
            .iter()
            .map(|&(i, _)| i)
            .chain(self.angle_states.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Damping ratio -Re(l)/|l| of a nonzero eigenvalue, in (-1, 1].
pub fn damping_ratio(l: Complex<f64>) -> Result<f64> {
    let m = l.norm();
    if m == 0.0 {
        return Err(LtiError::ZeroEigenvalue);
    }
    Ok(-l.re / m)
}

const SWING_BAND_HZ: (f64, f64) = (0.1, 3.0);

/// Eigen-decomposition into per-mode reports.
///
/// Swing modes are complex pairs in the 0.1-3 Hz band whose participation
/// mass is dominated by rotor states (when a context is given; without
/// one, any in-band complex pair counts). Inter-area vs local is decided
/// by the speed mode-shape sign pattern across areas.
pub fn modal_decomposition(sys: &StateSpace, ctx: Option<&RotorContext>) -> Result<Vec<ModeReport>> {
    let a = sys.a();
    let n = a.nrows();
    let dec = eigen(a)?;
    let norm_a = a.norm();
    let mut reports = Vec::new();
    for i in 0..n {
        let l = dec.values[i];
        if l.im < -1e-12 {
            continue; // conjugate partner represents the pair
        }
        let right = DVector::from_fn(n, |k, _| dec.right[(k, i)]);
        let left = RowDVector::from_fn(n, |_, k| dec.left[(i, k)]);
        let defective = eigen_residual(a, &dec, i) > 1e-8 * norm_a * right.norm();
        let participation = if defective {
            None
        } else {
            Some(DVector::from_fn(n, |k, _| left[k] * right[k]))
        };
        let damping = if l.norm() == 0.0 {
            0.0
        } else {
            -l.re / l.norm()
        };
        let frequency_hz = l.im / (2.0 * std::f64::consts::PI);
        let class = classify(l, frequency_hz, &right, participation.as_ref(), ctx);
        reports.push(ModeReport {
            eigenvalue: l,
            frequency_hz,
            damping,
            right,
            left,
            participation,
            class,
            defective,
        });
    }
    // sort oscillatory first by frequency, then real modes
    reports.sort_by(|x, y| {
        x.frequency_hz
            .partial_cmp(&y.frequency_hz)
            .unwrap()
            .then(x.eigenvalue.re.partial_cmp(&y.eigenvalue.re).unwrap())
    });
    Ok(reports)
}

fn classify(
    l: Complex<f64>,
    f_hz: f64,
    right: &DVector<Complex<f64>>,
    participation: Option<&DVector<Complex<f64>>>,
    ctx: Option<&RotorContext>,
) -> ModeClass {
    if l.im.abs() < 1e-9 || f_hz < SWING_BAND_HZ.0 || f_hz > SWING_BAND_HZ.1 {
        return ModeClass::NonSwing;
    }
    let Some(ctx) = ctx else {
        // no rotor information: every in-band oscillation is a local swing
        return ModeClass::Local;
    };
    if let Some(p) = participation {
        let rotor = ctx.rotor_indices();
        let rotor_mass: f64 = rotor.iter().map(|&k| p[k].norm()).sum();
        let total: f64 = p.iter().map(|x| x.norm()).sum();
        if rotor_mass < 0.5 * total {
            return ModeClass::NonSwing;
        }
    }
    // area directions from the speed entries of the right eigenvector
    let mut areas: Vec<u32> = ctx.speed_states.iter().map(|&(_, a)| a).collect();
    areas.sort_unstable();
    areas.dedup();
    if areas.len() < 2 {
        return ModeClass::Local;
    }
    let dir = |area: u32| -> Complex<f64> {
        ctx.speed_states
            .iter()
            .filter(|&&(_, a)| a == area)
            .map(|&(k, _)| right[k])
            .sum()
    };
    for i in 0..areas.len() {
        for j in i + 1..areas.len() {
            let (s1, s2) = (dir(areas[i]), dir(areas[j]));
            if s1.norm() > 0.0 && s2.norm() > 0.0 && (s1 * s2.conj()).re < 0.0 {
                return ModeClass::InterArea;
            }
        }
    }
    ModeClass::Local
}

/// Cosine-angle controllability/observability of a mode against one
/// input column and one output row: m_c = |psi b| / (||psi|| ||b||),
/// m_o = |c phi| / (||c|| ||phi||), both in [0, 1].
pub fn geometric_measures(
    sys: &StateSpace,
    mode: &ModeReport,
    input: usize,
    output_row: &RowDVector<f64>,
) -> Result<(f64, f64, f64)> {
    let n = sys.nx();
    if input >= sys.nu() {
        return Err(LtiError::DimensionMismatch(format!(
            "input {input} out of range for {} inputs",
            sys.nu()
        )));
    }
    if output_row.ncols() != n {
        return Err(LtiError::DimensionMismatch(
            "output row length does not match state count".into(),
        ));
    }
    let b = sys.b().column(input);
    let b_norm = b.norm();
    let c_norm = output_row.norm();
    if b_norm == 0.0 {
        return Err(LtiError::Invalid(format!("input column {input} is zero")));
    }
    if c_norm == 0.0 {
        return Err(LtiError::Invalid("output row is zero".into()));
    }
    let psi_b: Complex<f64> = (0..n).map(|k| mode.left[k] * b[k]).sum();
    let c_phi: Complex<f64> = (0..n).map(|k| mode.right[k] * output_row[k]).sum();
    let m_c = psi_b.norm() / (mode.left.norm() * b_norm);
    let m_o = c_phi.norm() / (c_norm * mode.right.norm());
    Ok((m_c, m_o, m_c * m_o))
}

/// One (input site, output signal) candidate for loop selection.
#[derive(Debug, Clone)]
pub struct LoopCandidate {
    pub site: String,
    pub input: usize,
    pub signal: String,
    /// output row of the candidate signal over the system states
    pub row: RowDVector<f64>,
}

#[derive(Debug, Clone)]
pub struct RankedLoop {
    pub site: String,
    pub signal: String,
    pub m_c: f64,
    pub m_o: f64,
    pub joint: f64,
}

/// Ranking of candidate loops by joint geometric measure, descending;
/// ties break by candidate list position (lexicographic pair index).
#[derive(Debug, Clone)]
pub struct LoopRanking {
    pub entries: Vec<RankedLoop>,
}

pub fn select_loop(
    sys: &StateSpace,
    mode: &ModeReport,
    candidates: &[LoopCandidate],
) -> Result<LoopRanking> {
    if candidates.is_empty() {
        return Err(LtiError::EmptyCandidates);
    }
    let mut scored = Vec::with_capacity(candidates.len());
    for (idx, cand) in candidates.iter().enumerate() {
        let (m_c, m_o, joint) = geometric_measures(sys, mode, cand.input, &cand.row)?;
        scored.push((idx, m_c, m_o, joint));
    }
    scored.sort_by(|a, b| {
        b.3.partial_cmp(&a.3)
            .unwrap()
            .then(a.0.cmp(&b.0))
    });
    Ok(LoopRanking {
        entries: scored
            .into_iter()
            .map(|(idx, m_c, m_o, joint)| RankedLoop {
                site: candidates[idx].site.clone(),
                signal: candidates[idx].signal.clone(),
                m_c,
                m_o,
                joint,
            })
            .collect(),
    })
}
