use wapss_lti::StateSpace;

use crate::error::{Result, SynthError};

/// Mixed-sensitivity weight pair: `w1` shapes the regulated measurement
/// channel (low pass), `w2` shapes the control effort (high pass).
#[derive(Debug, Clone)]
pub struct WeightSpec {
    w1: StateSpace,
    w2: StateSpace,
}

impl WeightSpec {
    pub fn new(w1: StateSpace, w2: StateSpace) -> Result<Self> {
        for (name, w) in [("W1", &w1), ("W2", &w2)] {
            if w.nu() != 1 || w.ny() != 1 {
                return Err(SynthError::BadWeight(format!("{name} SISO")));
            }
            if !w.is_stable()? {
                return Err(SynthError::BadWeight(format!("{name} stable")));
            }
        }
        if w1.d()[(0, 0)] != 0.0 {
            return Err(SynthError::BadWeight(
                "W1 strictly proper so the disturbance feeds z only through states".into(),
            ));
        }
        Ok(Self { w1, w2 })
    }

    /// Parse the pair from transfer-function strings.
    pub fn parse(w1: &str, w2: &str) -> Result<Self> {
        Self::new(parse_weight(w1)?, parse_weight(w2)?)
    }

    pub fn w1(&self) -> &StateSpace {
        &self.w1
    }

    pub fn w2(&self) -> &StateSpace {
        &self.w2
    }
}

/// Parse a first-order weight: `k/(s+a)` (low pass) or `k s/(s+a)`
/// (high pass, also accepted as `ks/(s+a)` or `k*s/(s+a)`).
pub fn parse_weight(text: &str) -> Result<StateSpace> {
    let bad = || SynthError::WeightParse(text.to_string());
    let (num_raw, den_raw) = text.split_once('/').ok_or_else(bad)?;

    let mut num = num_raw.trim().to_string();
    let has_s = num.ends_with('s');
    if has_s {
        num.truncate(num.len() - 1);
        num = num.trim_end().trim_end_matches('*').trim_end().to_string();
    }
    let k: f64 = if num.is_empty() && has_s {
        1.0
    } else {
        num.parse().map_err(|_| bad())?
    };

    let den = den_raw.trim();
    let den = den
        .strip_prefix('(')
        .and_then(|d| d.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (s_part, a_part) = den.split_once('+').ok_or_else(bad)?;
    if s_part.trim() != "s" {
        return Err(bad());
    }
    let a: f64 = a_part.trim().parse().map_err(|_| bad())?;
    if !(k.is_finite() && a.is_finite() && a > 0.0) {
        return Err(SynthError::BadWeight(format!(
            "'{text}' stable with positive pole frequency"
        )));
    }

    let num_coeffs: &[f64] = if has_s { &[k, 0.0] } else { &[k] };
    Ok(StateSpace::from_tf(num_coeffs, &[1.0, a])?)
}
