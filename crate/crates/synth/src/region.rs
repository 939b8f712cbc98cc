use num_complex::Complex;

use crate::error::{Result, SynthError};

/// Conic sector about the negative real axis, apex at the origin, inner
/// half-angle `theta`. Poles inside the sector have damping ratio at least
/// cos(theta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicRegion {
    theta: f64,
}

impl ConicRegion {
    /// `theta` in (0, pi/2]; pi/2 degenerates to plain Hurwitz stability.
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
            return Err(SynthError::BadRegion(theta));
        }
        Ok(Self { theta })
    }

    /// Region whose poles all have damping ratio >= `zeta`.
    pub fn from_min_damping(zeta: f64) -> Result<Self> {
        if !(zeta.is_finite() && (0.0..1.0).contains(&zeta)) {
            return Err(SynthError::BadRegion(zeta));
        }
        Self::new(zeta.acos())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn min_damping(&self) -> f64 {
        self.theta.cos()
    }

    /// Sector membership |Im| <= tan(theta) * (-Re), with `slack` absolute
    /// tolerance on the comparison.
    pub fn contains(&self, lambda: Complex<f64>, slack: f64) -> bool {
        lambda.re < 0.0 && lambda.im.abs() <= self.theta.tan() * (-lambda.re) + slack
    }
}
