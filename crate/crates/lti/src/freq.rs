use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{LtiError, Result};
use crate::ss::StateSpace;

/// Frequency response samples value(w) = C (jw I - A)^-1 B + D.
#[derive(Debug, Clone)]
pub struct FrequencyResponse {
    omegas: Vec<f64>,
    values: Vec<DMatrix<Complex<f64>>>,
}

impl FrequencyResponse {
    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn values(&self) -> &[DMatrix<Complex<f64>>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }
}

/// Evaluate the transfer matrix at a single complex frequency point.
/// No singularity pre-check; the caller guards the imaginary axis.
pub fn eval(sys: &StateSpace, s: Complex<f64>) -> Result<DMatrix<Complex<f64>>> {
    let n = sys.nx();
    if n == 0 {
        return Ok(sys.d().map(|x| Complex::new(x, 0.0)));
    }
    let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = Complex::new(-sys.a()[(i, j)], 0.0);
        }
        m[(i, i)] += s;
    }
    let bc = sys.b().map(|x| Complex::new(x, 0.0));
    let x = m
        .lu()
        .solve(&bc)
        .ok_or(LtiError::FrequencySingularity { omega: s.im })?;
    let cc = sys.c().map(|x| Complex::new(x, 0.0));
    let dc = sys.d().map(|x| Complex::new(x, 0.0));
    Ok(&cc * x + dc)
}

/// Frequency response over a strictly increasing positive grid.
///
/// Errors if any jw lies within 1e-12 of an eigenvalue of A.
pub fn frequency_response(sys: &StateSpace, omegas: &[f64]) -> Result<FrequencyResponse> {
    if omegas.is_empty() {
        return Err(LtiError::BadFrequencyGrid);
    }
    if !omegas.windows(2).all(|w| w[0] < w[1]) || omegas[0] <= 0.0 {
        return Err(LtiError::BadFrequencyGrid);
    }
    let poles = sys.poles()?;
    for &w in omegas {
        for l in &poles {
            if (l - Complex::new(0.0, w)).norm() < 1e-12 {
                return Err(LtiError::FrequencySingularity { omega: w });
            }
        }
    }
    let mut values = Vec::with_capacity(omegas.len());
    for &w in omegas {
        values.push(eval(sys, Complex::new(0.0, w))?);
    }
    Ok(FrequencyResponse {
        omegas: omegas.to_vec(),
        values,
    })
}

/// Largest singular value of the transfer matrix at frequency w.
pub fn sigma_max(sys: &StateSpace, w: f64) -> Result<f64> {
    let g = eval(sys, Complex::new(0.0, w))?;
    Ok(max_singular_value(&g))
}

pub(crate) fn max_singular_value(g: &DMatrix<Complex<f64>>) -> f64 {
    if g.nrows() == 0 || g.ncols() == 0 {
        return 0.0;
    }
    g.clone().singular_values()[0]
}

/// Log-spaced grid of n points over [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
