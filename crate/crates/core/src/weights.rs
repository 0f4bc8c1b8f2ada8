//! Priority weights of a consistent matrix.

use crate::error::{Error, Result};
use crate::matrix::PcMatrix;
use crate::projection::approximate;
use crate::triads::{check_consistency, CONSISTENCY_TOL};

/// Normalized stimuli values: positive and summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    /// Row geometric means divided by their sum.
    pub values: Vec<f64>,
    /// Unnormalized row geometric means.
    pub geometric_means: Vec<f64>,
}

impl WeightVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The ratio `w_i / w_j`, which reproduces entry `(i, j)` of the source matrix.
    pub fn ratio(&self, i: usize, j: usize) -> f64 {
        self.values[i] / self.values[j]
    }
}

/// Extracts weights from a consistent matrix using the default tolerance.
pub fn extract_weights(c: &PcMatrix) -> Result<WeightVector> {
    extract_weights_with_tol(c, CONSISTENCY_TOL)
}

/// Weights `w_i` proportional to the geometric mean of row `i`.
///
/// `c` must be reciprocal and triad-consistent within `tol`, otherwise the
/// result would not reproduce `c_ij = w_i / w_j`; the worst offending pair
/// or triad is returned instead.
pub fn extract_weights_with_tol(c: &PcMatrix, tol: f64) -> Result<WeightVector> {
    c.check_reciprocal(tol.max(crate::matrix::RECIPROCITY_TOL))?;
    let report = check_consistency(c, tol);
    if let Some(t) = report.worst().filter(|t| t.inconsistency > 0.0) {
        return Err(Error::NotConsistent {
            i: t.i,
            j: t.j,
            k: t.k,
            inconsistency: t.inconsistency,
        });
    }
    Ok(from_log_means(c))
}

fn from_log_means(c: &PcMatrix) -> WeightVector {
    let n = c.dim();
    let geometric_means: Vec<f64> = c
        .entries()
        .rows()
        .map(|row| (row.iter().map(|v| v.ln()).sum::<f64>() / n as f64).exp())
        .collect();
    let total: f64 = geometric_means.iter().sum();
    WeightVector {
        values: geometric_means.iter().map(|g| g / total).collect(),
        geometric_means,
    }
}

/// Weights of the optimal consistent approximation of any comparisons matrix.
pub fn priority_weights(m: &PcMatrix) -> Result<WeightVector> {
    extract_weights(&approximate(m)?.consistent)
}
