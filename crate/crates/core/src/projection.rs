//! Orthogonal projection of a log matrix onto the consistent subspace.
//!
//! [`project`] sums the projections onto each orthogonal basis matrix
//! `T_k` and costs `O(n^3)`. [`project_fast`] produces the same result in
//! `O(n^2)` by tracking block sums of the input and rebuilding the output
//! from an `n`-vector of potentials.

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::matrix::{exp_transform, log_transform, LogMatrix, PcMatrix, Square, RECIPROCITY_TOL};

/// Outcome of projecting a log matrix onto the consistent subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    /// `t_k = (T_k . A) / |T_k|^2` for `k = 1 .. n-1`.
    pub coefficients: Vec<f64>,
    /// `A' = sum_k t_k T_k`.
    pub projected: LogMatrix,
    /// Entrywise exponential of `projected`.
    pub consistent: PcMatrix,
    /// `|A - A'|` in log space.
    pub residual_norm: f64,
}

impl ProjectionResult {
    fn assemble(a: &LogMatrix, coefficients: Vec<f64>, projected: LogMatrix) -> Result<Self> {
        let consistent = exp_transform(&projected)?;
        let residual_norm = a.distance(&projected);
        Ok(ProjectionResult {
            coefficients,
            projected,
            consistent,
            residual_norm,
        })
    }
}

/// Projects `a` onto the span of `basis`'s orthogonal matrices.
pub fn project(a: &LogMatrix, basis: &BasisSet) -> Result<ProjectionResult> {
    let n = a.dim();
    if n != basis.dim() {
        return Err(Error::DimensionMismatch {
            matrix: n,
            basis: basis.dim(),
        });
    }
    let coefficients: Vec<f64> = basis
        .orthogonal_f64()
        .iter()
        .zip(basis.normsq_f64())
        .map(|(t, &nsq)| t.dot(a.entries()) / nsq)
        .collect();
    let mut sum = Square::zeros(n);
    for (t, &c) in basis.orthogonal_f64().iter().zip(&coefficients) {
        sum.add_scaled(c, t);
    }
    ProjectionResult::assemble(a, coefficients, LogMatrix::new(sum)?)
}

/// `B_k . A` for `k = 0 .. n-1` (index 0 is `B_0 = 0`), via running block sums.
fn raw_dots(a: &Square<f64>) -> Vec<f64> {
    let n = a.dim();
    let mut dots = Vec::with_capacity(n);
    dots.push(0.0);
    // upper: sum of a_ij with i in the first k indices and j after them;
    // lower: the mirrored block
    let (mut upper, mut lower) = (0.0, 0.0);
    for p in 0..n.saturating_sub(1) {
        let row = a.row(p);
        let (row_before, row_after) = (row[..p].iter().sum::<f64>(), row[p + 1..].iter().sum::<f64>());
        let col_before: f64 = (0..p).map(|i| a[(i, p)]).sum();
        let col_after: f64 = (p + 1..n).map(|i| a[(i, p)]).sum();
        upper += row_after - col_before;
        lower += col_after - row_before;
        dots.push(upper - lower);
    }
    dots
}

/// Same result as [`project`] in `O(n^2)` time, without a prebuilt basis.
///
/// Each `B_k . A` follows from `B_{k-1} . A` with one row and one column
/// sum, `T_k . A = B_k . A - (n-k)/(n-k+1) B_{k-1} . A`, and the output is
/// rebuilt as `x_ij = v_i - v_j` from potentials `v`. Works for `n = 1`.
pub fn project_fast(a: &LogMatrix) -> Result<ProjectionResult> {
    let n = a.dim();
    let nf = n as f64;
    let ratio = |k: usize| (n - k) as f64 / (n - k + 1) as f64;
    let dots = raw_dots(a.entries());

    let coefficients: Vec<f64> = (1..n)
        .map(|k| {
            let t_dot = dots[k] - ratio(k) * dots[k - 1];
            t_dot / (2.0 * nf * ratio(k))
        })
        .collect();

    // A' = sum_k d_k B_k with d_k = t_k - c_{k+1} t_{k+1}; B_k has potentials
    // 1 on the first k indices, so v_i is a suffix sum of d.
    let mut potentials = vec![0.0; n];
    let mut acc = 0.0;
    for k in (1..n).rev() {
        let next = if k + 1 < n {
            ratio(k + 1) * coefficients[k]
        } else {
            0.0
        };
        acc += coefficients[k - 1] - next;
        potentials[k - 1] = acc;
    }
    let projected = LogMatrix::from_potentials(&potentials)?;
    ProjectionResult::assemble(a, coefficients, projected)
}

/// Options for [`approximate_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproximateOptions {
    /// Reject inputs failing the reciprocity check instead of projecting them.
    pub strict_reciprocal: bool,
    pub reciprocity_tol: f64,
}

impl Default for ApproximateOptions {
    fn default() -> Self {
        ApproximateOptions {
            strict_reciprocal: false,
            reciprocity_tol: RECIPROCITY_TOL,
        }
    }
}

/// The optimal consistent approximation of `m` (least squares in log space).
pub fn approximate(m: &PcMatrix) -> Result<ProjectionResult> {
    approximate_with(m, ApproximateOptions::default())
}

pub fn approximate_with(m: &PcMatrix, opts: ApproximateOptions) -> Result<ProjectionResult> {
    if opts.strict_reciprocal {
        m.check_reciprocal(opts.reciprocity_tol)?;
    }
    project_fast(&log_transform(m))
}
