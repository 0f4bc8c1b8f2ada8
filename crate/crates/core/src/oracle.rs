//! Slow, independent routes to the same projection, used to cross-check
//! the fast path.
//!
//! * [`gram_schmidt`] re-derives the orthogonal basis numerically from the
//!   block basis.
//! * [`geometric_mean_approximation`] is the closed-form least-squares
//!   solution `x_ij = v_i - v_j` with `v` the row means of the log matrix.
//! * [`normal_equations_projection`] solves `G c = b` over the block basis
//!   and never relies on orthogonality.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::basis::{cached, BasisSet};
use crate::error::Error as CoreError;
use crate::matrix::{log_transform, LogMatrix, PcMatrix, Square, RECIPROCITY_TOL};
use crate::projection::project;

/// Residual norms below this mark the input as linearly dependent.
pub const DEPENDENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("basis matrix {index} is linearly dependent on its predecessors (residual norm {norm:e})")]
    DependentInput { index: usize, norm: f64 },
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Classical Gram-Schmidt over the Frobenius inner product, in input order
/// and without normalization.
///
/// Applied to `B_1 .. B_{n-1}` this reproduces `T_1 .. T_{n-1}`.
pub fn gram_schmidt(raw: &[Square<f64>]) -> Result<Vec<Square<f64>>, OracleError> {
    let mut out: Vec<Square<f64>> = Vec::with_capacity(raw.len());
    for (index, b) in raw.iter().enumerate() {
        let mut u = b.clone();
        for prev in &out {
            let coeff = b.dot(prev) / prev.dot(prev);
            u.add_scaled(-coeff, prev);
        }
        let norm = u.norm();
        if norm < DEPENDENCE_TOL {
            return Err(OracleError::DependentInput { index, norm });
        }
        out.push(u);
    }
    Ok(out)
}

/// Projection onto the span of mutually orthogonal matrices, with squared
/// norms taken by direct dot product.
pub fn project_onto_orthogonal(a: &LogMatrix, orthogonal: &[Square<f64>]) -> Result<LogMatrix, OracleError> {
    let mut sum = Square::zeros(a.dim());
    for t in orthogonal {
        sum.add_scaled(t.dot(a.entries()) / t.dot(t), t);
    }
    Ok(LogMatrix::new(sum)?)
}

/// Closed-form least-squares consistent approximation of `m` in log space.
///
/// `v_i` is the mean of row `i` of `log m` and the result is
/// `x_ij = v_i - v_j`. Non-reciprocal input is antisymmetrized first
/// (`v_i` becomes half the row mean minus the column mean), unless `strict`,
/// in which case it is rejected.
pub fn geometric_mean_approximation(m: &PcMatrix, strict: bool) -> Result<LogMatrix, OracleError> {
    if strict {
        m.check_reciprocal(RECIPROCITY_TOL)?;
    }
    let a = log_transform(m);
    let n = a.dim();
    let nf = n as f64;
    let v: Vec<f64> = if m.is_reciprocal() {
        (0..n).map(|i| a.entries().row(i).iter().sum::<f64>() / nf).collect()
    } else {
        (0..n)
            .map(|i| {
                let row: f64 = a.entries().row(i).iter().sum();
                let col: f64 = (0..n).map(|r| a.get(r, i)).sum();
                (row - col) / (2.0 * nf)
            })
            .collect()
    };
    Ok(LogMatrix::from_potentials(&v)?)
}

/// Gram matrix `G_jk = B_j . B_k` of the given matrices.
pub fn gram_matrix(basis: &[Square<f64>]) -> DMatrix<f64> {
    let m = basis.len();
    DMatrix::from_fn(m, m, |j, k| basis[j].dot(&basis[k]))
}

/// Determinant of the Gram matrix of `B_1 .. B_{n-1}`.
pub fn gram_determinant(n: usize) -> Result<f64, OracleError> {
    let basis = BasisSet::new(n)?;
    Ok(gram_matrix(&basis.raw_f64()).determinant())
}

/// Least-squares projection solved through the normal equations.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalEquations {
    /// Coefficients `c_k` of `B_k`, `k = 1 .. n-1`.
    pub coefficients: Vec<f64>,
    pub projection: LogMatrix,
}

/// Solves `G c = b` with `G_jk = B_j . B_k`, `b_k = B_k . a` and returns
/// `sum_k c_k B_k`. Accepts any finite `a`, antisymmetric or not.
pub fn normal_equations_projection(a: &LogMatrix) -> Result<NormalEquations, OracleError> {
    let raw = BasisSet::new(a.dim())?.raw_f64();
    let gram = gram_matrix(&raw);
    let rhs = DVector::from_iterator(raw.len(), raw.iter().map(|b| b.dot(a.entries())));
    let chol = gram.cholesky().ok_or(OracleError::SingularGram)?;
    let c = chol.solve(&rhs);
    let mut sum = Square::zeros(a.dim());
    for (b, &ck) in raw.iter().zip(c.iter()) {
        sum.add_scaled(ck, b);
    }
    Ok(NormalEquations {
        coefficients: c.iter().copied().collect(),
        projection: LogMatrix::new(sum)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleMethod {
    GramSchmidt,
    GeometricMean,
    NormalEquations,
}

impl fmt::Display for OracleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMethod::GramSchmidt => "gram_schmidt",
            OracleMethod::GeometricMean => "geometric_mean",
            OracleMethod::NormalEquations => "normal_equations",
        })
    }
}

/// One oracle's answer and its largest entrywise deviation from a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub method: OracleMethod,
    pub result: LogMatrix,
    pub max_abs_difference: f64,
}

/// Runs all three oracles on `m` and compares each with the orthogonal
/// basis projection of `log m`.
pub fn cross_check(m: &PcMatrix) -> Result<Vec<OracleReport>, OracleError> {
    let a = log_transform(m);
    let basis = cached(a.dim())?;
    let reference = project(&a, &basis)?.projected;

    let gs = project_onto_orthogonal(&a, &gram_schmidt(&basis.raw_f64())?)?;
    let gm = geometric_mean_approximation(m, false)?;
    let ne = normal_equations_projection(&a)?.projection;

    Ok([
        (OracleMethod::GramSchmidt, gs),
        (OracleMethod::GeometricMean, gm),
        (OracleMethod::NormalEquations, ne),
    ]
    .into_iter()
    .map(|(method, result)| OracleReport {
        method,
        max_abs_difference: result.max_abs_diff(&reference),
        result,
    })
    .collect())
}
