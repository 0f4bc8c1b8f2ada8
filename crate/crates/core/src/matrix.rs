//! Dense square matrices and the two value domains the engine works in:
//! ratio-scale comparison matrices and their logarithmic images.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Default relative tolerance for the reciprocity check `|m_ij * m_ji - 1|`.
pub const RECIPROCITY_TOL: f64 = 1e-8;

/// Largest magnitude whose exponential stays a normal positive `f64`.
pub const MAX_EXPONENT: f64 = 709.0;

/// Row-major dense square matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Square<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone> Square<T> {
    pub fn filled(n: usize, value: T) -> Self {
        Square {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Square { n, data }
    }

    /// Builds a matrix from rows, checking that every row has `rows.len()` entries.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::NonSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Square { n, data })
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Square<U> {
        Square {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        // chunks_exact(0) panics, so an empty matrix yields no rows
        self.data.chunks_exact(self.n.max(1)).take(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(<[T]>::to_vec).collect()
    }
}

impl<T> Square<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Iterates `(i, j, &value)` in row-major order.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .map(move |(idx, v)| (idx / n, idx % n, v))
    }
}

impl Square<f64> {
    pub fn zeros(n: usize) -> Self {
        Self::filled(n, 0.0)
    }

    /// Frobenius inner product: the sum of entrywise products.
    pub fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, scale: f64, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
    }

    pub fn scaled(&self, scale: f64) -> Self {
        self.map(|v| v * scale)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Square {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Square<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of bounds");
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Square<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.n + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Square<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Square({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for v in self.row(i) {
                write!(f, "{v:>10} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A pairwise comparisons matrix: square, every entry a positive finite ratio.
///
/// Reciprocity (`m_ij = 1 / m_ji`) is checked at construction and recorded,
/// never enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct PcMatrix {
    entries: Square<f64>,
    reciprocal: bool,
}

impl PcMatrix {
    /// Validates `rows` with the default reciprocity tolerance.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        validate(rows, RECIPROCITY_TOL)
    }

    pub fn from_square(entries: Square<f64>, reciprocity_tol: f64) -> Result<Self> {
        if entries.dim() == 0 {
            return Err(Error::Empty);
        }
        for (row, col, &value) in entries.indexed() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveEntry { row, col, value });
            }
        }
        let reciprocal = first_non_reciprocal(&entries, reciprocity_tol).is_none();
        Ok(PcMatrix {
            entries,
            reciprocal,
        })
    }

    /// The consistent matrix `m_ij = s_i / s_j` generated by a stimuli vector.
    pub fn from_stimuli(stimuli: &[f64]) -> Result<Self> {
        for (i, &s) in stimuli.iter().enumerate() {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::NonPositiveEntry {
                    row: i,
                    col: i,
                    value: s,
                });
            }
        }
        let n = stimuli.len();
        Self::from_square(
            Square::from_fn(n, |i, j| stimuli[i] / stimuli[j]),
            RECIPROCITY_TOL,
        )
    }

    /// An `n x n` matrix of ones: every stimulus judged equal.
    pub fn ones(n: usize) -> Result<Self> {
        Self::from_square(Square::filled(n, 1.0), RECIPROCITY_TOL)
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &Square<f64> {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.to_rows()
    }

    /// Whether the matrix passed the reciprocity check at construction.
    pub fn is_reciprocal(&self) -> bool {
        self.reciprocal
    }

    /// Rechecks reciprocity at `tol`, returning the first offending pair.
    pub fn check_reciprocal(&self, tol: f64) -> Result<()> {
        match first_non_reciprocal(&self.entries, tol) {
            None => Ok(()),
            Some((row, col, product)) => Err(Error::NotReciprocal { row, col, product }),
        }
    }

    /// Largest relative difference `|a - b| / max(|a|, |b|)` over all entries.
    pub fn max_rel_diff(&self, other: &PcMatrix) -> f64 {
        self.entries
            .as_slice()
            .iter()
            .zip(other.entries.as_slice())
            .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()))
            .fold(0.0, f64::max)
    }
}

fn first_non_reciprocal(m: &Square<f64>, tol: f64) -> Option<(usize, usize, f64)> {
    let n = m.dim();
    for i in 0..n {
        for j in i..n {
            let product = m[(i, j)] * m[(j, i)];
            if (product - 1.0).abs() > tol {
                return Some((i, j, product));
            }
        }
    }
    None
}

/// Validates a raw array as a pairwise comparisons matrix.
///
/// Fails on non-square input and on any entry that is not a positive finite
/// number. Reciprocity is recorded on the result
/// (`|m_ij * m_ji - 1| <= reciprocity_tol` for all pairs) but not required.
pub fn validate<R: AsRef<[f64]>>(rows: &[R], reciprocity_tol: f64) -> Result<PcMatrix> {
    if rows.is_empty() {
        return Err(Error::Empty);
    }
    PcMatrix::from_square(Square::from_rows(rows)?, reciprocity_tol)
}

/// The logarithmic image of a comparisons matrix. Entries are finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct LogMatrix {
    entries: Square<f64>,
}

impl LogMatrix {
    pub fn new(entries: Square<f64>) -> Result<Self> {
        for (row, col, &value) in entries.indexed() {
            if !value.is_finite() {
                return Err(Error::NonFinite { row, col, value });
            }
        }
        Ok(LogMatrix { entries })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Square::from_rows(rows)?)
    }

    pub fn zeros(n: usize) -> Self {
        LogMatrix {
            entries: Square::zeros(n),
        }
    }

    /// The matrix `x_ij = v_i - v_j`, which always lies in the consistent subspace.
    pub fn from_potentials(v: &[f64]) -> Result<Self> {
        Self::new(Square::from_fn(v.len(), |i, j| v[i] - v[j]))
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &Square<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> Square<f64> {
        self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.to_rows()
    }

    pub fn dot(&self, other: &LogMatrix) -> f64 {
        self.entries.dot(&other.entries)
    }

    /// Euclidean (Frobenius) distance to `other`.
    pub fn distance(&self, other: &LogMatrix) -> f64 {
        self.entries.sub(&other.entries).norm()
    }

    pub fn max_abs_diff(&self, other: &LogMatrix) -> f64 {
        self.entries.max_abs_diff(&other.entries)
    }

    /// Whether `x_ij = -x_ji` holds within `tol` for every pair.
    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i..n).all(|j| (self.get(i, j) + self.get(j, i)).abs() <= tol))
    }
}

/// Entrywise natural logarithm.
pub fn log_transform(m: &PcMatrix) -> LogMatrix {
    LogMatrix {
        entries: m.entries.map(|v| v.ln()),
    }
}

/// Entrywise exponential. Fails if any entry's exponential would overflow
/// or underflow the positive normal `f64` range.
pub fn exp_transform(a: &LogMatrix) -> Result<PcMatrix> {
    for (row, col, &value) in a.entries.indexed() {
        if value.abs() > MAX_EXPONENT {
            return Err(Error::Overflow { row, col, value });
        }
    }
    PcMatrix::from_square(a.entries.map(|v| v.exp()), RECIPROCITY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn validate_accepts_reciprocal_2x2() {
        let m = validate(&[[1.0, 2.0], [0.5, 1.0]], RECIPROCITY_TOL).unwrap();
        assert!(m.is_reciprocal());
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn validate_reports_first_non_positive_entry() {
        let err = validate(&[[1.0, 2.0], [-0.5, 1.0]], RECIPROCITY_TOL).unwrap_err();
        assert_eq!(
            err,
            Error::NonPositiveEntry {
                row: 1,
                col: 0,
                value: -0.5
            }
        );
        assert!(err.to_string().contains("(2, 1)"));
    }

    #[test]
    fn validate_rejects_zero_nan_and_infinity() {
        for bad in [0.0, f64::NAN, f64::INFINITY] {
            let err = validate(&[[1.0, bad], [1.0, 1.0]], RECIPROCITY_TOL).unwrap_err();
            assert!(matches!(err, Error::NonPositiveEntry { row: 0, col: 1, .. }));
        }
    }

    #[test]
    fn validate_rejects_non_square() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![0.5]];
        assert_eq!(
            validate(&rows, RECIPROCITY_TOL).unwrap_err(),
            Error::NonSquare {
                row: 1,
                len: 1,
                expected: 2
            }
        );
        let empty: Vec<Vec<f64>> = vec![];
        assert_eq!(validate(&empty, RECIPROCITY_TOL).unwrap_err(), Error::Empty);
    }

    #[test]
    fn validate_stimuli_matrix_is_reciprocal() {
        let m = validate(
            &[[1.0, 2.0, 8.0], [0.5, 1.0, 4.0], [0.125, 0.25, 1.0]],
            RECIPROCITY_TOL,
        )
        .unwrap();
        assert!(m.is_reciprocal());
        assert_eq!(m, PcMatrix::from_stimuli(&[8.0, 4.0, 1.0]).unwrap());
    }

    #[test]
    fn non_reciprocal_input_is_flagged_not_repaired() {
        let m = validate(&[[1.0, 2.0], [0.6, 1.0]], RECIPROCITY_TOL).unwrap();
        assert!(!m.is_reciprocal());
        assert_eq!(m.get(1, 0), 0.6);
        assert!(matches!(
            m.check_reciprocal(RECIPROCITY_TOL),
            Err(Error::NotReciprocal { row: 0, col: 1, .. })
        ));
        // non-unit diagonal counts as non-reciprocal too
        let d = validate(&[[2.0]], RECIPROCITY_TOL).unwrap();
        assert!(!d.is_reciprocal());
    }

    #[test]
    fn log_of_ones_is_zero() {
        let a = log_transform(&PcMatrix::ones(4).unwrap());
        assert_eq!(a, LogMatrix::zeros(4));
    }

    #[test]
    fn log_of_e_is_one() {
        let m = PcMatrix::from_rows(&[[1.0, E], [1.0 / E, 1.0]]).unwrap();
        let a = log_transform(&m);
        assert_eq!(a.get(0, 0), 0.0);
        assert!((a.get(0, 1) - 1.0).abs() < 1e-15);
        assert!((a.get(1, 0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_maps_to_antisymmetric() {
        let m = PcMatrix::from_rows(&[[1.0, 3.0, 0.2], [1.0 / 3.0, 1.0, 7.0], [5.0, 1.0 / 7.0, 1.0]])
            .unwrap();
        assert!(log_transform(&m).is_antisymmetric(1e-15));
        assert!(exp_transform(&log_transform(&m)).unwrap().is_reciprocal());
    }

    #[test]
    fn exp_of_zero_is_ones() {
        assert_eq!(
            exp_transform(&LogMatrix::zeros(3)).unwrap(),
            PcMatrix::ones(3).unwrap()
        );
    }

    #[test]
    fn exp_round_trip() {
        let m = PcMatrix::from_rows(&[[1.0, 9.0, 0.125], [1.0 / 9.0, 1.0, 1.5], [8.0, 2.0 / 3.0, 1.0]])
            .unwrap();
        let back = exp_transform(&log_transform(&m)).unwrap();
        assert!(back.max_rel_diff(&m) <= 1e-14);
    }

    #[test]
    fn exp_overflow_is_an_error() {
        let a = LogMatrix::from_rows(&[[0.0, 800.0], [-800.0, 0.0]]).unwrap();
        assert!(matches!(
            exp_transform(&a),
            Err(Error::Overflow { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn log_matrix_rejects_non_finite() {
        assert!(matches!(
            LogMatrix::from_rows(&[[0.0, f64::NAN], [0.0, 0.0]]),
            Err(Error::NonFinite { row: 0, col: 1, .. })
        ));
    }
}
