//! Bases of the consistent subspace `L` of `n x n` log matrices.
//!
//! `L` holds the matrices with `x_ij + x_jk = x_ik`; it has dimension
//! `n - 1`. Two bases are built here, both with exact rational entries:
//!
//! * the block basis `B_1 .. B_{n-1}`, where `B_k` has `+1` in the block
//!   `i <= k < j`, `-1` in the mirrored block `j <= k < i` and zeros elsewhere;
//! * the orthogonal basis `T_1 .. T_{n-1}` with `T_k = B_k - (n-k)/(n-k+1) B_{k-1}`
//!   (`B_0 = 0`).
//!
//! Basis indices `k` are one-based throughout this module, matrix positions
//! are zero-based.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Square;

/// Exact basis entries: small rationals with denominators at most `n`.
pub type Rational = Rational64;

fn check_index(n: usize, k: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange { n, k });
    }
    Ok(())
}

fn r(v: usize) -> Rational64 {
    Rational64::from_integer(v as i64)
}

/// Entry `(i, j)` (zero-based) of the block basis matrix `B_k`.
fn raw_entry(k: usize, i: usize, j: usize) -> i64 {
    let (i, j) = (i + 1, j + 1);
    if i <= k && k < j {
        1
    } else if j <= k && k < i {
        -1
    } else {
        0
    }
}

/// The block basis matrix `B_k` of dimension `n`, for `1 <= k <= n - 1`.
pub fn basis_raw(n: usize, k: usize) -> Result<Square<Rational64>> {
    check_index(n, k)?;
    Ok(Square::from_fn(n, |i, j| {
        Rational64::from_integer(raw_entry(k, i, j))
    }))
}

/// Entry `(i, j)` (zero-based) of `T_k` from the closed form.
fn orthogonal_entry(n: usize, k: usize, i: usize, j: usize) -> Rational64 {
    let upper = |i: usize, j: usize| -> Rational64 {
        // one-based positions, i < j
        let (i, j) = (i + 1, j + 1);
        if i < k && j == k {
            -Rational64::new((n - k) as i64, (n - k + 1) as i64)
        } else if i < k && k < j {
            Rational64::new(1, (n - k + 1) as i64)
        } else if i == k && k < j {
            Rational64::from_integer(1)
        } else {
            Rational64::zero()
        }
    };
    match i.cmp(&j) {
        std::cmp::Ordering::Less => upper(i, j),
        std::cmp::Ordering::Greater => -upper(j, i),
        std::cmp::Ordering::Equal => Rational64::zero(),
    }
}

/// `T_k` of dimension `n` from the entrywise closed form.
pub fn orthogonal_closed_form(n: usize, k: usize) -> Result<Square<Rational64>> {
    check_index(n, k)?;
    Ok(Square::from_fn(n, |i, j| orthogonal_entry(n, k, i, j)))
}

/// `T_k` of dimension `n` from `B_k - (n-k)/(n-k+1) B_{k-1}`.
pub fn orthogonal_from_recursion(n: usize, k: usize) -> Result<Square<Rational64>> {
    check_index(n, k)?;
    let c = Rational64::new((n - k) as i64, (n - k + 1) as i64);
    Ok(Square::from_fn(n, |i, j| {
        let previous = if k == 1 { 0 } else { raw_entry(k - 1, i, j) };
        Rational64::from_integer(raw_entry(k, i, j)) - c * Rational64::from_integer(previous)
    }))
}

/// Squared Euclidean norm `|T_k|^2` for dimension `n`.
///
/// Evaluates `2 {(k-1) [(n-k)/(n-k+1)^2 + (n-k)^2/(n-k+1)^2] + (n-k)}`,
/// which reduces to `2n(n-k)/(n-k+1)`.
pub fn norm_squared(n: usize, k: usize) -> Result<Rational64> {
    check_index(n, k)?;
    let m = r(n - k);
    let d = r(n - k + 1);
    let two = r(2);
    Ok(two * (r(k - 1) * (m / (d * d) + m * m / (d * d)) + m))
}

/// Exact Frobenius inner product of two rational matrices.
pub fn rational_dot(a: &Square<Rational64>, b: &Square<Rational64>) -> Rational64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .fold(Rational64::zero(), |acc, (x, y)| acc + x * y)
}

/// Converts a rational matrix to floating point.
pub fn to_f64(m: &Square<Rational64>) -> Square<f64> {
    m.map(|v| v.to_f64().expect("basis entries are small rationals"))
}

/// The raw and orthogonal bases of `L` for one dimension, with squared norms.
#[derive(Debug, Clone)]
pub struct BasisSet {
    n: usize,
    raw: Vec<Square<Rational64>>,
    orthogonal: Vec<Square<Rational64>>,
    normsq: Vec<Rational64>,
    orthogonal_f64: Vec<Square<f64>>,
    normsq_f64: Vec<f64>,
}

impl BasisSet {
    /// Builds both bases for dimension `n >= 2`.
    ///
    /// Each `T_k` comes from the closed form and is checked against the
    /// `B_k` recursion; squared norms are direct dot products `T_k . T_k`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        let mut raw = Vec::with_capacity(n - 1);
        let mut orthogonal = Vec::with_capacity(n - 1);
        let mut normsq = Vec::with_capacity(n - 1);
        for k in 1..n {
            let t = orthogonal_closed_form(n, k)?;
            assert_eq!(
                t,
                orthogonal_from_recursion(n, k)?,
                "closed form and recursion disagree for n={n}, k={k}"
            );
            normsq.push(rational_dot(&t, &t));
            raw.push(basis_raw(n, k)?);
            orthogonal.push(t);
        }
        let orthogonal_f64 = orthogonal.iter().map(to_f64).collect();
        let normsq_f64 = normsq
            .iter()
            .map(|v| v.to_f64().expect("small rational"))
            .collect();
        Ok(BasisSet {
            n,
            raw,
            orthogonal,
            normsq,
            orthogonal_f64,
            normsq_f64,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `B_1 .. B_{n-1}`; element `k - 1` is `B_k`.
    pub fn raw(&self) -> &[Square<Rational64>] {
        &self.raw
    }

    /// `T_1 .. T_{n-1}`; element `k - 1` is `T_k`.
    pub fn orthogonal(&self) -> &[Square<Rational64>] {
        &self.orthogonal
    }

    pub fn normsq(&self) -> &[Rational64] {
        &self.normsq
    }

    pub fn orthogonal_f64(&self) -> &[Square<f64>] {
        &self.orthogonal_f64
    }

    pub fn normsq_f64(&self) -> &[f64] {
        &self.normsq_f64
    }

    pub fn raw_f64(&self) -> Vec<Square<f64>> {
        self.raw.iter().map(to_f64).collect()
    }
}

/// Builds the orthogonal basis for dimension `n`. Same as [`BasisSet::new`].
pub fn basis_orthogonal(n: usize) -> Result<BasisSet> {
    BasisSet::new(n)
}

/// Returns the basis for `n`, building it on first use and sharing it afterwards.
pub fn cached(n: usize) -> Result<Arc<BasisSet>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<BasisSet>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.read().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return Ok(Arc::clone(b));
    }
    // built outside the lock; a racing builder produces the same value
    let built = Arc::new(BasisSet::new(n)?);
    let mut map = cache.write().unwrap_or_else(|e| e.into_inner());
    Ok(Arc::clone(map.entry(n).or_insert(built)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn ints(m: &Square<Rational64>) -> Vec<Vec<i64>> {
        m.rows()
            .map(|r| r.iter().map(|v| v.to_integer()).collect())
            .collect()
    }

    #[test]
    fn smallest_raw_basis() {
        assert_eq!(ints(&basis_raw(2, 1).unwrap()), vec![vec![0, 1], vec![-1, 0]]);
    }

    #[test]
    fn raw_b2_for_seven() {
        let b = ints(&basis_raw(7, 2).unwrap());
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let expected = match (i < 2, j < 2) {
                    (true, false) => 1,
                    (false, true) => -1,
                    _ => 0,
                };
                assert_eq!(v, expected, "({i},{j})");
            }
        }
    }

    #[test]
    fn raw_b6_for_seven() {
        let b = ints(&basis_raw(7, 6).unwrap());
        for i in 0..6 {
            assert_eq!(b[i][6], 1);
            assert_eq!(b[6][i], -1);
            assert!(b[i][..6].iter().all(|&v| v == 0));
        }
        assert_eq!(b[6][6], 0);
    }

    #[test]
    fn raw_index_errors() {
        assert_eq!(basis_raw(7, 0).unwrap_err(), Error::IndexOutOfRange { n: 7, k: 0 });
        assert_eq!(basis_raw(7, 7).unwrap_err(), Error::IndexOutOfRange { n: 7, k: 7 });
        assert_eq!(basis_raw(1, 1).unwrap_err(), Error::DimensionTooSmall { n: 1 });
        assert_eq!(norm_squared(3, 3).unwrap_err(), Error::IndexOutOfRange { n: 3, k: 3 });
    }

    #[test]
    fn t2_for_seven() {
        let t = orthogonal_closed_form(7, 2).unwrap();
        assert_eq!(t[(0, 1)], q(-5, 6));
        for j in 2..7 {
            assert_eq!(t[(0, j)], q(1, 6));
            assert_eq!(t[(1, j)], q(1, 1));
        }
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(t[(i, j)], -t[(j, i)]);
            }
        }
    }

    #[test]
    fn t1_is_b1() {
        assert_eq!(
            orthogonal_closed_form(7, 1).unwrap(),
            basis_raw(7, 1).unwrap()
        );
    }

    #[test]
    fn t6_for_seven() {
        let t = orthogonal_closed_form(7, 6).unwrap();
        for i in 0..5 {
            assert_eq!(t[(i, 5)], q(-1, 2));
            assert_eq!(t[(i, 6)], q(1, 2));
        }
        assert_eq!(t[(5, 6)], q(1, 1));
    }

    #[test]
    fn norm_squared_values_for_seven() {
        assert_eq!(norm_squared(7, 1).unwrap(), q(12, 1));
        assert_eq!(norm_squared(7, 2).unwrap(), q(35, 3));
        assert_eq!(norm_squared(7, 6).unwrap(), q(7, 1));
    }

    #[test]
    fn basis_set_rejects_small_dimensions() {
        assert_eq!(BasisSet::new(1).unwrap_err(), Error::DimensionTooSmall { n: 1 });
        assert_eq!(BasisSet::new(0).unwrap_err(), Error::DimensionTooSmall { n: 0 });
        let b = BasisSet::new(2).unwrap();
        assert_eq!(b.orthogonal().len(), 1);
        assert_eq!(b.normsq()[0], q(2, 1));
    }

    #[test]
    fn orthogonal_pairs_vanish_exactly() {
        for n in 2..=25 {
            let b = BasisSet::new(n).unwrap();
            for (j, tj) in b.orthogonal().iter().enumerate() {
                for tk in &b.orthogonal()[j + 1..] {
                    assert!(rational_dot(tj, tk).is_zero(), "n={n}");
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_recursion() {
        for n in 2..=25 {
            for k in 1..n {
                assert_eq!(
                    orthogonal_closed_form(n, k).unwrap(),
                    orthogonal_from_recursion(n, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn norm_formula_matches_dot_product() {
        for n in 2..=30 {
            let b = BasisSet::new(n).unwrap();
            for k in 1..n {
                let direct = b.normsq()[k - 1];
                assert_eq!(norm_squared(n, k).unwrap(), direct);
                assert_eq!(direct, q(2 * (n * (n - k)) as i64, (n - k + 1) as i64));
            }
        }
    }

    #[test]
    fn cache_returns_shared_instance() {
        let a = cached(9).unwrap();
        let b = cached(9).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert!(cached(1).is_err());
    }
}
