//! Triad consistency checks in ratio space and in log space.

use crate::matrix::{LogMatrix, PcMatrix};

/// Default tolerance for consistency checks.
pub const CONSISTENCY_TOL: f64 = 1e-10;

/// One triad `i < j < k` (zero-based) and its local inconsistency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triad {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub inconsistency: f64,
}

/// Local inconsistency of the triad `x = m_ij`, `y = m_jk`, `z = m_ik`:
/// `min(|1 - z/(xy)|, |1 - xy/z|)`. Lies in `[0, 1)` and is zero exactly
/// when `xy = z`.
pub fn triad_inconsistency(x: f64, y: f64, z: f64) -> f64 {
    let xy = x * y;
    (1.0 - z / xy).abs().min((1.0 - xy / z).abs())
}

/// All triads of a matrix, worst first, with the global (maximum) value.
#[derive(Debug, Clone, PartialEq)]
pub struct TriadReport {
    /// Sorted by inconsistency descending; ties in lexicographic `(i, j, k)` order.
    pub triads: Vec<Triad>,
    pub global: f64,
}

impl TriadReport {
    pub fn worst(&self) -> Option<&Triad> {
        self.triads.first()
    }

    pub fn is_consistent(&self) -> bool {
        self.global == 0.0
    }

    /// The `count` worst triads.
    pub fn top(&self, count: usize) -> &[Triad] {
        &self.triads[..count.min(self.triads.len())]
    }
}

/// Scores every triad `i < j < k` of `m`.
///
/// Values at or below `tol` are reported as exactly zero, so `global == 0`
/// iff the matrix is consistent within `tol`. Only the upper triangle is
/// read; for reciprocal matrices that is equivalent to checking all triples.
pub fn check_consistency(m: &PcMatrix, tol: f64) -> TriadReport {
    let n = m.dim();
    let mut triads = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut value = triad_inconsistency(m.get(i, j), m.get(j, k), m.get(i, k));
                if value <= tol {
                    value = 0.0;
                }
                triads.push(Triad {
                    i,
                    j,
                    k,
                    inconsistency: value,
                });
            }
        }
    }
    // stable sort keeps the lexicographic generation order among ties
    triads.sort_by(|a, b| b.inconsistency.total_cmp(&a.inconsistency));
    let global = triads.first().map_or(0.0, |t| t.inconsistency);
    TriadReport { triads, global }
}

/// Whether `a` lies in the consistent subspace: antisymmetric within `tol`
/// and `|x_ij + x_jk - x_ik| <= tol` for every `i < j < k`.
pub fn check_l_consistency(a: &LogMatrix, tol: f64) -> bool {
    let n = a.dim();
    if !a.is_antisymmetric(tol) {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            let xij = a.get(i, j);
            for k in j + 1..n {
                if (xij + a.get(j, k) - a.get(i, k)).abs() > tol {
                    return false;
                }
            }
        }
    }
    true
}
