//! Optimal consistent approximation of pairwise comparisons matrices.
//!
//! A comparisons matrix `M` is mapped to log space, projected orthogonally
//! onto the subspace of consistent log matrices (those with
//! `x_ij + x_jk = x_ik`), and mapped back. The result is the consistent
//! matrix nearest to `M` in the least-squares sense on logarithms.
//!
//! ```
//! use concord_core::{approximate, extract_weights, PcMatrix};
//!
//! let m = PcMatrix::from_rows(&[[1.0, 2.0, 5.0], [0.5, 1.0, 2.0], [0.2, 0.5, 1.0]])?;
//! let result = approximate(&m)?;
//! let weights = extract_weights(&result.consistent)?;
//! assert!((weights.values.iter().sum::<f64>() - 1.0).abs() < 1e-12);
//! # Ok::<(), concord_core::Error>(())
//! ```

pub mod basis;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod projection;
pub mod triads;
pub mod weights;

pub use basis::{basis_orthogonal, basis_raw, norm_squared, BasisSet};
pub use error::{Error, Result};
pub use matrix::{exp_transform, log_transform, validate, LogMatrix, PcMatrix, Square, RECIPROCITY_TOL};
pub use projection::{approximate, approximate_with, project, project_fast, ApproximateOptions, ProjectionResult};
pub use triads::{check_consistency, check_l_consistency, Triad, TriadReport, CONSISTENCY_TOL};
pub use weights::{extract_weights, extract_weights_with_tol, priority_weights, WeightVector};
