//! Triad inconsistency report, worst first.
//!
//! cargo run -p concord --example triads

use concord::core::{check_consistency, PcMatrix, CONSISTENCY_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = PcMatrix::from_rows(&[
        [1.0, 2.0, 5.0, 1.0],
        [0.5, 1.0, 2.0, 0.5],
        [0.2, 0.5, 1.0, 0.25],
        [1.0, 2.0, 4.0, 1.0],
    ])?;
    let report = check_consistency(&m, CONSISTENCY_TOL);
    println!("consistent: {}", report.is_consistent());
    println!("global: {:.6}", report.global);
    for t in report.top(5) {
        println!("({}, {}, {}) -> {:.6}", t.i + 1, t.j + 1, t.k + 1, t.inconsistency);
    }
    Ok(())
}
