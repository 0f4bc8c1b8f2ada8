//! Nearest consistent matrix to a hand-entered comparisons matrix.
//!
//! cargo run -p concord --example approximate

use concord::core::{approximate, check_consistency, CONSISTENCY_TOL};
use concord::core::PcMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = PcMatrix::from_rows(&[
        [1.0, 3.0, 1.0 / 5.0, 7.0],
        [1.0 / 3.0, 1.0, 2.0, 1.0 / 9.0],
        [5.0, 1.0 / 2.0, 1.0, 4.0],
        [1.0 / 7.0, 9.0, 1.0 / 4.0, 1.0],
    ])?;
    let before = check_consistency(&m, CONSISTENCY_TOL);
    let result = approximate(&m)?;
    let after = check_consistency(&result.consistent, CONSISTENCY_TOL);

    println!("input global inconsistency:  {:.6}", before.global);
    println!("output global inconsistency: {:.3e}", after.global);
    println!("log-space residual norm:     {:.6}", result.residual_norm);
    println!("coefficients t_k:            {:?}", result.coefficients);
    for row in result.consistent.to_rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:9.4}")).collect();
        println!("{}", cells.join(" "));
    }
    Ok(())
}
