//! Cross-checks the fast projection against Gram-Schmidt, geometric means
//! and the normal equations on a random reciprocal matrix.
//!
//! cargo run -p concord --example oracles [n] [seed]

use concord::core::oracle::cross_check;
use concord::core::{approximate, PcMatrix};

// splitmix64, enough for a demo without pulling in an RNG crate
fn next(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31)) as f64 / u64::MAX as f64
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(8);
    let mut seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let mut rows = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = (4.0 * next(&mut seed) - 2.0).exp();
            rows[i][j] = v;
            rows[j][i] = 1.0 / v;
        }
    }
    let m = PcMatrix::from_rows(&rows)?;
    let fast = approximate(&m)?;
    println!("n = {n}, residual norm {:.6}", fast.residual_norm);
    for report in cross_check(&m)? {
        let vs_fast = report.result.max_abs_diff(&fast.projected);
        println!("{:<17} vs basis {:.2e}  vs fast {:.2e}", report.method.to_string(), report.max_abs_difference, vs_fast);
    }
    Ok(())
}
