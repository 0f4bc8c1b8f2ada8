//! Priority weights from a consistent matrix, and from an inconsistent one
//! by way of its approximation.
//!
//! cargo run -p concord --example weights

use concord::core::{extract_weights, priority_weights, PcMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let consistent = PcMatrix::from_stimuli(&[1.0, 2.0, 4.0])?;
    let w = extract_weights(&consistent)?;
    println!("consistent input: {:?}", w.values);

    let m = PcMatrix::from_rows(&[[1.0, 2.0, 5.0], [0.5, 1.0, 2.0], [0.2, 0.5, 1.0]])?;
    // extract_weights refuses inconsistent input
    if let Err(e) = extract_weights(&m) {
        println!("rejected: {e}");
    }
    let w = priority_weights(&m)?;
    println!("after approximation: {:?}", w.values);
    println!("w_1 / w_3 = {:.6}", w.ratio(0, 2));
    Ok(())
}
