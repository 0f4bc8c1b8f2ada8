//! Reads a labelled CSV document, approximates it and writes JSON.
//!
//! cargo run -p concord --example formats

use concord::core::approximate;
use concord::core::PcMatrix;
use concord::io::{emit_matrix, parse_matrix, Format, MatrixDocument};

const INPUT: &str = "\
#labels: price, comfort, safety
# fractions are evaluated exactly
1, 3, 1/2
1/3, 1, 1/4
2, 4, 1
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = parse_matrix(INPUT, Format::sniff(INPUT))?;
    let m = PcMatrix::from_rows(&doc.entries)?;
    let result = approximate(&m)?;
    let out = MatrixDocument::from_matrix(&result.consistent, doc.labels.clone(), Format::Json);
    print!("{}", emit_matrix(&out, Format::Json, 6));
    print!("{}", emit_matrix(&out, Format::Csv, 6));
    Ok(())
}
