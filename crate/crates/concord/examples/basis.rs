//! Prints the block basis B_k and its orthogonalisation T_k for n = 7 as
//! exact rationals, along with |T_k|^2.
//!
//! cargo run -p concord --example basis [n]

use concord::core::BasisSet;

fn print(name: &str, k: usize, m: &concord::core::Square<concord::core::basis::Rational>) {
    println!("{name}_{k}");
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|r| format!("{:>6}", r.to_string())).collect();
        println!("  {}", cells.join(""));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let basis = BasisSet::new(n)?;
    for (k, b) in basis.raw().iter().enumerate() {
        print("B", k + 1, b);
    }
    for (k, t) in basis.orthogonal().iter().enumerate() {
        print("T", k + 1, t);
    }
    for (k, norm) in basis.normsq().iter().enumerate() {
        println!("|T_{}|^2 = {norm}", k + 1);
    }
    Ok(())
}
