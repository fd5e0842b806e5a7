//! Continued-fraction convergents of the golden ratio and of log2(3), the
//! two numbers behind the rank-two examples.

use dirichlet_lsa::cfrac::convergents;
use dirichlet_lsa::numerics::RealExpr;

fn main() {
    let phi = RealExpr::golden_ratio();
    println!("convergents of phi (ratios of consecutive Fibonacci numbers):");
    for c in convergents(&phi, 12, 64).unwrap() {
        print!("  {}/{}", c.a, c.b);
    }
    println!();

    let log23 = RealExpr::log_quotient((3, 1), (2, 1));
    println!("convergents of log2(3):");
    for c in convergents(&log23, 12, 64).unwrap() {
        print!("  {}/{}", c.a, c.b);
    }
    println!();

    // A rational input runs the Euclidean algorithm and stops.
    let r = RealExpr::rational(355, 113);
    let cs = convergents(&r, 10, 64).unwrap();
    let list: Vec<String> = cs.iter().map(|c| format!("{}/{}", c.a, c.b)).collect();
    println!("355/113 expands to {} convergents: {}", cs.len(), list.join(", "));
}
