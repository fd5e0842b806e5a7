//! Simultaneous Diophantine approximations to (log2 3, log2 5, log2 7)
//! through the LLL-driven stream, reproducing the published progression
//! that passes through q = 3125 and q = 103169.

use dirichlet_lsa::dioph::{DioStream, StreamConfig};
use dirichlet_lsa::numerics::{BigRational, RealExpr};

fn main() {
    let x = vec![
        RealExpr::log_quotient((3, 1), (2, 1)),
        RealExpr::log_quotient((5, 1), (2, 1)),
        RealExpr::log_quotient((7, 1), (2, 1)),
    ];
    let config = StreamConfig::new(BigRational::new(1.into(), 10.into()), 10).unwrap();
    let mut stream = DioStream::new(&x, &config, 128).unwrap();
    println!("{:<12} {:<10} {:<40} delta", "Q", "q", "k");
    while let Some(sda) = stream.next_sda().unwrap() {
        let ks: Vec<String> = sda.k.iter().map(|k| k.to_string()).collect();
        println!(
            "{:<12.4} {:<10} {:<40} {}",
            sda.quality.to_f64(),
            sda.q,
            format!("({})", ks.join(",")),
            sda.delta.map(|d| d.to_string()).unwrap_or_default()
        );
    }
}
