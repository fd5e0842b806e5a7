//! The approximation table for the 2-3 polynomial: quality, oscillatory
//! period and stability radius for each convergent of log2(3), matching the
//! published progression.

use dirichlet_lsa::cfrac::convergents;
use dirichlet_lsa::dioph::{sda_quality, Provenance, Sda};
use dirichlet_lsa::dirichlet::DirichletPolynomial;
use dirichlet_lsa::lsa::stability_radius;
use dirichlet_lsa::numerics::{HpReal, RealExpr};
use dirichlet_lsa::roots::oscillatory_period;

fn main() {
    let f = DirichletPolynomial::two_three();
    let log23 = RealExpr::log_quotient((3, 1), (2, 1));
    let value = log23.eval(256).unwrap();
    let eps = HpReal::from_f64(0.1, 128);
    println!("{:<14} {:<18} {:<14} radius (eps = 1/10)", "Q", "(q,k)", "p_q");
    for c in convergents(&log23, 13, 64).unwrap() {
        let quality = sda_quality(std::slice::from_ref(&value), &c.b, std::slice::from_ref(&c.a));
        let sda = Sda {
            quality,
            q: c.b.clone(),
            k: vec![c.a.clone()],
            delta: None,
            provenance: Provenance::ContinuedFraction,
        };
        let region = stability_radius(&f, &sda, &eps, 128).unwrap();
        let q64 = num_traits::ToPrimitive::to_u64(&c.b).unwrap();
        let period = oscillatory_period(f.base_ratio(), q64, 128);
        let radius = region.radius.to_f64();
        let tail = if radius < period.to_f64() {
            format!("{radius:.6} < p_{}", c.b)
        } else {
            format!("{radius:.6}")
        };
        println!(
            "{:<14.6} {:<18} {:<14.6} {}",
            sda.quality.to_f64(),
            format!("({},{})", c.b, c.a),
            period.to_f64(),
            tail
        );
    }
}
