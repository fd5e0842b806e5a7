//! Roots of the lattice approximation f_53 to the 2-3 polynomial: solve the
//! sparse polynomial 1 - z^53 - z^84, then map the z-plane roots to complex
//! dimensions and replicate them along the oscillatory period.

use dirichlet_lsa::dioph::{sda_quality, Provenance, Sda};
use dirichlet_lsa::dirichlet::DirichletPolynomial;
use dirichlet_lsa::lsa::lattice_approximation;
use dirichlet_lsa::numerics::{HpReal, RealExpr, Rounding};
use dirichlet_lsa::roots::{roots_to_dimensions, solve_sparse};

fn main() {
    let f = DirichletPolynomial::two_three();
    let log23 = RealExpr::log_quotient((3, 1), (2, 1)).eval(192).unwrap();
    let quality = sda_quality(&[log23], &53.into(), &[84.into()]);
    let sda = Sda {
        quality,
        q: 53.into(),
        k: vec![84.into()],
        delta: None,
        provenance: Provenance::ContinuedFraction,
    };
    let approx = lattice_approximation(&f, &sda, 128).unwrap();
    println!(
        "f_53: degree {} generator 2^(-1/53), period p_53 = {:.5}",
        approx.sparse.degree(),
        approx.period.to_f64()
    );

    let tol = HpReal::from_mantissa_exp(1.into(), -64, 128, Rounding::Nearest);
    let zroots = solve_sparse(&approx.sparse, &tol, 128).unwrap();
    println!("z-plane roots: {} (counted with multiplicity)", zroots.count_with_multiplicity());

    let strip = approx.period.clone();
    let dims = roots_to_dimensions(&zroots, &approx.generator, &strip).unwrap();
    println!("complex dimensions with |Im| <= p_53: {}", dims.len());
    println!("the ten lowest by |Im|:");
    let mut sorted: Vec<_> = dims.roots.iter().collect();
    sorted.sort_by(|a, b| {
        a.value.im.abs().cmp_value(&b.value.im.abs())
    });
    for r in sorted.iter().take(10) {
        println!(
            "  {:>12.8} {:+14.8}i   residual {:.2e}",
            r.value.re.to_f64(),
            r.value.im.to_f64(),
            r.residual.to_f64()
        );
    }
}
