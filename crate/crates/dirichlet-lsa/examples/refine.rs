//! Newton refinement: stable roots of the lattice approximation f_53 seed
//! the true roots of the 2-3 polynomial; the real refined root is the
//! dimension D.

use dirichlet_lsa::dioph::{sda_quality, Provenance, Sda};
use dirichlet_lsa::dirichlet::{dimension_bounds, DirichletPolynomial};
use dirichlet_lsa::lsa::{lattice_approximation, refine_roots, stability_radius, stable_roots};
use dirichlet_lsa::numerics::{HpReal, RealExpr, Rounding};
use dirichlet_lsa::roots::solve_sparse;

fn main() {
    let f = DirichletPolynomial::two_three();
    let log23 = RealExpr::log_quotient((3, 1), (2, 1)).eval(320).unwrap();
    let sda = Sda {
        quality: sda_quality(&[log23], &53.into(), &[84.into()]),
        q: 53.into(),
        k: vec![84.into()],
        delta: None,
        provenance: Provenance::ContinuedFraction,
    };
    let approx = lattice_approximation(&f, &sda, 256).unwrap();
    let eps = HpReal::from_f64(0.1, 256);
    let region = stability_radius(&f, &sda, &eps, 256).unwrap();
    println!(
        "stability radius {:.4} (a fraction of p_53 = {:.4})",
        region.radius.to_f64(),
        approx.period.to_f64()
    );

    let tol_solve = HpReal::from_mantissa_exp(1.into(), -100, 256, Rounding::Nearest);
    let zroots = solve_sparse(&approx.sparse, &tol_solve, 256).unwrap();
    let (stable, _) = stable_roots(&approx, &zroots, &region).unwrap();
    println!("stable seeds: {}", stable.len());

    let tol = HpReal::from_f64(1e-31, 256);
    let report = refine_roots(&f, &stable, &tol, 100).unwrap();
    println!(
        "seeds {} converged {} failed {} -> {} distinct roots of f",
        report.converged_seeds + report.failed_seeds,
        report.converged_seeds,
        report.failed_seeds,
        report.roots.len()
    );
    let bounds = dimension_bounds(&f, 256);
    for r in &report.roots {
        println!(
            "  {:>14.10} {:+16.10}i  |f| = {:.2e}  ({} iterations)",
            r.value.re.to_f64(),
            r.value.im.to_f64(),
            r.residual.to_f64(),
            r.iterations
        );
    }
    println!("dimension D = {:.12} (real refined root matches)", bounds.d.to_f64());
}
