//! Norming pairs (a_n, b_n) across the catalog, next to the closed forms
//! the generic solver is expected to reproduce.

use freemax::catalog;

fn main() -> freemax::Result<()> {
    let n = 10_000u64;
    let nf = n as f64;

    println!("n = {n}\n");
    println!("{:<42} {:>22} {:>18} {:>12}", "entry", "a_n", "b_n", "residual");
    for entry in catalog::default_catalog() {
        let pair = entry.norming(n)?;
        println!(
            "{:<42} {:>22.15} {:>18.12} {:>12.2e}",
            entry.name(),
            pair.a,
            pair.b,
            pair.residual
        );
    }

    println!("\nclosed forms at n = {n}:");
    println!("  frechet(2):          a_n = n^(1/2)                  = {:.15}", nf.sqrt());
    println!(
        "  log_logistic(2):     a_n = (e^(1/n)-1)^(-1/2)        = {:.15}",
        (1.0 / nf).exp_m1().powf(-0.5)
    );
    println!(
        "  cauchy:              a_n = tan(pi e^(-1/n) - pi/2)   = {:.15}",
        (std::f64::consts::PI * (-1.0 / nf).exp() - std::f64::consts::PI / 2.0).tan()
    );
    println!(
        "  uniform01:           a_n = 1 - e^(-1/n)              = {:.15e}",
        -(-1.0 / nf).exp_m1()
    );
    println!(
        "  gumbel:              a_n = 1, b_n = log n            = {:.15}",
        nf.ln()
    );
    println!(
        "  stretched_gumbel(2): b_n = (log n)^(1/2)             = {:.15}",
        nf.ln().sqrt()
    );

    // For the normal the textbook asymptotic is only first-order; the
    // solver value is the real root of Phi(b) = e^{-1/n}.
    let normal = catalog::std_normal();
    let pair = normal.norming(n)?;
    let l = nf.ln();
    let asym = (2.0 * l).sqrt() - (l.ln() + (4.0 * std::f64::consts::PI).ln()) / (2.0 * (2.0 * l).sqrt());
    println!(
        "  std_normal:          b_n = {:.12} (asymptotic {:.12}, off by {:.2}%)",
        pair.b,
        asym,
        100.0 * (pair.b - asym).abs() / pair.b
    );
    Ok(())
}
