//! Von Mises diagnostics: the functional h, the envelope g that must
//! dominate |h|, and both evaluated at the norming points.

use freemax::numerics::geometric_grid;
use freemax::von_mises::check_membership;
use freemax::{builtin, catalog};

fn main() -> freemax::Result<()> {
    let n_grid = [100u64, 1_000, 10_000, 100_000];

    let entry = builtin("log_logistic", &[2.0])?;
    let xs = geometric_grid(0.25, 200.0, 12);
    let report = check_membership(&entry, &n_grid, &xs)?;
    println!("{} (certified envelope g = alpha/(1+x^alpha)):", entry.name());
    println!("{:>12} {:>14} {:>14}", "x", "h(x)", "g(x)");
    for (&(x, h), &(_, g)) in report.h_values.iter().zip(&report.envelope_values) {
        println!("{x:>12.4} {h:>14.6e} {g:>14.6e}");
    }
    println!(
        "domination_ok = {}, monotone_ok = {}",
        report.domination_ok, report.monotone_ok
    );
    for &(n, g) in &report.envelope_at_norm {
        println!("  g(a_n) at n = {n:>6}: {g:.6e}");
    }

    // Without a closed form the envelope is auto-built as the running max
    // of |h| from the right and flagged as non-certified.
    let auto = entry.clone().without_envelope();
    let report = check_membership(&auto, &n_grid, &xs)?;
    println!(
        "\nauto-envelope path: certified = {}, domination_ok = {}",
        report.envelope_certified, report.domination_ok
    );

    // The normal's h tends to 0 slowly; watch the envelope decay along n.
    let entry = catalog::std_normal();
    let xs = geometric_grid(0.5, 8.0, 8);
    let report = check_membership(&entry, &n_grid, &xs)?;
    println!("\n{}:", entry.name());
    for &(n, g) in &report.envelope_at_norm {
        println!("  g(b_n) at n = {n:>6}: {g:.6e}   (g ~ 1/sqrt(2 log n))");
    }
    Ok(())
}
