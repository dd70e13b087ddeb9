//! The density w_n(x) = n a_n F'(a_n x + b_n) of a normalized free power,
//! its support window (A_n, B_n), and the distance to the limit density.

use freemax::evd::free_evd;
use freemax::maxconv::{density_wn, free_power_cdf};
use freemax::{builtin, catalog};

fn main() -> freemax::Result<()> {
    let entry = builtin("log_logistic", &[2.0])?;
    let limit = free_evd(entry.alpha());

    for n in [100u64, 10_000] {
        let fp = entry.free_power(n)?;
        let w = fp.window()?;
        println!(
            "{} at n = {n}: window A_n = {:.9}, B_n = {}",
            entry.name(),
            w.a_lower,
            w.b_upper
        );
        println!("{:>8} {:>16} {:>16} {:>12}", "x", "w_n(x)", "phi_free(x)", "|diff|");
        for x in [1.001, 1.1, 1.5, 2.0, 4.0, 10.0] {
            let wn = density_wn(&fp, x)?;
            let phi = limit.density(x);
            println!("{x:>8} {wn:>16.10} {phi:>16.10} {:>12.3e}", (wn - phi).abs());
        }
        println!();
    }

    // The window edges really do carry CDF values 0 and 1, and the density
    // is undefined outside: the free power has a kink at A_n.
    let n = 1000u64;
    let uniform = catalog::uniform01();
    let fp = uniform.free_power(n)?;
    let w = fp.window()?;
    println!(
        "uniform01 at n = {n}: A_n = {:.9}, free power CDF there = {:.3e}",
        w.a_lower,
        free_power_cdf(&fp, w.a_lower)
    );
    match density_wn(&fp, w.a_lower - 0.05) {
        Err(e) => println!("w_n outside the window: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
