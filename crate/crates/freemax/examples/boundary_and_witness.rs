//! Two ways uniform density convergence fails: the boundary mass below
//! x = 1 in the Frechet regime, and the Weibull witness for shallow tails.

use freemax::builtin;
use freemax::harness::{boundary_gap, nonconvergence_witness};

fn main() -> freemax::Result<()> {
    // Over (A_n, 1] the limit density is 0 while w_n(A_n+) approaches the
    // tail index, so the sup over the full half-line never vanishes.
    let alpha = 2.0;
    let entry = builtin("frechet", &[alpha])?;
    println!("boundary sup of w_n over (A_n, 1] for frechet({alpha}):");
    for n in [100u64, 1_000, 10_000, 100_000] {
        println!("  n = {n:>6}: {:.8}  (limit {alpha})", boundary_gap(&entry, n)?);
    }

    // For -1/2 < alpha < 0 there is a point ever closer to 0 where the
    // density error refuses to drop below 1.
    println!("\nwitness points with density error >= 1:");
    for alpha in [-0.25, -0.4, -0.45] {
        for n in [100u64, 10_000] {
            let (x, err) = nonconvergence_witness(alpha, n)?;
            println!("  alpha = {alpha:>5}, n = {n:>6}: x = {x:>12.3e}, |w_n - phi| = {err:.4}");
        }
    }
    Ok(())
}
