//! Shared numerical kernels: CDF inversion by bracketing bisection,
//! golden-section maximization, grid builders, finite differences and the
//! log-log rate fit.

use crate::error::{Error, Result};

/// Absolute tolerance on CDF values accepted for quantile inversions.
///
/// Norming residuals must sit far below the O(1/n) effects the harness
/// measures, so this is deliberately strict.
pub const QUANTILE_TOL: f64 = 1e-12;

/// Iteration cap for the bracketing bisection.
pub const MAX_BISECT_ITERS: usize = 200;

const MAX_BRACKET_GROWTHS: usize = 200;

/// Outcome of a CDF inversion.
#[derive(Debug, Clone, Copy)]
pub struct CdfInversion {
    /// Leftmost point with `F(x) >= p`, up to one ulp.
    pub x: f64,
    /// `|F(x) - p|` at the returned point.
    pub residual: f64,
    /// True when the CDF is flat at the target level within tolerance, i.e.
    /// the solution is not unique and the infimum was returned.
    pub flat: bool,
    pub iterations: usize,
}

/// Inverts a nondecreasing CDF at level `p` by bracketing bisection.
///
/// `left`/`right` are finite support edges when known; unbounded sides grow
/// geometrically from an interior seed until the target is bracketed. The
/// bracket keeps `F(lo) < p <= F(hi)` throughout, so the result converges to
/// the generalized inverse `inf {x : F(x) >= p}` even across flat stretches.
pub fn invert_cdf<F: Fn(f64) -> f64>(
    cdf: F,
    p: f64,
    left: Option<f64>,
    right: Option<f64>,
    name: &str,
) -> Result<CdfInversion> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }

    let fail = |reason: &str| Error::BracketFailure {
        name: name.to_string(),
        p,
        reason: reason.to_string(),
    };

    let mut lo;
    let mut hi;
    match (left, right) {
        (Some(l), Some(r)) => {
            lo = l;
            hi = r;
        }
        (Some(l), None) => {
            lo = l;
            let mut step = l.abs().max(1.0);
            hi = l + step;
            let mut grown = 0;
            while cdf(hi) < p {
                step *= 2.0;
                hi = l + step;
                grown += 1;
                if grown > MAX_BRACKET_GROWTHS {
                    return Err(fail("right bracket never reached the target level"));
                }
            }
        }
        (None, Some(r)) => {
            hi = r;
            let mut step = r.abs().max(1.0);
            lo = r - step;
            let mut grown = 0;
            while cdf(lo) >= p {
                step *= 2.0;
                lo = r - step;
                grown += 1;
                if grown > MAX_BRACKET_GROWTHS {
                    return Err(fail("left bracket never dropped below the target level"));
                }
            }
        }
        (None, None) => {
            lo = -1.0;
            hi = 1.0;
            let mut grown = 0;
            while cdf(lo) >= p {
                lo *= 2.0;
                grown += 1;
                if grown > MAX_BRACKET_GROWTHS {
                    return Err(fail("left bracket never dropped below the target level"));
                }
            }
            grown = 0;
            while cdf(hi) < p {
                hi *= 2.0;
                grown += 1;
                if grown > MAX_BRACKET_GROWTHS {
                    return Err(fail("right bracket never reached the target level"));
                }
            }
        }
    }

    if cdf(hi) < p {
        return Err(fail("F(right) < p on the initial bracket"));
    }
    if cdf(lo) >= p {
        // Left support edge already satisfies F >= p; the infimum is the edge.
        let residual = (cdf(lo) - p).abs();
        return Ok(CdfInversion {
            x: lo,
            residual,
            flat: false,
            iterations: 0,
        });
    }

    let mut iterations = 0;
    while iterations < MAX_BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket collapsed to adjacent floats
        }
        if cdf(mid) >= p {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }

    let x = hi;
    let residual = (cdf(x) - p).abs();

    // Flatness probe: a plateau at level p means the target has several
    // preimages and x is only the infimum of them.
    let probe = 1e-6 * x.abs().max(1.0);
    let ahead = match right {
        Some(r) => (x + probe).min(r),
        None => x + probe,
    };
    let flat = ahead > x && residual <= QUANTILE_TOL && (cdf(ahead) - p).abs() <= QUANTILE_TOL;

    Ok(CdfInversion {
        x,
        residual,
        flat,
        iterations,
    })
}

const INV_GOLDEN: f64 = 0.618_033_988_749_894_9; // 1/phi

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
///
/// Returns the best `(x, f(x))` seen, including the bracket endpoints.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, max_iters: usize) -> (f64, f64) {
    debug_assert!(a <= b);
    let mut lo = a;
    let mut hi = b;
    let mut best = (a, f(a));
    let fb = f(b);
    if fb > best.1 {
        best = (b, fb);
    }

    let mut x1 = hi - INV_GOLDEN * (hi - lo);
    let mut x2 = lo + INV_GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    for _ in 0..max_iters {
        if (hi - lo).abs() <= 1e-13 * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_GOLDEN * (hi - lo);
            f1 = f(x1);
        }
        let (xc, fc) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
        if fc > best.1 {
            best = (xc, fc);
        }
    }
    best
}

/// Log-spaced grid on `[lo, hi]`, endpoints included. Requires `lo > 0`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    debug_assert!(lo > 0.0 && hi > lo && count >= 2);
    let (ll, lh) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..count)
        .map(|i| (ll + (lh - ll) * i as f64 / (count - 1) as f64).exp())
        .collect();
    g[0] = lo;
    *g.last_mut().unwrap() = hi;
    g
}

/// Uniform grid on `[lo, hi]`, endpoints included.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    debug_assert!(hi > lo && count >= 2);
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Central-difference step, scaled so truncation and roundoff balance.
pub fn fd_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Five-point second-derivative stencil.
pub fn second_diff_5pt<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

/// Least-squares slope of `ln y` against `ln x`.
///
/// Panics in debug builds when fewer than two points are supplied or any
/// coordinate is non-positive.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    debug_assert!(points.len() >= 2);
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        debug_assert!(x > 0.0 && y > 0.0);
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn invert_cdf_recovers_quantile() {
        // F(x) = x on [0, 1]
        let inv = invert_cdf(|x: f64| x.clamp(0.0, 1.0), 0.37, Some(0.0), Some(1.0), "u").unwrap();
        assert_relative_eq!(inv.x, 0.37, max_relative = 1e-14);
        assert!(inv.residual <= QUANTILE_TOL);
        assert!(!inv.flat);
    }

    #[test]
    fn invert_cdf_grows_bracket_on_unbounded_support() {
        // exponential CDF, support [0, inf)
        let cdf = |x: f64| if x <= 0.0 { 0.0 } else { -(-x).exp_m1() };
        let inv = invert_cdf(cdf, 1.0 - 1e-9, Some(0.0), None, "exp").unwrap();
        assert_relative_eq!(inv.x, -(1e-9f64.ln()) * (1.0 + 0.0), max_relative = 1e-6);
        assert!(inv.residual <= QUANTILE_TOL);
    }

    #[test]
    fn invert_cdf_flags_flat_targets() {
        // plateau at level 0.5 on [1, 2]
        let cdf = |x: f64| {
            if x < 1.0 {
                0.5 * x.max(0.0)
            } else if x <= 2.0 {
                0.5
            } else {
                (0.5 + 0.5 * (x - 2.0)).min(1.0)
            }
        };
        let inv = invert_cdf(cdf, 0.5, Some(0.0), None, "plateau").unwrap();
        assert!(inv.flat);
        assert!((inv.x - 1.0).abs() < 1e-9, "infimum expected, got {}", inv.x);
    }

    #[test]
    fn invert_cdf_rejects_bad_p() {
        assert!(invert_cdf(|x: f64| x, 0.0, Some(0.0), Some(1.0), "u").is_err());
        assert!(invert_cdf(|x: f64| x, 1.0, Some(0.0), Some(1.0), "u").is_err());
    }

    #[test]
    fn golden_finds_interior_max() {
        // x resolves only to ~sqrt(eps) on a smooth peak; the value is the
        // accurate part.
        let (x, fx) = golden_max(|x: f64| x * (-x).exp(), 0.0, 10.0, 200);
        assert_relative_eq!(x, 1.0, max_relative = 1e-6);
        assert_relative_eq!(fx, (-1.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn golden_handles_edge_max() {
        let (x, fx) = golden_max(|x: f64| -x, 2.0, 5.0, 200);
        assert_eq!(x, 2.0);
        assert_eq!(fx, -2.0);
    }

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..=6).map(|k| {
            let n = 10f64.powi(k);
            (n, 3.0 / n)
        }).collect();
        assert_relative_eq!(loglog_slope(&pts), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn stencils_match_analytic_derivatives() {
        let f = |x: f64| (2.0 * x).sin();
        let h = fd_step(0.7);
        assert_relative_eq!(central_diff(f, 0.7, h), 2.0 * (1.4f64).cos(), max_relative = 1e-9);
        assert_relative_eq!(
            second_diff_5pt(f, 0.7, h),
            -4.0 * (1.4f64).sin(),
            max_relative = 1e-4
        );
    }

    #[test]
    fn grids_hit_endpoints() {
        let g = geometric_grid(1e-3, 1e3, 100);
        assert_eq!(g[0], 1e-3);
        assert_eq!(*g.last().unwrap(), 1e3);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let l = linear_grid(-1.0, 0.0, 11);
        assert_eq!(l[0], -1.0);
        assert_eq!(*l.last().unwrap(), 0.0);
    }
}
