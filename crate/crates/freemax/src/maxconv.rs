//! The free max-convolution semigroup.
//!
//! For distribution functions the operation is pointwise:
//! `(F box-max G)(x) = max{F(x) + G(x) - 1, 0}`, and the n-fold power of a
//! single F collapses to `max{n F(x) - (n - 1), 0}`. The normalized power
//! `x -> F^{box-max n}(a_n x + b_n)` has density
//! `w_n(x) = n a_n F'(a_n x + b_n)` on the open window `(A_n, B_n)` where the
//! CDF is strictly between 0 and 1.

use crate::catalog::{pdf_of, quantile_inversion, DistributionSpec, ExtendedReal};
use crate::error::{Error, Result};
use crate::norming::NormingPair;
use crate::numerics::QUANTILE_TOL;

/// Cap on the semigroup power; far beyond this, `1 - e^{-1/n}`-style
/// quantities need more care than f64 affords.
pub const MAX_N: u64 = 1_000_000_000;

/// A normalized free max-convolution power `F^{box-max n}(a_n x + b_n)`.
#[derive(Debug, Clone)]
pub struct FreePower {
    base: DistributionSpec,
    norming: NormingPair,
}

impl FreePower {
    pub fn new(base: DistributionSpec, norming: NormingPair) -> Result<Self> {
        if norming.n == 0 || norming.n > MAX_N {
            return Err(Error::InvalidParameter {
                family: "free_power".into(),
                reason: format!("n must lie in [1, {MAX_N}], got {}", norming.n),
            });
        }
        if !(norming.a > 0.0) || !norming.a.is_finite() {
            return Err(Error::InvalidParameter {
                family: "free_power".into(),
                reason: format!("norming scale must be positive, got {}", norming.a),
            });
        }
        Ok(FreePower { base, norming })
    }

    pub fn base(&self) -> &DistributionSpec {
        &self.base
    }

    pub fn n(&self) -> u64 {
        self.norming.n
    }

    pub fn norming(&self) -> NormingPair {
        self.norming
    }

    /// Argument of the base CDF at normalized coordinate `x`.
    pub fn arg(&self, x: f64) -> f64 {
        self.norming.a * x + self.norming.b
    }

    pub fn window(&self) -> Result<SupportWindow> {
        support_window(self)
    }
}

/// Open interval `(A_n, B_n)` on which the normalized power is strictly
/// between 0 and 1; the density lives here and nowhere else.
#[derive(Debug, Clone, Copy)]
pub struct SupportWindow {
    /// `A_n = (F^{<-}(1 - 1/n) - b_n) / a_n`; `-inf` when n = 1 and the
    /// support is unbounded below.
    pub a_lower: f64,
    /// `B_n = (omega_F - b_n) / a_n`, infinite when `omega_F` is.
    pub b_upper: ExtendedReal,
}

impl SupportWindow {
    /// Strict interior test; the edges themselves are excluded.
    pub fn contains(&self, x: f64) -> bool {
        x > self.a_lower
            && match self.b_upper {
                ExtendedReal::PosInf => true,
                ExtendedReal::Finite(b) => x < b,
                ExtendedReal::NegInf => false,
            }
    }

    pub fn upper_f64(&self) -> f64 {
        self.b_upper.to_f64()
    }
}

/// `(F box-max G)(x) = max{F(x) + G(x) - 1, 0}`.
pub fn free_max_cdf(f: &DistributionSpec, g: &DistributionSpec, x: f64) -> f64 {
    (f.cdf(x) + g.cdf(x) - 1.0).max(0.0)
}

/// `F^{box-max n}(a_n x + b_n) = max{n F - (n - 1), 0}`.
///
/// Evaluated as `1 - n (1 - F)`: when F is within a few ulps of 1 the
/// subtraction `1 - F` is exact (Sterbenz) and no precision is thrown away,
/// unlike the literal `n F - (n - 1)` for large n.
pub fn free_power_cdf(fp: &FreePower, x: f64) -> f64 {
    let f = fp.base.cdf(fp.arg(x));
    if fp.n() == 1 {
        return f;
    }
    (1.0 - fp.n() as f64 * (1.0 - f)).max(0.0)
}

/// Density `w_n(x) = n a_n F'(a_n x + b_n)` of the normalized power.
///
/// Defined only strictly inside the support window; outside it this is an
/// error rather than 0, because the sup-norms of interest run over open
/// domains and the CDF has a kink at `A_n`. The product form avoids the
/// catastrophic cancellation the equivalent `phi' (-log F) F` form hits
/// when F is close to 1.
pub fn density_wn(fp: &FreePower, x: f64) -> Result<f64> {
    let window = support_window(fp)?;
    if !window.contains(x) {
        return Err(Error::OutsideWindow {
            x,
            lo: window.a_lower,
            hi: window.upper_f64(),
        });
    }
    density_wn_unchecked(fp, x)
}

/// Same as [`density_wn`] without the per-call window lookup. Callers must
/// keep `x` strictly inside the window.
pub(crate) fn density_wn_unchecked(fp: &FreePower, x: f64) -> Result<f64> {
    let t = fp.arg(x);
    Ok(fp.n() as f64 * fp.norming.a * pdf_of(&fp.base, t)?)
}

/// Computes `(A_n, B_n)` and validates that the free power CDF is 0 at the
/// lower edge and 1 at a finite upper edge, to tolerance.
pub fn support_window(fp: &FreePower) -> Result<SupportWindow> {
    let NormingPair { a, b, n, .. } = fp.norming;
    let nf = n as f64;

    let a_lower = if n == 1 {
        match fp.base.support_left() {
            ExtendedReal::Finite(l) => (l - b) / a,
            _ => f64::NEG_INFINITY,
        }
    } else {
        let inv = quantile_inversion(&fp.base, 1.0 - 1.0 / nf)?;
        (inv.x - b) / a
    };

    let b_upper = match fp.base.omega() {
        ExtendedReal::Finite(w) => ExtendedReal::Finite((w - b) / a),
        _ => ExtendedReal::PosInf,
    };

    let window = SupportWindow { a_lower, b_upper };

    // The defining identities n F - (n-1) = 0 at A_n and = 1 at B_n; the
    // residual of the quantile solve is amplified by n.
    let tol = (4.0 * nf * QUANTILE_TOL).max(1e-9);
    if a_lower.is_finite() {
        let at_lower = free_power_cdf(fp, a_lower);
        if at_lower > tol {
            return Err(Error::WindowInconsistent {
                name: fp.base.name().to_string(),
                n,
                reason: format!("free power CDF at A_n is {at_lower:e}, expected 0"),
            });
        }
    }
    if let ExtendedReal::Finite(upper) = b_upper {
        let at_upper = free_power_cdf(fp, upper);
        if (at_upper - 1.0).abs() > tol {
            return Err(Error::WindowInconsistent {
                name: fp.base.name().to_string(),
                n,
                reason: format!("free power CDF at B_n is {at_upper}, expected 1"),
            });
        }
    }
    Ok(window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, default_catalog};
    use crate::norming::Regime;
    use approx::assert_relative_eq;

    fn power(entry: &catalog::CatalogEntry, n: u64) -> FreePower {
        entry.free_power(n).unwrap()
    }

    #[test]
    fn pairwise_convolution_trivials() {
        let u = catalog::uniform01();
        assert_eq!(free_max_cdf(u.spec(), u.spec(), 0.75), 0.5);
        assert_eq!(free_max_cdf(u.spec(), u.spec(), 0.25), 0.0);
        // e^{-log 2} = 1/2, so the truncation branch is hit exactly
        let f = catalog::frechet(1.0);
        let x = 1.0 / std::f64::consts::LN_2;
        assert!(free_max_cdf(f.spec(), f.spec(), x).abs() <= 1e-15);
    }

    #[test]
    fn unit_power_is_the_base_cdf() {
        let e = catalog::frechet(2.0);
        let fp = power(&e, 1);
        for x in [0.3, 0.9, 1.7, 4.2] {
            assert_eq!(free_power_cdf(&fp, x), e.spec().cdf(fp.arg(x)));
        }
    }

    #[test]
    fn two_fold_power_equals_pairwise_convolution_exactly() {
        for entry in [catalog::uniform01(), catalog::cauchy(), catalog::gumbel()] {
            let fp = power(&entry, 2);
            for i in 0..2000 {
                let x = -4.0 + 8.0 * i as f64 / 1999.0;
                let via_power = free_power_cdf(&fp, x);
                let via_pair = free_max_cdf(entry.spec(), entry.spec(), fp.arg(x));
                assert_eq!(via_power, via_pair, "{} at x = {x}", entry.name());
            }
        }
    }

    #[test]
    fn frechet_tail_limit_via_expm1_oracle() {
        // n exp(-x^-alpha / n) - (n-1) at x = 1e6: oracle 1 - n(-expm1(-x^-a/n))
        let e = catalog::frechet(2.0);
        let n = 50u64;
        let fp = power(&e, n);
        let x = 1e6_f64;
        let oracle = 1.0 - n as f64 * -(-x.powf(-2.0) / n as f64).exp_m1();
        let got = free_power_cdf(&fp, x);
        assert_relative_eq!(got, oracle, epsilon = 1e-15);
        assert!(got >= 1.0 - 1e-6_f64.powi(2) * 1.01);
    }

    #[test]
    fn uniform_power_cdf_by_direct_substitution() {
        // F(a_n x + b_n) = 1 + a_n x for uniform01, so the power CDF at
        // x = -1/2 is n (1 - a_n/2) - (n-1) = 1 - n a_n / 2.
        let e = catalog::uniform01();
        let n = 1000u64;
        let fp = power(&e, n);
        let a = fp.norming().a;
        let expected = 1.0 - 0.5 * n as f64 * a;
        assert_relative_eq!(free_power_cdf(&fp, -0.5), expected, max_relative = 1e-13);
    }

    #[test]
    fn uniform_density_is_flat_at_n_times_scale() {
        // uniform sample: w_n = n (1 - e^{-1/n}), constant on the window
        let e = catalog::uniform01();
        let n = 1000u64;
        let fp = power(&e, n);
        let expected = n as f64 * -(-1.0 / n as f64).exp_m1();
        for x in [-0.9, -0.5, -0.1, -0.01] {
            assert_relative_eq!(density_wn(&fp, x).unwrap(), expected, max_relative = 1e-11);
        }
    }

    #[test]
    fn weibull_density_closed_form() {
        // exact Weibull sample: w_n(x) = -alpha (-x)^{-alpha-1} exp(-(-x)^{-alpha}/n)
        let alpha = -2.0;
        let e = catalog::weibull(alpha);
        let n = 500u64;
        let fp = power(&e, n);
        for x in [-0.9f64, -0.6, -0.3, -0.1] {
            let expected =
                -alpha * (-x).powf(-alpha - 1.0) * (-(-x).powf(-alpha) / n as f64).exp();
            assert_relative_eq!(density_wn(&fp, x).unwrap(), expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn unit_power_density_is_base_density() {
        let alpha = 2.0;
        let e = catalog::frechet(alpha);
        let fp = power(&e, 1);
        assert_relative_eq!(fp.norming().a, 1.0, max_relative = 1e-12);
        let x = 2.0_f64;
        let expected = alpha * x.powf(-alpha - 1.0) * (-x.powf(-alpha)).exp();
        assert_relative_eq!(density_wn(&fp, x).unwrap(), expected, max_relative = 1e-10);
    }

    #[test]
    fn density_errors_outside_window() {
        let e = catalog::uniform01();
        let fp = power(&e, 100);
        assert!(matches!(
            density_wn(&fp, 0.0),
            Err(Error::OutsideWindow { .. })
        ));
        assert!(density_wn(&fp, 5.0).is_err());
        let w = fp.window().unwrap();
        assert!(density_wn(&fp, w.a_lower - 0.1).is_err());
    }

    #[test]
    fn frechet_window_closed_form() {
        // exact Frechet sample: A_n = (-n log(1 - 1/n))^{-1/alpha}
        let alpha = 2.0;
        let e = catalog::frechet(alpha);
        for n in [10u64, 1000, 100_000] {
            let w = power(&e, n).window().unwrap();
            let nf = n as f64;
            let expected = (-nf * (1.0 - 1.0 / nf).ln()).powf(-1.0 / alpha);
            assert_relative_eq!(w.a_lower, expected, max_relative = 1e-9);
            assert_eq!(w.b_upper, ExtendedReal::PosInf);
        }
    }

    #[test]
    fn uniform_window_upper_edge_is_zero() {
        let w = power(&catalog::uniform01(), 50).window().unwrap();
        assert_eq!(w.b_upper, ExtendedReal::Finite(0.0));
        assert!(w.a_lower < -1.0);
    }

    #[test]
    fn normal_window_against_bisection_oracle() {
        let e = catalog::std_normal();
        let n = 1000u64;
        let fp = power(&e, n);
        let w = fp.window().unwrap();
        // oracle: invert Phi at 1 - 1/n with plain bisection, then map
        let target = 1.0 - 1.0 / n as f64;
        let (mut lo, mut hi) = (0.0f64, 20.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if e.spec().cdf(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let pair = fp.norming();
        assert_relative_eq!(w.a_lower, (hi - pair.b) / pair.a, max_relative = 1e-9);
        assert_eq!(w.b_upper, ExtendedReal::PosInf);
    }

    #[test]
    fn window_edge_trends_by_regime() {
        let ns = [100u64, 1_000, 10_000, 100_000];
        for entry in default_catalog() {
            let limit = match entry.regime() {
                Regime::Frechet { .. } => 1.0,
                Regime::Weibull { .. } => -1.0,
                Regime::Gumbel => 0.0,
            };
            let mut prev = f64::INFINITY;
            for &n in &ns {
                let w = power(&entry, n).window().unwrap();
                let gap = (w.a_lower - limit).abs();
                assert!(
                    gap <= prev + 1e-12,
                    "{}: |A_n - {limit}| not shrinking at n = {n}",
                    entry.name()
                );
                prev = gap;
            }
            let w = power(&entry, *ns.last().unwrap()).window().unwrap();
            assert!((w.a_lower - limit).abs() < 0.05, "{}", entry.name());
        }
    }

    #[test]
    fn power_cdf_is_a_valid_cdf_on_the_window() {
        for entry in default_catalog() {
            let fp = power(&entry, 200);
            let w = fp.window().unwrap();
            let lo = if w.a_lower.is_finite() { w.a_lower } else { -40.0 };
            let hi = match w.b_upper {
                ExtendedReal::Finite(b) => b,
                _ => 40.0,
            };
            let mut prev = -1e-15;
            for i in 0..=400 {
                let x = lo + (hi - lo) * i as f64 / 400.0;
                let c = free_power_cdf(&fp, x);
                assert!((0.0..=1.0).contains(&c));
                assert!(c >= prev - 1e-12, "{} at x = {x}", entry.name());
                prev = c;
            }
            if w.a_lower.is_finite() {
                assert!(free_power_cdf(&fp, w.a_lower) <= 1e-9);
            }
            if let ExtendedReal::Finite(b) = w.b_upper {
                assert!((free_power_cdf(&fp, b) - 1.0).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn density_matches_cdf_derivative() {
        for entry in default_catalog() {
            let fp = power(&entry, 100);
            let w = fp.window().unwrap();
            let (lo, hi) = match entry.regime() {
                Regime::Frechet { .. } => (1.01, 8.0),
                Regime::Weibull { .. } => (-0.95, -0.05),
                Regime::Gumbel => (0.05, 4.0),
            };
            assert!(w.contains(lo) && w.contains(hi));
            for i in 0..=60 {
                let x = lo + (hi - lo) * i as f64 / 60.0;
                let h = crate::numerics::fd_step(x);
                let fd = crate::numerics::central_diff(|t| free_power_cdf(&fp, t), x, h);
                let wn = density_wn(&fp, x).unwrap();
                if wn.abs() < 1e-8 {
                    continue;
                }
                assert_relative_eq!(fd, wn, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn n_cap_is_enforced() {
        let e = catalog::uniform01();
        let mut pair = e.norming(10).unwrap();
        pair.n = MAX_N + 1;
        assert!(FreePower::new(e.spec().clone(), pair).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn pairwise_convolution_is_a_cdf_value(x1 in -30.0..30.0f64, dx in 0.0..10.0f64) {
                let c = catalog::cauchy();
                let g = catalog::gumbel();
                let v1 = free_max_cdf(c.spec(), g.spec(), x1);
                let v2 = free_max_cdf(c.spec(), g.spec(), x1 + dx);
                prop_assert!((0.0..=1.0).contains(&v1));
                prop_assert!(v2 >= v1);
            }

            #[test]
            fn power_cdf_monotone_in_x_and_n(
                exp in 1u32..6,
                x in -5.0..20.0f64,
                dx in 0.0..5.0f64,
            ) {
                let e = catalog::cauchy();
                let n = 10u64.pow(exp);
                let fp = e.free_power(n).unwrap();
                let v1 = free_power_cdf(&fp, x);
                let v2 = free_power_cdf(&fp, x + dx);
                prop_assert!((0.0..=1.0).contains(&v1));
                prop_assert!(v2 >= v1);
                // more convolution factors push mass to the right
                let fp10 = e.free_power(n * 10).unwrap();
                let arg = fp.arg(x);
                let same_point = (arg - fp10.norming().b) / fp10.norming().a;
                prop_assert!(free_power_cdf(&fp10, same_point) <= v1 + 1e-12);
            }
        }
    }
}
