//! Regime-specific norming sequences (a_n, b_n).
//!
//! All three regimes pin the same defining level `e^{-1/n}`:
//!
//! * Frechet: `a_n = F^{<-}(e^{-1/n})`, `b_n = 0` (needs `omega_F = inf`);
//! * Weibull: `a_n = omega_F - F^{<-}(e^{-1/n})`, `b_n = omega_F`;
//! * Gumbel:  `b_n = F^{<-}(e^{-1/n})`, `a_n = F(b_n) / (n F'(b_n))`, the
//!   auxiliary function `1/phi'` evaluated at `b_n`.
//!
//! The target is always located by the generic bracketing solver, even when
//! the spec carries an analytic quantile; the closed forms from the catalog
//! then serve as independent oracles in the tests.

use crate::catalog::{pdf_of, quantile_inversion, DistributionSpec, ExtendedReal};
use crate::error::{Error, Result};
use crate::numerics::{CdfInversion, QUANTILE_TOL};

/// Limit regime of the free extreme value law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Frechet { alpha: f64 },
    Weibull { alpha: f64 },
    Gumbel,
}

impl Regime {
    pub fn frechet(alpha: f64) -> Result<Self> {
        if alpha > 0.0 {
            Ok(Regime::Frechet { alpha })
        } else {
            Err(Error::InvalidParameter {
                family: "regime".into(),
                reason: format!("Frechet regime needs alpha > 0, got {alpha}"),
            })
        }
    }

    pub fn weibull(alpha: f64) -> Result<Self> {
        if alpha < 0.0 {
            Ok(Regime::Weibull { alpha })
        } else {
            Err(Error::InvalidParameter {
                family: "regime".into(),
                reason: format!("Weibull regime needs alpha < 0, got {alpha}"),
            })
        }
    }

    /// Tail index; 0 in the Gumbel regime.
    pub fn alpha(&self) -> f64 {
        match self {
            Regime::Frechet { alpha } | Regime::Weibull { alpha } => *alpha,
            Regime::Gumbel => 0.0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::Frechet { .. } => "Frechet",
            Regime::Weibull { .. } => "Weibull",
            Regime::Gumbel => "Gumbel",
        }
    }

    /// Domain over which the density sup-norm is taken: (1, inf), (-1, 0)
    /// or (0, inf).
    pub fn sup_domain(&self) -> (f64, f64) {
        match self {
            Regime::Frechet { .. } => (1.0, f64::INFINITY),
            Regime::Weibull { .. } => (-1.0, 0.0),
            Regime::Gumbel => (0.0, f64::INFINITY),
        }
    }
}

/// Scale/shift pair solving the defining equation at level `e^{-1/n}`,
/// with the achieved residual on CDF values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormingPair {
    pub a: f64,
    pub b: f64,
    pub n: u64,
    pub residual: f64,
}

/// `e^{-1/n}`, the level every norming equation pins.
pub fn target_level(n: u64) -> f64 {
    (-1.0 / n as f64).exp()
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            family: "norming".into(),
            reason: "n must be >= 1".into(),
        });
    }
    Ok(())
}

fn solve_level(spec: &DistributionSpec, n: u64) -> Result<CdfInversion> {
    let inv = quantile_inversion(spec, target_level(n))?;
    if inv.residual > QUANTILE_TOL {
        return Err(Error::QuantileResidual {
            name: spec.name().to_string(),
            residual: inv.residual,
        });
    }
    Ok(inv)
}

/// Frechet-regime norming: `a_n = F^{<-}(e^{-1/n})`, `b_n = 0`.
pub fn norming_frechet(spec: &DistributionSpec, n: u64) -> Result<NormingPair> {
    check_n(n)?;
    if spec.omega().is_finite() {
        return Err(Error::WrongRegime {
            op: "norming_frechet",
            expected: "Frechet",
            found: "finite right endpoint",
            name: spec.name().to_string(),
        });
    }
    let inv = solve_level(spec, n)?;
    Ok(NormingPair {
        a: inv.x,
        b: 0.0,
        n,
        residual: inv.residual,
    })
}

/// Weibull-regime norming: `a_n = omega_F - F^{<-}(e^{-1/n})`,
/// `b_n = omega_F`.
pub fn norming_weibull(spec: &DistributionSpec, n: u64) -> Result<NormingPair> {
    check_n(n)?;
    let omega = match spec.omega() {
        ExtendedReal::Finite(w) => w,
        _ => {
            return Err(Error::WrongRegime {
                op: "norming_weibull",
                expected: "Weibull",
                found: "infinite right endpoint",
                name: spec.name().to_string(),
            })
        }
    };
    let inv = solve_level(spec, n)?;
    Ok(NormingPair {
        a: omega - inv.x,
        b: omega,
        n,
        residual: inv.residual,
    })
}

/// Gumbel-regime norming: `b_n` solves `F(b_n) = e^{-1/n}` and
/// `a_n = F(b_n) / (n F'(b_n))`.
///
/// When the density comes from the numeric fallback the residual also
/// carries an estimate of the differentiation error on `a_n`, since the
/// rate comparisons need `a_n` accurate to `o(g(b_n))`.
pub fn norming_gumbel(spec: &DistributionSpec, n: u64) -> Result<NormingPair> {
    check_n(n)?;
    let inv = solve_level(spec, n)?;
    let b = inv.x;
    let fprime = pdf_of(spec, b)?;
    if !(fprime > 0.0) || !fprime.is_finite() {
        return Err(Error::VonMisesViolated {
            name: spec.name().to_string(),
            reason: format!("F'(b_n) = {fprime} at b_n = {b}"),
        });
    }
    let fb = spec.cdf(b);
    let a = fb / (n as f64 * fprime);
    let mut residual = inv.residual;
    if !spec.has_pdf() {
        // central-difference noise on F', propagated to a_n
        let h = crate::numerics::fd_step(b);
        residual += a * (f64::EPSILON * fb / h) / fprime;
    }
    Ok(NormingPair { a, b, n, residual })
}

/// Dispatch by regime.
pub fn norming_for(spec: &DistributionSpec, regime: Regime, n: u64) -> Result<NormingPair> {
    match regime {
        Regime::Frechet { .. } => norming_frechet(spec, n),
        Regime::Weibull { .. } => norming_weibull(spec, n),
        Regime::Gumbel => norming_gumbel(spec, n),
    }
}
