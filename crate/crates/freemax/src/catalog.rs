//! Distribution-function abstraction and the built-in sample catalog.
//!
//! A [`DistributionSpec`] is a CDF together with whatever analytic extras are
//! available: density `F'`, second derivative `F''` (needed only by the
//! Gumbel-regime von Mises functional), quantile `F^{<-}`, and the support
//! edges. The right endpoint `omega_F = sup {x : F(x) < 1}` is an explicit
//! extended real, never a large float, because regime logic branches on its
//! finiteness.
//!
//! [`builtin`] constructs the nine catalog families; [`default_catalog`]
//! returns one canonical entry per family.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::norming::Regime;
use crate::numerics::{self, CdfInversion};

/// Extended real line, used for support edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(*v),
            _ => None,
        }
    }

    /// Collapses to `f64`, mapping the infinite tags to IEEE infinities.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(v) => *v,
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => write!(f, "-inf"),
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInf => write!(f, "inf"),
        }
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A sample distribution function with optional analytic extras.
#[derive(Clone)]
pub struct DistributionSpec {
    name: String,
    cdf: RealFn,
    pdf: Option<RealFn>,
    pdf2: Option<RealFn>,
    quantile: Option<RealFn>,
    support_left: ExtendedReal,
    omega: ExtendedReal,
}

impl fmt::Debug for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistributionSpec")
            .field("name", &self.name)
            .field("support_left", &self.support_left)
            .field("omega", &self.omega)
            .field("pdf", &self.pdf.is_some())
            .field("pdf2", &self.pdf2.is_some())
            .field("quantile", &self.quantile.is_some())
            .finish()
    }
}

impl DistributionSpec {
    pub fn new(
        name: impl Into<String>,
        cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support_left: ExtendedReal,
        omega: ExtendedReal,
    ) -> Self {
        DistributionSpec {
            name: name.into(),
            cdf: Arc::new(cdf),
            pdf: None,
            pdf2: None,
            quantile: None,
            support_left,
            omega,
        }
    }

    pub fn with_pdf(mut self, pdf: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.pdf = Some(Arc::new(pdf));
        self
    }

    pub fn with_pdf2(mut self, pdf2: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.pdf2 = Some(Arc::new(pdf2));
        self
    }

    pub fn with_quantile(mut self, quantile: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.quantile = Some(Arc::new(quantile));
        self
    }

    /// Drops the analytic density, forcing the numeric fallback. Test hook.
    pub fn without_pdf(mut self) -> Self {
        self.pdf = None;
        self.pdf2 = None;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cdf(&self, x: f64) -> f64 {
        (self.cdf)(x)
    }

    pub fn support_left(&self) -> ExtendedReal {
        self.support_left
    }

    pub fn omega(&self) -> ExtendedReal {
        self.omega
    }

    pub fn has_pdf(&self) -> bool {
        self.pdf.is_some()
    }

    pub fn has_pdf2(&self) -> bool {
        self.pdf2.is_some()
    }

    pub fn has_quantile(&self) -> bool {
        self.quantile.is_some()
    }

    pub(crate) fn analytic_quantile(&self, p: f64) -> Option<f64> {
        self.quantile.as_ref().map(|q| q(p))
    }

    /// True when `x` lies strictly between the support edges.
    pub fn is_interior(&self, x: f64) -> bool {
        let above = match self.support_left {
            ExtendedReal::NegInf => true,
            ExtendedReal::Finite(l) => x > l,
            ExtendedReal::PosInf => false,
        };
        let below = match self.omega {
            ExtendedReal::PosInf => true,
            ExtendedReal::Finite(r) => x < r,
            ExtendedReal::NegInf => false,
        };
        above && below
    }
}

/// `F^{<-}(p) = inf {x : F(x) >= p}`.
///
/// Uses the analytic quantile when the spec carries one, otherwise inverts
/// the CDF by bracketing bisection to [`numerics::QUANTILE_TOL`].
pub fn quantile_of(spec: &DistributionSpec, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    if let Some(x) = spec.analytic_quantile(p) {
        return Ok(x);
    }
    Ok(quantile_inversion(spec, p)?.x)
}

/// The generic solver path, bypassing any analytic quantile.
///
/// Norming always goes through here so the bisection machinery is exercised
/// on every catalog entry; the closed forms then act as test oracles.
pub fn quantile_inversion(spec: &DistributionSpec, p: f64) -> Result<CdfInversion> {
    let cdf = spec.cdf.clone();
    numerics::invert_cdf(
        move |x| cdf(x),
        p,
        spec.support_left.finite(),
        spec.omega.finite(),
        &spec.name,
    )
}

/// `F'(x)`: analytic density when present, else a central difference with
/// step `cbrt(eps) * max(1, |x|)`.
pub fn pdf_of(spec: &DistributionSpec, x: f64) -> Result<f64> {
    if !spec.is_interior(x) {
        return Err(Error::OutOfSupport {
            name: spec.name.clone(),
            x,
        });
    }
    if let Some(pdf) = &spec.pdf {
        return Ok(pdf(x));
    }
    let h = numerics::fd_step(x);
    Ok(numerics::central_diff(|t| spec.cdf(t), x, h))
}

/// `F''(x)`: analytic when present, else a five-point stencil on the CDF.
pub fn pdf2_of(spec: &DistributionSpec, x: f64) -> Result<f64> {
    if !spec.is_interior(x) {
        return Err(Error::OutOfSupport {
            name: spec.name.clone(),
            x,
        });
    }
    if let Some(pdf2) = &spec.pdf2 {
        return Ok(pdf2(x));
    }
    let h = numerics::fd_step(x);
    Ok(numerics::second_diff_5pt(|t| spec.cdf(t), x, h))
}

/// A catalog member: the spec, its limit regime, and (when the family has a
/// closed form) the certified envelope `g` dominating `|h_alpha|`.
#[derive(Clone)]
pub struct CatalogEntry {
    spec: DistributionSpec,
    regime: Regime,
    envelope: Option<RealFn>,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("spec", &self.spec)
            .field("regime", &self.regime)
            .field("envelope", &self.envelope.is_some())
            .finish()
    }
}

impl CatalogEntry {
    pub fn new(spec: DistributionSpec, regime: Regime) -> Self {
        CatalogEntry {
            spec,
            regime,
            envelope: None,
        }
    }

    pub fn with_envelope(mut self, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.envelope = Some(Arc::new(g));
        self
    }

    /// Drops the closed-form envelope. Test hook for the auto-envelope path.
    pub fn without_envelope(mut self) -> Self {
        self.envelope = None;
        self
    }

    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Tail index of the limit law (0 in the Gumbel regime).
    pub fn alpha(&self) -> f64 {
        self.regime.alpha()
    }

    pub fn name(&self) -> &str {
        self.spec.name()
    }

    pub fn has_envelope(&self) -> bool {
        self.envelope.is_some()
    }

    pub fn envelope_value(&self, x: f64) -> Option<f64> {
        self.envelope.as_ref().map(|g| g(x))
    }

    /// Norming pair for this entry's regime.
    pub fn norming(&self, n: u64) -> Result<crate::norming::NormingPair> {
        crate::norming::norming_for(&self.spec, self.regime, n)
    }

    /// The normalized free power `F^{box-max n}(a_n x + b_n)`.
    pub fn free_power(&self, n: u64) -> Result<crate::maxconv::FreePower> {
        let norming = self.norming(n)?;
        crate::maxconv::FreePower::new(self.spec.clone(), norming)
    }

    /// Envelope evaluated at the regime's norming point: `g(a_n)` (Frechet),
    /// `g(omega_F - a_n)` (Weibull) or `g(b_n)` (Gumbel).
    pub fn envelope_at_norming(&self, pair: &crate::norming::NormingPair) -> Option<f64> {
        let point = match self.regime {
            Regime::Frechet { .. } => pair.a,
            Regime::Weibull { .. } => self.spec.omega().to_f64() - pair.a,
            Regime::Gumbel => pair.b,
        };
        self.envelope_value(point)
    }
}

/// Identifiers accepted by [`builtin`] and the CLI.
pub const BUILTIN_NAMES: [&str; 9] = [
    "frechet",
    "log_logistic",
    "cauchy",
    "weibull",
    "endpoint_power",
    "uniform01",
    "gumbel",
    "stretched_gumbel",
    "std_normal",
];

fn invalid(family: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        family: family.to_string(),
        reason: reason.into(),
    }
}

fn expect_params(family: &str, params: &[f64], count: usize) -> Result<()> {
    if params.len() != count {
        return Err(invalid(
            family,
            format!("expected {count} parameter(s), got {}", params.len()),
        ));
    }
    Ok(())
}

/// Builds a catalog entry by family name.
///
/// Parameter conventions: `frechet [alpha>0]`, `log_logistic [alpha>0]`,
/// `cauchy []`, `weibull [alpha<0]`, `endpoint_power [K>0, alpha<-1, omega]`,
/// `uniform01 []`, `gumbel []`, `stretched_gumbel [alpha>0, alpha != 1]`,
/// `std_normal []`.
pub fn builtin(name: &str, params: &[f64]) -> Result<CatalogEntry> {
    match name {
        "frechet" => {
            expect_params(name, params, 1)?;
            let alpha = params[0];
            if !(alpha > 0.0) || !alpha.is_finite() {
                return Err(invalid(name, format!("alpha must be > 0, got {alpha}")));
            }
            Ok(frechet(alpha))
        }
        "log_logistic" => {
            expect_params(name, params, 1)?;
            let alpha = params[0];
            if !(alpha > 0.0) || !alpha.is_finite() {
                return Err(invalid(name, format!("alpha must be > 0, got {alpha}")));
            }
            Ok(log_logistic(alpha))
        }
        "cauchy" => {
            expect_params(name, params, 0)?;
            Ok(cauchy())
        }
        "weibull" => {
            expect_params(name, params, 1)?;
            let alpha = params[0];
            if !(alpha < 0.0) || !alpha.is_finite() {
                return Err(invalid(name, format!("alpha must be < 0, got {alpha}")));
            }
            Ok(weibull(alpha))
        }
        "endpoint_power" => {
            expect_params(name, params, 3)?;
            let (k, alpha, omega) = (params[0], params[1], params[2]);
            if !(k > 0.0) || !k.is_finite() {
                return Err(invalid(name, format!("K must be > 0, got {k}")));
            }
            if !(alpha < -1.0) || !alpha.is_finite() {
                return Err(invalid(name, format!("alpha must be < -1, got {alpha}")));
            }
            if !omega.is_finite() {
                return Err(invalid(name, format!("omega must be finite, got {omega}")));
            }
            Ok(endpoint_power(k, alpha, omega))
        }
        "uniform01" => {
            expect_params(name, params, 0)?;
            Ok(uniform01())
        }
        "gumbel" => {
            expect_params(name, params, 0)?;
            Ok(gumbel())
        }
        "stretched_gumbel" => {
            expect_params(name, params, 1)?;
            let alpha = params[0];
            if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
                return Err(invalid(
                    name,
                    format!("alpha must be > 0 and != 1, got {alpha}"),
                ));
            }
            Ok(stretched_gumbel(alpha))
        }
        "std_normal" => {
            expect_params(name, params, 0)?;
            Ok(std_normal())
        }
        other => Err(Error::UnknownDistribution(other.to_string())),
    }
}

/// One canonical entry per family, in catalog order.
pub fn default_catalog() -> Vec<CatalogEntry> {
    vec![
        frechet(2.0),
        log_logistic(2.0),
        cauchy(),
        weibull(-2.0),
        endpoint_power(1.0, -2.0, 1.0),
        uniform01(),
        gumbel(),
        stretched_gumbel(2.0),
        std_normal(),
    ]
}

/// Frechet sample `F(x) = exp(-x^-alpha)` on `x > 0`. Here `h_alpha = 0`, so
/// the zero envelope certifies membership.
pub fn frechet(alpha: f64) -> CatalogEntry {
    let spec = DistributionSpec::new(
        format!("frechet({alpha})"),
        move |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                (-x.powf(-alpha)).exp()
            }
        },
        ExtendedReal::Finite(0.0),
        ExtendedReal::PosInf,
    )
    .with_pdf(move |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            alpha * x.powf(-alpha - 1.0) * (-x.powf(-alpha)).exp()
        }
    })
    .with_quantile(move |p: f64| (-p.ln()).powf(-1.0 / alpha));
    CatalogEntry::new(spec, Regime::Frechet { alpha }).with_envelope(|_| 0.0)
}

/// Log-logistic sample `F(x) = 1 - (1 + x^alpha)^-1` on `x > 0`, with the
/// closed envelope `g(x) = alpha / (1 + x^alpha)`.
pub fn log_logistic(alpha: f64) -> CatalogEntry {
    let spec = DistributionSpec::new(
        format!("log_logistic({alpha})"),
        move |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                1.0 - 1.0 / (1.0 + x.powf(alpha))
            }
        },
        ExtendedReal::Finite(0.0),
        ExtendedReal::PosInf,
    )
    .with_pdf(move |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            let d = 1.0 + x.powf(alpha);
            alpha * x.powf(alpha - 1.0) / (d * d)
        }
    })
    .with_quantile(move |p: f64| (p / (1.0 - p)).powf(1.0 / alpha));
    CatalogEntry::new(spec, Regime::Frechet { alpha })
        .with_envelope(move |x: f64| alpha / (1.0 + x.powf(alpha)))
}

/// Standard Cauchy sample, tail index 1. The envelope is the closed form
/// `g(x) = 1 - x / (pi (1 + x^2) (-log F(x)))` valid on `x > 0`.
pub fn cauchy() -> CatalogEntry {
    let cdf = |x: f64| 0.5 + x.atan() / PI;
    let spec = DistributionSpec::new("cauchy", cdf, ExtendedReal::NegInf, ExtendedReal::PosInf)
        .with_pdf(|x: f64| 1.0 / (PI * (1.0 + x * x)))
        .with_quantile(|p: f64| (PI * (p - 0.5)).tan());
    CatalogEntry::new(spec, Regime::Frechet { alpha: 1.0 })
        .with_envelope(move |x: f64| 1.0 - x / (PI * (1.0 + x * x) * (-cdf(x).ln())))
}

/// Free-Weibull sample `F(x) = exp(-(-x)^-alpha)` on `x < 0` with
/// `omega_F = 0`; `h_alpha = 0`.
pub fn weibull(alpha: f64) -> CatalogEntry {
    let spec = DistributionSpec::new(
        format!("weibull({alpha})"),
        move |x: f64| {
            if x >= 0.0 {
                1.0
            } else {
                (-(-x).powf(-alpha)).exp()
            }
        },
        ExtendedReal::NegInf,
        ExtendedReal::Finite(0.0),
    )
    .with_pdf(move |x: f64| {
        if x >= 0.0 {
            0.0
        } else {
            -alpha * (-x).powf(-alpha - 1.0) * (-(-x).powf(-alpha)).exp()
        }
    })
    .with_quantile(move |p: f64| -(-p.ln()).powf(-1.0 / alpha));
    CatalogEntry::new(spec, Regime::Weibull { alpha }).with_envelope(|_| 0.0)
}

/// Finite-endpoint sample with `1 - F(x) = K (omega - x)^-alpha` near the
/// right endpoint, for `alpha < -1`. The envelope is `|h_alpha|` itself.
pub fn endpoint_power(k: f64, alpha: f64, omega: f64) -> CatalogEntry {
    let edge = omega - k.powf(-1.0 / alpha);
    let name = format!("endpoint_power(K={k}, alpha={alpha}, omega={omega})");
    let spec = DistributionSpec::new(
        name,
        move |x: f64| {
            if x <= edge {
                0.0
            } else if x >= omega {
                1.0
            } else {
                1.0 - k * (omega - x).powf(-alpha)
            }
        },
        ExtendedReal::Finite(edge),
        ExtendedReal::Finite(omega),
    )
    .with_pdf(move |x: f64| {
        if x <= edge || x >= omega {
            0.0
        } else {
            -k * alpha * (omega - x).powf(-alpha - 1.0)
        }
    })
    .with_quantile(move |p: f64| omega - ((1.0 - p) / k).powf(-1.0 / alpha));
    CatalogEntry::new(spec, Regime::Weibull { alpha }).with_envelope(move |x: f64| {
        // |h_alpha| with u = K (omega - x)^-alpha; u -> 0 at the endpoint and
        // u/((1-u)(-log(1-u))) decreases to 1 there, so this is nonincreasing.
        let u = k * (omega - x).powf(-alpha);
        let ratio = u / ((1.0 - u) * -(-u).ln_1p());
        (-alpha) * (ratio - 1.0)
    })
}

/// Uniform sample on `[0, 1]`; Weibull regime with tail index -1 and the
/// closed envelope `g(x) = (1 - x)/(x (-log x)) - 1`.
pub fn uniform01() -> CatalogEntry {
    let spec = DistributionSpec::new(
        "uniform01",
        |x: f64| x.clamp(0.0, 1.0),
        ExtendedReal::Finite(0.0),
        ExtendedReal::Finite(1.0),
    )
    .with_pdf(|x: f64| if x > 0.0 && x < 1.0 { 1.0 } else { 0.0 })
    .with_quantile(|p: f64| p);
    CatalogEntry::new(spec, Regime::Weibull { alpha: -1.0 })
        .with_envelope(|x: f64| (1.0 - x) / (x * -x.ln()) - 1.0)
}

/// Classical Gumbel sample `F(x) = exp(-e^-x)`; `h_0 = 0`.
pub fn gumbel() -> CatalogEntry {
    let spec = DistributionSpec::new(
        "gumbel",
        |x: f64| (-(-x).exp()).exp(),
        ExtendedReal::NegInf,
        ExtendedReal::PosInf,
    )
    .with_pdf(|x: f64| (-x).exp() * (-(-x).exp()).exp())
    .with_pdf2(|x: f64| {
        let e = (-x).exp();
        e * (-e).exp() * (e - 1.0)
    })
    .with_quantile(|p: f64| -(-p.ln()).ln());
    CatalogEntry::new(spec, Regime::Gumbel).with_envelope(|_| 0.0)
}

/// Gumbel-regime sample `F(x) = exp(-e^{-x^alpha})` for `alpha > 0`,
/// `alpha != 1`, extended to `x < 0` by the odd continuation of `x^alpha`
/// so the CDF is a genuine distribution function on all of R.
pub fn stretched_gumbel(alpha: f64) -> CatalogEntry {
    let s = move |x: f64| x.signum() * x.abs().powf(alpha);
    let s1 = move |x: f64| alpha * x.abs().powf(alpha - 1.0);
    let s2 = move |x: f64| x.signum() * alpha * (alpha - 1.0) * x.abs().powf(alpha - 2.0);
    let cdf = move |x: f64| (-(-s(x)).exp()).exp();
    let spec = DistributionSpec::new(
        format!("stretched_gumbel({alpha})"),
        cdf,
        ExtendedReal::NegInf,
        ExtendedReal::PosInf,
    )
    .with_pdf(move |x: f64| s1(x) * (-s(x)).exp() * cdf(x))
    .with_pdf2(move |x: f64| {
        let u = (-s(x)).exp();
        let d1 = s1(x);
        cdf(x) * u * (s2(x) - d1 * d1 * (1.0 - u))
    })
    .with_quantile(move |p: f64| {
        let t = -(-p.ln()).ln();
        t.signum() * t.abs().powf(1.0 / alpha)
    });
    CatalogEntry::new(spec, Regime::Gumbel).with_envelope(move |x: f64| {
        if x <= 0.0 {
            f64::INFINITY
        } else {
            (1.0 - 1.0 / alpha).abs() * x.powf(-alpha)
        }
    })
}

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Upper tail `1 - Phi(x)`, evaluated to full erfc accuracy.
fn normal_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Standard normal sample. The CDF rides on `erfc`, which keeps the deep
/// right tail fully accurate; the norming probes `F(b_n) = e^{-1/n}` there.
///
/// The envelope is `|h_0|` itself: `1 + log F (1 + x/p)` undershoots `|h_0|`
/// by `(-log F) x (1 - F)/p`, which is positive for every x > 0 (about 1/n
/// at the norming point), so it cannot dominate. `|h_0|` is nonincreasing
/// here and shares the `O((log n)^{-1/2})` decay at `b_n`.
pub fn std_normal() -> CatalogEntry {
    let spec = DistributionSpec::new(
        "std_normal",
        normal_cdf,
        ExtendedReal::NegInf,
        ExtendedReal::PosInf,
    )
    .with_pdf(normal_pdf)
    .with_pdf2(|x: f64| -x * normal_pdf(x));
    CatalogEntry::new(spec, Regime::Gumbel).with_envelope(|x: f64| {
        // log F via log1p of the erfc tail so nothing is lost when F is
        // within a few ulps of 1
        let tail = normal_tail(x);
        let neg_log_f = -(-tail).ln_1p();
        (neg_log_f * (1.0 + x * (1.0 - tail) / normal_pdf(x)) - 1.0).abs()
    })
}
