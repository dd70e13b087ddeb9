//! Von Mises functionals `h_alpha`, the auxiliary function `f = 1/phi'`,
//! and envelope verification.
//!
//! Writing `F = exp{-e^{-phi}}`, the functionals are
//!
//! * Frechet: `h_alpha(x) = x phi'(x) - alpha`,
//! * Weibull: `h_alpha(x) = (omega_F - x) phi'(x) + alpha`,
//! * Gumbel:  `h_0(x) = (1/phi')'(x)
//!            = -log F - (F F'' (-log F)/(F')^2 + 1)`,
//!
//! with `phi' = F' / (F (-log F))`. Membership in the class F_alpha asks for
//! a nonincreasing envelope `g -> 0` at the right endpoint with `|h| <= g`.

use crate::catalog::{pdf2_of, pdf_of, CatalogEntry, DistributionSpec, ExtendedReal};
use crate::error::{Error, Result};
use crate::norming::Regime;

fn cdf_strictly_inside(spec: &DistributionSpec, x: f64, what: &'static str) -> Result<f64> {
    let f = spec.cdf(x);
    if f <= 0.0 || f >= 1.0 {
        return Err(Error::FunctionalUndefined { what, x });
    }
    Ok(f)
}

/// `x phi'(x) - alpha` for the Frechet regime (`alpha > 0`).
pub fn h_frechet(spec: &DistributionSpec, alpha: f64, x: f64) -> Result<f64> {
    let f = cdf_strictly_inside(spec, x, "h_frechet")?;
    let fp = pdf_of(spec, x)?;
    Ok(x * fp / (f * -f.ln()) - alpha)
}

/// `(omega_F - x) phi'(x) + alpha` for the Weibull regime (`alpha < 0`).
pub fn h_weibull(spec: &DistributionSpec, alpha: f64, x: f64) -> Result<f64> {
    let omega = spec.omega().finite().ok_or(Error::WrongRegime {
        op: "h_weibull",
        expected: "Weibull",
        found: "infinite right endpoint",
        name: spec.name().to_string(),
    })?;
    let f = cdf_strictly_inside(spec, x, "h_weibull")?;
    let fp = pdf_of(spec, x)?;
    Ok((omega - x) * fp / (f * -f.ln()) + alpha)
}

/// `h_0(x) = f'(x)` where `f = 1/phi'` is the auxiliary function.
pub fn h_gumbel(spec: &DistributionSpec, x: f64) -> Result<f64> {
    let f = cdf_strictly_inside(spec, x, "h_gumbel")?;
    let fp = pdf_of(spec, x)?;
    if !(fp > 0.0) {
        return Err(Error::VonMisesViolated {
            name: spec.name().to_string(),
            reason: format!("F'(x) = {fp} at x = {x}"),
        });
    }
    let fpp = pdf2_of(spec, x)?;
    let neg_log_f = -f.ln();
    Ok(neg_log_f - (f * fpp * neg_log_f / (fp * fp) + 1.0))
}

/// Auxiliary function `f(x) = 1/phi'(x) = F (-log F) / F'`.
pub fn auxiliary_f(spec: &DistributionSpec, x: f64) -> Result<f64> {
    let f = cdf_strictly_inside(spec, x, "auxiliary_f")?;
    let fp = pdf_of(spec, x)?;
    if !(fp > 0.0) {
        return Err(Error::VonMisesViolated {
            name: spec.name().to_string(),
            reason: format!("F'(x) = {fp} at x = {x}"),
        });
    }
    Ok(f * -f.ln() / fp)
}

/// Regime dispatch for the catalog entry's own functional.
pub fn h_for(entry: &CatalogEntry, x: f64) -> Result<f64> {
    match entry.regime() {
        Regime::Frechet { alpha } => h_frechet(entry.spec(), alpha, x),
        Regime::Weibull { alpha } => h_weibull(entry.spec(), alpha, x),
        Regime::Gumbel => h_gumbel(entry.spec(), x),
    }
}

/// The reflection `F_*(y) = F(omega_F - 1/y)` mapping a finite-endpoint
/// sample to a Frechet-regime one. Since
/// `h_beta^*(y) = h_alpha(omega_F - 1/y)` with `beta = -alpha`, this is
/// what reduces the finite-endpoint analysis to the heavy-tail one.
pub fn reflect_at_omega(spec: &DistributionSpec) -> Result<DistributionSpec> {
    let omega = spec.omega().finite().ok_or(Error::WrongRegime {
        op: "reflect_at_omega",
        expected: "Weibull",
        found: "infinite right endpoint",
        name: spec.name().to_string(),
    })?;
    let left = match spec.support_left() {
        ExtendedReal::Finite(s) => ExtendedReal::Finite(1.0 / (omega - s)),
        _ => ExtendedReal::Finite(0.0),
    };
    let inner = spec.clone();
    let inner_pdf = spec.clone();
    let reflected = DistributionSpec::new(
        format!("{}_reflected", spec.name()),
        move |y: f64| {
            if y <= 0.0 {
                0.0
            } else {
                inner.cdf(omega - 1.0 / y)
            }
        },
        left,
        ExtendedReal::PosInf,
    )
    .with_pdf(move |y: f64| {
        if y <= 0.0 {
            return 0.0;
        }
        match pdf_of(&inner_pdf, omega - 1.0 / y) {
            Ok(d) => d / (y * y),
            Err(_) => 0.0,
        }
    });
    Ok(reflected)
}

/// Envelope diagnostics for one entry over sampled grids.
#[derive(Debug, Clone)]
pub struct VonMisesReport {
    pub regime: Regime,
    /// `(x, h(x))` samples.
    pub h_values: Vec<(f64, f64)>,
    /// `(x, g(x))` samples.
    pub envelope_values: Vec<(f64, f64)>,
    /// `g` at the norming point for each requested n: `g(a_n)`,
    /// `g(omega_F - a_n)` or `g(b_n)` depending on the regime.
    pub envelope_at_norm: Vec<(u64, f64)>,
    /// Envelope nonincreasing along the sampled grid.
    pub monotone_ok: bool,
    /// `|h| <= g + 1e-12` at every sampled point.
    pub domination_ok: bool,
    /// False when the envelope was auto-built as a running maximum of |h|;
    /// grid sampling cannot prove domination off-grid.
    pub envelope_certified: bool,
}

impl VonMisesReport {
    /// CSV rows `x,h,g` with a header, machine precision.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,h,g")?;
        for (&(x, h), &(_, g)) in self.h_values.iter().zip(&self.envelope_values) {
            writeln!(w, "{x:.16e},{h:.16e},{g:.16e}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "regime": self.regime.label(),
            "rows": self
                .h_values
                .iter()
                .zip(&self.envelope_values)
                .map(|(&(x, h), &(_, g))| serde_json::json!({"x": x, "h": h, "g": g}))
                .collect::<Vec<_>>(),
            "envelope_at_norm": self
                .envelope_at_norm
                .iter()
                .map(|&(n, g)| serde_json::json!({"n": n, "g": g}))
                .collect::<Vec<_>>(),
            "monotone_ok": self.monotone_ok,
            "domination_ok": self.domination_ok,
            "envelope_certified": self.envelope_certified,
        })
    }
}

const DOMINATION_SLACK: f64 = 1e-12;

/// Evaluates `h` and the envelope over `x_grid`, and the envelope at the
/// norming points for each n in `n_grid`.
///
/// Without a closed-form envelope a non-certified one is auto-built as the
/// right-to-left running maximum of `|h|` on the grid.
pub fn check_membership(
    entry: &CatalogEntry,
    n_grid: &[u64],
    x_grid: &[f64],
) -> Result<VonMisesReport> {
    let mut h_values = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        h_values.push((x, h_for(entry, x)?));
    }

    let certified = entry.has_envelope();
    let envelope_values: Vec<(f64, f64)> = if certified {
        h_values
            .iter()
            .map(|&(x, _)| (x, entry.envelope_value(x).unwrap()))
            .collect()
    } else {
        // running maximum of |h| from the right; nonincreasing by build
        let mut g = vec![0.0; h_values.len()];
        let mut run = 0.0f64;
        for i in (0..h_values.len()).rev() {
            run = run.max(h_values[i].1.abs());
            g[i] = run;
        }
        h_values
            .iter()
            .zip(g)
            .map(|(&(x, _), gv)| (x, gv))
            .collect()
    };

    let mut envelope_at_norm = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let pair = entry.norming(n)?;
        let g = if certified {
            entry.envelope_at_norming(&pair).unwrap()
        } else {
            let point = match entry.regime() {
                Regime::Frechet { .. } => pair.a,
                Regime::Weibull { .. } => entry.spec().omega().to_f64() - pair.a,
                Regime::Gumbel => pair.b,
            };
            // restrict the running max to grid points at or past the
            // norming point; beyond the grid fall back to |h| itself
            let mut run: Option<f64> = None;
            for &(x, h) in h_values.iter().rev() {
                if x < point {
                    break;
                }
                run = Some(run.unwrap_or(0.0).max(h.abs()));
            }
            match run {
                Some(v) => v,
                None => h_for(entry, point)?.abs(),
            }
        };
        envelope_at_norm.push((n, g));
    }

    let monotone_ok = envelope_values
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 + DOMINATION_SLACK);
    let domination_ok = h_values
        .iter()
        .zip(&envelope_values)
        .all(|(&(_, h), &(_, g))| h.abs() <= g + DOMINATION_SLACK);

    Ok(VonMisesReport {
        regime: entry.regime(),
        h_values,
        envelope_values,
        envelope_at_norm,
        monotone_ok,
        domination_ok,
        envelope_certified: certified,
    })
}
