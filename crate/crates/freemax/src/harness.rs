//! Convergence experiments: sup-norm density errors over the limit-law
//! domains, empirical rate fits against `O(n^-1 v g(.))` envelopes, the
//! boundary non-vanishing effect, and the non-convergence witness.

use std::io::{self, BufRead, Write};

use rayon::prelude::*;

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::evd::free_evd;
use crate::maxconv::{free_power_cdf, FreePower, SupportWindow};
use crate::norming::Regime;
use crate::numerics::{geometric_grid, golden_max, linear_grid, loglog_slope};

/// Reference sequence the measured sup-errors are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateReference {
    NInv,
    GAtNorm,
    MaxOfBoth,
}

impl RateReference {
    pub fn label(&self) -> &'static str {
        match self {
            RateReference::NInv => "n_inv",
            RateReference::GAtNorm => "g_at_norm",
            RateReference::MaxOfBoth => "max_of_both",
        }
    }

    fn of(&self, row: &PerNRow) -> f64 {
        match self {
            RateReference::NInv => row.n_inv,
            RateReference::GAtNorm => row.g_at_norm,
            RateReference::MaxOfBoth => row.g_at_norm.max(row.n_inv),
        }
    }
}

impl std::str::FromStr for RateReference {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n_inv" => Ok(RateReference::NInv),
            "g_at_norm" => Ok(RateReference::GAtNorm),
            "max_of_both" => Ok(RateReference::MaxOfBoth),
            other => Err(Error::InvalidConfig(format!(
                "unknown rate reference `{other}`"
            ))),
        }
    }
}

/// One convergence experiment over a list of semigroup powers.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub entry: CatalogEntry,
    pub n_list: Vec<u64>,
    pub grid_points: usize,
    /// Compact evaluation interval; required for Weibull entries with
    /// `-1 <= alpha < 0`, where uniform convergence on the full `(-1, 0)`
    /// fails and only compact subsets converge.
    pub domain_override: Option<(f64, f64)>,
    pub rate_reference: RateReference,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() || self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "n_list must be nonempty and strictly increasing".into(),
            ));
        }
        if self.n_list[0] < 2 {
            return Err(Error::InvalidConfig("every n must be >= 2".into()));
        }
        if self.grid_points < 1000 {
            return Err(Error::InvalidConfig("grid_points must be >= 1000".into()));
        }
        if let Some((a, b)) = self.domain_override {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "domain override ({a}, {b}) is not a valid interval"
                )));
            }
        }
        if let Regime::Weibull { alpha } = self.entry.regime() {
            if alpha >= -1.0 {
                match self.domain_override {
                    Some((a, b)) if a > -1.0 && b < 0.0 => {}
                    _ => {
                        return Err(Error::InvalidConfig(format!(
                            "Weibull entries with alpha = {alpha} in [-1, 0) need a compact \
                             domain override inside (-1, 0)"
                        )))
                    }
                }
            }
        }
        if self.rate_reference != RateReference::NInv && !self.entry.has_envelope() {
            return Err(Error::InvalidConfig(
                "g-based rate reference needs an entry with an envelope".into(),
            ));
        }
        Ok(())
    }
}

/// One `(n, sup-error)` measurement. `window_lo`/`window_hi` are the support
/// window edges `A_n`/`B_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerNRow {
    pub n: u64,
    pub sup_error: f64,
    pub argmax_x: f64,
    pub window_lo: f64,
    pub window_hi: f64,
    pub g_at_norm: f64,
    pub n_inv: f64,
}

/// Experiment outcome: per-n rows plus the fitted log-log rate and the
/// operationalized O-bound check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub per_n: Vec<PerNRow>,
    /// Least-squares slope of `log sup_error` against `log n`, fitted on the
    /// last half of the rows to dodge pre-asymptotic bias.
    pub fitted_slope: f64,
    /// `sup_error <= 2 C ref(n)` everywhere, with C extracted from the last
    /// half of the rows; O-statements fix no constant, this pins one.
    pub bound_satisfied: bool,
    /// The extracted constant C.
    pub fit_constant: f64,
    /// Smallest tested n from which `sup_error <= 2 C ref(n)` holds onward.
    pub bound_holds_from_n: Option<u64>,
}

const CSV_HEADER: &str = "n,sup_error,argmax_x,A_n,B_n,g_at_norm,n_inv";

impl ConvergenceReport {
    /// Assembles the derived fields from measured rows. Deterministic, so a
    /// report round-trips exactly through its CSV rows.
    pub fn from_rows(per_n: Vec<PerNRow>, reference: RateReference) -> Result<Self> {
        if per_n.is_empty() || per_n.windows(2).any(|w| w[0].n >= w[1].n) {
            return Err(Error::MalformedReport(
                "rows must be nonempty and strictly increasing in n".into(),
            ));
        }
        let half = per_n.len() / 2;
        let tail = &per_n[half..];
        let fitted_slope = if tail.len() >= 2 {
            loglog_slope(
                &tail
                    .iter()
                    .map(|r| (r.n as f64, r.sup_error.max(f64::MIN_POSITIVE)))
                    .collect::<Vec<_>>(),
            )
        } else {
            f64::NAN
        };

        let fit_constant = tail
            .iter()
            .map(|r| r.sup_error / reference.of(r))
            .fold(0.0f64, f64::max);
        let within = |r: &PerNRow| r.sup_error <= 2.0 * fit_constant * reference.of(r) * (1.0 + 1e-12);
        let bound_satisfied = per_n.iter().all(within);
        let mut bound_holds_from_n = None;
        for row in per_n.iter().rev() {
            if within(row) {
                bound_holds_from_n = Some(row.n);
            } else {
                break;
            }
        }

        Ok(ConvergenceReport {
            per_n,
            fitted_slope,
            bound_satisfied,
            fit_constant,
            bound_holds_from_n,
        })
    }

    /// CSV with header `n,sup_error,argmax_x,A_n,B_n,g_at_norm,n_inv`,
    /// 17 significant digits, LF line endings.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.per_n {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.n, r.sup_error, r.argmax_x, r.window_lo, r.window_hi, r.g_at_norm, r.n_inv
            )?;
        }
        Ok(())
    }

    /// Parses rows written by [`Self::write_csv`] and re-derives the fitted
    /// fields under the given reference.
    pub fn read_csv<R: BufRead>(r: R, reference: RateReference) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if i == 0 {
                if line != CSV_HEADER {
                    return Err(Error::MalformedReport(format!("bad header `{line}`")));
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::MalformedReport(format!(
                    "expected 7 columns, got {} in `{line}`",
                    fields.len()
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .map_err(|_| Error::MalformedReport(format!("bad float `{s}`")))
            };
            rows.push(PerNRow {
                n: fields[0]
                    .parse()
                    .map_err(|_| Error::MalformedReport(format!("bad n `{}`", fields[0])))?,
                sup_error: parse(fields[1])?,
                argmax_x: parse(fields[2])?,
                window_lo: parse(fields[3])?,
                window_hi: parse(fields[4])?,
                g_at_norm: parse(fields[5])?,
                n_inv: parse(fields[6])?,
            });
        }
        Self::from_rows(rows, reference)
    }

    /// The JSON summary `{fitted_slope, bound_satisfied, C}`.
    pub fn summary_json(&self) -> serde_json::Value {
        let num = |v: f64| match serde_json::Number::from_f64(v) {
            Some(n) => serde_json::Value::Number(n),
            None => serde_json::Value::Null,
        };
        let mut map = serde_json::Map::new();
        map.insert("fitted_slope".into(), num(self.fitted_slope));
        map.insert(
            "bound_satisfied".into(),
            serde_json::Value::Bool(self.bound_satisfied),
        );
        map.insert("C".into(), num(self.fit_constant));
        serde_json::Value::Object(map)
    }

    /// Two-column plot data: `log n  log sup_error`.
    pub fn write_plot_data<W: Write>(&self, mut w: W) -> io::Result<()> {
        for r in &self.per_n {
            writeln!(
                w,
                "{:.16e} {:.16e}",
                (r.n as f64).ln(),
                r.sup_error.max(f64::MIN_POSITIVE).ln()
            )?;
        }
        Ok(())
    }
}

fn open_edge_offsets() -> [f64; 6] {
    [1e-12, 1e-10, 1e-8, 1e-7, 1e-6, 1e-5]
}

/// Evaluation grid for the density sup-error, adapted to the regime:
/// geometric toward infinity for Frechet/Gumbel with the far cutoff chosen
/// so the limit density is below 1e-12 there (both densities decrease
/// monotonically past it), uniform with 100x refinement in the outer 1% for
/// Weibull, open edges approached by geometric offset clusters.
fn error_grid(
    regime: Regime,
    window: &SupportWindow,
    grid_points: usize,
    domain_override: Option<(f64, f64)>,
    n: u64,
) -> Result<Vec<f64>> {
    let (dom_lo, dom_hi) = domain_override.unwrap_or_else(|| regime.sup_domain());
    let lo = dom_lo.max(window.a_lower);
    let hi = dom_hi.min(window.upper_f64());
    if !(lo < hi) {
        return Err(Error::EmptyDomain { n });
    }
    let closed = domain_override.is_some();

    let mut grid: Vec<f64> = Vec::with_capacity(grid_points + 32);
    if hi.is_finite() {
        // finite interval: uniform body plus refined outer strips
        let w = hi - lo;
        let strip = 0.01 * w;
        let inner = grid_points * 98 / 298;
        let outer = (grid_points - inner) / 2;
        grid.extend(linear_grid(lo + strip, hi - strip, inner.max(2)));
        grid.extend(linear_grid(lo + w * 1e-6, lo + strip, outer.max(2)));
        grid.extend(linear_grid(hi - strip, hi - w * 1e-6, outer.max(2)));
        if closed {
            grid.push(lo);
            grid.push(hi);
        } else {
            for k in open_edge_offsets() {
                grid.push(lo + w * k);
                grid.push(hi - w * k);
            }
        }
    } else {
        let x_max = match regime {
            Regime::Frechet { alpha } => 1.5 * (alpha * 1e12).powf(1.0 / (alpha + 1.0)),
            Regime::Gumbel => 1.5 * -(1e-12f64).ln(),
            Regime::Weibull { .. } => unreachable!("Weibull window is bounded"),
        };
        let body_lo = lo + 1e-6;
        grid.extend(
            geometric_grid(body_lo - lo, x_max - lo, grid_points.max(2))
                .into_iter()
                .map(|t| lo + t),
        );
        for k in open_edge_offsets() {
            grid.push(lo + k);
        }
    }

    grid.retain(|&x| {
        let inside_dom = if closed {
            x >= lo && x <= hi
        } else {
            x > lo && x < hi
        };
        inside_dom && window.contains(x)
    });
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    if grid.len() < 2 {
        return Err(Error::EmptyDomain { n });
    }
    Ok(grid)
}

fn sup_over_grid<F: Fn(f64) -> f64>(err: &F, grid: &[f64]) -> (f64, f64) {
    let mut best = f64::NEG_INFINITY;
    let mut idx = 0;
    for (i, &x) in grid.iter().enumerate() {
        let v = err(x);
        if v > best {
            best = v;
            idx = i;
        }
    }
    let a = grid[idx.saturating_sub(1)];
    let b = grid[(idx + 1).min(grid.len() - 1)];
    let (rx, rv) = golden_max(err, a, b, 100);
    if rv > best {
        (rv, rx)
    } else {
        (best, grid[idx])
    }
}

/// Sup-norm density error over the regime's theorem domain intersected with
/// the support window. Returns `(sup, argmax)`.
pub fn sup_error(entry: &CatalogEntry, n: u64, grid_points: usize) -> Result<(f64, f64)> {
    sup_error_on(entry, n, grid_points, None)
}

/// Same with an explicit compact evaluation interval.
pub fn sup_error_on(
    entry: &CatalogEntry,
    n: u64,
    grid_points: usize,
    domain_override: Option<(f64, f64)>,
) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidConfig("sup_error needs n >= 2".into()));
    }
    let fp = entry.free_power(n)?;
    let window = fp.window()?;
    sup_error_impl(entry, &fp, &window, grid_points, domain_override, n)
}

fn sup_error_impl(
    entry: &CatalogEntry,
    fp: &FreePower,
    window: &SupportWindow,
    grid_points: usize,
    domain_override: Option<(f64, f64)>,
    n: u64,
) -> Result<(f64, f64)> {
    let grid = error_grid(entry.regime(), window, grid_points, domain_override, n)?;
    let limit = free_evd(entry.alpha());
    let pair = fp.norming();
    let spec = fp.base();
    let err = |x: f64| {
        let t = pair.a * x + pair.b;
        match crate::catalog::pdf_of(spec, t) {
            Ok(d) => (n as f64 * pair.a * d - limit.density(x)).abs(),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    Ok(sup_over_grid(&err, &grid))
}

/// Runs the full experiment: one sup-error row per n, then the rate fit.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let rows: Result<Vec<PerNRow>> = cfg
        .n_list
        .par_iter()
        .map(|&n| {
            let fp = cfg.entry.free_power(n)?;
            let window = fp.window()?;
            let (sup, argmax) = sup_error_impl(
                &cfg.entry,
                &fp,
                &window,
                cfg.grid_points,
                cfg.domain_override,
                n,
            )?;
            let pair = fp.norming();
            let g_at_norm = cfg
                .entry
                .envelope_at_norming(&pair)
                .unwrap_or(f64::NAN);
            Ok(PerNRow {
                n,
                sup_error: sup,
                argmax_x: argmax,
                window_lo: window.a_lower,
                window_hi: window.upper_f64(),
                g_at_norm,
                n_inv: 1.0 / n as f64,
            })
        })
        .collect();
    ConvergenceReport::from_rows(rows?, cfg.rate_reference)
}

/// Sup of `w_n` over `(A_n, 1]`, where the free Frechet density vanishes:
/// the boundary effect that keeps uniform convergence from extending below
/// x = 1. Tends to alpha.
pub fn boundary_gap(entry: &CatalogEntry, n: u64) -> Result<f64> {
    let Regime::Frechet { .. } = entry.regime() else {
        return Err(Error::WrongRegime {
            op: "boundary_gap",
            expected: "Frechet",
            found: entry.regime().label(),
            name: entry.name().to_string(),
        });
    };
    let fp = entry.free_power(n)?;
    let window = fp.window()?;
    let a_n = window.a_lower;
    if !(a_n < 1.0) {
        return Err(Error::EmptyDomain { n });
    }
    let span = 1.0 - a_n;
    let mut grid: Vec<f64> = linear_grid(a_n + span * 1e-4, 1.0, 2000);
    for k in open_edge_offsets() {
        grid.push(a_n + span * k);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pair = fp.norming();
    let spec = fp.base();
    let wn = |x: f64| match crate::catalog::pdf_of(spec, pair.a * x + pair.b) {
        Ok(d) => n as f64 * pair.a * d,
        Err(_) => f64::NEG_INFINITY,
    };
    Ok(sup_over_grid(&wn, &grid).0)
}

/// Witness for the failure of uniform density convergence on `(-1, 0)` when
/// `-1/2 < alpha < 0`: a point inside the window
/// `-((-alpha/n)(1 - 1/(2n)))^{1/(2 alpha + 1)} < x < 0` where the density
/// error stays >= 1 however large n gets.
///
/// The error is evaluated in the product form
/// `-alpha (-x)^{-alpha-1} (1 - exp(-(-x)^{-alpha}/n))` via `expm1`; the
/// naive difference of `w_n` and the limit density cancels catastrophically
/// here (both factors grow past 1e15 for alpha near -1/2).
pub fn nonconvergence_witness(alpha: f64, n: u64) -> Result<(f64, f64)> {
    if !(alpha > -0.5 && alpha < 0.0) {
        return Err(Error::InvalidParameter {
            family: "nonconvergence_witness".into(),
            reason: format!("alpha must lie in (-1/2, 0), got {alpha}"),
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter {
            family: "nonconvergence_witness".into(),
            reason: "n must be >= 2".into(),
        });
    }
    let nf = n as f64;
    let width = ((-alpha / nf) * (1.0 - 0.5 / nf)).powf(1.0 / (2.0 * alpha + 1.0));
    let x = -0.5 * width;
    let u = (-x).powf(-alpha) / nf;
    let error = -alpha * (-x).powf(-alpha - 1.0) * -(-u).exp_m1();
    Ok((x, error))
}

/// Max CDF distance between the normalized free power and its limit over a
/// grid. Shrinks along increasing n under the von Mises condition.
pub fn weak_convergence_check(entry: &CatalogEntry, n: u64, x_grid: &[f64]) -> Result<f64> {
    let fp = entry.free_power(n)?;
    let limit = free_evd(entry.alpha());
    Ok(x_grid
        .iter()
        .map(|&x| (free_power_cdf(&fp, x) - limit.cdf(x)).abs())
        .fold(0.0, f64::max))
}

/// Convenience grid spanning the limit support with margins on both sides.
pub fn default_weak_grid(regime: Regime) -> Vec<f64> {
    match regime {
        Regime::Frechet { .. } => linear_grid(0.5, 20.0, 400),
        Regime::Weibull { .. } => linear_grid(-1.5, 0.5, 400),
        Regime::Gumbel => linear_grid(-1.0, 20.0, 400),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_sup_error_is_the_hand_computation() {
        // uniform sample: sup = |n(1 - e^{-1/n}) - 1| <= 1/n
        for n in [10u64, 100, 1000] {
            let (sup, _) = sup_error(&catalog::uniform01(), n, 2000).unwrap();
            let nf = n as f64;
            let closed = (nf * -(-1.0 / nf).exp_m1() - 1.0).abs();
            assert!((sup - closed).abs() <= 1e-12, "n = {n}: {sup} vs {closed}");
            assert!(sup <= 1.0 / nf);
        }
    }

    #[test]
    fn weibull_sup_error_within_hand_bound() {
        // exact Weibull sample: sup <= -alpha/n, valid down to alpha = -1/2
        for alpha in [-2.0, -1.0, -0.5] {
            let e = catalog::weibull(alpha);
            for n in [100u64, 1000] {
                let (sup, _) = sup_error(&e, n, 4000).unwrap();
                assert!(
                    sup <= -alpha / n as f64 + 1e-12,
                    "alpha = {alpha}, n = {n}: sup = {sup}"
                );
            }
        }
    }

    #[test]
    fn frechet_sup_error_against_fine_grid_oracle() {
        // brute-force reference: closed-form w_n on a very fine grid
        let alpha = 2.0;
        let e = catalog::frechet(alpha);
        let n = 10_000u64;
        let (sup, argmax) = sup_error(&e, n, 100_000).unwrap();

        let nf = n as f64;
        let oracle = {
            let mut best = 0.0f64;
            for i in 0..1_000_000u32 {
                let x = 1.0 + 1e-9 + 11.0 * f64::from(i) / 1e6;
                let wn = alpha * x.powf(-alpha - 1.0) * (-x.powf(-alpha) / nf).exp();
                let d = (wn - alpha * x.powf(-alpha - 1.0)).abs();
                if d > best {
                    best = d;
                }
            }
            best
        };
        assert_relative_eq!(sup, oracle, max_relative = 1e-6);
        assert!(argmax < 1.001, "sup should sit at the lower edge");
    }

    #[test]
    fn experiment_slope_for_frechet_is_minus_one() {
        let cfg = ExperimentConfig {
            entry: catalog::frechet(2.0),
            n_list: vec![100, 316, 1000, 3162, 10_000, 31_623, 100_000],
            grid_points: 20_000,
            domain_override: None,
            rate_reference: RateReference::NInv,
        };
        let report = run_experiment(&cfg).unwrap();
        assert!(
            (-1.15..=-0.85).contains(&report.fitted_slope),
            "slope = {}",
            report.fitted_slope
        );
        assert!(report.bound_satisfied);
        assert_eq!(report.bound_holds_from_n, Some(100));
    }

    #[test]
    fn experiment_requires_override_for_shallow_weibull() {
        let cfg = ExperimentConfig {
            entry: catalog::weibull(-0.5),
            n_list: vec![100, 1000],
            grid_points: 1000,
            domain_override: None,
            rate_reference: RateReference::NInv,
        };
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidConfig(_))));

        let ok = ExperimentConfig {
            domain_override: Some((-0.9, -0.1)),
            ..cfg
        };
        let report = run_experiment(&ok).unwrap();
        assert!(report.per_n[0].sup_error > 0.0);
    }

    #[test]
    fn boundary_gap_tends_to_alpha() {
        // w_n(A_n+) -> alpha for the exact Frechet sample
        let e = catalog::frechet(2.0);
        let gap = boundary_gap(&e, 10_000).unwrap();
        assert!((gap - 2.0).abs() < 0.02, "gap = {gap}");

        // closed-form oracle at alpha = 1, n = 1e5:
        // alpha (-n log(1 - 1/n))^{1 + 1/alpha} (1 - 1/n)
        let e = catalog::frechet(1.0);
        let n = 100_000u64;
        let nf = n as f64;
        let oracle = (-nf * (1.0 - 1.0 / nf).ln()).powf(2.0) * (1.0 - 1.0 / nf);
        let gap = boundary_gap(&e, n).unwrap();
        assert!((gap - oracle).abs() / oracle < 1e-3, "{gap} vs {oracle}");
        assert!((gap - 1.0).abs() < 1e-3);

        // monotone trend toward alpha, inside the explicit envelope
        // 10 (1/n + |n log(1 - 1/n) + 1|)
        let e = catalog::frechet(2.0);
        let mut prev = f64::INFINITY;
        for n in [100u64, 1000, 10_000] {
            let gap = boundary_gap(&e, n).unwrap();
            let nf = n as f64;
            let envelope = 10.0 * (1.0 / nf + (nf * (1.0 - 1.0 / nf).ln() + 1.0).abs());
            assert!((gap - 2.0).abs() <= envelope, "n = {n}: {gap}");
            assert!((gap - 2.0).abs() <= prev);
            prev = (gap - 2.0).abs();
        }

        assert!(boundary_gap(&catalog::uniform01(), 100).is_err());
    }

    #[test]
    fn witness_error_stays_above_one() {
        for (alpha, n) in [(-0.25, 1000u64), (-0.4, 100_000), (-0.45, 100)] {
            let (x, err) = nonconvergence_witness(alpha, n).unwrap();
            assert!(x > -1.0 && x < 0.0);
            assert!(err >= 1.0, "alpha = {alpha}, n = {n}: err = {err}");
        }
        assert!(nonconvergence_witness(-0.6, 100).is_err());
        assert!(nonconvergence_witness(-0.5, 100).is_err());
        assert!(nonconvergence_witness(-0.25, 1).is_err());
    }

    #[test]
    fn witness_matches_direct_library_difference_in_benign_range() {
        // For moderate magnitudes the naive |w_n - phi| is still accurate;
        // the stable product form must agree with it.
        let alpha = -0.25;
        let n = 100u64;
        let (x, err) = nonconvergence_witness(alpha, n).unwrap();
        let e = catalog::weibull(alpha);
        let fp = e.free_power(n).unwrap();
        let direct =
            (crate::maxconv::density_wn(&fp, x).unwrap() - free_evd(alpha).density(x)).abs();
        assert_relative_eq!(err, direct, max_relative = 1e-9);
    }

    #[test]
    fn weak_convergence_shrinks_and_matches_closed_form() {
        // frechet: exact form max{n e^{-x^-a/n} - (n-1), 0} vs 1 - x^-a
        let e = catalog::frechet(2.0);
        let grid = default_weak_grid(e.regime());
        let n = 1000u64;
        let measured = weak_convergence_check(&e, n, &grid).unwrap();
        let nf = n as f64;
        let oracle = grid
            .iter()
            .map(|&x| {
                let f = if x <= 0.0 { 0.0 } else { (-x.powf(-2.0) / nf).exp() };
                let power = (1.0 - nf * (1.0 - f)).max(0.0);
                (power - free_evd(2.0).cdf(x)).abs()
            })
            .fold(0.0, f64::max);
        assert_relative_eq!(measured, oracle, max_relative = 1e-9);

        // shrink along n for a non-exact entry
        let e = catalog::cauchy();
        let grid = default_weak_grid(e.regime());
        let mut prev = f64::INFINITY;
        for n in [100u64, 1000, 10_000, 100_000] {
            let d = weak_convergence_check(&e, n, &grid).unwrap();
            assert!(d <= prev + 1e-12, "n = {n}: {d} > {prev}");
            prev = d;
        }
    }

    #[test]
    fn weak_convergence_at_unit_power_is_base_distance() {
        let e = catalog::gumbel();
        let grid = default_weak_grid(e.regime());
        let fp = e.free_power(1).unwrap();
        let measured = weak_convergence_check(&e, 1, &grid).unwrap();
        let oracle = grid
            .iter()
            .map(|&x| (e.spec().cdf(fp.arg(x)) - free_evd(0.0).cdf(x)).abs())
            .fold(0.0, f64::max);
        assert_relative_eq!(measured, oracle, epsilon = 1e-15);
    }

    #[test]
    fn report_roundtrips_through_csv() {
        let cfg = ExperimentConfig {
            entry: catalog::log_logistic(2.0),
            n_list: vec![100, 1000, 10_000, 100_000],
            grid_points: 2000,
            domain_override: None,
            rate_reference: RateReference::MaxOfBoth,
        };
        let report = run_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let parsed =
            ConvergenceReport::read_csv(buf.as_slice(), RateReference::MaxOfBoth).unwrap();
        assert_eq!(report, parsed);

        // infinities survive the trip (B_n = inf on unbounded supports)
        assert!(report.per_n[0].window_hi.is_infinite());
        let json = report.summary_json();
        assert!(json.get("fitted_slope").unwrap().is_number());
        assert!(json.get("C").unwrap().is_number());
    }

    #[test]
    fn config_validation_rejects_bad_inputs() {
        let base = ExperimentConfig {
            entry: catalog::frechet(2.0),
            n_list: vec![100, 1000],
            grid_points: 1000,
            domain_override: None,
            rate_reference: RateReference::NInv,
        };
        assert!(base.validate().is_ok());
        let bad = ExperimentConfig {
            n_list: vec![1000, 100],
            ..base.clone()
        };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig {
            n_list: vec![1, 100],
            ..base.clone()
        };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig {
            grid_points: 10,
            ..base.clone()
        };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig {
            entry: catalog::frechet(2.0).without_envelope(),
            rate_reference: RateReference::GAtNorm,
            ..base
        };
        assert!(bad.validate().is_err());
    }
}
