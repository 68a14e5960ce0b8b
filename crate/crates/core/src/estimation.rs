//! Fitting price laws and benchmark curves to observed series.
//!
//! - Moore, Wright and AI-loss series are fitted by ordinary least squares
//!   after the appropriate transform (`ln p` on `t`, `ln p` on `ln X`, raw
//!   loss on `log10 C`).
//! - Benchmark accuracies are fitted by nonlinear least squares on the
//!   logistic mean `1 / (1 + exp(-(b0 + b1 u)))`, i.e. a logit link with
//!   normal errors. This is deliberately not binomial maximum likelihood.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, finite, non_negative, positive, Error, Result};
use crate::num::one_over_one_plus_exp;
use crate::pricelaws::{MooreLaw, WrightLaw};

/// What a series measures; fixes the regressor and the fitting transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    /// `(t, price)`
    Moore,
    /// `(cumulative production, price)`
    Wright,
    /// `(log10 compute, loss)`
    AiLoss,
    /// `(log10 compute, accuracy in (0, 1))`
    Benchmark,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Moore => "moore",
            SeriesKind::Wright => "wright",
            SeriesKind::AiLoss => "ai-loss",
            SeriesKind::Benchmark => "benchmark",
        }
    }
}

impl std::str::FromStr for SeriesKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "moore" => Ok(SeriesKind::Moore),
            "wright" => Ok(SeriesKind::Wright),
            "ai-loss" => Ok(SeriesKind::AiLoss),
            "benchmark" => Ok(SeriesKind::Benchmark),
            other => Err(format!(
                "unknown model `{other}` (expected moore, wright, ai-loss or benchmark)"
            )),
        }
    }
}

impl std::fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Observed `(regressor, response)` pairs of one kind. Rows are numbered
/// from 1 in error messages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    kind: SeriesKind,
    rows: Vec<(f64, f64)>,
}

pub const MIN_OBSERVATIONS: usize = 3;

impl Series {
    pub fn new(kind: SeriesKind, rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.len() < MIN_OBSERVATIONS {
            return Err(Error::Degenerate(format!(
                "{} observations, at least {MIN_OBSERVATIONS} required",
                rows.len()
            )));
        }
        for (i, &(u, v)) in rows.iter().enumerate() {
            let row = i + 1;
            let bad = |reason: &str| Error::InvalidObservation {
                row,
                reason: reason.to_string(),
            };
            if !u.is_finite() {
                return Err(bad("regressor is not finite"));
            }
            if !v.is_finite() {
                return Err(bad("response is not finite"));
            }
            match kind {
                SeriesKind::Moore | SeriesKind::Wright if v <= 0.0 => {
                    return Err(bad(&format!("price {v} must be positive")));
                }
                SeriesKind::Wright if u <= 0.0 => {
                    return Err(bad(&format!("cumulative production {u} must be positive")));
                }
                SeriesKind::Benchmark if !(v > 0.0 && v < 1.0) => {
                    return Err(bad(&format!("accuracy {v} must lie strictly in (0, 1)")));
                }
                _ => {}
            }
        }
        let first = rows[0].0;
        if rows.iter().all(|r| r.0 == first) {
            return Err(Error::Degenerate("all regressor values are equal".into()));
        }
        Ok(Self { kind, rows })
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Law parameters implied by a fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum DerivedParameters {
    Moore {
        first_unit_price: f64,
        m: f64,
    },
    Wright {
        first_unit_price: f64,
        s: f64,
    },
    /// `delta` is the absolute loss decline per decade of compute.
    AiLoss {
        delta: f64,
    },
    Benchmark {
        b0: f64,
        b1: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: SeriesKind,
    pub n: usize,
    pub intercept: f64,
    pub slope: f64,
    /// Zero for an exact fit.
    pub slope_stderr: f64,
    /// `slope / slope_stderr`; infinite for an exact fit.
    pub slope_tstat: f64,
    /// R² for the linear fits, pseudo-R² for the logistic-mean fit.
    pub goodness: f64,
    pub sum_squared_residuals: f64,
    pub derived: DerivedParameters,
    /// Solver iterations (0 for closed-form OLS).
    pub iterations: usize,
}

impl FitResult {
    /// The fitted logistic mean, if this is a benchmark fit.
    pub fn logit_curve(&self) -> Result<LogitCurve> {
        match self.model {
            SeriesKind::Benchmark => LogitCurve::new(self.intercept, self.slope),
            other => Err(Error::ModelMismatch {
                expected: "benchmark",
                found: other.name(),
            }),
        }
    }
}

/// Simple linear regression with intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ols {
    pub intercept: f64,
    pub slope: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub ssr: f64,
}

/// OLS of `v` on `u` with classical (n − 2) standard errors.
pub fn ols(points: &[(f64, f64)]) -> Result<Ols> {
    let n = points.len();
    if n < MIN_OBSERVATIONS {
        return Err(Error::Degenerate(format!("{n} observations for OLS")));
    }
    let nf = n as f64;
    let mean_u = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_v = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut suu, mut suv, mut svv) = (0.0, 0.0, 0.0);
    for &(u, v) in points {
        let (du, dv) = (u - mean_u, v - mean_v);
        suu += du * du;
        suv += du * dv;
        svv += dv * dv;
    }
    if suu.is_nan() || suu <= 0.0 {
        return Err(Error::Degenerate("regressor has zero variance".into()));
    }
    let slope = suv / suu;
    let intercept = mean_v - slope * mean_u;
    let ssr: f64 = points
        .iter()
        .map(|&(u, v)| {
            let e = v - intercept - slope * u;
            e * e
        })
        .sum();
    let slope_stderr = (ssr / (nf - 2.0) / suu).sqrt();
    let r_squared = if svv > 0.0 {
        (1.0 - ssr / svv).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(Ols {
        intercept,
        slope,
        slope_stderr,
        r_squared,
        ssr,
    })
}

/// Log-linear OLS fit of a Moore, Wright or AI-loss series.
pub fn fit_loglinear(series: &Series) -> Result<FitResult> {
    let transformed: Vec<(f64, f64)> = match series.kind {
        SeriesKind::Moore => series.rows.iter().map(|&(t, p)| (t, p.ln())).collect(),
        SeriesKind::Wright => series.rows.iter().map(|&(x, p)| (x.ln(), p.ln())).collect(),
        SeriesKind::AiLoss => series.rows.clone(),
        SeriesKind::Benchmark => {
            return Err(Error::ModelMismatch {
                expected: "moore, wright or ai-loss",
                found: "benchmark",
            })
        }
    };
    let fit = ols(&transformed)?;
    let derived = match series.kind {
        SeriesKind::Moore => DerivedParameters::Moore {
            first_unit_price: fit.intercept.exp(),
            m: -fit.slope,
        },
        SeriesKind::Wright => DerivedParameters::Wright {
            first_unit_price: fit.intercept.exp(),
            s: -fit.slope,
        },
        _ => DerivedParameters::AiLoss { delta: -fit.slope },
    };
    Ok(FitResult {
        model: series.kind,
        n: series.len(),
        intercept: fit.intercept,
        slope: fit.slope,
        slope_stderr: fit.slope_stderr,
        slope_tstat: fit.slope / fit.slope_stderr,
        goodness: fit.r_squared,
        sum_squared_residuals: fit.ssr,
        derived,
        iterations: 0,
    })
}

/// Logistic mean `p(u) = 1 / (1 + exp(-(b0 + b1 u)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogitCurve {
    pub b0: f64,
    pub b1: f64,
}

impl LogitCurve {
    pub fn new(b0: f64, b1: f64) -> Result<Self> {
        Ok(Self {
            b0: finite("b0", b0)?,
            b1: finite("b1", b1)?,
        })
    }

    pub fn mean(&self, u: f64) -> f64 {
        one_over_one_plus_exp(-(self.b0 + self.b1 * u))
    }

    /// `dp/du = b1 p (1 - p)`.
    pub fn marginal_effect(&self, u: f64) -> f64 {
        let p = self.mean(u);
        self.b1 * p * (1.0 - p)
    }

    /// Point where `p = 1/2`.
    pub fn midpoint(&self) -> f64 {
        -self.b0 / self.b1
    }
}

pub const LOGIT_MAX_ITERATIONS: usize = 200;
const LOGIT_REL_TOL: f64 = 1e-12;
const LOGIT_INIT_CLIP: (f64, f64) = (0.01, 0.99);

fn sum_squares(rows: &[(f64, f64)], b0: f64, b1: f64) -> f64 {
    rows.iter()
        .map(|&(u, y)| {
            let e = y - one_over_one_plus_exp(-(b0 + b1 * u));
            e * e
        })
        .sum()
}

struct Normal2 {
    a00: f64,
    a01: f64,
    a11: f64,
    g0: f64,
    g1: f64,
}

/// `JᵀJ` and `Jᵀr` of the logistic mean at `(b0, b1)`.
fn normal_equations(rows: &[(f64, f64)], b0: f64, b1: f64) -> Normal2 {
    let mut ne = Normal2 {
        a00: 0.0,
        a01: 0.0,
        a11: 0.0,
        g0: 0.0,
        g1: 0.0,
    };
    for &(u, y) in rows {
        let p = one_over_one_plus_exp(-(b0 + b1 * u));
        let w = p * (1.0 - p);
        let (j0, j1) = (w, w * u);
        let r = y - p;
        ne.a00 += j0 * j0;
        ne.a01 += j0 * j1;
        ne.a11 += j1 * j1;
        ne.g0 += j0 * r;
        ne.g1 += j1 * r;
    }
    ne
}

/// Levenberg-damped Gauss-Newton on the centred regressor.
/// Returns `(b0, b1, ssr, iterations)` in centred coordinates.
fn gauss_newton(rows: &[(f64, f64)], mut b0: f64, mut b1: f64) -> Result<(f64, f64, f64, usize)> {
    let mut ssr = sum_squares(rows, b0, b1);
    let mut damping = 1e-3;
    for iter in 1..=LOGIT_MAX_ITERATIONS {
        if ssr == 0.0 {
            return Ok((b0, b1, ssr, iter - 1));
        }
        let ne = normal_equations(rows, b0, b1);
        let mut accepted = None;
        while damping < 1e16 {
            let a00 = ne.a00 * (1.0 + damping);
            let a11 = ne.a11 * (1.0 + damping);
            let det = a00 * a11 - ne.a01 * ne.a01;
            if det > 0.0 && det.is_finite() {
                let d0 = (a11 * ne.g0 - ne.a01 * ne.g1) / det;
                let d1 = (a00 * ne.g1 - ne.a01 * ne.g0) / det;
                let trial = sum_squares(rows, b0 + d0, b1 + d1);
                if trial <= ssr {
                    accepted = Some((b0 + d0, b1 + d1, trial));
                    damping = (damping * 0.1).max(1e-12);
                    break;
                }
            }
            damping *= 10.0;
        }
        match accepted {
            // no damped step decreases the objective: stationary to machine precision
            None => return Ok((b0, b1, ssr, iter)),
            Some((nb0, nb1, trial)) => {
                let change = (ssr - trial) / ssr;
                b0 = nb0;
                b1 = nb1;
                ssr = trial;
                if change < LOGIT_REL_TOL {
                    return Ok((b0, b1, ssr, iter));
                }
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: LOGIT_MAX_ITERATIONS,
        objective: ssr,
        damping,
    })
}

/// Nonlinear least-squares fit of the logistic mean to a benchmark series.
///
/// Initialised from OLS on the logit of responses clipped to
/// `[0.01, 0.99]`. Standard errors come from `s² (JᵀJ)⁻¹` at the optimum
/// with `s² = SSR / (n − 2)`. The goodness measure is the deviance-ratio
/// pseudo-R² `1 − SSR / SSR₀`, where `SSR₀` is the intercept-only fit
/// (normal-errors deviance is the residual sum of squares).
pub fn fit_logit(series: &Series) -> Result<FitResult> {
    if series.kind != SeriesKind::Benchmark {
        return Err(Error::ModelMismatch {
            expected: "benchmark",
            found: series.kind.name(),
        });
    }
    let n = series.len();
    let nf = n as f64;
    let first = series.rows[0].1;
    if series.rows.iter().all(|r| r.1 == first) {
        return Err(Error::Degenerate(
            "constant response, no slope identifiable".into(),
        ));
    }

    let center = series.rows.iter().map(|r| r.0).sum::<f64>() / nf;
    let rows: Vec<(f64, f64)> = series.rows.iter().map(|&(u, y)| (u - center, y)).collect();

    let linearized: Vec<(f64, f64)> = rows
        .iter()
        .map(|&(u, y)| {
            let y = y.clamp(LOGIT_INIT_CLIP.0, LOGIT_INIT_CLIP.1);
            (u, (y / (1.0 - y)).ln())
        })
        .collect();
    let start = ols(&linearized)?;
    let (c0, b1, ssr, iterations) = gauss_newton(&rows, start.intercept, start.slope)?;

    let ne = normal_equations(&rows, c0, b1);
    let det = ne.a00 * ne.a11 - ne.a01 * ne.a01;
    let s2 = ssr / (nf - 2.0);
    let slope_stderr = if det > 0.0 {
        (s2 * ne.a00 / det).sqrt()
    } else {
        f64::NAN
    };

    let mean_y = series.rows.iter().map(|r| r.1).sum::<f64>() / nf;
    let ssr_null: f64 = series.rows.iter().map(|r| (r.1 - mean_y).powi(2)).sum();
    let goodness = (1.0 - ssr / ssr_null).clamp(0.0, 1.0);

    let b0 = c0 - b1 * center;
    Ok(FitResult {
        model: SeriesKind::Benchmark,
        n,
        intercept: b0,
        slope: b1,
        slope_stderr,
        slope_tstat: b1 / slope_stderr,
        goodness,
        sum_squared_residuals: ssr,
        derived: DerivedParameters::Benchmark { b0, b1 },
        iterations,
    })
}

/// Dispatch on the series kind.
pub fn fit(series: &Series) -> Result<FitResult> {
    match series.kind {
        SeriesKind::Benchmark => fit_logit(series),
        _ => fit_loglinear(series),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Percentiles {
    pub p10: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p90: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalEffectSummary {
    pub grid: Vec<f64>,
    pub effects: Vec<f64>,
    pub percentiles: Percentiles,
    pub mean: f64,
}

/// Nearest-rank percentile: the `ceil(q n)`-th smallest value (1-based).
///
/// `q` in `(0, 1]`; `values` need not be sorted.
pub fn nearest_rank(values: &[f64], q: f64) -> Result<f64> {
    ensure(q > 0.0 && q <= 1.0, "q", q, "quantile must lie in (0, 1]")?;
    if values.is_empty() {
        return Err(Error::Degenerate("percentile of an empty sample".into()));
    }
    let n = values.len();
    // the epsilon keeps q*n that is integral in exact arithmetic from rounding up
    let rank = ((q * n as f64) - 1e-9).ceil().max(1.0) as usize;
    let mut scratch = values.to_vec();
    let (_, v, _) = scratch.select_nth_unstable_by(rank.min(n) - 1, |a, b| a.total_cmp(b));
    Ok(*v)
}

/// Evaluation grid `lo, lo + step, ...` up to `hi`; `hi` is included when
/// `hi − lo` is a whole number of steps (to 1e-9 of a step).
pub fn effect_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    finite("lo", lo)?;
    finite("hi", hi)?;
    positive("step", step)?;
    ensure(lo < hi, "hi", hi, "grid end must exceed grid start")?;
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

impl LogitCurve {
    pub fn marginal_effects(&self, lo: f64, hi: f64, step: f64) -> Result<MarginalEffectSummary> {
        let grid = effect_grid(lo, hi, step)?;
        if grid.is_empty() {
            return Err(Error::Degenerate("empty marginal-effect grid".into()));
        }
        let effects: Vec<f64> = grid.iter().map(|&u| self.marginal_effect(u)).collect();
        let mean = effects.iter().sum::<f64>() / effects.len() as f64;
        let percentiles = Percentiles {
            p10: nearest_rank(&effects, 0.10)?,
            p25: nearest_rank(&effects, 0.25)?,
            p50: nearest_rank(&effects, 0.50)?,
            p75: nearest_rank(&effects, 0.75)?,
            p90: nearest_rank(&effects, 0.90)?,
        };
        Ok(MarginalEffectSummary {
            grid,
            effects,
            percentiles,
            mean,
        })
    }
}

/// Marginal effects of a benchmark fit on a regular grid of `log10 C`.
pub fn marginal_effects(
    fit: &FitResult,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<MarginalEffectSummary> {
    fit.logit_curve()?.marginal_effects(lo, hi, step)
}

/// Generating law for synthetic series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SyntheticLaw {
    Moore(MooreLaw),
    Wright(WrightLaw),
    /// Loss linear in `log10 C`.
    AiLoss {
        intercept: f64,
        slope: f64,
    },
    Benchmark(LogitCurve),
}

impl SyntheticLaw {
    pub fn kind(&self) -> SeriesKind {
        match self {
            SyntheticLaw::Moore(_) => SeriesKind::Moore,
            SyntheticLaw::Wright(_) => SeriesKind::Wright,
            SyntheticLaw::AiLoss { .. } => SeriesKind::AiLoss,
            SyntheticLaw::Benchmark(_) => SeriesKind::Benchmark,
        }
    }
}

/// Accuracy bounds applied after noise so the series stays in `(0, 1)`.
pub const ACCURACY_CLAMP: (f64, f64) = (1e-6, 1.0 - 1e-6);

/// Seeded series on `design`, with Gaussian noise added in the fitted
/// space: log-price for Moore/Wright, the raw response otherwise.
pub fn generate_synthetic(
    law: &SyntheticLaw,
    design: &[f64],
    noise_sd: f64,
    seed: u64,
) -> Result<Series> {
    non_negative("noise_sd", noise_sd)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise_sd).map_err(|_| Error::Domain {
        name: "noise_sd",
        value: noise_sd,
        requirement: "must be finite and >= 0",
    })?;
    let mut noise = || {
        if noise_sd > 0.0 {
            normal.sample(&mut rng)
        } else {
            0.0
        }
    };

    let mut rows = Vec::with_capacity(design.len());
    for &u in design {
        let v = match law {
            SyntheticLaw::Moore(l) => (l.price(u)?.ln() + noise()).exp(),
            SyntheticLaw::Wright(l) => (l.price(u)?.ln() + noise()).exp(),
            SyntheticLaw::AiLoss { intercept, slope } => intercept + slope * u + noise(),
            SyntheticLaw::Benchmark(c) => {
                (c.mean(u) + noise()).clamp(ACCURACY_CLAMP.0, ACCURACY_CLAMP.1)
            }
        };
        rows.push((u, v));
    }
    Series::new(law.kind(), rows)
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
