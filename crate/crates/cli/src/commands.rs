//! Command implementations. Each returns the full output text so nothing
//! is written unless the command succeeds.

use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use scurve_core::adoption::{self, CesShare};
use scurve_core::estimation::{self, effect_grid, FitResult, SeriesKind};
use scurve_core::pricelaws::{MooreLaw, WrightLaw};

use crate::config::ScenarioConfig;
use crate::data;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForecastLaw {
    Moore,
    Wright,
    Ai,
    Ves,
}

impl FromStr for ForecastLaw {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "moore" => Ok(Self::Moore),
            "wright" => Ok(Self::Wright),
            "ai" => Ok(Self::Ai),
            "ves" => Ok(Self::Ves),
            other => Err(format!(
                "unknown law `{other}` (expected moore, wright, ai or ves)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapLaw {
    Moore,
    Wright,
}

impl FromStr for MapLaw {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "moore" => Ok(Self::Moore),
            "wright" => Ok(Self::Wright),
            other => Err(format!("unknown law `{other}` (expected moore or wright)")),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn fit(input: &Path, model: SeriesKind) -> Result<FitResult> {
    let series = data::read_series(input, model)?;
    Ok(estimation::fit(&series)?)
}

pub fn render_fit(result: &FitResult) -> String {
    to_json(result)
}

/// Three-column forecast table.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    pub header: [&'static str; 3],
    pub rows: Vec<[f64; 3]>,
}

impl Forecast {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for [a, b, c] in &self.rows {
            out.push_str(&format!("{a},{b},{c}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let records: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| {
                self.header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                    .collect()
            })
            .collect();
        to_json(&records)
    }
}

/// Grid `start, start + step, ...` through `end`, evaluated under `law`.
/// For Wright's law the grid runs over cumulative production.
pub fn forecast(
    cfg: &ScenarioConfig,
    law: ForecastLaw,
    start: f64,
    end: f64,
    step: f64,
) -> Result<Forecast> {
    if start.is_nan() || end.is_nan() || start >= end {
        return Err(CliError::Usage(format!(
            "start {start} must be below end {end}"
        )));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(CliError::Usage(format!("step {step} must be positive")));
    }
    let grid = effect_grid(start, end, step)?;
    fn check<T>(r: scurve_core::Result<T>) -> Result<T> {
        ScenarioConfig::check(r)
    }

    let (header, rows) = match law {
        ForecastLaw::Moore => {
            let price = check(MooreLaw::new(cfg.first_unit_price()?, cfg.rate()?))?;
            let share = check(CesShare::new(cfg.k()?, cfg.sigma()?))?;
            let rows = grid
                .iter()
                .map(|&t| {
                    Ok([
                        t,
                        check(price.price(t))?,
                        check(share.moore(price.rate(), t))?,
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            (["t", "price", "share"], rows)
        }
        ForecastLaw::Wright => {
            let price = check(WrightLaw::new(cfg.first_unit_price()?, cfg.exponent()?))?;
            let share = check(CesShare::new(cfg.k()?, cfg.sigma()?))?;
            let rows = grid
                .iter()
                .map(|&x| {
                    Ok([
                        x,
                        check(price.price(x))?,
                        check(share.wright(price.exponent(), x))?,
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            (["x_cum", "price", "share"], rows)
        }
        ForecastLaw::Ai => {
            let law = cfg.scaling_law()?;
            let (cost, traj) = (cfg.cost_decline()?, cfg.trajectory()?);
            let (k, sigma) = (cfg.k()?, cfg.sigma()?);
            let rows = grid
                .iter()
                .map(|&t| {
                    let c = check(traj.compute_at(&cost, t))?;
                    Ok([t, c, check(adoption::share_ai_ces(k, &law, c, sigma))?])
                })
                .collect::<Result<Vec<_>>>()?;
            (["t", "compute", "share"], rows)
        }
        ForecastLaw::Ves => {
            let sc = cfg.ves_scenario()?;
            let rows = grid
                .iter()
                .map(|&t| {
                    let c = check(sc.trajectory().compute_at(sc.cost(), t))?;
                    Ok([t, c, check(adoption::ves_extended_share(&sc, t))?])
                })
                .collect::<Result<Vec<_>>>()?;
            (["t", "compute", "share"], rows)
        }
    };
    Ok(Forecast { header, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MappedCurve {
    Logistic { mu: f64, lambda: f64 },
    LogLogistic { beta: f64, lambda: f64 },
}

pub fn map(cfg: &ScenarioConfig, law: MapLaw) -> Result<MappedCurve> {
    let share = ScenarioConfig::check(CesShare::new(cfg.k()?, cfg.sigma()?))?;
    Ok(match law {
        MapLaw::Moore => {
            let c = ScenarioConfig::check(share.logistic(cfg.rate()?))?;
            MappedCurve::Logistic {
                mu: c.mu,
                lambda: c.lambda,
            }
        }
        MapLaw::Wright => {
            let c = ScenarioConfig::check(share.loglogistic(cfg.exponent()?))?;
            MappedCurve::LogLogistic {
                beta: c.beta,
                lambda: c.lambda,
            }
        }
    })
}

pub fn render_map(curve: &MappedCurve) -> String {
    to_json(curve)
}

/// Round half-up to `digits` decimals.
pub fn round_half_up(x: f64, digits: i32) -> f64 {
    let scale = 10f64.powi(digits);
    (x * scale + 0.5).floor() / scale
}

fn fixed2(x: f64) -> String {
    format!("{:.2}", round_half_up(x, 2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfLife {
    #[serde(rename = "K")]
    pub k: f64,
    pub sigma: f64,
    pub tau: f64,
    pub a: f64,
    pub t_half: f64,
}

pub fn halflife(k: f64, sigma: f64, tau: f64, a: f64) -> Result<HalfLife> {
    let t_half = adoption::half_life(k, sigma, tau, a)?;
    Ok(HalfLife {
        k,
        sigma,
        tau,
        a,
        t_half,
    })
}

pub fn render_halflife(h: &HalfLife, json: bool) -> String {
    if json {
        to_json(h)
    } else {
        format!("{}\n", fixed2(h.t_half))
    }
}

pub const TABLE_K: [f64; 3] = [500.0, 5000.0, 50000.0];
pub const TABLE_SIGMA: [f64; 3] = [0.5, 1.0, 2.0];
pub const TABLE_TAU: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub case: usize,
    #[serde(rename = "K")]
    pub k: f64,
    pub sigma: f64,
    pub tau: f64,
    pub t_half: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfLifeTable {
    pub rows: Vec<TableRow>,
    pub mean: f64,
    pub median: f64,
}

/// Half-lives over the `K x sigma x tau` grid with `a = 1`, ordered by
/// `K`, then `sigma`, then `tau`. Summary statistics use unrounded values.
pub fn halflife_table() -> Result<HalfLifeTable> {
    let mut rows = Vec::with_capacity(27);
    for k in TABLE_K {
        for sigma in TABLE_SIGMA {
            for tau in TABLE_TAU {
                rows.push(TableRow {
                    case: rows.len() + 1,
                    k,
                    sigma,
                    tau,
                    t_half: adoption::half_life(k, sigma, tau, 1.0)?,
                });
            }
        }
    }
    let values: Vec<f64> = rows.iter().map(|r| r.t_half).collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let median = estimation::nearest_rank(&values, 0.5)?;
    Ok(HalfLifeTable { rows, mean, median })
}

pub fn render_table(table: &HalfLifeTable, json: bool) -> String {
    if json {
        return to_json(table);
    }
    let mut out = String::from("case,K,sigma,tau,t_half\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.case,
            r.k,
            r.sigma,
            r.tau,
            fixed2(r.t_half)
        ));
    }
    out.push_str(&format!("mean,,,,{}\n", fixed2(table.mean)));
    out.push_str(&format!("median,,,,{}\n", fixed2(table.median)));
    out
}
