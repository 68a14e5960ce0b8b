//! Scenario configuration: one JSON object, every field optional, unknown
//! keys rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use scurve_core::adoption::{CesPreferences, VesScenario};
use scurve_core::pricelaws::{AIScalingLaw, ComputeTrajectory, CostDecline};

use crate::error::{CliError, Result};

/// Relative tolerance when both `K` and (`alpha`, `B`) are supplied.
const K_CONSISTENCY: f64 = 1e-12;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub alpha: Option<f64>,
    pub sigma: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    pub m: Option<f64>,
    pub s: Option<f64>,
    pub kappa: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub p_ai: Option<f64>,
    pub tau: Option<f64>,
    pub a: Option<f64>,
    pub f: Option<f64>,
    pub g: Option<f64>,
    #[serde(rename = "A")]
    pub market: Option<f64>,
    #[serde(rename = "C0")]
    pub c0: Option<f64>,
    pub seed: Option<u64>,
}

/// Attach the config field to a core domain error.
fn field_error(err: scurve_core::Error) -> CliError {
    match err {
        scurve_core::Error::Domain {
            name,
            value,
            requirement,
        } => CliError::config(name, format!("{requirement} (got {value})")),
        other => CliError::Model(other),
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config("config", format!("{e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
            file: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config { reason, .. } => CliError::config(path.display().to_string(), reason),
            other => other,
        })
    }

    fn require(&self, name: &'static str, value: Option<f64>) -> Result<f64> {
        value.ok_or_else(|| CliError::config(name, "required field is missing"))
    }

    pub fn sigma(&self) -> Result<f64> {
        self.require("sigma", self.sigma)
    }

    pub fn first_unit_price(&self) -> Result<f64> {
        self.require("B", self.b)
    }

    /// `K` as given, or `((1 − alpha) / alpha) B`. When both are present
    /// they must agree.
    pub fn k(&self) -> Result<f64> {
        let derived = match (self.alpha, self.b) {
            (Some(alpha), Some(b)) => {
                let prefs =
                    CesPreferences::new(alpha, self.sigma.unwrap_or(1.0)).map_err(field_error)?;
                Some(prefs.disadvantage(b))
            }
            _ => None,
        };
        match (self.k, derived) {
            (Some(k), Some(d)) if (k - d).abs() > K_CONSISTENCY * k.abs().max(d.abs()) => {
                Err(CliError::config(
                    "K",
                    format!("{k} disagrees with ((1 - alpha)/alpha) B = {d}"),
                ))
            }
            (Some(k), _) => Ok(k),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(CliError::config("K", "give K, or both alpha and B")),
        }
    }

    pub fn rate(&self) -> Result<f64> {
        self.require("m", self.m)
    }

    pub fn exponent(&self) -> Result<f64> {
        self.require("s", self.s)
    }

    pub fn cost_decline(&self) -> Result<CostDecline> {
        CostDecline::new(self.require("tau", self.tau)?, self.require("a", self.a)?)
            .map_err(field_error)
    }

    pub fn trajectory(&self) -> Result<ComputeTrajectory> {
        ComputeTrajectory::new(
            self.require("C0", self.c0)?,
            self.require("f", self.f)?,
            self.require("g", self.g)?,
        )
        .map_err(field_error)
    }

    pub fn scaling_law(&self) -> Result<AIScalingLaw> {
        AIScalingLaw::new(
            self.require("kappa", self.kappa)?,
            self.require("delta", self.delta)?,
            self.require("gamma", self.gamma)?,
            self.first_unit_price()?,
        )
        .map_err(field_error)
    }

    /// The VES scenario; the market size `A` defaults to zero when absent.
    pub fn ves_scenario(&self) -> Result<VesScenario> {
        let gamma = self.require("gamma", self.gamma)?;
        let delta = self.require("delta", self.delta)?;
        let sc = VesScenario::new(
            self.k()?,
            gamma * delta,
            self.cost_decline()?,
            self.trajectory()?,
            self.market.unwrap_or(0.0),
        )
        .map_err(field_error)?;
        match self.p_ai {
            Some(p) => sc.with_static_price(p).map_err(field_error),
            None => Ok(sc),
        }
    }

    /// Wrap a core error raised while using this config's values.
    pub fn check<T>(result: scurve_core::Result<T>) -> Result<T> {
        result.map_err(field_error)
    }
}
