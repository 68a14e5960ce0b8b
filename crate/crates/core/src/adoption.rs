//! CES demand, adoption S-curves and the variable-elasticity extension.
//!
//! With the incumbent's price normalised to one, the emergent good's share
//! under CES utility is
//!
//! ```text
//! S = 1 / (1 + K^sigma * p^sigma / B^sigma),   K = ((1 - alpha) / alpha) * B
//! ```
//!
//! so an exponential price path gives a logistic curve in time and a power
//! path gives a log-logistic curve in cumulative production (or compute).
//! The VES half of the module lets the elasticity grow with
//! `ln(C(t)/C(0))` instead, with price and compute following
//! [`CostDecline`] and [`ComputeTrajectory`].
//!
//! Shares are computed through their log-odds so neither tail overflows.
//! Far out in a tail the result may round to exactly `0.0` or `1.0`; that
//! is floating-point saturation, not a modelled limit.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, finite, non_negative, positive, Error, Result};
use crate::num::{one_over_one_plus_exp, pow_pos};
use crate::pricelaws::{AIScalingLaw, ComputeTrajectory, CostDecline, MooreLaw, WrightLaw};

/// Preference weight and elasticity of substitution of a two-good CES
/// utility `U = [alpha x^rho + (1 - alpha) y^rho]^(1/rho)`,
/// `sigma = 1 / (1 - rho)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CesPreferences {
    alpha: f64,
    sigma: f64,
}

impl CesPreferences {
    pub fn new(alpha: f64, sigma: f64) -> Result<Self> {
        ensure(
            alpha.is_finite() && alpha > 0.0 && alpha < 1.0,
            "alpha",
            alpha,
            "preference weight must lie in (0, 1)",
        )?;
        Ok(Self {
            alpha,
            sigma: positive("sigma", sigma)?,
        })
    }

    /// Build from the utility exponent `rho < 1` (`rho = 0` is Cobb-Douglas).
    pub fn from_rho(alpha: f64, rho: f64) -> Result<Self> {
        ensure(
            rho.is_finite() && rho < 1.0,
            "rho",
            rho,
            "must be finite and < 1",
        )?;
        Self::new(alpha, 1.0 / (1.0 - rho))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rho(&self) -> f64 {
        1.0 - 1.0 / self.sigma
    }

    /// `(1 - alpha) / alpha`.
    pub fn weight_ratio(&self) -> f64 {
        (1.0 - self.alpha) / self.alpha
    }

    /// Initial disadvantage `K = ((1 - alpha) / alpha) * B`.
    pub fn disadvantage(&self, first_unit_price: f64) -> f64 {
        self.weight_ratio() * first_unit_price
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketState {
    pub p_x: f64,
    pub p_y: f64,
    pub income: f64,
}

impl MarketState {
    pub fn new(p_x: f64, p_y: f64, income: f64) -> Result<Self> {
        Ok(Self {
            p_x: positive("p_x", p_x)?,
            p_y: positive("p_y", p_y)?,
            income: positive("M", income)?,
        })
    }
}

/// Utility-maximising bundle on the budget line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandAllocation {
    pub x: f64,
    pub y: f64,
    /// Demand scale `D = M / (alpha^sigma p_x^(1-sigma) + (1-alpha)^sigma p_y^(1-sigma))`.
    pub scale: f64,
    pub share_x: f64,
}

/// Closed-form CES demand. Valid for every `sigma > 0`, including the
/// Cobb-Douglas case `sigma = 1`.
pub fn ces_demand(prefs: &CesPreferences, mkt: &MarketState) -> DemandAllocation {
    let s = prefs.sigma;
    let wx = pow_pos(prefs.alpha, s);
    let wy = pow_pos(1.0 - prefs.alpha, s);
    let scale = mkt.income / (wx * pow_pos(mkt.p_x, 1.0 - s) + wy * pow_pos(mkt.p_y, 1.0 - s));
    let x = scale * wx * pow_pos(mkt.p_x, -s);
    let y = scale * wy * pow_pos(mkt.p_y, -s);
    DemandAllocation {
        x,
        y,
        scale,
        share_x: x / (x + y),
    }
}

/// Product share `x / (x + y)` from prices alone.
pub fn share_from_prices(prefs: &CesPreferences, p_x: f64, p_y: f64) -> Result<f64> {
    positive("p_x", p_x)?;
    positive("p_y", p_y)?;
    let log_odds = prefs.sigma * (prefs.weight_ratio().ln() + p_x.ln() - p_y.ln());
    Ok(one_over_one_plus_exp(log_odds))
}

/// Share model parameterised directly by the initial disadvantage `K` and
/// the elasticity `sigma`.
///
/// Use [`CesShare::from_preferences`] to derive `K` from `(alpha, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CesShare {
    k: f64,
    sigma: f64,
}

impl CesShare {
    pub fn new(k: f64, sigma: f64) -> Result<Self> {
        Ok(Self {
            k: positive("K", k)?,
            sigma: positive("sigma", sigma)?,
        })
    }

    pub fn from_preferences(prefs: &CesPreferences, first_unit_price: f64) -> Result<Self> {
        positive("B", first_unit_price)?;
        Self::new(prefs.disadvantage(first_unit_price), prefs.sigma)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Share when the emergent price is `B * exp(-m t)`.
    pub fn moore(&self, rate: f64, t: f64) -> Result<f64> {
        positive("m", rate)?;
        ensure(
            t.is_finite() && t >= 0.0,
            "t",
            t,
            "time must be finite and >= 0",
        )?;
        Ok(one_over_one_plus_exp(self.sigma * (self.k.ln() - rate * t)))
    }

    /// Share when the emergent price is `B * X^(-s)`.
    pub fn wright(&self, exponent: f64, cumulative: f64) -> Result<f64> {
        positive("s", exponent)?;
        ensure(
            cumulative.is_finite() && cumulative > 0.0,
            "X",
            cumulative,
            "cumulative production must be finite and > 0",
        )?;
        Ok(one_over_one_plus_exp(
            self.sigma * (self.k.ln() - exponent * cumulative.ln()),
        ))
    }

    /// Logistic curve in time equivalent to [`CesShare::moore`].
    pub fn logistic(&self, rate: f64) -> Result<LogisticCurve> {
        positive("m", rate)?;
        LogisticCurve::new(self.k.ln() / rate, 1.0 / (self.sigma * rate))
    }

    /// Log-logistic curve in cumulative production equivalent to
    /// [`CesShare::wright`].
    pub fn loglogistic(&self, exponent: f64) -> Result<LogLogisticCurve> {
        positive("s", exponent)?;
        LogLogisticCurve::new(self.sigma * exponent, pow_pos(self.k, 1.0 / exponent))
    }
}

pub fn share_moore(prefs: &CesPreferences, law: &MooreLaw, t: f64) -> Result<f64> {
    CesShare::from_preferences(prefs, law.first_unit_price())?.moore(law.rate(), t)
}

pub fn share_wright(prefs: &CesPreferences, law: &WrightLaw, cumulative: f64) -> Result<f64> {
    CesShare::from_preferences(prefs, law.first_unit_price())?.wright(law.exponent(), cumulative)
}

/// `mu = ln(K) / m`, `lambda = 1 / (sigma m)`.
pub fn logistic_of_moore(prefs: &CesPreferences, law: &MooreLaw) -> Result<LogisticCurve> {
    CesShare::from_preferences(prefs, law.first_unit_price())?.logistic(law.rate())
}

/// `beta = sigma s`, `lambda = K^(1/s)`.
pub fn loglogistic_of_wright(prefs: &CesPreferences, law: &WrightLaw) -> Result<LogLogisticCurve> {
    CesShare::from_preferences(prefs, law.first_unit_price())?.loglogistic(law.exponent())
}

/// Logistic CDF `1 / (1 + exp(-(t - mu) / lambda))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticCurve {
    pub mu: f64,
    pub lambda: f64,
}

impl LogisticCurve {
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        Ok(Self {
            mu: finite("mu", mu)?,
            lambda: positive("lambda", lambda)?,
        })
    }

    pub fn cdf(&self, t: f64) -> f64 {
        one_over_one_plus_exp(-(t - self.mu) / self.lambda)
    }
}

/// Log-logistic (Fisk) CDF `1 / (1 + (X / lambda)^(-beta))` on `X > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogisticCurve {
    pub beta: f64,
    pub lambda: f64,
}

impl LogLogisticCurve {
    pub fn new(beta: f64, lambda: f64) -> Result<Self> {
        Ok(Self {
            beta: positive("beta", beta)?,
            lambda: positive("lambda", lambda)?,
        })
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        ensure(x.is_finite() && x > 0.0, "X", x, "support is X > 0")?;
        Ok(one_over_one_plus_exp(
            -self.beta * (x.ln() - self.lambda.ln()),
        ))
    }
}

pub fn eval_logistic(curve: &LogisticCurve, t: f64) -> f64 {
    curve.cdf(t)
}

pub fn eval_loglogistic(curve: &LogLogisticCurve, x: f64) -> Result<f64> {
    curve.cdf(x)
}

/// AI share under CES with the quality-adjusted price of `law`:
/// `1 / (1 + K^sigma kappa^(sigma gamma) C^(-sigma delta gamma))`.
pub fn share_ai_ces(k: f64, law: &AIScalingLaw, compute: f64, sigma: f64) -> Result<f64> {
    positive("K", k)?;
    positive("sigma", sigma)?;
    ensure(
        compute.is_finite() && compute > 0.0,
        "C",
        compute,
        "compute must be finite and > 0",
    )?;
    let log_odds = sigma
        * (k.ln() + law.gamma() * law.kappa().ln() - law.delta() * law.gamma() * compute.ln());
    Ok(one_over_one_plus_exp(log_odds))
}

/// Variable elasticity `gamma delta ln(C / C0)`; zero at `C = C0`.
pub fn ves_sigma(gamma: f64, delta: f64, compute: f64, base_compute: f64) -> Result<f64> {
    positive("gamma", gamma)?;
    positive("delta", delta)?;
    positive("C0", base_compute)?;
    ensure(
        compute.is_finite() && compute >= base_compute,
        "C",
        compute,
        "compute must not fall below C0",
    )?;
    Ok(gamma * delta * (compute / base_compute).ln())
}

fn check_ves_inputs(k: f64, p_ai: f64) -> Result<()> {
    ensure(
        k.is_finite() && k > 1.0,
        "K",
        k,
        "initial disadvantage must exceed 1",
    )?;
    ensure(
        p_ai.is_finite() && p_ai > 0.0 && p_ai < 1.0,
        "p_ai",
        p_ai,
        "AI price must lie in (0, 1)",
    )
}

/// VES share `1 / (1 + K p_ai^sigma)`.
pub fn ves_share(k: f64, p_ai: f64, sigma: f64) -> Result<f64> {
    check_ves_inputs(k, p_ai)?;
    non_negative("sigma", sigma)?;
    Ok(one_over_one_plus_exp(k.ln() + sigma * p_ai.ln()))
}

/// The same share written in compute:
/// `1 / (1 + K (C / C0)^(gamma delta ln p_ai))`.
pub fn ves_share_in_compute(
    k: f64,
    p_ai: f64,
    gamma_delta: f64,
    compute: f64,
    base_compute: f64,
) -> Result<f64> {
    check_ves_inputs(k, p_ai)?;
    positive("gamma*delta", gamma_delta)?;
    positive("C0", base_compute)?;
    ensure(
        compute.is_finite() && compute >= base_compute,
        "C",
        compute,
        "compute must not fall below C0",
    )?;
    let ratio = compute / base_compute;
    Ok(one_over_one_plus_exp(
        k.ln() + gamma_delta * p_ai.ln() * ratio.ln(),
    ))
}

/// Parameters of the VES adoption model with coupled price and compute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VesScenario {
    k: f64,
    gamma_delta: f64,
    cost: CostDecline,
    traj: ComputeTrajectory,
    market: f64,
    static_price: Option<f64>,
}

impl VesScenario {
    /// `k > 1`, `gamma_delta` in `(0, 1)`, addressable market `>= 0`.
    pub fn new(
        k: f64,
        gamma_delta: f64,
        cost: CostDecline,
        traj: ComputeTrajectory,
        market: f64,
    ) -> Result<Self> {
        ensure(
            k.is_finite() && k > 1.0,
            "K",
            k,
            "initial disadvantage must exceed 1",
        )?;
        ensure(
            gamma_delta > 0.0 && gamma_delta < 1.0,
            "gamma*delta",
            gamma_delta,
            "must lie in (0, 1)",
        )?;
        Ok(Self {
            k,
            gamma_delta,
            cost,
            traj,
            market: non_negative("A", market)?,
            static_price: None,
        })
    }

    /// Attach a constant AI price for the static (fixed-price) share.
    pub fn with_static_price(mut self, p_ai: f64) -> Result<Self> {
        check_ves_inputs(self.k, p_ai)?;
        self.static_price = Some(p_ai);
        Ok(self)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn gamma_delta(&self) -> f64 {
        self.gamma_delta
    }

    pub fn cost(&self) -> &CostDecline {
        &self.cost
    }

    pub fn trajectory(&self) -> &ComputeTrajectory {
        &self.traj
    }

    pub fn market(&self) -> f64 {
        self.market
    }

    pub fn static_price(&self) -> Option<f64> {
        self.static_price
    }

    /// Share at compute `C` with the attached constant price.
    pub fn static_share(&self, compute: f64) -> Result<f64> {
        let p = self.static_price.ok_or(Error::Domain {
            name: "p_ai",
            value: f64::NAN,
            requirement: "static share needs a constant AI price",
        })?;
        ves_share_in_compute(self.k, p, self.gamma_delta, compute, self.traj.initial())
    }

    /// `sigma(t) = gamma delta (f + g tau t^a)`.
    pub fn elasticity(&self, t: f64) -> Result<f64> {
        Ok(self.gamma_delta * self.traj.log_growth(&self.cost, t)?)
    }
}

/// `1 / (1 + K exp(-gd tau f t^a - gd tau^2 g t^(2a)))`.
pub fn ves_extended_share(sc: &VesScenario, t: f64) -> Result<f64> {
    let u = sc.cost.log_decline(t)?;
    let exponent = sc.gamma_delta * u * (sc.traj.level() + sc.traj.coupling() * u);
    Ok(one_over_one_plus_exp(sc.k.ln() - exponent))
}

/// Additive decomposition of `ln((1 - S) / S)` for the extended VES share.
///
/// This is the log-odds *against* adoption (the negative of the usual
/// logit of `S`): `value = log_k - price_decline * elasticity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogitDecomposition {
    pub log_k: f64,
    /// `tau t^a`
    pub price_decline: f64,
    /// `gamma delta (f + g tau t^a)`
    pub elasticity: f64,
    pub value: f64,
}

impl LogitDecomposition {
    /// Recover the share from the log-odds.
    pub fn share(&self) -> f64 {
        one_over_one_plus_exp(self.value)
    }
}

/// `ln((1 - S) / S)` for a share in `(0, 1)`.
pub fn log_odds_against(share: f64) -> Result<f64> {
    ensure(
        share > 0.0 && share < 1.0,
        "S",
        share,
        "share must lie in (0, 1)",
    )?;
    Ok(((1.0 - share) / share).ln())
}

/// Inverse of [`log_odds_against`].
pub fn share_from_log_odds(value: f64) -> f64 {
    one_over_one_plus_exp(value)
}

pub fn logit_share(sc: &VesScenario, t: f64) -> Result<LogitDecomposition> {
    let price_decline = sc.cost.log_decline(t)?;
    let elasticity = sc.gamma_delta * (sc.traj.level() + sc.traj.coupling() * price_decline);
    let log_k = sc.k.ln();
    Ok(LogitDecomposition {
        log_k,
        price_decline,
        elasticity,
        value: log_k - price_decline * elasticity,
    })
}

/// Industry profit `A S(t) - theta(t) C(t)`.
pub fn industry_profit(sc: &VesScenario, t: f64) -> Result<f64> {
    let share = ves_extended_share(sc, t)?;
    let u = sc.cost.log_decline(t)?;
    // theta * C = C0 exp(f + g u - u), combined to keep the product finite
    let spend = sc.traj.initial() * (sc.traj.level() + sc.traj.coupling() * u - u).exp();
    Ok(sc.market * share - spend)
}

/// Closed-form half-life `(ln K / (tau sigma))^(1/a)` for constant `sigma`.
pub fn half_life(k: f64, sigma: f64, tau: f64, shape: f64) -> Result<f64> {
    ensure(
        k.is_finite() && k > 1.0,
        "K",
        k,
        "K must exceed 1 for a positive-time half-life",
    )?;
    positive("sigma", sigma)?;
    positive("tau", tau)?;
    positive("a", shape)?;
    let base = k.ln() / (tau * sigma);
    Ok(if shape == 1.0 {
        base
    } else {
        pow_pos(base, 1.0 / shape)
    })
}

const BRACKET_CAP: f64 = 1_152_921_504_606_846_976.0; // 2^60
const HALF_LIFE_TOL: f64 = 1e-12;

/// Time at which the extended VES share reaches one half, with the
/// elasticity evaluated along the compute path.
///
/// The log-odds is strictly decreasing in `t` whenever `f + g > 0`, so the
/// root is bracketed on `[0, T]` (doubling `T` up to `2^60`) and bisected
/// to `1e-12` in `t`.
pub fn half_life_implicit(sc: &VesScenario) -> Result<f64> {
    let log_odds = |t: f64| -> f64 {
        let u = sc.cost.log_decline(t).unwrap_or(f64::NAN);
        sc.k.ln() - sc.gamma_delta * u * (sc.traj.level() + sc.traj.coupling() * u)
    };

    let mut lo = 0.0;
    let mut hi = 1.0;
    loop {
        let v = log_odds(hi);
        if v <= 0.0 {
            break;
        }
        if !v.is_finite() || hi >= BRACKET_CAP {
            return Err(Error::Unreachable(format!(
                "log-odds still {v:e} at t = {hi:e}; f + g must be positive"
            )));
        }
        lo = hi;
        hi *= 2.0;
    }

    while hi - lo > HALF_LIFE_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = log_odds(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (vlo, vhi) = (log_odds(lo), log_odds(hi));
    Ok(if vlo.abs() < vhi.abs() { lo } else { hi })
}
