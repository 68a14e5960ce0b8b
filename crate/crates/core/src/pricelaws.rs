//! Price and loss trajectories.
//!
//! Three experience laws drive the emergent good's price down:
//! exponential decline in calendar time ([`MooreLaw`]), power decline in
//! cumulative production ([`WrightLaw`]), and power decline of excess loss
//! in training compute ([`AIScalingLaw`]). [`CostDecline`] and
//! [`ComputeTrajectory`] describe the marginal cost of compute and the
//! compute path that is coupled to it.
//!
//! Every input (time, cumulative production, compute) is checked at entry
//! and rejected with [`crate::Error::Domain`] rather than clamped.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, non_negative, positive, Result};
use crate::num::pow_pos;

fn check_time(t: f64) -> Result<f64> {
    ensure(
        t.is_finite() && t >= 0.0,
        "t",
        t,
        "time must be finite and >= 0",
    )?;
    Ok(t)
}

/// Price falling exponentially in time: `p(t) = B * exp(-m t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MooreLaw {
    first_unit_price: f64,
    rate: f64,
}

impl MooreLaw {
    pub fn new(first_unit_price: f64, rate: f64) -> Result<Self> {
        Ok(Self {
            first_unit_price: positive("B", first_unit_price)?,
            rate: positive("m", rate)?,
        })
    }

    /// First-unit price `B`.
    pub fn first_unit_price(&self) -> f64 {
        self.first_unit_price
    }

    /// Exponential decline rate `m`.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn price(&self, t: f64) -> Result<f64> {
        let t = check_time(t)?;
        Ok(self.first_unit_price * (-self.rate * t).exp())
    }
}

/// Price falling as a power of cumulative production: `p = B * X^(-s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrightLaw {
    first_unit_price: f64,
    exponent: f64,
}

impl WrightLaw {
    pub fn new(first_unit_price: f64, exponent: f64) -> Result<Self> {
        Ok(Self {
            first_unit_price: positive("B", first_unit_price)?,
            exponent: positive("s", exponent)?,
        })
    }

    /// Experience curve with the given progress ratio, i.e. the price
    /// multiplier per doubling of cumulative production (0.8 for an
    /// "80% curve").
    pub fn from_progress_ratio(first_unit_price: f64, ratio: f64) -> Result<Self> {
        ensure(
            ratio > 0.0 && ratio < 1.0,
            "progress ratio",
            ratio,
            "must lie in (0, 1)",
        )?;
        Self::new(first_unit_price, -ratio.log2())
    }

    pub fn first_unit_price(&self) -> f64 {
        self.first_unit_price
    }

    /// Experience exponent `s`.
    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn price(&self, cumulative: f64) -> Result<f64> {
        ensure(
            cumulative.is_finite() && cumulative > 0.0,
            "X",
            cumulative,
            "cumulative production must be finite and > 0",
        )?;
        Ok(self.first_unit_price * pow_pos(cumulative, -self.exponent))
    }

    /// The exponential-in-time law that reproduces this curve when
    /// cumulative production grows as `X(t) = X0 * exp(growth * t)`.
    ///
    /// `B' = B * X0^(-s)`, `m = s * growth`.
    pub fn moore_equivalent(&self, initial_cumulative: f64, growth: f64) -> Result<MooreLaw> {
        positive("X0", initial_cumulative)?;
        positive("g_x", growth)?;
        MooreLaw::new(
            self.first_unit_price * pow_pos(initial_cumulative, -self.exponent),
            self.exponent * growth,
        )
    }
}

/// Compute-driven scaling law for AI loss and quality-adjusted price.
///
/// Loss is in nats per character; the per-character normalisation is
/// already folded into the units, so no token count appears here.
///
/// Note on units: a regression of loss on `log10(C)` reports an absolute
/// decline per decade of compute. That coefficient is what fitting code
/// calls `delta`; it is not a relative (percentage) decline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AIScalingLaw {
    kappa: f64,
    delta: f64,
    gamma: f64,
    price_constant: f64,
    irreducible_loss: f64,
}

impl AIScalingLaw {
    pub fn new(kappa: f64, delta: f64, gamma: f64, price_constant: f64) -> Result<Self> {
        Ok(Self {
            kappa: positive("kappa", kappa)?,
            delta: positive("delta", delta)?,
            gamma: positive("gamma", gamma)?,
            price_constant: positive("B", price_constant)?,
            irreducible_loss: 0.0,
        })
    }

    pub fn with_irreducible_loss(mut self, loss: f64) -> Result<Self> {
        self.irreducible_loss = non_negative("irreducible_loss", loss)?;
        Ok(self)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn price_constant(&self) -> f64 {
        self.price_constant
    }

    pub fn irreducible_loss(&self) -> f64 {
        self.irreducible_loss
    }

    fn check_compute(compute: f64) -> Result<f64> {
        ensure(
            compute.is_finite() && compute > 0.0,
            "C",
            compute,
            "compute must be finite and > 0",
        )?;
        Ok(compute)
    }

    /// Loss above the irreducible floor: `kappa * C^(-delta)`.
    pub fn excess_loss(&self, compute: f64) -> Result<f64> {
        let c = Self::check_compute(compute)?;
        Ok(self.kappa * pow_pos(c, -self.delta))
    }

    pub fn loss_per_character(&self, compute: f64) -> Result<f64> {
        Ok(self.irreducible_loss + self.excess_loss(compute)?)
    }

    /// Quality-adjusted price `B * kappa^gamma * C^(-delta*gamma)`.
    pub fn quality_adjusted_price(&self, compute: f64) -> Result<f64> {
        let c = Self::check_compute(compute)?;
        Ok(self.price_constant
            * pow_pos(self.kappa, self.gamma)
            * pow_pos(c, -self.delta * self.gamma))
    }
}

/// Marginal cost of compute, `theta(t) = exp(-tau * t^a)`.
///
/// `a > 1` is super-exponential decline, `a = 1` exponential and `a < 1`
/// sub-exponential. In the long run the AI price tracks this cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostDecline {
    tau: f64,
    shape: f64,
}

impl CostDecline {
    pub fn new(tau: f64, shape: f64) -> Result<Self> {
        Ok(Self {
            tau: positive("tau", tau)?,
            shape: positive("a", shape)?,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    /// `tau * t^a`, the cumulative log price decline at `t`.
    pub fn log_decline(&self, t: f64) -> Result<f64> {
        let t = check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok(self.tau * pow_pos(t, self.shape))
    }

    pub fn marginal_cost(&self, t: f64) -> Result<f64> {
        Ok((-self.log_decline(t)?).exp())
    }
}

/// Compute path coupled to the AI price through
/// `ln(C/C0) - f + g ln(p_AI) = 0`, giving `C(t) = C0 exp(f + g tau t^a)`.
///
/// `g = 0` is accepted and yields constant compute `C0 e^f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComputeTrajectory {
    initial: f64,
    level: f64,
    coupling: f64,
}

impl ComputeTrajectory {
    pub fn new(initial: f64, level: f64, coupling: f64) -> Result<Self> {
        Ok(Self {
            initial: positive("C0", initial)?,
            level: non_negative("f", level)?,
            coupling: non_negative("g", coupling)?,
        })
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// `ln(C(t)/C0) = f + g tau t^a`.
    pub fn log_growth(&self, cost: &CostDecline, t: f64) -> Result<f64> {
        Ok(self.level + self.coupling * cost.log_decline(t)?)
    }

    pub fn compute_at(&self, cost: &CostDecline, t: f64) -> Result<f64> {
        Ok(self.initial * self.log_growth(cost, t)?.exp())
    }
}

/// Free-function forms of the trajectory operations.
pub fn moore_price(law: &MooreLaw, t: f64) -> Result<f64> {
    law.price(t)
}

pub fn wright_price(law: &WrightLaw, cumulative: f64) -> Result<f64> {
    law.price(cumulative)
}

pub fn excess_loss(law: &AIScalingLaw, compute: f64) -> Result<f64> {
    law.excess_loss(compute)
}

pub fn loss_per_character(law: &AIScalingLaw, compute: f64) -> Result<f64> {
    law.loss_per_character(compute)
}

pub fn ai_price(law: &AIScalingLaw, compute: f64) -> Result<f64> {
    law.quality_adjusted_price(compute)
}

pub fn marginal_cost(cost: &CostDecline, t: f64) -> Result<f64> {
    cost.marginal_cost(t)
}

pub fn compute_at(traj: &ComputeTrajectory, cost: &CostDecline, t: f64) -> Result<f64> {
    traj.compute_at(cost, t)
}

pub fn moore_equivalent_of_wright(
    law: &WrightLaw,
    initial_cumulative: f64,
    growth: f64,
) -> Result<MooreLaw> {
    law.moore_equivalent(initial_cumulative, growth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, LN_2};

    #[test]
    fn moore_examples() {
        assert_eq!(MooreLaw::new(2.5, 0.3).unwrap().price(0.0).unwrap(), 2.5);
        assert_relative_eq!(
            MooreLaw::new(1.0, LN_2).unwrap().price(1.0).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        // exp(-0.5), 30-digit reference
        assert_relative_eq!(
            MooreLaw::new(1.0, 0.05).unwrap().price(10.0).unwrap(),
            0.606_530_659_712_633_4,
            epsilon = 1e-15
        );
    }

    #[test]
    fn negative_time_rejected() {
        let law = MooreLaw::new(1.0, 0.1).unwrap();
        assert!(matches!(
            law.price(-1.0),
            Err(Error::Domain { name: "t", .. })
        ));
        assert!(law.price(f64::NAN).is_err());
        let cd = CostDecline::new(1.0, 1.0).unwrap();
        assert!(cd.marginal_cost(-0.1).is_err());
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(MooreLaw::new(0.0, 1.0).is_err());
        assert!(MooreLaw::new(1.0, -1.0).is_err());
        assert!(WrightLaw::new(1.0, 0.0).is_err());
        assert!(AIScalingLaw::new(1.0, 0.05, 2.0, f64::INFINITY).is_err());
        assert!(CostDecline::new(1.0, 0.0).is_err());
        assert!(ComputeTrajectory::new(1.0, -0.1, 1.0).is_err());
    }

    #[test]
    fn wright_examples() {
        assert_eq!(WrightLaw::new(1.0, 1.0).unwrap().price(1.0).unwrap(), 1.0);
        assert_relative_eq!(
            WrightLaw::new(1.0, 0.5).unwrap().price(4.0).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        let eighty = WrightLaw::from_progress_ratio(100.0, 0.8).unwrap();
        assert_relative_eq!(eighty.exponent(), 0.321_928_094_887_362_35, epsilon = 1e-15);
        assert_relative_eq!(eighty.price(2.0).unwrap(), 80.0, epsilon = 1e-12);
        assert!(eighty.price(0.0).is_err());
        assert!(eighty.price(-3.0).is_err());
    }

    #[test]
    fn scaling_law_examples() {
        let unit = AIScalingLaw::new(1.0, 0.05, 2.0, 1.0).unwrap();
        assert_eq!(unit.excess_loss(1.0).unwrap(), 1.0);
        assert_relative_eq!(unit.excess_loss(1e20).unwrap(), 0.1, epsilon = 1e-14);
        assert_relative_eq!(
            AIScalingLaw::new(2.0, 1.0, 1.0, 1.0)
                .unwrap()
                .excess_loss(2.0)
                .unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert!(unit.excess_loss(0.0).is_err());

        assert_eq!(unit.loss_per_character(1.0).unwrap(), 1.0);
        let floored = AIScalingLaw::new(1.0, 1.0, 1.0, 1.0)
            .unwrap()
            .with_irreducible_loss(0.7)
            .unwrap();
        assert_relative_eq!(
            floored.loss_per_character(10.0).unwrap(),
            0.8,
            epsilon = 1e-15
        );
        let asymptote = AIScalingLaw::new(1.0, 0.05, 1.0, 1.0)
            .unwrap()
            .with_irreducible_loss(0.5)
            .unwrap();
        assert!((asymptote.loss_per_character(1e300).unwrap() - 0.5).abs() < 1e-6);

        assert_eq!(unit.quality_adjusted_price(1.0).unwrap(), 1.0);
        assert_relative_eq!(
            unit.quality_adjusted_price(1e10).unwrap(),
            0.1,
            epsilon = 1e-14
        );
        let three = AIScalingLaw::new(2.0, 1.0, 1.0, 3.0).unwrap();
        assert_relative_eq!(
            three.quality_adjusted_price(2.0).unwrap(),
            3.0,
            epsilon = 1e-15
        );
        assert!(three.quality_adjusted_price(-1.0).is_err());
    }

    #[test]
    fn marginal_cost_examples() {
        assert_eq!(
            CostDecline::new(1.0, 1.0)
                .unwrap()
                .marginal_cost(0.0)
                .unwrap(),
            1.0
        );
        assert_relative_eq!(
            CostDecline::new(LN_2, 1.0)
                .unwrap()
                .marginal_cost(1.0)
                .unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            CostDecline::new(0.5, 2.0)
                .unwrap()
                .marginal_cost(2.0)
                .unwrap(),
            0.135_335_283_236_612_7,
            epsilon = 1e-15
        );
    }

    #[test]
    fn compute_examples() {
        let cd = CostDecline::new(1.0, 1.0).unwrap();
        let t0 = ComputeTrajectory::new(1.0, 0.0, 1.0).unwrap();
        assert_eq!(t0.compute_at(&cd, 0.0).unwrap(), 1.0);
        let lvl = ComputeTrajectory::new(2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(lvl.compute_at(&cd, 0.0).unwrap(), 2.0 * E, epsilon = 1e-15);
        assert_relative_eq!(
            lvl.compute_at(&cd, 0.0).unwrap(),
            5.436_563_656_918_09,
            epsilon = 1e-14
        );
        let cd_half = CostDecline::new(0.5, 1.0).unwrap();
        let g2 = ComputeTrajectory::new(1.0, 0.0, 2.0).unwrap();
        assert_relative_eq!(
            g2.compute_at(&cd_half, 3.0).unwrap(),
            20.085_536_923_187_668,
            epsilon = 1e-14
        );
        assert!(g2.compute_at(&cd_half, -1.0).is_err());
    }

    #[test]
    fn moore_equivalent_examples() {
        let m = WrightLaw::new(1.0, 0.5)
            .unwrap()
            .moore_equivalent(1.0, 0.2)
            .unwrap();
        assert_relative_eq!(m.first_unit_price(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(m.rate(), 0.1, epsilon = 1e-15);
        let m = WrightLaw::new(4.0, 1.0)
            .unwrap()
            .moore_equivalent(2.0, 1.0)
            .unwrap();
        assert_relative_eq!(m.first_unit_price(), 2.0, epsilon = 1e-15);
        assert_eq!(m.rate(), 1.0);

        let w = WrightLaw::new(4.0, 1.0).unwrap();
        for i in 0..=10 {
            let t = i as f64;
            let direct = w.price(2.0 * t.exp()).unwrap();
            assert!((m.price(t).unwrap() - direct).abs() <= 1e-12);
        }
        assert!(w.moore_equivalent(0.0, 1.0).is_err());
        assert!(w.moore_equivalent(1.0, 0.0).is_err());
    }
}
