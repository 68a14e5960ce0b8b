//! Technology price-decline laws linked to adoption S-curves.
//!
//! Price trajectories (exponential in time, power in cumulative production,
//! power in training compute) feed CES and VES share equations, which
//! reduce to logistic and log-logistic adoption curves. The crate also
//! fits those laws to observed series and ships brute-force oracles that
//! check every closed form numerically.
//!
//! Modules:
//! - [`pricelaws`]: price, loss, marginal-cost and compute trajectories.
//! - [`adoption`]: CES demand, share curves, VES dynamics and half-lives.
//! - [`estimation`]: OLS and logistic-mean least-squares fits, marginal
//!   effects and seeded synthetic data.
//! - [`oracle`]: independent numerical verifiers.

pub mod adoption;
pub mod error;
pub mod estimation;
pub mod oracle;
pub mod pricelaws;

mod num;

pub use error::{Error, Result};
