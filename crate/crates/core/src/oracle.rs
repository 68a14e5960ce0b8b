//! Brute-force verifiers that share no code path with the closed forms
//! they check.

use serde::{Deserialize, Serialize};

use crate::adoption::{CesPreferences, MarketState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub x: f64,
    pub y: f64,
    pub utility: f64,
    pub iterations: usize,
    /// Budget slack `p_x x + p_y y − M`.
    pub residual: f64,
}

/// Bounds of the expenditure share searched, `[eps, 1 − eps]`.
const BOUNDARY_EPS: f64 = 1e-12;

/// CES utility `[alpha x^rho + (1 − alpha) y^rho]^(1/rho)`; the Cobb-Douglas
/// limit is used when `rho = 0`.
pub fn ces_utility(prefs: &CesPreferences, x: f64, y: f64) -> f64 {
    log_utility(prefs, x, y).exp()
}

/// `ln U(x, y)`, evaluated as
/// `pivot + ln1p(w expm1(rho (other − pivot))) / rho`, pivoting on whichever
/// of `ln x`, `ln y` has the larger `rho`-scaled value,
/// so that small `|rho|` loses no precision.
fn log_utility(prefs: &CesPreferences, x: f64, y: f64) -> f64 {
    let alpha = prefs.alpha();
    let rho = prefs.rho();
    let (lx, ly) = (x.ln(), y.ln());
    if rho == 0.0 {
        return alpha * lx + (1.0 - alpha) * ly;
    }
    // choose the larger of rho*ln x, rho*ln y as the pivot so expm1 stays bounded above
    let (pivot, other, w_other) = if rho * lx >= rho * ly {
        (lx, ly, 1.0 - alpha)
    } else {
        (ly, lx, alpha)
    };
    // alpha x^rho + (1-alpha) y^rho = e^(rho pivot) (1 + w_other expm1(rho (other - pivot)))
    let inner = w_other * (rho * (other - pivot)).exp_m1();
    pivot + inner.ln_1p() / rho
}

/// Golden-section maximisation of utility along the budget line.
///
/// The line is parameterised by the log-odds `z` of the expenditure share
/// on the emergent good, `w = p_x x / M`, so that `x = w M / p_x` and
/// `y = (1 − w) M / p_y` are both computed without cancellation. Utility
/// is strictly quasi-concave along the line, hence unimodal in `z`.
/// Probe points are ranked by `ln U(c) − ln U(d)`, assembled from
/// differences of small terms (see [`log_utility_gap`]) so the search keeps
/// resolving when the share on one good is tiny.
/// `refinement` is the number of golden-section reductions.
pub fn maximize_utility_numeric(
    prefs: &CesPreferences,
    mkt: &MarketState,
    refinement: usize,
) -> OptimizationResult {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;

    let bound = ((1.0 - BOUNDARY_EPS) / BOUNDARY_EPS).ln();
    let (mut a, mut b) = (-bound, bound);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut iterations = 0;
    while iterations < refinement && c < d {
        if log_utility_gap(prefs, mkt, c, d) > 0.0 {
            b = d;
            d = c;
            c = b - INV_PHI * (b - a);
        } else {
            a = c;
            c = d;
            d = a + INV_PHI * (b - a);
        }
        iterations += 1;
    }
    let z = 0.5 * (c + d);

    let w = 1.0 / (1.0 + (-z).exp());
    let v = 1.0 / (1.0 + z.exp());
    let x = w * mkt.income / mkt.p_x;
    let y = v * mkt.income / mkt.p_y;
    OptimizationResult {
        x,
        y,
        utility: ces_utility(prefs, x, y),
        iterations,
        residual: mkt.p_x * x + mkt.p_y * y - mkt.income,
    }
}

/// `ln U` at expenditure log-odds `zc` minus `ln U` at `zd`.
///
/// With `r = alpha / (1 − alpha)` and `e = rho (ln x − ln y)`,
/// `ln U = ln y + [ln(1 − alpha) + softplus(e + ln r)] / rho`, or
/// symmetrically pivoted on `x` when `e > 0`. The constant cancels and each
/// remaining term is differenced in closed form, so the error scales with
/// `|zc − zd|` rather than with `ln U`.
fn log_utility_gap(prefs: &CesPreferences, mkt: &MarketState, zc: f64, zd: f64) -> f64 {
    let alpha = prefs.alpha();
    let rho = prefs.rho();
    let dz = zc - zd;
    // ln w = -softplus(-z), ln(1 - w) = -softplus(z)
    let dlw = softplus_step(-zc, dz);
    let dlv = softplus_step(zc, -dz);
    if rho == 0.0 {
        return alpha * dlw + (1.0 - alpha) * dlv;
    }
    let log_ratio = (mkt.p_y / mkt.p_x).ln();
    let e = |z: f64| rho * (z + log_ratio);
    let (ec, ed) = (e(zc), e(zd));
    let log_r = (alpha / (1.0 - alpha)).ln();
    if ec.max(ed) <= 0.0 {
        dlv + softplus_step(ed + log_r, rho * dz) / rho
    } else {
        dlw + softplus_step(-ed - log_r, -rho * dz) / rho
    }
}

/// `softplus(b + h) − softplus(b)` with `softplus(z) = ln(1 + e^z)`,
/// written as `ln1p(logistic(b) expm1(h))` so a small step `h` keeps its
/// relative precision.
fn softplus_step(b: f64, h: f64) -> f64 {
    let logistic_b = 1.0 / (1.0 + (-b).exp());
    (logistic_b * h.exp_m1()).ln_1p()
}

/// Centred difference `(f(u + h) − f(u − h)) / 2h`.
pub fn finite_difference<F: Fn(f64) -> f64>(f: F, u: f64, h: f64) -> f64 {
    (f(u + h) - f(u - h)) / (2.0 * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneReport {
    /// Direction set by the first pair of grid values; `None` if they tie.
    pub direction: Option<Direction>,
    /// First grid point `x_i` whose value fails strict ordering against `x_(i-1)`.
    pub first_violation: Option<(usize, f64)>,
}

impl MonotoneReport {
    pub fn is_monotone(&self) -> bool {
        self.direction.is_some() && self.first_violation.is_none()
    }

    pub fn is_increasing(&self) -> bool {
        self.is_monotone() && self.direction == Some(Direction::Increasing)
    }

    pub fn is_decreasing(&self) -> bool {
        self.is_monotone() && self.direction == Some(Direction::Decreasing)
    }
}

/// Strict monotonicity of `f` on `n_points` uniform points of `[lo, hi]`,
/// compared exactly (no tolerance). Evaluation failures (NaN) count as
/// violations.
pub fn grid_scan_monotone<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    n_points: usize,
) -> MonotoneReport {
    assert!(
        lo < hi && n_points >= 2,
        "grid needs lo < hi and at least two points"
    );
    let point = |i: usize| lo + (hi - lo) * i as f64 / (n_points - 1) as f64;
    let mut prev = f(point(0));
    let first = f(point(1));
    let direction = if first > prev {
        Some(Direction::Increasing)
    } else if first < prev {
        Some(Direction::Decreasing)
    } else {
        None
    };
    let Some(dir) = direction else {
        return MonotoneReport {
            direction,
            first_violation: Some((1, point(1))),
        };
    };
    for i in 1..n_points {
        let x = point(i);
        let v = f(x);
        let ok = match dir {
            Direction::Increasing => v > prev,
            Direction::Decreasing => v < prev,
        };
        if !ok {
            return MonotoneReport {
                direction,
                first_violation: Some((i, x)),
            };
        }
        prev = v;
    }
    MonotoneReport {
        direction,
        first_violation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adoption::CesShare;
    use crate::pricelaws::MooreLaw;
    use approx::assert_relative_eq;

    #[test]
    fn symmetric_bundle() {
        let p = CesPreferences::new(0.5, 2.0).unwrap();
        let r = maximize_utility_numeric(&p, &MarketState::new(1.0, 1.0, 2.0).unwrap(), 200);
        assert_relative_eq!(r.x, 1.0, max_relative = 1e-8);
        assert_relative_eq!(r.y, 1.0, max_relative = 1e-8);
        assert!(r.residual.abs() <= 1e-10 * 2.0);
    }

    #[test]
    fn cobb_douglas_bundle() {
        let p = CesPreferences::new(0.25, 1.0).unwrap();
        let r = maximize_utility_numeric(&p, &MarketState::new(2.0, 1.0, 8.0).unwrap(), 200);
        assert_relative_eq!(r.x, 1.0, max_relative = 1e-8);
        assert_relative_eq!(r.y, 6.0, max_relative = 1e-8);
    }

    #[test]
    fn utility_limits() {
        // rho -> 0 approaches Cobb-Douglas smoothly
        let cd = CesPreferences::new(0.3, 1.0).unwrap();
        let near = CesPreferences::new(0.3, 1.0 + 1e-9).unwrap();
        assert_relative_eq!(
            ces_utility(&cd, 2.0, 5.0),
            ces_utility(&near, 2.0, 5.0),
            max_relative = 1e-8
        );
        // sigma = 2 => rho = 1/2: [0.3 sqrt(4) + 0.7 sqrt(9)]^2
        let p = CesPreferences::new(0.3, 2.0).unwrap();
        assert_relative_eq!(
            ces_utility(&p, 4.0, 9.0),
            (0.6f64 + 2.1).powi(2),
            max_relative = 1e-14
        );
        // sigma = 0.5 => rho = -1: 1 / (0.3/4 + 0.7/9)
        let p = CesPreferences::new(0.3, 0.5).unwrap();
        assert_relative_eq!(
            ces_utility(&p, 4.0, 9.0),
            1.0 / (0.3 / 4.0 + 0.7 / 9.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn finite_difference_examples() {
        assert!((finite_difference(|u| u * u, 3.0, 1e-6) - 6.0).abs() <= 1e-6);
        let c = crate::estimation::LogitCurve::new(0.0, 1.0).unwrap();
        assert!((finite_difference(|u| c.mean(u), 0.0, 1e-6) - 0.25).abs() <= 1e-8);
    }

    #[test]
    fn scans() {
        let sh = CesShare::new(30.0, 1.5).unwrap();
        assert!(grid_scan_monotone(|t| sh.moore(0.2, t).unwrap(), 0.0, 40.0, 1000).is_increasing());
        let law = MooreLaw::new(3.0, 0.2).unwrap();
        assert!(grid_scan_monotone(|t| law.price(t).unwrap(), 0.0, 40.0, 1000).is_decreasing());
        let r = grid_scan_monotone(|t| (t - 1.0).powi(2), 0.0, 3.0, 31);
        assert_eq!(r.direction, Some(Direction::Decreasing));
        assert_eq!(r.first_violation.map(|v| v.0), Some(11));
        assert!(!grid_scan_monotone(|_| 1.0, 0.0, 1.0, 5).is_monotone());
    }
}
