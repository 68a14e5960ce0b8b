//! Guarded scalar helpers shared by the model code.

/// `base^exponent` restricted to `base > 0`; a non-positive base yields
/// NaN instead of the sign and zero special cases of `powf`.
#[inline]
pub(crate) fn pow_pos(base: f64, exponent: f64) -> f64 {
    if base.is_nan() || base <= 0.0 {
        return f64::NAN;
    }
    base.powf(exponent)
}

/// `1 / (1 + exp(z))`, written so neither tail overflows.
#[inline]
pub(crate) fn one_over_one_plus_exp(z: f64) -> f64 {
    if z > 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_pos_guards_domain() {
        assert_eq!(pow_pos(4.0, 0.5), 2.0);
        assert_eq!(pow_pos(1e-300, 0.5), 1e-150);
        assert!(pow_pos(0.0, 0.0).is_nan());
        assert!(pow_pos(-8.0, 1.0 / 3.0).is_nan());
        assert!(pow_pos(f64::NAN, 1.0).is_nan());
    }

    #[test]
    fn logistic_tails_stay_finite() {
        assert_eq!(one_over_one_plus_exp(0.0), 0.5);
        assert!(one_over_one_plus_exp(800.0) >= 0.0);
        assert_eq!(one_over_one_plus_exp(-800.0), 1.0);
        let z = 1.3;
        assert!((one_over_one_plus_exp(z) + one_over_one_plus_exp(-z) - 1.0).abs() < 1e-15);
    }
}
