use proptest::prelude::*;
use scurve_core::estimation::*;
use scurve_core::oracle::finite_difference;
use scurve_core::pricelaws::MooreLaw;

fn ssr(curve: &LogitCurve, rows: &[(f64, f64)]) -> f64 {
    rows.iter().map(|&(u, y)| (y - curve.mean(u)).powi(2)).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ols_residuals_orthogonal(
        pts in prop::collection::vec((-50.0f64..50.0, -100.0f64..100.0), 3..40),
    ) {
        let mean_u = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let spread: f64 = pts.iter().map(|p| (p.0 - mean_u).abs()).sum();
        prop_assume!(spread > 1e-3);
        let fit = ols(&pts).unwrap();
        let resid: Vec<f64> = pts.iter().map(|&(u, v)| v - fit.intercept - fit.slope * u).collect();
        let scale: f64 = pts.iter().map(|&(u, v)| (u * v).abs() + v.abs()).sum::<f64>().max(1.0);
        prop_assert!(resid.iter().sum::<f64>().abs() <= 1e-9 * scale);
        prop_assert!(resid.iter().zip(&pts).map(|(e, p)| e * p.0).sum::<f64>().abs() <= 1e-9 * scale);
        prop_assert!((0.0..=1.0).contains(&fit.r_squared));
        prop_assert!(fit.ssr >= 0.0);
    }

    #[test]
    fn logit_fit_beats_truth(b0 in -4.0f64..4.0, b1 in 0.3f64..3.0, sd in 0.001f64..0.05, seed in 0u64..1000) {
        let truth = LogitCurve::new(b0, b1).unwrap();
        let mid = truth.midpoint();
        let design = linspace(mid - 4.0 / b1, mid + 4.0 / b1, 25);
        let series = generate_synthetic(&SyntheticLaw::Benchmark(truth), &design, sd, seed).unwrap();
        let fit = fit_logit(&series).unwrap();
        let fitted = fit.logit_curve().unwrap();
        let (at_fit, at_truth) = (ssr(&fitted, series.rows()), ssr(&truth, series.rows()));
        prop_assert!(at_fit <= at_truth * (1.0 + 1e-10), "{} > {}", at_fit, at_truth);
        prop_assert!((at_fit - fit.sum_squared_residuals).abs() <= 1e-12 * at_fit.max(1e-300) + 1e-300);
        prop_assert!((0.0..=1.0).contains(&fit.goodness));
    }

    #[test]
    fn marginal_effect_matches_difference(b0 in -20.0f64..20.0, b1 in -3.0f64..3.0, u in -10.0f64..10.0) {
        let c = LogitCurve::new(b0, b1).unwrap();
        let fd = finite_difference(|x| c.mean(x), u, 1e-5);
        prop_assert!((c.marginal_effect(u) - fd).abs() <= 1e-8);
    }

    #[test]
    fn nearest_rank_matches_sort(values in prop::collection::vec(-1e3f64..1e3, 1..200), q in 0.001f64..1.0) {
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let n = sorted.len();
        // smallest value with at least q n observations at or below it
        let expected = sorted
            .iter()
            .enumerate()
            .find(|(i, _)| (*i + 1) as f64 >= q * n as f64 - 1e-9)
            .map(|(_, v)| *v)
            .unwrap();
        prop_assert_eq!(nearest_rank(&values, q).unwrap(), expected);
    }
}

#[test]
fn moore_slope_interval_coverage() {
    let law = MooreLaw::new(5.0, 0.3).unwrap();
    let design = linspace(0.0, 20.0, 30);
    let covered = (0..100u64)
        .filter(|&seed| {
            let s = generate_synthetic(&SyntheticLaw::Moore(law), &design, 0.01, seed).unwrap();
            let fit = fit(&s).unwrap();
            (fit.slope + 0.3).abs() <= 3.0 * fit.slope_stderr
        })
        .count();
    assert!(
        covered >= 95,
        "{covered} of 100 intervals cover the true rate"
    );
}

#[test]
fn pseudo_r2_is_one_for_exact_curve() {
    let truth = LogitCurve::new(-12.0, 0.511).unwrap();
    let design = linspace(18.778, 25.580, 16);
    let s = generate_synthetic(&SyntheticLaw::Benchmark(truth), &design, 0.0, 0).unwrap();
    let fit = fit(&s).unwrap();
    assert!(fit.goodness > 1.0 - 1e-12);
    assert!((fit.slope - 0.511).abs() <= 1e-8);
}
