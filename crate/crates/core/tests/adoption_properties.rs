use proptest::prelude::*;
use scurve_core::adoption::*;
use scurve_core::oracle::grid_scan_monotone;
use scurve_core::pricelaws::{ComputeTrajectory, CostDecline, MooreLaw, WrightLaw};

fn scenario() -> impl Strategy<Value = VesScenario> {
    (
        1.5f64..1e4,
        0.01f64..0.99,
        0.05f64..2.0,
        0.5f64..2.0,
        0.1f64..3.0,
        0.0f64..2.0,
        0.0f64..200.0,
    )
        .prop_map(|(k, gd, tau, a, f, g, market)| {
            VesScenario::new(
                k,
                gd,
                CostDecline::new(tau, a).unwrap(),
                ComputeTrajectory::new(1.0, f, g).unwrap(),
                market,
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shares_in_open_interval_and_decreasing_in_own_price(
        alpha in 0.05f64..0.95, sigma in 0.1f64..5.0, py in 0.1f64..10.0,
    ) {
        let p = CesPreferences::new(alpha, sigma).unwrap();
        let report = grid_scan_monotone(|px| share_from_prices(&p, px, py).unwrap(), 0.1, 10.0, 200);
        prop_assert!(report.is_decreasing(), "{:?}", report);
        for i in 0..200 {
            let px = 0.1 + 9.9 * i as f64 / 199.0;
            let s = share_from_prices(&p, px, py).unwrap();
            prop_assert!(s > 0.0 && s < 1.0);
        }
    }

    #[test]
    fn demand_homogeneity_and_budget(
        alpha in 0.05f64..0.95, sigma in 0.1f64..5.0,
        px in 0.1f64..10.0, py in 0.1f64..10.0, m in 0.5f64..1e3, scale in 1e-3f64..1e3,
    ) {
        let p = CesPreferences::new(alpha, sigma).unwrap();
        let base = ces_demand(&p, &MarketState::new(px, py, m).unwrap());
        let scaled = ces_demand(&p, &MarketState::new(px * scale, py * scale, m * scale).unwrap());
        prop_assert!((base.x - scaled.x).abs() <= 1e-10 * base.x);
        prop_assert!((base.y - scaled.y).abs() <= 1e-10 * base.y);
        prop_assert!((px * base.x + py * base.y - m).abs() <= 1e-10 * m);
        prop_assert!((base.share_x - share_from_prices(&p, px, py).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn sahal_equivalence(
        alpha in 0.05f64..0.95, sigma in 0.1f64..5.0, b in 0.1f64..10.0, s in 0.05f64..2.0,
        x0 in 0.5f64..50.0, gx in 0.01f64..1.0,
    ) {
        let p = CesPreferences::new(alpha, sigma).unwrap();
        let w = WrightLaw::new(b, s).unwrap();
        let m = w.moore_equivalent(x0, gx).unwrap();
        for i in 0..100 {
            let t = 20.0 * i as f64 / 99.0;
            let via_wright = share_wright(&p, &w, x0 * (gx * t).exp()).unwrap();
            let via_moore = share_moore(&p, &m, t).unwrap();
            prop_assert!((via_wright - via_moore).abs() <= 1e-12);
        }
    }

    #[test]
    fn ves_forms_agree(sc in scenario(), t in 0.0f64..6.0, p_ai in 0.01f64..0.99) {
        let traj = sc.trajectory();
        let cost = sc.cost();
        let compute = traj.compute_at(cost, t).unwrap();
        prop_assume!(compute.is_finite());

        // constant price: share in elasticity form vs share in compute form
        let sigma = ves_sigma(sc.gamma_delta(), 1.0, compute, traj.initial()).unwrap();
        let s30 = ves_share(sc.k(), p_ai, sigma).unwrap();
        let s31 = ves_share_in_compute(sc.k(), p_ai, sc.gamma_delta(), compute, traj.initial()).unwrap();
        prop_assert!((s30 - s31).abs() <= 1e-12);

        // extended closed form vs price, compute and elasticity composed
        let theta = cost.marginal_cost(t).unwrap();
        prop_assume!(theta > 0.0 && theta < 1.0);
        let composed = ves_share(sc.k(), theta, sigma).unwrap();
        let closed = ves_extended_share(&sc, t).unwrap();
        prop_assert!((composed - closed).abs() <= 1e-12, "{} vs {}", composed, closed);

        let d = logit_share(&sc, t).unwrap();
        prop_assert!((d.log_k - d.price_decline * d.elasticity - d.value).abs() <= 1e-10);
        prop_assert!((d.elasticity - sc.elasticity(t).unwrap()).abs() <= 1e-12 * d.elasticity.max(1.0));
        prop_assert!((d.share() - closed).abs() <= 1e-12);
    }

    #[test]
    fn log_odds_round_trip(s in 1e-9f64..(1.0 - 1e-9)) {
        let v = log_odds_against(s).unwrap();
        prop_assert!((share_from_log_odds(v) - s).abs() <= 1e-12);
    }

    #[test]
    fn extended_share_increasing(sc in scenario()) {
        prop_assume!(sc.trajectory().level() + sc.trajectory().coupling() > 0.05);
        let t_half = half_life_implicit(&sc).unwrap();
        let report = grid_scan_monotone(|t| ves_extended_share(&sc, t).unwrap(), 0.0, t_half, 300);
        prop_assert!(report.is_increasing(), "{:?}", report);
        // past the midpoint the share saturates in f64; the log-odds does not
        let report = grid_scan_monotone(|t| logit_share(&sc, t).unwrap().value, 0.0, 4.0 * t_half, 300);
        prop_assert!(report.is_decreasing(), "{:?}", report);
    }

    #[test]
    fn implicit_half_life_hits_half(sc in scenario()) {
        prop_assume!(sc.trajectory().level() + sc.trajectory().coupling() > 0.0);
        let t = half_life_implicit(&sc).unwrap();
        prop_assert!((ves_extended_share(&sc, t).unwrap() - 0.5).abs() <= 1e-9);
        prop_assert!(logit_share(&sc, t).unwrap().value.abs() <= 1e-10);
    }

    #[test]
    fn half_life_monotone_in_each_argument(
        k in 1.5f64..1e5, sigma in 0.05f64..5.0, tau in 0.05f64..5.0, a in 0.5f64..2.0, bump in 1.01f64..3.0,
    ) {
        let base = half_life(k, sigma, tau, a).unwrap();
        prop_assert!(half_life(k, sigma * bump, tau, a).unwrap() < base);
        prop_assert!(half_life(k, sigma, tau * bump, a).unwrap() < base);
        prop_assert!(half_life(k * bump, sigma, tau, a).unwrap() > base);
        prop_assert_eq!(half_life(k, sigma, tau, 1.0).unwrap(), k.ln() / (tau * sigma));
    }
}

#[test]
fn cdf_equivalence_on_grids() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p =
            CesPreferences::new(rng.random_range(0.05..0.95), rng.random_range(0.2..4.0)).unwrap();
        let b = rng.random_range(0.2..20.0);
        let moore = MooreLaw::new(b, rng.random_range(0.05..1.0)).unwrap();
        let wright = WrightLaw::new(b, rng.random_range(0.05..1.5)).unwrap();
        let lc = logistic_of_moore(&p, &moore).unwrap();
        let llc = loglogistic_of_wright(&p, &wright).unwrap();
        for i in 0..100 {
            let t = 50.0 * i as f64 / 99.0;
            worst = worst.max((lc.cdf(t) - share_moore(&p, &moore, t).unwrap()).abs());
            let x = 10f64.powf(-2.0 + 8.0 * i as f64 / 99.0);
            worst = worst.max((llc.cdf(x).unwrap() - share_wright(&p, &wright, x).unwrap()).abs());
        }
    }
    assert!(worst <= 1e-12, "max deviation {worst:e}");
}

#[test]
fn profit_sign_change_matches_grid() {
    // small market relative to spending: profit starts positive and turns negative
    let sc = VesScenario::new(
        9.0,
        0.3,
        CostDecline::new(0.4, 1.0).unwrap(),
        ComputeTrajectory::new(1.0, 0.0, 2.5).unwrap(),
        100.0,
    )
    .unwrap();
    let profit = |t: f64| industry_profit(&sc, t).unwrap();
    assert!(profit(0.0) > 0.0);

    let n = 200_001;
    let (lo, hi) = (0.0, 20.0);
    let step = (hi - lo) / (n - 1) as f64;
    let grid_cross = (1..n)
        .map(|i| lo + i as f64 * step)
        .find(|&t| profit(t) < 0.0)
        .expect("profit turns negative on the grid");

    // bisection on the bracketing grid cell
    let (mut a, mut b) = (grid_cross - step, grid_cross);
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        if profit(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    assert!((b - grid_cross).abs() <= step);
    assert!(profit(b - step) >= 0.0 || (b - step) < 0.0);
}
