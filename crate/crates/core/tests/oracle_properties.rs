use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scurve_core::adoption::{ces_demand, CesPreferences, MarketState};
use scurve_core::oracle::{ces_utility, maximize_utility_numeric};

fn draw(rng: &mut ChaCha8Rng) -> (CesPreferences, MarketState) {
    let prefs =
        CesPreferences::new(rng.random_range(0.05..0.95), rng.random_range(0.2..5.0)).unwrap();
    let mkt = MarketState::new(
        rng.random_range(0.1..10.0),
        rng.random_range(0.1..10.0),
        rng.random_range(1.0..1000.0),
    )
    .unwrap();
    (prefs, mkt)
}

#[test]
fn numeric_optimum_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_x, mut worst_y): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let (prefs, mkt) = draw(&mut rng);
        let closed = ces_demand(&prefs, &mkt);
        let numeric = maximize_utility_numeric(&prefs, &mkt, 200);
        worst_x = worst_x.max((numeric.x - closed.x).abs() / closed.x);
        worst_y = worst_y.max((numeric.y - closed.y).abs() / closed.y);
        assert!(
            numeric.residual.abs() <= 1e-10 * mkt.income,
            "{:?}",
            numeric
        );

        let u_closed = ces_utility(&prefs, closed.x, closed.y);
        assert!(
            (numeric.utility - u_closed).abs() <= 1e-12 * u_closed,
            "{} vs {}",
            numeric.utility,
            u_closed
        );
    }
    assert!(
        worst_x <= 1e-6 && worst_y <= 1e-6,
        "x {worst_x:e}, y {worst_y:e}"
    );
}

#[test]
fn refinement_depth_does_not_move_the_answer() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (prefs, mkt) = draw(&mut rng);
        let a = maximize_utility_numeric(&prefs, &mkt, 150);
        let b = maximize_utility_numeric(&prefs, &mkt, 400);
        assert!((a.x - b.x).abs() <= 1e-6 * b.x);
        assert!((a.y - b.y).abs() <= 1e-6 * b.y);
    }
}

#[test]
fn cheaper_emergent_good_is_bought_more() {
    let prefs = CesPreferences::new(0.4, 1.8).unwrap();
    let mut last = 0.0;
    for i in (1..=20).rev() {
        let mkt = MarketState::new(i as f64 * 0.5, 1.0, 100.0).unwrap();
        let x = maximize_utility_numeric(&prefs, &mkt, 200).x;
        assert!(x > last);
        last = x;
    }
}
