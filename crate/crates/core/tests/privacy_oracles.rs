//! MI and quadratic fitting against independent computations.

use parl::privacy::{f_max, fit_quadratic, mi_cap, mutual_information, HistoryQueues, LambdaSchedule, MiTracker};
use parl::{ActionId, StateId};
use proptest::prelude::*;

/// Σ p(s,a)·log2(p(s,a) / (p(s)·p(a))) written the long way: joint and
/// marginals each counted by a separate pass over the history.
fn oracle_mi(pairs: &[(usize, usize)]) -> f64 {
    let n = pairs.len() as f64;
    let mut total = 0.0;
    let mut seen = std::collections::BTreeSet::new();
    for &(s, a) in pairs {
        if !seen.insert((s, a)) {
            continue;
        }
        let joint = pairs.iter().filter(|&&p| p == (s, a)).count() as f64 / n;
        let ps = pairs.iter().filter(|p| p.0 == s).count() as f64 / n;
        let pa = pairs.iter().filter(|p| p.1 == a).count() as f64 / n;
        total += joint * (joint / (ps * pa)).log2();
    }
    total
}

fn history(s_n: usize, a_n: usize, pairs: &[(usize, usize)]) -> HistoryQueues {
    let states: Vec<StateId> = pairs.iter().map(|p| StateId(p.0)).collect();
    let actions: Vec<ActionId> = pairs.iter().map(|p| ActionId(p.1)).collect();
    HistoryQueues::from_sequences(s_n, a_n, &states, &actions).unwrap()
}

fn instance() -> impl Strategy<Value = (usize, usize, Vec<(usize, usize)>)> {
    (1usize..=8, 1usize..=21)
        .prop_flat_map(|(s_n, a_n)| (Just(s_n), Just(a_n), prop::collection::vec((0..s_n, 0..a_n), 1..=200)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn mi_matches_contingency_oracle((s_n, a_n, pairs) in instance()) {
        let got: f64 = mutual_information(&history(s_n, a_n, &pairs)).unwrap();
        prop_assert!((got - oracle_mi(&pairs)).abs() <= 1e-12);
        prop_assert!(got >= 0.0 && got <= mi_cap::<f64>(s_n, a_n) + 1e-12);
    }

    #[test]
    fn coupled_history_reaches_the_entropy(s_n in 1usize..=8, reps in 1usize..10) {
        // a = s, each state equally often: I = H(S) = log2 s_n.
        let pairs: Vec<(usize, usize)> = (0..s_n * reps).map(|i| (i % s_n, i % s_n)).collect();
        let got: f64 = mutual_information(&history(s_n, s_n, &pairs)).unwrap();
        prop_assert!((got - (s_n as f64).log2()).abs() <= 1e-12);
    }

    #[test]
    fn planted_quadratic_is_recovered(
        a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0,
        t0 in -20.0f64..20.0, stride in 0.1f64..3.0,
    ) {
        let pts: Vec<(f64, f64)> = (0..50).map(|i| {
            let t = t0 + stride * i as f64;
            (t, (a * t + b) * t + c)
        }).collect();
        let fit = fit_quadratic(&pts).unwrap();
        prop_assert!((fit.a - a).abs() <= 1e-9 && (fit.b - b).abs() <= 1e-9 && (fit.c - c).abs() <= 1e-9, "{fit:?}");
    }

    #[test]
    fn three_points_interpolate(ys in prop::array::uniform3(-10.0f64..10.0), t0 in -50.0f64..50.0, gaps in prop::array::uniform2(0.5f64..20.0)) {
        let ts = [t0, t0 + gaps[0], t0 + gaps[0] + gaps[1]];
        let pts: Vec<(f64, f64)> = ts.iter().copied().zip(ys).collect();
        let fit = fit_quadratic(&pts).unwrap();
        for (t, y) in pts {
            prop_assert!((fit.eval(t) - y).abs() <= 1e-12 * (1.0 + y.abs()) * 10.0);
        }
    }
}

#[test]
fn tracker_follows_a_saturating_trace() {
    // A learner that stops exploring: actions copy the state after step 100.
    let mut tracker = MiTracker::<f64>::new(4, 21, None, LambdaSchedule::new(0.8, 50).unwrap(), 8000).unwrap();
    let cap = tracker.cap();
    assert_eq!(tracker.lambda(), 0.8 * cap);
    for t in 0..2000u64 {
        let s = (t % 4) as usize;
        let a = if t < 100 { (t * 7 % 21) as usize } else { s };
        tracker.record(t, StateId(s), ActionId(a)).unwrap();
        if tracker.refit_due() {
            tracker.refit().unwrap();
        }
    }
    let last = tracker.refits().last().unwrap();
    assert_eq!(last.lambda, tracker.lambda());
    assert!(last.fmax <= cap && last.fmax >= 1.5, "{last:?}");
    assert!((last.lambda - 0.8 * last.fmax).abs() < 1e-12);
    assert_eq!(f_max(&last.fit, 8000.0, Some(cap)), last.fmax);
}
