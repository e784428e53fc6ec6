//! Property tests for the mathematical invariants of the library.

use proptest::prelude::*;

use fracdec_core::market::{
    empirical_pmf, global_bin_grid, load_prices, log_returns, risk_factors, PricePanel,
    ReturnPanel, VarianceMode,
};
use fracdec_core::{
    binomial_entropy, crossing_threshold, elasticity, entropy_term, shannon_entropy,
    ubriaco_entropy, ActionSpec, DecisionProblem, FractionalOrder, LogBase, Measure, ProbVector,
    RiskParams, UtilityFunction,
};

fn order(v: f64) -> FractionalOrder {
    FractionalOrder::new(v).unwrap()
}

fn pmf_strategy(max_len: usize) -> impl Strategy<Value = ProbVector> {
    prop::collection::vec(0.01f64..1.0, 1..max_len)
        .prop_map(|w| ProbVector::normalized(&w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn entropy_is_permutation_invariant(pmf in pmf_strategy(8), alpha in 0.05f64..=1.0, rot in 0usize..8) {
        let alpha = order(alpha);
        let mut rotated = pmf.probs().to_vec();
        let k = rot % rotated.len();
        rotated.rotate_left(k);
        let rotated = ProbVector::new(rotated).unwrap();
        let h1 = ubriaco_entropy(&pmf, alpha, LogBase::Natural);
        let h2 = ubriaco_entropy(&rotated, alpha, LogBase::Natural);
        prop_assert_eq!(h1.to_bits(), h2.to_bits());
    }

    #[test]
    fn order_one_equals_shannon(pmf in pmf_strategy(8)) {
        let u = ubriaco_entropy(&pmf, FractionalOrder::ONE, LogBase::Natural);
        let s = shannon_entropy(&pmf, LogBase::Natural);
        prop_assert!((u - s).abs() <= 1e-12);
    }

    #[test]
    fn entropy_term_is_concave(p1 in 0.01f64..0.99, p2 in 0.01f64..0.99, t in 0.0f64..=1.0, alpha in 0.05f64..=1.0) {
        let alpha = order(alpha);
        let mix = t * p1 + (1.0 - t) * p2;
        let lhs = entropy_term(mix, alpha, LogBase::Natural).unwrap();
        let rhs = t * entropy_term(p1, alpha, LogBase::Natural).unwrap()
            + (1.0 - t) * entropy_term(p2, alpha, LogBase::Natural).unwrap();
        prop_assert!(lhs >= rhs - 1e-9);
    }

    #[test]
    fn binomial_peak_at_half(alpha in 0.05f64..=1.0, p in 0.0f64..=1.0) {
        let alpha = order(alpha);
        let peak = binomial_entropy(0.5, alpha, LogBase::Natural).unwrap();
        prop_assert!(binomial_entropy(p, alpha, LogBase::Natural).unwrap() <= peak + 1e-12);
    }

    #[test]
    fn risk_is_affine_in_lambda(
        outcomes in prop::collection::vec(0.1f64..50.0, 2..5),
        weights in prop::collection::vec(0.05f64..1.0, 2..5),
        alpha in 0.05f64..=1.0,
        lambdas in prop::collection::vec(0.0f64..=1.0, 100),
    ) {
        let n = outcomes.len().min(weights.len());
        let pmf = ProbVector::normalized(&weights[..n]).unwrap();
        let action = ActionSpec::new("a", outcomes[..n].to_vec(), pmf.probs().to_vec()).unwrap();
        let flipped: Vec<f64> = outcomes[..n].iter().map(|x| x * 0.5 + 1.0).collect();
        let other = ActionSpec::new("b", flipped, pmf.probs().to_vec()).unwrap();
        let problem = DecisionProblem::new(vec![action, other], UtilityFunction::identity()).unwrap();
        let alpha = order(alpha);
        for measure in [Measure::EuFe, Measure::EuFev] {
            let affine = problem.risk_affine(0, alpha, measure, LogBase::Natural).unwrap();
            for &lambda in &lambdas {
                let params = RiskParams::new(alpha, lambda, measure, LogBase::Natural).unwrap();
                let direct = problem.risk_value(0, &params).unwrap();
                prop_assert!((direct - affine.value(lambda)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn rank_at_lambda_zero_is_expected_utility_order(
        payoff_sets in prop::collection::vec(prop::collection::vec(0.1f64..20.0, 2..4), 2..5),
    ) {
        let actions: Vec<ActionSpec> = payoff_sets
            .iter()
            .enumerate()
            .map(|(i, xs)| {
                let probs = vec![1.0 / xs.len() as f64; xs.len()];
                ActionSpec::new(format!("a{i}"), xs.clone(), probs).unwrap()
            })
            .collect();
        let problem = DecisionProblem::new(actions, UtilityFunction::identity()).unwrap();
        let params = RiskParams::new(order(0.4), 0.0, Measure::EuFe, LogBase::Natural).unwrap();
        let ranked = problem.rank_actions(&params).unwrap();
        for w in ranked.windows(2) {
            let eu_a = problem.expected_utility(w[0]).unwrap();
            let eu_b = problem.expected_utility(w[1]).unwrap();
            prop_assert!(eu_a >= eu_b - 1e-12);
        }
    }

    #[test]
    fn equal_expected_utility_prefers_lower_entropy(
        outcomes in prop::collection::vec(0.5f64..20.0, 2..5),
        weights in prop::collection::vec(0.05f64..1.0, 2..5),
        alpha in 0.05f64..=1.0,
    ) {
        let n = outcomes.len().min(weights.len());
        let pmf = ProbVector::normalized(&weights[..n]).unwrap();
        let spread = ActionSpec::new("spread", outcomes[..n].to_vec(), pmf.probs().to_vec()).unwrap();
        // a degenerate action at the mean payoff has the same expected
        // utility under the identity utility, and zero entropy
        let mean: f64 = outcomes[..n].iter().zip(pmf.probs()).map(|(x, p)| x * p).sum();
        let point = ActionSpec::new("point", vec![mean], vec![1.0]).unwrap();
        let problem = DecisionProblem::new(vec![point, spread], UtilityFunction::identity()).unwrap();
        let alpha = order(alpha);
        let h_spread = problem.action_entropy(1, alpha, LogBase::Natural).unwrap();
        prop_assume!(h_spread > 1e-9);
        for k in 1..=10 {
            let lambda = k as f64 / 10.0;
            let params = RiskParams::new(alpha, lambda, Measure::EuFe, LogBase::Natural).unwrap();
            let r_point = problem.risk_value(0, &params).unwrap();
            let r_spread = problem.risk_value(1, &params).unwrap();
            prop_assert!(r_point < r_spread);
        }
    }

    #[test]
    fn equal_entropy_prefers_higher_expected_utility(
        outcomes in prop::collection::vec(0.5f64..20.0, 2..5),
        weights in prop::collection::vec(0.05f64..1.0, 2..5),
        bump in 0.1f64..10.0,
        alpha in 0.05f64..=1.0,
    ) {
        let n = outcomes.len().min(weights.len());
        let pmf = ProbVector::normalized(&weights[..n]).unwrap();
        let low = ActionSpec::new("low", outcomes[..n].to_vec(), pmf.probs().to_vec()).unwrap();
        let high_outcomes: Vec<f64> = outcomes[..n].iter().map(|x| x + bump).collect();
        let high = ActionSpec::new("high", high_outcomes, pmf.probs().to_vec()).unwrap();
        let problem = DecisionProblem::new(vec![high, low], UtilityFunction::identity()).unwrap();
        let alpha = order(alpha);
        // identical pmfs: entropies agree exactly for every order
        let h0 = problem.action_entropy(0, alpha, LogBase::Natural).unwrap();
        let h1 = problem.action_entropy(1, alpha, LogBase::Natural).unwrap();
        prop_assert_eq!(h0.to_bits(), h1.to_bits());
        for k in 0..10 {
            let lambda = k as f64 / 10.0;
            let params = RiskParams::new(alpha, lambda, Measure::EuFe, LogBase::Natural).unwrap();
            prop_assert!(problem.risk_value(0, &params).unwrap() < problem.risk_value(1, &params).unwrap());
        }
    }

    #[test]
    fn empirical_pmfs_partition_the_returns(
        series in prop::collection::vec(prop::collection::vec(-0.1f64..0.1, 8..20), 1..4),
        bins in 2usize..12,
    ) {
        let n = series.iter().map(Vec::len).fold(usize::MAX, usize::min);
        let trimmed: Vec<Vec<f64>> = series.iter().map(|s| s[..n].to_vec()).collect();
        prop_assume!(
            trimmed.iter().flatten().any(|&r| (r - trimmed[0][0]).abs() > 1e-9)
        );
        let labels: Vec<String> = (0..trimmed.len()).map(|i| format!("S{i}")).collect();
        let dates: Vec<chrono::NaiveDate> = (0..n as u64)
            .map(|i| chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap() + chrono::Days::new(i))
            .collect();
        let panel = ReturnPanel::from_series(labels, dates, trimmed).unwrap();
        let grid = global_bin_grid(&panel, bins).unwrap();
        for s in 0..panel.n_stocks() {
            let pmf = empirical_pmf(panel.returns(s), &grid).unwrap();
            prop_assert_eq!(pmf.len(), bins);
            let total: f64 = pmf.probs().iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn prices_round_trip_through_returns(
        start in 10.0f64..200.0,
        steps in prop::collection::vec(-0.05f64..0.05, 2..40),
    ) {
        let mut prices = vec![start];
        for s in &steps {
            let next = prices.last().unwrap() * (1.0 + s);
            prices.push(next);
        }
        let dates: Vec<chrono::NaiveDate> = (0..prices.len() as u64)
            .map(|i| chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap() + chrono::Days::new(i))
            .collect();
        let panel = PricePanel::new(vec!["A".into()], dates, vec![prices.clone()]).unwrap();
        let returns = log_returns(&panel);
        // rebuild the series from the first price and the returns
        let mut rebuilt = prices[0];
        for (k, r) in returns.returns(0).iter().enumerate() {
            rebuilt *= r.exp();
            let relative = (rebuilt - prices[k + 1]).abs() / prices[k + 1];
            prop_assert!(relative <= 1e-9);
        }
    }

    #[test]
    fn variance_is_shift_invariant(
        base in prop::collection::vec(-0.05f64..0.05, 10..30),
        shift in -0.02f64..0.02,
    ) {
        prop_assume!(base.iter().any(|&r| (r - base[0]).abs() > 1e-9));
        let shifted: Vec<f64> = base.iter().map(|r| r + shift).collect();
        let dates: Vec<chrono::NaiveDate> = (0..base.len() as u64)
            .map(|i| chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap() + chrono::Days::new(i))
            .collect();
        let panel = ReturnPanel::from_series(
            vec!["raw".into(), "shifted".into()],
            dates,
            vec![base.clone(), shifted],
        )
        .unwrap();
        let factors = risk_factors(
            &panel,
            &UtilityFunction::SShaped,
            order(0.4),
            LogBase::Natural,
            6,
            VarianceMode::Population,
        )
        .unwrap();
        // equal variances: both NV entries are 1
        prop_assert!((factors.nv[0] - 1.0).abs() <= 1e-9);
        prop_assert!((factors.nv[1] - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn theorem_grid_monotonicity_in_order() {
    let p_star = crossing_threshold(LogBase::Natural);
    let (a_lo, a_hi) = (order(0.2), order(0.8));
    for k in 1..50 {
        let p = p_star * k as f64 / 50.0;
        let lo = entropy_term(p, a_lo, LogBase::Natural).unwrap();
        let hi = entropy_term(p, a_hi, LogBase::Natural).unwrap();
        assert!(lo <= hi + 1e-12, "below p*: p={p}");
    }
    for k in 1..50 {
        let p = p_star + (1.0 - p_star) * k as f64 / 50.0;
        let lo = entropy_term(p, a_lo, LogBase::Natural).unwrap();
        let hi = entropy_term(p, a_hi, LogBase::Natural).unwrap();
        assert!(lo >= hi - 1e-12, "above p*: p={p}");
    }
}

#[test]
fn elasticity_is_increasing_and_convex() {
    let alpha = order(0.4);
    // increasing everywhere on (0, 1)
    let mut prev = 0.0;
    let mut p = 0.01;
    while p < 0.99 {
        let e = elasticity(p, alpha, LogBase::Natural).unwrap();
        assert!(e > prev, "elasticity must increase, p={p}");
        prev = e;
        p += 0.002;
    }
    // the second derivative is (α/p²)(−ln p)⁻³(2 + ln p), which is
    // non-negative exactly for p ≥ e⁻²; check convexity there
    let h = 0.002;
    let mut p = (-2.0f64).exp() + h;
    while p < 0.99 - 2.0 * h {
        let f0 = elasticity(p, alpha, LogBase::Natural).unwrap();
        let f1 = elasticity(p + h, alpha, LogBase::Natural).unwrap();
        let f2 = elasticity(p + 2.0 * h, alpha, LogBase::Natural).unwrap();
        assert!(f2 - 2.0 * f1 + f0 >= -1e-9, "second difference at p={p}");
        p += h;
    }
}

#[test]
fn csv_ingestion_survives_untrimmed_input() {
    let csv = "date, AAA , BBB\n2020-01-01, 10 , 20\n2020-01-02, 11 , 21\n";
    let panel = load_prices(csv.as_bytes()).unwrap();
    assert_eq!(panel.labels(), &["AAA".to_string(), "BBB".to_string()]);
}
