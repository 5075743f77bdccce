mod common;

use common::{angle, angles, outcome_probabilities, payoffs_from_probabilities, rotation_product};
use proptest::prelude::*;
use qbos::game::{joint_probabilities, pure_payoff, pure_payoff_oracle, PayoffMatrix};
use qbos::quantum::{su2_from_angles, StrategyAngles};

fn payoffs() -> impl Strategy<Value = PayoffMatrix> {
    (-5.0f64..5.0, 0.01f64..5.0, 0.01f64..5.0)
        .prop_map(|(g, d1, d2)| PayoffMatrix::new(g + d1 + d2, g + d1, g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn probabilities_normalized_and_symmetric(a in angles(), b in angles()) {
        let p = joint_probabilities(&a, &b);
        prop_assert!((p.total() - 1.0).abs() < 1e-12);
        prop_assert!((p.p_oo - p.p_tt).abs() < 1e-12);
        prop_assert!((p.p_ot - p.p_to).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_density_trace(pm in payoffs(), a in angles(), b in angles()) {
        let closed = pure_payoff(&pm, &a, &b);
        let brute = pure_payoff_oracle(&pm, &su2_from_angles(a), &su2_from_angles(b));
        prop_assert!((closed.a - brute.a).abs() < 1e-10);
        prop_assert!((closed.b - brute.b).abs() < 1e-10);
    }

    #[test]
    fn closed_form_matches_amplitudes(pm in payoffs(), a in angles(), b in angles()) {
        let ra = rotation_product(a.theta(), a.phi(), a.psi());
        let rb = rotation_product(b.theta(), b.phi(), b.psi());
        let probs = outcome_probabilities(&ra, &rb);
        let p = joint_probabilities(&a, &b);
        for (x, y) in [p.p_oo, p.p_ot, p.p_to, p.p_tt].iter().zip(probs) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let (va, vb) = payoffs_from_probabilities(&probs, pm.alpha(), pm.beta(), pm.gamma());
        let closed = pure_payoff(&pm, &a, &b);
        prop_assert!((closed.a - va).abs() < 1e-10 && (closed.b - vb).abs() < 1e-10);
    }

    #[test]
    fn payoffs_equal_and_in_range(pm in payoffs(), a in angles(), b in angles()) {
        let v = pure_payoff(&pm, &a, &b);
        prop_assert!((v.a - v.b).abs() < 1e-12);
        let slack = 1e-12 * pm.alpha().abs().max(1.0);
        prop_assert!(v.a >= pm.gamma() - slack);
        prop_assert!(v.a <= (pm.alpha() + pm.beta()) / 2.0 + slack);
    }

    #[test]
    fn phi_does_not_matter(a in angles(), b in angles(), pa in angle(), pb in angle()) {
        let pm = PayoffMatrix::default();
        let a2 = StrategyAngles::new(a.theta(), pa, a.psi()).unwrap();
        let b2 = StrategyAngles::new(b.theta(), pb, b.psi()).unwrap();
        let v1 = pure_payoff(&pm, &a, &b);
        let v2 = pure_payoff(&pm, &a2, &b2);
        prop_assert!((v1.a - v2.a).abs() < 1e-12 && (v1.b - v2.b).abs() < 1e-12);
    }
}
