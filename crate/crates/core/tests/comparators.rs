use qbos::comparators::{
    classical_equilibria, classical_payoff, mw_equilibria, mw_payoff, ClassicalMove,
    EquilibriumKind, TacticProfile,
};
use qbos::game::PayoffMatrix;

fn instances() -> Vec<PayoffMatrix> {
    vec![
        PayoffMatrix::default(),
        PayoffMatrix::new(10.0, 4.0, -2.0).unwrap(),
        PayoffMatrix::new(1.0, 0.9, 0.85).unwrap(),
    ]
}

fn grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

fn closed_form(pm: &PayoffMatrix, p: f64, q: f64) -> f64 {
    (p * q + (1.0 - p) * (1.0 - q)) * (pm.alpha() + pm.beta()) / 2.0
        + (p * (1.0 - q) + (1.0 - p) * q) * pm.gamma()
}

#[test]
fn density_route_matches_closed_form() {
    for pm in instances() {
        for &p in &grid() {
            for &q in &grid() {
                let v = mw_payoff(&pm, &TacticProfile::new(p, q).unwrap()).unwrap();
                let c = closed_form(&pm, p, q);
                assert!(
                    (v.a - c).abs() < 1e-12 && (v.b - c).abs() < 1e-12,
                    "{p} {q}: {v:?} vs {c}"
                );
            }
        }
    }
}

#[test]
fn flip_symmetry() {
    for pm in instances() {
        for &p in &grid() {
            for &q in &grid() {
                let v = mw_payoff(&pm, &TacticProfile::new(p, q).unwrap()).unwrap();
                let w = mw_payoff(&pm, &TacticProfile::new(1.0 - p, 1.0 - q).unwrap()).unwrap();
                assert!((v.a - w.a).abs() < 1e-12 && (v.b - w.b).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn bilinear_in_tactic_probabilities() {
    for pm in instances() {
        let corner = |p: f64, q: f64| mw_payoff(&pm, &TacticProfile::new(p, q).unwrap()).unwrap();
        let (c00, c01, c10, c11) = (
            corner(0.0, 0.0),
            corner(0.0, 1.0),
            corner(1.0, 0.0),
            corner(1.0, 1.0),
        );
        for &p in &grid() {
            for &q in &grid() {
                let v = corner(p, q);
                let interp = |f: fn(&qbos::game::PayoffPair) -> f64| {
                    (1.0 - p) * (1.0 - q) * f(&c00)
                        + (1.0 - p) * q * f(&c01)
                        + p * (1.0 - q) * f(&c10)
                        + p * q * f(&c11)
                };
                assert!((v.a - interp(|x| x.a)).abs() < 1e-12);
                assert!((v.b - interp(|x| x.b)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn classical_equilibria_satisfy_the_nash_inequalities() {
    use ClassicalMove::*;
    for pm in instances() {
        let eqs = classical_equilibria(&pm);
        assert_eq!(eqs, vec![(O, O), (T, T)]);
        for (a, b) in eqs {
            let here = classical_payoff(&pm, a, b);
            for other in ClassicalMove::ALL {
                assert!(classical_payoff(&pm, other, b).a <= here.a);
                assert!(classical_payoff(&pm, a, other).b <= here.b);
            }
        }
        for (a, b) in [(O, T), (T, O)] {
            let here = classical_payoff(&pm, a, b);
            assert_eq!(here.a, pm.gamma());
            let a_gain = ClassicalMove::ALL
                .iter()
                .any(|&x| classical_payoff(&pm, x, b).a > here.a);
            assert!(a_gain);
        }
    }
}

#[test]
fn tactic_game_equilibria() {
    for pm in instances() {
        let eqs = mw_equilibria(&pm).unwrap();
        let matched = (pm.alpha() + pm.beta()) / 2.0;
        let pure: Vec<_> = eqs
            .iter()
            .filter(|e| e.kind == EquilibriumKind::Pure)
            .collect();
        assert_eq!(pure.len(), 2);
        for e in &pure {
            assert_eq!(e.profile.p(), e.profile.q());
            assert_eq!(e.payoff.a, matched);
        }
        // The interior point where both players are indifferent.
        assert!(eqs.iter().any(|e| e.kind == EquilibriumKind::Interior
            && e.profile.p() == 0.5
            && e.profile.q() == 0.5));
    }
}

#[test]
fn worst_case_mismatch_payoffs() {
    use ClassicalMove::*;
    for pm in instances() {
        assert_eq!(classical_payoff(&pm, O, T).a, pm.gamma());
        let v = mw_payoff(&pm, &TacticProfile::new(1.0, 0.0).unwrap()).unwrap();
        assert!((v.a - pm.gamma()).abs() < 1e-12 && (v.b - pm.gamma()).abs() < 1e-12);
        assert!(pm.mixed_equilibrium_payoff() > pm.gamma());
    }
}
