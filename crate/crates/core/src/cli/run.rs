use chrono::{SecondsFormat, Utc};

use super::args::{Mode, ScenarioConfig};
use super::report::{
    MethodEcho, MismatchComparison, PayoffEcho, ReportRecord, ResultRow, TOOL_NAME,
};
use crate::comparators::{
    classical_equilibria, classical_payoff, mw_equilibria, mw_payoff, ClassicalMove,
    EquilibriumKind, TacticProfile,
};
use crate::equilibrium::{
    best_response, constancy_residual, verify_equilibrium, EquilibriumCertificate, Player, Verdict,
    DEFAULT_GRID,
};
use crate::game::{pure_payoff, PayoffMatrix};
use crate::mixed::{mixed_payoff, StrategyDensity};
use crate::{Error, Result};

/// Executes the scenario and returns its report.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ReportRecord> {
    run(cfg).map_err(|e| with_context(cfg.mode, e))
}

fn with_context(mode: Mode, e: Error) -> Error {
    match e {
        Error::Domain(m) => Error::Domain(format!("{mode}: {m}")),
        Error::Config(m) => Error::Config(format!("{mode}: {m}")),
        Error::Usage(m) => Error::Usage(format!("{mode}: {m}")),
        other => other,
    }
}

fn strategy(d: &Option<StrategyDensity>, flag: &str) -> Result<StrategyDensity> {
    d.clone()
        .ok_or_else(|| Error::Usage(format!("missing --{flag}")))
}

fn point_label(a: &crate::quantum::StrategyAngles) -> String {
    StrategyDensity::PointMass(*a).to_string()
}

fn run(cfg: &ScenarioConfig) -> Result<ReportRecord> {
    let pm = &cfg.payoffs;
    let mut rec = ReportRecord {
        tool: TOOL_NAME.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
        mode: cfg.mode,
        payoffs: PayoffEcho {
            alpha: pm.alpha(),
            beta: pm.beta(),
            gamma: pm.gamma(),
            example_instance: cfg.example_instance,
        },
        method: None,
        strategy_a: cfg.strategy_a.as_ref().map(|d| d.to_string()),
        strategy_b: cfg.strategy_b.as_ref().map(|d| d.to_string()),
        tolerance: None,
        results: Vec::new(),
        verdict: None,
        classical_equilibria: None,
        mismatch_comparison: None,
    };
    match cfg.mode {
        Mode::Pure => {
            let (a, b) = (
                strategy(&cfg.strategy_a, "a")?,
                strategy(&cfg.strategy_b, "b")?,
            );
            let (StrategyDensity::PointMass(sa), StrategyDensity::PointMass(sb)) = (&a, &b) else {
                return Err(Error::Usage("pure mode needs point strategies".into()));
            };
            let p = pure_payoff(pm, sa, sb);
            rec.results.push(ResultRow {
                label: "pure".into(),
                strategy_a: rec.strategy_a.clone(),
                strategy_b: rec.strategy_b.clone(),
                payoff_a: Some(p.a),
                payoff_b: Some(p.b),
                ..Default::default()
            });
        }
        Mode::Mixed => {
            let (a, b) = (
                strategy(&cfg.strategy_a, "a")?,
                strategy(&cfg.strategy_b, "b")?,
            );
            let m = mixed_payoff(pm, &a, &b, cfg.method)?;
            rec.method = Some(MethodEcho::from(cfg.method));
            rec.results.push(ResultRow {
                label: "mixed".into(),
                strategy_a: rec.strategy_a.clone(),
                strategy_b: rec.strategy_b.clone(),
                payoff_a: Some(m.payoff.a),
                payoff_b: Some(m.payoff.b),
                se_a: m.standard_error.map(|s| s.a),
                se_b: m.standard_error.map(|s| s.b),
                ..Default::default()
            });
        }
        Mode::Verify => {
            let (a, b) = (
                strategy(&cfg.strategy_a, "a")?,
                strategy(&cfg.strategy_b, "b")?,
            );
            let cert = verify_equilibrium(pm, &a, &b, cfg.method, cfg.tolerance)?;
            rec.method = Some(MethodEcho::from(cfg.method));
            rec.tolerance = Some(cfg.tolerance);
            rec.verdict = Some(cert.verdict);
            rec.results.push(certificate_row("verify", &a, &b, &cert));
        }
        Mode::BestResponse => {
            let (opponent, player) = match (&cfg.strategy_a, &cfg.strategy_b) {
                (Some(a), None) => (a.clone(), Player::Bob),
                (None, Some(b)) => (b.clone(), Player::Alice),
                _ => {
                    return Err(Error::Usage(
                        "best-response needs exactly one of --a / --b".into(),
                    ))
                }
            };
            let br = best_response(pm, &opponent, player, cfg.method, DEFAULT_GRID)?;
            let residual = constancy_residual(pm, &opponent, player, DEFAULT_GRID, cfg.method)?;
            rec.method = Some(MethodEcho::from(cfg.method));
            let mut row = ResultRow {
                strategy_a: rec.strategy_a.clone(),
                strategy_b: rec.strategy_b.clone(),
                ..Default::default()
            };
            match player {
                Player::Alice => {
                    row.label = "best response of alice".into();
                    row.payoff_a = Some(br.value);
                    row.se_a = br.standard_error;
                    row.residual_a = Some(residual);
                    row.best_response_a = Some(point_label(&br.angles));
                }
                Player::Bob => {
                    row.label = "best response of bob".into();
                    row.payoff_b = Some(br.value);
                    row.se_b = br.standard_error;
                    row.residual_b = Some(residual);
                    row.best_response_b = Some(point_label(&br.angles));
                }
            }
            rec.results.push(row);
        }
        Mode::Classical => {
            let eqs = classical_equilibria(pm);
            for a in ClassicalMove::ALL {
                for b in ClassicalMove::ALL {
                    let p = classical_payoff(pm, a, b);
                    rec.results.push(ResultRow {
                        label: format!("({a},{b})"),
                        strategy_a: Some(a.to_string()),
                        strategy_b: Some(b.to_string()),
                        payoff_a: Some(p.a),
                        payoff_b: Some(p.b),
                        equilibrium: Some(eqs.contains(&(a, b))),
                        ..Default::default()
                    });
                }
            }
            rec.classical_equilibria =
                Some(eqs.iter().map(|(a, b)| format!("({a},{b})")).collect());
        }
        Mode::Mw => {
            let profiles: Vec<TacticProfile> = match cfg.tactics {
                Some(t) => vec![t],
                None => [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]
                    .iter()
                    .map(|&(p, q)| TacticProfile::new(p, q))
                    .collect::<Result<_>>()?,
            };
            for t in &profiles {
                let v = mw_payoff(pm, t)?;
                rec.results.push(ResultRow {
                    label: format!("p={}, q={}", t.p(), t.q()),
                    strategy_a: Some(format!("flip with p={}", t.p())),
                    strategy_b: Some(format!("flip with q={}", t.q())),
                    payoff_a: Some(v.a),
                    payoff_b: Some(v.b),
                    equilibrium: Some(is_mw_equilibrium(pm, t)?),
                    ..Default::default()
                });
            }
            for e in mw_equilibria(pm)? {
                let kind = match e.kind {
                    EquilibriumKind::Pure => "pure",
                    EquilibriumKind::Interior => "interior",
                };
                rec.results.push(ResultRow {
                    label: format!(
                        "equilibrium ({kind}) p={}, q={}",
                        e.profile.p(),
                        e.profile.q()
                    ),
                    strategy_a: Some(format!("flip with p={}", e.profile.p())),
                    strategy_b: Some(format!("flip with q={}", e.profile.q())),
                    payoff_a: Some(e.payoff.a),
                    payoff_b: Some(e.payoff.b),
                    equilibrium: Some(true),
                    ..Default::default()
                });
            }
        }
        Mode::Table => {
            let haar = StrategyDensity::HaarUniform;
            let euler = StrategyDensity::EulerUniform;
            let rows = [
                ("(1)", &haar, &haar),
                ("(2)", &haar, &euler),
                ("(3)", &euler, &haar),
                ("(4)", &euler, &euler),
            ];
            rec.method = Some(MethodEcho::from(cfg.method));
            rec.tolerance = Some(cfg.tolerance);
            let mut verdicts = Vec::new();
            let mut worst_mixed = f64::INFINITY;
            for (label, a, b) in rows {
                let cert = verify_equilibrium(pm, a, b, cfg.method, cfg.tolerance)?;
                verdicts.push(cert.verdict);
                worst_mixed = worst_mixed.min(cert.lambda_a()).min(cert.lambda_b());
                rec.results.push(certificate_row(label, a, b, &cert));
            }
            rec.verdict = Some(combine(&verdicts));
            rec.mismatch_comparison = Some(mismatch_comparison(pm, worst_mixed)?);
        }
    }
    Ok(rec)
}

fn certificate_row(
    label: &str,
    a: &StrategyDensity,
    b: &StrategyDensity,
    cert: &EquilibriumCertificate,
) -> ResultRow {
    ResultRow {
        label: label.into(),
        strategy_a: Some(a.to_string()),
        strategy_b: Some(b.to_string()),
        payoff_a: Some(cert.alice.lambda),
        payoff_b: Some(cert.bob.lambda),
        se_a: cert.alice.lambda_standard_error,
        se_b: cert.bob.lambda_standard_error,
        verdict: Some(cert.verdict),
        gap_a: Some(cert.alice.best_deviation_gap),
        gap_b: Some(cert.bob.best_deviation_gap),
        threshold_a: Some(cert.alice.threshold),
        threshold_b: Some(cert.bob.threshold),
        residual_a: Some(cert.alice.constancy_residual),
        residual_b: Some(cert.bob.constancy_residual),
        best_response_a: Some(point_label(&cert.alice.best_response.angles)),
        best_response_b: Some(point_label(&cert.bob.best_response.angles)),
        equilibrium: None,
    }
}

fn combine(verdicts: &[Verdict]) -> Verdict {
    if verdicts.iter().all(|v| *v == Verdict::Equilibrium) {
        Verdict::Equilibrium
    } else if verdicts.contains(&Verdict::NotEquilibrium) {
        Verdict::NotEquilibrium
    } else {
        Verdict::Inconclusive
    }
}

/// Whether neither player gains by switching to always or never flipping.
fn is_mw_equilibrium(pm: &PayoffMatrix, t: &TacticProfile) -> Result<bool> {
    let here = mw_payoff(pm, t)?;
    for e in [0.0, 1.0] {
        if mw_payoff(pm, &TacticProfile::new(e, t.q())?)?.a > here.a + 1e-12
            || mw_payoff(pm, &TacticProfile::new(t.p(), e)?)?.b > here.b + 1e-12
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn mismatch_comparison(pm: &PayoffMatrix, mixed_quantum: f64) -> Result<MismatchComparison> {
    use ClassicalMove::*;
    let classical = [(O, T), (T, O)]
        .iter()
        .map(|&(a, b)| {
            let p = classical_payoff(pm, a, b);
            p.a.min(p.b)
        })
        .fold(f64::INFINITY, f64::min);
    let mut two_tactic = f64::INFINITY;
    for (p, q) in [(1.0, 0.0), (0.0, 1.0)] {
        let v = mw_payoff(pm, &TacticProfile::new(p, q)?)?;
        two_tactic = two_tactic.min(v.a).min(v.b);
    }
    Ok(MismatchComparison {
        classical,
        two_tactic,
        mixed_quantum,
    })
}
