//! Baselines: the classical bimatrix game and the two-tactic quantization in
//! which each player applies the identity or a bit flip (Pauli X) to the
//! entangled state with some probability.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::game::{payoff_operators, PayoffMatrix, PayoffPair};
use crate::quantum::{initial_density, Density4, Matrix2};
use crate::{Error, Result};

/// Slack used when comparing payoffs in equilibrium checks.
const NASH_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassicalMove {
    /// Opera.
    O,
    /// Television.
    T,
}

impl ClassicalMove {
    pub const ALL: [ClassicalMove; 2] = [ClassicalMove::O, ClassicalMove::T];
}

impl fmt::Display for ClassicalMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassicalMove::O => "O",
            ClassicalMove::T => "T",
        })
    }
}

pub fn classical_payoff(pm: &PayoffMatrix, a: ClassicalMove, b: ClassicalMove) -> PayoffPair {
    use ClassicalMove::*;
    match (a, b) {
        (O, O) => PayoffPair {
            a: pm.alpha(),
            b: pm.beta(),
        },
        (T, T) => PayoffPair {
            a: pm.beta(),
            b: pm.alpha(),
        },
        _ => PayoffPair {
            a: pm.gamma(),
            b: pm.gamma(),
        },
    }
}

/// Pure profiles from which neither player gains by switching move,
/// found by checking all four profiles.
pub fn classical_equilibria(pm: &PayoffMatrix) -> Vec<(ClassicalMove, ClassicalMove)> {
    let mut out = Vec::new();
    for a in ClassicalMove::ALL {
        for b in ClassicalMove::ALL {
            let here = classical_payoff(pm, a, b);
            let alice_ok = ClassicalMove::ALL
                .iter()
                .all(|&a2| classical_payoff(pm, a2, b).a <= here.a + NASH_SLACK);
            let bob_ok = ClassicalMove::ALL
                .iter()
                .all(|&b2| classical_payoff(pm, a, b2).b <= here.b + NASH_SLACK);
            if alice_ok && bob_ok {
                out.push((a, b));
            }
        }
    }
    out
}

/// Probabilities of applying the bit flip: `p` for Alice, `q` for Bob.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TacticProfile {
    p: f64,
    q: f64,
}

impl TacticProfile {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!(
                    "tactic probability {name}={v} outside [0, 1]"
                )));
            }
        }
        Ok(TacticProfile { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Final density matrix of the tactic game: each player independently
/// applies Pauli X (Alice with probability `p`, Bob with `q`) to
/// `(|OO⟩+|TT⟩)/√2`.
pub fn mw_final_density(t: &TacticProfile) -> Result<Density4> {
    let rho_i = initial_density();
    let ops = [Matrix2::identity(), Matrix2::pauli_x()];
    let wa = [1.0 - t.p, t.p];
    let wb = [1.0 - t.q, t.q];
    let mut parts = Vec::with_capacity(4);
    for (ia, a) in ops.iter().enumerate() {
        for (ib, b) in ops.iter().enumerate() {
            parts.push((wa[ia] * wb[ib], rho_i.conjugate_by(&a.kron(b))));
        }
    }
    Density4::mixture(&parts)
}

/// Expected payoffs of the tactic game, by tracing the final density matrix
/// against the payoff operators.
pub fn mw_payoff(pm: &PayoffMatrix, t: &TacticProfile) -> Result<PayoffPair> {
    let rho = mw_final_density(t)?;
    let (op_a, op_b) = payoff_operators(pm);
    Ok(PayoffPair {
        a: rho.expectation(&op_a),
        b: rho.expectation(&op_b),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquilibriumKind {
    /// Both players use a deterministic tactic (`p, q ∈ {0, 1}`).
    Pure,
    /// At least one player randomizes.
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TacticEquilibrium {
    pub profile: TacticProfile,
    pub kind: EquilibriumKind,
    pub payoff: PayoffPair,
}

/// Grid step of [`mw_equilibria`].
pub const MW_GRID_STEPS: usize = 100;

/// Profiles on the grid `{0, 0.01, …, 1}²` at which neither player gains
/// by a unilateral change of tactic probability.
///
/// Each player's payoff is linear in their own probability, so the best
/// deviation is one of the endpoints 0 and 1; an interior probability can
/// only be a best reply when the endpoints tie, which the grid picks up when
/// the tie point lies on it. The result is what the grid finds, not a
/// proof of completeness.
pub fn mw_equilibria(pm: &PayoffMatrix) -> Result<Vec<TacticEquilibrium>> {
    let grid: Vec<f64> = (0..=MW_GRID_STEPS)
        .map(|i| i as f64 / MW_GRID_STEPS as f64)
        .collect();
    let mut out = Vec::new();
    for &p in &grid {
        for &q in &grid {
            let here = mw_payoff(pm, &TacticProfile::new(p, q)?)?;
            let mut alice_best = f64::NEG_INFINITY;
            let mut bob_best = f64::NEG_INFINITY;
            for e in [0.0, 1.0] {
                alice_best = alice_best.max(mw_payoff(pm, &TacticProfile::new(e, q)?)?.a);
                bob_best = bob_best.max(mw_payoff(pm, &TacticProfile::new(p, e)?)?.b);
            }
            if here.a + NASH_SLACK >= alice_best && here.b + NASH_SLACK >= bob_best {
                let pure = [p, q].iter().all(|&x| x == 0.0 || x == 1.0);
                out.push(TacticEquilibrium {
                    profile: TacticProfile { p, q },
                    kind: if pure {
                        EquilibriumKind::Pure
                    } else {
                        EquilibriumKind::Interior
                    },
                    payoff: here,
                });
            }
        }
    }
    Ok(out)
}
