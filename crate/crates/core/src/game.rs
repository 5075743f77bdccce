//! The Battle of the Sexes payoff structure over the entangled register.

use serde::{Deserialize, Serialize};

use crate::quantum::{
    apply_pair, initial_density, initial_state, Matrix4, Outcome, StrategyAngles, Unitary2,
};
use crate::tolerance;
use crate::{Error, Result};

/// Payoff constants of the bimatrix: `(O,O) → (α,β)`, `(T,T) → (β,α)`,
/// mismatches `→ (γ,γ)`, with `α > β > γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPayoffs")]
pub struct PayoffMatrix {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

#[derive(Deserialize)]
struct RawPayoffs {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl TryFrom<RawPayoffs> for PayoffMatrix {
    type Error = Error;

    fn try_from(raw: RawPayoffs) -> Result<Self> {
        PayoffMatrix::new(raw.alpha, raw.beta, raw.gamma)
    }
}

impl Default for PayoffMatrix {
    /// The example instance `(3, 2, 1)`.
    fn default() -> Self {
        PayoffMatrix {
            alpha: 3.0,
            beta: 2.0,
            gamma: 1.0,
        }
    }
}

impl PayoffMatrix {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if ![alpha, beta, gamma].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain(format!(
                "payoffs must be finite (alpha={alpha}, beta={beta}, gamma={gamma})"
            )));
        }
        if !(alpha > beta && beta > gamma) {
            return Err(Error::Domain(format!(
                "payoffs violate the condition α>β>γ (alpha={alpha}, beta={beta}, gamma={gamma})"
            )));
        }
        Ok(PayoffMatrix { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `(α+β+2γ)/4`, the payoff of every equilibrium in the uniform families.
    pub fn mixed_equilibrium_payoff(&self) -> f64 {
        (self.alpha + self.beta + 2.0 * self.gamma) / 4.0
    }

    /// `(α+β)/2`, the best payoff reachable with pure quantum strategies.
    pub fn matched_payoff(&self) -> f64 {
        (self.alpha + self.beta) / 2.0
    }

    /// `(α+β-2γ)/4`, the amplitude of the strategy-dependent term.
    pub fn modulation(&self) -> f64 {
        (self.alpha + self.beta - 2.0 * self.gamma) / 4.0
    }

    /// Alice's and Bob's expected payoffs for a distribution over outcomes.
    pub fn expected(&self, p: &JointProbabilities) -> PayoffPair {
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        PayoffPair {
            a: (a - g) * p.p_oo + (b - g) * p.p_tt + g * (p.p_oo + p.p_ot + p.p_to + p.p_tt),
            b: (b - g) * p.p_oo + (a - g) * p.p_tt + g * (p.p_oo + p.p_ot + p.p_to + p.p_tt),
        }
    }
}

/// Expected payoffs of Alice (`a`) and Bob (`b`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffPair {
    pub a: f64,
    pub b: f64,
}

/// Outcome probabilities `P_στ = |⟨στ|(U_A⊗U_B)|ψ_i⟩|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointProbabilities {
    pub p_oo: f64,
    pub p_ot: f64,
    pub p_to: f64,
    pub p_tt: f64,
}

impl JointProbabilities {
    pub fn get(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::OO => self.p_oo,
            Outcome::OT => self.p_ot,
            Outcome::TO => self.p_to,
            Outcome::TT => self.p_tt,
        }
    }

    pub fn total(&self) -> f64 {
        self.p_oo + self.p_ot + self.p_to + self.p_tt
    }

    pub fn max_abs_diff(&self, other: &JointProbabilities) -> f64 {
        Outcome::ALL
            .iter()
            .map(|&o| (self.get(o) - other.get(o)).abs())
            .fold(0.0, f64::max)
    }
}

/// `Â = diag(α, γ, γ, β)` and `B̂ = diag(β, γ, γ, α)` in the shared basis order.
pub fn payoff_operators(pm: &PayoffMatrix) -> (Matrix4, Matrix4) {
    let (a, b, g) = (pm.alpha, pm.beta, pm.gamma);
    (
        Matrix4::diagonal([a, g, g, b]),
        Matrix4::diagonal([b, g, g, a]),
    )
}

/// The bracket `cosθ_A cosθ_B − cos(ψ_A+ψ_B) sinθ_A sinθ_B`.
///
/// The φ angles do not enter: they only contribute phases that cancel in
/// every `|⟨στ|…⟩|²`.
pub(crate) fn alignment(sa: &StrategyAngles, sb: &StrategyAngles) -> f64 {
    sa.theta().cos() * sb.theta().cos()
        - (sa.psi() + sb.psi()).cos() * sa.theta().sin() * sb.theta().sin()
}

/// Closed-form outcome probabilities:
/// `P_OO = P_TT = (1 + cosθ_A cosθ_B − cos(ψ_A+ψ_B) sinθ_A sinθ_B)/4` and
/// `P_OT = P_TO = 1/2 − P_OO`.
pub fn joint_probabilities(sa: &StrategyAngles, sb: &StrategyAngles) -> JointProbabilities {
    let diag = (1.0 + alignment(sa, sb)) / 4.0;
    let off = 0.5 - diag;
    JointProbabilities {
        p_oo: diag,
        p_ot: off,
        p_to: off,
        p_tt: diag,
    }
}

/// Outcome probabilities by projecting `(U_A⊗U_B)|ψ_i⟩` onto each basis state.
pub fn joint_probabilities_brute(ua: &Unitary2, ub: &Unitary2) -> JointProbabilities {
    let out = apply_pair(ua, ub, &initial_state());
    JointProbabilities {
        p_oo: out.probability(Outcome::OO),
        p_ot: out.probability(Outcome::OT),
        p_to: out.probability(Outcome::TO),
        p_tt: out.probability(Outcome::TT),
    }
}

/// Pure-strategy payoff, identical for both players:
/// `(α+β+2γ)/4 + (α+β−2γ)/4 · (cosθ_A cosθ_B − cos(ψ_A+ψ_B) sinθ_A sinθ_B)`.
pub fn pure_payoff(pm: &PayoffMatrix, sa: &StrategyAngles, sb: &StrategyAngles) -> PayoffPair {
    let v = pm.mixed_equilibrium_payoff() + pm.modulation() * alignment(sa, sb);
    PayoffPair { a: v, b: v }
}

/// Pure payoff through the full density-matrix route:
/// `Tr((U_A⊗U_B) ρ_i (U_A⊗U_B)† · $̂)` for both payoff operators.
pub fn pure_payoff_oracle(pm: &PayoffMatrix, ua: &Unitary2, ub: &Unitary2) -> PayoffPair {
    let rho_i = initial_density();
    let rho_f = rho_i.conjugate_by(&ua.matrix().kron(ub.matrix()));
    let (op_a, op_b) = payoff_operators(pm);
    PayoffPair {
        a: rho_f.expectation(&op_a),
        b: rho_f.expectation(&op_b),
    }
}

/// Checks the probability invariants: each in `[0,1]`, summing to 1.
pub fn check_probabilities(p: &JointProbabilities) -> Result<()> {
    for o in Outcome::ALL {
        let v = p.get(o);
        if !(-tolerance::EXACT..=1.0 + tolerance::EXACT).contains(&v) {
            return Err(Error::Domain(format!("P_{o} = {v} outside [0, 1]")));
        }
    }
    let total = p.total();
    if (total - 1.0).abs() > tolerance::EXACT {
        return Err(Error::Domain(format!("probabilities sum to {total}")));
    }
    Ok(())
}
