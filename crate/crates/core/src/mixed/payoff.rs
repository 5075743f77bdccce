use serde::{Deserialize, Serialize};

use super::density::StrategyDensity;
use super::quadrature::{integrate_density, QuadratureRule, DEFAULT_RESOLUTION};
use super::sampling::{density_sample, SampleStream};
use crate::game::{pure_payoff, PayoffMatrix, PayoffPair};
use crate::quantum::StrategyAngles;
use crate::{Error, Result};

/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: usize = 100_000;

/// Stream id used for Alice's samples.
pub const ALICE_STREAM: u32 = 0;
/// Stream id used for Bob's samples.
pub const BOB_STREAM: u32 = 1;

/// How integrals over SU(2) are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Integration {
    MonteCarlo { samples: usize, seed: u64 },
    Quadrature { resolution: usize },
}

impl Default for Integration {
    fn default() -> Self {
        Integration::Quadrature {
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

impl Integration {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Integration::MonteCarlo { samples: 0, .. } => Err(Error::Config(
                "Monte Carlo needs at least one sample".into(),
            )),
            Integration::MonteCarlo { .. } => Ok(()),
            Integration::Quadrature { resolution } => QuadratureRule::new(resolution).map(|_| ()),
        }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self, Integration::MonteCarlo { .. })
    }
}

/// `(cos θ, sin θ cos ψ, sin θ sin ψ)`. The pure payoff depends on a
/// strategy pair only through these three numbers per player.
pub fn features(a: &StrategyAngles) -> [f64; 3] {
    let (s, c) = a.theta().sin_cos();
    let (sp, cp) = a.psi().sin_cos();
    [c, s * cp, s * sp]
}

/// `cos θ_A cos θ_B − cos(ψ_A+ψ_B) sin θ_A sin θ_B` written in features:
/// `u₀v₀ − u₁v₁ + u₂v₂`.
pub fn feature_alignment(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u[0] * v[0] - u[1] * v[1] + u[2] * v[2]
}

/// Integrals of a density against `1` and the three payoff features.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyMoments {
    /// `∫ f dU`.
    pub mass: f64,
    /// `∫ f · features dU`.
    pub first: [f64; 3],
    /// Sample covariance of the features; present for Monte Carlo estimates.
    pub covariance: Option<[[f64; 3]; 3]>,
    pub samples: Option<usize>,
}

impl StrategyMoments {
    pub fn point(a: &StrategyAngles) -> Self {
        StrategyMoments {
            mass: 1.0,
            first: features(a),
            covariance: None,
            samples: None,
        }
    }

    pub fn from_samples(samples: &[StrategyAngles]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Config(
                "cannot form moments from zero samples".into(),
            ));
        }
        let n = samples.len() as f64;
        let feats: Vec<[f64; 3]> = samples.iter().map(features).collect();
        let mut mean = [0.0; 3];
        for f in &feats {
            for k in 0..3 {
                mean[k] += f[k];
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut cov = [[0.0; 3]; 3];
        if samples.len() > 1 {
            for f in &feats {
                for i in 0..3 {
                    for j in 0..3 {
                        cov[i][j] += (f[i] - mean[i]) * (f[j] - mean[j]);
                    }
                }
            }
            cov.iter_mut().flatten().for_each(|c| *c /= n - 1.0);
        }
        Ok(StrategyMoments {
            mass: 1.0,
            first: mean,
            covariance: Some(cov),
            samples: Some(samples.len()),
        })
    }

    pub fn by_quadrature(density: &StrategyDensity, rule: &QuadratureRule) -> Result<Self> {
        if let StrategyDensity::PointMass(a) = density {
            return Ok(StrategyMoments::point(a));
        }
        let [mass, c, sc, ss] = integrate_density(
            density,
            |a| {
                let [c, sc, ss] = features(a);
                [1.0, c, sc, ss]
            },
            rule,
        )?;
        Ok(StrategyMoments {
            mass,
            first: [c, sc, ss],
            covariance: None,
            samples: None,
        })
    }

    /// `∫ f(V) $(U, V) dV` for a fixed strategy `U` of the other player,
    /// with its standard error when the moments are sample estimates.
    pub fn response(&self, pm: &PayoffMatrix, u: &StrategyAngles) -> (f64, Option<f64>) {
        let fu = features(u);
        let value = pm.mixed_equilibrium_payoff() * self.mass
            + pm.modulation() * feature_alignment(&fu, &self.first);
        let se = match (self.covariance, self.samples) {
            (Some(cov), Some(n)) => {
                // Var of u₀v₀ − u₁v₁ + u₂v₂ over samples v, with d = D·u.
                let d = [fu[0], -fu[1], fu[2]];
                let mut var = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        var += d[i] * cov[i][j] * d[j];
                    }
                }
                Some(pm.modulation() * (var.max(0.0) / n as f64).sqrt())
            }
            _ => None,
        };
        (value, se)
    }
}

/// Expected payoffs of a density pair together with their error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedPayoff {
    pub payoff: PayoffPair,
    /// Standard error of the mean (Monte Carlo only).
    pub standard_error: Option<PayoffPair>,
    pub method: Integration,
}

/// Sample streams used for a Monte Carlo run; both players' payoffs come
/// from these same samples.
pub fn player_samples(
    fa: &StrategyDensity,
    fb: &StrategyDensity,
    samples: usize,
    seed: u64,
) -> Result<(Vec<StrategyAngles>, Vec<StrategyAngles>)> {
    let sa = density_sample(fa, &SampleStream::new(seed, ALICE_STREAM, samples))?;
    let sb = density_sample(fb, &SampleStream::new(seed, BOB_STREAM, samples))?;
    Ok((sa, sb))
}

/// Mean and standard error of pure payoffs over paired samples
/// `(U_A^i, U_B^i)`. Sums run in index order.
pub fn payoff_from_samples(
    pm: &PayoffMatrix,
    sa: &[StrategyAngles],
    sb: &[StrategyAngles],
) -> Result<(PayoffPair, PayoffPair)> {
    if sa.is_empty() || sa.len() != sb.len() {
        return Err(Error::Config(format!(
            "paired samples must be non-empty and equal in length ({} vs {})",
            sa.len(),
            sb.len()
        )));
    }
    let n = sa.len() as f64;
    let values: Vec<PayoffPair> = sa
        .iter()
        .zip(sb)
        .map(|(a, b)| pure_payoff(pm, a, b))
        .collect();
    let mean = PayoffPair {
        a: values.iter().map(|v| v.a).sum::<f64>() / n,
        b: values.iter().map(|v| v.b).sum::<f64>() / n,
    };
    let se = if sa.len() > 1 {
        let var_a = values.iter().map(|v| (v.a - mean.a).powi(2)).sum::<f64>() / (n - 1.0);
        let var_b = values.iter().map(|v| (v.b - mean.b).powi(2)).sum::<f64>() / (n - 1.0);
        PayoffPair {
            a: (var_a / n).sqrt(),
            b: (var_b / n).sqrt(),
        }
    } else {
        PayoffPair { a: 0.0, b: 0.0 }
    };
    Ok((mean, se))
}

/// `∫∫ f_A f_B $(U_A, U_B) dU_A dU_B` for both players.
///
/// Monte Carlo pairs `N` draws from each density and reports the sample
/// standard error. Quadrature integrates each density against the payoff
/// features separately; the payoff is bilinear in those features, so the
/// double integral factorizes exactly.
pub fn mixed_payoff(
    pm: &PayoffMatrix,
    fa: &StrategyDensity,
    fb: &StrategyDensity,
    method: Integration,
) -> Result<MixedPayoff> {
    method.validate()?;
    match method {
        Integration::MonteCarlo { samples, seed } => {
            let (sa, sb) = player_samples(fa, fb, samples, seed)?;
            let (payoff, se) = payoff_from_samples(pm, &sa, &sb)?;
            Ok(MixedPayoff {
                payoff,
                standard_error: Some(se),
                method,
            })
        }
        Integration::Quadrature { resolution } => {
            let rule = QuadratureRule::new(resolution)?;
            let ma = StrategyMoments::by_quadrature(fa, &rule)?;
            let mb = StrategyMoments::by_quadrature(fb, &rule)?;
            let v = pm.mixed_equilibrium_payoff() * ma.mass * mb.mass
                + pm.modulation() * feature_alignment(&ma.first, &mb.first);
            Ok(MixedPayoff {
                payoff: PayoffPair { a: v, b: v },
                standard_error: None,
                method,
            })
        }
    }
}
