//! Nash-equilibrium verification for mixed quantum strategies.
//!
//! A profile `(f_A, f_B)` is an equilibrium when neither player can raise
//! their expected payoff by switching density. The payoff is linear in each
//! player's own density, so the best deviation is always attained by a
//! point mass; the search therefore runs over pure strategies only. The φ
//! angle never affects a payoff, so response surfaces span `(θ, ψ)`.
//!
//! A profile passes the equilibrium check exactly when each player's
//! response function `g(U) = ∫ f_opp(V) $(U, V) dV` is constant on the
//! support of their own density, with that constant equal to its maximum.
//! For the Haar-uniform and Euler-uniform families `g` is constant
//! everywhere, so any pairing of them is an equilibrium with payoff
//! `(α+β+2γ)/4` for both players.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::game::{pure_payoff, PayoffMatrix};
use crate::mixed::{
    density_sample, payoff_from_samples, player_samples, Integration, QuadratureRule, SampleStream,
    StrategyDensity, StrategyMoments, ALICE_STREAM, BOB_STREAM,
};
use crate::quantum::{wrap_angle, StrategyAngles};
use crate::tolerance;
use crate::{Error, Result};

/// Smallest `(θ, ψ)` grid accepted by the best-response search.
pub const MIN_GRID: usize = 32;

/// Default `(θ, ψ)` points per axis; odd so that `θ = 0` is a node.
pub const DEFAULT_GRID: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    /// Stream id of the *opponent's* samples.
    fn opponent_stream(self) -> u32 {
        match self {
            Player::Alice => BOB_STREAM,
            Player::Bob => ALICE_STREAM,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equilibrium,
    NotEquilibrium,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Equilibrium => "equilibrium",
            Verdict::NotEquilibrium => "not-equilibrium",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A value with an optional Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub standard_error: Option<f64>,
}

/// Summarizes the opponent's density by its payoff moments under `method`.
pub fn opponent_moments(
    opponent: &StrategyDensity,
    player: Player,
    method: Integration,
) -> Result<StrategyMoments> {
    method.validate()?;
    match method {
        Integration::MonteCarlo { samples, seed } => {
            let s = density_sample(
                opponent,
                &SampleStream::new(seed, player.opponent_stream(), samples),
            )?;
            StrategyMoments::from_samples(&s)
        }
        Integration::Quadrature { resolution } => {
            StrategyMoments::by_quadrature(opponent, &QuadratureRule::new(resolution)?)
        }
    }
}

/// `g(U) = ∫ f_opp(V) $(U, V) dV` for `player` using `my_strategy`.
///
/// Monte Carlo averages the pure payoff over the opponent's samples
/// directly; quadrature integrates the opponent's density.
pub fn response_value(
    pm: &PayoffMatrix,
    opponent: &StrategyDensity,
    player: Player,
    my_strategy: &StrategyAngles,
    method: Integration,
) -> Result<Estimate> {
    method.validate()?;
    match method {
        Integration::MonteCarlo { samples, seed } => {
            let opp = density_sample(
                opponent,
                &SampleStream::new(seed, player.opponent_stream(), samples),
            )?;
            let mine = vec![*my_strategy; opp.len()];
            let (mean, se) = match player {
                Player::Alice => {
                    let (m, s) = payoff_from_samples(pm, &mine, &opp)?;
                    (m.a, s.a)
                }
                Player::Bob => {
                    let (m, s) = payoff_from_samples(pm, &opp, &mine)?;
                    (m.b, s.b)
                }
            };
            Ok(Estimate {
                value: mean,
                standard_error: Some(se),
            })
        }
        Integration::Quadrature { .. } => {
            let m = opponent_moments(opponent, player, method)?;
            let (value, _) = m.response(pm, my_strategy);
            Ok(Estimate {
                value,
                standard_error: None,
            })
        }
    }
}

/// Response values over a `(θ, ψ)` grid with `φ = 0`. Both axes are
/// `resolution` evenly spaced points on `[-π, π]`, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseSurface {
    pub thetas: Vec<f64>,
    pub psis: Vec<f64>,
    /// `values[i][j]` is the response at `(thetas[i], psis[j])`.
    pub values: Vec<Vec<f64>>,
}

fn axis(resolution: usize) -> Vec<f64> {
    let step = 2.0 * PI / (resolution - 1) as f64;
    (0..resolution)
        .map(|k| {
            if k + 1 == resolution {
                PI
            } else {
                -PI + k as f64 * step
            }
        })
        .collect()
}

impl ResponseSurface {
    pub fn from_moments(
        pm: &PayoffMatrix,
        moments: &StrategyMoments,
        resolution: usize,
    ) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Config(format!(
                "grid resolution must be at least 2, got {resolution}"
            )));
        }
        let thetas = axis(resolution);
        let psis = axis(resolution);
        let values = thetas
            .par_iter()
            .map(|&t| {
                psis.iter()
                    .map(|&p| {
                        moments
                            .response(pm, &StrategyAngles::from_canonical(t, 0.0, p))
                            .0
                    })
                    .collect()
            })
            .collect();
        Ok(ResponseSurface {
            thetas,
            psis,
            values,
        })
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// First grid point (row-major) attaining the maximum.
    pub fn argmax(&self) -> StrategyAngles {
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        StrategyAngles::from_canonical(self.thetas[best.1], 0.0, self.psis[best.2])
    }

    /// `max − min` over the grid.
    pub fn spread(&self) -> f64 {
        self.max() - self.min()
    }
}

/// `max − min` of the response function over a `(θ, ψ)` grid. A small
/// value means the opponent's density makes the player indifferent among
/// all their pure strategies.
pub fn constancy_residual(
    pm: &PayoffMatrix,
    opponent: &StrategyDensity,
    player: Player,
    grid: usize,
    method: Integration,
) -> Result<f64> {
    let m = opponent_moments(opponent, player, method)?;
    Ok(ResponseSurface::from_moments(pm, &m, grid)?.spread())
}

/// The best pure deviation against a fixed opponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub angles: StrategyAngles,
    pub value: f64,
    pub standard_error: Option<f64>,
}

/// Coarse grid search over `(θ, ψ)` followed by a shrinking-step pattern
/// search down to [`tolerance::ANGLE_RESOLUTION`].
pub fn best_response_to_moments(
    pm: &PayoffMatrix,
    moments: &StrategyMoments,
    resolution: usize,
) -> Result<(BestResponse, ResponseSurface)> {
    if resolution < MIN_GRID {
        return Err(Error::Config(format!(
            "best-response grid needs at least {MIN_GRID} points per axis, got {resolution}"
        )));
    }
    let surface = ResponseSurface::from_moments(pm, moments, resolution)?;
    let start = surface.argmax();
    let eval = |t: f64, p: f64| {
        moments
            .response(pm, &StrategyAngles::from_canonical(t, 0.0, p))
            .0
    };

    let (mut theta, mut psi) = (start.theta(), start.psi());
    let mut best = eval(theta, psi);
    let mut step = 2.0 * PI / (resolution - 1) as f64;
    while step >= tolerance::ANGLE_RESOLUTION {
        let mut improved = false;
        for (dt, dp) in [
            (1., 0.),
            (-1., 0.),
            (0., 1.),
            (0., -1.),
            (1., 1.),
            (1., -1.),
            (-1., 1.),
            (-1., -1.),
        ] {
            let t = (theta + dt * step).clamp(-PI, PI);
            let p = wrap_angle(psi + dp * step);
            let v = eval(t, p);
            if v > best {
                best = v;
                theta = t;
                psi = p;
                improved = true;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    let angles = StrategyAngles::from_canonical(theta, 0.0, psi);
    let (value, standard_error) = moments.response(pm, &angles);
    Ok((
        BestResponse {
            angles,
            value,
            standard_error,
        },
        surface,
    ))
}

/// Best pure response of `player` to the opponent's density.
pub fn best_response(
    pm: &PayoffMatrix,
    opponent: &StrategyDensity,
    player: Player,
    method: Integration,
    resolution: usize,
) -> Result<BestResponse> {
    let m = opponent_moments(opponent, player, method)?;
    Ok(best_response_to_moments(pm, &m, resolution)?.0)
}

/// Per-player part of an [`EquilibriumCertificate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerCheck {
    /// Equilibrium payoff `λ`.
    pub lambda: f64,
    pub lambda_standard_error: Option<f64>,
    /// `max − min` of the response surface against the opponent.
    pub constancy_residual: f64,
    pub best_response: BestResponse,
    /// `best_response.value − λ`, clamped at 0 from below.
    pub best_deviation_gap: f64,
    /// Unclamped `best_response.value − λ`.
    pub raw_gap: f64,
    /// Combined standard error of the gap (0 for quadrature).
    pub gap_standard_error: f64,
    /// `max(tol, SE_BAND · gap_standard_error)`.
    pub threshold: f64,
}

impl PlayerCheck {
    fn verdict(&self) -> Verdict {
        let band = tolerance::SE_BAND * self.gap_standard_error;
        if self.raw_gap < -(self.threshold + band) {
            // λ above the best response: the two integrals disagree.
            Verdict::Inconclusive
        } else if self.best_deviation_gap <= self.threshold {
            Verdict::Equilibrium
        } else if self.best_deviation_gap > self.threshold + band {
            Verdict::NotEquilibrium
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Tolerances in force when a certificate was issued.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateTolerances {
    pub gap: f64,
    pub se_band: f64,
    pub angle_resolution: f64,
    pub grid: usize,
}

/// Verification record for a density profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumCertificate {
    pub alice: PlayerCheck,
    pub bob: PlayerCheck,
    pub verdict: Verdict,
    pub method: Integration,
    pub tolerances: CertificateTolerances,
}

impl EquilibriumCertificate {
    pub fn lambda_a(&self) -> f64 {
        self.alice.lambda
    }

    pub fn lambda_b(&self) -> f64 {
        self.bob.lambda
    }
}

fn player_check(
    pm: &PayoffMatrix,
    lambda: f64,
    lambda_se: Option<f64>,
    opponent: &StrategyMoments,
    tol: f64,
    grid: usize,
) -> Result<PlayerCheck> {
    let (br, surface) = best_response_to_moments(pm, opponent, grid)?;
    let raw_gap = br.value - lambda;
    let gap_se =
        (br.standard_error.unwrap_or(0.0).powi(2) + lambda_se.unwrap_or(0.0).powi(2)).sqrt();
    Ok(PlayerCheck {
        lambda,
        lambda_standard_error: lambda_se,
        constancy_residual: surface.spread(),
        best_response: br,
        best_deviation_gap: raw_gap.max(0.0),
        raw_gap,
        gap_standard_error: gap_se,
        threshold: tol.max(tolerance::SE_BAND * gap_se),
    })
}

/// Checks whether `(fa, fb)` is a Nash equilibrium.
///
/// `λ_A, λ_B` are the mixed payoffs of the profile. Each player's gap is
/// their best pure deviation against the other's density minus their `λ`.
/// The profile is an equilibrium when both gaps are within
/// `max(tol, SE_BAND · SE)`; a gap beyond that threshold by less than one
/// further noise band is reported as inconclusive. Under Monte Carlo the
/// payoffs and the opponents' response surfaces come from the same samples.
pub fn verify_equilibrium(
    pm: &PayoffMatrix,
    fa: &StrategyDensity,
    fb: &StrategyDensity,
    method: Integration,
    tol: f64,
) -> Result<EquilibriumCertificate> {
    verify_equilibrium_with_grid(pm, fa, fb, method, tol, DEFAULT_GRID)
}

pub fn verify_equilibrium_with_grid(
    pm: &PayoffMatrix,
    fa: &StrategyDensity,
    fb: &StrategyDensity,
    method: Integration,
    tol: f64,
    grid: usize,
) -> Result<EquilibriumCertificate> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::Config(format!(
            "tolerance must be finite and non-negative, got {tol}"
        )));
    }
    method.validate()?;
    let (lambda, lambda_se, ma, mb) = match method {
        Integration::MonteCarlo { samples, seed } => {
            let (sa, sb) = player_samples(fa, fb, samples, seed)?;
            let (mean, se) = payoff_from_samples(pm, &sa, &sb)?;
            let ma = StrategyMoments::from_samples(&sa)?;
            let mb = StrategyMoments::from_samples(&sb)?;
            (mean, Some(se), ma, mb)
        }
        Integration::Quadrature { resolution } => {
            let rule = QuadratureRule::new(resolution)?;
            let ma = StrategyMoments::by_quadrature(fa, &rule)?;
            let mb = StrategyMoments::by_quadrature(fb, &rule)?;
            let mixed = crate::mixed::mixed_payoff(pm, fa, fb, method)?;
            (mixed.payoff, None, ma, mb)
        }
    };
    let alice = player_check(pm, lambda.a, lambda_se.map(|s| s.a), &mb, tol, grid)?;
    let bob = player_check(pm, lambda.b, lambda_se.map(|s| s.b), &ma, tol, grid)?;
    let verdict = match (alice.verdict(), bob.verdict()) {
        (Verdict::Equilibrium, Verdict::Equilibrium) => Verdict::Equilibrium,
        (Verdict::NotEquilibrium, _) | (_, Verdict::NotEquilibrium) => Verdict::NotEquilibrium,
        _ => Verdict::Inconclusive,
    };
    Ok(EquilibriumCertificate {
        alice,
        bob,
        verdict,
        method,
        tolerances: CertificateTolerances {
            gap: tol,
            se_band: tolerance::SE_BAND,
            angle_resolution: tolerance::ANGLE_RESOLUTION,
            grid,
        },
    })
}

/// Payoff a player would get by deviating to the pure strategy `u`
/// against the opponent's density, for replaying a certificate.
pub fn deviation_payoff(
    pm: &PayoffMatrix,
    opponent: &StrategyDensity,
    player: Player,
    u: &StrategyAngles,
    method: Integration,
) -> Result<f64> {
    let own = StrategyDensity::PointMass(*u);
    let r = match player {
        Player::Alice => {
            crate::mixed::mixed_payoff(pm, &own, opponent, method)?
                .payoff
                .a
        }
        Player::Bob => {
            crate::mixed::mixed_payoff(pm, opponent, &own, method)?
                .payoff
                .b
        }
    };
    Ok(r)
}

/// Pure payoff of `player` at a profile of pure strategies.
pub fn pure_value(
    pm: &PayoffMatrix,
    player: Player,
    a: &StrategyAngles,
    b: &StrategyAngles,
) -> f64 {
    let p = pure_payoff(pm, a, b);
    match player {
        Player::Alice => p.a,
        Player::Bob => p.b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn pm() -> PayoffMatrix {
        PayoffMatrix::default()
    }

    const QUAD: Integration = Integration::Quadrature { resolution: 16 };

    #[test]
    fn axis_has_exact_endpoints() {
        let a = axis(33);
        assert_eq!(a[0], -PI);
        assert_eq!(a[32], PI);
        assert!(a[16].abs() < 1e-15);
    }

    #[test]
    fn response_against_haar_is_flat() {
        for t in [-3.0, -1.0, 0.0, 0.5, 2.0] {
            let u = StrategyAngles::new(t, 0.3, 1.2).unwrap();
            let r = response_value(
                &pm(),
                &StrategyDensity::HaarUniform,
                Player::Alice,
                &u,
                QUAD,
            )
            .unwrap();
            assert!((r.value - 1.75).abs() < 1e-12);
        }
    }

    #[test]
    fn response_against_identity_point() {
        let id = StrategyDensity::PointMass(StrategyAngles::IDENTITY);
        let r = response_value(&pm(), &id, Player::Alice, &StrategyAngles::IDENTITY, QUAD).unwrap();
        assert_eq!(r.value, 2.5);
        let flip = StrategyAngles::new(PI, 0.0, 0.0).unwrap();
        let r = response_value(&pm(), &id, Player::Bob, &flip, QUAD).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn residual_against_point_mass() {
        let id = StrategyDensity::PointMass(StrategyAngles::IDENTITY);
        let r = constancy_residual(&pm(), &id, Player::Alice, DEFAULT_GRID, QUAD).unwrap();
        assert!((r - 1.5).abs() < 1e-12);
    }

    #[test]
    fn best_response_to_identity_and_flip() {
        let id = StrategyDensity::PointMass(StrategyAngles::IDENTITY);
        let br = best_response(&pm(), &id, Player::Alice, QUAD, DEFAULT_GRID).unwrap();
        assert!(br.angles.theta().abs() < 1e-6);
        assert!((br.value - 2.5).abs() < 1e-12);

        let flip = StrategyDensity::point(PI, 0.0, 0.0).unwrap();
        let br = best_response(&pm(), &flip, Player::Bob, QUAD, DEFAULT_GRID).unwrap();
        assert!((br.angles.theta().abs() - PI).abs() < 1e-6);
        assert!((br.value - 2.5).abs() < 1e-12);
    }

    #[test]
    fn best_response_to_half_pi_point() {
        let a = StrategyDensity::point(FRAC_PI_2, 0.0, 0.0).unwrap();
        let br = best_response(&pm(), &a, Player::Bob, QUAD, DEFAULT_GRID).unwrap();
        assert!((br.value - 2.5).abs() < 1e-10);
        assert!((br.angles.theta().abs() - FRAC_PI_2).abs() < 1e-4);
    }

    #[test]
    fn grid_too_coarse_is_rejected() {
        let m = StrategyMoments::point(&StrategyAngles::IDENTITY);
        assert!(best_response_to_moments(&pm(), &m, 8).is_err());
    }

    #[test]
    fn negative_tolerance_rejected() {
        let h = StrategyDensity::HaarUniform;
        assert!(verify_equilibrium(&pm(), &h, &h, QUAD, -1.0).is_err());
    }

    #[test]
    fn verdict_bands() {
        let br = BestResponse {
            angles: StrategyAngles::IDENTITY,
            value: 0.0,
            standard_error: None,
        };
        let check = |gap: f64, se: f64| PlayerCheck {
            lambda: 0.0,
            lambda_standard_error: None,
            constancy_residual: 0.0,
            best_response: br,
            best_deviation_gap: gap.max(0.0),
            raw_gap: gap,
            gap_standard_error: se,
            threshold: 1e-3f64.max(4.0 * se),
        };
        assert_eq!(check(0.0, 0.0).verdict(), Verdict::Equilibrium);
        assert_eq!(check(2e-3, 0.0).verdict(), Verdict::NotEquilibrium);
        assert_eq!(check(0.003, 0.001).verdict(), Verdict::Equilibrium);
        assert_eq!(check(0.006, 0.001).verdict(), Verdict::Inconclusive);
        assert_eq!(check(0.009, 0.001).verdict(), Verdict::NotEquilibrium);
        assert_eq!(check(-0.009, 0.001).verdict(), Verdict::Inconclusive);
    }
}
