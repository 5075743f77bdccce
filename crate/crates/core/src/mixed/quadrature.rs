//! Deterministic product quadrature over the Euler-angle cube `[-π, π]³`.
//!
//! The θ axis is split at 0 (where `|sin θ|` has its kink) and each half is
//! integrated with Gauss–Legendre nodes, which never touch `θ ∈ {-π, 0, π}`.
//! The φ and ψ axes are periodic and use the midpoint rule with uniform
//! weights, which is exact for trigonometric polynomials of degree below the
//! node count.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;

use super::density::{HaarMeasure, StrategyDensity};
use crate::quantum::StrategyAngles;
use crate::{Error, Result};

/// Smallest accepted points per axis.
pub const MIN_RESOLUTION: usize = 8;

/// Default points per axis.
pub const DEFAULT_RESOLUTION: usize = 48;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            deriv = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / deriv;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

/// A product rule on the angle cube.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    resolution: usize,
    theta: Vec<(f64, f64)>,
    periodic: Vec<(f64, f64)>,
}

impl QuadratureRule {
    /// `resolution` points per axis; it must be even and at least
    /// [`MIN_RESOLUTION`].
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION || !resolution.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "quadrature resolution must be even and at least {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        let half = gauss_legendre(resolution / 2);
        let mut theta = Vec::with_capacity(resolution);
        for center in [-FRAC_PI_2, FRAC_PI_2] {
            theta.extend(
                half.iter()
                    .map(|&(x, w)| (center + FRAC_PI_2 * x, FRAC_PI_2 * w)),
            );
        }
        let h = TAU / resolution as f64;
        let periodic = (0..resolution)
            .map(|k| (-PI + (k as f64 + 0.5) * h, h))
            .collect();
        Ok(QuadratureRule {
            resolution,
            theta,
            periodic,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// `∫ f dθ dφ dψ` for a vector-valued integrand. Partial sums are formed
    /// per θ node in parallel and reduced in node order.
    pub fn integrate<const N: usize, F>(&self, f: F) -> Result<[f64; N]>
    where
        F: Fn(&StrategyAngles) -> Result<[f64; N]> + Sync,
    {
        let partials: Vec<Result<[f64; N]>> = self
            .theta
            .par_iter()
            .map(|&(theta, wt)| {
                let mut acc = [0.0; N];
                for &(phi, wp) in &self.periodic {
                    for &(psi, ws) in &self.periodic {
                        let a = StrategyAngles::from_canonical(theta, phi, psi);
                        let v = f(&a)?;
                        let w = wt * wp * ws;
                        for (s, x) in acc.iter_mut().zip(v) {
                            *s += w * x;
                        }
                    }
                }
                Ok(acc)
            })
            .collect();
        let mut total = [0.0; N];
        for p in partials {
            for (t, x) in total.iter_mut().zip(p?) {
                *t += x;
            }
        }
        Ok(total)
    }
}

fn finite(v: f64, a: &StrategyAngles) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            value: v,
            theta: a.theta(),
            phi: a.phi(),
            psi: a.psi(),
        })
    }
}

/// `∫_{SU(2)} g(U) dU` against normalized Haar measure.
pub fn haar_quadrature<G>(g: G, resolution: usize) -> Result<f64>
where
    G: Fn(&StrategyAngles) -> f64 + Sync,
{
    let rule = QuadratureRule::new(resolution)?;
    let [v] = rule.integrate(|a| {
        let gv = finite(g(a), a)?;
        Ok([gv * HaarMeasure::weight(a.theta(), a.phi(), a.psi())])
    })?;
    Ok(v)
}

/// `∫ f(U) h(U) dU` for a density `f` and vector-valued `h`. Point masses
/// evaluate `h` at their support.
pub fn integrate_density<const N: usize, H>(
    density: &StrategyDensity,
    h: H,
    rule: &QuadratureRule,
) -> Result<[f64; N]>
where
    H: Fn(&StrategyAngles) -> [f64; N] + Sync,
{
    if let StrategyDensity::PointMass(a) = density {
        return Ok(h(a));
    }
    rule.integrate(|a| {
        let w = density.lebesgue_weight(a).expect("not a point mass");
        let w = finite(w, a)?;
        let mut v = h(a);
        for x in v.iter_mut() {
            *x = finite(*x, a)? * w;
        }
        Ok(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 16, 24] {
            let nodes = gauss_legendre(n);
            let sum_w: f64 = nodes.iter().map(|(_, w)| w).sum();
            assert!((sum_w - 2.0).abs() < 1e-14, "n={n}");
            // exact up to degree 2n-1
            let deg = 2 * n - 1;
            let approx: f64 = nodes.iter().map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 {
                2.0 / deg as f64
            } else {
                0.0
            };
            assert!((approx - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn resolution_validation() {
        assert!(matches!(QuadratureRule::new(6), Err(Error::Config(_))));
        assert!(matches!(QuadratureRule::new(9), Err(Error::Config(_))));
        assert!(QuadratureRule::new(8).is_ok());
    }

    #[test]
    fn constant_has_unit_mass() {
        let v = haar_quadrature(|_| 1.0, 16).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cos_theta_integrates_to_zero() {
        let v = haar_quadrature(|a| a.theta().cos(), 16).unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn cos_squared_theta() {
        // ∫ cos²θ |sin θ| dθ / 4 over [-π, π] = 1/3
        let v = haar_quadrature(|a| a.theta().cos().powi(2), 32).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_reports_grid_point() {
        let err = haar_quadrature(|a| if a.theta() > 2.5 { f64::NAN } else { 1.0 }, 8).unwrap_err();
        match err {
            Error::NonFinite { theta, .. } => assert!(theta > 2.5),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn named_densities_have_unit_mass() {
        let rule = QuadratureRule::new(16).unwrap();
        for d in [StrategyDensity::HaarUniform, StrategyDensity::EulerUniform] {
            let [m] = integrate_density(&d, |_| [1.0], &rule).unwrap();
            assert!((m - 1.0).abs() < 1e-12, "{d}");
        }
    }
}
