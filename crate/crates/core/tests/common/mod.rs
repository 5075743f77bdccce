#![allow(dead_code)]

use std::f64::consts::PI;

use proptest::prelude::*;
use qbos::quantum::{Complex, StrategyAngles};

pub type M2 = [[Complex; 2]; 2];

pub fn angle() -> impl Strategy<Value = f64> {
    -PI..=PI
}

pub fn angles() -> impl Strategy<Value = StrategyAngles> {
    (angle(), angle(), angle()).prop_map(|(t, p, s)| StrategyAngles::new(t, p, s).unwrap())
}

pub fn mul2(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// `Rz(φ) · Rx(θ) · Rz(ψ)` with `Rz(x) = diag(e^{ix/2}, e^{-ix/2})` and
/// `Rx(θ) = cos(θ/2) I + i sin(θ/2) X`, built factor by factor.
pub fn rotation_product(theta: f64, phi: f64, psi: f64) -> M2 {
    let z = Complex::new(0.0, 0.0);
    let rz = |x: f64| {
        [
            [Complex::from_polar(1.0, x / 2.0), z],
            [z, Complex::from_polar(1.0, -x / 2.0)],
        ]
    };
    let (s, c) = (theta / 2.0).sin_cos();
    let rx = [
        [Complex::new(c, 0.0), Complex::new(0.0, s)],
        [Complex::new(0.0, s), Complex::new(c, 0.0)],
    ];
    mul2(&mul2(&rz(phi), &rx), &rz(psi))
}

/// Outcome probabilities of `(U_A ⊗ U_B)(|00⟩ + |11⟩)/√2` from explicit
/// amplitudes: `⟨στ|U_A⊗U_B|ψ⟩ = (A[σ][0] B[τ][0] + A[σ][1] B[τ][1]) / √2`.
pub fn outcome_probabilities(a: &M2, b: &M2) -> [f64; 4] {
    let mut p = [0.0; 4];
    for s in 0..2 {
        for t in 0..2 {
            let amp = (a[s][0] * b[t][0] + a[s][1] * b[t][1]) / 2f64.sqrt();
            p[2 * s + t] = amp.norm_sqr();
        }
    }
    p
}

/// Pure payoffs from explicit outcome probabilities and the bimatrix.
pub fn payoffs_from_probabilities(p: &[f64; 4], alpha: f64, beta: f64, gamma: f64) -> (f64, f64) {
    (
        alpha * p[0] + gamma * (p[1] + p[2]) + beta * p[3],
        beta * p[0] + gamma * (p[1] + p[2]) + alpha * p[3],
    )
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Paired differences `T(V·U_i) − T(U_i)` with `T(M) = |M₀₀|⁴`, for the
/// sampled unitaries `U_i` and a fixed `V`.
pub fn translation_differences(samples: &[StrategyAngles], v: &M2) -> Vec<f64> {
    samples
        .iter()
        .map(|a| {
            let u = rotation_product(a.theta(), a.phi(), a.psi());
            let vu = mul2(v, &u);
            vu[0][0].norm_sqr().powi(2) - u[0][0].norm_sqr().powi(2)
        })
        .collect()
}

/// The fixed left translation used by the invariance tests.
pub fn fixed_translation() -> M2 {
    rotation_product(1.1, 0.4, -2.3)
}
