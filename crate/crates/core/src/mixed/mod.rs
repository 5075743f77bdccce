//! Mixed quantum strategies: densities over SU(2) relative to normalized
//! Haar measure, sampling, quadrature and the mixed payoff functional.

mod density;
mod payoff;
mod quadrature;
mod sampling;

pub use density::{CustomDensity, HaarMeasure, StrategyDensity, ThetaMarginal, HAAR_NORMALIZATION};
pub use payoff::{
    feature_alignment, features, mixed_payoff, payoff_from_samples, player_samples, Integration,
    MixedPayoff, StrategyMoments, ALICE_STREAM, BOB_STREAM, DEFAULT_SAMPLES,
};
pub use quadrature::{
    gauss_legendre, haar_quadrature, integrate_density, QuadratureRule, DEFAULT_RESOLUTION,
    MIN_RESOLUTION,
};
pub use sampling::{density_sample, haar_sample, SampleStream, BATCH_SIZE};
