//! Numerical tolerances shared by every module.

/// Exact-arithmetic identities (unitarity, normalization, hermiticity).
pub const EXACT: f64 = 1e-12;

/// Agreement between the closed-form payoff and the density-matrix path.
pub const ORACLE: f64 = 1e-10;

/// Smallest eigenvalue accepted for a density matrix.
pub const PSD: f64 = 1e-10;

/// Lower bound on the equilibrium gap tolerance.
pub const EQUILIBRIUM_GAP: f64 = 1e-3;

/// Multiplier applied to a standard error to form a noise band.
pub const SE_BAND: f64 = 4.0;

/// Angle resolution at which best-response refinement stops.
pub const ANGLE_RESOLUTION: f64 = 1e-6;
