use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::quantum::StrategyAngles;
use crate::{Error, Result};

/// `1/(16π²)`, the normalization of Haar measure in Euler angles.
pub const HAAR_NORMALIZATION: f64 = 1.0 / (16.0 * PI * PI);

/// Normalized Haar measure on SU(2) in Euler coordinates:
/// `dU = |sin θ| dθ dφ dψ / (16π²)` over `[-π, π]³`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HaarMeasure;

impl HaarMeasure {
    /// Lebesgue density of the measure at `(θ, φ, ψ)`.
    pub fn weight(theta: f64, _phi: f64, _psi: f64) -> f64 {
        theta.sin().abs() * HAAR_NORMALIZATION
    }
}

type ThetaFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type AngleFn = Arc<dyn Fn(&StrategyAngles) -> f64 + Send + Sync>;

/// A density `h(θ)` on `[-π, π]` for the θ angle, with φ and ψ uniform.
///
/// Relative to Haar measure this is `f(U) = 4 h(θ) / |sin θ|`.
#[derive(Clone)]
pub struct ThetaMarginal {
    label: String,
    density: ThetaFn,
    bound: f64,
}

impl ThetaMarginal {
    /// `bound` must dominate `h` on `[-π, π]`; it drives rejection sampling.
    pub fn new(
        label: impl Into<String>,
        bound: f64,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ThetaMarginal {
            label: label.into(),
            density: Arc::new(density),
            bound,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn eval(&self, theta: f64) -> f64 {
        (self.density)(theta)
    }
}

/// An arbitrary non-negative density relative to Haar measure.
///
/// Sampling uses Haar proposals accepted with probability `f(U)/envelope`,
/// so a finite envelope with `f ≤ envelope` is required to sample.
#[derive(Clone)]
pub struct CustomDensity {
    label: String,
    density: AngleFn,
    envelope: Option<f64>,
}

impl CustomDensity {
    pub fn new(
        label: impl Into<String>,
        envelope: Option<f64>,
        density: impl Fn(&StrategyAngles) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CustomDensity {
            label: label.into(),
            density: Arc::new(density),
            envelope,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn envelope(&self) -> Option<f64> {
        self.envelope
    }

    pub fn eval(&self, angles: &StrategyAngles) -> f64 {
        (self.density)(angles)
    }
}

/// A mixed quantum strategy: a probability density over SU(2) relative to
/// normalized Haar measure.
#[derive(Clone)]
pub enum StrategyDensity {
    /// All mass on one unitary.
    PointMass(StrategyAngles),
    /// `f = 1`.
    HaarUniform,
    /// `f = 2 / (π |sin θ|)`, i.e. uniform in the Euler-angle cube.
    EulerUniform,
    ThetaMarginal(ThetaMarginal),
    Custom(CustomDensity),
}

impl fmt::Debug for StrategyDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StrategyDensity({self})")
    }
}

impl fmt::Display for StrategyDensity {
    /// The parseable form (`point:θ,φ,ψ`, `haar-uniform`, `euler-uniform`);
    /// closure-backed families print as `theta-marginal:<label>` or
    /// `custom:<label>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyDensity::PointMass(a) => {
                write!(f, "point:{},{},{}", a.theta(), a.phi(), a.psi())
            }
            StrategyDensity::HaarUniform => f.write_str("haar-uniform"),
            StrategyDensity::EulerUniform => f.write_str("euler-uniform"),
            StrategyDensity::ThetaMarginal(t) => write!(f, "theta-marginal:{}", t.label),
            StrategyDensity::Custom(c) => write!(f, "custom:{}", c.label),
        }
    }
}

impl StrategyDensity {
    pub fn point(theta: f64, phi: f64, psi: f64) -> Result<Self> {
        Ok(StrategyDensity::PointMass(StrategyAngles::new(
            theta, phi, psi,
        )?))
    }

    /// Density relative to Haar measure. `None` for point masses, which
    /// have no density.
    pub fn haar_density(&self, a: &StrategyAngles) -> Option<f64> {
        match self {
            StrategyDensity::PointMass(_) => None,
            StrategyDensity::HaarUniform => Some(1.0),
            StrategyDensity::EulerUniform => Some(2.0 / (PI * a.theta().sin().abs())),
            StrategyDensity::ThetaMarginal(t) => {
                Some(4.0 * t.eval(a.theta()) / a.theta().sin().abs())
            }
            StrategyDensity::Custom(c) => Some(c.eval(a)),
        }
    }

    /// Density with respect to Lebesgue measure `dθ dφ dψ` on the angle cube,
    /// i.e. `f(U) · |sin θ| / (16π²)`, evaluated without forming the
    /// `1/|sin θ|` singularities of the θ-flat families.
    pub fn lebesgue_weight(&self, a: &StrategyAngles) -> Option<f64> {
        match self {
            StrategyDensity::PointMass(_) => None,
            StrategyDensity::HaarUniform => Some(HaarMeasure::weight(a.theta(), a.phi(), a.psi())),
            StrategyDensity::EulerUniform => Some(1.0 / (8.0 * PI * PI * PI)),
            StrategyDensity::ThetaMarginal(t) => Some(t.eval(a.theta()) / (4.0 * PI * PI)),
            StrategyDensity::Custom(c) => {
                Some(c.eval(a) * HaarMeasure::weight(a.theta(), a.phi(), a.psi()))
            }
        }
    }

    /// Checks that the family can be sampled.
    pub fn validate(&self) -> Result<()> {
        match self {
            StrategyDensity::ThetaMarginal(t) if !(t.bound.is_finite() && t.bound > 0.0) => {
                Err(Error::Config(format!(
                    "theta marginal '{}' needs a finite positive bound, got {}",
                    t.label, t.bound
                )))
            }
            StrategyDensity::Custom(c) => match c.envelope {
                Some(e) if e.is_finite() && e > 0.0 => Ok(()),
                Some(e) => Err(Error::Config(format!(
                    "custom density '{}' has a non-finite or non-positive envelope ({e})",
                    c.label
                ))),
                None => Err(Error::Config(format!(
                    "custom density '{}' has no finite envelope bound",
                    c.label
                ))),
            },
            _ => Ok(()),
        }
    }
}

impl FromStr for StrategyDensity {
    type Err = Error;

    /// Grammar: `point:<theta>,<phi>,<psi>` (radians) | `haar-uniform` |
    /// `euler-uniform`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "haar-uniform" => return Ok(StrategyDensity::HaarUniform),
            "euler-uniform" => return Ok(StrategyDensity::EulerUniform),
            _ => {}
        }
        let Some(rest) = s.strip_prefix("point:") else {
            return Err(Error::Usage(format!(
                "unrecognized strategy '{s}' (expected point:<theta>,<phi>,<psi> | haar-uniform | euler-uniform)"
            )));
        };
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Usage(format!(
                "point strategy '{s}' needs exactly three angles, got {}",
                parts.len()
            )));
        }
        let mut v = [0.0; 3];
        for (slot, token) in v.iter_mut().zip(&parts) {
            let lower = token.to_ascii_lowercase();
            if lower.contains("deg") || token.contains('°') {
                return Err(Error::Usage(format!(
                    "angle '{token}' looks like degrees; angles are accepted in radians only"
                )));
            }
            *slot = token
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("cannot parse angle '{token}' in '{s}'")))?;
        }
        StrategyDensity::point(v[0], v[1], v[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_named_families() {
        assert!(matches!(
            "haar-uniform".parse(),
            Ok(StrategyDensity::HaarUniform)
        ));
        assert!(matches!(
            "euler-uniform".parse(),
            Ok(StrategyDensity::EulerUniform)
        ));
        match "point:1.5,0,-0.25".parse::<StrategyDensity>().unwrap() {
            StrategyDensity::PointMass(a) => {
                assert_eq!((a.theta(), a.phi(), a.psi()), (1.5, 0.0, -0.25));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn parse_errors_name_the_token() {
        let err = "haar".parse::<StrategyDensity>().unwrap_err().to_string();
        assert!(err.contains("'haar'"), "{err}");
        let err = "point:1,2"
            .parse::<StrategyDensity>()
            .unwrap_err()
            .to_string();
        assert!(err.contains("three angles"), "{err}");
        let err = "point:1,x,2"
            .parse::<StrategyDensity>()
            .unwrap_err()
            .to_string();
        assert!(err.contains("'x'"), "{err}");
        let err = "point:90deg,0,0"
            .parse::<StrategyDensity>()
            .unwrap_err()
            .to_string();
        assert!(err.contains("radians"), "{err}");
        assert!("point:nan,0,0".parse::<StrategyDensity>().is_err());
    }

    #[test]
    fn display_round_trips_through_parse() {
        for s in [
            "haar-uniform",
            "euler-uniform",
            "point:1.5707963267948966,0,3.141592653589793",
        ] {
            let d: StrategyDensity = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
    }

    #[test]
    fn euler_uniform_weight_is_flat() {
        let d = StrategyDensity::EulerUniform;
        let a = StrategyAngles::new(0.7, 0.1, -2.0).unwrap();
        let f = d.haar_density(&a).unwrap();
        let w = d.lebesgue_weight(&a).unwrap();
        assert!((f * HaarMeasure::weight(0.7, 0.1, -2.0) - w).abs() < 1e-18);
        assert!((w * 8.0 * PI.powi(3) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn custom_without_envelope_is_config_error() {
        let c = StrategyDensity::Custom(CustomDensity::new("flat", None, |_| 1.0));
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let c = StrategyDensity::Custom(CustomDensity::new("flat", Some(f64::INFINITY), |_| 1.0));
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let c = StrategyDensity::Custom(CustomDensity::new("flat", Some(1.0), |_| 1.0));
        assert!(c.validate().is_ok());
    }
}
