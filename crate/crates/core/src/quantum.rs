//! Fixed-size complex linear algebra for one and two qubits.
//!
//! The two-qubit basis is ordered `(|OO⟩, |OT⟩, |TO⟩, |TT⟩)` with Alice as
//! the first tensor factor, so `|στ⟩` has index `2·σ + τ` where `O = 0` and
//! `T = 1`. Every module in the crate shares this ordering.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;
use std::ops::Mul;

use nalgebra::Matrix4 as NaMatrix4;
use serde::{Deserialize, Serialize};

use crate::tolerance;
use crate::{Error, Result};

pub use num_complex::Complex64 as Complex;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// One of the four measurement outcomes of the two-qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    OO,
    OT,
    TO,
    TT,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [Outcome::OO, Outcome::OT, Outcome::TO, Outcome::TT];

    pub fn index(self) -> usize {
        match self {
            Outcome::OO => 0,
            Outcome::OT => 1,
            Outcome::TO => 2,
            Outcome::TT => 3,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::OO => "OO",
            Outcome::OT => "OT",
            Outcome::TO => "TO",
            Outcome::TT => "TT",
        };
        f.write_str(s)
    }
}

/// A general 2×2 complex matrix (a single-qubit operator).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[Complex; 2]; 2]);

impl Matrix2 {
    pub fn identity() -> Self {
        Matrix2([[ONE, ZERO], [ZERO, ONE]])
    }

    /// Pauli X, the classical bit flip.
    pub fn pauli_x() -> Self {
        Matrix2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn hadamard() -> Self {
        let h = Complex::new(FRAC_1_SQRT_2, 0.0);
        Matrix2([[h, h], [h, -h]])
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Matrix2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn det(&self) -> Complex {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    /// Kronecker product `self ⊗ rhs`; `self` acts on the first factor.
    pub fn kron(&self, rhs: &Matrix2) -> Matrix4 {
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[i / 2][j / 2] * rhs.0[i % 2][j % 2];
            }
        }
        Matrix4(out)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Matrix2(out)
    }
}

/// Euler angles of a pure quantum strategy, each canonicalized to `[-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyAngles {
    theta: f64,
    phi: f64,
    psi: f64,
}

impl StrategyAngles {
    pub const IDENTITY: StrategyAngles = StrategyAngles {
        theta: 0.0,
        phi: 0.0,
        psi: 0.0,
    };

    /// Builds angles, wrapping each into `[-π, π]` by 2π periodicity.
    pub fn new(theta: f64, phi: f64, psi: f64) -> Result<Self> {
        for (name, v) in [("theta", theta), ("phi", phi), ("psi", psi)] {
            if !v.is_finite() {
                return Err(Error::Domain(format!("angle {name} is not finite ({v})")));
            }
        }
        Ok(StrategyAngles {
            theta: wrap_angle(theta),
            phi: wrap_angle(phi),
            psi: wrap_angle(psi),
        })
    }

    /// Angles already known to lie in `[-π, π]`, e.g. grid nodes.
    pub(crate) fn from_canonical(theta: f64, phi: f64, psi: f64) -> Self {
        debug_assert!([theta, phi, psi].iter().all(|a| a.abs() <= PI));
        StrategyAngles { theta, phi, psi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn unitary(&self) -> Unitary2 {
        su2_from_angles(*self)
    }
}

impl fmt::Display for StrategyAngles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.theta, self.phi, self.psi)
    }
}

/// Wraps an angle into `[-π, π]`; values already in range are returned
/// unchanged so that `±π` stay distinct.
pub fn wrap_angle(x: f64) -> f64 {
    if (-PI..=PI).contains(&x) {
        return x;
    }
    let wrapped = x - TAU * (x / TAU).round();
    wrapped.clamp(-PI, PI)
}

/// A 2×2 special-unitary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(Matrix2);

impl Unitary2 {
    pub fn identity() -> Self {
        Unitary2(Matrix2::identity())
    }

    /// Accepts a matrix only if `U†U = I` and `det U = 1` within
    /// [`tolerance::EXACT`].
    pub fn try_from_matrix(m: Matrix2) -> Result<Self> {
        let u = Unitary2(m);
        let unitarity = u.unitarity_defect();
        let det = u.det_defect();
        if unitarity > tolerance::EXACT || det > tolerance::EXACT {
            return Err(Error::Domain(format!(
                "matrix is not special unitary (|U†U - I| = {unitarity:e}, |det U - 1| = {det:e})"
            )));
        }
        Ok(u)
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn adjoint(&self) -> Unitary2 {
        Unitary2(self.0.adjoint())
    }

    /// Max-abs entrywise distance of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self.0.adjoint() * self.0).max_abs_diff(&Matrix2::identity())
    }

    /// `|det U - 1|`.
    pub fn det_defect(&self) -> f64 {
        (self.0.det() - ONE).norm()
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        Unitary2(self.0 * rhs.0)
    }
}

/// The Euler-angle parametrization of SU(2):
///
/// ```text
/// U(θ,φ,ψ) = [  e^{ i(φ+ψ)/2} cos θ/2    i e^{ i(φ-ψ)/2} sin θ/2 ]
///            [ i e^{-i(φ-ψ)/2} sin θ/2     e^{-i(φ+ψ)/2} cos θ/2 ]
/// ```
pub fn su2_from_angles(angles: StrategyAngles) -> Unitary2 {
    let (s, c) = (angles.theta / 2.0).sin_cos();
    let sum = (angles.phi + angles.psi) / 2.0;
    let diff = (angles.phi - angles.psi) / 2.0;
    let i = Complex::i();
    Unitary2(Matrix2([
        [
            Complex::from_polar(c, sum),
            i * Complex::from_polar(s, diff),
        ],
        [
            i * Complex::from_polar(s, -diff),
            Complex::from_polar(c, -sum),
        ],
    ]))
}

/// A 4×4 complex matrix on the two-qubit space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4(pub [[Complex; 4]; 4]);

impl Matrix4 {
    pub fn zeros() -> Self {
        Matrix4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Matrix4::diagonal([1.0; 4])
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut m = Matrix4::zeros();
        for (k, v) in d.into_iter().enumerate() {
            m.0[k][k] = Complex::new(v, 0.0);
        }
        m
    }

    /// Controlled NOT with Alice's qubit as control.
    pub fn cnot() -> Self {
        let mut m = Matrix4::zeros();
        m.0[0][0] = ONE;
        m.0[1][1] = ONE;
        m.0[2][3] = ONE;
        m.0[3][2] = ONE;
        m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Matrix4::zeros();
        for r in 0..4 {
            for c in 0..4 {
                out.0[c][r] = self.0[r][c].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex {
        (0..4).map(|k| self.0[k][k]).sum()
    }

    pub fn apply(&self, v: &[Complex; 4]) -> [Complex; 4] {
        let mut out = [ZERO; 4];
        for (r, x) in out.iter_mut().enumerate() {
            *x = (0..4).map(|c| self.0[r][c] * v[c]).sum();
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Matrix4) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    /// Max-abs entrywise distance of `self` from `self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        out
    }

    fn add(&self, other: &Matrix4) -> Self {
        let mut out = *self;
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] += other.0[r][c];
            }
        }
        out
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;

    fn mul(self, rhs: Matrix4) -> Matrix4 {
        let mut out = Matrix4::zeros();
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] = (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        out
    }
}

/// A normalized two-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State4([Complex; 4]);

impl State4 {
    /// Accepts amplitudes whose squared norm is 1 within [`tolerance::EXACT`].
    pub fn new(amplitudes: [Complex; 4]) -> Result<Self> {
        let s = State4(amplitudes);
        let defect = (s.norm_sqr() - 1.0).abs();
        if defect > tolerance::EXACT {
            return Err(Error::Domain(format!(
                "state is not normalized (|‖ψ‖² - 1| = {defect:e})"
            )));
        }
        Ok(s)
    }

    pub fn basis(outcome: Outcome) -> Self {
        let mut a = [ZERO; 4];
        a[outcome.index()] = ONE;
        State4(a)
    }

    pub fn amplitudes(&self) -> &[Complex; 4] {
        &self.0
    }

    pub fn amplitude(&self, outcome: Outcome) -> Complex {
        self.0[outcome.index()]
    }

    /// `|⟨στ|ψ⟩|²`.
    pub fn probability(&self, outcome: Outcome) -> f64 {
        self.amplitude(outcome).norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// The gate `J = CNOT · (H ⊗ I)` that prepares the shared state.
pub fn entangling_gate() -> Matrix4 {
    Matrix4::cnot() * Matrix2::hadamard().kron(&Matrix2::identity())
}

/// `(|OO⟩ + |TT⟩)/√2`, written out literally.
pub fn initial_state() -> State4 {
    let h = Complex::new(FRAC_1_SQRT_2, 0.0);
    State4([h, ZERO, ZERO, h])
}

/// `J|OO⟩`, the constructive route to [`initial_state`].
pub fn prepared_initial_state() -> State4 {
    State4(entangling_gate().apply(State4::basis(Outcome::OO).amplitudes()))
}

/// `(U_A ⊗ U_B)|ψ⟩`.
pub fn apply_pair(ua: &Unitary2, ub: &Unitary2, state: &State4) -> State4 {
    State4(ua.matrix().kron(ub.matrix()).apply(&state.0))
}

/// A two-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density4(Matrix4);

impl Density4 {
    /// Checks hermiticity, trace and positivity before accepting `m`.
    pub fn try_from_matrix(m: Matrix4) -> Result<Self> {
        let herm = m.hermiticity_defect();
        if herm > tolerance::EXACT {
            return Err(Error::Domain(format!(
                "density matrix is not Hermitian (defect {herm:e})"
            )));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > tolerance::EXACT {
            return Err(Error::Domain(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        let d = Density4(m);
        let min = d.min_eigenvalue();
        if min < -tolerance::PSD {
            return Err(Error::Domain(format!(
                "density matrix is not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(d)
    }

    /// Convex combination `Σ w_k ρ_k`; weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, Density4)]) -> Result<Self> {
        if parts.iter().any(|(w, _)| w.is_nan() || *w < 0.0) {
            return Err(Error::Domain("mixture weights must be non-negative".into()));
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > tolerance::EXACT {
            return Err(Error::Domain(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        let m = parts
            .iter()
            .fold(Matrix4::zeros(), |acc, (w, rho)| acc.add(&rho.0.scale(*w)));
        Density4::try_from_matrix(m)
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.0
    }

    /// `ρ ↦ U ρ U†` for a 4×4 unitary `U`.
    pub fn conjugate_by(&self, u: &Matrix4) -> Density4 {
        Density4(*u * self.0 * u.adjoint())
    }

    /// `Tr(ρ · observable)`, real part; observables here are Hermitian.
    pub fn expectation(&self, observable: &Matrix4) -> f64 {
        (self.0 * *observable).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let m = NaMatrix4::from_fn(|r, c| self.0 .0[r][c]);
        m.symmetric_eigenvalues().min()
    }
}

/// `ρ_i = |ψ_i⟩⟨ψ_i|` for the shared initial state, with its four nonzero
/// entries written as exactly 1/2.
pub fn initial_density() -> Density4 {
    let mut m = Matrix4::zeros();
    for r in [0, 3] {
        for c in [0, 3] {
            m.0[r][c] = Complex::new(0.5, 0.0);
        }
    }
    Density4(m)
}

/// `|ψ⟩⟨ψ|`.
pub fn density_from_state(state: &State4) -> Density4 {
    let mut m = Matrix4::zeros();
    for r in 0..4 {
        for c in 0..4 {
            m.0[r][c] = state.0[r] * state.0[c].conj();
        }
    }
    Density4(m)
}
