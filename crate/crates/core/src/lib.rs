//! Mixed quantum strategies for the Battle of the Sexes.
//!
//! Each player holds one qubit of the entangled state `(|OO⟩ + |TT⟩)/√2`
//! and applies an SU(2) unitary drawn from a probability density over the
//! group (relative to normalized Haar measure). The crate provides:
//!
//! * [`quantum`]: 2- and 4-dimensional complex linear algebra, the
//!   entangling gate and the Euler-angle parametrization of SU(2);
//! * [`game`]: payoff operators, joint outcome probabilities and the
//!   closed-form pure payoff together with a density-matrix oracle;
//! * [`mixed`]: strategy densities, seeded Haar sampling, product quadrature
//!   and the mixed payoff functional;
//! * [`equilibrium`]: response surfaces, best-response search and Nash
//!   certificates;
//! * [`comparators`]: the classical game and the two-tactic
//!   (identity / bit-flip) quantization;
//! * [`cli`]: argument parsing, scenario execution and report output.

pub mod cli;
pub mod comparators;
pub mod equilibrium;
mod error;
pub mod game;
pub mod mixed;
pub mod quantum;
pub mod tolerance;

pub use error::{Error, Result};
