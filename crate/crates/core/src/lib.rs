//! Exact computations with higher-order derivations.
//!
//! The crate works in two computable models:
//!
//! * the rational function field `ℚ(t)`, where `D = d/dt` is a genuine
//!   nontrivial derivation and additive maps are represented as differential
//!   operators `λ·id + Σ c_k·D^k` ([`operators::OperatorFunc`]);
//! * the rational numbers `ℚ`, where black-box functions are probed with
//!   exact arithmetic to decompose polynomial functions by finite
//!   differences ([`characterize`]) and to run the Hyers stabilization
//!   `f(2^N x) / 2^N` with certified bounds ([`stability`]).
//!
//! On `ℚ` every additive map is `ℚ`-linear, so every symmetric `k`-additive
//! map is a monomial `c·x_1⋯x_k` and the regularity hypotheses needed on `ℝ`
//! hold automatically. That is what makes the decomposition results exactly
//! checkable here.
//!
//! Nothing in the crate uses floating point.

pub mod blackbox;
pub mod characterize;
pub mod cli;
pub mod error;
pub mod exactfield;
pub mod operators;
pub mod sampling;
pub mod stability;

pub use blackbox::BlackBoxFunc;
pub use error::{Error, Result};
pub use exactfield::{Poly, RatFunc, Rational};
pub use operators::OperatorFunc;
