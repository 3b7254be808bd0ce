//! Exact scalar arithmetic: `ℚ`, `ℚ[t]` and the field `ℚ(t)`.

mod poly;
mod ratfunc;
mod rational;

pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{
    binomial, factorial, int, parse_rational, pow2, rat, render_rational, serialize_rational,
    serialize_rationals, Rational,
};
