use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::{Poly, RatFunc, Rational};

type Evaluator = dyn Fn(&Rational) -> Result<Rational> + Send + Sync;

/// An opaque, exact, deterministic function `ℚ → ℚ`.
///
/// Evaluation may fail (a domain guard, a pole); failures carry the point.
/// Cloning shares the evaluator.
#[derive(Clone)]
pub struct BlackBoxFunc {
    eval: Arc<Evaluator>,
}

impl BlackBoxFunc {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&Rational) -> Result<Rational> + Send + Sync + 'static,
    {
        BlackBoxFunc { eval: Arc::new(f) }
    }

    /// Wraps a total function.
    pub fn total<F>(f: F) -> Self
    where
        F: Fn(&Rational) -> Rational + Send + Sync + 'static,
    {
        Self::new(move |x| Ok(f(x)))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::total(move |x| p.eval(x))
    }

    /// Evaluation of a rational function, failing at poles.
    pub fn from_ratfunc(r: RatFunc) -> Self {
        Self::new(move |x| {
            r.eval(x).ok_or_else(|| Error::Evaluation {
                point: Box::new(x.clone()),
                reason: "pole".to_string(),
            })
        })
    }

    /// `x ↦ λ·x`.
    pub fn linear(lambda: Rational) -> Self {
        Self::total(move |x| &lambda * x)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        (self.eval)(x)
    }

    /// Pointwise difference `self − other`.
    pub fn minus(&self, other: &BlackBoxFunc) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |x| Ok(a.eval(x)? - b.eval(x)?))
    }
}

impl fmt::Debug for BlackBoxFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BlackBoxFunc(..)")
    }
}
