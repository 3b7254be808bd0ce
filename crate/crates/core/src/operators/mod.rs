//! Additive maps on `ℚ(t)` as differential operators, and the operators
//! `δ_α` and `Δ_h` acting on them.
//!
//! An [`OperatorFunc`] is `x ↦ λ·x + Σ_{k≥1} c_k·D^k(x)` with coefficients in
//! `ℚ(t)` and `D = d/dt`. Every such map is `ℚ`-linear. The class is closed
//! under `δ_α f(x) = f(αx) − α·f(x)` (Leibniz expansion), which lets chains of
//! `δ`s be computed exactly as operators instead of as multivariate
//! expressions in the `α`s.

mod difference;
mod order;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactfield::{binomial, RatFunc};

pub use difference::{difference, difference_chain, difference_power, nested_difference};
pub use order::{is_order_n_derivation, OrderVerdict, Witness, DEFAULT_TRIALS};

/// The formal derivative `D = d/dt` on `ℚ(t)`, by the quotient rule.
pub fn formal_derivative(u: &RatFunc) -> RatFunc {
    let (n, d) = (u.num(), u.den());
    if d.is_one() {
        return RatFunc::from_poly(n.derivative());
    }
    let top = &(&n.derivative() * d) - &(n * &d.derivative());
    RatFunc::new(top, d * d).expect("square of a nonzero denominator")
}

/// `D^k(u)`.
pub fn derivative_power(u: &RatFunc, k: usize) -> RatFunc {
    (0..k).fold(u.clone(), |acc, _| formal_derivative(&acc))
}

/// `[u, D(u), …, D^k(u)]`.
fn derivative_ladder(u: &RatFunc, k: usize) -> Vec<RatFunc> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(u.clone());
    for j in 0..k {
        out.push(formal_derivative(&out[j]));
    }
    out
}

/// `x ↦ λ·x + Σ_{k≥1} c_k·D^k(x)` over `ℚ(t)`.
///
/// Coefficients are kept in one map keyed by derivative order, with order 0
/// holding `λ`. Zero coefficients are never stored, so the zero operator has
/// an empty map and `==` is operator equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OperatorFunc {
    terms: BTreeMap<usize, RatFunc>,
}

impl OperatorFunc {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(RatFunc::one())
    }

    /// `λ·id`.
    pub fn scalar(lambda: RatFunc) -> Self {
        Self::term(0, lambda)
    }

    /// `D^k`.
    pub fn d_power(k: usize) -> Self {
        Self::term(k, RatFunc::one())
    }

    /// `c·D^k` (`k = 0` is `c·id`).
    pub fn term(k: usize, c: RatFunc) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, RatFunc)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, k: usize, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&k) {
            None => {
                self.terms.insert(k, c);
            }
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert(k, sum);
                }
            }
        }
    }

    /// The coefficient `λ` of the identity.
    pub fn id_coeff(&self) -> RatFunc {
        self.coeff(0)
    }

    /// The coefficient of `D^k` (`k = 0` gives `λ`).
    pub fn coeff(&self, k: usize) -> RatFunc {
        self.terms.get(&k).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// Nonzero `c_k` for `k ≥ 1`, ascending.
    pub fn deriv_coeffs(&self) -> impl Iterator<Item = (usize, &RatFunc)> {
        self.terms.range(1..).map(|(k, c)| (*k, c))
    }

    /// All nonzero coefficients including order 0, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &RatFunc)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Highest supported derivative order, 0 when there are no `D`-terms.
    pub fn order_bound(&self) -> usize {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates the represented map at `x`.
    pub fn apply(&self, x: &RatFunc) -> RatFunc {
        let ladder = derivative_ladder(x, self.order_bound());
        self.terms
            .iter()
            .fold(RatFunc::zero(), |acc, (k, c)| &acc + &(c * &ladder[*k]))
    }

    /// Left multiplication of every coefficient: `x ↦ c·f(x)`.
    pub fn scale(&self, c: &RatFunc) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, a)| (*k, c * a)))
    }

    /// Composition `self ∘ other`, expanded back into the normal form by
    /// `D^j ∘ e = Σ_i C(j,i)·D^i(e)·D^{j−i}`.
    pub fn compose(&self, other: &OperatorFunc) -> Self {
        let mut out = Self::zero();
        for (&j, c) in &self.terms {
            for (&k, e) in &other.terms {
                let ladder = derivative_ladder(e, j);
                for (i, de) in ladder.iter().enumerate() {
                    let coeff = (c * de).scale(&binomial(j as u32, i as u32));
                    out.add_term(j - i + k, coeff);
                }
            }
        }
        out
    }

    /// `self` composed with itself `exp` times.
    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    /// Canonical text, e.g. `3*id + t*D^2`; parses back to the same operator.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0*id".to_string();
        }
        let mut out = String::new();
        for (&k, c) in &self.terms {
            let name = match k {
                0 => "id".to_string(),
                1 => "D".to_string(),
                _ => format!("D^{k}"),
            };
            let negative = c.leads_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = if negative { -c } else { c.clone() };
            if mag.is_one() {
                out.push_str(&name);
            } else if mag.is_atomic_factor() {
                out.push_str(&format!("{}*{name}", mag.display_with(var)));
            } else {
                out.push_str(&format!("({})*{name}", mag.display_with(var)));
            }
        }
        out
    }
}

impl fmt::Display for OperatorFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl Serialize for OperatorFunc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'a> Add<&'a OperatorFunc> for &'a OperatorFunc {
    type Output = OperatorFunc;

    fn add(self, rhs: &OperatorFunc) -> OperatorFunc {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Neg for &OperatorFunc {
    type Output = OperatorFunc;

    fn neg(self) -> OperatorFunc {
        OperatorFunc {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl<'a> Sub<&'a OperatorFunc> for &'a OperatorFunc {
    type Output = OperatorFunc;

    fn sub(self, rhs: &OperatorFunc) -> OperatorFunc {
        self + &(-rhs)
    }
}

/// `δ_α f`, the operator `x ↦ f(αx) − α·f(x)`.
///
/// With `D^k(αx) = Σ_{j=0}^{k} C(k,j)·D^j(α)·D^{k−j}(x)` the `j = 0` term
/// cancels against `α·f(x)`, so `c_k·D^k` contributes
/// `Σ_{j=1}^{k} C(k,j)·c_k·D^j(α)·D^{k−j}` and `λ·id` contributes nothing.
///
/// Every surviving term has order at most `k − 1`: one application lowers the
/// top order by at least one, so `m + 1` applications annihilate any operator
/// of top order `m`, whatever the `α`s are.
pub fn delta(alpha: &RatFunc, f: &OperatorFunc) -> OperatorFunc {
    let ladder = derivative_ladder(alpha, f.order_bound());
    let mut out = OperatorFunc::zero();
    for (k, c) in f.deriv_coeffs() {
        for (j, dj_alpha) in ladder.iter().enumerate().take(k + 1).skip(1) {
            let coeff = (c * dj_alpha).scale(&binomial(k as u32, j as u32));
            out.add_term(k - j, coeff);
        }
    }
    out
}

/// `δ_{α_1} ∘ ⋯ ∘ δ_{α_m} f` with `α_1` outermost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaChainSpec {
    alphas: Vec<RatFunc>,
    target: OperatorFunc,
}

impl DeltaChainSpec {
    pub fn new(alphas: Vec<RatFunc>, target: OperatorFunc) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidArgument(
                "a δ-chain needs at least one α".to_string(),
            ));
        }
        Ok(DeltaChainSpec { alphas, target })
    }

    pub fn alphas(&self) -> &[RatFunc] {
        &self.alphas
    }

    pub fn target(&self) -> &OperatorFunc {
        &self.target
    }
}

pub fn delta_chain(spec: &DeltaChainSpec) -> OperatorFunc {
    apply_deltas(&spec.alphas, &spec.target)
}

/// Like [`delta_chain`] but an empty list returns `f` unchanged.
///
/// The innermost `δ` (last `α`) is applied first; the `δ`s commute on this
/// class so the order is not observable.
pub fn apply_deltas(alphas: &[RatFunc], f: &OperatorFunc) -> OperatorFunc {
    alphas.iter().rev().fold(f.clone(), |acc, a| delta(a, &acc))
}
