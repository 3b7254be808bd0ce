//! Constructive decompositions.
//!
//! * Polynomial functions `p: ℚ → ℚ` of degree ≤ n split uniquely into traces
//!   of symmetric `k`-additive maps, recovered by finite differences
//!   ([`poly_decompose`], [`extract_multiadditive`]).
//! * Symmetric `k`-additive maps on `ℚ` are monomials `c·x_1⋯x_k`
//!   ([`regular_trace_to_monomial`]).
//! * An additive operator on `ℚ(t)` splits as `f = d + f(1)·id`, with the
//!   verdict saying whether `d` is a derivation of order `n`
//!   ([`decompose_linear_part`], [`d_functional`]).
//!
//! The black-box side works over `ℚ` on purpose. Additive maps on `ℚ` are
//! `ℚ`-linear, so the local-regularity hypotheses needed over `ℝ` hold
//! automatically and every symmetric `k`-additive map is `c·x_1⋯x_k`. That
//! turns the monomial form into something that can be checked exactly.

use num_traits::{One, Zero};
use serde::Serialize;

pub use crate::blackbox::BlackBoxFunc;
use crate::error::{Error, Result};
use crate::exactfield::{
    factorial, int, serialize_rational, serialize_rationals, Poly, RatFunc, Rational,
};
use crate::operators::{
    apply_deltas, is_order_n_derivation, nested_difference, OperatorFunc, OrderVerdict,
};
use crate::sampling;

pub const DEFAULT_PROBES: usize = 100;

/// Probe points for residual checks are drawn from `[-PROBE_RANGE, PROBE_RANGE]`.
pub const PROBE_RANGE: i64 = 100;

/// `(𝐃f)(α) = δ_α^{n+1} f(1)`.
pub fn d_functional(f: &OperatorFunc, n: usize, alpha: &RatFunc) -> RatFunc {
    apply_deltas(&vec![alpha.clone(); n + 1], f).apply(&RatFunc::one())
}

/// `f = derivation_part + lambda·id` with `lambda = f(1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearSplit {
    pub lambda: RatFunc,
    pub derivation_part: OperatorFunc,
    pub verified_order: usize,
    pub verdict: OrderVerdict,
}

impl LinearSplit {
    pub fn reconstruct(&self) -> OperatorFunc {
        &self.derivation_part + &OperatorFunc::scalar(self.lambda.clone())
    }
}

/// Splits off the linear part `f(1)·id` and checks the remainder for being a
/// derivation of order `n`. The split always reconstructs `f`; the verdict says
/// whether it has the form `d + f(1)·id` with `d` of order `n`.
pub fn decompose_linear_part(
    f: &OperatorFunc,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<LinearSplit> {
    let lambda = f.apply(&RatFunc::one());
    let derivation_part = f - &OperatorFunc::scalar(lambda.clone());
    let verdict = is_order_n_derivation(&derivation_part, n, trials, seed)?;
    Ok(LinearSplit {
        lambda,
        derivation_part,
        verified_order: n,
        verdict,
    })
}

/// `F_k(y_1, …, y_k) = Δ_{y_1 … y_k} p(x0) / k!` for a polynomial function `p`
/// of degree ≤ k.
pub fn extract_multiadditive(
    p: &BlackBoxFunc,
    k: usize,
    ys: &[Rational],
    x0: &Rational,
) -> Result<Rational> {
    if ys.len() != k {
        return Err(Error::InvalidArgument(format!(
            "expected {k} spans, got {}",
            ys.len()
        )));
    }
    Ok(nested_difference(p, ys, x0)? / factorial(k as u32))
}

/// `c·x^k`, the trace of `c·x_1⋯x_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Monomial {
    #[serde(serialize_with = "serialize_rational")]
    pub coefficient: Rational,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyDecomposition {
    pub degree_bound: usize,
    /// Indexed by degree, `0..=degree_bound`.
    pub components: Vec<Monomial>,
    pub residual_zero: bool,
    pub probes: usize,
    pub seed: u64,
}

impl PolyDecomposition {
    /// The sum of the components as a polynomial.
    pub fn recombine(&self) -> Poly {
        Poly::new(
            self.components
                .iter()
                .map(|m| m.coefficient.clone())
                .collect(),
        )
    }
}

/// Decomposes a polynomial function of degree ≤ n into its homogeneous
/// components, top degree first.
///
/// At each step `c_k = Δ_{1,…,1} r(0) / k!` where `r` is `p` minus the
/// components already found; the final residual must vanish at `probes`
/// seeded points in `[-100, 100]`, otherwise the first nonzero one is
/// reported.
pub fn poly_decompose(
    p: &BlackBoxFunc,
    n: usize,
    probes: usize,
    seed: u64,
) -> Result<PolyDecomposition> {
    let mut extracted = Poly::zero();
    let mut coeffs = vec![Rational::zero(); n + 1];
    let origin = Rational::zero();
    for k in (0..=n).rev() {
        let residual = p.minus(&BlackBoxFunc::from_poly(extracted.clone()));
        let ones = vec![Rational::one(); k];
        let c = extract_multiadditive(&residual, k, &ones, &origin)?;
        extracted = &extracted + &Poly::monomial(c.clone(), k);
        coeffs[k] = c;
    }

    let residual = p.minus(&BlackBoxFunc::from_poly(extracted));
    let mut rng = sampling::rng(seed);
    let range = int(PROBE_RANGE);
    for _ in 0..probes {
        let x = sampling::random_rational(&mut rng, &range);
        let r = residual.eval(&x)?;
        if !r.is_zero() {
            return Err(Error::NotPolynomial {
                degree: n,
                witness: Box::new(x),
                residual: Box::new(r),
            });
        }
    }

    Ok(PolyDecomposition {
        degree_bound: n,
        components: coeffs
            .into_iter()
            .enumerate()
            .map(|(degree, coefficient)| Monomial {
                coefficient,
                degree,
            })
            .collect(),
        residual_zero: true,
        probes,
        seed,
    })
}

/// Outcome of checking that a symmetric `k`-additive map is `c·x_1⋯x_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceMonomial {
    #[serde(serialize_with = "serialize_rational")]
    pub c: Rational,
    pub verified: bool,
    /// The first tuple where `F ≠ c·q_1⋯q_k`.
    #[serde(serialize_with = "serialize_witness_tuple")]
    pub witness: Option<Vec<Rational>>,
}

fn serialize_witness_tuple<S: serde::Serializer>(
    w: &Option<Vec<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(qs) => serialize_rationals(qs, s),
        None => s.serialize_none(),
    }
}

/// `c = F(1, …, 1)`, then `F(q_1, …, q_k) = c·q_1⋯q_k` is checked exactly on
/// `probes` seeded tuples.
pub fn regular_trace_to_monomial<F>(
    form: F,
    k: usize,
    probes: usize,
    seed: u64,
) -> Result<TraceMonomial>
where
    F: Fn(&[Rational]) -> Result<Rational>,
{
    let c = form(&vec![Rational::one(); k])?;
    let mut rng = sampling::rng(seed);
    let range = int(PROBE_RANGE);
    for _ in 0..probes {
        let qs: Vec<Rational> = (0..k)
            .map(|_| sampling::random_rational(&mut rng, &range))
            .collect();
        let expected = qs.iter().fold(c.clone(), |acc, q| acc * q);
        if form(&qs)? != expected {
            return Ok(TraceMonomial {
                c,
                verified: false,
                witness: Some(qs),
            });
        }
    }
    Ok(TraceMonomial {
        c,
        verified: true,
        witness: None,
    })
}
