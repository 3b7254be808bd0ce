//! Hyers stabilization of approximately additive functions on `ℚ`.
//!
//! For `f` with `|f(x+y) − f(x) − f(y)| ≤ ε` the truncations
//! `a_N(x) = f(2^N x) / 2^N` satisfy
//! `|a_{n+1}(x) − a_n(x)| = |f(2·2^n x) − 2·f(2^n x)| / 2^{n+1} ≤ ε / 2^{n+1}`,
//! so they converge to an additive `a` with `|a_N − a| ≤ ε·2^{−N}` and
//! `|f − a| ≤ ε`. All quantities here are exact rationals and every check is
//! an exact inequality.
//!
//! On `ℚ` the additive limit is `a(x) = a(1)·x`, and every derivation of any
//! order vanishes, so the order-n recovery reduces to `d = 0` and
//! `λ ≈ a_N(1)`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::blackbox::BlackBoxFunc;
use crate::error::{Error, Result};
use crate::exactfield::{parse_rational, pow2, serialize_rational, Rational};
use crate::sampling;

pub const DEFAULT_DEPTH: u32 = 20;
pub const DEFAULT_SAMPLES: usize = 1000;

/// `λ·x + b(x)` with a deterministic hash-derived `b(x) ∈ [0, ε]`.
#[derive(Clone, Debug)]
pub struct NoisyFunc {
    pub base: BlackBoxFunc,
    pub core_lambda: Rational,
    pub epsilon: Rational,
    pub seed: u64,
}

/// `b(x) = ε·u / (2^64 − 1)` where `u` is the first 8 bytes of
/// `SHA-256(seed ‖ "p/q")` for `x = p/q` in lowest terms.
pub fn noise(x: &Rational, epsilon: &Rational, seed: u64) -> Rational {
    if epsilon.is_zero() {
        return Rational::zero();
    }
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(format!("{}/{}", x.numer(), x.denom()).as_bytes());
    let digest = hasher.finalize();
    let mut word = [0u8; 8];
    word.copy_from_slice(&digest[..8]);
    let u = Rational::from_integer(u64::from_le_bytes(word).into());
    let max = Rational::from_integer(u64::MAX.into());
    epsilon * u / max
}

/// A linear core plus bounded noise, `|f(x) − λx| ≤ ε` at every `x`.
///
/// The noise is nonnegative, which keeps the Cauchy defect within `2ε`
/// (`b(x+y) − b(x) − b(y) ∈ [−2ε, ε]`). With `ε = 0` no noise is evaluated at
/// all and `f` is exactly linear.
pub fn make_noisy(core_lambda: Rational, epsilon: Rational, seed: u64) -> Result<NoisyFunc> {
    if epsilon.is_negative() {
        return Err(Error::InvalidArgument("epsilon must be ≥ 0".to_string()));
    }
    let base = if epsilon.is_zero() {
        BlackBoxFunc::linear(core_lambda.clone())
    } else {
        let (lambda, eps) = (core_lambda.clone(), epsilon.clone());
        BlackBoxFunc::total(move |x| &lambda * x + noise(x, &eps, seed))
    };
    Ok(NoisyFunc {
        base,
        core_lambda,
        epsilon,
        seed,
    })
}

/// `a_N(x) = f(2^N x) / 2^N`.
pub fn hyers_stabilize(f: &BlackBoxFunc, depth: u32) -> Result<BlackBoxFunc> {
    if depth == 0 {
        return Err(Error::InvalidArgument(
            "depth must be at least 1".to_string(),
        ));
    }
    let f = f.clone();
    let scale = pow2(depth);
    Ok(BlackBoxFunc::new(move |x| {
        Ok(f.eval(&(x * &scale))? / &scale)
    }))
}

/// `|f(x+y) − f(x) − f(y)|`.
pub fn pair_defect(f: &BlackBoxFunc, x: &Rational, y: &Rational) -> Result<Rational> {
    Ok((f.eval(&(x + y))? - f.eval(x)? - f.eval(y)?).abs())
}

/// Largest [`pair_defect`] over the given pairs (zero for no pairs).
pub fn defect_on(f: &BlackBoxFunc, pairs: &[(Rational, Rational)]) -> Result<Rational> {
    pairs.iter().try_fold(Rational::zero(), |acc, (x, y)| {
        Ok(acc.max(pair_defect(f, x, y)?))
    })
}

/// Sampled Cauchy defect over `samples` seeded pairs in `[-R, R]²`; a lower
/// bound for the true defect.
pub fn cauchy_defect(
    f: &BlackBoxFunc,
    samples: usize,
    seed: u64,
    range_bound: &Rational,
) -> Result<Rational> {
    let probes = ProbeSet::random(samples, seed, range_bound)?;
    defect_on(f, probes.pairs())
}

/// Seeded probe pairs `(x, y)` with `|x|, |y| ≤ range_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeSet {
    pairs: Vec<(Rational, Rational)>,
}

impl ProbeSet {
    pub fn random(samples: usize, seed: u64, range_bound: &Rational) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidArgument(
                "samples must be at least 1".to_string(),
            ));
        }
        if !range_bound.is_positive() {
            return Err(Error::InvalidArgument(
                "range bound must be positive".to_string(),
            ));
        }
        let mut rng = sampling::rng(seed);
        let pairs = (0..samples)
            .map(|_| {
                let x = sampling::random_rational(&mut rng, range_bound);
                let y = sampling::random_rational(&mut rng, range_bound);
                (x, y)
            })
            .collect();
        Ok(ProbeSet { pairs })
    }

    pub fn from_pairs(pairs: Vec<(Rational, Rational)>) -> Self {
        ProbeSet { pairs }
    }

    pub fn pairs(&self) -> &[(Rational, Rational)] {
        &self.pairs
    }

    /// Every coordinate, `x_1, y_1, x_2, y_2, …`.
    pub fn points(&self) -> impl Iterator<Item = &Rational> {
        self.pairs.iter().flat_map(|(x, y)| [x, y])
    }

    /// One rational per line, `p/q` (or `p`), pairs as consecutive lines.
    pub fn to_text(&self) -> String {
        self.points().map(|q| format!("{q}\n")).collect()
    }

    /// Inverse of [`ProbeSet::to_text`]; blank lines are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let points = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if points.len() % 2 != 0 {
            return Err(Error::InvalidArgument(
                "probe file must hold an even number of points".to_string(),
            ));
        }
        let pairs = points
            .chunks(2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect();
        Ok(ProbeSet { pairs })
    }

    /// `(2^N x, 2^N y)` for every sampled pair: the points where `f` is
    /// evaluated when measuring the defect of `a_N` on the sampled pairs.
    pub fn matched_pairs(&self, depth: u32) -> Vec<(Rational, Rational)> {
        let scale = pow2(depth);
        self.pairs
            .iter()
            .map(|(x, y)| (x * &scale, y * &scale))
            .collect()
    }

    /// `(2^k p, 2^k p)` for every sampled coordinate `p` and `0 ≤ k ≤ N`: the
    /// pairs behind the telescoping steps `a_{k+1}(p) − a_k(p)`.
    pub fn doubling_pairs(&self, depth: u32) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        for p in self.points() {
            let mut z = p.clone();
            for _ in 0..=depth {
                out.push((z.clone(), z.clone()));
                z = &z + &z;
            }
        }
        out
    }
}

/// Certified outcome of one stabilization run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    /// Defect of `f` measured on the sampled pairs inside the probe box.
    #[serde(serialize_with = "serialize_rational")]
    pub epsilon_hat: Rational,
    /// Defect of `f` on the sampled pairs and their dilates `(2^N x, 2^N y)`;
    /// at least `epsilon_hat`.
    #[serde(serialize_with = "serialize_rational")]
    pub epsilon_hat_matched: Rational,
    pub depth: u32,
    /// `max |f(p) − a_N(p)|` over sampled coordinates.
    #[serde(serialize_with = "serialize_rational")]
    pub residual_sup: Rational,
    /// Defect of `a_N` on the sampled pairs.
    #[serde(serialize_with = "serialize_rational")]
    pub cauchy_defect_of_a_n: Rational,
    pub samples: usize,
    pub seed: u64,
    /// Half-width of the probe box `[-R, R]`.
    #[serde(serialize_with = "serialize_rational")]
    pub range_bound: Rational,
    pub pass: bool,
}

/// Recovered `f ≈ d + λ·x` with `d = 0` on `ℚ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recovery {
    pub n: usize,
    /// `a_N(1)`.
    #[serde(serialize_with = "serialize_rational")]
    pub lambda: Rational,
    /// The order-`n` derivation part; always the zero map on `ℚ`.
    pub derivation: String,
    /// `max |f(p) − λp|` over sampled coordinates.
    #[serde(serialize_with = "serialize_rational")]
    pub linear_residual_sup: Rational,
    /// `|f(p) − λp| ≤ ε̂·(1 + |p|·2^{−N})` at every sampled coordinate.
    pub linear_bound_holds: bool,
    pub stability: StabilityReport,
}

impl Recovery {
    pub fn pass(&self) -> bool {
        self.stability.pass && self.linear_bound_holds
    }
}

/// Runs the stabilizer on `f` and certifies the result on a seeded probe box.
///
/// `pass` is `residual_sup ≤ ε̂` and `defect(a_N) ≤ ε̂_matched / 2^N`. The first
/// check uses the defect seen inside the box only, so a function whose defect
/// grows outside the box (like `x²`) fails it. The second compares `a_N` on
/// the sampled pairs with `f` on the pairs it actually evaluates, where
/// `defect(a_N)(x, y) = defect(f)(2^N x, 2^N y) / 2^N` holds exactly.
pub fn approx_derivation_recover(
    f: &BlackBoxFunc,
    n: usize,
    depth: u32,
    samples: usize,
    seed: u64,
    range_bound: &Rational,
) -> Result<Recovery> {
    let probes = ProbeSet::random(samples, seed, range_bound)?;
    recover_on(f, n, depth, &probes, seed, range_bound)
}

/// [`approx_derivation_recover`] on an explicit probe set.
pub fn recover_on(
    f: &BlackBoxFunc,
    n: usize,
    depth: u32,
    probes: &ProbeSet,
    seed: u64,
    range_bound: &Rational,
) -> Result<Recovery> {
    let a_n = hyers_stabilize(f, depth)?;
    let epsilon_hat = defect_on(f, probes.pairs())?;
    let epsilon_hat_matched = epsilon_hat
        .clone()
        .max(defect_on(f, &probes.matched_pairs(depth))?);

    let mut residual_sup = Rational::zero();
    for p in probes.points() {
        residual_sup = residual_sup.max((f.eval(p)? - a_n.eval(p)?).abs());
    }
    let cauchy_defect_of_a_n = defect_on(&a_n, probes.pairs())?;
    let contraction = &epsilon_hat_matched / pow2(depth);
    let pass = residual_sup <= epsilon_hat && cauchy_defect_of_a_n <= contraction;

    let lambda = a_n.eval(&Rational::one())?;
    let mut linear_residual_sup = Rational::zero();
    let mut linear_bound_holds = true;
    for p in probes.points() {
        let r = (f.eval(p)? - &lambda * p).abs();
        let bound = &epsilon_hat + p.abs() * &contraction;
        linear_bound_holds &= r <= bound;
        linear_residual_sup = linear_residual_sup.max(r);
    }

    Ok(Recovery {
        n,
        lambda,
        derivation: "0".to_string(),
        linear_residual_sup,
        linear_bound_holds,
        stability: StabilityReport {
            epsilon_hat,
            epsilon_hat_matched,
            depth,
            residual_sup,
            cauchy_defect_of_a_n,
            samples: probes.pairs().len(),
            seed,
            range_bound: range_bound.clone(),
            pass,
        },
    })
}
