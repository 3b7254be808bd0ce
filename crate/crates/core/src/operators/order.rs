use serde::Serialize;

use super::{apply_deltas, OperatorFunc};
use crate::error::{Error, Result};
use crate::exactfield::{int, Poly, RatFunc};
use crate::sampling::{self, DEFAULT_ALPHA_DEGREE};

pub const DEFAULT_TRIALS: usize = 16;

/// A certificate that `δ_{α_1}∘⋯∘δ_{α_m} f(x) = value ≠ 0`.
///
/// An empty `alphas` list certifies `f(x) ≠ 0` directly; it is used for the
/// `f(1) = 0` requirement with `x = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub alphas: Vec<RatFunc>,
    pub x: RatFunc,
    pub value: RatFunc,
}

impl Witness {
    /// Re-evaluates the chain on `f` and checks it reproduces the nonzero value.
    pub fn recheck(&self, f: &OperatorFunc) -> bool {
        !self.value.is_zero() && apply_deltas(&self.alphas, f).apply(&self.x) == self.value
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderVerdict {
    pub is_order_n: bool,
    pub n: usize,
    pub witness: Option<Witness>,
    pub trials_run: usize,
    pub seed: u64,
}

/// Finds `x` with `g(x) ≠ 0` for a nonzero operator `g`.
///
/// `g(t^j) = λ·t^j + Σ_{k≤j} c_k·j!/(j−k)!·t^{j−k}`, so the values on
/// `1, t, …, t^m` determine `λ, c_1, …, c_m` triangularly and cannot all vanish.
fn nonvanishing_point(g: &OperatorFunc) -> (RatFunc, RatFunc) {
    for j in 0..=g.order_bound() {
        let x = RatFunc::from_poly(Poly::monomial(int(1), j));
        let value = g.apply(&x);
        if !value.is_zero() {
            return (x, value);
        }
    }
    unreachable!("a nonzero operator vanishes on 1, t, …, t^m")
}

/// Checks whether `f` is a derivation of order `n`: `f(1) = 0` and every
/// `(n+1)`-fold `δ`-chain on `f` is the zero operator.
///
/// The chain condition is tested on `trials` seeded tuples of nonconstant
/// `α`s. A nonzero chain is a sound certificate of failure and is returned as
/// a [`Witness`]. For `f` of top order `m ≤ n` every chain vanishes
/// structurally (see [`super::delta`]), so positive answers on that class do
/// not depend on the sampling.
pub fn is_order_n_derivation(
    f: &OperatorFunc,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<OrderVerdict> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "trials must be at least 1".to_string(),
        ));
    }
    let at_one = f.apply(&RatFunc::one());
    if !at_one.is_zero() {
        return Ok(OrderVerdict {
            is_order_n: false,
            n,
            witness: Some(Witness {
                alphas: Vec::new(),
                x: RatFunc::one(),
                value: at_one,
            }),
            trials_run: 0,
            seed,
        });
    }

    let mut rng = sampling::rng(seed);
    for trial in 1..=trials {
        let alphas: Vec<RatFunc> = (0..=n)
            .map(|_| sampling::random_nonconstant(&mut rng, DEFAULT_ALPHA_DEGREE))
            .collect();
        let g = apply_deltas(&alphas, f);
        if !g.is_zero() {
            let (x, value) = nonvanishing_point(&g);
            return Ok(OrderVerdict {
                is_order_n: false,
                n,
                witness: Some(Witness { alphas, x, value }),
                trials_run: trial,
                seed,
            });
        }
    }
    Ok(OrderVerdict {
        is_order_n: true,
        n,
        witness: None,
        trials_run: trials,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_first_order() {
        let v = is_order_n_derivation(&OperatorFunc::d_power(1), 1, DEFAULT_TRIALS, 0).unwrap();
        assert!(v.is_order_n);
        assert!(v.witness.is_none());
        assert_eq!(v.trials_run, DEFAULT_TRIALS);
    }

    #[test]
    fn second_power_is_not_first_order() {
        let f = OperatorFunc::d_power(2);
        let v = is_order_n_derivation(&f, 1, DEFAULT_TRIALS, 0).unwrap();
        assert!(!v.is_order_n);
        let w = v.witness.unwrap();
        assert_eq!(w.alphas.len(), 2);
        assert!(w.recheck(&f));
        assert_eq!(v.trials_run, 1);
    }

    #[test]
    fn identity_fails_at_one() {
        for n in 0..4 {
            let v = is_order_n_derivation(&OperatorFunc::identity(), n, 4, 9).unwrap();
            assert!(!v.is_order_n);
            let w = v.witness.unwrap();
            assert!(w.alphas.is_empty());
            assert_eq!(w.value, RatFunc::one());
        }
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(is_order_n_derivation(&OperatorFunc::d_power(1), 1, 0, 0).is_err());
    }

    #[test]
    fn witness_point_search() {
        // t·D: vanishes on 1, not on t
        let g = OperatorFunc::term(1, RatFunc::t());
        let (x, v) = nonvanishing_point(&g);
        assert_eq!(x, RatFunc::t());
        assert_eq!(v, RatFunc::t());
    }
}
