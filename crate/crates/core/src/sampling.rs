//! Seeded generators for probe points.
//!
//! Every randomized check in the crate draws from a [`ChaCha8Rng`] seeded with
//! a caller-provided `u64`, so a report's seed is enough to replay it.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactfield::{int, Poly, RatFunc, Rational};

/// Default degree bound for sampled numerators and denominators.
pub const DEFAULT_ALPHA_DEGREE: usize = 3;

const COEFF_BOUND: i64 = 9;
const DENOMINATOR_BOUND: i64 = 1000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_poly<R: Rng>(rng: &mut R, min_degree: usize, max_degree: usize) -> Poly {
    let degree = rng.gen_range(min_degree..=max_degree);
    let mut coeffs: Vec<Rational> = (0..=degree)
        .map(|_| int(rng.gen_range(-COEFF_BOUND..=COEFF_BOUND)))
        .collect();
    let mut lead = 0;
    while lead == 0 {
        lead = rng.gen_range(-COEFF_BOUND..=COEFF_BOUND);
    }
    coeffs[degree] = int(lead);
    Poly::new(coeffs)
}

/// A random element of `ℚ(t)` with numerator and denominator degrees at most
/// `max_degree`; it is never a constant.
pub fn random_nonconstant<R: Rng>(rng: &mut R, max_degree: usize) -> RatFunc {
    let max_degree = max_degree.max(1);
    loop {
        let num = random_poly(rng, 1, max_degree);
        let den = random_poly(rng, 0, max_degree);
        if let Ok(r) = RatFunc::new(num, den) {
            if r.as_constant().is_none() {
                return r;
            }
        }
    }
}

/// A random element of `ℚ(t)`, possibly constant or zero.
pub fn random_ratfunc<R: Rng>(rng: &mut R, max_degree: usize) -> RatFunc {
    let num = random_poly(rng, 0, max_degree);
    let num = if rng.gen_bool(0.1) { Poly::zero() } else { num };
    let den = random_poly(rng, 0, max_degree);
    RatFunc::new(num, den).expect("random denominators are nonzero")
}

/// A random rational in `[-bound, bound]` with denominator (before
/// reduction) at most 1000 times that of `bound`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: &Rational) -> Rational {
    let den = rng.gen_range(1..=DENOMINATOR_BOUND);
    let num = rng.gen_range(-den..=den);
    bound * Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn reproducible_and_bounded() {
        let bound = int(10);
        let a: Vec<_> = {
            let mut r = rng(7);
            (0..50).map(|_| random_rational(&mut r, &bound)).collect()
        };
        let b: Vec<_> = {
            let mut r = rng(7);
            (0..50).map(|_| random_rational(&mut r, &bound)).collect()
        };
        assert_eq!(a, b);
        assert!(a.iter().all(|q| q.abs() <= bound));
    }

    #[test]
    fn alphas_are_nonconstant() {
        let mut r = rng(1);
        for _ in 0..200 {
            let a = random_nonconstant(&mut r, DEFAULT_ALPHA_DEGREE);
            assert!(a.as_constant().is_none());
            assert!(a.num().degree().unwrap() <= 3 && a.den().degree().unwrap() <= 3);
        }
    }
}
