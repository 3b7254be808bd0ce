use nderiv::characterize::{extract_multiadditive, poly_decompose, BlackBoxFunc};
use nderiv::cli::{parse_operator, parse_ratfunc};
use nderiv::exactfield::{int, pow2, rat, Poly, RatFunc, Rational};
use nderiv::operators::{
    apply_deltas, delta, difference_chain, formal_derivative, is_order_n_derivation,
    nested_difference, OperatorFunc,
};
use nderiv::stability::{defect_on, hyers_stabilize, make_noisy, pair_defect, ProbeSet};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-6i64..=6, 0..=max_degree + 1).prop_map(|c| Poly::from_ints(&c))
}

fn nonzero_ratfunc() -> impl Strategy<Value = RatFunc> {
    ratfunc().prop_filter("nonzero", |r| !r.is_zero())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn ratfunc_of_degree(max_degree: usize) -> impl Strategy<Value = RatFunc> {
    (small_poly(max_degree), small_poly(max_degree))
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    ratfunc_of_degree(3)
}

fn operator() -> impl Strategy<Value = OperatorFunc> {
    prop::collection::vec((0usize..=3, ratfunc()), 0..=3).prop_map(OperatorFunc::from_terms)
}

// composites double the order, so keep the factors small
fn small_operator() -> impl Strategy<Value = OperatorFunc> {
    prop::collection::vec((0usize..=2, ratfunc_of_degree(2)), 0..=3)
        .prop_map(OperatorFunc::from_terms)
}

/// First two Taylor coefficients of `p(a + h)`, from the binomial expansion
/// of each monomial.
fn taylor_pair(p: &Poly, a: &Rational) -> (Rational, Rational) {
    let mut value = Rational::zero();
    let mut slope = Rational::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        value += c * num_traits::pow(a.clone(), k);
        if k >= 1 {
            slope += c * int(k as i64) * num_traits::pow(a.clone(), k - 1);
        }
    }
    (value, slope)
}

/// `u'(a)` from the `h`-linear term of `num(a + h) / den(a + h)`.
fn derivative_at(u: &RatFunc, a: &Rational) -> Rational {
    let (n0, n1) = taylor_pair(u.num(), a);
    let (d0, d1) = taylor_pair(u.den(), a);
    (n1 * &d0 - n0 * d1) / (&d0 * &d0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &RatFunc::zero(), a.clone());
        prop_assert_eq!(&a * &RatFunc::one(), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn normalization_is_idempotent(n in small_poly(4), d in small_poly(4)) {
        prop_assume!(!d.is_zero());
        let once = RatFunc::new(n, d).unwrap();
        let twice = RatFunc::new(once.num().clone(), once.den().clone()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.den().leading_coeff().unwrap().is_one());
        prop_assert!(Poly::gcd(once.num(), once.den()).unwrap().is_one() || once.is_zero());
    }

    #[test]
    fn division_undoes_multiplication(a in ratfunc(), b in nonzero_ratfunc()) {
        prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a);
    }

    #[test]
    fn poly_div_rem(a in small_poly(6), b in small_poly(3)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_both(a in small_poly(4), b in small_poly(4)) {
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let g = Poly::gcd(&a, &b).unwrap();
        prop_assert!(a.div_rem(&g).unwrap().1.is_zero());
        prop_assert!(b.div_rem(&g).unwrap().1.is_zero());
    }

    #[test]
    fn derivative_matches_taylor_oracle(u in ratfunc(), a in rational()) {
        prop_assume!(u.eval(&a).is_some());
        prop_assert_eq!(formal_derivative(&u).eval(&a), Some(derivative_at(&u, &a)));
    }

    #[test]
    fn leibniz_law(u in ratfunc(), v in ratfunc()) {
        let lhs = formal_derivative(&(&u * &v));
        let rhs = &(&u * &formal_derivative(&v)) + &(&v * &formal_derivative(&u));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_agrees_with_evaluation(alpha in ratfunc(), x in ratfunc(), f in operator()) {
        let lhs = delta(&alpha, &f).apply(&x);
        let rhs = &f.apply(&(&alpha * &x)) - &(&alpha * &f.apply(&x));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn deltas_commute(a in ratfunc(), b in ratfunc(), f in operator()) {
        prop_assert_eq!(delta(&a, &delta(&b, &f)), delta(&b, &delta(&a, &f)));
    }

    #[test]
    fn delta_kills_linear_maps(alpha in ratfunc(), lambda in ratfunc()) {
        prop_assert!(delta(&alpha, &OperatorFunc::scalar(lambda)).is_zero());
    }

    #[test]
    fn rational_homogeneity(f in operator(), x in ratfunc(), q in rational()) {
        let qx = x.scale(&q);
        prop_assert_eq!(f.apply(&qx), f.apply(&x).scale(&q));
    }

    #[test]
    fn additivity(f in operator(), x in ratfunc(), y in ratfunc()) {
        prop_assert_eq!(f.apply(&(&x + &y)), &f.apply(&x) + &f.apply(&y));
    }

    #[test]
    fn composition_agrees_with_evaluation(
        f in small_operator(),
        g in small_operator(),
        x in ratfunc_of_degree(2),
    ) {
        prop_assert_eq!(f.compose(&g).apply(&x), f.apply(&g.apply(&x)));
    }

    #[test]
    fn each_delta_lowers_the_top_order(alpha in ratfunc(), f in operator()) {
        let g = delta(&alpha, &f);
        prop_assume!(!f.is_zero() && f.order_bound() > 0);
        prop_assert!(g.is_zero() || g.order_bound() < f.order_bound());
    }

    #[test]
    fn operator_render_round_trip(f in operator()) {
        let text = f.to_string();
        prop_assert_eq!(parse_operator(&text).unwrap(), f);
    }

    #[test]
    fn ratfunc_render_round_trip(a in ratfunc()) {
        prop_assert_eq!(parse_ratfunc(&a.to_string()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multiadditive_is_independent_of_base_point(
        coeffs in prop::collection::vec(-5i64..=5, 4),
        ys in prop::collection::vec(rational(), 3),
        x0s in prop::collection::vec(rational(), 3),
    ) {
        let p = BlackBoxFunc::from_poly(Poly::from_ints(&coeffs));
        let values: Vec<_> = x0s.iter().map(|x0| extract_multiadditive(&p, 3, &ys, x0).unwrap()).collect();
        prop_assert_eq!(&values[0], &values[1]);
        prop_assert_eq!(&values[1], &values[2]);
    }

    #[test]
    fn multiadditive_is_symmetric(
        coeffs in prop::collection::vec(-5i64..=5, 4),
        ys in prop::collection::vec(rational(), 3),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let p = BlackBoxFunc::from_poly(Poly::from_ints(&coeffs));
        let permuted: Vec<_> = perm.iter().map(|&i| ys[i].clone()).collect();
        let x0 = Rational::zero();
        prop_assert_eq!(
            extract_multiadditive(&p, 3, &ys, &x0).unwrap(),
            extract_multiadditive(&p, 3, &permuted, &x0).unwrap()
        );
    }

    #[test]
    fn multiadditive_in_each_slot(
        coeffs in prop::collection::vec(-5i64..=5, 4),
        ys in prop::collection::vec(rational(), 3),
        extra in rational(),
        slot in 0usize..3,
    ) {
        let p = BlackBoxFunc::from_poly(Poly::from_ints(&coeffs));
        let x0 = Rational::zero();
        let f = |ys: &[Rational]| extract_multiadditive(&p, 3, ys, &x0).unwrap();
        let mut sum = ys.clone();
        sum[slot] = &ys[slot] + &extra;
        let mut other = ys.clone();
        other[slot] = extra.clone();
        prop_assert_eq!(f(&sum), f(&ys) + f(&other));
    }

    #[test]
    fn poly_decompose_round_trip_and_uniqueness(
        coeffs in prop::collection::vec(-9i64..=9, 0..=6),
        seed in any::<u64>(),
    ) {
        let poly = Poly::from_ints(&coeffs);
        let p = BlackBoxFunc::from_poly(poly.clone());
        let d = poly_decompose(&p, 5, 20, seed).unwrap();
        let recombined = d.recombine();
        let probes = ProbeSet::random(50, seed ^ 1, &int(100)).unwrap();
        for x in probes.points() {
            prop_assert_eq!(recombined.eval(x), poly.eval(x));
        }
        let again = poly_decompose(&BlackBoxFunc::from_poly(recombined), 5, 20, seed).unwrap();
        prop_assert_eq!(again.components, d.components);
    }

    #[test]
    fn stabilizer_fixes_additive_maps(lambda in rational(), depth in 1u32..=24, x in rational()) {
        let f = BlackBoxFunc::linear(lambda);
        let a = hyers_stabilize(&f, depth).unwrap();
        prop_assert_eq!(a.eval(&x).unwrap(), f.eval(&x).unwrap());
    }
}

#[test]
fn order_ladder() {
    for k in 1..=4 {
        let f = OperatorFunc::d_power(k);
        let pass = is_order_n_derivation(&f, k, 16, 11).unwrap();
        assert!(pass.is_order_n, "D^{k} at order {k}");
        let fail = is_order_n_derivation(&f, k - 1, 16, 11).unwrap();
        assert!(!fail.is_order_n, "D^{k} at order {}", k - 1);
        let w = fail.witness.unwrap();
        assert_eq!(w.alphas.len(), k);
        assert!(w.recheck(&f));
    }
}

#[test]
fn ladder_failure_value_is_a_product_of_derivatives() {
    // δ_{α_1}⋯δ_{α_k} D^k = k!·D(α_1)⋯D(α_k)·id
    let alphas = [
        parse_ratfunc("t^2 + 1").unwrap(),
        parse_ratfunc("1/t").unwrap(),
        parse_ratfunc("(t - 1)/(t + 3)").unwrap(),
    ];
    let chain = apply_deltas(&alphas, &OperatorFunc::d_power(3));
    let expected = alphas
        .iter()
        .fold(RatFunc::from_int(6), |acc, a| &acc * &formal_derivative(a));
    assert_eq!(chain, OperatorFunc::scalar(expected));
}

fn noisy_fixture() -> (BlackBoxFunc, ProbeSet) {
    let f = make_noisy(int(2), rat(1, 100), 42).unwrap().base;
    (f, ProbeSet::random(200, 5, &int(10)).unwrap())
}

#[test]
fn telescoping_bound_on_doubling_pairs() {
    let depth = 12;
    let (f, probes) = noisy_fixture();
    let eps_hat = defect_on(&f, &probes.doubling_pairs(depth)).unwrap();
    let truncations: Vec<_> = std::iter::once(f.clone())
        .chain((1..=depth).map(|n| hyers_stabilize(&f, n).unwrap()))
        .collect();
    for x in probes.points() {
        for n in 0..depth as usize {
            let step =
                (truncations[n + 1].eval(x).unwrap() - truncations[n].eval(x).unwrap()).abs();
            assert!(step <= &eps_hat / pow2(n as u32 + 1), "n = {n}, x = {x}");
        }
    }
}

#[test]
fn defect_contracts_exactly_on_matched_pairs() {
    let depth = 20;
    let (f, probes) = noisy_fixture();
    let a_n = hyers_stabilize(&f, depth).unwrap();
    for ((x, y), (sx, sy)) in probes.pairs().iter().zip(probes.matched_pairs(depth)) {
        let lhs = pair_defect(&a_n, x, y).unwrap();
        let rhs = pair_defect(&f, &sx, &sy).unwrap() / pow2(depth);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn deeper_truncations_stay_inside_the_shrinking_envelope() {
    // |a_N − a_{N+10}| ≤ defect·2^{−N}, defect ≤ 2ε = 1/50
    let (f, probes) = noisy_fixture();
    let eps = rat(1, 50);
    for depth in [4u32, 10, 20] {
        let reference = hyers_stabilize(&f, depth + 11).unwrap();
        let sup = |d: u32| {
            let a = hyers_stabilize(&f, d).unwrap();
            probes
                .points()
                .map(|x| (a.eval(x).unwrap() - reference.eval(x).unwrap()).abs())
                .max()
                .unwrap()
        };
        assert!(sup(depth) <= &eps / pow2(depth), "depth {depth}");
        assert!(
            sup(depth + 1) <= &eps / pow2(depth + 1),
            "depth {}",
            depth + 1
        );
    }
}

#[test]
fn nested_difference_matches_signed_subset_sum() {
    // Δ_{y_1}⋯Δ_{y_k} f(x) = Σ_{S ⊆ [k]} (−1)^{k−|S|} f(x + Σ_S y)
    let mut rng = nderiv::sampling::rng(3);
    let f = BlackBoxFunc::from_poly(Poly::from_ints(&[4, -1, 0, 2, 1]));
    for k in 1..=5usize {
        for _ in 0..20 {
            let ys: Vec<_> = (0..k)
                .map(|_| nderiv::sampling::random_rational(&mut rng, &int(5)))
                .collect();
            let x = nderiv::sampling::random_rational(&mut rng, &int(5));
            let mut oracle = Rational::zero();
            for mask in 0u32..(1 << k) {
                let shift: Rational = (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| ys[i].clone())
                    .sum();
                let term = f.eval(&(&x + shift)).unwrap();
                if (k as u32 - mask.count_ones()).is_multiple_of(2) {
                    oracle += term;
                } else {
                    oracle -= term;
                }
            }
            assert_eq!(nested_difference(&f, &ys, &x).unwrap(), oracle);
            assert_eq!(difference_chain(&ys, &f).eval(&x).unwrap(), oracle);
        }
    }
}
