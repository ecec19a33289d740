//! Randomized identities for polynomial arithmetic and the split criterion.

use frobsplit_core::gfpoly::{parse_poly, ExpCap, Monomial, Order, Poly, PrimeField};
use frobsplit_core::splitcheck::{divisor_propagation_check, split_coefficient, SplitCandidate};
use proptest::prelude::*;

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

/// Up to `max_terms` terms in `n` variables with exponents at most `max_exp`.
fn poly(p: u64, n: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), 0..p), 0..=max_terms)
        .prop_map(move |terms| Poly::from_terms(field(p), n, terms).unwrap())
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![5u64, 7, 11])
}

fn all_monomials(cap: &[u32]) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for &c in cap {
        out = out.into_iter().flat_map(|m: Vec<u32>| (0..=c).map(move |e| [m.clone(), vec![e]].concat())).collect();
    }
    out.into_iter().map(Monomial::new).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncation_is_sound(
        (_p, n, f) in (prime(), 1usize..=3).prop_flat_map(|(p, n)| (Just(p), Just(n), poly(p, n, 3, 4))),
        e in 0u64..8,
        cap_seed in prop::collection::vec(0u32..12, 3),
    ) {
        let cap: Vec<u32> = cap_seed[..n].to_vec();
        let full = f.pow(e);
        let cut = f.pow_truncated(e, &ExpCap::new(cap.clone())).unwrap();
        for m in all_monomials(&cap) {
            prop_assert_eq!(full.coeff(&m).unwrap(), cut.coeff(&m).unwrap());
        }
        prop_assert_eq!(cut, full.truncate(&ExpCap::new(cap)));
    }

    #[test]
    fn frobenius_multiplies_exponents(
        (p, f) in prime().prop_flat_map(|p| (Just(p), poly(p, 2, 3, 4))),
    ) {
        let expected = Poly::from_terms(
            field(p),
            2,
            f.terms().map(|(m, c)| (m.exps().iter().map(|&x| x * p as u32).collect(), c)),
        )
        .unwrap();
        prop_assert_eq!(f.pow(p), expected);
    }

    #[test]
    fn ring_axioms(
        (a, b, c) in prime().prop_flat_map(|p| (poly(p, 3, 2, 4), poly(p, 3, 2, 4), poly(p, 3, 2, 4))),
    ) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn vanishing_order_is_additive(
        (f, g) in prime().prop_flat_map(|p| (poly(p, 3, 3, 4), poly(p, 3, 3, 4))),
        coords in prop::sample::subsequence(vec![0usize, 1, 2], 1..=3),
    ) {
        let (of, og) = (f.vanishing_order(&coords), g.vanishing_order(&coords));
        let ofg = (&f * &g).vanishing_order(&coords);
        match (of, og) {
            (Order::Finite(a), Order::Finite(b)) => prop_assert_eq!(ofg, Order::Finite(a + b)),
            _ => prop_assert_eq!(ofg, Order::Infinite),
        }
    }

    #[test]
    fn text_round_trips((p, f) in prime().prop_flat_map(|p| (Just(p), poly(p, 3, 4, 6)))) {
        let back = parse_poly(field(p), 3, &f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn split_coefficient_ignores_scaling(
        (_p, f) in prime().prop_flat_map(|p| (Just(p), poly(p, 2, 2, 5))),
        lambda in 1u64..5,
    ) {
        let scaled = f.scale(lambda);
        prop_assert_eq!(
            split_coefficient(&SplitCandidate::new(scaled)),
            split_coefficient(&SplitCandidate::new(f)),
        );
    }

    #[test]
    fn split_coefficient_is_multiplicative_on_blocks(
        (p, f, g) in prime().prop_flat_map(|p| (Just(p), poly(p, 1, 3, 4), poly(p, 2, 2, 4))),
    ) {
        let sigma = &f.embed(3, &[0]).unwrap() * &g.embed(3, &[1, 2]).unwrap();
        let whole = split_coefficient(&SplitCandidate::new(sigma));
        let parts = field(p).mul(
            split_coefficient(&SplitCandidate::new(f)),
            split_coefficient(&SplitCandidate::new(g)),
        );
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn divisor_propagation_always_holds(
        (n, f) in (1usize..=4).prop_flat_map(|n| (Just(n), prime().prop_flat_map(move |p| poly(p, n, 2, 5)))),
        pick in prop::collection::vec(any::<bool>(), 4),
    ) {
        let divisors: Vec<usize> = (0..n).filter(|&j| pick[j]).collect();
        prop_assert!(divisor_propagation_check(&f, &divisors));
    }

    #[test]
    fn low_degree_never_splits(
        (n, f) in (2usize..=3).prop_flat_map(|n| (Just(n), prime().prop_flat_map(move |p| poly(p, n, 1, 4)))),
    ) {
        // each term has degree < n once one exponent is forced to zero
        let low = f.restrict_zero(&[0]).embed(n, &(1..n).collect::<Vec<_>>()).unwrap();
        prop_assume!(low.total_degree().is_some_and(|d| d < n as u64));
        prop_assert_eq!(split_coefficient(&SplitCandidate::new(low)), 0);
    }
}
