//! Randomized identities for Weyl dimensions.

use frobsplit_core::repdims::{box_partitions, dominant_in_c, weyl_dim, Partition};
use num_bigint::BigInt;
use proptest::prelude::*;

fn partition(n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..6, n).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

proptest! {
    #[test]
    fn determinant_twist_keeps_dimension((n, parts) in (1usize..=5).prop_flat_map(|n| (Just(n), partition(n))), c in 0u64..4) {
        let lambda = Partition::new(parts.clone(), n).unwrap();
        let shifted = Partition::new(parts.iter().map(|x| x + c).collect(), n).unwrap();
        prop_assert_eq!(weyl_dim(&lambda, n), weyl_dim(&shifted, n));
    }

    #[test]
    fn dual_weight_has_the_same_dimension((n, parts) in (1usize..=5).prop_flat_map(|n| (Just(n), partition(n)))) {
        let top = parts[0];
        let dual: Vec<u64> = parts.iter().rev().map(|x| top - x).collect();
        let a = weyl_dim(&Partition::new(parts, n).unwrap(), n);
        let b = weyl_dim(&Partition::new(dual, n).unwrap(), n);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn box_weights_lie_in_the_alcove_above_r_plus_m(r in 1usize..=4, m in 0u64..=4, extra in 1u64..20) {
        let p = r as u64 + m + extra;
        for mu in box_partitions(r, m) {
            prop_assert!(dominant_in_c(&mu, p, r));
            prop_assert!(weyl_dim(&mu, r) > BigInt::from(0));
        }
    }
}

#[test]
fn symmetric_powers_have_binomial_dimension() {
    // W((m, 0^{n−1})) = Sym^m, of dimension C(n+m−1, m)
    for n in 1..=5usize {
        for m in 0..=6u64 {
            let mut c = BigInt::from(1);
            for i in 0..m {
                c = c * BigInt::from(n as u64 + i) / BigInt::from(i + 1);
            }
            assert_eq!(weyl_dim(&Partition::new(vec![m], n).unwrap(), n), c, "n={n} m={m}");
        }
    }
}
