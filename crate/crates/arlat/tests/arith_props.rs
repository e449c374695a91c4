use arlat::btree::{tree_weight_limit, tree_weight_partial_sum};
use arlat::mahler::mahler_measure;
use arlat::numfield::{is_prime, MaximalityOverride, NumberField};
use arlat::repzeta::{jz_level_multiset, sl2_group_order, sum_of_squares_check};
use arlat::IntPolynomial;
use proptest::prelude::*;

fn monic(max_deg: usize) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-4i64..=4, 1..=max_deg).prop_map(|mut c| {
        c.push(1);
        IntPolynomial::from_i64(&c)
    })
}

fn field() -> impl Strategy<Value = NumberField> {
    prop::sample::select(vec![0usize, 1, 2, 3, 4, 5]).prop_map(|i| match i {
        0 => NumberField::quadratic(-4).unwrap(),
        1 => NumberField::quadratic(5).unwrap(),
        2 => NumberField::pure(3, 2).unwrap(),
        3 => NumberField::cyclotomic(8).unwrap(),
        // Squarefree discriminants (−23, 2869 = 19·151), so Z[x]/(f) is maximal.
        4 => NumberField::new(
            "x^3-x-1",
            "x^3 - x - 1".parse().unwrap(),
            MaximalityOverride::Maximal,
        )
        .unwrap(),
        _ => NumberField::new(
            "x^5-x-1",
            "x^5 - x - 1".parse().unwrap(),
            MaximalityOverride::Maximal,
        )
        .unwrap(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mahler_measure_is_multiplicative(f in monic(5), g in monic(5)) {
        let prod = &f * &g;
        let lhs = mahler_measure(&prod).unwrap();
        let rhs = mahler_measure(&f).unwrap() + mahler_measure(&g).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs), "{lhs} vs {rhs}");
    }

    #[test]
    fn dedekind_zeta_decreases_in_s(k in field(), s in 1.6f64..4.0, ds in 0.05f64..1.0) {
        let a = k.dedekind_zeta::<f64>(s, 3000.0).unwrap();
        let b = k.dedekind_zeta::<f64>(s + ds, 3000.0).unwrap();
        // Truncated values sit below the limits by at most their tail bounds.
        prop_assert!(b.value <= a.value + a.tail_bound);
        prop_assert!(b.value >= 1.0);
    }

    #[test]
    fn truncated_zeta_grows_with_cutoff(k in field(), s in 1.6f64..4.0) {
        let a = k.dedekind_zeta::<f64>(s, 500.0).unwrap();
        let b = k.dedekind_zeta::<f64>(s, 4000.0).unwrap();
        prop_assert!(b.value >= a.value - 1e-12);
        prop_assert!(b.value <= a.value + a.tail_bound + 1e-12);
    }

    #[test]
    fn splitting_degrees_add_up(k in field(), p in 2u64..400) {
        prop_assume!(is_prime(p) && k.splitting_allowed(p));
        let s = k.prime_splitting(p).unwrap();
        let total: usize = s.factors.iter().map(|&(f, e)| f * e as usize).sum();
        prop_assert_eq!(total, k.degree);
    }

    #[test]
    fn jz_sum_of_squares_is_exact(q in prop::sample::select(vec![3u64, 5, 7, 9, 11, 13, 25, 27]), n in 1u32..=3) {
        let r = sum_of_squares_check(q, n).unwrap();
        prop_assert!(r.ok, "{}", r.ledger());
        let level = jz_level_multiset(q, n).unwrap();
        prop_assert!(level.count() > num_bigint::BigInt::from(0));
        prop_assert!(sl2_group_order(q, n).unwrap() > num_bigint::BigInt::from(0));
    }

    #[test]
    fn tree_weight_sums_increase_to_the_limit(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), n in 1u32..30) {
        let a = tree_weight_partial_sum(p, n);
        let b = tree_weight_partial_sum(p, n + 1);
        prop_assert!(a < b);
        prop_assert!(b < tree_weight_limit(p));
    }
}
