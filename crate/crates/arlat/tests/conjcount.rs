use arlat::conjcount::*;
use arlat::mahler::AlgebraicNumberFamily;
use arlat::numfield::{primes_up_to, NumberField};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn lehmer_power_gram_is_exact() {
    let k = NumberField::lehmer_trace_field();
    let v = lehmer_power_vectors(&k, &[1, 2, 3, 5, 7]).unwrap();
    let g = gram_diagnostics(&v, &k).unwrap();
    // Oracle: x_m x_n = x_{m+n} + x_{|m−n|}, and tr_K(x_j) is the j-th power
    // sum of Lehmer's degree-10 polynomial (each embedding of K sees λ^{±j}).
    let lehmer = arlat::numfield::lehmer_polynomial();
    let exps = [1usize, 2, 3, 5, 7];
    for (i, &m) in exps.iter().enumerate() {
        for (j, &n) in exps.iter().enumerate() {
            let t = lehmer.power_sum(m + n) + lehmer.power_sum(m.abs_diff(n));
            assert_eq!(
                g.exact_gram[i][j],
                BigRational::new(t, BigInt::from(5)).to_string()
            );
        }
    }
    let row0: Vec<&str> = g.exact_gram[0].iter().map(String::as_str).collect();
    assert_eq!(row0, ["11/5", "1/5", "2/5", "1", "1"]);
    assert!(g.exact_agreement < 1e-9);
    assert_eq!(g.rank, 5);
    // Distinct Salem powers are far from parallel.
    for i in 0..5 {
        for j in 0..5 {
            if i != j {
                let c = g.gram[i][j] / (g.gram[i][i] * g.gram[j][j]).sqrt();
                assert!(c.abs() < 1.0, "{i},{j}");
            }
        }
    }
}

#[test]
fn diagonal_is_two_plus_trace_of_square_power() {
    let k = NumberField::lehmer_trace_field();
    for n in [1usize, 2, 4, 6] {
        let v = lehmer_power_vectors(&k, &[n as u32]).unwrap();
        let g = gram_diagnostics(&v, &k).unwrap();
        let corr = field_trace(&k, &chebyshev_in_field(&k, 2 * n));
        let expect = 2.0 + corr.to_string().parse::<f64>().unwrap() / 5.0;
        assert!((g.gram[0][0] - expect).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn embedding_mismatch_is_rejected() {
    let k = NumberField::lehmer_trace_field();
    let mut v = lehmer_power_vectors(&k, &[2]).unwrap();
    v[0].lambda_poly = arlat::numfield::lehmer_polynomial();
    assert!(gram_diagnostics(&v, &k).is_err());
}

#[test]
fn cyclotomic_traces_decay_within_shape() {
    let primes: Vec<u64> = primes_up_to(101).into_iter().filter(|&p| p > 2).collect();
    let s = trace_decay_sweep(&AlgebraicNumberFamily::Cyclotomic { indices: primes }, 1.0).unwrap();
    assert!(!s.unbounded_mahler);
    for r in &s.rows {
        let p = r.index as f64;
        assert!((r.normalized_trace - 1.0 / (p - 1.0)).abs() < 1e-15);
        if r.index >= 5 {
            assert!(r.normalized_trace <= r.shape);
        }
    }
    let binom = trace_decay_sweep(
        &AlgebraicNumberFamily::Binomial {
            a: 2,
            indices: vec![2, 4, 8, 16],
        },
        1.0,
    )
    .unwrap();
    assert!(binom.rows.iter().all(|r| r.normalized_trace == 0.0));
    let wild = AlgebraicNumberFamily::Binomial {
        a: 100,
        indices: vec![2, 3],
    };
    assert!(trace_decay_sweep(&wild, 1.0).unwrap().unbounded_mahler);
}

#[test]
fn greedy_packing_count_is_pinned() {
    // Regression values for ChaCha8 seeds; the greedy count stays well
    // under the C = 1 bound of 50.
    let c = packing_check(50, 1.0, 1.0, 2000, 1).unwrap();
    assert_eq!(c.greedy_count, 16);
    assert!(c.within_bound);
    assert_eq!(c.calibrated_c, 1.0);
    assert_eq!(
        packing_check(50, 1.0, 1.0, 500, 3).unwrap().greedy_count,
        13
    );
}

proptest! {
    #[test]
    fn kl_bound_increases_with_dimension(n in 8usize..400, a in 0.51f64..1.4) {
        prop_assume!(a < (n as f64).sqrt() / 2.0);
        prop_assert!(kl_packing_bound(n + 1, a, 1.0).unwrap() > kl_packing_bound(n, a, 1.0).unwrap());
    }

    #[test]
    fn normalized_trace_matches_root_sum(c in prop::collection::vec(-6i64..6, 3..8)) {
        let mut coeffs = c.clone();
        coeffs.push(1);
        let f = arlat::IntPolynomial::from_i64(&coeffs);
        prop_assume!(!f.discriminant().is_zero());
        let t = normalized_trace(&f).unwrap();
        prop_assert!((t.value - t.root_sum).abs() < 1e-9);
    }
}
