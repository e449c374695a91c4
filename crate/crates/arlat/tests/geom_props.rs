use arlat::geom::*;
use num_complex::Complex;
use proptest::prelude::*;

fn real_elem() -> impl Strategy<Value = MobiusElement<f64>> {
    prop::array::uniform4(-2.0f64..2.0)
        .prop_filter("well conditioned", |v| {
            (v[0] * v[3] - v[1] * v[2]).abs() > 0.2
        })
        .prop_map(|v| MobiusElement::real(v[0], v[1], v[2], v[3]).unwrap())
}

fn complex_elem() -> impl Strategy<Value = MobiusElement<f64>> {
    prop::array::uniform8(-2.0f64..2.0)
        .prop_map(|v| {
            let z = |i: usize| Complex::new(v[2 * i], v[2 * i + 1]);
            MobiusElement::complex(z(0), z(1), z(2), z(3))
        })
        .prop_filter_map("well conditioned", |g| {
            g.ok()
                .filter(|g| g.det().norm() > 0.0 && g.m.iter().flatten().all(|z| z.norm() < 10.0))
        })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn lambda(g: &MobiusElement<f64>) -> (ClassType, Complex<f64>, Complex<f64>) {
    let inv = class_invariants(g, None).unwrap();
    (
        inv.class_type,
        Complex::new(inv.lambda[0], inv.lambda[1]),
        Complex::new(inv.weyl_disc[0], inv.weyl_disc[1]),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_left_invariant(x in real_elem(), y in real_elem(), h in real_elem()) {
        let d = frobenius_distance(&x, &y);
        prop_assert!(close(frobenius_distance(&h.mul(&x), &h.mul(&y)), d, 1e-9));
    }

    #[test]
    fn distance_is_symmetric_and_zero_on_diagonal(x in complex_elem(), y in complex_elem()) {
        prop_assert!(frobenius_distance(&x, &x) < 1e-12);
        prop_assert!(close(frobenius_distance(&x, &y), frobenius_distance(&y, &x), 1e-9));
    }

    #[test]
    fn distance_is_k_conjugation_invariant(g in real_elem(), t in 0.0f64..6.3) {
        let k = MobiusElement::rotation(t);
        let one = MobiusElement::identity(FieldKind::Real);
        prop_assert!(close(frobenius_distance(&one, &g.conjugate_by(&k)), frobenius_distance(&one, &g), 1e-10));
    }

    #[test]
    fn invariants_are_conjugation_invariant(g in real_elem(), h in real_elem()) {
        let (t1, l1, d1) = lambda(&g);
        let (t2, l2, d2) = lambda(&g.conjugate_by(&h));
        prop_assume!(t1 != ClassType::Parabolic && (l1.norm() - 1.0).abs() > 1e-6 || t1 == ClassType::Elliptic);
        prop_assert_eq!(t1, t2);
        prop_assert!((l1 - l2).norm() <= 1e-9 * (1.0 + l1.norm()));
        prop_assert!((d1 - d2).norm() <= 1e-9 * (1.0 + d1.norm()));
    }

    #[test]
    fn inverse_has_the_same_invariants(g in complex_elem()) {
        let (t1, l1, d1) = lambda(&g);
        let (t2, l2, d2) = lambda(&g.inverse());
        prop_assume!(t1 != ClassType::Parabolic && (l1.norm() - 1.0).abs() > 1e-6);
        prop_assert_eq!(t1, t2);
        prop_assert!((l1 - l2).norm() <= 1e-9 * (1.0 + l1.norm()));
        prop_assert!((d1 - d2).norm() <= 1e-9 * (1.0 + d1.norm()));
    }

    #[test]
    fn weyl_discriminant_matches_eigenvalue_ratio(g in complex_elem()) {
        let (t, l, d) = lambda(&g);
        prop_assume!(t != ClassType::Parabolic && t != ClassType::Identity);
        let expect = Complex::new(2.0, 0.0) - l - l.inv();
        prop_assert!((d - expect).norm() <= 1e-9 * (1.0 + l.norm()));
    }

    #[test]
    fn normal_form_minimizes_over_the_class(g in complex_elem(), hs in prop::collection::vec(complex_elem(), 50)) {
        prop_assume!(class_invariants(&g, None).unwrap().class_type != ClassType::Parabolic);
        let m = class_min_distance(&g).unwrap();
        let one = MobiusElement::identity(g.field);
        for h in &hs {
            prop_assert!(frobenius_distance(&one, &g.conjugate_by(h)) >= m - 1e-6);
        }
    }
}

#[test]
fn elliptic_integral_grows_as_sin_theta_shrinks() {
    let f = RadialBump::of_radius(4.0).unwrap();
    let values: Vec<f64> = [1.5, 1.2, 0.9, 0.6, 0.4]
        .iter()
        .map(|&t| {
            orbital_elliptic(&MobiusElement::rotation(t), &f, 1e-9)
                .unwrap()
                .value
        })
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn bruteforce_at_identity_is_f_of_one() {
    let f = RadialBump::of_radius(2.0).unwrap();
    let one = MobiusElement::identity(FieldKind::Real);
    assert_eq!(orbital_bruteforce(&one, &f, 1e-6).unwrap().value, 1.0);
}

#[test]
fn small_rotation_matches_closed_form() {
    let f = RadialBump::of_radius(2.0).unwrap();
    let g = MobiusElement::rotation(1e-3);
    let brute = orbital_bruteforce(&g, &f, 1e-6).unwrap().value;
    let closed = orbital_elliptic(&g, &f, 1e-9).unwrap().value;
    assert!((brute - closed).abs() <= 1e-3 * closed);
}
