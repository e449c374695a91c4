use arlat::btree::{act, ball, distance, neighbors, GL2Rational, TreeVertex};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = GL2Rational> {
    prop::array::uniform4(-30i64..30)
        .prop_filter("invertible", |m| m[0] * m[3] - m[1] * m[2] != 0)
        .prop_map(|m| GL2Rational::from_i64(m[0], m[1], m[2], m[3]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_an_isometry(g in matrix(), p in prop::sample::select(vec![2u64, 3, 5]), i in 0usize..40, j in 0usize..40) {
        let verts: Vec<TreeVertex> = ball(p, 3).into_iter().map(|(x, _)| x).collect();
        let (x, y) = (&verts[i % verts.len()], &verts[j % verts.len()]);
        prop_assert_eq!(distance(&act(&g, x, p), &act(&g, y, p), p), distance(x, y, p));
    }

    #[test]
    fn action_preserves_adjacency(g in matrix(), p in prop::sample::select(vec![2u64, 3, 7])) {
        let x = TreeVertex::from_int(2, 1, p);
        let gx = act(&g, &x, p);
        let mut images: Vec<TreeVertex> = neighbors(&x, p).iter().map(|y| act(&g, y, p)).collect();
        let mut expected = neighbors(&gx, p);
        images.sort();
        expected.sort();
        prop_assert_eq!(images, expected);
    }

    #[test]
    fn homotheties_act_trivially(s in 1i64..50, g in matrix()) {
        let sg = GL2Rational::from_i64(s, 0, 0, s).unwrap().mul(&g);
        for (x, _) in ball(3, 2) {
            prop_assert_eq!(act(&sg, &x, 3), act(&g, &x, 3));
        }
    }
}
