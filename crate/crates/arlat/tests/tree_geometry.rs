use arlat::btree::{check_preset_geometry, TorusType};

#[test]
fn fixed_sets_match_closed_forms_radius_eight() {
    for q in [2u64, 3, 5] {
        let mut cases = vec![
            (TorusType::Unramified, 0),
            (TorusType::Unramified, 2),
            (TorusType::Unramified, 4),
        ];
        cases.extend([(TorusType::Split, 2), (TorusType::Split, 4)]);
        if q != 2 {
            cases.push((TorusType::Split, 0));
            cases.extend([
                (TorusType::TamelyRamified, 0),
                (TorusType::TamelyRamified, 1),
                (TorusType::TamelyRamified, 3),
            ]);
        }
        for (t, v) in cases {
            let c = check_preset_geometry(t, q, v, 8).unwrap();
            assert!(c.ok(), "{c:?}");
        }
    }
}
