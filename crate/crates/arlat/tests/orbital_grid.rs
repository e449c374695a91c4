use arlat::geom::{compare_orbital, orbital_presets, RadialBump};

#[test]
fn closed_reductions_match_brute_force() {
    let f = RadialBump::of_radius(4.0).unwrap();
    for (name, g) in orbital_presets() {
        let t = std::time::Instant::now();
        let cmp = compare_orbital(&name, &g, &f, 1e-6).unwrap();
        println!(
            "{name}: closed {:.10} brute {:.10} rel {:.2e} C {:.4} cosh²-weight {:?} ({:.1?})",
            cmp.closed.value,
            cmp.brute.value,
            cmp.relative_error,
            cmp.closed.measured_constant.unwrap(),
            cmp.closed.cosh_squared_weight_value,
            t.elapsed()
        );
        assert!(cmp.closed.value > 0.0, "{name}");
        assert!(cmp.relative_error < 1e-3, "{name}");
    }
}
