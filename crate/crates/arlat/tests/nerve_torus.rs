use arlat::nerve::{run, MetricSampleSpace};

#[test]
fn flat_torus_nerve() {
    for seed in [7u64, 8] {
        let t = std::time::Instant::now();
        let space = MetricSampleSpace::preset("torus2", 10_000, seed).unwrap();
        let (rep, nerve) = run(&space, seed, 2).unwrap();
        let (again, nerve2) = run(&space, seed, 2).unwrap();
        println!(
            "seed {seed}: centers {} packing {} maximal {} coverage {} f {:?} chi {} connected {} max_degree {} bound {} hist {:?} ({:.1?})",
            rep.centers, rep.packing_exact, rep.packing_maximal, rep.cover.coverage, rep.f_vector, rep.euler_characteristic,
            rep.connected, rep.degree.max_degree, rep.degree.theoretical_bound, rep.degree_histogram, t.elapsed()
        );
        assert_eq!(nerve, nerve2);
        assert_eq!(
            serde_json::to_string(&rep).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
        assert!(rep.packing_exact && rep.packing_maximal && rep.connected && rep.downward_closed);
        assert_eq!(rep.cover.coverage, 1.0);
        assert!(rep.degree.holds);
    }
}
