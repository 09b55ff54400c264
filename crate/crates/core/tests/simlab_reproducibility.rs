use selinfer::simlab::{
    run_datasplit_suite, run_directional_suite, run_liu_example, run_toy_suite, run_winner_experiment, DatasplitParams,
    DirectionalParams, ExperimentConfig, LiuParams, SuiteReport, ToyParams, WinnerParams,
};

fn all_suites_csv(seed: u64) -> Vec<String> {
    let reps = 3000;
    let csv = |r: &dyn SuiteReport| r.table().to_csv_string();
    let toy = ToyParams {
        grid_n: 40,
        ..ToyParams::default()
    };
    vec![
        csv(&run_winner_experiment(
            &ExperimentConfig::new(seed, reps, 0.05).unwrap(),
            &WinnerParams::default(),
        )
        .unwrap()),
        csv(&run_liu_example(&ExperimentConfig::new(seed, reps, 0.1).unwrap(), &LiuParams::default()).unwrap()),
        csv(&run_toy_suite(&ExperimentConfig::new(seed, reps, 0.3).unwrap(), &toy).unwrap()),
        csv(&run_datasplit_suite(
            &ExperimentConfig::new(seed, reps, 0.05).unwrap(),
            &DatasplitParams::default(),
        )
        .unwrap()),
        csv(&run_directional_suite(
            &ExperimentConfig::new(seed, reps, 0.05).unwrap(),
            &DirectionalParams::default(),
        )
        .unwrap()),
    ]
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn suites_are_byte_identical_across_thread_counts() {
    let one = in_pool(1, || all_suites_csv(77));
    let many = in_pool(5, || all_suites_csv(77));
    assert_eq!(one, many);
}

#[test]
fn different_seeds_give_different_estimates() {
    let a = all_suites_csv(1);
    let b = all_suites_csv(2);
    // the suites are random apart from headers
    assert_ne!(a[0], b[0]);
    assert_ne!(a[1], b[1]);
}

#[test]
fn replicate_count_above_one_chunk_is_reproducible() {
    let cfg = ExperimentConfig::new(5, 10_000, 0.05).unwrap();
    let a = run_directional_suite(&cfg, &DirectionalParams::default()).unwrap();
    let b = in_pool(3, || {
        run_directional_suite(&cfg, &DirectionalParams::default()).unwrap()
    });
    assert_eq!(a, b);
    assert!(a.rows.iter().all(|r| r.fwer.replicates == 10_000));
}
