use cokernel_core::experiments::{
    observed_total, run, run_cok_dist, run_moment, run_rank_dist, run_sandpile, run_sharpness, run_verify, AutOverride,
    ExperimentConfig, ExperimentKind, ModelKind, VerifyOptions,
};

fn config(kind: ExperimentKind, n: usize, trials: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind);
    cfg.n = vec![n];
    cfg.trials = trials;
    cfg.master_seed = 11;
    cfg.c = Some(1.5);
    cfg
}

#[test]
fn reports_do_not_depend_on_workers() {
    let mut cfg = config(ExperimentKind::CokDist, 60, 600);
    cfg.d = Some(2);
    let mut outputs = Vec::new();
    for workers in [1, 3, 8] {
        cfg.workers = workers;
        let out = run(&cfg).unwrap();
        outputs.push((out.to_json().unwrap(), out.to_csv().unwrap()));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn half_widths_shrink_like_root_trials() {
    let mut widths = Vec::new();
    for trials in [1000u64, 2000, 4000] {
        let mut cfg = config(ExperimentKind::RankDist, 80, trials);
        cfg.workers = 4;
        let report = run_rank_dist(&cfg).unwrap();
        widths.push(report.row(80, "P(corank=0)").unwrap().estimate.half_width());
    }
    for w in widths.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio / 2f64.sqrt() - 1.0).abs() < 0.2, "{ratio}");
    }
}

#[test]
fn classes_partition_the_sample() {
    let mut cfg = config(ExperimentKind::CokDist, 40, 500);
    cfg.model = ModelKind::Symmetric;
    cfg.workers = 2;
    let report = run_cok_dist(&cfg).unwrap();
    assert_eq!(observed_total(&report.sizes[0]), 500);
    let freq: f64 = report.sizes[0].classes.iter().map(|c| c.count as f64 / 500.0).sum();
    assert!((freq - 1.0).abs() < 1e-12);
}

#[test]
fn single_trial_smoke_run() {
    let report = run_cok_dist(&config(ExperimentKind::CokDist, 20, 1)).unwrap();
    let e = report.rows[0].estimate.estimate;
    assert!(e == 0.0 || e == 1.0);
    assert_eq!(report.rows[0].estimate.standard_error, 0.0);
}

#[test]
fn alternating_matrices_have_even_rank() {
    for n in [30, 31] {
        let mut cfg = config(ExperimentKind::RankDist, n, 300);
        cfg.model = ModelKind::Alternating;
        let report = run_rank_dist(&cfg).unwrap();
        assert_eq!(report.row(n, "P(rank odd)").unwrap().estimate.estimate, 0.0);
    }
}

#[test]
fn alternating_even_sizes_never_give_z3() {
    let mut cfg = config(ExperimentKind::CokDist, 30, 300);
    cfg.model = ModelKind::Alternating;
    cfg.p = 3;
    cfg.target = Some(vec![1]);
    let row = &run_cok_dist(&cfg).unwrap().rows[0];
    assert_eq!(row.estimate.estimate, 0.0);
    assert_eq!(row.limit, Some(0.0));
}

#[test]
fn triangle_sandpile_group() {
    for (p, expected) in [(2u64, "P(S_p=())"), (3, "P(S_p=(1))")] {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Sandpile);
        cfg.n = vec![3];
        cfg.p = p;
        cfg.beta = Some(1.0);
        cfg.trials = 20;
        if p == 3 {
            cfg.target = Some(vec![1]);
        }
        let report = run_sandpile(&cfg).unwrap();
        assert_eq!(report.row(3, expected).unwrap().estimate.estimate, 1.0);
        assert_eq!(report.row(3, "P(disconnected)").unwrap().estimate.estimate, 0.0);
    }
}

#[test]
fn moment_and_sharpness_rows() {
    let mut cfg = config(ExperimentKind::Moment, 60, 400);
    cfg.model = ModelKind::Graph;
    cfg.c = None;
    cfg.beta = Some(0.5);
    let report = run_moment(&cfg).unwrap();
    assert_eq!(report.rows.len(), 2);
    assert_eq!(report.rows[0].limit, Some(1.0));
    assert_eq!(report.rows[1].limit, Some(2.0));

    let mut cfg = config(ExperimentKind::Sharpness, 300, 200);
    cfg.c = None;
    cfg.k = Some(1);
    let report = run_sharpness(&cfg).unwrap();
    assert_eq!(report.rows[0].limit, Some(0.5));
    assert!(report.notes["universal_corank_tail"] > 0.7);
}

#[test]
fn verify_battery_and_negative_control() {
    let cfg = ExperimentConfig::new(ExperimentKind::Verify);
    let report = run_verify(&cfg).unwrap();
    let failures: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
    assert!(report.passed, "{failures:?}");
    for family in ["moment-cross-oracle", "hom-sur", "aut-order", "tensor-square", "isotropic-census", "trivial-census", "graph-coset", "sin-sum"] {
        assert!(report.family(family).count() > 0, "{family}");
    }
    let json = report.to_json().unwrap();
    assert!(json.contains("\"computed\"") && json.contains("\"expected\""));

    let mut cfg = ExperimentConfig::new(ExperimentKind::Verify);
    cfg.verify = Some(VerifyOptions {
        aut_max_order: 8,
        aut_overrides: vec![AutOverride { p: 2, parts: vec![1, 1], order: 5 }],
    });
    let report = run_verify(&cfg).unwrap();
    assert!(!report.passed);
    let bad: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].check, "aut-order");
    assert_eq!(bad[0].computed, "6");
}
