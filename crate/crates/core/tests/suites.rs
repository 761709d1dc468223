use hilbert_geom::experiments::{run_suite, SUITES};

#[test]
fn every_suite_passes_at_reduced_size() {
    for suite in SUITES {
        for seed in [1, 2, 3] {
            let r = run_suite(suite, seed, Some(40)).unwrap();
            let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).collect();
            assert!(r.passed, "{suite} seed {seed}: {failed:?}");
        }
    }
}

#[test]
fn rerunning_a_seed_reproduces_the_report() {
    for suite in ["gamma", "classify2d", "conjugation"] {
        let a = run_suite(suite, 11, Some(25)).unwrap().to_json();
        let b = run_suite(suite, 11, Some(25)).unwrap().to_json();
        assert_eq!(a, b, "{suite}");
    }
}

#[test]
fn reports_carry_truncated_metrics() {
    let r = run_suite("known-values", 0, None).unwrap();
    assert_eq!(r.criteria, vec![2]);
    assert_eq!(r.metrics["square"].to_string(), "2.19722457733");
    for c in &r.checks {
        let digits: String =
            format!("{:e}", c.value).split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect();
        assert!(digits.len() <= 12, "{}", c.value);
    }
}
