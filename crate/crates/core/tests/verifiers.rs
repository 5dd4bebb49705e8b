use unimodal::analysis::{check_littlewood_bound, BoundForm, ExpSum, DEFAULT_REL_TOL};
use unimodal::machinery::{lcm_upto, totient_sweep, verify_small_run_bound};
use unimodal::suites::{corpus, suite_by_name, suite_names, Status, SuiteConfig};
use unimodal::{CoeffSet, IntPoly};

fn quick() -> SuiteConfig {
    SuiteConfig { seed: 7, instances: Some(12), totient_limit: 50_000, ..SuiteConfig::default() }
}

#[test]
fn suite_rows_do_not_depend_on_worker_count() {
    for name in ["littlewood-l1", "integer-solve", "level-crossings", "oracle"] {
        let suite = suite_by_name(name).unwrap();
        let runs: Vec<_> = [1, 3]
            .into_iter()
            .map(|t| {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
                pool.install(|| suite.run(&quick()).unwrap())
            })
            .collect();
        assert_eq!(runs[0], runs[1], "{name}");
    }
}

#[test]
fn every_suite_runs_cleanly_at_small_size() {
    for name in suite_names() {
        let out = suite_by_name(name).unwrap().run(&quick()).unwrap();
        let failed: Vec<_> = out.rows.iter().filter(|r| r.status == Status::Fail).collect();
        assert!(failed.is_empty(), "{name}: {failed:?}");
        assert!(out.passed() > 0, "{name} checked nothing");
    }
}

#[test]
fn seeds_change_instances() {
    let suite = suite_by_name("littlewood-l1").unwrap();
    let a = suite.run(&quick()).unwrap();
    let b = suite.run(&SuiteConfig { seed: 8, ..quick() }).unwrap();
    assert_ne!(a, b);
}

#[test]
fn tiny_budget_skips_instead_of_failing() {
    let cfg = SuiteConfig { degree_budget: 10, ..quick() };
    let out = suite_by_name("small-runs").unwrap().run(&cfg).unwrap();
    assert_eq!(out.failed(), 0);
    assert!(out.skipped() > 0);
    assert!(verify_small_run_bound(&IntPoly::from_i64s(&[1, 3, 1]), &CoeffSet::new([1, 3]).unwrap(), 10).is_ok());
}

#[test]
fn corpus_contains_every_small_littlewood_member() {
    let c = corpus(1);
    let lw = c.iter().filter(|(id, _, _)| id.starts_with("sr-littlewood")).count();
    // 2^{n/2 + 1} members for n = 2, 4, ..., 12.
    assert_eq!(lw, [2, 4, 6, 8, 10, 12].iter().map(|n| 1usize << (n / 2 + 1)).sum::<usize>());
}

#[test]
fn number_theory_sweeps() {
    let s = totient_sweep(100_000);
    assert!(s.failures.is_empty());
    assert_eq!(lcm_upto(10).to_string(), "2520");
}

#[test]
fn flat_sums_meet_the_l1_bound() {
    for m in [1usize, 2, 5, 17, 64] {
        let f = ExpSum::from_real((0..m as i64).map(|j| (3 * j, 1.0))).unwrap();
        for form in [BoundForm::Harmonic, BoundForm::Logarithmic] {
            assert!(check_littlewood_bound(&f, form, DEFAULT_REL_TOL).pass, "m = {m}");
        }
    }
}
