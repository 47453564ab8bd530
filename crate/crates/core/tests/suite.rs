use nilcat::cache::RepStore;
use nilcat::suite::{criteria, run_suite, SuiteConfig};

#[test]
fn criteria_are_numbered_and_ids_unique() {
    let all = criteria();
    assert_eq!(all.iter().map(|c| c.number).collect::<Vec<_>>(), (1..=13).collect::<Vec<_>>());
    let mut ids: Vec<&str> = all.iter().map(|c| c.id).chain(all.iter().flat_map(|c| c.subchecks.iter().copied())).collect();
    let total = ids.len();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), total);
}

#[test]
fn selection_by_number_id_and_check() {
    let store = RepStore::in_memory();
    let run = |only: &[&str]| {
        let cfg = SuiteConfig { only: only.iter().map(|s| s.to_string()).collect(), ..SuiteConfig::default() };
        run_suite(&store, &cfg, false)
    };
    let by_number = run(&["7"]);
    assert_eq!(by_number.len(), 1);
    assert_eq!(by_number[0].checks.len(), 2);
    let by_check = run(&["binomial-identity", "dimension"]);
    assert_eq!(by_check.iter().map(|r| r.number).collect::<Vec<_>>(), vec![1, 7]);
    assert!(by_check.iter().all(|r| r.checks.len() == 1 && r.passed));
}

#[test]
fn every_check_examines_something() {
    let store = RepStore::in_memory();
    let cfg = SuiteConfig { only: vec!["algebra".into(), "truncated-dimension".into(), "schur".into()], ..SuiteConfig::default() };
    for r in run_suite(&store, &cfg, false) {
        for c in &r.checks {
            if let Some(k) = c.detail.get("checked") {
                assert!(k.as_u64().unwrap() > 0, "{} examined nothing", c.id);
            }
        }
    }
}

#[test]
fn parallel_run_matches_serial_run() {
    let cfg = SuiteConfig { only: vec!["pdg".into(), "cellular".into(), "frobenius".into()], ..SuiteConfig::default() };
    let serial = run_suite(&RepStore::in_memory(), &cfg, false);
    let parallel = run_suite(&RepStore::in_memory(), &SuiteConfig { jobs: 3, ..cfg }, false);
    assert_eq!(serde_json::to_string(&serial).unwrap(), serde_json::to_string(&parallel).unwrap());
}

#[test]
fn small_grid_runs() {
    let cfg = SuiteConfig { max_n: 1, max_l: 2, primes: vec![2], only: vec!["1".into(), "2".into()], ..SuiteConfig::default() };
    let results = run_suite(&RepStore::in_memory(), &cfg, true);
    assert!(results.iter().all(|r| r.passed && r.elapsed_ms.is_some()));
}
