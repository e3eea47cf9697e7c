use strato_harness::validate::{beta_continuity, run_suite, Suite, ValidateOptions};

#[test]
fn suite_names_parse() {
    assert_eq!(Suite::parse("all").unwrap().len(), 6);
    assert_eq!(Suite::parse("euler").unwrap(), vec![Suite::Euler]);
    assert!(Suite::parse("bogus").is_none());
}

#[test]
fn identity_suite_passes() {
    let r = run_suite(Suite::Hyp, &ValidateOptions::default()).unwrap();
    assert!(r.pass, "{:#?}", r.checks);
}

#[test]
fn perturbed_prefactors_are_caught() {
    let opts = ValidateOptions { seed: 0, prefactor_perturbation: 1e-3 };
    let r = run_suite(Suite::Hyp, &opts).unwrap();
    assert!(!r.pass);
    let failed: Vec<_> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    assert!(failed.iter().all(|n| n.starts_with("wronskian")), "{failed:?}");
    assert_eq!(failed.len(), 4);
}

#[test]
fn other_seeds_pass_too() {
    for seed in [1, 2] {
        let opts = ValidateOptions { seed, prefactor_perturbation: 0.0 };
        for s in [Suite::Hyp, Suite::Boussinesq, Suite::Euler] {
            let r = run_suite(s, &opts).unwrap();
            assert!(r.pass, "seed {seed}: {:#?}", r.checks);
        }
    }
}

#[test]
fn beta_gap_shrinks_with_beta() {
    let (a, b) = (beta_continuity(1e-2), beta_continuity(1e-3));
    assert!(b < a / 5.0, "{a} {b}");
}
