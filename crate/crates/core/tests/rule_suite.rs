use std::collections::BTreeMap;

use zeta_core::theory::{rules, run_suite, Status};

#[test]
fn standard_pool_has_no_unsound_instances() {
    let verdicts = run_suite(1e-9);
    let mut sound: BTreeMap<&str, usize> = BTreeMap::new();
    let bad: Vec<String> = verdicts
        .iter()
        .filter(|v| !matches!(v.status, Status::Sound | Status::SideConditionUnmet))
        .map(|v| v.to_string())
        .collect();
    assert!(bad.is_empty(), "{} bad verdicts:\n{}", bad.len(), bad.join("\n"));
    for v in &verdicts {
        if v.status == Status::Sound {
            *sound.entry(rules().iter().find(|r| r.id == v.rule).unwrap().id).or_default() += 1;
        }
    }
    for r in rules() {
        assert!(sound.get(r.id).copied().unwrap_or(0) > 0, "no sound instance of {}", r.id);
    }
}

#[test]
fn basis_dual_instances_are_covered() {
    let verdicts = run_suite(1e-9);
    for id in ["copy", "pi-commute", "color-change"] {
        for basis in ["Z", "X"] {
            assert!(
                verdicts
                    .iter()
                    .any(|v| v.rule == id && v.status == Status::Sound && v.bindings["basis"] == basis),
                "{id} in basis {basis}"
            );
        }
    }
}
