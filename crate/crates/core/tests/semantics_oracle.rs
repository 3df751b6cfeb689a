use std::collections::BTreeSet;

use argulab::semantics::{grounded_by_sweep, oracle_all_labellings, solve, solve_grounded, StepKind};
use argulab::{check_legality, defends, is_conflict_free, Argument, Framework, Label, Labelling, SemanticsKind};
use proptest::prelude::*;

fn framework_strategy(max_n: u32) -> impl Strategy<Value = Framework> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |attacks| Framework::new(0..n, attacks).unwrap())
    })
}

/// Every framework over arguments 0..n, one per subset of the n^2 possible attacks.
fn all_frameworks(n: u32) -> impl Iterator<Item = Framework> {
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let attacks = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p);
        Framework::new(0..n, attacks).unwrap()
    })
}

fn all_labellings(f: &Framework) -> Vec<Labelling> {
    let args = f.arguments().to_vec();
    let total = 3usize.pow(args.len() as u32);
    (0..total)
        .map(|mut code| {
            args.iter()
                .map(|&a| {
                    let l = Label::ALL[code % 3];
                    code /= 3;
                    (a, l)
                })
                .collect()
        })
        .collect()
}

fn assert_matches_oracle(f: &Framework) {
    let oracle = oracle_all_labellings(f).unwrap();
    let sol = solve(f);
    for kind in SemanticsKind::ALL {
        assert_eq!(sol.filter(kind), oracle[&kind], "{kind} on {f:?}");
    }
}

#[test]
fn exhaustive_small_frameworks_match_oracle() {
    for n in 0..=3 {
        for f in all_frameworks(n) {
            assert_matches_oracle(&f);
        }
    }
}

#[test]
fn three_complete_labellings() {
    // A framework whose complete labellings are exactly the three rows of the
    // worked example: 3 and 5 attack each other, 3 attacks 8, 1 attacks 2, 6 attacks 4.
    let f = Framework::new(1..=8, [(1, 2), (6, 4), (3, 5), (5, 3), (3, 8)]).unwrap();
    let l1 = Labelling::from_sets([1, 6, 7], [2, 4], [3, 5, 8]).unwrap();
    let l2 = Labelling::from_sets([1, 3, 6, 7], [2, 4, 5, 8], []).unwrap();
    let l3 = Labelling::from_sets([1, 5, 6, 7, 8], [2, 3, 4], []).unwrap();
    let oracle = oracle_all_labellings(&f).unwrap();
    assert_eq!(oracle[&SemanticsKind::Complete], vec![l2, l3, l1]);
    assert_matches_oracle(&f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_frameworks_match_oracle(f in framework_strategy(7)) {
        assert_matches_oracle(&f);
    }

    #[test]
    fn grounded_independent_of_visit_order(f in framework_strategy(12), seed in any::<u64>()) {
        let mut order: Vec<Argument> = f.arguments().to_vec();
        let mut s = seed;
        for i in (1..order.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(grounded_by_sweep(&f, &order), solve_grounded(&f).0);
    }

    #[test]
    fn grounded_trace_invariants(f in framework_strategy(12)) {
        let (l, trace) = solve_grounded(&f);
        prop_assert_eq!(trace.final_labelling(), Some(l.clone()));
        let mut previous = trace.steps[0].snapshot.clone();
        for a in &trace.steps[0].affected {
            prop_assert!(f.is_unattacked(*a));
        }
        for step in &trace.steps[1..] {
            for (a, before) in &previous {
                if matches!(before, Some(Label::In) | Some(Label::Out)) {
                    prop_assert_eq!(step.snapshot[a], *before);
                }
            }
            for a in &step.affected {
                let attackers = f.attackers_of(*a);
                match step.kind {
                    StepKind::InStep => prop_assert!(attackers.iter().all(|b| previous[b] == Some(Label::Out))),
                    StepKind::OutStep => prop_assert!(attackers.iter().any(|b| previous[b] == Some(Label::In))),
                    StepKind::UndecClose => prop_assert!(previous[a].is_none()),
                    _ => prop_assert!(false, "unexpected step kind {:?}", step.kind),
                }
            }
            previous = step.snapshot.clone();
        }
    }

    #[test]
    fn solution_structure(f in framework_strategy(12)) {
        let sol = solve(&f);
        let completes: Vec<&Labelling> = sol.complete_labellings().collect();
        prop_assert!(completes.contains(&sol.grounded_labelling()));
        let grounded_in = sol.grounded_labelling().in_set();
        for (l, trace) in &sol.completes {
            prop_assert!(grounded_in.is_subset(&l.in_set()));
            prop_assert!(trace.steps.last().unwrap().report.as_ref().unwrap().complete);
        }
        for pair in completes.windows(2) {
            prop_assert!(pair[0].cmp_by_in_set(pair[1]).is_lt());
        }
        let stable = sol.filter(SemanticsKind::Stable);
        let preferred: BTreeSet<_> = sol.filter(SemanticsKind::Preferred).into_iter().map(|l| l.in_set()).collect();
        for l in &stable {
            prop_assert!(preferred.contains(&l.in_set()));
        }
        prop_assert!(!preferred.is_empty());
    }
}

#[test]
fn legality_properties_exhaustive() {
    for n in 0..=3 {
        for f in all_frameworks(n) {
            for l in all_labellings(&f) {
                let report = check_legality(&f, &l).unwrap();
                assert!(!report.stable || report.complete);
                assert!(!report.complete || report.admissible);
                if report.admissible {
                    let ins = l.in_set();
                    assert!(is_conflict_free(&f, &ins).unwrap());
                    for a in &ins {
                        assert!(defends(&f, &ins, *a).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn legality_properties_sampled_five() {
    // n = 5 has 2^25 frameworks; walk a strided sample of them with all 243 labellings each.
    let pairs: Vec<(u32, u32)> = (0..5).flat_map(|a| (0..5).map(move |b| (a, b))).collect();
    for mask in (0u64..1 << 25).step_by(104_729) {
        let attacks = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p);
        let f = Framework::new(0..5, attacks).unwrap();
        for l in all_labellings(&f) {
            let report = check_legality(&f, &l).unwrap();
            if report.admissible {
                let ins = l.in_set();
                assert!(is_conflict_free(&f, &ins).unwrap());
                assert!(ins.iter().all(|a| defends(&f, &ins, *a).unwrap()));
            }
        }
    }
}
