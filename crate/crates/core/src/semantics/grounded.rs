//! The grounded labelling computed by alternating IN and OUT rounds.

use std::collections::BTreeMap;

use super::trace::{DerivationTrace, Snapshot, StepKind, TraceStep};
use crate::framework::{Argument, Framework, Label, Labelling};

/// Which kind of round runs next when propagation resumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Phase {
    In,
    Out,
}

/// Computes the grounded labelling and records every round.
///
/// The first step labels all unattacked arguments IN. OUT rounds then label
/// every unlabelled argument attacked by an IN argument, IN rounds every
/// unlabelled argument whose attackers are all OUT, until neither round
/// changes anything. The remaining arguments are closed as UNDEC.
pub fn solve_grounded(framework: &Framework) -> (Labelling, DerivationTrace) {
    let mut state: Vec<Option<Label>> = vec![None; framework.len()];
    let mut steps = Vec::new();

    let initial: Vec<usize> = (0..framework.len())
        .filter(|&i| framework.attacker_indices(i).is_empty())
        .collect();
    for &i in &initial {
        state[i] = Some(Label::In);
    }
    steps.push(step(framework, StepKind::Init, &initial, &state, |_| Vec::new()));

    propagate(framework, &mut state, Phase::Out, &mut steps);
    finish(framework, state, steps)
}

/// Resumes the round structure from an arbitrary partial state. Used to
/// continue a derivation after one of its steps has been tampered with.
pub(crate) fn resume(
    framework: &Framework,
    mut state: Vec<Option<Label>>,
    mut steps: Vec<TraceStep>,
    next: Phase,
) -> (Labelling, DerivationTrace) {
    propagate(framework, &mut state, next, &mut steps);
    finish(framework, state, steps)
}

fn propagate(framework: &Framework, state: &mut [Option<Label>], mut phase: Phase, steps: &mut Vec<TraceStep>) {
    // Stop once an IN round and an OUT round in a row label nothing.
    let mut idle = 0;
    while idle < 2 {
        let eligible: Vec<usize> = (0..framework.len())
            .filter(|&i| state[i].is_none())
            .filter(|&i| {
                let mut attackers = framework.attacker_indices(i).iter();
                match phase {
                    Phase::Out => attackers.any(|&b| state[b] == Some(Label::In)),
                    Phase::In => attackers.all(|&b| state[b] == Some(Label::Out)),
                }
            })
            .collect();

        if eligible.is_empty() {
            idle += 1;
        } else {
            idle = 0;
            let (kind, label, wanted) = match phase {
                Phase::Out => (StepKind::OutStep, Label::Out, Label::In),
                Phase::In => (StepKind::InStep, Label::In, Label::Out),
            };
            let justify = |i: usize| -> Vec<usize> {
                framework
                    .attacker_indices(i)
                    .iter()
                    .copied()
                    .filter(|&b| state[b] == Some(wanted))
                    .collect()
            };
            let justification: Vec<(usize, Vec<usize>)> = eligible.iter().map(|&i| (i, justify(i))).collect();
            for &i in &eligible {
                state[i] = Some(label);
            }
            let lookup: BTreeMap<usize, Vec<usize>> = justification.into_iter().collect();
            steps.push(step(framework, kind, &eligible, state, |i| lookup[&i].clone()));
        }
        phase = match phase {
            Phase::In => Phase::Out,
            Phase::Out => Phase::In,
        };
    }
}

fn finish(
    framework: &Framework,
    mut state: Vec<Option<Label>>,
    mut steps: Vec<TraceStep>,
) -> (Labelling, DerivationTrace) {
    let rest: Vec<usize> = (0..framework.len()).filter(|&i| state[i].is_none()).collect();
    if !rest.is_empty() {
        let justification: BTreeMap<usize, Vec<usize>> = rest
            .iter()
            .map(|&i| {
                let undecided = framework
                    .attacker_indices(i)
                    .iter()
                    .copied()
                    .filter(|&b| state[b] != Some(Label::Out))
                    .collect();
                (i, undecided)
            })
            .collect();
        for &i in &rest {
            state[i] = Some(Label::Undec);
        }
        steps.push(step(framework, StepKind::UndecClose, &rest, &state, |i| {
            justification[&i].clone()
        }));
    }
    let labelling = framework
        .arguments()
        .iter()
        .zip(&state)
        .map(|(&a, l)| (a, l.expect("every argument is labelled after closing")))
        .collect();
    (labelling, DerivationTrace { steps })
}

fn step<F>(framework: &Framework, kind: StepKind, affected: &[usize], state: &[Option<Label>], justify: F) -> TraceStep
where
    F: Fn(usize) -> Vec<usize>,
{
    let name = |i: usize| framework.arguments()[i];
    TraceStep {
        kind,
        affected: affected.iter().map(|&i| name(i)).collect(),
        justification: affected
            .iter()
            .map(|&i| (name(i), justify(i).into_iter().map(name).collect()))
            .collect(),
        snapshot: snapshot(framework, state),
        report: None,
    }
}

pub(crate) fn snapshot(framework: &Framework, state: &[Option<Label>]) -> Snapshot {
    framework
        .arguments()
        .iter()
        .copied()
        .zip(state.iter().copied())
        .collect()
}

/// Grounded labelling by one-argument-at-a-time sweeps in the given visit
/// order. Produces no trace; exists to check that the result does not depend
/// on the order in which arguments are considered.
pub fn grounded_by_sweep(framework: &Framework, order: &[Argument]) -> Labelling {
    let mut state: Vec<Option<Label>> = vec![None; framework.len()];
    let order: Vec<usize> = order.iter().filter_map(|&a| framework.index_of(a)).collect();
    loop {
        let mut changed = false;
        for &i in &order {
            if state[i].is_some() {
                continue;
            }
            let attackers = framework.attacker_indices(i);
            if attackers.iter().all(|&b| state[b] == Some(Label::Out)) {
                state[i] = Some(Label::In);
                changed = true;
            } else if attackers.iter().any(|&b| state[b] == Some(Label::In)) {
                state[i] = Some(Label::Out);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    framework
        .arguments()
        .iter()
        .zip(state)
        .map(|(&a, l)| (a, l.unwrap_or(Label::Undec)))
        .collect()
}
