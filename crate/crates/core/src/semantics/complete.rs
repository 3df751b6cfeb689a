//! Enumeration of every complete labelling, starting from the grounded one.
//!
//! A complete labelling is fixed by its IN set, which always contains the
//! grounded IN set and otherwise draws only from the grounded UNDEC set. The
//! search branches over those UNDEC arguments in ascending order, trying IN
//! before leaving an argument out, and prunes a branch as soon as it can no
//! longer lead to a legal labelling. Every leaf is re-checked with
//! [`check_legality`] before it is accepted.

use std::collections::BTreeMap;

use super::grounded::solve_grounded;
use super::trace::{snapshot_of, DerivationTrace, StepKind, TraceStep};
use super::SemanticsError;
use crate::framework::{check_legality, Argument, Framework, Label, Labelling, SemanticsKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteSolution {
    pub grounded: (Labelling, DerivationTrace),
    /// Every complete labelling once, ordered by sorted IN set.
    pub completes: Vec<(Labelling, DerivationTrace)>,
}

impl CompleteSolution {
    pub fn grounded_labelling(&self) -> &Labelling {
        &self.grounded.0
    }

    pub fn complete_labellings(&self) -> impl Iterator<Item = &Labelling> + '_ {
        self.completes.iter().map(|(l, _)| l)
    }

    pub fn filter(&self, kind: SemanticsKind) -> Vec<Labelling> {
        filter_semantics(self, kind)
    }
}

/// Enumerates all complete labellings of `framework`. `grounded` must be the
/// labelling returned by [`solve_grounded`].
pub fn enumerate_complete(framework: &Framework, grounded: &Labelling) -> Result<CompleteSolution, SemanticsError> {
    let report = check_legality(framework, grounded)?;
    let (expected, grounded_trace) = solve_grounded(framework);
    if !report.complete || expected != *grounded {
        return Err(SemanticsError::InconsistentGrounded);
    }

    let n = framework.len();
    let mut search = Search {
        framework,
        undecided: (0..n)
            .filter(|&i| grounded.label(framework.arguments()[i]) == Some(Label::Undec))
            .collect(),
        is_in: (0..n)
            .map(|i| grounded.label(framework.arguments()[i]) == Some(Label::In))
            .collect(),
        in_attackers: vec![0; n],
        excluded: vec![false; n],
        found: Vec::new(),
    };
    for i in 0..n {
        if search.is_in[i] {
            for &t in framework.target_indices(i) {
                search.in_attackers[t] += 1;
            }
        }
    }
    search.branch(0);

    let mut found = search.found;
    found.sort_by(Labelling::cmp_by_in_set);
    found.dedup();

    let mut completes = Vec::with_capacity(found.len());
    for labelling in found {
        let trace = verification_trace(framework, grounded, &labelling)?;
        completes.push((labelling, trace));
    }
    Ok(CompleteSolution {
        grounded: (expected, grounded_trace),
        completes,
    })
}

struct Search<'a> {
    framework: &'a Framework,
    undecided: Vec<usize>,
    is_in: Vec<bool>,
    /// Number of IN attackers; positive means the argument is OUT.
    in_attackers: Vec<u32>,
    excluded: Vec<bool>,
    found: Vec<Labelling>,
}

impl Search<'_> {
    fn branch(&mut self, pos: usize) {
        if pos == self.undecided.len() {
            let candidate = self.candidate();
            if check_legality(self.framework, &candidate).is_ok_and(|r| r.complete) {
                self.found.push(candidate);
            }
            return;
        }
        let x = self.undecided[pos];

        if self.can_include(x) {
            self.set_in(x, true);
            if self.viable(pos) {
                self.branch(pos + 1);
            }
            self.set_in(x, false);
        }

        self.excluded[x] = true;
        if self.viable(pos) {
            self.branch(pos + 1);
        }
        self.excluded[x] = false;
    }

    fn can_include(&self, x: usize) -> bool {
        self.in_attackers[x] == 0
            && self
                .framework
                .target_indices(x)
                .iter()
                .all(|&t| t != x && !self.is_in[t])
    }

    fn set_in(&mut self, x: usize, value: bool) {
        self.is_in[x] = value;
        for &t in self.framework.target_indices(x) {
            if value {
                self.in_attackers[t] += 1;
            } else {
                self.in_attackers[t] -= 1;
            }
        }
    }

    fn still_open(&self, c: usize, pos: usize) -> bool {
        self.undecided[pos + 1..].contains(&c) && self.in_attackers[c] == 0
    }

    /// False when the decisions up to `pos` can no longer be completed.
    fn viable(&self, pos: usize) -> bool {
        for &y in &self.undecided[..=pos] {
            let attackers = self.framework.attacker_indices(y);
            if self.is_in[y] {
                // every attacker must end up OUT
                let defended = attackers.iter().all(|&b| {
                    self.in_attackers[b] > 0
                        || self
                            .framework
                            .attacker_indices(b)
                            .iter()
                            .any(|&c| self.still_open(c, pos))
                });
                if !defended {
                    return false;
                }
            } else if self.excluded[y] && attackers.iter().all(|&b| self.in_attackers[b] > 0) {
                // left out, yet all its attackers are already OUT
                return false;
            }
        }
        true
    }

    fn candidate(&self) -> Labelling {
        self.framework
            .arguments()
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let label = if self.is_in[i] {
                    Label::In
                } else if self.in_attackers[i] > 0 {
                    Label::Out
                } else {
                    Label::Undec
                };
                (a, label)
            })
            .collect()
    }
}

fn verification_trace(
    framework: &Framework,
    grounded: &Labelling,
    candidate: &Labelling,
) -> Result<DerivationTrace, SemanticsError> {
    let changed: Vec<Argument> = grounded
        .iter()
        .filter(|&(a, l)| candidate.label(a) != Some(l))
        .map(|(a, _)| a)
        .collect();
    let propose_justification = changed
        .iter()
        .map(|&a| {
            let wanted = match candidate.label(a) {
                Some(Label::In) => Label::Out,
                _ => Label::In,
            };
            let attackers = framework
                .attackers_of(a)
                .into_iter()
                .filter(|&b| candidate.label(b) == Some(wanted))
                .collect();
            (a, attackers)
        })
        .collect();

    let report = check_legality(framework, candidate)?;
    let verify_justification: BTreeMap<Argument, Vec<Argument>> =
        report.verdicts.iter().map(|(&a, v)| (a, v.attackers.clone())).collect();

    Ok(DerivationTrace {
        steps: vec![
            TraceStep {
                kind: StepKind::Propose,
                affected: changed,
                justification: propose_justification,
                snapshot: snapshot_of(candidate),
                report: None,
            },
            TraceStep {
                kind: StepKind::Verify,
                affected: framework.arguments().to_vec(),
                justification: verify_justification,
                snapshot: snapshot_of(candidate),
                report: Some(report),
            },
        ],
    })
}

/// Selects the labellings of `solution` that belong to `kind`.
pub fn filter_semantics(solution: &CompleteSolution, kind: SemanticsKind) -> Vec<Labelling> {
    let all: Vec<&Labelling> = solution.complete_labellings().collect();
    let ins: Vec<_> = all.iter().map(|l| l.in_set()).collect();
    match kind {
        SemanticsKind::Complete => all.into_iter().cloned().collect(),
        SemanticsKind::Grounded => all
            .iter()
            .zip(&ins)
            .filter(|(_, a)| ins.iter().all(|b| a.is_subset(b)))
            .map(|(l, _)| (*l).clone())
            .collect(),
        SemanticsKind::Preferred => all
            .iter()
            .zip(&ins)
            .filter(|(_, a)| !ins.iter().any(|b| b.is_superset(a) && b != *a))
            .map(|(l, _)| (*l).clone())
            .collect(),
        SemanticsKind::Stable => all.into_iter().filter(|l| l.undec_set().is_empty()).cloned().collect(),
    }
}

/// Grounded labelling plus every complete labelling of `framework`.
pub fn solve(framework: &Framework) -> CompleteSolution {
    let (grounded, _) = solve_grounded(framework);
    enumerate_complete(framework, &grounded).expect("the grounded labelling is consistent by construction")
}
