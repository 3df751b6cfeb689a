//! Abstract argumentation frameworks, three-valued labellings and the
//! legality conditions that the labelling-based semantics are built from.
//!
//! A [`Framework`] is a finite set of arguments together with a binary attack
//! relation. A [`Labelling`] assigns each argument exactly one of
//! [`Label::In`], [`Label::Out`] or [`Label::Undec`]. Whether a labelling is
//! admissible, complete or stable is decided argument by argument with
//! [`check_legality`]; grounded and preferred additionally need the full set
//! of complete labellings, see [`classify_labelling`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Argument identifier. Identifiers are kept exactly as they appear in the input.
pub type Argument = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("argument {0} is not part of the framework")]
    UnknownArgument(Argument),
    #[error("attack ({attacker}, {target}) references an undeclared argument")]
    DanglingAttack { attacker: Argument, target: Argument },
    #[error("labelling is not total: arguments {missing:?} have no label")]
    PartialLabelling { missing: Vec<Argument> },
    #[error("argument {0} carries more than one label")]
    OverlappingLabels(Argument),
    #[error("labelling is complete but absent from the supplied set of complete labellings")]
    InconsistentInput,
}

/// An abstract argumentation framework: arguments plus an attack relation.
///
/// Arguments are stored sorted and deduplicated, attacks as a set of
/// `(attacker, target)` pairs. Self-attacks are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Framework {
    arguments: Vec<Argument>,
    attacks: BTreeSet<(Argument, Argument)>,
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
}

impl Framework {
    pub fn new<A, R>(arguments: A, attacks: R) -> Result<Self, FrameworkError>
    where
        A: IntoIterator<Item = Argument>,
        R: IntoIterator<Item = (Argument, Argument)>,
    {
        let arguments: Vec<Argument> = arguments.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let attacks: BTreeSet<(Argument, Argument)> = attacks.into_iter().collect();

        let mut attackers = vec![Vec::new(); arguments.len()];
        let mut targets = vec![Vec::new(); arguments.len()];
        for &(attacker, target) in &attacks {
            let (Ok(a), Ok(t)) = (arguments.binary_search(&attacker), arguments.binary_search(&target)) else {
                return Err(FrameworkError::DanglingAttack { attacker, target });
            };
            attackers[t].push(a);
            targets[a].push(t);
        }

        Ok(Self {
            arguments,
            attacks,
            attackers,
            targets,
        })
    }

    /// Arguments in ascending order.
    pub fn arguments(&self) -> &[Argument] {
        &self.arguments
    }

    /// Attacks in lexicographic `(attacker, target)` order.
    pub fn attacks(&self) -> &BTreeSet<(Argument, Argument)> {
        &self.attacks
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn contains(&self, argument: Argument) -> bool {
        self.arguments.binary_search(&argument).is_ok()
    }

    pub fn attacks_pair(&self, attacker: Argument, target: Argument) -> bool {
        self.attacks.contains(&(attacker, target))
    }

    /// Arguments attacking `argument`, ascending. Empty for unknown arguments.
    pub fn attackers_of(&self, argument: Argument) -> Vec<Argument> {
        self.index_of(argument)
            .map(|i| self.attackers[i].iter().map(|&j| self.arguments[j]).collect())
            .unwrap_or_default()
    }

    /// Arguments attacked by `argument`, ascending. Empty for unknown arguments.
    pub fn targets_of(&self, argument: Argument) -> Vec<Argument> {
        self.index_of(argument)
            .map(|i| self.targets[i].iter().map(|&j| self.arguments[j]).collect())
            .unwrap_or_default()
    }

    pub fn is_unattacked(&self, argument: Argument) -> bool {
        self.index_of(argument)
            .map(|i| self.attackers[i].is_empty())
            .unwrap_or(false)
    }

    pub(crate) fn index_of(&self, argument: Argument) -> Option<usize> {
        self.arguments.binary_search(&argument).ok()
    }

    pub(crate) fn attacker_indices(&self, index: usize) -> &[usize] {
        &self.attackers[index]
    }

    pub(crate) fn target_indices(&self, index: usize) -> &[usize] {
        &self.targets[index]
    }

    fn check_members<'a, I>(&self, arguments: I) -> Result<(), FrameworkError>
    where
        I: IntoIterator<Item = &'a Argument>,
    {
        match arguments.into_iter().find(|a| !self.contains(**a)) {
            Some(&a) => Err(FrameworkError::UnknownArgument(a)),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for Framework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Framework")
            .field("arguments", &self.arguments)
            .field("attacks", &self.attacks)
            .finish()
    }
}

/// Serialized as `{"arguments":[..],"attacks":[[a,b],..]}`.
#[derive(Serialize, Deserialize)]
struct FrameworkRepr {
    arguments: Vec<Argument>,
    attacks: Vec<(Argument, Argument)>,
}

impl Serialize for Framework {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FrameworkRepr {
            arguments: self.arguments.clone(),
            attacks: self.attacks.iter().copied().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Framework {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FrameworkRepr::deserialize(deserializer)?;
        Framework::new(repr.arguments, repr.attacks).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "OUT")]
    Out,
    #[serde(rename = "UNDEC")]
    Undec,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::In, Label::Out, Label::Undec];
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "IN",
            Label::Out => "OUT",
            Label::Undec => "UNDEC",
        })
    }
}

/// A total assignment of labels to arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Labelling {
    labels: BTreeMap<Argument, Label>,
}

impl Labelling {
    pub fn new(labels: BTreeMap<Argument, Label>) -> Self {
        Self { labels }
    }

    /// Builds a labelling from its IN, OUT and UNDEC sets, which must be disjoint.
    pub fn from_sets<I, O, U>(ins: I, outs: O, undecs: U) -> Result<Self, FrameworkError>
    where
        I: IntoIterator<Item = Argument>,
        O: IntoIterator<Item = Argument>,
        U: IntoIterator<Item = Argument>,
    {
        let mut labels = BTreeMap::new();
        let groups: [(Label, Vec<Argument>); 3] = [
            (Label::In, ins.into_iter().collect()),
            (Label::Out, outs.into_iter().collect()),
            (Label::Undec, undecs.into_iter().collect()),
        ];
        for (label, members) in groups {
            for a in members {
                match labels.insert(a, label) {
                    Some(previous) if previous != label => return Err(FrameworkError::OverlappingLabels(a)),
                    _ => {}
                }
            }
        }
        Ok(Self { labels })
    }

    /// Labels every argument of `framework` with `label`.
    pub fn uniform(framework: &Framework, label: Label) -> Self {
        Self {
            labels: framework.arguments().iter().map(|&a| (a, label)).collect(),
        }
    }

    pub fn label(&self, argument: Argument) -> Option<Label> {
        self.labels.get(&argument).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Argument, Label)> + '_ {
        self.labels.iter().map(|(&a, &l)| (a, l))
    }

    pub fn arguments(&self) -> impl Iterator<Item = Argument> + '_ {
        self.labels.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Arguments carrying `label`, ascending.
    pub fn with_label(&self, label: Label) -> Vec<Argument> {
        self.iter().filter(|&(_, l)| l == label).map(|(a, _)| a).collect()
    }

    pub fn in_set(&self) -> BTreeSet<Argument> {
        self.with_label(Label::In).into_iter().collect()
    }

    pub fn out_set(&self) -> BTreeSet<Argument> {
        self.with_label(Label::Out).into_iter().collect()
    }

    pub fn undec_set(&self) -> BTreeSet<Argument> {
        self.with_label(Label::Undec).into_iter().collect()
    }

    /// Ordering by the ascending-sorted IN set, compared lexicographically.
    pub fn cmp_by_in_set(&self, other: &Self) -> Ordering {
        self.with_label(Label::In)
            .cmp(&other.with_label(Label::In))
            .then_with(|| self.labels.iter().cmp(other.labels.iter()))
    }

    /// True when exactly the arguments of `framework` are labelled.
    pub fn is_total_for(&self, framework: &Framework) -> bool {
        self.labels.len() == framework.len() && self.labels.keys().eq(framework.arguments().iter())
    }
}

impl FromIterator<(Argument, Label)> for Labelling {
    fn from_iter<T: IntoIterator<Item = (Argument, Label)>>(iter: T) -> Self {
        Self {
            labels: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Labelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |label| {
            self.with_label(label)
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "IN = {{{}}}, OUT = {{{}}}, UNDEC = {{{}}}",
            show(Label::In),
            show(Label::Out),
            show(Label::Undec)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemanticsKind {
    #[serde(rename = "grd")]
    Grounded,
    #[serde(rename = "com")]
    Complete,
    #[serde(rename = "prf")]
    Preferred,
    #[serde(rename = "stb")]
    Stable,
}

impl SemanticsKind {
    pub const ALL: [SemanticsKind; 4] = [
        SemanticsKind::Grounded,
        SemanticsKind::Complete,
        SemanticsKind::Preferred,
        SemanticsKind::Stable,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            SemanticsKind::Grounded => "grd",
            SemanticsKind::Complete => "com",
            SemanticsKind::Preferred => "prf",
            SemanticsKind::Stable => "stb",
        }
    }

    pub fn long_name(self) -> &'static str {
        match self {
            SemanticsKind::Grounded => "grounded",
            SemanticsKind::Complete => "complete",
            SemanticsKind::Preferred => "preferred",
            SemanticsKind::Stable => "stable",
        }
    }
}

impl fmt::Display for SemanticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for SemanticsKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SemanticsKind::ALL
            .into_iter()
            .find(|k| s.eq_ignore_ascii_case(k.short_name()) || s.eq_ignore_ascii_case(k.long_name()))
            .ok_or_else(|| format!("unknown semantics `{s}` (expected grd, com, prf or stb)"))
    }
}

/// The clause of the legality conditions an argument fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    /// Labelled IN although these attackers are not labelled OUT.
    InWithAttackerNotOut { attackers: Vec<Argument> },
    /// Labelled OUT although no attacker is labelled IN.
    OutWithoutInAttacker,
    /// Labelled UNDEC although every attacker is OUT (vacuously so when unattacked).
    UndecWithAllAttackersOut,
    /// Labelled UNDEC although these attackers are labelled IN.
    UndecWithInAttacker { attackers: Vec<Argument> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgumentVerdict {
    pub label: Label,
    pub attackers: Vec<Argument>,
    pub violation: Option<Violation>,
}

impl ArgumentVerdict {
    pub fn is_legal(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegalityReport {
    pub verdicts: BTreeMap<Argument, ArgumentVerdict>,
    pub admissible: bool,
    pub complete: bool,
    pub stable: bool,
}

impl LegalityReport {
    pub fn illegal(&self) -> impl Iterator<Item = (Argument, &ArgumentVerdict)> + '_ {
        self.verdicts
            .iter()
            .filter(|(_, v)| !v.is_legal())
            .map(|(&a, v)| (a, v))
    }
}

/// True iff no member of `set` attacks another member (or itself).
pub fn is_conflict_free(framework: &Framework, set: &BTreeSet<Argument>) -> Result<bool, FrameworkError> {
    framework.check_members(set)?;
    Ok(set
        .iter()
        .all(|&a| framework.targets_of(a).iter().all(|t| !set.contains(t))))
}

/// True iff every attacker of `argument` is attacked by some member of `set`.
pub fn defends(framework: &Framework, set: &BTreeSet<Argument>, argument: Argument) -> Result<bool, FrameworkError> {
    framework.check_members(set)?;
    framework.check_members([&argument])?;
    Ok(framework
        .attackers_of(argument)
        .iter()
        .all(|&b| framework.attackers_of(b).iter().any(|c| set.contains(c))))
}

/// Applies the IN/OUT/UNDEC legality clauses to every argument.
pub fn check_legality(framework: &Framework, labelling: &Labelling) -> Result<LegalityReport, FrameworkError> {
    if let Some(extra) = labelling.arguments().find(|&a| !framework.contains(a)) {
        return Err(FrameworkError::UnknownArgument(extra));
    }
    let missing: Vec<Argument> = framework
        .arguments()
        .iter()
        .copied()
        .filter(|&a| labelling.label(a).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(FrameworkError::PartialLabelling { missing });
    }

    let mut verdicts = BTreeMap::new();
    let (mut bad_in, mut bad_out, mut bad_undec) = (false, false, false);
    for &a in framework.arguments() {
        let label = labelling.label(a).expect("totality checked above");
        let attackers = framework.attackers_of(a);
        let with = |wanted: Label| -> Vec<Argument> {
            attackers
                .iter()
                .copied()
                .filter(|&b| labelling.label(b) == Some(wanted))
                .collect()
        };
        let violation = match label {
            Label::In => {
                let not_out: Vec<Argument> = attackers
                    .iter()
                    .copied()
                    .filter(|&b| labelling.label(b) != Some(Label::Out))
                    .collect();
                (!not_out.is_empty()).then_some(Violation::InWithAttackerNotOut { attackers: not_out })
            }
            Label::Out => with(Label::In).is_empty().then_some(Violation::OutWithoutInAttacker),
            Label::Undec => {
                let in_attackers = with(Label::In);
                if with(Label::Out).len() == attackers.len() {
                    Some(Violation::UndecWithAllAttackersOut)
                } else if !in_attackers.is_empty() {
                    Some(Violation::UndecWithInAttacker {
                        attackers: in_attackers,
                    })
                } else {
                    None
                }
            }
        };
        if violation.is_some() {
            match label {
                Label::In => bad_in = true,
                Label::Out => bad_out = true,
                Label::Undec => bad_undec = true,
            }
        }
        verdicts.insert(
            a,
            ArgumentVerdict {
                label,
                attackers,
                violation,
            },
        );
    }

    let admissible = !bad_in && !bad_out;
    let complete = admissible && !bad_undec;
    let stable = complete && labelling.with_label(Label::Undec).is_empty();
    Ok(LegalityReport {
        verdicts,
        admissible,
        complete,
        stable,
    })
}

/// Which of the four semantics `labelling` belongs to, given every complete
/// labelling of `framework`.
pub fn classify_labelling(
    framework: &Framework,
    labelling: &Labelling,
    all_complete: &[Labelling],
) -> Result<BTreeSet<SemanticsKind>, FrameworkError> {
    let report = check_legality(framework, labelling)?;
    let mut kinds = BTreeSet::new();
    if !report.complete {
        return Ok(kinds);
    }
    if !all_complete.contains(labelling) {
        return Err(FrameworkError::InconsistentInput);
    }
    kinds.insert(SemanticsKind::Complete);
    let ins = labelling.in_set();
    let others: Vec<BTreeSet<Argument>> = all_complete.iter().map(Labelling::in_set).collect();
    if !others.iter().any(|o| o.is_subset(&ins) && *o != ins) {
        kinds.insert(SemanticsKind::Grounded);
    }
    if !others.iter().any(|o| o.is_superset(&ins) && *o != ins) {
        kinds.insert(SemanticsKind::Preferred);
    }
    if report.stable {
        kinds.insert(SemanticsKind::Stable);
    }
    Ok(kinds)
}
