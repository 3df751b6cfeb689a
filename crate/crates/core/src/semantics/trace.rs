use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::framework::{Argument, Label, Labelling, LegalityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum StepKind {
    /// Unattacked arguments become IN.
    Init,
    /// Unlabelled arguments whose attackers are all OUT become IN.
    InStep,
    /// Unlabelled arguments attacked by an IN argument become OUT.
    OutStep,
    /// Whatever is still unlabelled becomes UNDEC.
    UndecClose,
    /// A candidate labelling is put forward.
    Propose,
    /// The candidate is checked clause by clause.
    Verify,
}

/// Label state during a derivation. `None` marks an argument not yet labelled.
pub type Snapshot = BTreeMap<Argument, Option<Label>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub kind: StepKind,
    /// Arguments labelled (or checked) by this step, ascending.
    pub affected: Vec<Argument>,
    /// Per affected argument, the attackers that justify its label.
    pub justification: BTreeMap<Argument, Vec<Argument>>,
    /// State after the step.
    pub snapshot: Snapshot,
    /// Present on `Verify` steps only.
    pub report: Option<LegalityReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    /// The labelling held by the last snapshot, if that snapshot is total.
    pub fn final_labelling(&self) -> Option<Labelling> {
        let last = self.steps.last()?;
        last.snapshot
            .iter()
            .map(|(&a, l)| l.map(|l| (a, l)))
            .collect::<Option<Labelling>>()
    }

    pub fn kinds(&self) -> Vec<StepKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }
}

pub(crate) fn snapshot_of(labelling: &Labelling) -> Snapshot {
    labelling.iter().map(|(a, l)| (a, Some(l))).collect()
}
