//! Grounded, complete, preferred and stable labellings.

mod complete;
mod grounded;
mod oracle;
mod trace;

use thiserror::Error;

use crate::framework::FrameworkError;

pub use complete::{enumerate_complete, filter_semantics, solve, CompleteSolution};
pub use grounded::{grounded_by_sweep, solve_grounded};
pub(crate) use grounded::{resume, snapshot, Phase};
pub use oracle::{oracle_all_labellings, oracle_all_labellings_with_cap, DEFAULT_ORACLE_CAP};
pub use trace::{DerivationTrace, Snapshot, StepKind, TraceStep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("the supplied labelling is not the grounded labelling of this framework")]
    InconsistentGrounded,
    #[error("framework has {arguments} arguments, above the exhaustive-check cap of {cap}")]
    TooLarge { arguments: usize, cap: usize },
    #[error(transparent)]
    Framework(#[from] FrameworkError),
}
