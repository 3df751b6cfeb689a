pub mod datagen;
pub mod evalharness;
pub mod framework;
pub mod graphio;
pub mod prompts;
pub mod semantics;

pub use framework::{
    check_legality, classify_labelling, defends, is_conflict_free, Argument, Framework, FrameworkError, Label,
    Labelling, LegalityReport, SemanticsKind,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/frameworks.md")]
    mod frameworks {}
    #[doc = include_str!("../../../book/src/semantics.md")]
    mod semantics {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    mod datasets {}
    #[doc = include_str!("../../../book/src/corruption.md")]
    mod corruption {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/prompts.md")]
    mod prompts {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
