use serde::{Deserialize, Serialize};

use super::random::{derive_seed, rng_from};
use super::text::{self, Prompted};
use super::{DataGenError, TaskKind};
use crate::framework::{Framework, Labelling};
use crate::graphio::{serialize_answer, serialize_framework, AnswerShape, GraphFormat};
use crate::semantics::{solve, solve_grounded, DerivationTrace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub task: TaskKind,
    pub n: usize,
    pub format: GraphFormat,
    /// Seed all wording choices of this sample derive from.
    pub seed: u64,
    /// Complete task with the grounded labelling embedded in the problem.
    pub given_grounded: bool,
    pub corrupted: bool,
    pub framework: Framework,
}

/// One dataset record. Serialized as a single JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSample {
    pub id: String,
    pub instruction: String,
    pub problem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explanation: Option<String>,
    pub answer: String,
    pub meta: SampleMeta,
}

const INSTRUCTION_STREAM: u64 = 1;
const PROBLEM_STREAM: u64 = 2;
const EXPLANATION_STREAM: u64 = 3;

/// The grounded explanation for an arbitrary trace, worded from `seed`.
pub(crate) fn grounded_text(trace: &DerivationTrace, answer: &str, seed: u64) -> String {
    let mut rng = rng_from(derive_seed(seed, &[EXPLANATION_STREAM]));
    text::grounded_explanation(trace, answer, &mut rng)
}

/// Assembles one sample. Every wording choice is drawn from `seed`, with
/// separate streams for instruction, problem and explanation, so dropping
/// the explanation leaves the other fields unchanged.
///
/// `given_grounded` only matters for complete tasks.
pub fn build_sample(
    framework: &Framework,
    task: TaskKind,
    format: GraphFormat,
    with_explanation: bool,
    given_grounded: bool,
    seed: u64,
) -> Result<DatasetSample, DataGenError> {
    let given_grounded = given_grounded && task == TaskKind::Complete;
    let prompted = match (task, given_grounded) {
        (TaskKind::Grounded, _) => Prompted::Grounded,
        (TaskKind::Complete, true) => Prompted::CompleteTwoStep,
        (TaskKind::Complete, false) => Prompted::CompleteEndToEnd,
    };
    let instruction = text::instruction(prompted, &mut rng_from(derive_seed(seed, &[INSTRUCTION_STREAM])));
    let framework_text = serialize_framework(framework, format);

    let (problem, answer, explanation) = match task {
        TaskKind::Grounded => {
            let (grounded, trace) = solve_grounded(framework);
            let answer = serialize_answer(&[grounded], AnswerShape::Single)?;
            let problem = text::problem(
                &framework_text,
                format,
                None,
                &mut rng_from(derive_seed(seed, &[PROBLEM_STREAM])),
            );
            let explanation = with_explanation.then(|| grounded_text(&trace, &answer, seed));
            (problem, answer, explanation)
        }
        TaskKind::Complete => {
            let solution = solve(framework);
            let labellings: Vec<Labelling> = solution.complete_labellings().cloned().collect();
            let answer = serialize_answer(&labellings, AnswerShape::List)?;
            let grounded_json =
                serialize_answer(std::slice::from_ref(solution.grounded_labelling()), AnswerShape::Single)?;
            let problem = text::problem(
                &framework_text,
                format,
                given_grounded.then_some(grounded_json.as_str()),
                &mut rng_from(derive_seed(seed, &[PROBLEM_STREAM])),
            );
            let explanation = with_explanation.then(|| {
                let mut rng = rng_from(derive_seed(seed, &[EXPLANATION_STREAM]));
                text::complete_explanation(
                    &solution.grounded,
                    &solution.completes,
                    given_grounded,
                    &answer,
                    &mut rng,
                )
            });
            (problem, answer, explanation)
        }
    };

    Ok(DatasetSample {
        id: format!("s{seed:016x}"),
        instruction,
        problem,
        explanation,
        answer,
        meta: SampleMeta {
            task,
            n: framework.len(),
            format,
            seed,
            given_grounded,
            corrupted: false,
            framework: framework.clone(),
        },
    })
}
