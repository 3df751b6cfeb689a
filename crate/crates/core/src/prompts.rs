//! Chain-of-thought prompt templates for baseline runs against external
//! models. Rendering only fills placeholders; nothing is sent anywhere.
//!
//! `{PROGRAM}` is replaced by the serialized framework, `{EXAMPLE}` by a
//! worked demonstration in the same format and `{GRD_LABELLING}` by the true
//! grounded labelling.

use crate::datagen::{build_sample, TaskKind};
use crate::framework::Framework;
use crate::graphio::{serialize_answer, serialize_framework, AnswerShape, GraphFormat};
use crate::semantics::solve_grounded;

pub const GROUNDED_TEMPLATE: &str = "\
You will compute the grounded labelling of an abstract argumentation framework by running a labelling algorithm step by step.

Step 1. List the arguments and the attack relation of the framework.
Step 2. Find the unattacked arguments and use them to initialize IN(L).
Step 3. Repeat the recursive part of the algorithm:
  (a) OUT step: label OUT every unlabelled argument that is attacked by an argument in IN(L).
  (b) IN step: label IN every unlabelled argument all of whose attackers are in OUT(L).
  Stop when neither step adds an argument to IN(L) or OUT(L).
Step 4. Label every remaining argument UNDEC.
Report IN(L), OUT(L) and UNDEC(L) after every step.
End with a JSON object {\"IN\": [...], \"OUT\": [...], \"UNDEC\": [...]} whose lists are sorted.

Example:
{EXAMPLE}

Framework:
{PROGRAM}
";

pub const COMPLETE_TEMPLATE: &str = "\
You will compute every complete labelling of an abstract argumentation framework, starting from its grounded labelling.

The grounded labelling is:
{GRD_LABELLING}

Step 1. Every complete labelling keeps the IN and OUT arguments of the grounded labelling.
Step 2. Propose a candidate by selecting elements from UNDEC(L) and reassigning them to IN or OUT.
Step 3. Verify the candidate argument by argument:
  an argument is legally IN if all its attackers are OUT,
  legally OUT if at least one attacker is IN,
  legally UNDEC if not all attackers are OUT and none is IN.
  Keep the candidate only if every argument is legally labelled.
Step 4. Repeat until every choice for the UNDEC arguments has been considered.
End with a JSON array of {\"IN\": [...], \"OUT\": [...], \"UNDEC\": [...]} objects, one per complete labelling, ordered by their IN lists.

Example:
{EXAMPLE}

Framework:
{PROGRAM}
";

/// The demonstration framework: a chain of four next to a mutual attack
/// with a tail.
fn example_framework() -> Framework {
    Framework::new(0..7, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 4), (5, 6)]).expect("static framework")
}

fn demonstration(task: TaskKind, format: GraphFormat) -> String {
    let f = example_framework();
    let sample = build_sample(&f, task, format, true, true, 0).expect("demonstration sample");
    format!("{}\n{}", sample.problem, sample.explanation.unwrap_or_default())
}

pub fn render_grounded_prompt(framework: &Framework, format: GraphFormat) -> String {
    GROUNDED_TEMPLATE
        .replace("{EXAMPLE}", &demonstration(TaskKind::Grounded, format))
        .replace("{PROGRAM}", serialize_framework(framework, format).trim_end())
}

pub fn render_complete_prompt(framework: &Framework, format: GraphFormat) -> String {
    let (grounded, _) = solve_grounded(framework);
    let grounded = serialize_answer(&[grounded], AnswerShape::Single).expect("single labelling");
    COMPLETE_TEMPLATE
        .replace("{GRD_LABELLING}", &grounded)
        .replace("{EXAMPLE}", &demonstration(TaskKind::Complete, format))
        .replace("{PROGRAM}", serialize_framework(framework, format).trim_end())
}

pub fn render_prompt(framework: &Framework, task: TaskKind, format: GraphFormat) -> String {
    match task {
        TaskKind::Grounded => render_grounded_prompt(framework, format),
        TaskKind::Complete => render_complete_prompt(framework, format),
    }
}
