//! Template pools and trace narration.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::framework::{Argument, Label, Labelling};
use crate::graphio::GraphFormat;
use crate::semantics::{DerivationTrace, Snapshot, StepKind, TraceStep};

const INTROS: [&str; 5] = [
    "An abstract argumentation framework is a set of arguments together with an attack relation, where an attack (a, b) means that argument a attacks argument b.",
    "In abstract argumentation, arguments are atomic and the only structure is a directed attack relation between them.",
    "You are given an abstract argumentation framework: a directed graph whose nodes are arguments and whose edges are attacks.",
    "Consider an argumentation framework made of arguments and attacks. An argument is legally IN if all its attackers are OUT, legally OUT if some attacker is IN, and legally UNDEC otherwise.",
    "A labelling of an argumentation framework gives every argument one of the labels IN, OUT or UNDEC.",
];

const GROUNDED_TASKS: [&str; 5] = [
    "Compute the grounded labelling of the framework in the problem.",
    "Find the grounded labelling: start from the unattacked arguments and alternately label arguments OUT and IN until nothing changes, then label the rest UNDEC.",
    "Determine which arguments are IN, OUT and UNDEC in the grounded labelling of the given framework.",
    "Your task is to derive the grounded labelling of the framework below.",
    "Label every argument of the framework according to grounded semantics.",
];

const COMPLETE_TWO_STEP_TASKS: [&str; 5] = [
    "Using the grounded labelling given in the problem, list every complete labelling of the framework.",
    "The grounded labelling is provided. Starting from it, find all complete labellings by deciding which UNDEC arguments can be relabelled IN or OUT.",
    "Given the framework and its grounded labelling, enumerate all complete labellings.",
    "Extend the given grounded labelling to every complete labelling of the framework and check each one.",
    "Find all complete labellings of the framework. Its grounded labelling is included in the problem.",
];

const COMPLETE_END_TO_END_TASKS: [&str; 5] = [
    "List every complete labelling of the framework in the problem.",
    "Find all complete labellings of the given framework. Computing the grounded labelling first is a good starting point.",
    "Enumerate every complete labelling of the framework below.",
    "Determine all labellings of the framework that are complete.",
    "Your task is to find each complete labelling of the framework and verify it.",
];

const SINGLE_FORMATS: [&str; 5] = [
    "End your answer with a JSON object {\"IN\": [...], \"OUT\": [...], \"UNDEC\": [...]} whose lists are sorted by argument number.",
    "Put a JSON object with the keys \"IN\", \"OUT\" and \"UNDEC\" at the end of the answer, each mapped to a sorted list of arguments.",
    "The final line must be a JSON object of the form {\"IN\": [..], \"OUT\": [..], \"UNDEC\": [..]} with ascending argument lists.",
    "Finish with the labelling as JSON: {\"IN\": [...], \"OUT\": [...], \"UNDEC\": [...]}, lists in ascending order.",
    "Give the result at the end as a JSON object mapping IN, OUT and UNDEC to sorted lists of arguments.",
];

const LIST_FORMATS: [&str; 5] = [
    "End your answer with a JSON array containing one {\"IN\": [...], \"OUT\": [...], \"UNDEC\": [...]} object per labelling, lists sorted by argument number and labellings ordered by their IN lists.",
    "Put a JSON array at the end of the answer, one object with keys \"IN\", \"OUT\" and \"UNDEC\" per labelling, sorted by IN list.",
    "The final line must be a JSON array of labellings, each written as {\"IN\": [..], \"OUT\": [..], \"UNDEC\": [..]} with ascending argument lists.",
    "Finish with all labellings as a JSON array of {\"IN\": [...], \"OUT\": [...], \"UNDEC\": [...]} objects, ordered by their IN lists.",
    "Give the result at the end as a JSON array of objects mapping IN, OUT and UNDEC to sorted argument lists.",
];

const PROBLEM_LEADS: [&str; 3] = [
    "The framework in {format} format:",
    "Here is the argumentation framework, written in {format}:",
    "Framework ({format}):",
];

const GIVEN_GROUNDED: [&str; 3] = [
    "Its grounded labelling is {json}.",
    "The grounded labelling of this framework is {json}.",
    "Grounded labelling: {json}",
];

/// What a sample asks for, which picks the instruction pools.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Prompted {
    Grounded,
    CompleteTwoStep,
    CompleteEndToEnd,
}

pub(crate) fn instruction<R: Rng + ?Sized>(kind: Prompted, rng: &mut R) -> String {
    let intro = pick(&INTROS, rng);
    let (task, format) = match kind {
        Prompted::Grounded => (pick(&GROUNDED_TASKS, rng), pick(&SINGLE_FORMATS, rng)),
        Prompted::CompleteTwoStep => (pick(&COMPLETE_TWO_STEP_TASKS, rng), pick(&LIST_FORMATS, rng)),
        Prompted::CompleteEndToEnd => (pick(&COMPLETE_END_TO_END_TASKS, rng), pick(&LIST_FORMATS, rng)),
    };
    format!("{intro} {task} {format}")
}

pub(crate) fn problem<R: Rng + ?Sized>(
    framework_text: &str,
    format: GraphFormat,
    grounded_json: Option<&str>,
    rng: &mut R,
) -> String {
    let lead = pick(&PROBLEM_LEADS, rng).replace("{format}", format.display_name());
    let mut out = format!("{lead}\n{}", framework_text.trim_end());
    // Drawn even when unused so both variants consume the stream equally.
    let given = pick(&GIVEN_GROUNDED, rng);
    if let Some(json) = grounded_json {
        out.push('\n');
        out.push_str(&given.replace("{json}", json));
    }
    out
}

fn pick<'a, R: Rng + ?Sized>(pool: &[&'a str], rng: &mut R) -> &'a str {
    pool.choose(rng).expect("template pools are non-empty")
}

/// `1`, `1 and 3`, `1, 3 and 5`.
pub(crate) fn list(args: &[Argument]) -> String {
    match args {
        [] => "none".to_string(),
        [a] => a.to_string(),
        [init @ .., last] => {
            let head: Vec<String> = init.iter().map(|a| a.to_string()).collect();
            format!("{} and {last}", head.join(", "))
        }
    }
}

pub(crate) fn set(args: &[Argument]) -> String {
    let items: Vec<String> = args.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn be(args: &[Argument]) -> &'static str {
    if args.len() == 1 {
        "is"
    } else {
        "are"
    }
}

fn fill(template: &str, a: Argument, by: &[Argument]) -> String {
    let (s, pl) = if by.len() == 1 { ("s", "") } else { ("", "s") };
    template
        .replace("{a}", &a.to_string())
        .replace("{by}", &list(by))
        .replace("{be}", be(by))
        .replace("{s}", s)
        .replace("{pl}", pl)
}

const INIT_ARG: [&str; 3] = [
    "Argument {a} is not attacked, so label it IN.",
    "No argument attacks {a}, so {a} is labelled IN.",
    "{a} has no attackers, so we assign IN to {a}.",
];
const INIT_NONE: [&str; 3] = [
    "Every argument is attacked by some argument, so no argument is labelled IN at the start.",
    "There are no unattacked arguments, so the initial IN set is empty.",
    "No argument is free of attackers, so we start with nothing labelled IN.",
];
const OUT_ARG: [&str; 3] = [
    "Argument {a} is attacked by {by}, which {be} labelled IN, so label {a} OUT.",
    "{a} is attacked by the IN argument{pl} {by}, so {a} is labelled OUT.",
    "Since {by} {be} IN and attack{s} {a}, we assign OUT to {a}.",
];
const IN_ARG: [&str; 3] = [
    "All attackers of {a} ({by}) are labelled OUT, so label {a} IN.",
    "{a} is attacked only by {by}, which {be} OUT, so {a} is labelled IN.",
    "Every argument attacking {a} is OUT ({by}), so we assign IN to {a}.",
];
const UNDEC_ARG: [&str; 3] = [
    "Argument {a} is still unlabelled, so label it UNDEC.",
    "{a} can be labelled neither IN nor OUT, so it is UNDEC.",
    "No round labels {a}, so we assign UNDEC to {a}.",
];
const STEP_HEADS: [[&str; 3]; 4] = [
    [
        "Step 1: label the unattacked arguments IN.",
        "Step 1: find the arguments that are not attacked.",
        "Step 1: initialise the IN set with the unattacked arguments.",
    ],
    [
        "Step {k}: label OUT every unlabelled argument attacked by an IN argument.",
        "Step {k}: find unlabelled arguments with an IN attacker.",
        "Step {k}: arguments attacked by IN arguments become OUT.",
    ],
    [
        "Step {k}: label IN every unlabelled argument whose attackers are all OUT.",
        "Step {k}: find unlabelled arguments all of whose attackers are OUT.",
        "Step {k}: arguments defended by the current IN set become IN.",
    ],
    [
        "Step {k}: no more arguments can be labelled IN or OUT, so the rest become UNDEC.",
        "Step {k}: nothing changes any more, so every unlabelled argument is UNDEC.",
        "Step {k}: the remaining arguments stay undecided.",
    ],
];
const STATES: [&str; 3] = [
    "Now IN = {in} and OUT = {out}.",
    "Current state: IN = {in}, OUT = {out}.",
    "So far IN = {in} and OUT = {out}.",
];
const STABLE_END: [&str; 3] = [
    "Neither an IN round nor an OUT round changes anything, and every argument is labelled.",
    "No further argument can be labelled, and no argument is left unlabelled.",
    "The labelling cannot be extended any further and every argument already has a label.",
];
const GROUNDED_RESULT: [&str; 3] = [
    "Therefore, the grounded labelling is {json}",
    "So the grounded labelling is: {json}",
    "The grounded labelling is therefore {json}",
];

fn with_label(snapshot: &Snapshot, label: Label) -> Vec<Argument> {
    snapshot
        .iter()
        .filter(|(_, l)| **l == Some(label))
        .map(|(&a, _)| a)
        .collect()
}

fn state_line<R: Rng + ?Sized>(snapshot: &Snapshot, rng: &mut R) -> String {
    pick(&STATES, rng)
        .replace("{in}", &set(&with_label(snapshot, Label::In)))
        .replace("{out}", &set(&with_label(snapshot, Label::Out)))
}

fn step_lines<R: Rng + ?Sized>(step: &TraceStep, number: usize, rng: &mut R) -> Vec<String> {
    let head_pool = match step.kind {
        StepKind::Init => 0,
        StepKind::OutStep => 1,
        StepKind::InStep => 2,
        _ => 3,
    };
    let mut lines = vec![pick(&STEP_HEADS[head_pool], rng).replace("{k}", &number.to_string())];
    let (per_arg, unattacked) = match step.kind {
        StepKind::Init => (pick(&INIT_ARG, rng), pick(&INIT_ARG, rng)),
        StepKind::OutStep => (pick(&OUT_ARG, rng), pick(&OUT_ARG, rng)),
        StepKind::InStep => (pick(&IN_ARG, rng), pick(&INIT_ARG, rng)),
        _ => (pick(&UNDEC_ARG, rng), pick(&UNDEC_ARG, rng)),
    };
    if step.kind == StepKind::Init && step.affected.is_empty() {
        lines.push(pick(&INIT_NONE, rng).to_string());
    }
    for &a in &step.affected {
        let by = step.justification.get(&a).map(Vec::as_slice).unwrap_or(&[]);
        let template = if step.kind == StepKind::InStep && by.is_empty() {
            unattacked
        } else {
            per_arg
        };
        lines.push(fill(template, a, by));
    }
    if step.kind != StepKind::UndecClose {
        lines.push(state_line(&step.snapshot, rng));
    }
    lines
}

/// Narrates a grounded derivation, without the closing answer line.
pub(crate) fn grounded_narration<R: Rng + ?Sized>(trace: &DerivationTrace, rng: &mut R) -> Vec<String> {
    let mut lines = Vec::new();
    for (k, step) in trace.steps.iter().enumerate() {
        lines.extend(step_lines(step, k + 1, rng));
    }
    if trace.steps.last().is_some_and(|s| s.kind != StepKind::UndecClose) {
        lines.push(pick(&STABLE_END, rng).to_string());
    }
    lines
}

pub(crate) fn grounded_explanation<R: Rng + ?Sized>(trace: &DerivationTrace, answer: &str, rng: &mut R) -> String {
    let mut lines = grounded_narration(trace, rng);
    lines.push(pick(&GROUNDED_RESULT, rng).replace("{json}", answer));
    lines.join("\n")
}

fn labelling_text(l: &Labelling) -> String {
    format!(
        "IN = {}, OUT = {}, UNDEC = {}",
        set(&l.with_label(Label::In)),
        set(&l.with_label(Label::Out)),
        set(&l.with_label(Label::Undec))
    )
}

const GIVEN_START: [&str; 3] = [
    "The grounded labelling is given: {labelling}.",
    "We start from the provided grounded labelling {labelling}.",
    "From the problem, the grounded labelling is {labelling}.",
];
const COMPUTE_START: [&str; 3] = [
    "First we compute the grounded labelling.",
    "We begin by deriving the grounded labelling.",
    "The grounded labelling is the starting point, so we compute it first.",
];
const COMPUTED: [&str; 3] = [
    "The grounded labelling is {labelling}.",
    "This gives the grounded labelling {labelling}.",
    "So the grounded labelling is {labelling}.",
];
const NOTHING_OPEN: [&str; 3] = [
    "No argument is UNDEC in the grounded labelling, so it is the only complete labelling.",
    "The grounded labelling leaves nothing undecided, so no other complete labelling exists.",
    "Every argument is already IN or OUT, so the grounded labelling is the unique complete labelling.",
];
const OPEN: [&str; 3] = [
    "Every complete labelling keeps the IN and OUT arguments of the grounded labelling, so only {undec} can change. We infer each complete labelling and then verify it.",
    "Only the UNDEC arguments {undec} may be relabelled IN or OUT. We propose each candidate and check it argument by argument.",
    "Complete labellings differ from the grounded one only on {undec}. For each candidate we check that every label is legal.",
];
const PROPOSE: [&str; 3] = [
    "Candidate {i}: {labelling}.",
    "Labelling {i}: {labelling}.",
    "Consider labelling {i}: {labelling}.",
];
const UNCHANGED: [&str; 3] = [
    "This is the grounded labelling itself.",
    "It keeps every grounded label.",
    "Nothing is changed from the grounded labelling.",
];
const CHANGED: [&str; 3] = [
    "It relabels {ins} to IN and {outs} to OUT.",
    "Compared with the grounded labelling, {ins} become{si} IN and {outs} become{so} OUT.",
    "Here {ins} move{si} to IN and {outs} move{so} to OUT.",
];
const VERIFY_IN: [&str; 3] = [
    "{a} is IN and all its attackers ({by}) are OUT, so it is legally IN.",
    "{a} is IN; its attacker{pl} {by} {be} OUT, which is legal.",
    "{a}: IN, every attacker ({by}) is OUT, legal.",
];
const VERIFY_IN_FREE: [&str; 3] = [
    "{a} is IN and is not attacked, so it is legally IN.",
    "{a} is IN with no attackers, which is legal.",
    "{a}: IN, unattacked, legal.",
];
const VERIFY_OUT: [&str; 3] = [
    "{a} is OUT and is attacked by {by}, which {be} IN, so it is legally OUT.",
    "{a} is OUT; its attacker{pl} {by} {be} IN, which is legal.",
    "{a}: OUT, attacked by IN argument{pl} {by}, legal.",
];
const VERIFY_UNDEC: [&str; 3] = [
    "{a} is UNDEC: no attacker is IN and {by} {be} UNDEC, so it is legally UNDEC.",
    "{a} is UNDEC; its attacker{pl} {by} {be} UNDEC and none is IN, which is legal.",
    "{a}: UNDEC, undecided attacker{pl} {by}, no IN attacker, legal.",
];
const VERIFIED: [&str; 3] = [
    "Every argument is legally labelled, so labelling {i} is complete.",
    "All labels are legal, hence labelling {i} is a complete labelling.",
    "No argument is illegally labelled, so labelling {i} is complete.",
];
const REJECTED: [&str; 3] = [
    "Some argument is illegally labelled, so labelling {i} is not complete.",
    "Not every label is legal, so labelling {i} is rejected.",
    "Labelling {i} has an illegal label and is not complete.",
];
const COMPLETE_RESULT: [&str; 3] = [
    "Therefore, the complete labellings are {json}",
    "So the complete labellings are: {json}",
    "The complete labellings are therefore {json}",
];

fn verify_lines<R: Rng + ?Sized>(candidate: &Labelling, verify: &TraceStep, i: usize, rng: &mut R) -> Vec<String> {
    let templates = [
        pick(&VERIFY_IN, rng),
        pick(&VERIFY_IN_FREE, rng),
        pick(&VERIFY_OUT, rng),
        pick(&VERIFY_UNDEC, rng),
    ];
    let mut lines = Vec::new();
    let mut legal = true;
    for &a in &verify.affected {
        let attackers = verify.justification.get(&a).map(Vec::as_slice).unwrap_or(&[]);
        let label = candidate.label(a);
        // OUT cites its IN attackers, UNDEC its undecided ones.
        let cited = |l: Label| -> Vec<Argument> {
            attackers
                .iter()
                .copied()
                .filter(|&b| candidate.label(b) == Some(l))
                .collect()
        };
        let (template, by) = match label {
            Some(Label::In) if attackers.is_empty() => (templates[1], Vec::new()),
            Some(Label::In) => (templates[0], attackers.to_vec()),
            Some(Label::Out) => (templates[2], cited(Label::In)),
            _ => (templates[3], cited(Label::Undec)),
        };
        let by = by.as_slice();
        if let Some(report) = &verify.report {
            legal &= report.verdicts.get(&a).is_none_or(|v| v.is_legal());
        }
        lines.push(fill(template, a, by));
    }
    let closing = if legal { &VERIFIED } else { &REJECTED };
    lines.push(pick(closing, rng).replace("{i}", &i.to_string()));
    lines
}

pub(crate) fn complete_explanation<R: Rng + ?Sized>(
    grounded: &(Labelling, DerivationTrace),
    completes: &[(Labelling, DerivationTrace)],
    given_grounded: bool,
    answer: &str,
    rng: &mut R,
) -> String {
    let (g, g_trace) = grounded;
    let mut lines = Vec::new();
    if given_grounded {
        lines.push(pick(&GIVEN_START, rng).replace("{labelling}", &labelling_text(g)));
    } else {
        lines.push(pick(&COMPUTE_START, rng).to_string());
        lines.extend(grounded_narration(g_trace, rng));
        lines.push(pick(&COMPUTED, rng).replace("{labelling}", &labelling_text(g)));
    }
    let undec = g.with_label(Label::Undec);
    if undec.is_empty() {
        lines.push(pick(&NOTHING_OPEN, rng).to_string());
    } else {
        lines.push(pick(&OPEN, rng).replace("{undec}", &list(&undec)));
    }
    for (i, (candidate, trace)) in completes.iter().enumerate() {
        let i = i + 1;
        lines.push(
            pick(&PROPOSE, rng)
                .replace("{i}", &i.to_string())
                .replace("{labelling}", &labelling_text(candidate)),
        );
        let changed = trace.steps.iter().find(|s| s.kind == StepKind::Propose);
        let changed = changed.map(|s| s.affected.clone()).unwrap_or_default();
        if changed.is_empty() {
            lines.push(pick(&UNCHANGED, rng).to_string());
        } else {
            let to = |label| -> Vec<Argument> {
                changed
                    .iter()
                    .copied()
                    .filter(|&a| candidate.label(a) == Some(label))
                    .collect()
            };
            let (ins, outs) = (to(Label::In), to(Label::Out));
            let verb_s = |v: &[Argument]| if v.len() == 1 { "s" } else { "" };
            lines.push(
                pick(&CHANGED, rng)
                    .replace("{ins}", &list(&ins))
                    .replace("{outs}", &list(&outs))
                    .replace("{si}", verb_s(&ins))
                    .replace("{so}", verb_s(&outs)),
            );
        }
        if let Some(verify) = trace.steps.iter().find(|s| s.kind == StepKind::Verify) {
            lines.extend(verify_lines(candidate, verify, i, rng));
        }
    }
    lines.push(pick(&COMPLETE_RESULT, rng).replace("{json}", answer));
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::random::rng_from;
    use crate::framework::Framework;
    use crate::semantics::{solve, solve_grounded};

    #[test]
    fn list_wording() {
        assert_eq!(list(&[4]), "4");
        assert_eq!(list(&[1, 3]), "1 and 3");
        assert_eq!(list(&[1, 3, 5]), "1, 3 and 5");
        assert_eq!(set(&[]), "{}");
        assert_eq!(set(&[2, 7]), "{2, 7}");
    }

    #[test]
    fn chain_narration_mentions_each_round() {
        let f = Framework::new([1, 2, 3], [(1, 2), (2, 3)]).unwrap();
        let (_, trace) = solve_grounded(&f);
        let text = grounded_explanation(&trace, "{}", &mut rng_from(0));
        assert!(text.contains("Step 1"), "{text}");
        assert!(text.contains("Step 3"), "{text}");
        assert!(text.lines().count() >= 7);
        assert!(text.ends_with("{}"));
    }

    #[test]
    fn complete_narration_verifies_every_candidate() {
        let f = Framework::new([1, 2], [(1, 2), (2, 1)]).unwrap();
        let sol = solve(&f);
        let text = complete_explanation(&sol.grounded, &sol.completes, true, "[]", &mut rng_from(1));
        for i in 1..=3 {
            assert!(text.contains(&format!(" {i}")), "{text}");
        }
        assert!(text.matches("legal").count() >= 6, "{text}");
    }

    #[test]
    fn instruction_pools_are_distinct() {
        for pool in [
            &INTROS,
            &GROUNDED_TASKS,
            &COMPLETE_TWO_STEP_TASKS,
            &COMPLETE_END_TO_END_TASKS,
            &SINGLE_FORMATS,
            &LIST_FORMATS,
        ] {
            let unique: std::collections::BTreeSet<_> = pool.iter().collect();
            assert_eq!(unique.len(), 5);
        }
    }
}
