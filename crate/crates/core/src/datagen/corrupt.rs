use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{index, SliceRandom};
use rand::Rng;

use rand_chacha::ChaCha8Rng;

use super::random::{derive_seed, rng_from};
use super::sample::{grounded_text, DatasetSample};
use super::{CorruptionConfig, DataGenError, TaskKind};
use crate::framework::{Argument, Framework, Label};
use crate::graphio::{serialize_answer, AnswerShape};
use crate::semantics::{resume, snapshot, solve_grounded, Phase, StepKind, TraceStep};

/// Whether `corrupt_sample` accepts this sample.
pub fn is_corruptible(sample: &DatasetSample) -> bool {
    sample.meta.task == TaskKind::Grounded && sample.explanation.is_some() && has_intermediate(&sample.meta.framework)
}

pub(crate) fn has_intermediate(framework: &Framework) -> bool {
    solve_grounded(framework).1.steps.iter().any(is_intermediate)
}

fn is_intermediate(step: &TraceStep) -> bool {
    matches!(step.kind, StepKind::Init | StepKind::InStep | StepKind::OutStep) && !step.affected.is_empty()
}

/// Tampers with one intermediate IN or OUT set of a grounded derivation and
/// continues the derivation from there.
///
/// One non-empty INIT, IN or OUT step is picked uniformly. Half of its
/// arguments, rounded up, are replaced by arguments drawn uniformly from
/// those that end up with a different label in the clean derivation. Since
/// later rounds never relabel an argument, such a replacement always changes
/// the answer. When too few exist, other arguments fill the gap. Later
/// rounds, the explanation and the answer are all recomputed from the
/// tampered state.
pub fn corrupt_sample<R: Rng + ?Sized>(sample: &DatasetSample, rng: &mut R) -> Result<DatasetSample, DataGenError> {
    if sample.meta.task != TaskKind::Grounded {
        return Err(DataGenError::NotCorruptible(format!(
            "{} is not a grounded task",
            sample.id
        )));
    }
    if sample.explanation.is_none() {
        return Err(DataGenError::NotCorruptible(format!(
            "{} has no explanation",
            sample.id
        )));
    }
    let f = &sample.meta.framework;
    let (clean, trace) = solve_grounded(f);
    let candidates: Vec<usize> = (0..trace.steps.len())
        .filter(|&k| is_intermediate(&trace.steps[k]))
        .collect();
    if candidates.is_empty() {
        return Err(DataGenError::NoIntermediateSet(sample.id.clone()));
    }
    let k = candidates[rng.random_range(0..candidates.len())];
    let original = &trace.steps[k];
    let old: Vec<Argument> = original.affected.clone();
    let m = old.len().div_ceil(2);

    let replaced: BTreeSet<usize> = index::sample(rng, old.len(), m).into_iter().collect();
    let kept: Vec<Argument> = (0..old.len())
        .filter(|i| !replaced.contains(i))
        .map(|i| old[i])
        .collect();
    // Replacements are wrong values: arguments that do not carry this
    // step's label in the clean result. Others only fill a short pool.
    let target = match original.kind {
        StepKind::OutStep => Label::Out,
        _ => Label::In,
    };
    let (wrong, right): (Vec<Argument>, Vec<Argument>) = f
        .arguments()
        .iter()
        .copied()
        .filter(|a| !old.contains(a))
        .partition(|&a| clean.label(a) != Some(target));
    let mut pool = Vec::with_capacity(f.len());
    for mut part in [wrong, right, replaced.iter().map(|&i| old[i]).collect()] {
        part.shuffle(rng);
        pool.extend(part);
    }
    let mut affected: Vec<Argument> = kept.into_iter().chain(pool.into_iter().take(m)).collect();
    affected.sort_unstable();

    let before: Vec<Option<Label>> = match k {
        0 => vec![None; f.len()],
        _ => trace.steps[k - 1].snapshot.values().copied().collect(),
    };
    let (wanted, next) = match target {
        Label::Out => (Label::In, Phase::In),
        _ => (Label::Out, Phase::Out),
    };
    let index_of = |a: Argument| f.arguments().binary_search(&a).expect("argument of the framework");
    let mut state = before.clone();
    for &a in &affected {
        state[index_of(a)] = Some(target);
    }
    let justification: BTreeMap<Argument, Vec<Argument>> = affected
        .iter()
        .map(|&a| {
            let by = if original.kind == StepKind::Init {
                Vec::new()
            } else {
                f.attackers_of(a)
                    .into_iter()
                    .filter(|&b| before[index_of(b)] == Some(wanted))
                    .collect()
            };
            (a, by)
        })
        .collect();

    let mut steps: Vec<TraceStep> = trace.steps[..k].to_vec();
    steps.push(TraceStep {
        kind: original.kind,
        affected,
        justification,
        snapshot: snapshot(f, &state),
        report: None,
    });
    let (labelling, tampered) = resume(f, state, steps, next);
    let answer = serialize_answer(&[labelling], AnswerShape::Single)?;
    let explanation = grounded_text(&tampered, &answer, sample.meta.seed);

    let mut out = sample.clone();
    out.answer = answer;
    out.explanation = Some(explanation);
    out.meta.corrupted = true;
    Ok(out)
}

/// Picks `⌊noise_ratio · total⌋` of the `eligible` indices, ascending.
pub(crate) fn select_corrupted(
    eligible: &[usize],
    total: usize,
    cfg: &CorruptionConfig,
) -> Result<Vec<usize>, DataGenError> {
    let wanted = (cfg.noise_ratio * total as f64).floor() as usize;
    if wanted == 0 {
        return Ok(Vec::new());
    }
    if eligible.len() < wanted {
        return Err(DataGenError::InsufficientCorruptible {
            wanted,
            available: eligible.len(),
        });
    }
    let mut rng = rng_from(derive_seed(cfg.seed, &[SELECTION_STREAM]));
    let mut chosen: Vec<usize> = index::sample(&mut rng, eligible.len(), wanted)
        .into_iter()
        .map(|i| eligible[i])
        .collect();
    chosen.sort_unstable();
    Ok(chosen)
}

const SELECTION_STREAM: u64 = u64::MAX;

/// Random stream for corrupting the sample at `index`.
pub(crate) fn corruption_rng(cfg: &CorruptionConfig, index: usize) -> ChaCha8Rng {
    rng_from(derive_seed(cfg.seed, &[index as u64]))
}

/// Corrupts exactly `⌊noise_ratio · len⌋` samples, chosen uniformly among
/// the corruptible ones. Returns the indices that were corrupted, ascending.
pub fn corrupt_dataset(samples: &mut [DatasetSample], cfg: &CorruptionConfig) -> Result<Vec<usize>, DataGenError> {
    cfg.validate()?;
    let eligible: Vec<usize> = (0..samples.len()).filter(|&i| is_corruptible(&samples[i])).collect();
    let chosen = select_corrupted(&eligible, samples.len(), cfg)?;
    for &i in &chosen {
        samples[i] = corrupt_sample(&samples[i], &mut corruption_rng(cfg, i))?;
    }
    Ok(chosen)
}
