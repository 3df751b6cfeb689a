use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::framework::{is_conflict_free, Argument, Framework, SemanticsKind};
use crate::graphio::{parse_answer, AnswerRecord};

pub type Extension = BTreeSet<Argument>;

/// One problem to score: the framework, the semantics, and the raw texts of
/// the k candidate answers.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionEntry {
    pub framework: Framework,
    pub semantics: SemanticsKind,
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictionSet {
    pub entries: Vec<PredictionEntry>,
}

impl PredictionSet {
    /// The common candidate count.
    pub fn k(&self) -> Result<usize, EvalError> {
        let Some(first) = self.entries.first() else {
            return Ok(0);
        };
        let k = first.candidates.len();
        match self.entries.iter().position(|e| e.candidates.len() != k) {
            Some(i) => Err(EvalError::Ragged {
                expected: k,
                found: self.entries[i].candidates.len(),
                problem: i,
            }),
            None if k == 0 => Err(EvalError::Ragged {
                expected: 1,
                found: 0,
                problem: 0,
            }),
            None => Ok(k),
        }
    }
}

/// The σ-extensions a candidate text states, or `None` if it has no
/// answer object.
///
/// Answers are read as lists of labellings. For preferred, only records
/// whose IN set is maximal among them count; for stable, only records
/// without UNDEC arguments. So a list of complete labellings scores against
/// all three of complete, preferred and stable.
pub fn candidate_extensions(text: &str, semantics: SemanticsKind) -> Option<Vec<Extension>> {
    let answer = parse_answer(text).ok()?;
    let records: Vec<&AnswerRecord> = answer.labellings.iter().collect();
    let ins: Vec<Extension> = records.iter().map(|r| r.extension()).collect();
    let kept: BTreeSet<Extension> = match semantics {
        SemanticsKind::Grounded | SemanticsKind::Complete => ins.into_iter().collect(),
        SemanticsKind::Preferred => ins
            .iter()
            .filter(|a| !ins.iter().any(|b| b.is_superset(a) && b != *a))
            .cloned()
            .collect(),
        SemanticsKind::Stable => records
            .iter()
            .zip(ins)
            .filter(|(r, _)| r.undecs.is_empty())
            .map(|(_, e)| e)
            .collect(),
    };
    Some(kept.into_iter().collect())
}

fn same_sets(a: &[Extension], b: &[Extension]) -> bool {
    a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>()
}

fn parsed(entry: &PredictionEntry) -> Vec<Option<Vec<Extension>>> {
    entry
        .candidates
        .iter()
        .map(|c| candidate_extensions(c, entry.semantics))
        .collect()
}

fn check_aligned(preds: &PredictionSet, truth: &[Vec<Extension>]) -> Result<(), EvalError> {
    if preds.entries.len() != truth.len() {
        return Err(EvalError::Alignment(format!(
            "{} predictions against {} ground-truth problems",
            preds.entries.len(),
            truth.len()
        )));
    }
    Ok(())
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Share of problems whose first candidate states exactly the true
/// extension set. Unparseable candidates count as wrong.
pub fn extension_accuracy(preds: &PredictionSet, truth: &[Vec<Extension>]) -> Result<f64, EvalError> {
    check_aligned(preds, truth)?;
    Ok(mean(preds.entries.iter().zip(truth).map(|(e, t)| {
        let first = e.candidates.first().and_then(|c| candidate_extensions(c, e.semantics));
        f64::from(u8::from(first.is_some_and(|p| same_sets(&p, t))))
    })))
}

/// Share of problems where at least one of the k candidates is exact.
pub fn pass_at_k(preds: &PredictionSet, truth: &[Vec<Extension>]) -> Result<f64, EvalError> {
    check_aligned(preds, truth)?;
    preds.k()?;
    Ok(mean(preds.entries.iter().zip(truth).map(|(e, t)| {
        let hit = parsed(e).into_iter().flatten().any(|p| same_sets(&p, t));
        f64::from(u8::from(hit))
    })))
}

/// Credulous and skeptical acceptance of each argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceStatus {
    pub arguments: Vec<Argument>,
    pub credulous: Vec<bool>,
    pub skeptical: Vec<bool>,
}

/// Acceptance over `extensions`. With no extensions at all nothing is
/// accepted, skeptically or credulously.
pub fn acceptance_status(extensions: &[Extension], args: &[Argument]) -> AcceptanceStatus {
    let credulous = args.iter().map(|a| extensions.iter().any(|e| e.contains(a))).collect();
    let skeptical = args
        .iter()
        .map(|a| !extensions.is_empty() && extensions.iter().all(|e| e.contains(a)))
        .collect();
    AcceptanceStatus {
        arguments: args.to_vec(),
        credulous,
        skeptical,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Confusion {
    tp: u64,
    tn: u64,
    fp: u64,
    fn_: u64,
}

impl Confusion {
    fn add(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (false, false) => self.tn += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    /// Zero denominator: 1 if there is no error at all, else 0.
    fn mcc(&self) -> f64 {
        let (tp, tn, fp, fn_) = (self.tp as f64, self.tn as f64, self.fp as f64, self.fn_ as f64);
        let denominator = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
        if denominator == 0.0 {
            return if self.fp == 0 && self.fn_ == 0 { 1.0 } else { 0.0 };
        }
        (tp * tn - fp * fn_) / denominator
    }
}

/// Matthews correlation pooled over every (problem, argument) pair, for
/// credulous and for skeptical acceptance.
pub fn mcc_scores(predicted: &[AcceptanceStatus], actual: &[AcceptanceStatus]) -> Result<(f64, f64), EvalError> {
    if predicted.len() != actual.len() {
        return Err(EvalError::Alignment(format!(
            "{} predicted statuses against {} true ones",
            predicted.len(),
            actual.len()
        )));
    }
    let mut credulous = Confusion::default();
    let mut skeptical = Confusion::default();
    for (i, (p, t)) in predicted.iter().zip(actual).enumerate() {
        if p.arguments != t.arguments {
            return Err(EvalError::Alignment(format!(
                "problem {i} has different argument lists"
            )));
        }
        for j in 0..p.arguments.len() {
            credulous.add(p.credulous[j], t.credulous[j]);
            skeptical.add(p.skeptical[j], t.skeptical[j]);
        }
    }
    Ok((credulous.mcc(), skeptical.mcc()))
}

/// Acceptance predicted by the first candidate of each problem.
pub fn predicted_status(preds: &PredictionSet) -> Vec<AcceptanceStatus> {
    preds
        .entries
        .iter()
        .map(|e| {
            let first = e.candidates.first().and_then(|c| candidate_extensions(c, e.semantics));
            acceptance_status(&first.unwrap_or_default(), e.framework.arguments())
        })
        .collect()
}

/// CFP and ALSE with the extensions of all k candidates pooled. A problem
/// with nothing pooled scores 1 on both only if it truly has no extension
/// and some candidate parsed, i.e. the empty answer was stated.
pub fn conflict_metrics(preds: &PredictionSet, truth: &[Vec<Extension>]) -> Result<(f64, f64), EvalError> {
    check_aligned(preds, truth)?;
    let scores: Vec<(f64, f64)> = preds
        .entries
        .iter()
        .zip(truth)
        .map(|(e, t)| {
            let candidates = parsed(e);
            let answered = candidates.iter().any(Option::is_some);
            let pooled: BTreeSet<Extension> = candidates.into_iter().flatten().flatten().collect();
            if pooled.is_empty() {
                let s = f64::from(u8::from(answered && t.is_empty()));
                return (s, s);
            }
            let free = pooled
                .iter()
                .filter(|s| is_conflict_free(&e.framework, s).unwrap_or(false))
                .count();
            let valid = pooled.iter().any(|s| t.contains(s));
            (free as f64 / pooled.len() as f64, f64::from(u8::from(valid)))
        })
        .collect();
    Ok((mean(scores.iter().map(|s| s.0)), mean(scores.iter().map(|s| s.1))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(items: &[Argument]) -> Extension {
        items.iter().copied().collect()
    }

    fn pair() -> Framework {
        Framework::new([1, 2], [(1, 2), (2, 1)]).unwrap()
    }

    fn entry(f: Framework, semantics: SemanticsKind, candidates: &[&str]) -> PredictionEntry {
        PredictionEntry {
            framework: f,
            semantics,
            candidates: candidates.iter().map(|c| c.to_string()).collect(),
        }
    }

    #[test]
    fn exact_match_and_missing_extension() {
        let chain = Framework::new([1, 2, 3], [(1, 2), (2, 3)]).unwrap();
        let preds = PredictionSet {
            entries: vec![entry(
                chain,
                SemanticsKind::Grounded,
                &[r#"{"IN":[1,3],"OUT":[2],"UNDEC":[]}"#],
            )],
        };
        assert_eq!(extension_accuracy(&preds, &[vec![ext(&[1, 3])]]).unwrap(), 1.0);

        let text = r#"[{"IN":[],"OUT":[],"UNDEC":[1,2]},{"IN":[1],"OUT":[2],"UNDEC":[]}]"#;
        let preds = PredictionSet {
            entries: vec![entry(pair(), SemanticsKind::Complete, &[text])],
        };
        let truth = vec![vec![ext(&[]), ext(&[1]), ext(&[2])]];
        assert_eq!(extension_accuracy(&preds, &truth).unwrap(), 0.0);
    }

    #[test]
    fn pass_at_k_rules() {
        let right = r#"{"IN":[1],"OUT":[2],"UNDEC":[]}"#;
        let wrong = r#"{"IN":[2],"OUT":[1],"UNDEC":[]}"#;
        let truth = vec![vec![ext(&[1])]];
        let preds = PredictionSet {
            entries: vec![entry(pair(), SemanticsKind::Grounded, &[wrong, right])],
        };
        assert_eq!(pass_at_k(&preds, &truth).unwrap(), 1.0);
        assert_eq!(extension_accuracy(&preds, &truth).unwrap(), 0.0);

        let preds = PredictionSet {
            entries: vec![entry(pair(), SemanticsKind::Grounded, &["no idea", "{oops"])],
        };
        assert_eq!(pass_at_k(&preds, &truth).unwrap(), 0.0);

        let ragged = PredictionSet {
            entries: vec![
                entry(pair(), SemanticsKind::Grounded, &[right]),
                entry(pair(), SemanticsKind::Grounded, &[right, wrong]),
            ],
        };
        assert!(matches!(
            pass_at_k(&ragged, &[truth[0].clone(), truth[0].clone()]),
            Err(EvalError::Ragged { .. })
        ));
    }

    #[test]
    fn acceptance_of_mutual_pair() {
        let s = acceptance_status(&[ext(&[]), ext(&[1]), ext(&[2])], &[1, 2]);
        assert_eq!(s.credulous, vec![true, true]);
        assert_eq!(s.skeptical, vec![false, false]);
        let none = acceptance_status(&[], &[1, 2]);
        assert_eq!(none.skeptical, vec![false, false]);
    }

    #[test]
    fn mcc_extremes() {
        let t = AcceptanceStatus {
            arguments: vec![1, 2, 3, 4],
            credulous: vec![true, false, true, false],
            skeptical: vec![true, false, false, false],
        };
        let complement = AcceptanceStatus {
            arguments: t.arguments.clone(),
            credulous: t.credulous.iter().map(|b| !b).collect(),
            skeptical: t.skeptical.iter().map(|b| !b).collect(),
        };
        let flat = AcceptanceStatus {
            arguments: t.arguments.clone(),
            credulous: vec![true; 4],
            skeptical: vec![false; 4],
        };
        assert_eq!(
            mcc_scores(std::slice::from_ref(&t), std::slice::from_ref(&t)).unwrap(),
            (1.0, 1.0)
        );
        let (c, s) = mcc_scores(&[complement], std::slice::from_ref(&t)).unwrap();
        assert!((c + 1.0).abs() < 1e-12 && (s + 1.0).abs() < 1e-12);
        assert_eq!(mcc_scores(&[flat], std::slice::from_ref(&t)).unwrap(), (0.0, 0.0));
        assert!(mcc_scores(std::slice::from_ref(&t), &[]).is_err());
    }

    #[test]
    fn conflict_freeness_and_validity() {
        let preds = PredictionSet {
            entries: vec![entry(
                pair(),
                SemanticsKind::Complete,
                &[r#"[{"IN":[1],"OUT":[2],"UNDEC":[]},{"IN":[1,2],"OUT":[],"UNDEC":[]}]"#],
            )],
        };
        let truth = vec![vec![ext(&[]), ext(&[1]), ext(&[2])]];
        assert_eq!(conflict_metrics(&preds, &truth).unwrap(), (0.5, 1.0));

        // Correctly stating that no stable extension exists.
        let cycle = Framework::new([1, 2, 3], [(1, 2), (2, 3), (3, 1)]).unwrap();
        let preds = PredictionSet {
            entries: vec![entry(
                cycle.clone(),
                SemanticsKind::Stable,
                &[r#"[{"IN":[],"OUT":[],"UNDEC":[1,2,3]}]"#],
            )],
        };
        assert_eq!(conflict_metrics(&preds, &[vec![]]).unwrap(), (1.0, 1.0));
        let silent = PredictionSet {
            entries: vec![entry(cycle, SemanticsKind::Stable, &["nothing"])],
        };
        assert_eq!(conflict_metrics(&silent, &[vec![]]).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn filters_complete_lists() {
        let text =
            r#"[{"IN":[],"OUT":[],"UNDEC":[1,2]},{"IN":[1],"OUT":[2],"UNDEC":[]},{"IN":[2],"OUT":[1],"UNDEC":[]}]"#;
        assert_eq!(
            candidate_extensions(text, SemanticsKind::Preferred).unwrap(),
            vec![ext(&[1]), ext(&[2])]
        );
        assert_eq!(
            candidate_extensions(text, SemanticsKind::Stable).unwrap(),
            vec![ext(&[1]), ext(&[2])]
        );
        assert_eq!(candidate_extensions(text, SemanticsKind::Complete).unwrap().len(), 3);
        assert_eq!(
            candidate_extensions("[]", SemanticsKind::Stable).unwrap(),
            Vec::<Extension>::new()
        );
    }
}
