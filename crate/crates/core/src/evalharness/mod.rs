//! Scoring predicted answers: exact-match accuracy, Pass@k, MCC over
//! credulous and skeptical acceptance, CFP and ALSE.

mod metrics;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufRead, BufReader};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datagen::{read_samples, DataGenError, DatasetSample, TaskKind};
use crate::framework::SemanticsKind;
use crate::semantics::solve;

pub use metrics::{
    acceptance_status, candidate_extensions, conflict_metrics, extension_accuracy, mcc_scores, pass_at_k,
    predicted_status, AcceptanceStatus, Extension, PredictionEntry, PredictionSet,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("prediction file holds no records")]
    EmptyPredictions,
    #[error("prediction id `{0}` does not occur in the dataset")]
    IdMismatch(String),
    #[error("prediction id `{0}` occurs twice")]
    DuplicatePrediction(String),
    #[error("problem {problem} has {found} candidates, expected {expected}")]
    Ragged {
        expected: usize,
        found: usize,
        problem: usize,
    },
    #[error("misaligned inputs: {0}")]
    Alignment(String),
    #[error("{file} line {line}: {message}")]
    Record { file: String, line: usize, message: String },
    #[error(transparent)]
    DataGen(#[from] DataGenError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type ScoreTable = BTreeMap<SemanticsKind, SemanticsScores>;

/// One line of a prediction file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticsScores {
    pub problems: usize,
    /// Problems whose first candidate holds no answer object.
    pub parse_failures: usize,
    /// Problems without any prediction record.
    pub missing: usize,
    pub acc: f64,
    pub pass_at_k: f64,
    pub mcc_credulous: f64,
    pub mcc_skeptical: f64,
    pub cfp: f64,
    pub alse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub dataset: String,
    pub predictions: String,
    pub k: usize,
    pub problems: usize,
    pub missing: Vec<String>,
    pub semantics: BTreeMap<SemanticsKind, SemanticsScores>,
}

/// The semantics a sample's answer is scored under.
pub fn semantics_of(task: TaskKind) -> &'static [SemanticsKind] {
    match task {
        TaskKind::Grounded => &[SemanticsKind::Grounded],
        TaskKind::Complete => &[SemanticsKind::Complete, SemanticsKind::Preferred, SemanticsKind::Stable],
    }
}

/// True extensions for every entry, computed by the solver.
pub fn ground_truth(preds: &PredictionSet) -> Vec<Vec<Extension>> {
    preds
        .entries
        .par_iter()
        .map(|e| {
            let mut out: Vec<Extension> = solve(&e.framework)
                .filter(e.semantics)
                .iter()
                .map(|l| l.in_set())
                .collect();
            out.sort();
            out
        })
        .collect()
}

/// Scores one semantics. `missing` is only reported, the entries for
/// missing predictions must already be present with empty candidates.
pub fn score(preds: &PredictionSet, truth: &[Vec<Extension>], missing: usize) -> Result<SemanticsScores, EvalError> {
    let parse_failures = preds
        .entries
        .iter()
        .filter(|e| {
            e.candidates
                .first()
                .and_then(|c| candidate_extensions(c, e.semantics))
                .is_none()
        })
        .count();
    let actual: Vec<AcceptanceStatus> = preds
        .entries
        .iter()
        .zip(truth)
        .map(|(e, t)| acceptance_status(t, e.framework.arguments()))
        .collect();
    let (mcc_credulous, mcc_skeptical) = mcc_scores(&predicted_status(preds), &actual)?;
    let (cfp, alse) = conflict_metrics(preds, truth)?;
    Ok(SemanticsScores {
        problems: preds.entries.len(),
        parse_failures,
        missing,
        acc: extension_accuracy(preds, truth)?,
        pass_at_k: pass_at_k(preds, truth)?,
        mcc_credulous,
        mcc_skeptical,
        cfp,
        alse,
    })
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRecord>, EvalError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| EvalError::Record {
            file: path.display().to_string(),
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Predictions that repeat each sample's own answer.
pub fn reference_predictions(samples: &[DatasetSample]) -> Vec<PredictionRecord> {
    samples
        .iter()
        .map(|s| PredictionRecord {
            id: s.id.clone(),
            candidates: vec![s.answer.clone()],
        })
        .collect()
}

/// Scores `predictions` against `samples`. `k` defaults to the candidate
/// count of the first prediction.
pub fn evaluate(
    samples: &[DatasetSample],
    predictions: &[PredictionRecord],
    k: Option<usize>,
) -> Result<(usize, Vec<String>, ScoreTable), EvalError> {
    let first = predictions.first().ok_or(EvalError::EmptyPredictions)?;
    let k = k.unwrap_or(first.candidates.len());

    let known: HashMap<&str, usize> = samples.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
    let mut by_sample: HashMap<usize, &PredictionRecord> = HashMap::new();
    for (i, p) in predictions.iter().enumerate() {
        let &index = known
            .get(p.id.as_str())
            .ok_or_else(|| EvalError::IdMismatch(p.id.clone()))?;
        if p.candidates.len() != k {
            return Err(EvalError::Ragged {
                expected: k,
                found: p.candidates.len(),
                problem: i,
            });
        }
        if by_sample.insert(index, p).is_some() {
            return Err(EvalError::DuplicatePrediction(p.id.clone()));
        }
    }

    let mut missing = Vec::new();
    let mut groups: BTreeMap<SemanticsKind, (PredictionSet, usize)> = BTreeMap::new();
    for (i, s) in samples.iter().enumerate() {
        let candidates = match by_sample.get(&i) {
            Some(p) => p.candidates.clone(),
            None => {
                missing.push(s.id.clone());
                vec![String::new(); k]
            }
        };
        for &semantics in semantics_of(s.meta.task) {
            let (set, absent) = groups.entry(semantics).or_default();
            set.entries.push(PredictionEntry {
                framework: s.meta.framework.clone(),
                semantics,
                candidates: candidates.clone(),
            });
            *absent += usize::from(!by_sample.contains_key(&i));
        }
    }

    let mut scores = BTreeMap::new();
    for (semantics, (set, absent)) in groups {
        let truth = ground_truth(&set);
        scores.insert(semantics, score(&set, &truth, absent)?);
    }
    Ok((k, missing, scores))
}

/// Reads a dataset file and a prediction file and scores every semantics
/// present in the dataset.
pub fn evaluate_run(dataset: &Path, predictions: &Path, k: Option<usize>) -> Result<EvaluationReport, EvalError> {
    let samples = read_samples(dataset)?;
    let records = read_predictions(predictions)?;
    let (k, missing, semantics) = evaluate(&samples, &records, k)?;
    Ok(EvaluationReport {
        dataset: dataset.display().to_string(),
        predictions: predictions.display().to_string(),
        k,
        problems: samples.len(),
        missing,
        semantics,
    })
}

impl EvaluationReport {
    /// Accuracy and MCC per semantics in one row, then a second table with
    /// Pass@k, CFP, ALSE and counts.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let cell = |s: Option<&SemanticsScores>, f: fn(&SemanticsScores) -> f64| {
            s.map(|s| format!("{:.2}", f(s))).unwrap_or_else(|| "-".into())
        };
        let get = |k| self.semantics.get(&k);
        let grd = get(SemanticsKind::Grounded);
        let grd_mcc = match grd {
            Some(s) if (s.mcc_credulous - s.mcc_skeptical).abs() < 5e-3 => format!("{:.2}", s.mcc_skeptical),
            Some(s) => format!("{:.2}/{:.2}", s.mcc_skeptical, s.mcc_credulous),
            None => "-".into(),
        };
        let _ = writeln!(
            out,
            "{:<10} | {:^16} | {:^22} | {:^22} | {:^22}",
            "", "grd", "com", "prf", "stb"
        );
        let _ = writeln!(
            out,
            "{:<10} | {:>6} {:>9} | {:>6} {:>7} {:>7} | {:>6} {:>7} {:>7} | {:>6} {:>7} {:>7}",
            "", "ACC", "MCC_s,c", "ACC", "MCC_s", "MCC_c", "ACC", "MCC_s", "MCC_c", "ACC", "MCC_s", "MCC_c"
        );
        let mut row = format!("{:<10} | {:>6} {:>9}", "run", cell(grd, |s| s.acc), grd_mcc);
        for kind in [SemanticsKind::Complete, SemanticsKind::Preferred, SemanticsKind::Stable] {
            let s = get(kind);
            let _ = write!(
                row,
                " | {:>6} {:>7} {:>7}",
                cell(s, |s| s.acc),
                cell(s, |s| s.mcc_skeptical),
                cell(s, |s| s.mcc_credulous)
            );
        }
        let _ = writeln!(out, "{row}");
        out.push('\n');
        let _ = writeln!(
            out,
            "{:<4} {:>8} {:>6} {:>6} {:>8} {:>8} {:>8}",
            "",
            format!("Pass@{}", self.k),
            "CFP",
            "ALSE",
            "N",
            "unparsed",
            "missing"
        );
        for (kind, s) in &self.semantics {
            let _ = writeln!(
                out,
                "{:<4} {:>8.2} {:>6.2} {:>6.2} {:>8} {:>8} {:>8}",
                kind.short_name(),
                s.pass_at_k,
                s.cfp,
                s.alse,
                s.problems,
                s.parse_failures,
                s.missing
            );
        }
        out
    }

    /// Writes the report as JSON to `path` and the table next to it with a
    /// `.txt` extension.
    pub fn write(&self, path: &Path) -> Result<(), EvalError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        fs::write(path, json)?;
        fs::write(path.with_extension("txt"), self.render_table())?;
        Ok(())
    }
}
