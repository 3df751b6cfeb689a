use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::corrupt::{corrupt_sample, corruption_rng, has_intermediate, select_corrupted};
use super::random::{derive_seed, generate_random_af_with, rng_from};
use super::sample::{build_sample, DatasetSample};
use super::{CorruptionConfig, DataGenError, GenerationConfig, TaskKind};
use crate::framework::{Framework, SemanticsKind};
use crate::graphio::{serialize_framework, GraphFormat};
use crate::semantics::solve;

pub const TRAIN_FILE: &str = "train.jsonl";
pub const TEST_FILE: &str = "test.jsonl";
pub const MANIFEST_FILE: &str = "manifest.json";

const FRAMEWORK_STREAM: u64 = 0x4146;
const SAMPLE_STREAM: u64 = 0x5350;
const CHOICE_STREAM: u64 = 0;

/// Upper bound on draws per size, as a multiple of the frameworks wanted.
const DRAW_FACTOR: usize = 50;

pub const SEED_RULE: &str = "framework draws for size n use derive_seed(master_seed, [0x4146, n]); \
sample i of size n uses derive_seed(master_seed, [0x5350, n, i]); \
derive_seed(s, [a, b, ...]) = splitmix64(...splitmix64(splitmix64(s) ^ a) ^ b ...)";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExtensionStats {
    pub frameworks: usize,
    pub extensions: usize,
    pub extensions_per_af: f64,
    pub arguments_per_extension: f64,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    frameworks: usize,
    extensions: usize,
    arguments: usize,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        self.frameworks += other.frameworks;
        self.extensions += other.extensions;
        self.arguments += other.arguments;
    }

    fn stats(&self) -> ExtensionStats {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        ExtensionStats {
            frameworks: self.frameworks,
            extensions: self.extensions,
            extensions_per_af: ratio(self.extensions, self.frameworks),
            arguments_per_extension: ratio(self.arguments, self.extensions),
        }
    }
}

type Tallies = BTreeMap<SemanticsKind, Tally>;

fn tally<'a>(frameworks: impl IntoIterator<Item = &'a Framework>) -> Tallies {
    let mut out: Tallies = SemanticsKind::ALL.iter().map(|&k| (k, Tally::default())).collect();
    for f in frameworks {
        let solution = solve(f);
        for kind in SemanticsKind::ALL {
            let t = out.get_mut(&kind).expect("every kind is present");
            let extensions = solution.filter(kind);
            t.frameworks += 1;
            t.extensions += extensions.len();
            t.arguments += extensions.iter().map(|l| l.in_set().len()).sum::<usize>();
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeCounts {
    pub train: usize,
    pub test: usize,
    /// Frameworks drawn, duplicates included.
    pub draws: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub train: usize,
    pub test: usize,
    pub corrupted: usize,
    pub per_n: BTreeMap<usize, SizeCounts>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitStats {
    pub train: BTreeMap<SemanticsKind, ExtensionStats>,
    pub test: BTreeMap<SemanticsKind, ExtensionStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: GenerationConfig,
    pub corruption: Option<CorruptionConfig>,
    pub seed_rule: String,
    pub counts: Counts,
    pub statistics: SplitStats,
}

/// A sample before its text is rendered.
#[derive(Debug, Clone)]
struct Planned {
    id: String,
    framework: Framework,
    task: TaskKind,
    format: GraphFormat,
    seed: u64,
}

impl Planned {
    fn render(&self, cfg: &GenerationConfig) -> Result<DatasetSample, DataGenError> {
        let mut s = build_sample(
            &self.framework,
            self.task,
            self.format,
            cfg.with_explanation,
            cfg.given_grounded,
            self.seed,
        )?;
        s.id = self.id.clone();
        Ok(s)
    }

    fn corruptible(&self, cfg: &GenerationConfig) -> bool {
        self.task == TaskKind::Grounded && cfg.with_explanation && has_intermediate(&self.framework)
    }
}

struct SizePlan {
    n: usize,
    train: Vec<Planned>,
    test: Vec<Planned>,
    draws: usize,
    train_tally: Tallies,
    test_tally: Tallies,
}

fn weighted<K: Copy + Ord>(mix: &BTreeMap<K, f64>) -> (Vec<K>, WeightedIndex<f64>) {
    let keys: Vec<K> = mix.keys().copied().collect();
    let dist = WeightedIndex::new(mix.values().copied()).expect("mix validated");
    (keys, dist)
}

fn plan_size(cfg: &GenerationConfig, n: usize) -> Result<SizePlan, DataGenError> {
    let wanted = cfg.per_n_train + cfg.per_n_test;
    let max_draws = wanted.saturating_mul(DRAW_FACTOR).max(1000);
    let mut rng = rng_from(derive_seed(cfg.master_seed, &[FRAMEWORK_STREAM, n as u64]));
    let (lo, hi) = cfg.attack_probability_range;

    let mut seen = HashSet::new();
    let mut frameworks = Vec::with_capacity(wanted);
    let mut draws = 0;
    while frameworks.len() < wanted {
        if draws == max_draws {
            return Err(DataGenError::InsufficientUniqueFrameworks {
                n,
                wanted,
                found: frameworks.len(),
            });
        }
        draws += 1;
        let p = rng.random_range(lo..=hi);
        let f = generate_random_af_with(n, p, cfg.self_attacks, &mut rng);
        if seen.insert(serialize_framework(&f, GraphFormat::Dot)) {
            frameworks.push(f);
        }
    }

    let (tasks, task_dist) = weighted(&cfg.task_mix);
    let (formats, format_dist) = weighted(&cfg.format_mix);
    let planned: Vec<Planned> = frameworks
        .into_iter()
        .enumerate()
        .map(|(i, framework)| {
            let seed = derive_seed(cfg.master_seed, &[SAMPLE_STREAM, n as u64, i as u64]);
            let mut choice = rng_from(derive_seed(seed, &[CHOICE_STREAM]));
            let task = tasks[task_dist.sample(&mut choice)];
            let format = formats[format_dist.sample(&mut choice)];
            Planned {
                id: format!("n{n:02}-{i:05}"),
                framework,
                task,
                format,
                seed,
            }
        })
        .collect();
    let mut train = planned;
    let test = train.split_off(cfg.per_n_train);
    Ok(SizePlan {
        n,
        train_tally: tally(train.iter().map(|p| &p.framework)),
        test_tally: tally(test.iter().map(|p| &p.framework)),
        train,
        test,
        draws,
    })
}

struct Plan {
    train: Vec<Planned>,
    test: Vec<Planned>,
    corrupted: Vec<usize>,
    manifest: Manifest,
}

fn plan(cfg: &GenerationConfig, corruption: Option<&CorruptionConfig>) -> Result<Plan, DataGenError> {
    cfg.validate()?;
    if let Some(c) = corruption {
        c.validate()?;
    }
    let sizes: Vec<usize> = cfg.sizes().collect();
    let per_size = sizes
        .into_par_iter()
        .map(|n| plan_size(cfg, n))
        .collect::<Result<Vec<_>, _>>()?;

    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut per_n = BTreeMap::new();
    let mut train_tally = Tallies::new();
    let mut test_tally = Tallies::new();
    for size in per_size {
        per_n.insert(
            size.n,
            SizeCounts {
                train: size.train.len(),
                test: size.test.len(),
                draws: size.draws,
            },
        );
        for (k, t) in &size.train_tally {
            train_tally.entry(*k).or_default().merge(t);
        }
        for (k, t) in &size.test_tally {
            test_tally.entry(*k).or_default().merge(t);
        }
        train.extend(size.train);
        test.extend(size.test);
    }

    let corrupted = match corruption {
        Some(c) => {
            let eligible: Vec<usize> = train
                .par_iter()
                .enumerate()
                .filter(|(_, p)| p.corruptible(cfg))
                .map(|(i, _)| i)
                .collect();
            select_corrupted(&eligible, train.len(), c)?
        }
        None => Vec::new(),
    };

    let stats = |t: &Tallies| t.iter().map(|(k, v)| (*k, v.stats())).collect();
    let manifest = Manifest {
        config: cfg.clone(),
        corruption: corruption.cloned(),
        seed_rule: SEED_RULE.to_string(),
        counts: Counts {
            train: train.len(),
            test: test.len(),
            corrupted: corrupted.len(),
            per_n,
        },
        statistics: SplitStats {
            train: stats(&train_tally),
            test: stats(&test_tally),
        },
    };
    Ok(Plan {
        train,
        test,
        corrupted,
        manifest,
    })
}

fn render_all(
    planned: &[Planned],
    offset: usize,
    cfg: &GenerationConfig,
    corrupted: &[usize],
    corruption: Option<&CorruptionConfig>,
) -> Result<Vec<DatasetSample>, DataGenError> {
    planned
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let sample = p.render(cfg)?;
            let index = offset + i;
            match corruption {
                Some(c) if corrupted.binary_search(&index).is_ok() => {
                    corrupt_sample(&sample, &mut corruption_rng(c, index))
                }
                _ => Ok(sample),
            }
        })
        .collect()
}

/// Generated dataset held in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub train: Vec<DatasetSample>,
    pub test: Vec<DatasetSample>,
    pub manifest: Manifest,
}

/// Builds the whole dataset in memory. Same records as [`build_dataset`].
pub fn generate_dataset(
    cfg: &GenerationConfig,
    corruption: Option<&CorruptionConfig>,
) -> Result<Dataset, DataGenError> {
    let plan = plan(cfg, corruption)?;
    Ok(Dataset {
        train: render_all(&plan.train, 0, cfg, &plan.corrupted, corruption)?,
        test: render_all(&plan.test, 0, cfg, &[], None)?,
        manifest: plan.manifest,
    })
}

const CHUNK: usize = 2048;

fn write_split(
    path: &Path,
    planned: &[Planned],
    cfg: &GenerationConfig,
    corrupted: &[usize],
    corruption: Option<&CorruptionConfig>,
) -> Result<(), DataGenError> {
    let mut out = BufWriter::new(File::create(path)?);
    for (c, chunk) in planned.chunks(CHUNK).enumerate() {
        for sample in render_all(chunk, c * CHUNK, cfg, corrupted, corruption)? {
            serde_json::to_writer(&mut out, &sample)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Generates the dataset and writes `train.jsonl`, `test.jsonl` and
/// `manifest.json` into `dir`, rendering in bounded chunks.
pub fn build_dataset(
    cfg: &GenerationConfig,
    corruption: Option<&CorruptionConfig>,
    dir: &Path,
) -> Result<Manifest, DataGenError> {
    let plan = plan(cfg, corruption)?;
    fs::create_dir_all(dir)?;
    write_split(&dir.join(TRAIN_FILE), &plan.train, cfg, &plan.corrupted, corruption)?;
    write_split(&dir.join(TEST_FILE), &plan.test, cfg, &[], None)?;
    write_manifest(&dir.join(MANIFEST_FILE), &plan.manifest)?;
    Ok(plan.manifest)
}

pub fn write_manifest(path: &Path, manifest: &Manifest) -> Result<(), DataGenError> {
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn write_samples(path: &Path, samples: &[DatasetSample]) -> Result<(), DataGenError> {
    let mut out = BufWriter::new(File::create(path)?);
    for s in samples {
        serde_json::to_writer(&mut out, s)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a JSONL dataset file. Blank lines are skipped.
pub fn read_samples(path: &Path) -> Result<Vec<DatasetSample>, DataGenError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let sample = serde_json::from_str(&line).map_err(|e| DataGenError::Record {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(sample);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphio::parse_answer;

    fn tiny() -> GenerationConfig {
        GenerationConfig {
            n_min: 3,
            n_max: 5,
            per_n_train: 8,
            per_n_test: 3,
            master_seed: 21,
            ..GenerationConfig::default()
        }
    }

    #[test]
    fn counts_and_ids() {
        let d = generate_dataset(&tiny(), None).unwrap();
        assert_eq!(d.train.len(), 24);
        assert_eq!(d.test.len(), 9);
        assert_eq!(d.train[0].id, "n03-00000");
        assert_eq!(d.test[0].id, "n03-00008");
        assert_eq!(d.manifest.counts.per_n[&4].train, 8);
        let grd = &d.manifest.statistics.test[&SemanticsKind::Grounded];
        assert_eq!(grd.extensions_per_af, 1.0);
    }

    #[test]
    fn splits_share_no_framework() {
        let d = generate_dataset(&tiny(), None).unwrap();
        let key = |s: &DatasetSample| serialize_framework(&s.meta.framework, GraphFormat::Dot);
        let train: HashSet<String> = d.train.iter().map(key).collect();
        assert_eq!(train.len(), d.train.len());
        assert!(d.test.iter().all(|s| !train.contains(&key(s))));
    }

    #[test]
    fn answers_match_explanations() {
        let d = generate_dataset(&tiny(), None).unwrap();
        for s in d.train.iter().chain(&d.test) {
            let answer = parse_answer(&s.answer).unwrap();
            assert_eq!(
                parse_answer(s.explanation.as_deref().unwrap()).unwrap(),
                answer,
                "{}",
                s.id
            );
        }
    }

    #[test]
    fn exhausted_space_is_reported() {
        let cfg = GenerationConfig {
            n_min: 1,
            n_max: 1,
            per_n_train: 3,
            per_n_test: 0,
            self_attacks: true,
            ..GenerationConfig::default()
        };
        assert!(matches!(
            generate_dataset(&cfg, None),
            Err(DataGenError::InsufficientUniqueFrameworks {
                n: 1,
                wanted: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn files_match_memory() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny();
        let noise = CorruptionConfig {
            noise_ratio: 0.25,
            seed: 2,
        };
        let mut cfg_grounded = cfg.clone();
        cfg_grounded.task_mix = [(TaskKind::Grounded, 1.0)].into_iter().collect();
        let manifest = build_dataset(&cfg_grounded, Some(&noise), dir.path()).unwrap();
        let memory = generate_dataset(&cfg_grounded, Some(&noise)).unwrap();
        assert_eq!(manifest, memory.manifest);
        assert_eq!(read_samples(&dir.path().join(TRAIN_FILE)).unwrap(), memory.train);
        assert_eq!(read_samples(&dir.path().join(TEST_FILE)).unwrap(), memory.test);
        assert_eq!(memory.train.iter().filter(|s| s.meta.corrupted).count(), 6);
    }
}
