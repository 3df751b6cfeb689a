//! End-to-end acceptance checks. Runs without the libtest harness so every
//! check prints a single PASS/FAIL line, even when an earlier one fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use argulab::datagen::{
    corrupt_dataset, generate_dataset, generate_random_af, rng_from, CorruptionConfig, Dataset, DatasetSample,
    GenerationConfig, TaskKind,
};
use argulab::evalharness::{acceptance_status, evaluate, reference_predictions, Extension};
use argulab::graphio::{parse_framework, serialize_framework, GraphFormat};
use argulab::semantics::{oracle_all_labellings, solve, solve_grounded};
use argulab::{classify_labelling, Framework, Label, Labelling, SemanticsKind};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn all_frameworks(n: u32) -> impl Iterator<Item = Framework> {
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let attacks = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p);
        Framework::new(0..n, attacks).unwrap()
    })
}

/// Exhaustive frameworks up to three arguments, then `random` draws with
/// 4 to 7 arguments and a per-draw attack density.
fn small_frameworks(random: usize, seed: u64) -> Vec<Framework> {
    let mut out: Vec<Framework> = (0..=3).flat_map(all_frameworks).collect();
    let mut rng = rng_from(seed);
    for _ in 0..random {
        let n = rng.random_range(4..=7);
        let p = rng.random_range(0.05..0.6);
        out.push(generate_random_af(n, p, &mut rng));
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let frameworks = small_frameworks(500, 0x0AC1E);
    for f in &frameworks {
        let oracle = oracle_all_labellings(f).map_err(|e| e.to_string())?;
        let sol = solve(f);
        for kind in SemanticsKind::ALL {
            ensure!(
                sol.filter(kind) == oracle[&kind],
                "{kind} differs from the oracle on {f:?}"
            );
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{} frameworks, 4 semantics, {elapsed:.2?}", frameworks.len()))
}

fn three_labelling_classification() -> Outcome {
    let start = Instant::now();
    let f = Framework::new(1..=8, [(1, 2), (6, 4), (3, 5), (5, 3), (3, 8)]).unwrap();
    let l1 = Labelling::from_sets([1, 6, 7], [2, 4], [3, 5, 8]).unwrap();
    let l2 = Labelling::from_sets([1, 3, 6, 7], [2, 4, 5, 8], []).unwrap();
    let l3 = Labelling::from_sets([1, 5, 6, 7, 8], [2, 3, 4], []).unwrap();
    let rows = [l1.clone(), l2.clone(), l3.clone()];
    let mut members: BTreeMap<SemanticsKind, Vec<usize>> = BTreeMap::new();
    for (i, l) in rows.iter().enumerate() {
        for kind in classify_labelling(&f, l, &rows).map_err(|e| e.to_string())? {
            members.entry(kind).or_default().push(i + 1);
        }
    }
    use SemanticsKind::*;
    let expected: BTreeMap<SemanticsKind, Vec<usize>> = [
        (Grounded, vec![1]),
        (Complete, vec![1, 2, 3]),
        (Preferred, vec![2, 3]),
        (Stable, vec![2, 3]),
    ]
    .into();
    ensure!(members == expected, "classified as {members:?}");
    let mut solved: Vec<Labelling> = solve(&f).complete_labellings().cloned().collect();
    solved.sort_by(|a, b| a.cmp_by_in_set(b));
    let mut rows = rows.to_vec();
    rows.sort_by(|a, b| a.cmp_by_in_set(b));
    ensure!(solved == rows, "solver found {solved:?}");
    ensure!(solve_grounded(&f).0 == l1, "grounded labelling differs");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "grd = {{L1}}, prf = stb = {{L2, L3}}, com = all three, {elapsed:.2?}"
    ))
}

fn dataset_scale(full: &Dataset, full_time: Duration) -> Outcome {
    ensure!(full.train.len() == 60_000, "{} train records", full.train.len());
    ensure!(full.test.len() == 2_000, "{} test records", full.test.len());
    ensure!(
        full.manifest.counts.train == 60_000 && full.manifest.counts.test == 2_000,
        "manifest counts differ"
    );
    for split in [&full.train, &full.test] {
        let sizes: Vec<usize> = split.iter().map(|s| s.meta.n).collect();
        ensure!(
            *sizes.iter().min().unwrap() == 6 && *sizes.iter().max().unwrap() == 25,
            "sizes outside 6..=25"
        );
        for n in 6..=25 {
            ensure!(sizes.contains(&n), "no samples with {n} arguments");
        }
    }
    let start = Instant::now();
    let smoke = generate_dataset(&GenerationConfig::smoke(), None).map_err(|e| e.to_string())?;
    let smoke_time = start.elapsed();
    ensure!(
        smoke.train.len() == 2_000 && smoke.test.len() == 200,
        "smoke run sizes {} / {}",
        smoke.train.len(),
        smoke.test.len()
    );
    ensure!(smoke_time < Duration::from_secs(300), "smoke run took {smoke_time:?}");
    Ok(format!(
        "60000 / 2000 in {full_time:.1?}, smoke 2000 / 200 in {smoke_time:.1?}"
    ))
}

fn extension_statistics(full: &Dataset) -> Outcome {
    let stats = &full.manifest.statistics.test;
    let mut counts: BTreeMap<SemanticsKind, usize> = BTreeMap::new();
    for s in &full.test {
        let sol = solve(&s.meta.framework);
        for kind in SemanticsKind::ALL {
            *counts.entry(kind).or_default() += sol.filter(kind).len();
        }
    }
    let frameworks = full.test.len() as f64;
    let bounds = [
        (SemanticsKind::Grounded, 1.0, 1.0),
        (SemanticsKind::Complete, 1.8, 3.0),
        (SemanticsKind::Preferred, 1.1, 1.8),
        (SemanticsKind::Stable, 0.8, 1.5),
    ];
    let mut line = Vec::new();
    for (kind, lo, hi) in bounds {
        let value = counts[&kind] as f64 / frameworks;
        ensure!(
            (stats[&kind].extensions_per_af - value).abs() < 1e-12,
            "manifest disagrees for {kind}"
        );
        ensure!(
            (lo..=hi).contains(&value),
            "{kind} extensions per framework {value:.3} outside [{lo}, {hi}]"
        );
        line.push(format!("{kind} {value:.3}"));
    }
    Ok(line.join(", "))
}

fn self_consistency(full: &Dataset) -> Outcome {
    let start = Instant::now();
    let samples: Vec<DatasetSample> = full.train.iter().chain(&full.test).cloned().collect();
    let preds = reference_predictions(&samples);
    let (_, missing, scores) = evaluate(&samples, &preds, Some(1)).map_err(|e| e.to_string())?;
    ensure!(missing.is_empty(), "{} missing", missing.len());
    ensure!(scores.len() == 4, "only {} semantics scored", scores.len());
    for (kind, s) in &scores {
        for (name, v) in [
            ("ACC", s.acc),
            ("Pass@1", s.pass_at_k),
            ("MCC_c", s.mcc_credulous),
            ("MCC_s", s.mcc_skeptical),
            ("CFP", s.cfp),
            ("ALSE", s.alse),
        ] {
            ensure!(v == 1.0, "{kind} {name} = {v}");
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!("{} samples, every metric 1.0, {elapsed:.1?}", samples.len()))
}

fn in_set(l: &Labelling) -> Extension {
    l.in_set()
}

fn metric_identities() -> Outcome {
    let frameworks = small_frameworks(2_000, 0x1DE7);
    for f in &frameworks {
        let oracle = oracle_all_labellings(f).map_err(|e| e.to_string())?;
        let exts = |k: SemanticsKind| -> Vec<Extension> { oracle[&k].iter().map(in_set).collect() };
        let com = acceptance_status(&exts(SemanticsKind::Complete), f.arguments());
        let prf = acceptance_status(&exts(SemanticsKind::Preferred), f.arguments());
        ensure!(com.credulous == prf.credulous, "credulous acceptance differs on {f:?}");
        let grounded = &oracle[&SemanticsKind::Grounded][0];
        let members: Vec<bool> = f
            .arguments()
            .iter()
            .map(|&a| grounded.label(a) == Some(Label::In))
            .collect();
        ensure!(
            com.skeptical == members,
            "skeptical acceptance differs from grounded on {f:?}"
        );
    }
    Ok(format!("{} frameworks", frameworks.len()))
}

fn corruption() -> Outcome {
    let cfg = GenerationConfig {
        per_n_train: 50,
        per_n_test: 1,
        master_seed: 77,
        task_mix: [(TaskKind::Grounded, 1.0), (TaskKind::Complete, 0.0)].into(),
        ..GenerationConfig::default()
    };
    let clean = generate_dataset(&cfg, None).map_err(|e| e.to_string())?.train;
    ensure!(clean.len() == 1_000, "{} samples", clean.len());
    let mut noisy = clean.clone();
    let chosen = corrupt_dataset(
        &mut noisy,
        &CorruptionConfig {
            noise_ratio: 0.5,
            seed: 5,
        },
    )
    .map_err(|e| e.to_string())?;
    let flagged = noisy.iter().filter(|s| s.meta.corrupted).count();
    ensure!(chosen.len() == 500 && flagged == 500, "{flagged} flagged");
    let mut differ = 0;
    for (c, n) in clean.iter().zip(&noisy).filter(|(_, n)| n.meta.corrupted) {
        let truth = argulab::graphio::serialize_answer(
            &[solve_grounded(&n.meta.framework).0],
            argulab::graphio::AnswerShape::Single,
        )
        .unwrap();
        ensure!(c.answer == truth, "clean sample {} has a wrong answer", c.id);
        differ += usize::from(n.answer != truth);
    }
    let share = differ as f64 / 500.0;
    ensure!(share >= 0.9, "only {differ} of 500 answers differ");
    Ok(format!(
        "500 of 1000 corrupted, {differ} answers differ ({:.0}%)",
        share * 100.0
    ))
}

fn round_trips() -> Outcome {
    let mut rng = rng_from(0x7217);
    let mut checked = 0;
    for _ in 0..10_000 {
        let n = rng.random_range(0..=25);
        let p = rng.random_range(0.0..0.4);
        let f = generate_random_af(n, p, &mut rng);
        for format in GraphFormat::ALL {
            let text = serialize_framework(&f, format);
            let back = parse_framework(&text, format).map_err(|e| format!("{format}: {e}"))?;
            ensure!(back == f, "{format} round trip changed {f:?}");
            checked += 1;
        }
    }
    Ok(format!("{checked} round trips over 3 formats"))
}

fn performance(full: &Dataset) -> Outcome {
    let mut times: Vec<Duration> = full
        .test
        .iter()
        .filter(|s| s.meta.n == 25)
        .map(|s| {
            let start = Instant::now();
            let sol = solve(&s.meta.framework);
            for kind in SemanticsKind::ALL {
                std::hint::black_box(sol.filter(kind));
            }
            start.elapsed()
        })
        .collect();
    ensure!(!times.is_empty(), "no test frameworks with 25 arguments");
    times.sort();
    let median = times[times.len() / 2];
    let max = *times.last().unwrap();
    ensure!(median < Duration::from_millis(50), "median {median:?}");
    ensure!(max < Duration::from_secs(5), "max {max:?}");
    Ok(format!(
        "{} frameworks, median {median:.2?}, max {max:.2?}",
        times.len()
    ))
}

fn run(number: usize, name: &str, check: impl FnOnce() -> Outcome) -> bool {
    let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("acceptance {number} {name:<28} {tag}  {detail}");
    outcome.is_ok()
}

fn main() -> ExitCode {
    let start = Instant::now();
    let full = generate_dataset(&GenerationConfig::default(), None);
    let full_time = start.elapsed();
    let full = match full {
        Ok(d) => Some(d),
        Err(e) => {
            println!("full-scale generation failed: {e}");
            None
        }
    };
    let needs_full = |check: fn(&Dataset) -> Outcome| {
        let full = full.as_ref();
        move || full.map_or_else(|| Err("no dataset".to_string()), check)
    };

    let results = [
        run(1, "oracle equivalence", oracle_equivalence),
        run(2, "three-labelling example", three_labelling_classification),
        run(3, "dataset scale", || {
            full.as_ref()
                .map_or_else(|| Err("no dataset".into()), |d| dataset_scale(d, full_time))
        }),
        run(4, "extension statistics", needs_full(extension_statistics)),
        run(5, "self-consistency", needs_full(self_consistency)),
        run(6, "metric identities", metric_identities),
        run(7, "corruption", corruption),
        run(8, "round trips", round_trips),
        run(9, "performance at 25 arguments", needs_full(performance)),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed} of {} passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
