use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use argulab::datagen::{
    build_dataset, build_sample, corrupt_dataset, read_samples, write_samples, CorruptionConfig, DataGenError,
    GenerationConfig, TaskKind,
};
use argulab::evalharness::{evaluate_run, EvalError, PredictionRecord};
use argulab::graphio::{parse_framework, serialize_answer, AnswerRecord, AnswerShape, GraphFormat, GraphIoError};
use argulab::prompts::render_prompt;
use argulab::semantics::{solve, solve_grounded};
use argulab::{Framework, Labelling, SemanticsKind};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(
    name = "argulab",
    version,
    about = "Argumentation framework solving, dataset generation and scoring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate train and test splits plus a manifest into a directory.
    Generate(GenerateArgs),
    /// Solve a framework file, or every sample of a dataset file (.jsonl).
    Solve(SolveArgs),
    /// Print the structured derivation trace of a framework as JSON.
    Explain(ExplainArgs),
    /// Inject derivation noise into a clean dataset file.
    Corrupt(CorruptArgs),
    /// Score a prediction file against a dataset file.
    Evaluate(EvaluateArgs),
    /// Render the chain-of-thought prompt templates for a framework.
    EmitPrompts(EmitPromptsArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// JSON generation config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Fraction of training samples to corrupt.
    #[arg(long)]
    noise: Option<f64>,
    /// Complete tasks without the grounded labelling in the problem.
    #[arg(long)]
    end_to_end: bool,
    /// 100 train and 10 test frameworks per size.
    #[arg(long)]
    smoke: bool,
    #[arg(long)]
    per_n_train: Option<usize>,
    #[arg(long)]
    per_n_test: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SolveArgs {
    input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long)]
    format: Option<GraphFormat>,
    #[arg(long, default_value = "grd", value_parser = parse_semantics)]
    semantics: SemanticsKind,
    /// Also print the rendered derivation.
    #[arg(long)]
    explain: bool,
    /// Omit the grounded labelling when explaining complete semantics.
    #[arg(long)]
    end_to_end: bool,
    /// Wording seed for `--explain`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExplainArgs {
    input: PathBuf,
    #[arg(long)]
    format: Option<GraphFormat>,
    #[arg(long, default_value = "grd", value_parser = parse_semantics)]
    semantics: SemanticsKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CorruptArgs {
    input: PathBuf,
    #[arg(long)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Dataset file (.jsonl).
    #[arg(long)]
    dataset: PathBuf,
    /// Prediction file, one `{"id", "candidates"}` record per line.
    #[arg(long)]
    predictions: PathBuf,
    /// Candidates per problem; defaults to the count in the first record.
    #[arg(long)]
    k: Option<usize>,
    /// Report path. The table goes next to it with a .txt extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EmitPromptsArgs {
    input: PathBuf,
    #[arg(long)]
    format: Option<GraphFormat>,
    /// grounded or complete; both when omitted.
    #[arg(long)]
    task: Option<TaskKind>,
    /// Implies `--task grounded` unless a task is given.
    #[arg(long, value_parser = parse_semantics)]
    semantics: Option<SemanticsKind>,
    /// Output directory for `<stem>.<task>.txt` files.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_semantics(s: &str) -> Result<SemanticsKind, String> {
    SemanticsKind::ALL
        .into_iter()
        .find(|k| k.short_name() == s.to_ascii_lowercase())
        .ok_or_else(|| format!("unknown semantics `{s}` (expected grd, com, prf or stb)"))
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Io(String),
    Capacity(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Io(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Io(m) | CliError::Capacity(m) => f.write_str(m),
        }
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

impl From<GraphIoError> for CliError {
    fn from(e: GraphIoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DataGenError> for CliError {
    fn from(e: DataGenError) -> Self {
        match e {
            DataGenError::Io(_) => CliError::Io(e.to_string()),
            DataGenError::InsufficientUniqueFrameworks { .. } => CliError::Capacity(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Io(_) => CliError::Io(e.to_string()),
            EvalError::DataGen(inner) => inner.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn require_file(path: &Path) -> Result<(), CliError> {
    match fs::metadata(path) {
        Ok(m) if m.is_file() => Ok(()),
        Ok(_) => Err(CliError::Io(format!("{}: not a regular file", path.display()))),
        Err(e) => Err(io_error(path, e)),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    require_file(path)?;
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn read_framework(path: &Path, format: Option<GraphFormat>) -> Result<Framework, CliError> {
    let text = read_text(path)?;
    let format = format
        .or_else(|| GraphFormat::from_path(path))
        .ok_or_else(|| CliError::Input(format!("{}: cannot tell the format, pass --format", path.display())))?;
    Ok(parse_framework(&text, format)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_error(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("standard output: {e}"))),
    }
}

fn is_dataset(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "jsonl")
}

fn answer_for(framework: &Framework, semantics: SemanticsKind) -> Result<String, CliError> {
    if semantics == SemanticsKind::Grounded {
        let (grounded, _) = solve_grounded(framework);
        return Ok(serialize_answer(&[grounded], AnswerShape::Single)?);
    }
    let labellings = solve(framework).filter(semantics);
    Ok(serialize_answer(&labellings, AnswerShape::List)?)
}

fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = read_text(path)?;
            serde_json::from_str::<GenerationConfig>(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        }
        None if args.smoke => GenerationConfig::smoke(),
        None => GenerationConfig::default(),
    };
    if args.config.is_some() && args.smoke {
        let smoke = GenerationConfig::smoke();
        cfg.per_n_train = smoke.per_n_train;
        cfg.per_n_test = smoke.per_n_test;
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(v) = args.per_n_train {
        cfg.per_n_train = v;
    }
    if let Some(v) = args.per_n_test {
        cfg.per_n_test = v;
    }
    if args.end_to_end {
        cfg.given_grounded = false;
    }
    cfg.validate()?;
    let corruption = args.noise.map(|noise_ratio| CorruptionConfig {
        noise_ratio,
        seed: cfg.master_seed,
    });
    if let Some(c) = &corruption {
        c.validate()?;
    }
    fs::create_dir_all(&args.out).map_err(|e| io_error(&args.out, e))?;

    let manifest = build_dataset(&cfg, corruption.as_ref(), &args.out)?;
    eprintln!(
        "wrote {} train and {} test samples ({} corrupted) to {}",
        manifest.counts.train,
        manifest.counts.test,
        manifest.counts.corrupted,
        args.out.display()
    );
    Ok(())
}

fn solve_command(args: SolveArgs) -> Result<(), CliError> {
    if is_dataset(&args.input) {
        require_file(&args.input)?;
        let samples = read_samples(&args.input)?;
        let mut text = String::new();
        for s in &samples {
            let semantics = match s.meta.task {
                TaskKind::Grounded => SemanticsKind::Grounded,
                TaskKind::Complete => SemanticsKind::Complete,
            };
            let record = PredictionRecord {
                id: s.id.clone(),
                candidates: vec![answer_for(&s.meta.framework, semantics)?],
            };
            text.push_str(&serde_json::to_string(&record).expect("records serialize"));
            text.push('\n');
        }
        return emit(args.out.as_deref(), &text);
    }

    let framework = read_framework(&args.input, args.format)?;
    let mut text = answer_for(&framework, args.semantics)?;
    text.push('\n');
    if args.explain {
        let task = match args.semantics {
            SemanticsKind::Grounded => TaskKind::Grounded,
            _ => TaskKind::Complete,
        };
        let format = args.format.unwrap_or(GraphFormat::Dot);
        let sample = build_sample(&framework, task, format, true, !args.end_to_end, args.seed)?;
        text.push('\n');
        text.push_str(sample.explanation.as_deref().unwrap_or_default());
        text.push('\n');
    }
    emit(args.out.as_deref(), &text)
}

fn explain(args: ExplainArgs) -> Result<(), CliError> {
    let framework = read_framework(&args.input, args.format)?;
    let record = |l: &Labelling| AnswerRecord::from_labelling(l);
    let value = if args.semantics == SemanticsKind::Grounded {
        let (grounded, trace) = solve_grounded(&framework);
        json!({ "semantics": "grd", "labelling": record(&grounded), "trace": trace })
    } else {
        let solution = solve(&framework);
        let keep = solution.filter(args.semantics);
        let labellings: Vec<_> = solution
            .completes
            .iter()
            .filter(|(l, _)| keep.contains(l))
            .map(|(l, trace)| json!({ "labelling": record(l), "trace": trace }))
            .collect();
        json!({
            "semantics": args.semantics.short_name(),
            "grounded": { "labelling": record(&solution.grounded.0), "trace": solution.grounded.1 },
            "labellings": labellings,
        })
    };
    let mut text = serde_json::to_string_pretty(&value).expect("traces serialize");
    text.push('\n');
    emit(args.out.as_deref(), &text)
}

fn corrupt(args: CorruptArgs) -> Result<(), CliError> {
    let cfg = CorruptionConfig {
        noise_ratio: args.noise,
        seed: args.seed,
    };
    cfg.validate()?;
    require_file(&args.input)?;
    let mut samples = read_samples(&args.input)?;
    let chosen = corrupt_dataset(&mut samples, &cfg)?;
    write_samples(&args.out, &samples)?;
    eprintln!("corrupted {} of {} samples", chosen.len(), samples.len());
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    require_file(&args.dataset)?;
    require_file(&args.predictions)?;
    let report = evaluate_run(&args.dataset, &args.predictions, args.k)?;
    if let Some(out) = &args.out {
        report.write(out)?;
    }
    emit(None, &report.render_table())
}

fn emit_prompts(args: EmitPromptsArgs) -> Result<(), CliError> {
    let framework = read_framework(&args.input, args.format)?;
    let format = args
        .format
        .or_else(|| GraphFormat::from_path(&args.input))
        .unwrap_or(GraphFormat::Dot);
    let tasks: Vec<TaskKind> = match (args.task, args.semantics) {
        (Some(t), _) => vec![t],
        (None, Some(SemanticsKind::Grounded)) => vec![TaskKind::Grounded],
        (None, Some(_)) => vec![TaskKind::Complete],
        (None, None) => TaskKind::ALL.to_vec(),
    };
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
            let stem = args.input.file_stem().and_then(|s| s.to_str()).unwrap_or("framework");
            for task in tasks {
                let path = dir.join(format!("{stem}.{task}.txt"));
                fs::write(&path, render_prompt(&framework, task, format)).map_err(|e| io_error(&path, e))?;
            }
            Ok(())
        }
        None => {
            let text: Vec<String> = tasks.iter().map(|&t| render_prompt(&framework, t, format)).collect();
            emit(None, &text.join("\n"))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve_command(a),
        Command::Explain(a) => explain(a),
        Command::Corrupt(a) => corrupt(a),
        Command::Evaluate(a) => evaluate(a),
        Command::EmitPrompts(a) => emit_prompts(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are input errors; --help and --version are not errors
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
