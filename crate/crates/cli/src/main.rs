use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mksent::config::RunConfig;
use mksent::corpus::{default_stats, load_dataset, Format};
use mksent::eval::{cohen_kappa, evaluate, run_ablation};
use mksent::langid::{filter_high_precision, train_langid, LangIdModel};
use mksent::lexicon::{bootstrap_pmi, PmiConfig, SeedSet};
use mksent::pipeline::{run_pipeline, PipelineConfig, Resources, Step, Token};
use mksent::system::{SystemSpec, TrainedSystem, VOCAB_FILE};
use mksent::{Label, RawTweet};

/// Sentiment classification of short social-media texts.
///
/// Exit status: 0 on success, 1 on usage errors, 2 on data errors.
#[derive(Parser, Debug)]
#[command(name = "mksent", version)]
struct Cli {
    /// Maximum number of worker threads (default: config `threads`, else all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print dataset statistics: size, label distribution, emoticon and hashtag counts.
    Stats(StatsArgs),
    /// Train a character n-gram language identifier.
    LangidTrain(LangidTrainArgs),
    /// Keep JSONL records whose `text` is confidently in the target language.
    LangidFilter(LangidFilterArgs),
    /// Run the preprocessing pipeline and print annotated tokens.
    Preprocess(PreprocessArgs),
    /// Build a sentiment lexicon from seed words by PMI.
    BootstrapLexicon(BootstrapArgs),
    /// Train a classifier; writes model, vocabulary and lexicons to a directory.
    Train(TrainArgs),
    /// Predict labels: `id<TAB>label<TAB>p_pos<TAB>p_neu<TAB>p_neg`.
    Predict(PredictArgs),
    /// Score predictions against gold labels.
    Evaluate(EvaluateArgs),
    /// Retrain with each component removed in turn and report F1 differences.
    Ablate(AblateArgs),
    /// Cohen's kappa between two annotations of the same tweets.
    Kappa(KappaArgs),
}

#[derive(Args, Debug)]
struct DatasetArg {
    /// Dataset file (TSV `id<TAB>label<TAB>text` or JSONL).
    dataset: PathBuf,
    /// Dataset format; inferred from the extension when omitted.
    #[arg(long, value_parser = ["tsv", "jsonl"])]
    format: Option<String>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[command(flatten)]
    input: DatasetArg,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct LangidTrainArgs {
    /// Training corpus as LANG=PATH, one text per line; repeat per language.
    #[arg(long = "corpus", value_name = "LANG=PATH", required = true)]
    corpora: Vec<String>,
    /// Character n-gram order.
    #[arg(long, default_value_t = 3)]
    order: usize,
    /// Additive smoothing constant.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Output model file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct LangidFilterArgs {
    /// Model written by `langid-train`.
    #[arg(long)]
    model: PathBuf,
    /// Language code to keep.
    #[arg(long)]
    target: String,
    /// Minimum log-posterior lead over the best rival class.
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
    /// Input JSONL (default: stdin).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output JSONL (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PreprocessArgs {
    #[command(flatten)]
    input: DatasetArg,
    /// Run configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BootstrapArgs {
    /// Corpus to count co-occurrences in (TSV or JSONL dataset; labels ignored).
    #[arg(long)]
    corpus: PathBuf,
    /// Positive seed words, one per line.
    #[arg(long)]
    seeds_pos: PathBuf,
    /// Negative seed words, one per line.
    #[arg(long)]
    seeds_neg: PathBuf,
    /// Minimum number of tweets containing a candidate term.
    #[arg(long, default_value_t = 5)]
    min_count: usize,
    /// Smoothing pseudo-count.
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Run configuration used to preprocess the corpus (default: tokenization only).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Lexicon name written in the header.
    #[arg(long, default_value = "bootstrapped")]
    name: String,
    /// Output lexicon TSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    input: DatasetArg,
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: config `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[command(flatten)]
    input: DatasetArg,
    /// Model file; lexicons are read from the manifest in the same directory.
    #[arg(long)]
    model: PathBuf,
    /// Vocabulary file (default: vocab.tsv next to the model).
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long)]
    config: PathBuf,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Gold dataset.
    #[arg(long)]
    gold: PathBuf,
    /// Predictions TSV (or any file whose first two columns are id and label).
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AblateArgs {
    /// Training dataset.
    #[arg(long)]
    train: PathBuf,
    /// Test dataset.
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    config: PathBuf,
    /// Components to remove one at a time, comma separated
    /// (default: every enabled ablatable step and every lexicon group).
    #[arg(long, value_delimiter = ',')]
    components: Option<Vec<String>>,
    /// Print an aligned table instead of TSV.
    #[arg(long)]
    table: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct KappaArgs {
    /// First annotation (id and label in the first two columns, or JSONL).
    first: PathBuf,
    /// Second annotation, same ids.
    second: PathBuf,
}

/// Problems with the invocation rather than the data; exit status 1.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

const ABLATABLE_STEPS: [Step; 6] = [
    Step::Stopwords,
    Step::Negation,
    Step::Normalize,
    Step::SquashRepeats,
    Step::Stem,
    Step::PosTag,
];

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn init_threads(n: Option<usize>) -> Result<()> {
    if let Some(n) = n {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow!("cannot configure thread pool: {e}"))?;
    }
    Ok(())
}

fn load_config(path: &Path, threads: Option<usize>) -> Result<RunConfig> {
    let cfg = RunConfig::load(path)?;
    init_threads(threads.or(cfg.threads))?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let threads = cli.threads;
    match cli.command {
        Command::Stats(a) => {
            init_threads(threads)?;
            cmd_stats(a)
        }
        Command::LangidTrain(a) => {
            init_threads(threads)?;
            cmd_langid_train(a)
        }
        Command::LangidFilter(a) => {
            init_threads(threads)?;
            cmd_langid_filter(a)
        }
        Command::Preprocess(a) => cmd_preprocess(a, threads),
        Command::BootstrapLexicon(a) => cmd_bootstrap(a, threads),
        Command::Train(a) => cmd_train(a, threads),
        Command::Predict(a) => cmd_predict(a, threads),
        Command::Evaluate(a) => {
            init_threads(threads)?;
            cmd_evaluate(a)
        }
        Command::Ablate(a) => cmd_ablate(a, threads),
        Command::Kappa(a) => {
            init_threads(threads)?;
            cmd_kappa(a)
        }
    }
}

fn read_dataset(arg: &DatasetArg) -> Result<Vec<RawTweet>> {
    let format = match &arg.format {
        Some(f) => f.parse::<Format>()?,
        None => Format::from_path(&arg.dataset),
    };
    Ok(load_dataset(&arg.dataset, format)?)
}

fn dataset(path: &Path) -> Result<Vec<RawTweet>> {
    Ok(load_dataset(path, Format::from_path(path))?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_stats(a: StatsArgs) -> Result<()> {
    let stats = default_stats(&read_dataset(&a.input)?);
    if a.json {
        println!("{}", serde_json::to_string_pretty(&stats)?);
    } else {
        print!("{stats}");
    }
    Ok(())
}

fn cmd_langid_train(a: LangidTrainArgs) -> Result<()> {
    let mut samples: Vec<(String, String)> = Vec::new();
    for spec in &a.corpora {
        let (lang, path) = spec
            .split_once('=')
            .ok_or_else(|| usage(format!("--corpus expects LANG=PATH, got {spec:?}")))?;
        let text = fs::read_to_string(path).with_context(|| format!("langid: cannot read {path}"))?;
        samples.extend(
            text.lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| (l.to_string(), lang.to_string())),
        );
    }
    let model = train_langid(&samples, a.order, a.alpha)?;
    model.save(&a.out)?;
    Ok(())
}

/// A JSONL input line, passed through verbatim when kept.
struct JsonRecord<'a> {
    line: &'a str,
    text: String,
}

impl AsRef<str> for JsonRecord<'_> {
    fn as_ref(&self) -> &str {
        &self.text
    }
}

fn cmd_langid_filter(a: LangidFilterArgs) -> Result<()> {
    if a.margin.is_nan() || a.margin < 0.0 {
        return Err(usage("--margin must be >= 0"));
    }
    let model = LangIdModel::load(&a.model)?;
    if !model.classes.iter().any(|c| c == &a.target) {
        return Err(usage(format!("target {:?} is not a class of the model", a.target)));
    }
    let input = match &a.input {
        Some(p) => fs::read_to_string(p).with_context(|| format!("langid: cannot read {}", p.display()))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(line).with_context(|| format!("langid: line {}: invalid JSON", i + 1))?;
        let text = value
            .get("text")
            .and_then(|t| t.as_str())
            .ok_or_else(|| anyhow!("langid: line {}: missing string field \"text\"", i + 1))?;
        records.push(JsonRecord {
            line,
            text: text.to_string(),
        });
    }
    let mut out = String::new();
    for r in filter_high_precision(&model, &records, &a.target, a.margin) {
        out.push_str(r.line);
        out.push('\n');
    }
    emit(a.out.as_deref(), &out)
}

fn format_token(t: &Token) -> String {
    let pos = t.pos.map_or("_".to_string(), |p| p.to_string());
    format!("{}/{}/{}", t.surface, pos, u8::from(t.negated))
}

fn cmd_preprocess(a: PreprocessArgs, threads: Option<usize>) -> Result<()> {
    let cfg = load_config(&a.config, threads)?;
    let spec = cfg.to_spec()?;
    let tweets = read_dataset(&a.input)?;
    let pipeline = spec.pipeline.clone().without(Step::SentimentTag);
    let mut out = String::new();
    for t in &tweets {
        let tokens = run_pipeline(&t.text, &pipeline, &spec.resources)?;
        let cols: Vec<String> = tokens.iter().map(format_token).collect();
        let _ = writeln!(out, "{}\t{}", t.id, cols.join("\t"));
    }
    emit(a.out.as_deref(), &out)
}

fn cmd_bootstrap(a: BootstrapArgs, threads: Option<usize>) -> Result<()> {
    let (pipeline, resources) = match &a.config {
        Some(p) => {
            let spec = load_config(p, threads)?.to_spec()?;
            (spec.pipeline.without(Step::SentimentTag), spec.resources)
        }
        None => {
            init_threads(threads)?;
            (PipelineConfig::none(), Resources::default())
        }
    };
    let pmi = PmiConfig {
        epsilon: a.epsilon,
        min_count: a.min_count,
    };
    pmi.validate().map_err(|e| usage(e.to_string()))?;
    let seeds = SeedSet::load(&a.seeds_pos, &a.seeds_neg)?;
    let tweets = dataset(&a.corpus)?;
    let corpus = tweets
        .iter()
        .map(|t| run_pipeline(&t.text, &pipeline, &resources))
        .collect::<Result<Vec<_>, _>>()?;
    let lexicon = bootstrap_pmi(&corpus, &seeds, &pmi)?.with_name(a.name);
    lexicon.write(&a.out)?;
    eprintln!("{} terms written to {}", lexicon.len(), a.out.display());
    Ok(())
}

fn cmd_train(a: TrainArgs, threads: Option<usize>) -> Result<()> {
    let cfg = load_config(&a.config, threads)?;
    let out = a
        .out
        .or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| usage("no output directory: pass --out or set output_dir in the config"))?;
    let spec = cfg.to_spec()?;
    let tweets = read_dataset(&a.input)?;
    let system = spec.train(&tweets)?;
    system.save(&out)?;
    eprintln!(
        "trained on {} tweets: {} vocabulary terms, {} lexicons, {} epochs, objective {:.6}",
        tweets.len(),
        system.vocab.len(),
        system.lexicons().len(),
        system.model.meta.epochs,
        system.model.meta.objective
    );
    Ok(())
}

fn cmd_predict(a: PredictArgs, threads: Option<usize>) -> Result<()> {
    let cfg = load_config(&a.config, threads)?;
    let spec: SystemSpec = cfg.to_spec()?;
    let vocab = a.vocab.clone().unwrap_or_else(|| {
        a.model
            .parent()
            .unwrap_or(Path::new("."))
            .join(VOCAB_FILE)
    });
    let system = TrainedSystem::load(&a.model, &vocab, &spec)?;
    let tweets = read_dataset(&a.input)?;
    let predictions = system.predict_all(tweets.iter().map(|t| t.text.as_str()))?;
    let mut out = String::new();
    for (t, (label, p)) in tweets.iter().zip(predictions) {
        let _ = writeln!(out, "{}\t{}\t{:.6}\t{:.6}\t{:.6}", t.id, label, p[0], p[1], p[2]);
    }
    emit(a.out.as_deref(), &out)
}

/// `id -> label` from a JSONL dataset or any TSV whose first two columns are id and label.
fn read_labels(path: &Path) -> Result<Vec<(String, Label)>> {
    if Format::from_path(path) == Format::Jsonl {
        return dataset(path)?
            .into_iter()
            .map(|t| {
                let label = t.label.ok_or_else(|| anyhow!("eval: {}: tweet {:?} has no label", path.display(), t.id))?;
                Ok((t.id, label))
            })
            .collect();
    }
    let text = fs::read_to_string(path).with_context(|| format!("eval: cannot read {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let (Some(id), Some(label)) = (cols.next(), cols.next()) else {
            bail!("eval: {} line {}: expected id<TAB>label", path.display(), i + 1);
        };
        let label: Label = label
            .parse()
            .map_err(|_| anyhow!("eval: {} line {}: unknown label {label:?}", path.display(), i + 1))?;
        out.push((id.to_string(), label));
    }
    Ok(out)
}

/// Pairs the labels of `a` and `b` by id, in the order of `a`.
fn align(a: &Path, b: &Path) -> Result<(Vec<Label>, Vec<Label>)> {
    let first = read_labels(a)?;
    let second: HashMap<String, Label> = read_labels(b)?.into_iter().collect();
    if first.len() != second.len() {
        bail!("eval: {} has {} labels but {} has {}", a.display(), first.len(), b.display(), second.len());
    }
    let mut x = Vec::with_capacity(first.len());
    let mut y = Vec::with_capacity(first.len());
    for (id, label) in first {
        let other = second
            .get(&id)
            .ok_or_else(|| anyhow!("eval: id {id:?} missing from {}", b.display()))?;
        x.push(label);
        y.push(*other);
    }
    Ok((x, y))
}

fn cmd_evaluate(a: EvaluateArgs) -> Result<()> {
    let (gold, pred) = align(&a.gold, &a.pred)?;
    let report = evaluate(&gold, &pred).map_err(mksent::Error::from)?;
    emit(a.out.as_deref(), &report.to_tsv())
}

fn cmd_ablate(a: AblateArgs, threads: Option<usize>) -> Result<()> {
    let cfg = load_config(&a.config, threads)?;
    let spec = cfg.to_spec()?;
    let components = match a.components {
        Some(c) => c.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => ABLATABLE_STEPS
            .iter()
            .filter(|s| spec.pipeline.enabled(**s))
            .map(|s| s.name().to_string())
            .chain(spec.lexicon_groups.iter().map(|g| g.name.clone()))
            .collect::<Vec<_>>(),
    };
    let train = dataset(&a.train)?;
    let test = dataset(&a.test)?;
    let report = run_ablation(&train, &test, &components, &spec)?;
    let text = if a.table { report.to_table() } else { report.to_tsv() };
    emit(a.out.as_deref(), &text)
}

fn cmd_kappa(a: KappaArgs) -> Result<()> {
    let (x, y) = align(&a.first, &a.second)?;
    let kappa = cohen_kappa(&x, &y).map_err(mksent::Error::from)?;
    println!("{kappa:.6}");
    Ok(())
}

