use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};

use noisy_ner::annotate::{
    apply_channel, estimate_confusion, identity_init, init_noise_weights, ChannelConfig, Gazetteer,
};
use noisy_ner::eval::{annotation_quality, entity_prf, matrix_csv, theta_report, PrfReport};
use noisy_ner::io::{
    generate_toy, parse_conll, write_atomic, write_conll, Corpus, ExperimentConfig, ToyConfig,
    TOY_BLOCKLIST, TOY_GAZETTEER,
};
use noisy_ner::model::LabelSet;
use noisy_ner::train::{
    run_trials_with_models, sweep, sweep_csv, Checkpoint, ExperimentData, SweepAxis, Variant,
    DEFAULT_NOISY_FACTORS,
};

/// Train and evaluate entity taggers on clean plus automatically labeled data.
#[derive(Parser)]
#[command(name = "noisy-ner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the synthetic toy corpus, gazetteer and blocklist.
    GenerateToy(GenerateToyArgs),
    /// Label a corpus by gazetteer lookup.
    Annotate(AnnotateArgs),
    /// Corrupt the labels of a corpus with a noise channel.
    SimulateNoise(SimulateNoiseArgs),
    /// Noise-layer weights from aligned clean and noisy corpora.
    InitTheta(InitThetaArgs),
    /// Train a variant over several seeds.
    Train(TrainArgs),
    /// Entity-level scores of a checkpoint or of a prediction file.
    Evaluate(EvaluateArgs),
    /// Mean test F1 across clean sizes or noisy-sample factors.
    Sweep(SweepArgs),
    /// Noise matrix of a checkpoint as labeled CSV.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenerateToyArgs {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 20_000)]
    train_tokens: usize,
    #[arg(long, default_value_t = 3_000)]
    dev_tokens: usize,
    #[arg(long, default_value_t = 3_000)]
    test_tokens: usize,
}

#[derive(Args)]
struct AnnotateArgs {
    /// CoNLL input; tags, if present, are treated as gold.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// `form<TAB>CLASS` lines. Defaults to the bundled toy gazetteer.
    #[arg(long)]
    gazetteer: Option<PathBuf>,
    /// One form per line never to be labeled.
    #[arg(long)]
    blocklist: Option<PathBuf>,
    /// Write per-class scores of the annotation against the input tags.
    #[arg(long)]
    quality: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateNoiseArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// uniform, permutation, empirical or annotation.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    rate: Option<f64>,
    /// Comma-separated target class index per class.
    #[arg(long, value_delimiter = ',')]
    mapping: Option<Vec<usize>>,
    /// Row-stochastic matrix as JSON, e.g. `[[0.9,0.1],[0.2,0.8]]`.
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct InitThetaArgs {
    #[arg(long)]
    clean: PathBuf,
    #[arg(long)]
    noisy: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Ignore the counts and write the identity.
    #[arg(long)]
    identity: bool,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    /// Overrides the variant in the config.
    #[arg(long)]
    variant: Option<String>,
    /// Overrides the root seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the number of seeds in the config.
    #[arg(long)]
    n_seeds: Option<usize>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Gold-labeled CoNLL file.
    #[arg(long)]
    gold: PathBuf,
    #[arg(
        long,
        conflicts_with = "predictions",
        required_unless_present = "predictions"
    )]
    checkpoint: Option<PathBuf>,
    /// CoNLL file with predicted tags, aligned with the gold file.
    #[arg(long)]
    predictions: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    /// clean-size or noisy-factor.
    #[arg(long)]
    axis: String,
    /// Required for clean-size. For noisy-factor, defaults to
    /// 0.5,1,2,5,10,20,30,50.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Defaults to the config's variant.
    #[arg(long, value_delimiter = ',')]
    variants: Option<Vec<String>>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    checkpoint: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenerateToy(a) => generate_toy_cmd(a),
        Command::Annotate(a) => annotate(a),
        Command::SimulateNoise(a) => simulate_noise(a),
        Command::InitTheta(a) => init_theta(a),
        Command::Train(a) => train(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Report(a) => report(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    write_atomic(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn out_dir(dir: &Path) -> Result<&Path> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    Ok(dir)
}

fn read_corpus(path: &Path, labels: &LabelSet) -> Result<Corpus> {
    parse_conll(&read(path)?, labels).with_context(|| format!("{}", path.display()))
}

fn require_labels(corpus: &Corpus, path: &Path) -> Result<Vec<Vec<usize>>> {
    corpus
        .sentences()
        .map(|s| s.labels.clone())
        .collect::<Option<Vec<_>>>()
        .with_context(|| format!("{} has untagged tokens", path.display()))
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => {
            ExperimentConfig::from_toml(&read(p)?).with_context(|| format!("{}", p.display()))
        }
        None => Ok(ExperimentConfig::default()),
    }
}

fn write_report(dir: &Path, report: &PrfReport) -> Result<()> {
    write(&dir.join("prf.csv"), report.to_csv())?;
    write(&dir.join("prf.json"), report.to_json())
}

fn generate_toy_cmd(a: GenerateToyArgs) -> Result<()> {
    let dir = out_dir(&a.out_dir)?;
    let toy = generate_toy(&ToyConfig {
        seed: a.seed,
        train_tokens: a.train_tokens,
        dev_tokens: a.dev_tokens,
        test_tokens: a.test_tokens,
    });
    let labels = LabelSet::conll();
    write(&dir.join("train.txt"), write_conll(&toy.train, &labels))?;
    write(&dir.join("dev.txt"), write_conll(&toy.dev, &labels))?;
    write(&dir.join("test.txt"), write_conll(&toy.test, &labels))?;
    write(&dir.join("gazetteer.tsv"), TOY_GAZETTEER)?;
    write(&dir.join("blocklist.txt"), TOY_BLOCKLIST)
}

fn annotate(a: AnnotateArgs) -> Result<()> {
    let labels = LabelSet::conll();
    let corpus = read_corpus(&a.input, &labels)?;
    let mut gaz = Gazetteer::new(labels.clone());
    let entries = match &a.gazetteer {
        Some(p) => read(p)?,
        None => TOY_GAZETTEER.to_string(),
    };
    gaz.load_entries(&entries).context("gazetteer")?;
    match &a.blocklist {
        Some(p) => gaz.load_blocklist(&read(p)?),
        None if a.gazetteer.is_none() => gaz.load_blocklist(TOY_BLOCKLIST),
        None => {}
    }
    let mut labeled = corpus.clone();
    for s in labeled.sentences_mut() {
        s.labels = Some(gaz.annotate(&s.tokens));
    }
    if let Some(q) = &a.quality {
        let gold = require_labels(&corpus, &a.input)?;
        let auto = require_labels(&labeled, &a.output)?;
        write(q, annotation_quality(&gold, &auto, &labels)?.to_csv())?;
    }
    write(&a.output, write_conll(&labeled, &labels))
}

fn simulate_noise(a: SimulateNoiseArgs) -> Result<()> {
    let labels = LabelSet::conll();
    let corpus = read_corpus(&a.input, &labels)?;
    let gold = require_labels(&corpus, &a.input)?;
    let matrix = match &a.matrix {
        Some(m) => Some(serde_json::from_str::<Vec<Vec<f64>>>(m).context("--matrix")?),
        None => None,
    };
    let spec = ChannelConfig {
        kind: a.kind,
        rate: a.rate,
        mapping: a.mapping,
        matrix,
        seed: a.seed,
    }
    .to_spec(&labels)?;
    let flat: Vec<usize> = gold.iter().flatten().copied().collect();
    let noisy = apply_channel(&flat, &spec, labels.k())?;
    let mut out = corpus.clone();
    let mut at = 0;
    for s in out.sentences_mut() {
        let n = s.len();
        s.labels = Some(noisy[at..at + n].to_vec());
        at += n;
    }
    write(&a.output, write_conll(&out, &labels))
}

fn init_theta(a: InitThetaArgs) -> Result<()> {
    let labels = LabelSet::conll();
    let clean = read_corpus(&a.clean, &labels)?;
    let noisy = read_corpus(&a.noisy, &labels)?;
    let y = require_labels(&clean, &a.clean)?;
    let z = require_labels(&noisy, &a.noisy)?;
    ensure!(
        clean
            .sentences()
            .map(|s| &s.tokens)
            .eq(noisy.sentences().map(|s| &s.tokens)),
        "{} and {} do not hold the same tokens",
        a.clean.display(),
        a.noisy.display()
    );
    let b = if a.identity {
        identity_init(labels.k())?
    } else {
        let y: Vec<usize> = y.into_iter().flatten().collect();
        let z: Vec<usize> = z.into_iter().flatten().collect();
        init_noise_weights(&estimate_confusion(&y, &z, labels.k())?, a.alpha)?
    };
    write(&a.output, matrix_csv(labels.names(), &b))
}

fn train(a: TrainArgs) -> Result<()> {
    let mut cfg = load_config(a.config.as_deref())?;
    if let Some(v) = a.variant {
        cfg.variant = v;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(n) = a.n_seeds {
        cfg.n_seeds = n;
    }
    cfg.validate()?;
    let variant: Variant = cfg.variant.parse()?;
    let dir = out_dir(&a.out_dir)?;
    let data = ExperimentData::from_config(&cfg)?;
    let (summary, models) = run_trials_with_models(variant, &data, &cfg)?;

    write(&dir.join("config.toml"), cfg.to_toml()?)?;
    write(&dir.join("metrics.jsonl"), summary.epoch_jsonl())?;
    write(
        &dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;
    for (trial, model) in summary.trials.iter().zip(models) {
        let ckpt = Checkpoint {
            variant,
            seed: trial.seed,
            labels: data.labels.clone(),
            vocabulary: data.embeddings.vocab.clone(),
            model,
        };
        write(
            &dir.join(format!("model-seed-{}.json", trial.seed)),
            ckpt.to_json(),
        )?;
    }
    let s = summary.summary;
    println!(
        "{variant}: mean test F1 {:.4}, standard error {:.4} over {} seed(s)",
        s.mean, s.se, s.n
    );
    Ok(())
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    let gold_corpus;
    let (labels, predicted) = match (&a.checkpoint, &a.predictions) {
        (Some(c), _) => {
            let ckpt =
                Checkpoint::from_json(&read(c)?).with_context(|| format!("{}", c.display()))?;
            gold_corpus = read_corpus(&a.gold, &ckpt.labels)?;
            let predicted = ckpt.predict(&gold_corpus);
            (ckpt.labels, predicted)
        }
        (None, Some(p)) => {
            let labels = LabelSet::conll();
            gold_corpus = read_corpus(&a.gold, &labels)?;
            let pred_corpus = read_corpus(p, &labels)?;
            ensure!(
                gold_corpus
                    .sentences()
                    .map(|s| &s.tokens)
                    .eq(pred_corpus.sentences().map(|s| &s.tokens)),
                "{} and {} do not hold the same tokens",
                a.gold.display(),
                p.display()
            );
            let predicted = require_labels(&pred_corpus, p)?;
            (labels, predicted)
        }
        (None, None) => bail!("either --checkpoint or --predictions is required"),
    };
    let gold = require_labels(&gold_corpus, &a.gold)?;
    let report = entity_prf(&gold, &predicted, &labels)?;
    let dir = out_dir(&a.out_dir)?;
    write_report(dir, &report)?;
    println!("overall F1 {:.4}", report.overall.f1);
    Ok(())
}

fn sweep_cmd(a: SweepArgs) -> Result<()> {
    let cfg = load_config(a.config.as_deref())?;
    let axis: SweepAxis = a.axis.parse()?;
    let variants: Vec<Variant> = match &a.variants {
        Some(names) => names.iter().map(|n| n.parse()).collect::<Result<_, _>>()?,
        None => vec![cfg.variant.parse()?],
    };
    let dir = out_dir(&a.out_dir)?;
    let data = ExperimentData::from_config(&cfg)?;
    let values = match (a.values, axis) {
        (Some(v), _) => v,
        (None, SweepAxis::NoisyFactor) => DEFAULT_NOISY_FACTORS.to_vec(),
        (None, SweepAxis::CleanSize) => bail!("--values is required for the clean-size axis"),
    };
    let rows = sweep(axis, &values, &variants, &data, &cfg)?;
    write(&dir.join("config.toml"), cfg.to_toml()?)?;
    write(&dir.join("sweep.csv"), sweep_csv(&rows))
}

fn report(a: ReportArgs) -> Result<()> {
    let ckpt = Checkpoint::from_json(&read(&a.checkpoint)?)
        .with_context(|| format!("{}", a.checkpoint.display()))?;
    let r = theta_report(&ckpt.model.noise_matrix(), &ckpt.labels);
    let dir = out_dir(&a.out_dir)?;
    write(&dir.join("theta.csv"), r.theta_csv())?;
    write(&dir.join("b.csv"), r.weights_csv())
}
