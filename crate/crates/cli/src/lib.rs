//! Command-line workflows over `lprfuse-core`.
//!
//! Each subcommand has a `cmd_*` function that does the work and writes its
//! output, so the same paths are exercised by the binary and by tests.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use lprfuse_core::eval::{
    fuse_corpus, order_profiles, rank_models, recognition_rate, sweep_top_n, RankingMode,
};
use lprfuse_core::io::{
    load_fused, load_predictions, load_profiles, load_report, load_synth_config, render_report,
    write_fused, write_predictions, write_profiles, write_report, ApproachRow, DatasetTable,
    FusedRecord, LoadOptions, RenderFormat, ReportDoc,
};
use lprfuse_core::synth::generate;
use lprfuse_core::{
    normalize_confidences, Alphabet, FusionStrategy, ModelProfile, NormalizationMode, Ranking,
    Sample, Text, DEFAULT_SYMBOLS,
};

/// Invalid flag combination; the binary exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, Parser)]
#[command(name = "lprfuse", version, about = "Fuse license plate readings from several recognizers")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Reject unknown fields in input records instead of warning.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Symbols a plate may contain after normalization.
    #[arg(long, global = true, default_value = DEFAULT_SYMBOLS)]
    pub alphabet: String,
    /// Log more (repeat for debug output).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

impl Default for CommonArgs {
    fn default() -> Self {
        Self {
            strict: false,
            alphabet: DEFAULT_SYMBOLS.to_string(),
            verbose: 0,
        }
    }
}

impl CommonArgs {
    pub fn load_options(&self) -> Result<LoadOptions> {
        let alphabet = Alphabet::new(&self.alphabet)
            .map_err(|e| UsageError(format!("--alphabet: {e}")))?;
        Ok(LoadOptions {
            strict: self.strict,
            alphabet,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fuse every sample of a prediction file.
    Fuse(FuseArgs),
    /// Score fused outputs against ground truth, per dataset.
    Eval(EvalArgs),
    /// Score top-N ensembles for N = 1..K under a model ranking.
    Sweep(SweepArgs),
    /// Generate a synthetic prediction file from a config.
    Simulate(SimulateArgs),
    /// Render a saved report.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FuseArgs {
    /// Prediction file (JSON Lines).
    #[arg(long)]
    pub input: PathBuf,
    /// hc, mv-bm, mv-hc, mvcp-bm or mvcp-hc.
    #[arg(long)]
    pub strategy: FusionStrategy,
    /// Model profiles (TOML); required by the -bm strategies.
    #[arg(long)]
    pub profiles: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Confidence normalization: off or mean-scaling.
    #[arg(long, default_value_t = NormalizationMode::Off)]
    pub normalize: NormalizationMode,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Prediction file with ground truth.
    #[arg(long)]
    pub input: PathBuf,
    /// Previously fused records to score.
    #[arg(long, conflicts_with = "strategy")]
    pub fused: Option<PathBuf>,
    /// Strategies to run and score (comma-separated).
    #[arg(long, value_delimiter = ',', required_unless_present = "fused")]
    pub strategy: Vec<FusionStrategy>,
    #[arg(long)]
    pub profiles: Option<PathBuf>,
    /// Save the report as JSON for `report`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Rendering printed to stdout: table or delimited.
    #[arg(long, default_value = "table")]
    pub format: RenderFormat,
    #[arg(long, default_value_t = NormalizationMode::Off)]
    pub normalize: NormalizationMode,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub profiles: PathBuf,
    /// Order in which models join the ensemble: accuracy or speed.
    #[arg(long, default_value = "accuracy")]
    pub rank: RankingMode,
    /// Strategies to score (comma-separated); all five by default.
    #[arg(long, value_delimiter = ',')]
    pub strategies: Vec<FusionStrategy>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "table")]
    pub format: RenderFormat,
    #[arg(long, default_value_t = NormalizationMode::Off)]
    pub normalize: NormalizationMode,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Synthetic corpus config (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Prediction file to write; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write profiles ranking the synthetic models in id order, each
    /// with a nominal latency of 1 ms.
    #[arg(long)]
    pub profiles_output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Report JSON written by `eval` or `sweep`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "table")]
    pub format: RenderFormat,
}

pub fn run(cli: &Cli) -> Result<()> {
    let common = &cli.common;
    match &cli.command {
        Command::Fuse(a) => cmd_fuse(a, common).map(drop),
        Command::Eval(a) => cmd_eval(a, common).map(drop),
        Command::Sweep(a) => cmd_sweep(a, common).map(drop),
        Command::Simulate(a) => cmd_simulate(a).map(drop),
        Command::Report(a) => cmd_report(a).map(drop),
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_samples(path: &Path, opts: &LoadOptions, mode: NormalizationMode) -> Result<Vec<Sample>> {
    let samples = load_predictions(path, opts).with_context(|| format!("reading {}", path.display()))?;
    info!("loaded {} samples from {}", samples.len(), path.display());
    Ok(normalize_confidences(&samples, mode))
}

fn read_profiles(path: &Path) -> Result<Vec<ModelProfile>> {
    load_profiles(path).with_context(|| format!("reading {}", path.display()))
}

fn accuracy_ranking(profiles: &[ModelProfile]) -> Result<Ranking> {
    Ok(Ranking::new(rank_models(profiles, RankingMode::Accuracy)?)?)
}

fn optional_ranking(path: Option<&Path>, strategies: &[FusionStrategy]) -> Result<Option<Ranking>> {
    match path {
        Some(p) => Ok(Some(accuracy_ranking(&read_profiles(p)?)?)),
        None => match strategies.iter().find(|s| s.needs_ranking()) {
            Some(s) => Err(UsageError(format!("strategy {} needs --profiles", s.flag())).into()),
            None => Ok(None),
        },
    }
}

/// Fuses the input and writes one record per sample.
pub fn cmd_fuse(args: &FuseArgs, common: &CommonArgs) -> Result<Vec<FusedRecord>> {
    let ranking = optional_ranking(args.profiles.as_deref(), &[args.strategy])?;
    let samples = load_samples(&args.input, &common.load_options()?, args.normalize)?;
    let fused = fuse_corpus(&samples, args.strategy, ranking.as_ref())?;
    let records: Vec<FusedRecord> = samples
        .iter()
        .zip(&fused)
        .map(|(s, r)| FusedRecord::new(s, args.strategy, r))
        .collect();
    let mut out = open_output(args.output.as_deref())?;
    write_fused(&records, &mut out)?;
    out.flush()?;
    Ok(records)
}

/// Scores fused outputs per dataset, prints the table and optionally saves
/// the report.
pub fn cmd_eval(args: &EvalArgs, common: &CommonArgs) -> Result<ReportDoc> {
    let opts = common.load_options()?;
    let samples = load_samples(&args.input, &opts, args.normalize)?;
    let mut rows = Vec::new();
    if let Some(path) = &args.fused {
        let records = load_fused(path, &opts).with_context(|| format!("reading {}", path.display()))?;
        let approach = match records.first() {
            Some(first) if records.iter().all(|r| r.strategy == first.strategy) => first.strategy.name().to_string(),
            _ => "fused".to_string(),
        };
        let map: HashMap<String, Text> = records
            .into_iter()
            .map(|r| {
                let text = lprfuse_core::normalize_text(&r.text, &opts.alphabet)?;
                Ok((r.sample_id, text))
            })
            .collect::<Result<_>>()?;
        rows.push(ApproachRow::new(approach, recognition_rate(&samples, &map)?)?);
    } else {
        let ranking = optional_ranking(args.profiles.as_deref(), &args.strategy)?;
        for &strategy in &args.strategy {
            let fused = fuse_corpus(&samples, strategy, ranking.as_ref())?;
            let map: HashMap<String, Text> = samples
                .iter()
                .zip(fused)
                .map(|(s, f)| (s.sample_id.clone(), f.text))
                .collect();
            rows.push(ApproachRow::new(strategy.name(), recognition_rate(&samples, &map)?)?);
        }
    }
    let doc = ReportDoc::Datasets(DatasetTable { rows });
    finish_report(&doc, args.output.as_deref(), args.format)?;
    Ok(doc)
}

/// Sweeps ensemble sizes. Best-model tie-breaks always use the accuracy
/// ranking, whichever order the ensemble grows in.
pub fn cmd_sweep(args: &SweepArgs, common: &CommonArgs) -> Result<ReportDoc> {
    let strategies = if args.strategies.is_empty() {
        FusionStrategy::ALL.to_vec()
    } else {
        args.strategies.clone()
    };
    let profiles = read_profiles(&args.profiles)?;
    let samples = load_samples(&args.input, &common.load_options()?, args.normalize)?;
    let ordered = order_profiles(&profiles, args.rank)?;
    let tie = accuracy_ranking(&profiles)?;
    let report = sweep_top_n(&samples, &ordered, args.rank, &strategies, &tie)?;
    let doc = ReportDoc::Sweep(report);
    finish_report(&doc, args.output.as_deref(), args.format)?;
    Ok(doc)
}

fn finish_report(doc: &ReportDoc, output: Option<&Path>, format: RenderFormat) -> Result<()> {
    if let Some(path) = output {
        write_text(path, &write_report(doc))?;
    }
    let mut out = io::stdout().lock();
    out.write_all(render_report(doc, format).as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Generates the configured corpus.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<Vec<Sample>> {
    let config = load_synth_config(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let samples = generate(&config)?;
    let mut out = open_output(args.output.as_deref())?;
    write_predictions(&samples, &mut out)?;
    out.flush()?;
    if let Some(path) = &args.profiles_output {
        let profiles: Vec<ModelProfile> = config
            .model_ids()
            .into_iter()
            .enumerate()
            .map(|(i, id)| ModelProfile {
                id,
                accuracy_rank: i as u32 + 1,
                latency_ms: 1.0,
            })
            .collect();
        write_text(path, &write_profiles(&profiles))?;
    }
    info!("generated {} samples", samples.len());
    Ok(samples)
}

/// Re-renders a saved report to stdout.
pub fn cmd_report(args: &ReportArgs) -> Result<String> {
    let doc = load_report(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let text = render_report(&doc, args.format);
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(text)
}

/// Exit status for an error returned by [`run`].
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<UsageError>().is_some() {
        2
    } else {
        1
    }
}
