//! Command-line front end. Every subcommand writes CSV artifacts and a
//! `manifest.json` into the output directory.
//!
//! Exit status: 0 on success, 1 for invalid input or configuration
//! (including usage errors), 2 for runtime failures.

mod commands;
mod config;
mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

pub use config::{ExtractConfig, FitConfig, InputConfig, PcaConfig, PipelineConfig, ShuffleConfig};
pub use manifest::{sha256_hex, Manifest, ManifestOutput, MANIFEST_FILE};

use crate::error::{Error, Result};
use crate::nulls::ShuffleScheme;

pub const OUT_ENV: &str = "COLLECTIVE_EMOTION_OUT";

#[derive(Debug, Parser)]
#[command(name = "collective-emotion", version, about = "Collective emotion series from dated text")]
pub struct Cli {
    /// TOML configuration, or a manifest.json from an earlier run.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Top-level seed; every stage derives its own stream from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, env = OUT_ENV, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Fail on the first malformed record or skippable stage instead of
    /// reporting and continuing.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(flatten)]
    pub inputs: InputArgs,

    #[command(flatten)]
    pub overrides: Overrides,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// JSON Lines corpus (`{"date": "YYYY-MM-DD", "text": "..."}` per line).
    #[arg(long, global = true, value_name = "PATH")]
    pub corpus: Option<PathBuf>,
    /// Emotion dictionary (TSV `emotion<TAB>term` or JSON object).
    #[arg(long, global = true, value_name = "PATH")]
    pub dictionary: Option<PathBuf>,
    /// Per-term daily count CSV.
    #[arg(long, global = true, value_name = "PATH")]
    pub counts: Option<PathBuf>,
    /// Daily series CSV with a `date` column.
    #[arg(long, global = true, value_name = "PATH")]
    pub series: Option<PathBuf>,
    /// Value column of `--series`.
    #[arg(long, global = true)]
    pub column: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long, global = true, value_name = "PERCENT")]
    pub spike_threshold: Option<f64>,
    #[arg(long, global = true, value_name = "PERCENT")]
    pub baseline_return: Option<f64>,
    #[arg(long, global = true, value_name = "PERCENT")]
    pub calendar_high: Option<f64>,
    #[arg(long, global = true, value_name = "PERCENT")]
    pub calendar_low: Option<f64>,
    #[arg(long, global = true, value_name = "PERCENT")]
    pub calendar_std_max: Option<f64>,
    #[arg(long, global = true, value_name = "LAG")]
    pub acf_fit_lo: Option<f64>,
    #[arg(long, global = true, value_name = "LAG")]
    pub acf_fit_hi: Option<f64>,
    #[arg(long, global = true, value_name = "FREQ")]
    pub psd_fit_lo: Option<f64>,
    #[arg(long, global = true, value_name = "FREQ")]
    pub psd_fit_hi: Option<f64>,
    #[arg(long, global = true, value_name = "SIGMAS")]
    pub max_mean_shift: Option<f64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Parse a corpus and report malformed records.
    Ingest,
    /// Count dictionary terms and build per-emotion series.
    Extract,
    /// Estimate weekly and yearly periodicity profiles of a series.
    Cycles,
    /// Divide a series by its weekly and yearly profiles.
    RemoveCycles,
    /// Detect spikes against the trailing seven-day mean.
    Spikes {
        #[arg(long, default_value = "series")]
        emotion: String,
    },
    /// Report month-days that are consistently high or low.
    Calendar {
        #[arg(long, default_value = "series")]
        emotion: String,
        /// The input already has weekly and monthly-scale cycles removed.
        #[arg(long)]
        removed: bool,
    },
    /// Autocorrelation averaged over stationary yearly segments.
    Acf,
    /// Power spectral density (Wiener–Khinchin and Welch).
    Psd,
    /// Long-memory exponents of the autocorrelation and the spectrum.
    Fit,
    /// Autocorrelation of shuffled surrogates.
    Shuffle {
        /// One scheme; all configured schemes when omitted.
        #[arg(long)]
        scheme: Option<ShuffleScheme>,
    },
    /// Generate a synthetic corpus with known latent emotion intensities.
    SynthCorpus {
        #[arg(long, default_value = "2020-01-01")]
        start: NaiveDate,
        #[arg(long, default_value_t = 730)]
        days: usize,
        #[arg(long, default_value_t = 1000)]
        docs_per_day: usize,
        /// Write counts, dictionary and latent series only.
        #[arg(long)]
        no_documents: bool,
    },
    /// Generate a synthetic daily series (fGn with cycles and spikes).
    SynthSeries {
        #[arg(long, default_value = "2006-11-01")]
        start: NaiveDate,
        #[arg(long, default_value_t = 3650)]
        length: usize,
        #[arg(long, default_value_t = 0.75)]
        hurst: f64,
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = 1.0)]
        base_level: f64,
    },
    /// Principal components of six-month block means.
    Pca {
        /// Emotion series as NAME=PATH (standardized column by default);
        /// extracted from the corpus or counts when omitted.
        #[arg(long = "emotion-series", value_name = "NAME=PATH")]
        emotion_series: Vec<String>,
    },
    /// Extract, remove cycles, spikes, calendar, memory, surrogates and PCA.
    Pipeline,
    /// Repeat the run recorded in a manifest.
    Rerun { manifest: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Ingest => "ingest",
            Self::Extract => "extract",
            Self::Cycles => "cycles",
            Self::RemoveCycles => "remove-cycles",
            Self::Spikes { .. } => "spikes",
            Self::Calendar { .. } => "calendar",
            Self::Acf => "acf",
            Self::Psd => "psd",
            Self::Fit => "fit",
            Self::Shuffle { .. } => "shuffle",
            Self::SynthCorpus { .. } => "synth-corpus",
            Self::SynthSeries { .. } => "synth-series",
            Self::Pca { .. } => "pca",
            Self::Pipeline => "pipeline",
            Self::Rerun { .. } => "rerun",
        }
    }
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let recorded = recordable_args(&args[1.min(args.len())..]);
    match run(cli, recorded) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}

/// Drops `--config` and `--out` (with their values) from the arguments
/// stored in the manifest.
fn recordable_args(args: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        let a = a.to_string_lossy().into_owned();
        if skip {
            skip = false;
            continue;
        }
        if a == "--config" || a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--config=") || a.starts_with("--out=") {
            continue;
        }
        out.push(a);
    }
    out
}

/// Builds the effective configuration (file, then flags) and runs the
/// subcommand.
pub fn run(cli: Cli, recorded: Vec<String>) -> Result<()> {
    if let Command::Rerun { manifest } = &cli.command {
        return rerun(manifest, cli.out.clone());
    }
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    apply_flags(&mut config, &cli);
    config.validate()?;
    let out = cli
        .out
        .clone()
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    commands::execute(&cli.command, &config, &out, cli.strict, recorded)
}

fn apply_flags(config: &mut PipelineConfig, cli: &Cli) {
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let i = &cli.inputs;
    let input = &mut config.input;
    for (flag, slot) in [
        (&i.corpus, &mut input.corpus),
        (&i.dictionary, &mut input.dictionary),
        (&i.counts, &mut input.counts),
        (&i.series, &mut input.series),
    ] {
        if flag.is_some() {
            slot.clone_from(flag);
        }
    }
    if i.column.is_some() {
        input.column.clone_from(&i.column);
    }
    let o = &cli.overrides;
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut config.spikes.threshold, o.spike_threshold);
    set(&mut config.spikes.baseline_return, o.baseline_return);
    set(&mut config.calendar.high, o.calendar_high);
    set(&mut config.calendar.low, o.calendar_low);
    set(&mut config.calendar.std_max, o.calendar_std_max);
    set(&mut config.fit.acf.lo, o.acf_fit_lo);
    set(&mut config.fit.acf.hi, o.acf_fit_hi);
    set(&mut config.fit.psd.lo, o.psd_fit_lo);
    set(&mut config.fit.psd.hi, o.psd_fit_hi);
    set(&mut config.acf.thresholds.max_mean_shift, o.max_mean_shift);
}

fn rerun(path: &std::path::Path, out: Option<PathBuf>) -> Result<()> {
    let text = config::read_to_string(path)?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut argv = vec![manifest.tool.clone()];
    argv.extend(manifest.args.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| Error::Config(format!("manifest arguments: {e}")))?;
    if matches!(cli.command, Command::Rerun { .. }) {
        return Err(Error::Config("a manifest cannot record a rerun".into()));
    }
    let mut config = manifest.config.clone();
    apply_flags(&mut config, &cli);
    config.validate()?;
    let out = out
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    commands::execute(&cli.command, &config, &out, cli.strict, manifest.args)
}
