use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use log::warn;

use super::config::{read_to_string, PipelineConfig};
use super::manifest::Artifacts;
use super::Command;
use crate::corpus::{count_documents, ingest, synth_corpus, write_jsonl, CountMatrix, Document, SynthCorpusConfig};
use crate::dictionary::{dominance_report, frequency_filter, load_dictionary, EmotionDictionary};
use crate::error::{Error, Result};
use crate::events::{calendar_report, detect_spikes, CalendarDateReport, SpikeReport};
use crate::io;
use crate::memory::{autocovariance_gapped, long_memory, Estimator, MemoryFit};
use crate::nulls::{surrogate_acf, synth_series, ShuffleScheme, SurrogateSpec, SynthSpec};
use crate::pca::{leading_scores, pca_fit, six_month_blocks, surrogate_smoothness, trajectory_smoothness};
use crate::periodicity::{
    daily_yearly_profile, monthly_yearly_profile, remove_cycles, weekly_profile, CycleConfig, CycleRemoval,
    YearlyScale,
};
use crate::rng::subseed;
use crate::series::DailySeries;
use crate::signal::{daily_differences, standardize, EmotionSeries};

pub(super) fn execute(
    command: &Command,
    config: &PipelineConfig,
    out: &Path,
    strict: bool,
    args: Vec<String>,
) -> Result<()> {
    let mut art = Artifacts::new(out)?;
    match command {
        Command::Ingest => ingest_cmd(config, strict, &mut art)?,
        Command::Extract => {
            extract(config, strict, &mut art, "")?;
        }
        Command::Cycles => cycles_cmd(config, strict, &mut art)?,
        Command::RemoveCycles => {
            let s = load_series(config)?;
            let removal = remove_cycles(&s, &config.cycles)?;
            write_removal(&mut art, "", &removal)?;
        }
        Command::Spikes { emotion } => {
            let report = detect_spikes(&load_series(config)?, emotion, &config.spikes);
            art.write("spikes.csv", |w| io::write_spikes_csv(w, &report))?;
            print!("{report}");
        }
        Command::Calendar { emotion, removed } => {
            let s = load_series(config)?;
            let input = if *removed { s } else { calendar_input(&s, config)? };
            let report = calendar_report(&input, emotion, &config.calendar)?;
            art.write("calendar.csv", |w| io::write_calendar_csv(w, &report))?;
            print!("{report}");
        }
        Command::Acf | Command::Psd | Command::Fit => {
            let s = load_series(config)?;
            let m = memory(&mut art, "", &s, config, command)?;
            if let Command::Fit = command {
                let (a, b) = (m.alpha.exponent, m.beta.exponent);
                println!("alpha {a:.4}  beta {b:.4}  |(1 - alpha) - beta| {:.4}", ((1.0 - a) - b).abs());
            }
        }
        Command::Shuffle { scheme } => {
            let schemes = scheme.map_or_else(|| config.shuffle.schemes.clone(), |s| vec![s]);
            let z = standardize(&load_series(config)?)?.series;
            shuffles(&mut art, "", &z, config, &schemes)?;
        }
        Command::SynthCorpus {
            start,
            days,
            docs_per_day,
            no_documents,
        } => {
            let cfg = config.synth_corpus.clone().unwrap_or_else(|| {
                SynthCorpusConfig::demo(*start, *days, *docs_per_day, subseed(config.seed, "synth-corpus-latent"))
            });
            synth_corpus_cmd(&mut art, &cfg, config.seed, !no_documents)?;
        }
        Command::SynthSeries {
            start,
            length,
            hurst,
            noise,
            base_level,
        } => {
            let mut spec = config.synth_series.clone().unwrap_or_else(|| {
                let mut s = SynthSpec::new(*length, *start);
                s.hurst = *hurst;
                s.noise = *noise;
                s.base_level = *base_level;
                s
            });
            spec.seed = subseed(config.seed, "synth-series");
            let s = synth_series(&spec)?;
            art.write("series.csv", |w| io::write_columns_csv(w, &[("value", &s)]))?;
        }
        Command::Pca { emotion_series } => {
            let series = if emotion_series.is_empty() {
                extract(config, strict, &mut art, "")?
                    .into_iter()
                    .map(|e| (e.emotion, e.standardized))
                    .collect()
            } else {
                read_named_series(emotion_series, config)?
            };
            pca(&mut art, &series, config)?;
        }
        Command::Pipeline => pipeline(config, strict, &mut art)?,
        Command::Rerun { .. } => unreachable!("handled before execution"),
    }
    let manifest = art.finish(command.name(), args, config)?;
    eprintln!("{}: {} artifacts in {}", command.name(), manifest.outputs.len(), out.display());
    Ok(())
}

fn load_series(config: &PipelineConfig) -> Result<DailySeries> {
    let path = config
        .input
        .series
        .as_ref()
        .ok_or_else(|| Error::Config("this command needs --series".into()))?;
    io::read_series_csv(open(path)?, config.input.column.as_deref())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| Error::ReadPath {
        path: path.to_path_buf(),
        source,
    })
}

fn read_named_series(specs: &[String], config: &PipelineConfig) -> Result<Vec<(String, DailySeries)>> {
    specs
        .iter()
        .map(|spec| {
            let (name, path) = spec
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("{spec:?} is not NAME=PATH")))?;
            let column = config.input.column.as_deref().unwrap_or("standardized");
            Ok((name.to_string(), io::read_series_csv(open(Path::new(path))?, Some(column))?))
        })
        .collect()
}

/// Directory name for an emotion: lowercase letters and digits, anything
/// else becomes `_`.
pub(super) fn slug(name: &str) -> String {
    name.chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}

fn join(prefix: &str, file: &str) -> String {
    if prefix.is_empty() {
        file.to_string()
    } else {
        format!("{prefix}/{file}")
    }
}

fn read_corpus(config: &PipelineConfig, strict: bool) -> Result<(Vec<Document>, crate::corpus::ParseReport)> {
    let path = config
        .input
        .corpus
        .as_ref()
        .ok_or_else(|| Error::Config("this command needs --corpus".into()))?;
    ingest(open(path)?, strict)
}

fn ingest_cmd(config: &PipelineConfig, strict: bool, art: &mut Artifacts) -> Result<()> {
    let (docs, report) = read_corpus(config, strict)?;
    art.write("documents.jsonl", |w| write_jsonl(w, docs.iter().cloned()))?;
    art.write("rejections.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["line", "reason"])?;
        for r in &report.rejected {
            c.write_record([r.line.to_string(), r.reason.clone()])?;
        }
        c.flush()?;
        Ok(())
    })?;
    println!("accepted {}  rejected {}", report.accepted, report.rejected.len());
    Ok(())
}

fn load_dict(config: &PipelineConfig) -> Result<EmotionDictionary> {
    let path = config
        .input
        .dictionary
        .as_ref()
        .ok_or_else(|| Error::Config("this command needs --dictionary".into()))?;
    load_dictionary(read_to_string(path)?.as_bytes())
}

/// Counts (from counts CSV or corpus), optional frequency filtering,
/// dominance report and the per-emotion series.
fn extract(config: &PipelineConfig, strict: bool, art: &mut Artifacts, prefix: &str) -> Result<Vec<EmotionSeries>> {
    let mut dict = load_dict(config)?;
    let counts = match (&config.input.counts, &config.input.corpus) {
        (Some(path), _) => CountMatrix::read_csv(open(path)?)?,
        (None, Some(_)) => {
            let (docs, report) = read_corpus(config, strict)?;
            if !report.rejected.is_empty() {
                warn!("{} malformed records skipped", report.rejected.len());
            }
            let counts = count_documents(&docs, &dict, config.extract.match_mode);
            art.write(&join(prefix, "counts.csv"), |w| counts.write_csv(w))?;
            counts
        }
        (None, None) => return Err(Error::Config("extract needs --corpus or --counts".into())),
    };
    if counts.days() == 0 {
        return Err(Error::InsufficientData("no documents to count".into()));
    }
    if let Some(band) = config.extract.frequency_band {
        let (kept, report) = frequency_filter(&dict, &counts.term_totals(), counts.total_documents(), band)?;
        art.write(&join(prefix, "filtered_terms.csv"), |w| {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["emotion", "term", "frequency"])?;
            for r in &report.removed {
                c.write_record([r.emotion.clone(), r.term.clone(), r.frequency.to_string()])?;
            }
            c.flush()?;
            Ok(())
        })?;
        dict = kept;
    }
    let totals = counts
        .term_totals()
        .into_iter()
        .map(|(k, v)| (k, v as f64))
        .collect();
    let dominance = dominance_report(&dict, &totals, config.extract.dominance_threshold)?;
    art.write(&join(prefix, "dominance.csv"), |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["emotion", "term", "total", "share", "flagged"])?;
        for e in &dominance {
            for s in e.shares.iter().flatten() {
                c.write_record([
                    e.emotion.clone(),
                    s.term.clone(),
                    s.total.to_string(),
                    s.share.to_string(),
                    s.flagged.to_string(),
                ])?;
            }
        }
        c.flush()?;
        Ok(())
    })?;
    let series = EmotionSeries::build_all(&counts, &dict)?;
    let mut summary = Vec::new();
    for e in &series {
        art.write(&join(prefix, &format!("{}/series.csv", slug(&e.emotion))), |w| e.write_csv(w))?;
        let d = daily_differences(&e.standardized)?;
        summary.push([
            e.emotion.clone(),
            dict.get(&e.emotion).map_or(0, |x| x.terms.len()).to_string(),
            e.mean_raw.to_string(),
            e.std_raw.to_string(),
            d.std.to_string(),
            d.skewness.to_string(),
            d.excess_kurtosis.to_string(),
        ]);
    }
    art.write(&join(prefix, "emotions.csv"), |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["emotion", "terms", "mean", "std", "diff_std", "diff_skewness", "diff_excess_kurtosis"])?;
        for row in &summary {
            c.write_record(row)?;
        }
        c.flush()?;
        Ok(())
    })?;
    Ok(series)
}

fn cycles_cmd(config: &PipelineConfig, strict: bool, art: &mut Artifacts) -> Result<()> {
    let s = load_series(config)?;
    let weekly = weekly_profile(&s, &config.cycles.weekly_exclusions)?;
    art.write("weekly_profile.csv", |w| io::write_profile_csv(w, &weekly))?;
    let ex = &config.cycles.yearly_exclusions;
    for (file, profile) in [
        ("yearly_monthly_profile.csv", monthly_yearly_profile(&s, ex)),
        ("yearly_daily_profile.csv", daily_yearly_profile(&s, ex)),
    ] {
        match profile {
            Ok(p) => art.write(file, |w| io::write_profile_csv(w, &p))?,
            Err(e @ Error::NoCompleteCycles { .. }) if !strict => warn!("{file} skipped: {e}"),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn write_removal(art: &mut Artifacts, prefix: &str, removal: &CycleRemoval) -> Result<()> {
    art.write(&join(prefix, "weekly_profile.csv"), |w| io::write_profile_csv(w, &removal.weekly))?;
    if let Some(y) = &removal.yearly {
        art.write(&join(prefix, "yearly_profile.csv"), |w| io::write_profile_csv(w, y))?;
    }
    art.write(&join(prefix, "residual.csv"), |w| {
        io::write_columns_csv(w, &[("value", &removal.residual)])
    })
}

/// Weekly and monthly-scale cycles removed, as the calendar report expects.
fn calendar_input(series: &DailySeries, config: &PipelineConfig) -> Result<DailySeries> {
    let cfg = CycleConfig {
        yearly_scale: YearlyScale::Monthly,
        ..config.cycles.clone()
    };
    Ok(remove_cycles(series, &cfg)?.residual)
}

struct MemorySummary {
    alpha: MemoryFit,
    beta: MemoryFit,
    segments_used: usize,
    segments_total: usize,
}

/// Yearly-segment autocorrelation, both spectra, and the exponent fits.
/// `command` selects which artifacts are written; the pipeline writes all.
fn memory(
    art: &mut Artifacts,
    prefix: &str,
    series: &DailySeries,
    config: &PipelineConfig,
    command: &Command,
) -> Result<MemorySummary> {
    let all = matches!(command, Command::Pipeline);
    let lm = long_memory(series, &config.long_memory())?;
    let (yearly, alpha, beta) = (&lm.yearly, lm.alpha, lm.beta);
    if all || matches!(command, Command::Acf) {
        art.write(&join(prefix, "acf.csv"), |w| io::write_acf_csv(w, &yearly.estimate))?;
        art.write(&join(prefix, "segments.csv"), |w| {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["segment", "start", "passed", "mean_shift", "variance_ratio", "reason"])?;
            for (i, chk) in yearly.checks.iter().enumerate() {
                c.write_record([
                    i.to_string(),
                    lm.dates[i * config.acf.segment].to_string(),
                    chk.passed.to_string(),
                    chk.mean_shift.to_string(),
                    chk.variance_ratio.map_or_else(String::new, |v| v.to_string()),
                    chk.reason.clone().unwrap_or_default(),
                ])?;
            }
            c.flush()?;
            Ok(())
        })?;
    }
    if all || matches!(command, Command::Psd) {
        art.write(&join(prefix, "psd_wk.csv"), |w| io::write_psd_csv(w, &lm.wiener_khinchin))?;
        art.write(&join(prefix, "psd_welch.csv"), |w| io::write_psd_csv(w, &lm.welch))?;
    }
    if all || matches!(command, Command::Fit) {
        art.write(&join(prefix, "fit.csv"), |w| io::write_fit_csv(w, &[("alpha", &alpha), ("beta", &beta)]))?;
    }
    Ok(MemorySummary {
        alpha,
        beta,
        segments_used: yearly.segments_used,
        segments_total: yearly.segments_total,
    })
}

fn shuffles(
    art: &mut Artifacts,
    prefix: &str,
    z: &DailySeries,
    config: &PipelineConfig,
    schemes: &[ShuffleScheme],
) -> Result<()> {
    let lag = config.shuffle.max_lag;
    let original = autocovariance_gapped(z.values(), lag, Estimator::Biased)?;
    art.write(&join(prefix, "shuffle_original_acf.csv"), |w| io::write_acf_csv(w, &original))?;
    for scheme in schemes {
        let spec = SurrogateSpec {
            scheme: *scheme,
            seed: subseed(config.seed, &format!("shuffle-{prefix}")),
            repetitions: config.shuffle.repetitions,
        };
        let acf = surrogate_acf(z, &spec, lag)?;
        art.write(&join(prefix, &format!("shuffle_{scheme}_acf.csv")), |w| io::write_acf_csv(w, &acf))?;
    }
    Ok(())
}

fn pca(art: &mut Artifacts, series: &[(String, DailySeries)], config: &PipelineConfig) -> Result<()> {
    let blocks = six_month_blocks(series)?;
    let fit = pca_fit(&blocks.rows)?;
    art.write("pca_blocks.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        let mut header = vec!["block_start".to_string()];
        header.extend(blocks.emotions.iter().cloned());
        c.write_record(&header)?;
        for (d, row) in blocks.block_starts.iter().zip(&blocks.rows) {
            let mut r = vec![d.to_string()];
            r.extend(row.iter().map(f64::to_string));
            c.write_record(&r)?;
        }
        c.flush()?;
        Ok(())
    })?;
    art.write("pca_eigenvectors.csv", |w| io::write_eigenvectors_csv(w, &blocks.emotions, &fit))?;
    art.write("pca_scores.csv", |w| io::write_scores_csv(w, &blocks, &fit))?;
    art.write("pca_contribution.csv", |w| io::write_contribution_csv(w, &fit))?;
    let real = trajectory_smoothness(&leading_scores(&fit, 2));
    let spec = SurrogateSpec {
        scheme: config.pca.scheme,
        seed: subseed(config.seed, "pca"),
        repetitions: config.pca.repetitions,
    };
    let surrogate = surrogate_smoothness(series, &spec);
    art.write("pca_smoothness.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["input", "replicate", "ratio"])?;
        let cell = |r: &Result<f64>| r.as_ref().map_or_else(|e| format!("error: {e}"), f64::to_string);
        c.write_record(["original".to_string(), "0".to_string(), cell(&real)])?;
        match &surrogate {
            Ok(ratios) => {
                for (i, r) in ratios.iter().enumerate() {
                    c.write_record([spec.scheme.to_string(), i.to_string(), r.to_string()])?;
                }
            }
            Err(e) => c.write_record([spec.scheme.to_string(), String::new(), format!("error: {e}")])?,
        }
        c.flush()?;
        Ok(())
    })?;
    for (k, (c, cum)) in fit.contribution.iter().zip(&fit.cumulative).enumerate().take(3) {
        println!("pc{}  contribution {:.3}  cumulative {:.3}", k + 1, c, cum);
    }
    Ok(())
}

fn synth_corpus_cmd(art: &mut Artifacts, cfg: &SynthCorpusConfig, seed: u64, documents: bool) -> Result<()> {
    let corpus = synth_corpus(cfg, subseed(seed, "synth-corpus"))?;
    art.write("dictionary.tsv", |w| Ok(w.write_all(corpus.dictionary().to_tsv().as_bytes())?))?;
    let counts = corpus.count(crate::corpus::MatchMode::Substring);
    art.write("counts.csv", |w| counts.write_csv(w))?;
    let latent: Vec<(&str, &DailySeries)> = corpus
        .latent()
        .iter()
        .map(|l| (l.emotion.as_str(), &l.probability))
        .collect();
    art.write("latent.csv", |w| io::write_columns_csv(w, &latent))?;
    if documents {
        art.write("corpus.jsonl", |w| write_jsonl(w, corpus.documents()))?;
    }
    Ok(())
}

fn pipeline(config: &PipelineConfig, strict: bool, art: &mut Artifacts) -> Result<()> {
    let series = extract(config, strict, art, "")?;
    let mut spikes = Vec::new();
    let mut calendars = Vec::new();
    let mut summary = Vec::new();
    for e in &series {
        let dir = slug(&e.emotion);
        let removal = remove_cycles(&e.normalized, &config.cycles)?;
        write_removal(art, &dir, &removal)?;
        spikes.push(detect_spikes(&removal.residual, &e.emotion, &config.spikes));
        match calendar_input(&e.normalized, config).and_then(|s| calendar_report(&s, &e.emotion, &config.calendar)) {
            Ok(r) => calendars.push(r),
            Err(err @ Error::InsufficientData(_)) if !strict => warn!("calendar report for {}: {err}", e.emotion),
            Err(err) => return Err(err),
        }
        let m = match memory(art, &dir, &removal.residual, config, &Command::Pipeline) {
            Ok(m) => Some(m),
            Err(err @ (Error::InsufficientData(_) | Error::SegmentTooLong { .. })) if !strict => {
                warn!("memory stage for {}: {err}", e.emotion);
                None
            }
            Err(err) => return Err(err),
        };
        let z = standardize(&removal.residual)?.series;
        shuffles(art, &dir, &z, config, &config.shuffle.schemes)?;
        summary.push([
            e.emotion.clone(),
            removal.weekly.cycles.to_string(),
            removal.yearly.as_ref().map_or(0, |y| y.cycles).to_string(),
            m.as_ref().map_or_else(String::new, |m| m.segments_used.to_string()),
            m.as_ref().map_or_else(String::new, |m| m.segments_total.to_string()),
            m.as_ref().map_or_else(String::new, |m| m.alpha.exponent.to_string()),
            m.as_ref().map_or_else(String::new, |m| m.beta.exponent.to_string()),
        ]);
    }
    let spikes = SpikeReport::merge(spikes);
    let calendars = CalendarDateReport::merge(calendars);
    art.write("spikes.csv", |w| io::write_spikes_csv(w, &spikes))?;
    art.write("calendar.csv", |w| io::write_calendar_csv(w, &calendars))?;
    art.write("summary.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["emotion", "weekly_cycles", "yearly_cycles", "segments_used", "segments_total", "alpha", "beta"])?;
        for row in &summary {
            c.write_record(row)?;
        }
        c.flush()?;
        Ok(())
    })?;
    let z: Vec<(String, DailySeries)> = series.into_iter().map(|e| (e.emotion, e.standardized)).collect();
    match pca(art, &z, config) {
        Err(err @ Error::InsufficientData(_)) if !strict => warn!("PCA skipped: {err}"),
        other => other?,
    }
    print!("{spikes}");
    if !calendars.entries.is_empty() {
        print!("{calendars}");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(slug("Tension"), "tension");
        assert_eq!(slug("Low mood/2"), "low_mood_2");
        assert_eq!(slug("緊張"), "緊張");
    }
}
