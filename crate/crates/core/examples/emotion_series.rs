//! From a synthetic corpus to normalized and standardized emotion series,
//! and how closely they follow the latent intensity.

use chrono::NaiveDate;
use collective_emotion::corpus::{synth_corpus, MatchMode, SynthCorpusConfig};
use collective_emotion::signal::{daily_differences, EmotionSeries};

fn main() -> collective_emotion::Result<()> {
    let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
    let corpus = synth_corpus(&SynthCorpusConfig::demo(start, 365, 2_000, 1), 1)?;
    let counts = corpus.count(MatchMode::Substring);

    for (e, latent) in EmotionSeries::build_all(&counts, corpus.dictionary())?
        .iter()
        .zip(corpus.latent())
    {
        let z: Vec<f64> = e.standardized.valid().collect();
        let p: Vec<f64> = latent.probability.valid().collect();
        let d = daily_differences(&e.standardized)?;
        println!(
            "{:<10} mean {:.4}  sd {:.4}  r(latent) {:.3}  diff skew {:+.2} kurt {:+.2}",
            e.emotion,
            e.mean_raw,
            e.std_raw,
            correlation(&z, &p),
            d.skewness,
            d.excess_kurtosis
        );
    }
    Ok(())
}

fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}
