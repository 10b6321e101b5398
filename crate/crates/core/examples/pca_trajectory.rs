//! Principal components of six-month means of six emotion series, and how
//! smoothly the blocks move through the first two components compared with
//! weekly-shuffled surrogates.

use chrono::NaiveDate;
use collective_emotion::corpus::{synth_corpus, MatchMode, SynthCorpusConfig};
use collective_emotion::nulls::{ShuffleScheme, SurrogateSpec};
use collective_emotion::pca::{leading_scores, pca_fit, six_month_blocks, surrogate_smoothness, trajectory_smoothness};
use collective_emotion::signal::EmotionSeries;
use collective_emotion::DailySeries;

fn main() -> collective_emotion::Result<()> {
    let start = NaiveDate::from_ymd_opt(2006, 11, 1).unwrap();
    let corpus = synth_corpus(&SynthCorpusConfig::demo(start, 3650, 300, 9), 9)?;
    let counts = corpus.count(MatchMode::Substring);
    let series: Vec<(String, DailySeries)> = EmotionSeries::build_all(&counts, corpus.dictionary())?
        .into_iter()
        .map(|e| (e.emotion, e.standardized))
        .collect();

    let blocks = six_month_blocks(&series)?;
    let fit = pca_fit(&blocks.rows)?;
    for (k, (c, cum)) in fit.contribution.iter().zip(&fit.cumulative).enumerate().take(3) {
        println!("PC{}  {:.1}%  cumulative {:.1}%", k + 1, 100.0 * c, 100.0 * cum);
    }
    let observed = trajectory_smoothness(&leading_scores(&fit, 2))?;
    let shuffled = surrogate_smoothness(&series, &SurrogateSpec::new(ShuffleScheme::Weekly, 9))?;
    let mean = shuffled.iter().sum::<f64>() / shuffled.len() as f64;
    println!("{} blocks; step/pair distance {observed:.3}, weekly-shuffled mean {mean:.3}", blocks.rows.len());
    Ok(())
}
