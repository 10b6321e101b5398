use chrono::{Duration, NaiveDate};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CountMatrix, Document, MatchMode, TermMatcher};
use crate::dictionary::{EmotionDictionary, EmotionEntry};
use crate::error::{Error, Result};
use crate::nulls::{synth_series, SynthSpec};
use crate::rng::{substream, subseed};
use crate::series::DailySeries;

/// One emotion of a synthetic corpus. `intensity` is the daily probability
/// that a document includes one of `terms`; its `length` and `start` are
/// taken from the corpus configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatentEmotion {
    pub name: String,
    pub terms: Vec<String>,
    pub intensity: SynthSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthCorpusConfig {
    pub start: NaiveDate,
    pub days: usize,
    pub docs_per_day: usize,
    #[serde(default = "default_filler_tokens")]
    pub filler_tokens: usize,
    #[serde(default = "default_filler_vocabulary")]
    pub filler_vocabulary: usize,
    pub emotions: Vec<LatentEmotion>,
}

fn default_filler_tokens() -> usize {
    4
}

fn default_filler_vocabulary() -> usize {
    500
}

pub const DEMO_EMOTIONS: [(&str, usize); 6] = [
    ("Tension", 21),
    ("Depression", 25),
    ("Anger", 25),
    ("Vigor", 20),
    ("Fatigue", 22),
    ("Confusion", 35),
];

impl SynthCorpusConfig {
    /// Six emotions with dictionary sizes 21/25/25/20/22/35, distinct weekly
    /// cycles and long-memory intensity fluctuations.
    pub fn demo(start: NaiveDate, days: usize, docs_per_day: usize, seed: u64) -> Self {
        let weekly = [
            [0.95, 0.97, 0.98, 1.00, 1.08, 1.02, 1.00],
            [1.10, 1.02, 0.98, 0.97, 0.96, 0.98, 0.99],
            [1.04, 1.04, 1.03, 1.02, 1.01, 0.93, 0.93],
            [0.96, 0.97, 0.98, 0.99, 1.02, 1.05, 1.03],
            [1.12, 1.02, 0.98, 0.96, 0.96, 0.97, 0.99],
            [1.01, 1.00, 1.00, 1.00, 1.00, 0.99, 1.00],
        ];
        let emotions = DEMO_EMOTIONS
            .iter()
            .zip(weekly)
            .map(|((name, size), w)| {
                let terms = (0..*size)
                    .map(|i| format!("{}_{i:02}", name.to_lowercase()))
                    .collect();
                let mut intensity = SynthSpec::new(days, start);
                intensity.base_level = 0.2;
                intensity.weekly = Some(w.to_vec());
                intensity.hurst = 0.75;
                intensity.noise = 0.15;
                intensity.seed = subseed(seed, name);
                LatentEmotion {
                    name: name.to_string(),
                    terms,
                    intensity,
                }
            })
            .collect();
        Self {
            start,
            days,
            docs_per_day,
            filler_tokens: default_filler_tokens(),
            filler_vocabulary: default_filler_vocabulary(),
            emotions,
        }
    }

    pub fn dictionary(&self) -> Result<EmotionDictionary> {
        EmotionDictionary::new(
            self.emotions
                .iter()
                .map(|e| EmotionEntry {
                    name: e.name.clone(),
                    terms: e.terms.clone(),
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatentSeries {
    pub emotion: String,
    /// Daily inclusion probability.
    pub probability: DailySeries,
}

/// A generated corpus. Documents are produced lazily per day from
/// day-specific seeded streams, so any day can be regenerated on its own
/// and counting can run without holding the corpus in memory.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    config: SynthCorpusConfig,
    dictionary: EmotionDictionary,
    latent: Vec<LatentSeries>,
    probabilities: Vec<Vec<f64>>,
    filler: Vec<String>,
    seed: u64,
}

pub fn synth_corpus(config: &SynthCorpusConfig, seed: u64) -> Result<SyntheticCorpus> {
    let dictionary = config.dictionary()?;
    let mut latent = Vec::with_capacity(config.emotions.len());
    let mut probabilities = Vec::with_capacity(config.emotions.len());
    for e in &config.emotions {
        let mut spec = e.intensity.clone();
        spec.length = config.days;
        spec.start = config.start;
        let series = synth_series(&spec)?;
        let p: Vec<f64> = series.valid().collect();
        if let Some((day, v)) = p.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Config(format!(
                "inclusion probability {v} for {:?} on day {day} is outside [0, 1]",
                e.name
            )));
        }
        latent.push(LatentSeries {
            emotion: e.name.clone(),
            probability: series,
        });
        probabilities.push(p);
    }
    let matcher = TermMatcher::new(&dictionary, MatchMode::Substring);
    let filler: Vec<String> = (0..config.filler_vocabulary * 2)
        .map(|i| format!("x{i}"))
        .filter(|w| matcher.matched_terms(w).is_empty())
        .take(config.filler_vocabulary)
        .collect();
    if filler.is_empty() && config.filler_tokens > 0 {
        return Err(Error::Config("no filler word avoids every dictionary term".into()));
    }
    Ok(SyntheticCorpus {
        config: config.clone(),
        dictionary: config.dictionary()?,
        latent,
        probabilities,
        filler,
        seed,
    })
}

impl SyntheticCorpus {
    pub fn config(&self) -> &SynthCorpusConfig {
        &self.config
    }

    pub fn dictionary(&self) -> &EmotionDictionary {
        &self.dictionary
    }

    pub fn latent(&self) -> &[LatentSeries] {
        &self.latent
    }

    pub fn day_documents(&self, day: usize) -> Vec<Document> {
        let date = self.config.start + Duration::days(day as i64);
        let mut rng = substream(self.seed, &format!("corpus-day-{day}"));
        (0..self.config.docs_per_day)
            .map(|_| {
                let mut tokens: Vec<&str> = Vec::new();
                for (e, p) in self.config.emotions.iter().zip(&self.probabilities) {
                    if rng.gen::<f64>() < p[day] {
                        tokens.push(&e.terms[rng.gen_range(0..e.terms.len())]);
                    }
                }
                for _ in 0..self.config.filler_tokens {
                    tokens.push(&self.filler[rng.gen_range(0..self.filler.len())]);
                }
                tokens.shuffle(&mut rng);
                Document {
                    date,
                    text: tokens.join(" "),
                }
            })
            .collect()
    }

    pub fn documents(&self) -> impl Iterator<Item = Document> + '_ {
        (0..self.config.days).flat_map(|d| self.day_documents(d))
    }

    /// Counts the corpus day by day without materializing it; days are
    /// processed in parallel.
    pub fn count(&self, mode: MatchMode) -> CountMatrix {
        let matcher = TermMatcher::new(&self.dictionary, mode);
        let n_terms = matcher.terms().len();
        let per_day: Vec<(u32, Vec<u32>)> = (0..self.config.days)
            .into_par_iter()
            .map(|day| {
                let mut counts = vec![0u32; n_terms];
                let docs = self.day_documents(day);
                for d in &docs {
                    for h in matcher.matched_terms(&d.text) {
                        counts[h as usize] += 1;
                    }
                }
                (docs.len() as u32, counts)
            })
            .collect();
        let mut m = CountMatrix::zeros(matcher.terms().to_vec(), self.config.start, self.config.days);
        for (day, (total, counts)) in per_day.into_iter().enumerate() {
            m.totals[day] = total;
            for (t, c) in counts.into_iter().enumerate() {
                m.counts[t][day] = c;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::count_documents;
    use crate::series::ymd;

    fn single(p: f64, days: usize, docs: usize) -> SynthCorpusConfig {
        let mut intensity = SynthSpec::new(days, ymd(2020, 1, 1));
        intensity.base_level = p;
        SynthCorpusConfig {
            start: ymd(2020, 1, 1),
            days,
            docs_per_day: docs,
            filler_tokens: 3,
            filler_vocabulary: 50,
            emotions: vec![LatentEmotion {
                name: "A".into(),
                terms: vec!["alpha".into(), "beta".into()],
                intensity,
            }],
        }
    }

    #[test]
    fn zero_intensity_never_matches() {
        let c = synth_corpus(&single(0.0, 10, 100), 1).unwrap();
        let m = c.count(MatchMode::Substring);
        assert!(m.totals().iter().all(|&t| t == 100));
        assert_eq!(m.term_totals().values().sum::<u64>(), 0);
    }

    #[test]
    fn half_inclusion_rate() {
        let c = synth_corpus(&single(0.5, 10, 10_000), 2).unwrap();
        let m = c.count(MatchMode::Substring);
        for day in 0..10 {
            let hits = m.term_series("alpha").unwrap()[day] + m.term_series("beta").unwrap()[day];
            let frac = f64::from(hits) / 10_000.0;
            assert!((frac - 0.5).abs() < 0.02, "day {day}: {frac}");
        }
    }

    #[test]
    fn streaming_count_equals_materialized_count() {
        let c = synth_corpus(&SynthCorpusConfig::demo(ymd(2020, 1, 1), 5, 200, 3), 3).unwrap();
        let docs: Vec<Document> = c.documents().collect();
        assert_eq!(docs.len(), 1000);
        assert_eq!(c.count(MatchMode::Substring), count_documents(&docs, c.dictionary(), MatchMode::Substring));
    }

    #[test]
    fn deterministic() {
        let cfg = single(0.3, 3, 20);
        let a: Vec<_> = synth_corpus(&cfg, 9).unwrap().documents().collect();
        let b: Vec<_> = synth_corpus(&cfg, 9).unwrap().documents().collect();
        let c: Vec<_> = synth_corpus(&cfg, 10).unwrap().documents().collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn probability_above_one_rejected() {
        assert!(matches!(synth_corpus(&single(1.5, 3, 5), 0), Err(Error::Config(_))));
    }
}
