//! Emotion dictionaries: loading, validation, frequency filtering and
//! per-term dominance diagnostics.
//!
//! Terms are stored in canonical form (NFKC, lower case) so that width and
//! case variants of the same word collapse to one pattern. Documents are
//! canonicalized the same way before matching.

use std::collections::{HashMap, HashSet};
use std::io::Read;

use serde::{Deserialize, Serialize};
use unicode_normalization::{is_nfkc_quick, IsNormalized, UnicodeNormalization};

use crate::error::{Error, Result};

/// NFKC normalization followed by lower-casing.
pub fn canonicalize(text: &str) -> String {
    match is_nfkc_quick(text.chars()) {
        IsNormalized::Yes => text.to_lowercase(),
        _ => text.nfkc().collect::<String>().to_lowercase(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmotionEntry {
    pub name: String,
    pub terms: Vec<String>,
}

/// Named emotions, each with a non-empty list of unique terms. No term is
/// shared between two emotions. Emotion order is the order of the source
/// file and fixes the column order of every matrix built from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmotionDictionary {
    emotions: Vec<EmotionEntry>,
}

impl EmotionDictionary {
    /// Builds a validated dictionary. Terms are canonicalized; repeated terms
    /// within one emotion collapse to their first occurrence.
    pub fn new(entries: Vec<EmotionEntry>) -> Result<Self> {
        let mut names = HashSet::new();
        let mut owner: HashMap<String, String> = HashMap::new();
        let mut emotions = Vec::with_capacity(entries.len());
        for entry in entries {
            if !names.insert(entry.name.clone()) {
                return Err(Error::DuplicateEmotion(entry.name));
            }
            let mut seen = HashSet::new();
            let mut terms = Vec::new();
            for raw in &entry.terms {
                let term = canonicalize(raw.trim());
                if term.is_empty() {
                    return Err(Error::Config(format!(
                        "emotion {:?} contains an empty term",
                        entry.name
                    )));
                }
                if !seen.insert(term.clone()) {
                    continue;
                }
                if let Some(first) = owner.get(&term) {
                    return Err(Error::DuplicateTerm {
                        term,
                        first: first.clone(),
                        second: entry.name.clone(),
                    });
                }
                owner.insert(term.clone(), entry.name.clone());
                terms.push(term);
            }
            if terms.is_empty() {
                return Err(Error::EmptyEmotion(entry.name));
            }
            emotions.push(EmotionEntry {
                name: entry.name,
                terms,
            });
        }
        Ok(Self { emotions })
    }

    pub fn emotions(&self) -> &[EmotionEntry] {
        &self.emotions
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.emotions.iter().map(|e| e.name.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&EmotionEntry> {
        self.emotions.iter().find(|e| e.name == name)
    }

    /// All terms in emotion order.
    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.emotions
            .iter()
            .flat_map(|e| e.terms.iter().map(String::as_str))
    }

    pub fn term_count(&self) -> usize {
        self.emotions.iter().map(|e| e.terms.len()).sum()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in &self.emotions {
            for t in &e.terms {
                out.push_str(&e.name);
                out.push('\t');
                out.push_str(t);
                out.push('\n');
            }
        }
        out
    }
}

/// Reads a dictionary from either of the two accepted formats: a JSON
/// object mapping emotion names to term lists, or tab-separated
/// `emotion<TAB>term` lines (`#` starts a comment line).
pub fn load_dictionary<R: Read>(mut source: R) -> Result<EmotionDictionary> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    if text.trim_start().starts_with('{') {
        parse_json(&text)
    } else {
        parse_tsv(&text)
    }
}

pub fn parse_tsv(text: &str) -> Result<EmotionDictionary> {
    let mut entries: Vec<EmotionEntry> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (emotion, term) = line.split_once('\t').ok_or(Error::DictionaryFormat {
            line: i + 1,
            reason: "expected emotion<TAB>term".into(),
        })?;
        let (emotion, term) = (emotion.trim(), term.trim());
        if emotion.is_empty() || term.is_empty() {
            return Err(Error::DictionaryFormat {
                line: i + 1,
                reason: "empty emotion or term".into(),
            });
        }
        match entries.iter_mut().find(|e| e.name == emotion) {
            Some(e) => e.terms.push(term.to_string()),
            None => entries.push(EmotionEntry {
                name: emotion.to_string(),
                terms: vec![term.to_string()],
            }),
        }
    }
    EmotionDictionary::new(entries)
}

pub fn parse_json(text: &str) -> Result<EmotionDictionary> {
    let map: serde_json::Map<String, serde_json::Value> = serde_json::from_str(text)
        .map_err(|e| Error::DictionaryFormat {
            line: e.line(),
            reason: e.to_string(),
        })?;
    let mut entries = Vec::with_capacity(map.len());
    for (name, value) in map {
        let terms: Vec<String> =
            serde_json::from_value(value).map_err(|e| Error::DictionaryFormat {
                line: 0,
                reason: format!("emotion {name:?}: {e}"),
            })?;
        entries.push(EmotionEntry { name, terms });
    }
    EmotionDictionary::new(entries)
}

/// Document-frequency band outside of which terms are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrequencyBand {
    pub low: f64,
    pub high: f64,
}

impl Default for FrequencyBand {
    fn default() -> Self {
        Self {
            low: 1e-7,
            high: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemovedTerm {
    pub emotion: String,
    pub term: String,
    pub frequency: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FilterReport {
    pub removed: Vec<RemovedTerm>,
}

/// Drops terms whose document frequency `count / total_docs` falls below
/// `band.low` or above `band.high`.
pub fn frequency_filter(
    dict: &EmotionDictionary,
    doc_counts: &HashMap<String, u64>,
    total_docs: u64,
    band: FrequencyBand,
) -> Result<(EmotionDictionary, FilterReport)> {
    if !(0.0 <= band.low && band.low < band.high && band.high <= 1.0) {
        return Err(Error::Config(format!(
            "frequency band must satisfy 0 <= low < high <= 1, got {}..{}",
            band.low, band.high
        )));
    }
    if total_docs == 0 {
        return Err(Error::InsufficientData("corpus has no documents".into()));
    }
    let mut report = FilterReport::default();
    let mut kept = Vec::with_capacity(dict.emotions.len());
    for e in &dict.emotions {
        let mut terms = Vec::new();
        for t in &e.terms {
            let count = *doc_counts
                .get(t)
                .ok_or_else(|| Error::UnknownTerm(t.clone()))?;
            let frequency = count as f64 / total_docs as f64;
            if frequency < band.low || frequency > band.high {
                report.removed.push(RemovedTerm {
                    emotion: e.name.clone(),
                    term: t.clone(),
                    frequency,
                });
            } else {
                terms.push(t.clone());
            }
        }
        if terms.is_empty() {
            return Err(Error::FilterEmptiesEmotion(e.name.clone()));
        }
        kept.push(EmotionEntry {
            name: e.name.clone(),
            terms,
        });
    }
    Ok((EmotionDictionary { emotions: kept }, report))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermShare {
    pub term: String,
    pub total: f64,
    pub share: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmotionDominance {
    pub emotion: String,
    pub total: f64,
    /// `None` when the emotion's total is zero and shares are undefined.
    pub shares: Option<Vec<TermShare>>,
}

pub const DEFAULT_DOMINANCE_THRESHOLD: f64 = 0.3;

/// Share of each term in its emotion's summed count; terms whose share
/// exceeds `threshold` are flagged.
pub fn dominance_report(
    dict: &EmotionDictionary,
    term_totals: &HashMap<String, f64>,
    threshold: f64,
) -> Result<Vec<EmotionDominance>> {
    dict.emotions
        .iter()
        .map(|e| {
            let totals = e
                .terms
                .iter()
                .map(|t| {
                    term_totals
                        .get(t)
                        .copied()
                        .ok_or_else(|| Error::UnknownTerm(t.clone()))
                })
                .collect::<Result<Vec<f64>>>()?;
            let total: f64 = totals.iter().sum();
            let shares = (total > 0.0).then(|| {
                e.terms
                    .iter()
                    .zip(&totals)
                    .map(|(t, &c)| {
                        let share = c / total;
                        TermShare {
                            term: t.clone(),
                            total: c,
                            share,
                            flagged: share > threshold,
                        }
                    })
                    .collect()
            });
            Ok(EmotionDominance {
                emotion: e.name.clone(),
                total,
                shares,
            })
        })
        .collect()
}
