//! From per-term counts to emotion series: aggregation over an emotion's
//! terms, normalization by the daily document total, z-score
//! standardization and day-to-day differences.

use std::io::Write;

use chrono::NaiveDate;

use crate::corpus::CountMatrix;
use crate::dictionary::EmotionDictionary;
use crate::error::{Error, Result};
use crate::series::DailySeries;

/// Daily sum of the counts of every term of `emotion`.
pub fn aggregate_emotion(
    counts: &CountMatrix,
    dict: &EmotionDictionary,
    emotion: &str,
) -> Result<Vec<u64>> {
    let entry = dict
        .get(emotion)
        .ok_or_else(|| Error::UnknownEmotion(emotion.to_string()))?;
    let mut total = vec![0u64; counts.days()];
    for term in &entry.terms {
        let series = counts
            .term_series(term)
            .ok_or_else(|| Error::UnknownTerm(term.clone()))?;
        for (acc, c) in total.iter_mut().zip(series) {
            *acc += u64::from(*c);
        }
    }
    Ok(total)
}

/// `emotion_counts / totals` per day; days with no documents become gaps.
pub fn normalize(start: NaiveDate, emotion_counts: &[u64], totals: &[u32]) -> Result<DailySeries> {
    if emotion_counts.len() != totals.len() {
        return Err(Error::LengthMismatch {
            left: emotion_counts.len(),
            right: totals.len(),
        });
    }
    let values = emotion_counts
        .iter()
        .zip(totals)
        .map(|(&x, &total)| (total > 0).then(|| x as f64 / f64::from(total)))
        .collect();
    Ok(DailySeries::with_gaps(start, values))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    pub series: DailySeries,
    pub mean: f64,
    /// Population standard deviation (divides by the number of valid days).
    pub std: f64,
}

/// z-scores over the valid days, using the temporal mean and the
/// population standard deviation.
pub fn standardize(series: &DailySeries) -> Result<Standardized> {
    let valid: Vec<f64> = series.valid().collect();
    if valid.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "standardization needs 2 valid days, got {}",
            valid.len()
        )));
    }
    let n = valid.len() as f64;
    let mean = valid.iter().sum::<f64>() / n;
    let var = valid.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    if !(std > 0.0) || std <= f64::EPSILON * mean.abs() {
        return Err(Error::ConstantSeries);
    }
    Ok(Standardized {
        series: series.map(|v| (v - mean) / std),
        mean,
        std,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceSummary {
    /// `Z(t) − Z(t−1)` for consecutive valid days, keyed by the later day.
    pub diffs: DailySeries,
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// Rough normality indication: |skewness| < 0.5 and |excess kurtosis| < 1.
    pub looks_normal: bool,
}

pub fn daily_differences(series: &DailySeries) -> Result<DifferenceSummary> {
    if series.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "differences need at least 3 days, got {}",
            series.len()
        )));
    }
    let mut values = vec![None; series.len()];
    for t in 1..series.len() {
        if let (Some(a), Some(b)) = (series.get(t - 1), series.get(t)) {
            values[t] = Some(b - a);
        }
    }
    let diffs = DailySeries::with_gaps(series.start(), values);
    let d: Vec<f64> = diffs.valid().collect();
    if d.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "only {} consecutive valid pairs",
            d.len()
        )));
    }
    let (mean, std, skewness, excess_kurtosis) = moments(&d);
    Ok(DifferenceSummary {
        diffs,
        mean,
        std,
        skewness,
        excess_kurtosis,
        looks_normal: skewness.abs() < 0.5 && excess_kurtosis.abs() < 1.0,
    })
}

/// Mean, population std, skewness and excess kurtosis. The shape moments
/// are NaN when the standard deviation is zero.
pub fn moments(x: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m3 = x.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let std = m2.sqrt();
    if m2 == 0.0 {
        return (mean, 0.0, f64::NAN, f64::NAN);
    }
    (mean, std, m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}

/// One emotion's series at every stage of construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionSeries {
    pub emotion: String,
    pub raw: Vec<u64>,
    pub normalized: DailySeries,
    pub standardized: DailySeries,
    pub mean_raw: f64,
    pub std_raw: f64,
}

impl EmotionSeries {
    pub fn build(counts: &CountMatrix, dict: &EmotionDictionary, emotion: &str) -> Result<Self> {
        let raw = aggregate_emotion(counts, dict, emotion)?;
        let normalized = normalize(counts.start(), &raw, counts.totals())?;
        let z = standardize(&normalized)?;
        Ok(Self {
            emotion: emotion.to_string(),
            raw,
            normalized,
            standardized: z.series,
            mean_raw: z.mean,
            std_raw: z.std,
        })
    }

    /// All emotions of `dict`, in dictionary order.
    pub fn build_all(counts: &CountMatrix, dict: &EmotionDictionary) -> Result<Vec<Self>> {
        dict.names().map(|k| Self::build(counts, dict, k)).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        crate::io::write_series_csv(out, Some(&self.raw), &self.normalized, &self.standardized)
    }
}
