//! CSV artifacts. Floats are written in Rust's shortest round-trip form so
//! identical inputs give byte-identical files; gaps are empty cells.

use std::io::{Read, Write};

use csv::{ReaderBuilder, Writer};

use crate::error::{Error, Result};
use crate::events::{CalendarDateReport, SpikeReport};
use crate::memory::{CorrelationEstimate, MemoryFit, SpectralEstimate};
use crate::pca::{BlockMatrix, PcaResult};
use crate::periodicity::PeriodProfile;
use crate::series::{parse_date, DailySeries};

fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

/// `date,raw,normalized,standardized,gap`; `raw` is empty when unknown.
pub fn write_series_csv<W: Write>(
    out: W,
    raw: Option<&[u64]>,
    normalized: &DailySeries,
    standardized: &DailySeries,
) -> Result<()> {
    if normalized.len() != standardized.len() {
        return Err(Error::LengthMismatch {
            left: normalized.len(),
            right: standardized.len(),
        });
    }
    let mut w = Writer::from_writer(out);
    w.write_record(["date", "raw", "normalized", "standardized", "gap"])?;
    for (t, (date, v)) in normalized.iter().enumerate() {
        let raw = raw.and_then(|r| r.get(t)).map_or_else(String::new, u64::to_string);
        w.write_record([
            date.to_string(),
            raw,
            cell(v),
            cell(standardized.get(t)),
            u8::from(v.is_none()).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `date,<name>...`: one value column per named series, all aligned on the
/// first series' days.
pub fn write_columns_csv<W: Write>(out: W, columns: &[(&str, &DailySeries)]) -> Result<()> {
    let Some((_, first)) = columns.first() else {
        return Err(Error::InsufficientData("no columns to write".into()));
    };
    let mut w = Writer::from_writer(out);
    let mut header = vec!["date"];
    header.extend(columns.iter().map(|(n, _)| *n));
    w.write_record(&header)?;
    for t in 0..first.len() {
        let mut row = vec![first.date_at(t).to_string()];
        row.extend(columns.iter().map(|(_, s)| cell(s.get(t))));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a daily series from a CSV with a `date` column. `column` names
/// the value column; by default `value` is used, then `normalized`.
/// Rows must be consecutive days; empty cells are gaps.
pub fn read_series_csv<R: Read>(input: R, column: Option<&str>) -> Result<DailySeries> {
    let mut r = ReaderBuilder::new().from_reader(input);
    let headers = r.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let date_col = find("date").ok_or_else(|| Error::MalformedRecord {
        line: 1,
        reason: "missing date column".into(),
    })?;
    let value_col = match column {
        Some(c) => find(c).ok_or_else(|| Error::MalformedRecord {
            line: 1,
            reason: format!("missing column {c:?}"),
        })?,
        None => find("value").or_else(|| find("normalized")).ok_or_else(|| Error::MalformedRecord {
            line: 1,
            reason: "no value or normalized column; choose one with --column".into(),
        })?,
    };
    let mut start = None;
    let mut values = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let bad = |reason: String| Error::MalformedRecord { line, reason };
        let date = parse_date(rec.get(date_col).unwrap_or("")).map_err(|e| bad(e.to_string()))?;
        let start = *start.get_or_insert(date);
        if (date - start).num_days() != values.len() as i64 {
            return Err(bad(format!("date {date} is not the next consecutive day")));
        }
        let raw = rec.get(value_col).unwrap_or("").trim();
        let v = if raw.is_empty() {
            None
        } else {
            Some(raw.parse::<f64>().map_err(|e| bad(format!("value {raw:?}: {e}")))?)
        };
        values.push(v.filter(|v| v.is_finite()));
    }
    let start = start.ok_or_else(|| Error::InsufficientData("series file has no rows".into()))?;
    Ok(DailySeries::with_gaps(start, values))
}

/// `phase_label,p,s,M`.
pub fn write_profile_csv<W: Write>(out: W, profile: &PeriodProfile) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["phase_label", "p", "s", "M"])?;
    for l in 0..profile.period {
        w.write_record([
            profile.labels[l].clone(),
            profile.p[l].to_string(),
            profile.s[l].to_string(),
            profile.cycles.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `lag,cov,rho`.
pub fn write_acf_csv<W: Write>(out: W, estimate: &CorrelationEstimate) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["lag", "cov", "rho"])?;
    for lag in estimate.lags() {
        w.write_record([lag.to_string(), estimate.cov[lag].to_string(), estimate.rho[lag].to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `freq,psd`.
pub fn write_psd_csv<W: Write>(out: W, spectrum: &SpectralEstimate) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["freq", "psd"])?;
    for (f, p) in spectrum.freqs.iter().zip(&spectrum.power) {
        w.write_record([f.to_string(), p.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `quantity,exponent,lo,hi,intercept,r2,n_points`; `quantity` is `alpha`
/// for autocorrelation fits and `beta` for spectral fits.
pub fn write_fit_csv<W: Write>(out: W, fits: &[(&str, &MemoryFit)]) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["quantity", "exponent", "lo", "hi", "intercept", "r2", "n_points"])?;
    for (name, f) in fits {
        w.write_record([
            name.to_string(),
            f.exponent.to_string(),
            f.lo.to_string(),
            f.hi.to_string(),
            f.intercept.to_string(),
            f.r2.to_string(),
            f.n_points.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the exponents of a fit CSV as `(quantity, exponent)` pairs.
pub fn read_fit_csv<R: Read>(input: R) -> Result<Vec<(String, f64)>> {
    let mut r = ReaderBuilder::new().from_reader(input);
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let exponent = rec.get(1).unwrap_or("").parse::<f64>().map_err(|e| Error::MalformedRecord {
            line: i + 2,
            reason: e.to_string(),
        })?;
        out.push((rec.get(0).unwrap_or("").to_string(), exponent));
    }
    Ok(out)
}

/// `date,emotion,rate,duration`.
pub fn write_spikes_csv<W: Write>(out: W, report: &SpikeReport) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["date", "emotion", "rate", "duration"])?;
    for e in &report.entries {
        w.write_record([e.date.to_string(), e.emotion.clone(), e.rate.to_string(), e.duration.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `month_day,emotion,mean_rate,std_rate,years,direction`.
pub fn write_calendar_csv<W: Write>(out: W, report: &CalendarDateReport) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["month_day", "emotion", "mean_rate", "std_rate", "years", "direction"])?;
    for e in &report.entries {
        w.write_record([
            e.month_day.clone(),
            e.emotion.clone(),
            e.mean_rate.to_string(),
            e.std_rate.to_string(),
            e.years.to_string(),
            e.direction.map_or_else(String::new, |d| d.to_string()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn component_header(first: &str, k: usize) -> Vec<String> {
    std::iter::once(first.to_string())
        .chain((1..=k).map(|c| format!("pc{c}")))
        .collect()
}

/// `emotion,pc1..pcK`: one row per emotion dimension.
pub fn write_eigenvectors_csv<W: Write>(out: W, emotions: &[String], pca: &PcaResult) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(component_header("emotion", pca.eigenvectors.len()))?;
    for (j, name) in emotions.iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(pca.eigenvectors.iter().map(|v| v[j].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `block_start,pc1..pcK`.
pub fn write_scores_csv<W: Write>(out: W, blocks: &BlockMatrix, pca: &PcaResult) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(component_header("block_start", pca.eigenvalues.len()))?;
    for (start, scores) in blocks.block_starts.iter().zip(&pca.scores) {
        let mut row = vec![start.to_string()];
        row.extend(scores.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `component,eigenvalue,contribution,cumulative`.
pub fn write_contribution_csv<W: Write>(out: W, pca: &PcaResult) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["component", "eigenvalue", "contribution", "cumulative"])?;
    for k in 0..pca.eigenvalues.len() {
        w.write_record([
            format!("pc{}", k + 1),
            pca.eigenvalues[k].to_string(),
            pca.contribution[k].to_string(),
            pca.cumulative[k].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
