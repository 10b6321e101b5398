//! Timestamped documents and per-term daily document counts.
//!
//! A document counts once for a term however often the term occurs in it,
//! and once for each distinct term it contains.

mod matcher;
mod synth;

use std::collections::HashMap;
use std::io::{BufRead, Read, Write};

use chrono::{Duration, NaiveDate};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use matcher::{MatchMode, TermMatcher};
pub use synth::{synth_corpus, LatentEmotion, SynthCorpusConfig, SyntheticCorpus};

use crate::dictionary::EmotionDictionary;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub date: NaiveDate,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    pub accepted: usize,
    pub rejected: Vec<Rejection>,
}

#[derive(Deserialize)]
struct Record {
    date: String,
    text: String,
}

/// Reads line-delimited JSON records `{"date": "YYYY-MM-DD", "text": ...}`.
/// Blank lines are skipped. Malformed records are collected in the report,
/// or abort the read when `strict` is set.
pub fn ingest<R: BufRead>(reader: R, strict: bool) -> Result<(Vec<Document>, ParseReport)> {
    let mut docs = Vec::new();
    let mut report = ParseReport::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<Record>(&line)
            .map_err(|e| e.to_string())
            .and_then(|r| {
                NaiveDate::parse_from_str(&r.date, "%Y-%m-%d")
                    .map(|date| Document { date, text: r.text })
                    .map_err(|e| format!("bad date {:?}: {e}", r.date))
            });
        match parsed {
            Ok(doc) => {
                docs.push(doc);
                report.accepted += 1;
            }
            Err(reason) if strict => {
                return Err(Error::MalformedRecord { line: i + 1, reason });
            }
            Err(reason) => report.rejected.push(Rejection { line: i + 1, reason }),
        }
    }
    Ok((docs, report))
}

pub fn write_jsonl<W: Write>(mut out: W, docs: impl IntoIterator<Item = Document>) -> Result<()> {
    for d in docs {
        let line = serde_json::json!({ "date": d.date.to_string(), "text": d.text });
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Per-term daily document counts `x_i(t)` and daily document totals
/// `X(t)` over a contiguous range of days. Days without documents are
/// present with zero counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMatrix {
    start: NaiveDate,
    days: usize,
    terms: Vec<String>,
    index: HashMap<String, usize>,
    /// term-major: `counts[term][day]`
    counts: Vec<Vec<u32>>,
    totals: Vec<u32>,
}

impl CountMatrix {
    pub fn zeros(terms: Vec<String>, start: NaiveDate, days: usize) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self {
            start,
            days,
            counts: vec![vec![0; days]; terms.len()],
            terms,
            index,
            totals: vec![0; days],
        }
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn days(&self) -> usize {
        self.days
    }

    pub fn date_at(&self, day: usize) -> NaiveDate {
        self.start + Duration::days(day as i64)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term_series(&self, term: &str) -> Option<&[u32]> {
        self.index.get(term).map(|&i| self.counts[i].as_slice())
    }

    pub fn totals(&self) -> &[u32] {
        &self.totals
    }

    pub fn total_documents(&self) -> u64 {
        self.totals.iter().map(|&t| u64::from(t)).sum()
    }

    /// Number of documents containing each term over the whole range.
    pub fn term_totals(&self) -> HashMap<String, u64> {
        self.terms
            .iter()
            .zip(&self.counts)
            .map(|(t, c)| (t.clone(), c.iter().map(|&v| u64::from(v)).sum()))
            .collect()
    }

    /// Records one document on `day` containing the terms `hits`.
    pub fn add(&mut self, day: usize, hits: &[u32]) {
        self.totals[day] += 1;
        for &h in hits {
            self.counts[h as usize][day] += 1;
        }
    }

    /// Element-wise sum; both matrices must share terms and range.
    pub fn merge(&mut self, other: &CountMatrix) -> Result<()> {
        if self.terms != other.terms || self.start != other.start || self.days != other.days {
            return Err(Error::Config("count matrices cover different terms or days".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (x, y) in self.totals.iter_mut().zip(&other.totals) {
            *x += y;
        }
        Ok(())
    }

    /// CSV with a `date` column, one column per term and a final `__total__`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["date".to_string()];
        header.extend(self.terms.iter().cloned());
        header.push("__total__".into());
        w.write_record(&header)?;
        for day in 0..self.days {
            let mut row = vec![self.date_at(day).to_string()];
            row.extend(self.counts.iter().map(|c| c[day].to_string()));
            row.push(self.totals[day].to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        let n = header.len();
        if n < 2 || &header[0] != "date" || &header[n - 1] != "__total__" {
            return Err(Error::Config("count CSV needs date,...,__total__ columns".into()));
        }
        let terms: Vec<String> = header.iter().skip(1).take(n - 2).map(str::to_string).collect();
        let mut dates = Vec::new();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            dates.push(crate::series::parse_date(&rec[0])?);
            let row = rec
                .iter()
                .skip(1)
                .map(|v| v.parse::<u32>().map_err(|e| Error::Config(format!("bad count {v:?}: {e}"))))
                .collect::<Result<Vec<u32>>>()?;
            rows.push(row);
        }
        let start = dates.first().copied().unwrap_or_default();
        for (i, d) in dates.iter().enumerate() {
            if *d != start + Duration::days(i as i64) {
                return Err(Error::Config(format!("count CSV is not contiguous at {d}")));
            }
        }
        let mut m = Self::zeros(terms, start, rows.len());
        for (day, row) in rows.into_iter().enumerate() {
            for (t, v) in row[..row.len() - 1].iter().enumerate() {
                m.counts[t][day] = *v;
            }
            m.totals[day] = row[row.len() - 1];
        }
        Ok(m)
    }
}

/// Counts documents per day and term over the span from the earliest to
/// the latest document date.
pub fn count_documents(docs: &[Document], dict: &EmotionDictionary, mode: MatchMode) -> CountMatrix {
    let matcher = TermMatcher::new(dict, mode);
    let terms = matcher.terms().to_vec();
    let (Some(first), Some(last)) = (
        docs.iter().map(|d| d.date).min(),
        docs.iter().map(|d| d.date).max(),
    ) else {
        return CountMatrix::zeros(terms, NaiveDate::default(), 0);
    };
    let days = (last - first).num_days() as usize + 1;
    let mut matrix = CountMatrix::zeros(terms, first, days);
    add_documents(&mut matrix, &matcher, docs).expect("range covers every document");
    matrix
}

/// Adds `docs` to `matrix`. Matching runs in parallel; the reduction is a
/// sequential integer sum, so results do not depend on the thread count.
pub fn add_documents(matrix: &mut CountMatrix, matcher: &TermMatcher, docs: &[Document]) -> Result<()> {
    let hits: Vec<(i64, Vec<u32>)> = docs
        .par_iter()
        .map(|d| ((d.date - matrix.start).num_days(), matcher.matched_terms(&d.text)))
        .collect();
    for (offset, h) in hits {
        if offset < 0 || offset as usize >= matrix.days {
            return Err(Error::Config(format!(
                "document dated {} outside the count range",
                matrix.start + Duration::days(offset)
            )));
        }
        matrix.add(offset as usize, &h);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::EmotionEntry;
    use crate::series::ymd;

    fn dict() -> EmotionDictionary {
        EmotionDictionary::new(vec![
            EmotionEntry { name: "A".into(), terms: vec!["w1".into(), "w2".into()] },
            EmotionEntry { name: "B".into(), terms: vec!["w3".into()] },
        ])
        .unwrap()
    }

    fn doc(day: u32, text: &str) -> Document {
        Document { date: ymd(2020, 1, day), text: text.into() }
    }

    #[test]
    fn same_word_twice_counts_once() {
        let m = count_documents(&[doc(1, "w1 and w1 again")], &dict(), MatchMode::Substring);
        assert_eq!(m.term_series("w1"), Some(&[1][..]));
        assert_eq!(m.totals(), [1]);
    }

    #[test]
    fn two_words_count_twice() {
        let m = count_documents(&[doc(1, "w1 w2")], &dict(), MatchMode::Substring);
        let sum: u32 = m.terms().iter().map(|t| m.term_series(t).unwrap()[0]).sum();
        assert_eq!(sum, 2);
    }

    #[test]
    fn unmatched_documents_only_count_in_total() {
        let docs: Vec<_> = (0..5).map(|_| doc(1, "nothing here")).collect();
        let m = count_documents(&docs, &dict(), MatchMode::Substring);
        assert!(m.terms().iter().all(|t| m.term_series(t).unwrap() == [0]));
        assert_eq!(m.totals(), [5]);
    }

    #[test]
    fn missing_days_are_zero_filled() {
        let m = count_documents(&[doc(1, "w1"), doc(4, "w3")], &dict(), MatchMode::Substring);
        assert_eq!(m.days(), 4);
        assert_eq!(m.totals(), [1, 0, 0, 1]);
        assert_eq!(m.term_series("w3"), Some(&[0, 0, 0, 1][..]));
    }

    #[test]
    fn empty_corpus() {
        let m = count_documents(&[], &dict(), MatchMode::Substring);
        assert_eq!(m.days(), 0);
        assert_eq!(m.terms().len(), 3);
    }

    #[test]
    fn ingest_lenient_and_strict() {
        let input = "{\"date\":\"2020-01-01\",\"text\":\"a\"}\n\
                     {\"date\":\"2020-13-01\",\"text\":\"b\"}\n\
                     \n\
                     {\"date\":\"2020-01-02\",\"text\":\"c\"}\n";
        let (docs, report) = ingest(input.as_bytes(), false).unwrap();
        assert_eq!(docs.len(), 2);
        assert_eq!(report.accepted, 2);
        assert_eq!(report.rejected.len(), 1);
        assert_eq!(report.rejected[0].line, 2);
        let err = ingest(input.as_bytes(), true).unwrap_err();
        assert!(matches!(err, Error::MalformedRecord { line: 2, .. }));
    }

    #[test]
    fn ingest_empty() {
        let (docs, report) = ingest("".as_bytes(), true).unwrap();
        assert!(docs.is_empty());
        assert_eq!(report, ParseReport::default());
    }

    #[test]
    fn csv_round_trip() {
        let m = count_documents(&[doc(1, "w1 w3"), doc(3, "w2")], &dict(), MatchMode::Substring);
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("date,w1,w2,w3,__total__\n2020-01-01,1,0,1,1\n"));
        assert_eq!(CountMatrix::read_csv(buf.as_slice()).unwrap(), m);
    }
}
