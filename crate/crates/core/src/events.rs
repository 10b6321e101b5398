//! Spikes against a trailing seven-day baseline and recurring calendar
//! dates.
//!
//! Both analyses work on a positive scale (the normalized series after
//! cycle removal), never on z-scores, because they report ratios.

use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{any_contains, day_of_year_365, is_leap_day, month_day_label, DailySeries, DateWindow};

pub const BASELINE_DAYS: usize = 7;

/// `100 · y(t) / mean(y(t−7..t−1))`; undefined for the first seven days,
/// when the window holds a gap, or when its mean is not positive.
pub fn spike_rates(series: &DailySeries) -> DailySeries {
    let values = series.values();
    let rates = (0..values.len())
        .map(|t| {
            let y = values[t]?;
            let base = trailing_mean(values, t)?;
            Some(100.0 * y / base)
        })
        .collect();
    DailySeries::with_gaps(series.start(), rates)
}

fn trailing_mean(values: &[Option<f64>], t: usize) -> Option<f64> {
    if t < BASELINE_DAYS {
        return None;
    }
    let mut sum = 0.0;
    for v in &values[t - BASELINE_DAYS..t] {
        sum += (*v)?;
    }
    let mean = sum / BASELINE_DAYS as f64;
    (mean > 0.0).then_some(mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpikeConfig {
    /// Minimum peak rate, percent.
    pub threshold: f64,
    /// A spike lasts while the series stays above this percentage of the
    /// pre-peak baseline.
    pub baseline_return: f64,
}

impl Default for SpikeConfig {
    fn default() -> Self {
        Self {
            threshold: 150.0,
            baseline_return: 110.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeEntry {
    pub date: NaiveDate,
    pub emotion: String,
    /// Peak rate, percent.
    pub rate: f64,
    /// Days from the peak (inclusive) until the series returns to the
    /// baseline band.
    pub duration: usize,
}

/// Spikes in descending order of rate.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpikeReport {
    pub entries: Vec<SpikeEntry>,
}

impl SpikeReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Merges reports of several emotions, keeping the descending order.
    pub fn merge(reports: impl IntoIterator<Item = SpikeReport>) -> Self {
        let mut entries: Vec<SpikeEntry> = reports.into_iter().flat_map(|r| r.entries).collect();
        sort_spikes(&mut entries);
        Self { entries }
    }
}

fn sort_spikes(entries: &mut [SpikeEntry]) {
    entries.sort_by(|a, b| {
        b.rate
            .total_cmp(&a.rate)
            .then(a.date.cmp(&b.date))
            .then(a.emotion.cmp(&b.emotion))
    });
}

/// Local maxima of the rate above `config.threshold`. A day is a local
/// maximum when its rate exceeds the previous day's (or the previous day
/// has none) and is not below the next day's.
///
/// The baseline is frozen at the seven days before the peak, so a long
/// plateau is one spike whose duration spans the plateau.
pub fn detect_spikes(series: &DailySeries, emotion: &str, config: &SpikeConfig) -> SpikeReport {
    let rates = spike_rates(series);
    let r = rates.values();
    let y = series.values();
    let mut entries = Vec::new();
    for t in 0..r.len() {
        let Some(rate) = r[t] else { continue };
        if rate <= config.threshold {
            continue;
        }
        let rises = t == 0 || r[t - 1].map_or(true, |prev| rate > prev);
        let holds = r.get(t + 1).copied().flatten().map_or(true, |next| rate >= next);
        if !(rises && holds) {
            continue;
        }
        let base = trailing_mean(y, t).expect("a defined rate has a baseline");
        let band = base * config.baseline_return / 100.0;
        let duration = y[t..]
            .iter()
            .take_while(|v| v.is_some_and(|v| v > band))
            .count();
        entries.push(SpikeEntry {
            date: series.date_at(t),
            emotion: emotion.to_string(),
            rate,
            duration,
        });
    }
    sort_spikes(&mut entries);
    SpikeReport { entries }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Up => "up",
            Self::Down => "down",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalendarConfig {
    pub high: f64,
    pub low: f64,
    pub std_max: f64,
    /// Days inside these windows contribute no observation.
    pub exclusions: Vec<DateWindow>,
    pub min_years: usize,
}

impl Default for CalendarConfig {
    fn default() -> Self {
        Self {
            high: 110.0,
            low: 90.0,
            std_max: 15.0,
            exclusions: vec![DateWindow::default_yearly_exclusion()],
            min_years: 3,
        }
    }
}

/// Rate statistics of one month-day across years.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalendarEntry {
    pub month_day: String,
    pub emotion: String,
    /// Mean over years of `100 · value / temporal mean`.
    pub mean_rate: f64,
    /// Population deviation of the yearly rates.
    pub std_rate: f64,
    pub years: usize,
    pub direction: Option<Direction>,
}

/// Flagged month-days in calendar order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CalendarDateReport {
    pub entries: Vec<CalendarEntry>,
}

impl CalendarDateReport {
    pub fn merge(reports: impl IntoIterator<Item = CalendarDateReport>) -> Self {
        let mut entries: Vec<CalendarEntry> = reports.into_iter().flat_map(|r| r.entries).collect();
        entries.sort_by(|a, b| a.month_day.cmp(&b.month_day).then(a.emotion.cmp(&b.emotion)));
        Self { entries }
    }
}

/// Statistics for all 365 month-days; February 29 is ignored. Phases with
/// fewer than `config.min_years` observations are omitted.
pub fn calendar_stats(
    series: &DailySeries,
    emotion: &str,
    config: &CalendarConfig,
) -> Result<Vec<CalendarEntry>> {
    let mean = series.mean().filter(|m| *m > 0.0).ok_or_else(|| {
        Error::InsufficientData("calendar rates need a positive temporal mean".into())
    })?;
    let mut by_phase: Vec<Vec<f64>> = vec![Vec::new(); 365];
    for (date, v) in series.iter() {
        let Some(v) = v else { continue };
        if is_leap_day(date) || any_contains(&config.exclusions, date) {
            continue;
        }
        by_phase[day_of_year_365(date)].push(100.0 * v / mean);
    }
    let most = by_phase.iter().map(Vec::len).max().unwrap_or(0);
    if most < config.min_years {
        return Err(Error::InsufficientData(format!(
            "calendar report needs {} years per date, found at most {most}",
            config.min_years
        )));
    }
    Ok(by_phase
        .iter()
        .enumerate()
        .filter(|(_, rates)| rates.len() >= config.min_years)
        .map(|(phase, rates)| {
            let n = rates.len() as f64;
            let m = rates.iter().sum::<f64>() / n;
            let sd = (rates.iter().map(|r| (r - m).powi(2)).sum::<f64>() / n).sqrt();
            let direction = if sd >= config.std_max {
                None
            } else if m > config.high {
                Some(Direction::Up)
            } else if m < config.low {
                Some(Direction::Down)
            } else {
                None
            };
            CalendarEntry {
                month_day: month_day_label(phase),
                emotion: emotion.to_string(),
                mean_rate: m,
                std_rate: sd,
                years: rates.len(),
                direction,
            }
        })
        .collect())
}

/// Month-days whose rate is consistently above `high` or below `low`.
pub fn calendar_report(
    series: &DailySeries,
    emotion: &str,
    config: &CalendarConfig,
) -> Result<CalendarDateReport> {
    Ok(CalendarDateReport {
        entries: calendar_stats(series, emotion, config)?
            .into_iter()
            .filter(|e| e.direction.is_some())
            .collect(),
    })
}

impl fmt::Display for SpikeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:<12} {:>9} {:>9}", "date", "emotion", "rate (%)", "duration")?;
        for e in &self.entries {
            writeln!(f, "{:<12} {:<12} {:>9.1} {:>9}", e.date, e.emotion, e.rate, e.duration)?;
        }
        Ok(())
    }
}

impl fmt::Display for CalendarDateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<6} {:<12} {:>16} {:>5}", "date", "emotion", "rate (%)", "dir")?;
        for e in &self.entries {
            let dir = e.direction.map_or(String::new(), |d| d.to_string());
            let rate = format!("{:.1} ± {:.1}", e.mean_rate, e.std_rate);
            writeln!(f, "{:<6} {:<12} {:>16} {:>5}", e.month_day, e.emotion, rate, dir)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ymd;

    fn flat_then(tail: &[f64]) -> DailySeries {
        let mut v = vec![1.0; 7];
        v.extend_from_slice(tail);
        DailySeries::new(ymd(2011, 3, 4), v)
    }

    #[test]
    fn single_day_spike() {
        let s = flat_then(&[6.026, 1.0, 1.0]);
        let rates = spike_rates(&s);
        assert!(rates.values()[..7].iter().all(Option::is_none));
        assert!((rates.get(7).unwrap() - 602.6).abs() < 1e-9);
        let r = detect_spikes(&s, "Tension", &SpikeConfig::default());
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].duration, 1);
        assert_eq!(r.entries[0].date, ymd(2011, 3, 11));
        assert_eq!(format!("{:.1}", r.entries[0].rate), "602.6");
    }

    #[test]
    fn plateau_duration() {
        let mut tail = vec![2.0; 37];
        tail.extend([1.0; 20]);
        let r = detect_spikes(&flat_then(&tail), "Anger", &SpikeConfig::default());
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].duration, 37);
    }

    #[test]
    fn constant_and_quiet_series() {
        let s = DailySeries::new(ymd(2020, 1, 1), vec![3.0; 30]);
        assert!(spike_rates(&s).valid().all(|r| r == 100.0));
        assert!(detect_spikes(&s, "x", &SpikeConfig::default()).is_empty());
        let wobble: Vec<f64> = (0..60).map(|t| if t % 2 == 0 { 1.05 } else { 0.95 }).collect();
        assert!(detect_spikes(&DailySeries::new(ymd(2020, 1, 1), wobble), "x", &SpikeConfig::default()).is_empty());
    }

    #[test]
    fn zero_baseline_masks_rate() {
        let mut v = vec![0.0; 7];
        v.push(1.0);
        let rates = spike_rates(&DailySeries::new(ymd(2020, 1, 1), v));
        assert_eq!(rates.get(7), None);
    }

    #[test]
    fn spikes_sorted_descending() {
        let mut tail = vec![2.0];
        tail.extend([1.0; 10]);
        tail.push(4.0);
        tail.extend([1.0; 10]);
        let r = detect_spikes(&flat_then(&tail), "x", &SpikeConfig::default());
        assert_eq!(r.entries.len(), 2);
        assert!(r.entries[0].rate > r.entries[1].rate);
    }

    #[test]
    fn calendar_bump_and_dip() {
        let start = ymd(2007, 1, 1);
        let n = (ymd(2015, 12, 31) - start).num_days() as usize + 1;
        let s = DailySeries::new(
            start,
            (0..n)
                .map(|t| {
                    let d = s_date(start, t);
                    match crate::series::day_of_year_365(d) {
                        96 => 1.15,
                        0 => 0.85,
                        _ => 1.0,
                    }
                })
                .collect(),
        );
        let cfg = CalendarConfig {
            exclusions: vec![],
            ..CalendarConfig::default()
        };
        let r = calendar_report(&s, "Tension", &cfg).unwrap();
        let flagged: Vec<(&str, Option<Direction>)> =
            r.entries.iter().map(|e| (e.month_day.as_str(), e.direction)).collect();
        assert_eq!(flagged, [("01-01", Some(Direction::Down)), ("04-07", Some(Direction::Up))]);
    }

    fn s_date(start: NaiveDate, t: usize) -> NaiveDate {
        start + chrono::Duration::days(t as i64)
    }

    #[test]
    fn calendar_needs_three_years() {
        let s = DailySeries::new(ymd(2020, 1, 1), vec![1.0; 700]);
        assert!(calendar_report(&s, "x", &CalendarConfig::default()).is_err());
    }

    #[test]
    fn rates_are_scale_invariant() {
        let s = flat_then(&[3.0, 1.5, 0.7, 2.0]);
        let a = spike_rates(&s);
        let b = spike_rates(&s.map(|v| v * 17.0));
        for (x, y) in a.valid().zip(b.valid()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
