//! Calendar-indexed daily series with explicit gaps.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, Duration, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A contiguous run of days starting at `start`. A `None` value marks a gap
/// (no data, or a degenerate denominator) and is excluded from every
/// statistic computed downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct DailySeries {
    start: NaiveDate,
    values: Vec<Option<f64>>,
}

impl DailySeries {
    pub fn new(start: NaiveDate, values: Vec<f64>) -> Self {
        Self {
            start,
            values: values.into_iter().map(Some).collect(),
        }
    }

    pub fn with_gaps(start: NaiveDate, values: Vec<Option<f64>>) -> Self {
        Self { start, values }
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    /// Last covered day; equals `start` for an empty series.
    pub fn end(&self) -> NaiveDate {
        self.date_at(self.values.len().saturating_sub(1))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn date_at(&self, index: usize) -> NaiveDate {
        self.start + Duration::days(index as i64)
    }

    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        let offset = (date - self.start).num_days();
        (offset >= 0 && (offset as usize) < self.values.len()).then_some(offset as usize)
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.values.get(index).copied().flatten()
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Option<f64>> {
        self.values
    }

    pub fn is_gap(&self, index: usize) -> bool {
        self.values[index].is_none()
    }

    pub fn gap_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Values of non-gap days, in calendar order.
    pub fn valid(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().filter_map(|v| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (NaiveDate, Option<f64>)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.date_at(i), *v))
    }

    /// All values, or `None` if the series has any gap.
    pub fn dense(&self) -> Option<Vec<f64>> {
        self.values.iter().copied().collect()
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            start: self.start,
            values: self.values.iter().map(|v| v.map(&mut f)).collect(),
        }
    }

    /// Like [`DailySeries::map`] but with access to the day index.
    pub fn map_indexed(&self, mut f: impl FnMut(usize, f64) -> Option<f64>) -> Self {
        Self {
            start: self.start,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| v.and_then(|x| f(i, x)))
                .collect(),
        }
    }

    pub fn mean(&self) -> Option<f64> {
        let (sum, n) = self
            .valid()
            .fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
        (n > 0).then(|| sum / n as f64)
    }

    /// Values with every February 29 removed. The result is no longer a
    /// calendar series, so it is returned as a plain vector.
    pub fn without_leap_days(&self) -> Vec<Option<f64>> {
        self.iter()
            .filter(|(d, _)| !is_leap_day(*d))
            .map(|(_, v)| v)
            .collect()
    }
}

pub fn is_leap_day(date: NaiveDate) -> bool {
    date.month() == 2 && date.day() == 29
}

/// Zero-based day of year on a 365-day calendar (Jan 1 = 0, Dec 31 = 364).
/// February 29 shares the phase of February 28.
pub fn day_of_year_365(date: NaiveDate) -> usize {
    let ordinal = date.ordinal0() as usize;
    let leap = NaiveDate::from_ymd_opt(date.year(), 2, 29).is_some();
    if leap && ordinal >= 59 {
        // 59 is Feb 29 in a leap year
        ordinal - 1
    } else {
        ordinal
    }
}

/// Month-day label (`"04-07"`) for a 365-day phase.
pub fn month_day_label(phase: usize) -> String {
    let d = NaiveDate::from_yo_opt(2001, phase as u32 + 1).expect("phase < 365");
    format!("{:02}-{:02}", d.month(), d.day())
}

/// An inclusive range of calendar days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DateWindow {
    pub first: NaiveDate,
    pub last: NaiveDate,
}

impl DateWindow {
    pub fn new(first: NaiveDate, last: NaiveDate) -> Result<Self> {
        if last < first {
            return Err(Error::Config(format!(
                "date window ends before it starts: {first}..{last}"
            )));
        }
        Ok(Self { first, last })
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.first <= date && date <= self.last
    }

    pub fn overlaps(&self, first: NaiveDate, last: NaiveDate) -> bool {
        self.first <= last && first <= self.last
    }

    /// The week around the 2011-03-11 earthquake, skipped when estimating
    /// weekly cycles.
    pub fn default_weekly_exclusion() -> Self {
        Self {
            first: ymd(2011, 3, 9),
            last: ymd(2011, 3, 15),
        }
    }

    /// The twelve months around the 2011-03-11 earthquake, skipped when
    /// estimating yearly cycles.
    pub fn default_yearly_exclusion() -> Self {
        Self {
            first: ymd(2010, 11, 1),
            last: ymd(2011, 10, 31),
        }
    }
}

impl fmt::Display for DateWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}

impl FromStr for DateWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| Error::Config(format!("date window {s:?} is not FIRST..LAST")))?;
        Self::new(parse_date(a.trim())?, parse_date(b.trim())?)
    }
}

impl TryFrom<String> for DateWindow {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DateWindow> for String {
    fn from(w: DateWindow) -> String {
        w.to_string()
    }
}

pub fn any_contains(windows: &[DateWindow], date: NaiveDate) -> bool {
    windows.iter().any(|w| w.contains(date))
}

pub fn parse_date(s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|e| Error::Config(format!("bad date {s:?}: {e}")))
}

pub(crate) fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid literal date")
}

/// Number of days in the month containing `date`.
pub fn days_in_month(year: i32, month: u32) -> u32 {
    let (ny, nm) = if month == 12 { (year + 1, 1) } else { (year, month + 1) };
    let next = NaiveDate::from_ymd_opt(ny, nm, 1).expect("valid month");
    let first = NaiveDate::from_ymd_opt(year, month, 1).expect("valid month");
    (next - first).num_days() as u32
}
