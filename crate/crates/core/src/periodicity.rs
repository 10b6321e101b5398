//! Periodicity profiles by phase averaging and cycle removal by phase-wise
//! division.
//!
//! A series is cut into consecutive cycles of length `L` starting at its
//! first element. Each complete cycle is normalized so its phases average
//! to one, `p^m(l) = L·y(t_m + l) / Σ_l y(t_m + l)`, and the profile is the
//! phase-wise mean `p(l)` with population deviation `s(l)` over the kept
//! cycles. Profiles are stored in calendar phase order (Monday first,
//! January first, January 1 first) whatever weekday or month the series
//! starts on.

use chrono::{Datelike, Duration, NaiveDate};
use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{any_contains, day_of_year_365, days_in_month, is_leap_day, month_day_label, DailySeries, DateWindow};

/// How a profile's phases map onto dates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseKind {
    /// `L = 7`, phase 0 is Monday.
    Weekday,
    /// `L = 12` on monthly means, phase 0 is January. Applied to daily data
    /// through each day's month.
    Month,
    /// `L = 365`, phase 0 is January 1; February 29 shares February 28.
    DayOfYear,
    /// Phase is the position in the series modulo `L`.
    Plain,
}

impl PhaseKind {
    fn label(self, phase: usize) -> String {
        const WEEKDAYS: [&str; 7] = ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"];
        const MONTHS: [&str; 12] = [
            "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
        ];
        match self {
            Self::Weekday => WEEKDAYS[phase].to_string(),
            Self::Month => MONTHS[phase].to_string(),
            Self::DayOfYear => month_day_label(phase),
            Self::Plain => phase.to_string(),
        }
    }

    fn period(self) -> Option<usize> {
        match self {
            Self::Weekday => Some(7),
            Self::Month => Some(12),
            Self::DayOfYear => Some(365),
            Self::Plain => None,
        }
    }
}

/// Normalized complete cycles, in the order they occur.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleSet {
    pub period: usize,
    /// `p^m(l)` for each kept cycle; `l` counts from the cycle start.
    pub cycles: Vec<Vec<f64>>,
    /// Index of the first element of each kept cycle.
    pub offsets: Vec<usize>,
    /// Complete cycles dropped for exclusions, gaps or a zero sum.
    pub dropped: usize,
}

/// Splits `values` into complete cycles of length `period` from index 0
/// and normalizes each. A cycle is dropped when any of its elements is
/// flagged in `excluded` (which may be empty), is a gap, or when its sum is
/// zero. The trailing partial cycle is ignored.
pub fn cycle_periodicities(
    values: &[Option<f64>],
    period: usize,
    excluded: &[bool],
) -> Result<CycleSet> {
    if period == 0 {
        return Err(Error::Config("cycle length must be positive".into()));
    }
    if !excluded.is_empty() && excluded.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: excluded.len(),
        });
    }
    let mut set = CycleSet {
        period,
        cycles: Vec::new(),
        offsets: Vec::new(),
        dropped: 0,
    };
    for (m, chunk) in values.chunks_exact(period).enumerate() {
        let offset = m * period;
        let skip = !excluded.is_empty() && excluded[offset..offset + period].iter().any(|e| *e);
        let dense: Option<Vec<f64>> = chunk.iter().copied().collect();
        let Some(y) = dense.filter(|_| !skip) else {
            set.dropped += 1;
            continue;
        };
        let sum: f64 = y.iter().sum();
        if sum == 0.0 || !sum.is_finite() {
            warn!("cycle {m} (offset {offset}) has sum {sum}; dropped");
            set.dropped += 1;
            continue;
        }
        let scale = period as f64 / sum;
        set.cycles.push(y.iter().map(|v| v * scale).collect());
        set.offsets.push(offset);
    }
    if set.cycles.is_empty() {
        return Err(Error::NoCompleteCycles { period });
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodProfile {
    pub period: usize,
    pub kind: PhaseKind,
    pub labels: Vec<String>,
    /// Mean periodicity per calendar phase.
    pub p: Vec<f64>,
    /// Population deviation of the per-cycle values per calendar phase.
    pub s: Vec<f64>,
    /// Number of cycles averaged.
    pub cycles: usize,
    pub exclusions: Vec<DateWindow>,
    /// Only meaningful for [`PhaseKind::Plain`]: the phase of index 0.
    pub start_phase: usize,
}

impl PeriodProfile {
    /// Averages `set` into a profile. `start_phase` is the calendar phase
    /// of the first element of the analyzed values.
    pub fn from_cycles(
        set: &CycleSet,
        kind: PhaseKind,
        start_phase: usize,
        exclusions: Vec<DateWindow>,
    ) -> Result<Self> {
        let period = set.period;
        if let Some(expected) = kind.period() {
            if expected != period {
                return Err(Error::Config(format!(
                    "{kind:?} phases need cycles of {expected}, got {period}"
                )));
            }
        }
        let m = set.cycles.len();
        if m == 0 {
            return Err(Error::NoCompleteCycles { period });
        }
        let mut p = vec![0.0; period];
        let mut sq = vec![0.0; period];
        for cycle in &set.cycles {
            for (l, v) in cycle.iter().enumerate() {
                let phase = (start_phase + l) % period;
                p[phase] += v;
                sq[phase] += v * v;
            }
        }
        let mf = m as f64;
        for (pl, ql) in p.iter_mut().zip(sq.iter_mut()) {
            *pl /= mf;
            // rounding can leave a tiny negative variance
            *ql = (*ql / mf - *pl * *pl).max(0.0).sqrt();
        }
        Ok(Self {
            period,
            kind,
            labels: (0..period).map(|l| kind.label(l)).collect(),
            p,
            s: sq,
            cycles: m,
            exclusions,
            start_phase: if kind == PhaseKind::Plain { start_phase } else { 0 },
        })
    }

    /// A flat profile (all ones) that leaves a series unchanged.
    pub fn flat(kind: PhaseKind, period: usize) -> Self {
        Self {
            period,
            kind,
            labels: (0..period).map(|l| kind.label(l)).collect(),
            p: vec![1.0; period],
            s: vec![0.0; period],
            cycles: 0,
            exclusions: Vec::new(),
            start_phase: 0,
        }
    }

    fn phase_of(&self, index: usize, date: NaiveDate) -> usize {
        match self.kind {
            PhaseKind::Weekday => date.weekday().num_days_from_monday() as usize,
            PhaseKind::Month => date.month0() as usize,
            PhaseKind::DayOfYear => day_of_year_365(date),
            PhaseKind::Plain => (self.start_phase + index) % self.period,
        }
    }
}

fn exclusion_mask(dates: impl Iterator<Item = NaiveDate>, windows: &[DateWindow]) -> Vec<bool> {
    dates.map(|d| any_contains(windows, d)).collect()
}

/// Weekly profile of a daily series; weeks run from the series' first day.
pub fn weekly_profile(series: &DailySeries, exclusions: &[DateWindow]) -> Result<PeriodProfile> {
    let mask = exclusion_mask(series.iter().map(|(d, _)| d), exclusions);
    let set = cycle_periodicities(series.values(), 7, &mask)?;
    let start = series.start().weekday().num_days_from_monday() as usize;
    PeriodProfile::from_cycles(&set, PhaseKind::Weekday, start, exclusions.to_vec())
}

/// Day-of-year profile; February 29 is removed before cycles are formed so
/// every cycle spans 365 calendar phases.
pub fn daily_yearly_profile(series: &DailySeries, exclusions: &[DateWindow]) -> Result<PeriodProfile> {
    let dates: Vec<NaiveDate> = series
        .iter()
        .map(|(d, _)| d)
        .filter(|d| !is_leap_day(*d))
        .collect();
    let Some(first) = dates.first() else {
        return Err(Error::NoCompleteCycles { period: 365 });
    };
    let mask = exclusion_mask(dates.iter().copied(), exclusions);
    let set = cycle_periodicities(&series.without_leap_days(), 365, &mask)?;
    PeriodProfile::from_cycles(&set, PhaseKind::DayOfYear, day_of_year_365(*first), exclusions.to_vec())
}

/// Calendar months fully covered by the series, with the mean of their
/// valid days (`None` when the whole month is gapped).
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlyMeans {
    /// First day of each month.
    pub months: Vec<NaiveDate>,
    pub means: Vec<Option<f64>>,
}

pub fn monthly_means(series: &DailySeries) -> MonthlyMeans {
    let mut out = MonthlyMeans {
        months: Vec::new(),
        means: Vec::new(),
    };
    let mut first = series.start();
    if first.day() != 1 {
        first = next_month(first);
    }
    while let Some(start) = series.index_of(first) {
        let len = days_in_month(first.year(), first.month()) as usize;
        if start + len > series.len() {
            break;
        }
        let (sum, n) = series.values()[start..start + len]
            .iter()
            .flatten()
            .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
        out.months.push(first);
        out.means.push((n > 0).then(|| sum / n as f64));
        first = next_month(first);
    }
    out
}

fn next_month(d: NaiveDate) -> NaiveDate {
    let (y, m) = if d.month() == 12 { (d.year() + 1, 1) } else { (d.year(), d.month() + 1) };
    NaiveDate::from_ymd_opt(y, m, 1).expect("first of month")
}

/// Month profile from calendar-month means; a month is excluded when any
/// of its days falls in an exclusion window.
pub fn monthly_yearly_profile(series: &DailySeries, exclusions: &[DateWindow]) -> Result<PeriodProfile> {
    let mm = monthly_means(series);
    let Some(first) = mm.months.first() else {
        return Err(Error::NoCompleteCycles { period: 12 });
    };
    let mask: Vec<bool> = mm
        .months
        .iter()
        .map(|m| {
            let last = *m + Duration::days(i64::from(days_in_month(m.year(), m.month())) - 1);
            exclusions.iter().any(|w| w.overlaps(*m, last))
        })
        .collect();
    let set = cycle_periodicities(&mm.means, 12, &mask)?;
    PeriodProfile::from_cycles(&set, PhaseKind::Month, first.month0() as usize, exclusions.to_vec())
}

/// Monthly-scale (`L = 12`) and daily-scale (`L = 365`) yearly profiles.
pub fn yearly_profiles(
    series: &DailySeries,
    exclusions: &[DateWindow],
) -> Result<(PeriodProfile, PeriodProfile)> {
    Ok((
        monthly_yearly_profile(series, exclusions)?,
        daily_yearly_profile(series, exclusions)?,
    ))
}

/// Divides every day by its phase factor. Excluded windows are divided
/// like any other day; gaps stay gaps.
pub fn remove_cycle(series: &DailySeries, profile: &PeriodProfile) -> Result<DailySeries> {
    let mut values = Vec::with_capacity(series.len());
    for (t, (date, v)) in series.iter().enumerate() {
        let phase = profile.phase_of(t, date);
        let factor = profile.p[phase];
        if !(factor > 0.0) {
            return Err(Error::NonPositiveProfile { phase });
        }
        values.push(v.map(|v| v / factor));
    }
    Ok(DailySeries::with_gaps(series.start(), values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum YearlyScale {
    /// Day-of-year profile (`L = 365`).
    #[default]
    Daily,
    /// Calendar-month profile (`L = 12`).
    Monthly,
    /// No yearly removal.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CycleConfig {
    pub weekly_exclusions: Vec<DateWindow>,
    pub yearly_exclusions: Vec<DateWindow>,
    pub yearly_scale: YearlyScale,
    /// Remove the weekly cycle before estimating the yearly one.
    pub weekly_first: bool,
    /// Yearly removal is skipped when fewer complete years survive.
    pub min_yearly_cycles: usize,
}

impl Default for CycleConfig {
    fn default() -> Self {
        Self {
            weekly_exclusions: vec![DateWindow::default_weekly_exclusion()],
            yearly_exclusions: vec![DateWindow::default_yearly_exclusion()],
            yearly_scale: YearlyScale::Daily,
            weekly_first: true,
            min_yearly_cycles: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleRemoval {
    pub weekly: PeriodProfile,
    /// `None` when disabled or when too few years were available.
    pub yearly: Option<PeriodProfile>,
    pub residual: DailySeries,
}

/// Estimates and removes the weekly and yearly cycles in the configured
/// order; each profile is estimated on the output of the previous removal.
pub fn remove_cycles(series: &DailySeries, config: &CycleConfig) -> Result<CycleRemoval> {
    let weekly_step = |s: &DailySeries| -> Result<(PeriodProfile, DailySeries)> {
        let p = weekly_profile(s, &config.weekly_exclusions)?;
        let r = remove_cycle(s, &p)?;
        Ok((p, r))
    };
    let yearly_step = |s: &DailySeries| -> Result<(Option<PeriodProfile>, DailySeries)> {
        let estimate = match config.yearly_scale {
            YearlyScale::None => return Ok((None, s.clone())),
            YearlyScale::Daily => daily_yearly_profile(s, &config.yearly_exclusions),
            YearlyScale::Monthly => monthly_yearly_profile(s, &config.yearly_exclusions),
        };
        match estimate {
            Ok(p) if p.cycles >= config.min_yearly_cycles => {
                let r = remove_cycle(s, &p)?;
                Ok((Some(p), r))
            }
            Ok(p) => {
                warn!(
                    "only {} complete years (need {}); yearly cycle not removed",
                    p.cycles, config.min_yearly_cycles
                );
                Ok((None, s.clone()))
            }
            Err(Error::NoCompleteCycles { .. }) if config.min_yearly_cycles > 0 => {
                warn!("no complete year; yearly cycle not removed");
                Ok((None, s.clone()))
            }
            Err(e) => Err(e),
        }
    };
    if config.weekly_first {
        let (weekly, after) = weekly_step(series)?;
        let (yearly, residual) = yearly_step(&after)?;
        Ok(CycleRemoval { weekly, yearly, residual })
    } else {
        let (yearly, after) = yearly_step(series)?;
        let (weekly, residual) = weekly_step(&after)?;
        Ok(CycleRemoval { weekly, yearly, residual })
    }
}
