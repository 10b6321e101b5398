use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use super::fgn::generate_fgn;
use crate::error::{Error, Result};
use crate::series::{day_of_year_365, DailySeries};

/// A multiplicative burst: `multiplier` applied for `duration` days from
/// `day` (an index into the series).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spike {
    pub day: usize,
    pub multiplier: f64,
    #[serde(default = "one")]
    pub duration: usize,
}

fn one() -> usize {
    1
}

/// Generative model for synthetic daily series:
/// `base_level · (1 + noise · fGn(t)) · weekly(weekday) · yearly(day of year) · spike(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    #[serde(default)]
    pub length: usize,
    #[serde(default)]
    pub start: NaiveDate,
    #[serde(default = "default_hurst")]
    pub hurst: f64,
    /// Monday-first weekday factors.
    #[serde(default)]
    pub weekly: Option<Vec<f64>>,
    /// Factors for days 1..=365 of a non-leap year.
    #[serde(default)]
    pub yearly: Option<Vec<f64>>,
    #[serde(default)]
    pub spikes: Vec<Spike>,
    #[serde(default = "default_base")]
    pub base_level: f64,
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_hurst() -> f64 {
    0.5
}

fn default_base() -> f64 {
    1.0
}

impl SynthSpec {
    pub fn new(length: usize, start: NaiveDate) -> Self {
        Self {
            length,
            start,
            hurst: default_hurst(),
            weekly: None,
            yearly: None,
            spikes: Vec::new(),
            base_level: 1.0,
            noise: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_profile("weekly", self.weekly.as_deref(), 7)?;
        check_profile("yearly", self.yearly.as_deref(), 365)?;
        for s in &self.spikes {
            if !(s.multiplier > 0.0) {
                return Err(Error::Config(format!(
                    "spike multiplier must be positive, got {}",
                    s.multiplier
                )));
            }
        }
        if !(self.base_level >= 0.0) {
            return Err(Error::Config("base level must not be negative".into()));
        }
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return Err(Error::Config(format!("Hurst exponent {} outside (0, 1)", self.hurst)));
        }
        Ok(())
    }
}

fn check_profile(name: &str, profile: Option<&[f64]>, len: usize) -> Result<()> {
    let Some(p) = profile else { return Ok(()) };
    if p.len() != len {
        return Err(Error::Config(format!("{name} profile needs {len} values, got {}", p.len())));
    }
    if p.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Config(format!("{name} profile must be positive")));
    }
    let mean = p.iter().sum::<f64>() / len as f64;
    if (mean - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!("{name} profile must average 1, got {mean}")));
    }
    Ok(())
}

/// Applies the multiplicative model of `spec` to a zero-mean noise series
/// `base` (usually fGn). `base` is ignored when `spec.noise` is zero.
pub fn inject(base: &[f64], spec: &SynthSpec) -> Result<DailySeries> {
    spec.validate()?;
    if spec.noise != 0.0 && base.len() < spec.length {
        return Err(Error::LengthMismatch {
            left: base.len(),
            right: spec.length,
        });
    }
    let mut spike = vec![1.0; spec.length];
    for s in &spec.spikes {
        for f in spike.iter_mut().skip(s.day).take(s.duration) {
            *f *= s.multiplier;
        }
    }
    let mut values = Vec::with_capacity(spec.length);
    for (t, spike_factor) in spike.iter().enumerate() {
        let date = spec.start + chrono::Duration::days(t as i64);
        let noise = if spec.noise == 0.0 { 0.0 } else { spec.noise * base[t] };
        let mut v = spec.base_level * (1.0 + noise) * spike_factor;
        if let Some(w) = &spec.weekly {
            v *= w[date.weekday().num_days_from_monday() as usize];
        }
        if let Some(y) = &spec.yearly {
            v *= y[day_of_year_365(date)];
        }
        // a zero base level is a legitimate all-zero series
        if !(v > 0.0) && spec.base_level > 0.0 {
            return Err(Error::NonPositiveOutput { index: t, value: v });
        }
        values.push(v);
    }
    Ok(DailySeries::new(spec.start, values))
}

/// fGn drawn from `spec.hurst` and `spec.seed`, passed through [`inject`].
pub fn synth_series(spec: &SynthSpec) -> Result<DailySeries> {
    spec.validate()?;
    let base = if spec.noise == 0.0 {
        Vec::new()
    } else {
        generate_fgn(spec.hurst, spec.length.max(2), spec.seed)?
    };
    inject(&base, spec)
}
