use chrono::NaiveDate;

use super::acf::{yearly_acf, YearlyAcf, YearlyAcfConfig};
use super::fit::{fit_acf_exponent, fit_psd_exponent, AcfFitConfig, MemoryFit, PsdFitConfig};
use super::spectrum::{psd_welch, psd_wiener_khinchin, SpectralEstimate, WelchConfig};
use crate::error::Result;
use crate::series::{is_leap_day, DailySeries};
use crate::signal::standardize;

/// Settings of [`long_memory`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LongMemoryConfig {
    pub acf: YearlyAcfConfig,
    pub welch: WelchConfig,
    pub acf_fit: AcfFitConfig,
    pub psd_fit: PsdFitConfig,
}

/// Everything the memory stage estimates from one series.
#[derive(Debug, Clone)]
pub struct LongMemory {
    /// Dates kept after leap days were dropped; segment `i` starts at
    /// `dates[i * segment]`.
    pub dates: Vec<NaiveDate>,
    pub yearly: YearlyAcf,
    pub wiener_khinchin: SpectralEstimate,
    pub welch: SpectralEstimate,
    pub alpha: MemoryFit,
    pub beta: MemoryFit,
}

/// Standardizes `series`, drops leap days so every 365-day segment is a
/// calendar year, and estimates the yearly-segment autocorrelation, both
/// spectra and the exponents `α` and `β`.
///
/// Welch segments need contiguous data; gaps of the z-scored series are
/// filled with its mean, zero.
pub fn long_memory(series: &DailySeries, config: &LongMemoryConfig) -> Result<LongMemory> {
    let z = standardize(series)?.series;
    let dates: Vec<NaiveDate> = z.iter().map(|(d, _)| d).filter(|d| !is_leap_day(*d)).collect();
    let values = z.without_leap_days();
    let yearly = yearly_acf(&values, &config.acf)?;
    let dense: Vec<f64> = values.iter().map(|v| v.unwrap_or(0.0)).collect();
    let welch = psd_welch(&dense, &config.welch)?;
    let wiener_khinchin = psd_wiener_khinchin(&yearly.estimate);
    let alpha = fit_acf_exponent(&yearly.estimate, yearly.mean_len, &config.acf_fit)?;
    let beta = fit_psd_exponent(&welch, &config.psd_fit)?;
    Ok(LongMemory {
        dates,
        yearly,
        wiener_khinchin,
        welch,
        alpha,
        beta,
    })
}
