//! Long-term memory: autocovariance and autocorrelation, power spectral
//! density (Wiener–Khinchin and Welch), log-log exponent fits, and the
//! stationarity filter for yearly segments.

mod acf;
mod analysis;
mod fit;
mod spectrum;
mod stationarity;

pub use acf::{
    autocovariance, autocovariance_about, autocovariance_gapped, expected_sample_acf, match_power_law,
    mean_bias_corrected, yearly_acf, Centering, CorrelationEstimate, Estimator, YearlyAcf, YearlyAcfConfig,
};
pub use analysis::{long_memory, LongMemory, LongMemoryConfig};
pub use fit::{
    fit_acf_exponent, fit_power_law, fit_psd_exponent, AcfFitConfig, MemoryFit, PsdFitConfig,
    MIN_FIT_POINTS,
};
pub use spectrum::{
    psd_welch, psd_wiener_khinchin, SpectralEstimate, SpectralMethod, WelchConfig, Window,
};
pub use stationarity::{stationarity_filter, StationarityCheck, StationarityThresholds};
