use serde::{Deserialize, Serialize};

use super::acf::{mean_bias_corrected, CorrelationEstimate};
use super::spectrum::SpectralEstimate;
use crate::error::{Error, Result};

/// Power-law exponent from an ordinary least-squares line in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MemoryFit {
    /// Negated slope: `α` for `ρ ~ τ^{-α}`, `β` for `S ~ f^{-β}`.
    pub exponent: f64,
    pub lo: f64,
    pub hi: f64,
    /// Intercept of the log-log line (natural log).
    pub intercept: f64,
    pub r2: f64,
    pub n_points: usize,
}

pub const MIN_FIT_POINTS: usize = 5;

/// Fits `log y = intercept − exponent · log x` over the points with
/// `lo <= x <= hi` and `x, y > 0`.
pub fn fit_power_law(x: &[f64], y: &[f64], range: (f64, f64)) -> Result<MemoryFit> {
    let (lo, hi) = range;
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(x, y)| **x >= lo && **x <= hi && **x > 0.0 && **y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "power-law fit over [{lo}, {hi}] has {} positive points, needs {MIN_FIT_POINTS}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all fit abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(MemoryFit {
        exponent: -slope,
        lo,
        hi,
        intercept,
        r2,
        n_points: pts.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcfFitConfig {
    pub lo: f64,
    pub hi: f64,
    /// Undo the sample-mean bias before fitting (see [`mean_bias_corrected`]).
    pub correct_mean_bias: bool,
}

impl Default for AcfFitConfig {
    fn default() -> Self {
        Self {
            lo: 7.0,
            hi: 180.0,
            correct_mean_bias: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsdFitConfig {
    pub lo: f64,
    pub hi: f64,
}

impl Default for PsdFitConfig {
    fn default() -> Self {
        Self {
            lo: 1.0 / 365.0,
            hi: 1.0 / 14.0,
        }
    }
}

/// `α` of `ρ(τ) ~ τ^{-α}`. `sample_len` is the length of the series (or
/// segment) each autocorrelation was computed from; it sets the size of the
/// mean bias.
pub fn fit_acf_exponent(
    estimate: &CorrelationEstimate,
    sample_len: usize,
    config: &AcfFitConfig,
) -> Result<MemoryFit> {
    let lags: Vec<f64> = estimate.lags().map(|t| t as f64).collect();
    let range = (config.lo, config.hi);
    let rho = if config.correct_mean_bias {
        mean_bias_corrected(&estimate.rho, sample_len, range)?
    } else {
        estimate.rho.clone()
    };
    fit_power_law(&lags, &rho, range)
}

/// `β` of `S(f) ~ f^{-β}`.
pub fn fit_psd_exponent(spectrum: &SpectralEstimate, config: &PsdFitConfig) -> Result<MemoryFit> {
    fit_power_law(&spectrum.freqs, &spectrum.power, (config.lo, config.hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let x: Vec<f64> = (1..=100).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|t| t.powf(-0.5)).collect();
        let f = fit_power_law(&x, &y, (1.0, 100.0)).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert_eq!(f.n_points, 100);
    }

    #[test]
    fn non_positive_points_are_skipped() {
        let x: Vec<f64> = (1..=10).map(f64::from).collect();
        let mut y: Vec<f64> = x.iter().map(|t| 2.0 * t.powf(-0.8)).collect();
        y[3] = -0.1;
        y[4] = 0.0;
        let f = fit_power_law(&x, &y, (1.0, 10.0)).unwrap();
        assert_eq!(f.n_points, 8);
        assert!((f.exponent - 0.8).abs() < 1e-12);
        assert!((f.intercept - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = [1.0, 0.5, -1.0, 0.2, 0.1, 0.0];
        assert!(fit_power_law(&x, &y, (1.0, 6.0)).is_err());
    }
}
