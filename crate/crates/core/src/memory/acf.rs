use serde::{Deserialize, Serialize};

use super::stationarity::{stationarity_filter, StationarityCheck, StationarityThresholds};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    /// Lag products summed and divided by the number of valid days.
    /// Positive semidefinite and consistent with the periodogram.
    #[default]
    Biased,
    /// Lag products averaged over the pairs actually available.
    Pairwise,
}

/// Autocovariance and autocorrelation for lags `0..=max_lag`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEstimate {
    pub cov: Vec<f64>,
    pub rho: Vec<f64>,
    /// Number of valid samples the estimate was computed from.
    pub n: usize,
    pub estimator: Estimator,
}

impl CorrelationEstimate {
    pub fn max_lag(&self) -> usize {
        self.rho.len() - 1
    }

    pub fn lags(&self) -> impl Iterator<Item = usize> {
        0..self.rho.len()
    }

    /// Pointwise mean of several estimates of equal length.
    pub fn average(estimates: &[CorrelationEstimate]) -> Result<Self> {
        let first = estimates
            .first()
            .ok_or_else(|| Error::InsufficientData("nothing to average".into()))?;
        let len = first.rho.len();
        let mut cov = vec![0.0; len];
        let mut rho = vec![0.0; len];
        for e in estimates {
            if e.rho.len() != len {
                return Err(Error::LengthMismatch {
                    left: len,
                    right: e.rho.len(),
                });
            }
            for (acc, v) in cov.iter_mut().zip(&e.cov) {
                *acc += v;
            }
            for (acc, v) in rho.iter_mut().zip(&e.rho) {
                *acc += v;
            }
        }
        let k = estimates.len() as f64;
        cov.iter_mut().for_each(|v| *v /= k);
        rho.iter_mut().for_each(|v| *v /= k);
        rho[0] = 1.0;
        Ok(Self {
            cov,
            rho,
            n: first.n,
            estimator: first.estimator,
        })
    }

    /// Partial sums `Σ_{τ≤T} |ρ(τ)|` for every `T`. Under long memory these
    /// keep growing with `T`; for short memory they level off.
    pub fn cumulative_abs(&self) -> Vec<f64> {
        self.rho
            .iter()
            .scan(0.0, |acc, r| {
                *acc += r.abs();
                Some(*acc)
            })
            .collect()
    }
}

pub fn autocovariance(z: &[f64], max_lag: usize, estimator: Estimator) -> Result<CorrelationEstimate> {
    if z.len() <= max_lag {
        return Err(Error::InsufficientData(format!(
            "series of length {} cannot give lags up to {max_lag}",
            z.len()
        )));
    }
    let n = z.len();
    let mu = z.iter().sum::<f64>() / n as f64;
    let d: Vec<f64> = z.iter().map(|x| x - mu).collect();
    let mut cov = Vec::with_capacity(max_lag + 1);
    for lag in 0..=max_lag {
        let s: f64 = d[lag..].iter().zip(&d).map(|(a, b)| a * b).sum();
        let denom = match estimator {
            Estimator::Biased => n,
            Estimator::Pairwise => n - lag,
        };
        cov.push(s / denom as f64);
    }
    finish(cov, n, estimator)
}

/// As [`autocovariance`], with gap days excluded: the mean uses valid days
/// only and a lag product is formed only when both days are valid.
pub fn autocovariance_gapped(
    z: &[Option<f64>],
    max_lag: usize,
    estimator: Estimator,
) -> Result<CorrelationEstimate> {
    if z.iter().all(Option::is_some) {
        let dense: Vec<f64> = z.iter().map(|v| v.expect("checked")).collect();
        return autocovariance(&dense, max_lag, estimator);
    }
    if z.len() <= max_lag {
        return Err(Error::InsufficientData(format!(
            "series of length {} cannot give lags up to {max_lag}",
            z.len()
        )));
    }
    let (sum, n) = z
        .iter()
        .flatten()
        .fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        return Err(Error::InsufficientData("series has no valid days".into()));
    }
    autocovariance_about(z, sum / n as f64, max_lag, estimator)
}

/// Autocovariance of `z` around a given `mean` instead of its own, e.g.
/// the temporal mean of a longer series that `z` is a segment of. Gaps are
/// handled as in [`autocovariance_gapped`].
pub fn autocovariance_about(
    z: &[Option<f64>],
    mean: f64,
    max_lag: usize,
    estimator: Estimator,
) -> Result<CorrelationEstimate> {
    if z.len() <= max_lag {
        return Err(Error::InsufficientData(format!(
            "series of length {} cannot give lags up to {max_lag}",
            z.len()
        )));
    }
    let n = z.iter().flatten().count();
    if n == 0 {
        return Err(Error::InsufficientData("series has no valid days".into()));
    }
    let d: Vec<Option<f64>> = z.iter().map(|v| v.map(|x| x - mean)).collect();
    let mut cov = Vec::with_capacity(max_lag + 1);
    for lag in 0..=max_lag {
        let (s, pairs) = d[lag..]
            .iter()
            .zip(&d)
            .filter_map(|(a, b)| Some((*a)? * (*b)?))
            .fold((0.0, 0usize), |(s, k), p| (s + p, k + 1));
        let v = match estimator {
            Estimator::Biased => s / n as f64,
            Estimator::Pairwise if pairs == 0 => f64::NAN,
            Estimator::Pairwise => s / pairs as f64,
        };
        cov.push(v);
    }
    finish(cov, n, estimator)
}

fn finish(cov: Vec<f64>, n: usize, estimator: Estimator) -> Result<CorrelationEstimate> {
    let c0 = cov[0];
    if !(c0 > 0.0) {
        return Err(Error::ConstantSeries);
    }
    let mut rho: Vec<f64> = cov.iter().map(|c| c / c0).collect();
    rho[0] = 1.0;
    Ok(CorrelationEstimate {
        cov,
        rho,
        n,
        estimator,
    })
}

/// Which mean the lag products of a segment are taken around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Centering {
    /// The temporal mean of the whole series.
    #[default]
    Global,
    /// Each segment's own mean.
    Segment,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct YearlyAcfConfig {
    pub segment: usize,
    pub max_lag: usize,
    pub thresholds: StationarityThresholds,
    pub estimator: Estimator,
    pub centering: Centering,
}

impl Default for YearlyAcfConfig {
    fn default() -> Self {
        Self {
            segment: 365,
            // a 365-day segment has lag products up to 364
            max_lag: 364,
            thresholds: StationarityThresholds::default(),
            estimator: Estimator::Biased,
            centering: Centering::Global,
        }
    }
}

#[derive(Debug, Clone)]
pub struct YearlyAcf {
    pub estimate: CorrelationEstimate,
    pub segments_used: usize,
    pub segments_total: usize,
    pub checks: Vec<StationarityCheck>,
    /// Number of values the centering mean was computed from; this sets
    /// the size of the mean bias (see [`mean_bias_corrected`]).
    pub mean_len: usize,
}

/// Cuts `z` into consecutive non-overlapping segments (one year each by
/// default), keeps those passing the stationarity filter, and averages
/// their autocorrelation functions pointwise.
pub fn yearly_acf(z: &[Option<f64>], config: &YearlyAcfConfig) -> Result<YearlyAcf> {
    if config.max_lag >= config.segment {
        return Err(Error::Config(format!(
            "max lag {} must be shorter than the segment {}",
            config.max_lag, config.segment
        )));
    }
    let total = z.len() / config.segment;
    if total == 0 {
        return Err(Error::InsufficientData(format!(
            "need at least one {}-day segment, series has {} days",
            config.segment,
            z.len()
        )));
    }
    let (sum, valid) = z.iter().flatten().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    let global = sum / valid.max(1) as f64;
    let mut checks = Vec::with_capacity(total);
    let mut estimates = Vec::new();
    for seg in z.chunks_exact(config.segment) {
        let valid: Vec<f64> = seg.iter().flatten().copied().collect();
        let check = stationarity_filter(&valid, &config.thresholds);
        if check.passed {
            let estimate = match config.centering {
                Centering::Global => autocovariance_about(seg, global, config.max_lag, config.estimator),
                Centering::Segment => autocovariance_gapped(seg, config.max_lag, config.estimator),
            };
            if let Ok(e) = estimate {
                estimates.push(e);
            }
        }
        checks.push(check);
    }
    if estimates.is_empty() {
        return Err(Error::InsufficientData(format!(
            "none of the {total} segments passed the stationarity filter"
        )));
    }
    Ok(YearlyAcf {
        estimate: CorrelationEstimate::average(&estimates)?,
        segments_used: estimates.len(),
        segments_total: total,
        checks,
        mean_len: match config.centering {
            Centering::Global => valid,
            Centering::Segment => config.segment,
        },
    })
}

/// Expected biased sample autocorrelation of a length-`n` stationary series
/// with true autocovariance `gamma` (`gamma.len() >= n`), accounting for
/// the subtraction of the sample mean.
pub fn expected_sample_acf(gamma: &[f64], n: usize, max_lag: usize) -> Vec<f64> {
    let nf = n as f64;
    // prefix[k] = Σ_{j<=k} γ(j)
    let prefix: Vec<f64> = gamma[..n]
        .iter()
        .scan(0.0, |acc, g| {
            *acc += g;
            Some(*acc)
        })
        .collect();
    // cross[t] = Cov(x_t, sample mean)
    let cross: Vec<f64> = (0..n)
        .map(|t| (prefix[t] + prefix[n - 1 - t] - gamma[0]) / nf)
        .collect();
    let var_mean = cross.iter().sum::<f64>() / nf;
    let mut cross_prefix = vec![0.0; n + 1];
    for t in 0..n {
        cross_prefix[t + 1] = cross_prefix[t] + cross[t];
    }
    let expected: Vec<f64> = (0..=max_lag)
        .map(|lag| {
            let m = (n - lag) as f64;
            (m * (gamma[lag] + var_mean) - cross_prefix[n - lag] - (cross_prefix[n] - cross_prefix[lag]))
                / nf
        })
        .collect();
    let e0 = expected[0];
    expected.into_iter().map(|e| e / e0).collect()
}

/// Power law `A·τ^{-α}` (capped at 1) whose expected sample
/// autocorrelation at length `n` is closest, in least squares over the lags
/// in `range`, to `rho`. Returns `(A, α)`.
pub fn match_power_law(rho: &[f64], n: usize, range: (f64, f64)) -> Result<(f64, f64)> {
    let lags: Vec<usize> = (1..rho.len())
        .filter(|&t| t as f64 >= range.0 && t as f64 <= range.1)
        .collect();
    if lags.len() < super::MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} lags in {:?}, need {}",
            lags.len(),
            range,
            super::MIN_FIT_POINTS
        )));
    }
    let n = n.max(rho.len());
    let top = *lags.last().expect("non-empty");
    let cost = |amplitude: f64, alpha: f64| -> f64 {
        let e = expected_sample_acf(&power_law(amplitude, alpha, n), n, top);
        lags.iter().map(|&t| (e[t] - rho[t]).powi(2)).sum()
    };
    // coarse grid, then two refinements around the best cell
    let mut best = (f64::INFINITY, 0.5, 0.5);
    let (mut a_lo, mut a_hi, mut x_lo, mut x_hi) = (0.02, 1.0, 0.01, 0.99);
    for _ in 0..3 {
        let steps = 20;
        for i in 0..=steps {
            let amplitude = a_lo + (a_hi - a_lo) * i as f64 / steps as f64;
            for j in 0..=steps {
                let alpha = x_lo + (x_hi - x_lo) * j as f64 / steps as f64;
                let c = cost(amplitude, alpha);
                if c < best.0 {
                    best = (c, amplitude, alpha);
                }
            }
        }
        let (da, dx) = ((a_hi - a_lo) / 10.0, (x_hi - x_lo) / 10.0);
        a_lo = (best.1 - da).max(1e-3);
        a_hi = (best.1 + da).min(1.0);
        x_lo = (best.2 - dx).max(1e-3);
        x_hi = (best.2 + dx).min(0.999);
    }
    Ok((best.1, best.2))
}

fn power_law(amplitude: f64, alpha: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|t| if t == 0 { 1.0 } else { (amplitude * (t as f64).powf(-alpha)).min(1.0) })
        .collect()
}

/// Removes the downward bias that subtracting a sample mean of `n` values
/// imposes on the autocorrelation of a long-memory series.
///
/// The power law of [`match_power_law`] stands in for the true
/// autocorrelation; the gap between it and its expected sample value is
/// added back to `rho`. Lag 0 stays at 1.
pub fn mean_bias_corrected(rho: &[f64], n: usize, range: (f64, f64)) -> Result<Vec<f64>> {
    let (amplitude, alpha) = match_power_law(rho, n, range)?;
    let n = n.max(rho.len());
    let gamma = power_law(amplitude, alpha, n);
    let expected = expected_sample_acf(&gamma, n, rho.len() - 1);
    let mut corrected: Vec<f64> = rho
        .iter()
        .zip(gamma.iter().zip(&expected))
        .map(|(r, (g, e))| r + g - e)
        .collect();
    corrected[0] = 1.0;
    Ok(corrected)
}
