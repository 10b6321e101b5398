use serde::{Deserialize, Serialize};

/// Split-half stationarity rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StationarityThresholds {
    /// Maximum |mean(first half) − mean(second half)| in units of the pooled
    /// standard deviation.
    pub max_mean_shift: f64,
    pub min_variance_ratio: f64,
    pub max_variance_ratio: f64,
}

impl Default for StationarityThresholds {
    fn default() -> Self {
        Self {
            max_mean_shift: 0.5,
            min_variance_ratio: 0.5,
            max_variance_ratio: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityCheck {
    pub passed: bool,
    /// Half-mean difference over pooled standard deviation.
    pub mean_shift: f64,
    /// Variance of the first half over variance of the second.
    pub variance_ratio: Option<f64>,
    pub reason: Option<String>,
}

pub const MIN_SEGMENT: usize = 30;

pub fn stationarity_filter(segment: &[f64], thresholds: &StationarityThresholds) -> StationarityCheck {
    if segment.len() < MIN_SEGMENT {
        return StationarityCheck {
            passed: false,
            mean_shift: f64::NAN,
            variance_ratio: None,
            reason: Some(format!("segment shorter than {MIN_SEGMENT} days")),
        };
    }
    let (a, b) = segment.split_at(segment.len() / 2);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let pooled = ((va + vb) / 2.0).sqrt();
    if !(va > 0.0 && vb > 0.0) {
        return StationarityCheck {
            passed: false,
            mean_shift: f64::NAN,
            variance_ratio: None,
            reason: Some("a half has zero variance; ratio undefined".into()),
        };
    }
    let mean_shift = (ma - mb).abs() / pooled;
    let ratio = va / vb;
    let mut reasons = Vec::new();
    if !(mean_shift < thresholds.max_mean_shift) {
        reasons.push(format!("half means differ by {mean_shift:.3} pooled std"));
    }
    if !(thresholds.min_variance_ratio..=thresholds.max_variance_ratio).contains(&ratio) {
        reasons.push(format!("variance ratio {ratio:.3} out of range"));
    }
    StationarityCheck {
        passed: reasons.is_empty(),
        mean_shift,
        variance_ratio: Some(ratio),
        reason: (!reasons.is_empty()).then(|| reasons.join("; ")),
    }
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    (m, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn white_noise_passes() {
        let t = StationarityThresholds::default();
        let mut passed = 0;
        for seed in 0..500 {
            let mut rng = substream(seed, "white");
            let x: Vec<f64> = (0..365).map(|_| rng.sample(StandardNormal)).collect();
            passed += stationarity_filter(&x, &t).passed as usize;
        }
        assert!(passed as f64 / 500.0 > 0.99, "{passed}/500");
    }

    #[test]
    fn ramp_fails() {
        let mut rng = substream(1, "ramp");
        let x: Vec<f64> = (0..365)
            .map(|i| i as f64 / 364.0 + 0.05 * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let c = stationarity_filter(&x, &StationarityThresholds::default());
        assert!(!c.passed);
        assert!(c.mean_shift > 1.0);
    }

    #[test]
    fn constant_fails_with_diagnostic() {
        let c = stationarity_filter(&[3.0; 100], &StationarityThresholds::default());
        assert!(!c.passed);
        assert!(c.variance_ratio.is_none());
        assert!(c.reason.unwrap().contains("undefined"));
    }
}
