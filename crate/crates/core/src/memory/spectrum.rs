use std::f64::consts::PI;

use rustfft::{num_complex::Complex64, FftPlanner};
use serde::{Deserialize, Serialize};

use super::acf::CorrelationEstimate;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralMethod {
    WienerKhinchin,
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    Hann,
    Rectangular,
}

impl Window {
    fn weights(self, len: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; len],
            // periodic Hann
            Window::Hann => (0..len)
                .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / len as f64).cos())
                .collect(),
        }
    }
}

/// Power spectral density at the positive Fourier frequencies `j / segment`
/// (cycles per day), `j = 1..=segment/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEstimate {
    pub freqs: Vec<f64>,
    pub power: Vec<f64>,
    pub method: SpectralMethod,
    pub segment: usize,
    pub overlap: f64,
    pub window: Window,
    pub segments_used: usize,
}

impl SpectralEstimate {
    /// Frequency of the largest ordinate.
    pub fn peak_frequency(&self) -> f64 {
        let (i, _) = self
            .power
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty spectrum");
        self.freqs[i]
    }
}

/// Cosine transform of an autocovariance sequence:
/// `S(f) = Cov(0) + 2 Σ_{τ≥1} Cov(τ) cos(2πτf)` at `f_j = j/n`.
pub fn psd_wiener_khinchin(cov: &CorrelationEstimate) -> SpectralEstimate {
    let n = cov.n;
    let freqs: Vec<f64> = (1..=n / 2).map(|j| j as f64 / n as f64).collect();
    let power = (1..=n / 2)
        .map(|j| {
            let tail: f64 = cov
                .cov
                .iter()
                .enumerate()
                .skip(1)
                .map(|(lag, c)| {
                    // reduce τ·j mod n before scaling keeps the angle exact
                    let k = (lag * j) % n;
                    c * (2.0 * PI * k as f64 / n as f64).cos()
                })
                .sum();
            cov.cov[0] + 2.0 * tail
        })
        .collect();
    SpectralEstimate {
        freqs,
        power,
        method: SpectralMethod::WienerKhinchin,
        segment: n,
        overlap: 0.0,
        window: Window::Rectangular,
        segments_used: 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WelchConfig {
    pub segment: usize,
    /// Fraction of a segment shared with the next one, in `[0, 1)`.
    pub overlap: f64,
    pub window: Window,
}

impl Default for WelchConfig {
    fn default() -> Self {
        Self {
            segment: 365,
            overlap: 0.5,
            window: Window::Hann,
        }
    }
}

/// Welch's averaged periodogram. Each segment has its own mean removed and
/// is tapered by the window; power is normalized by the window energy so
/// unit-variance white noise has `S ≈ 1`.
pub fn psd_welch(z: &[f64], config: &WelchConfig) -> Result<SpectralEstimate> {
    let seg = config.segment;
    if seg < 2 {
        return Err(Error::Config("Welch segment must be at least 2".into()));
    }
    if !(0.0..1.0).contains(&config.overlap) {
        return Err(Error::Config(format!("overlap {} not in [0, 1)", config.overlap)));
    }
    if z.len() < seg {
        return Err(Error::SegmentTooLong { len: z.len(), segment: seg });
    }
    let step = (seg - (config.overlap * seg as f64).round() as usize).max(1);
    let weights = config.window.weights(seg);
    let energy: f64 = weights.iter().map(|w| w * w).sum();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(seg);

    let mut power = vec![0.0; seg / 2];
    let mut used = 0usize;
    let mut buf = vec![Complex64::new(0.0, 0.0); seg];
    let mut begin = 0;
    while begin + seg <= z.len() {
        let s = &z[begin..begin + seg];
        let mu = s.iter().sum::<f64>() / seg as f64;
        for ((b, x), w) in buf.iter_mut().zip(s).zip(&weights) {
            *b = Complex64::new((x - mu) * w, 0.0);
        }
        fft.process(&mut buf);
        for (p, c) in power.iter_mut().zip(&buf[1..]) {
            *p += c.norm_sqr() / energy;
        }
        used += 1;
        begin += step;
    }
    power.iter_mut().for_each(|p| *p /= used as f64);
    Ok(SpectralEstimate {
        freqs: (1..=seg / 2).map(|j| j as f64 / seg as f64).collect(),
        power,
        method: SpectralMethod::Welch,
        segment: seg,
        overlap: config.overlap,
        window: config.window,
        segments_used: used,
    })
}
