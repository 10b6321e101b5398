use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::{num_complex::Complex64, Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::rng::substream;

/// Exact autocovariance of unit-variance fractional Gaussian noise,
/// `½(|τ+1|^{2H} − 2|τ|^{2H} + |τ−1|^{2H})`.
pub fn fgn_autocovariance(hurst: f64, lag: usize) -> f64 {
    let k = lag as f64;
    let e = 2.0 * hurst;
    0.5 * ((k + 1.0).powf(e) - 2.0 * k.powf(e) + (k - 1.0).abs().powf(e))
}

/// Fractional Gaussian noise sampled by circulant embedding of the exact
/// autocovariance (Davies–Harte). Zero mean and unit variance in
/// expectation; identical output for identical `(hurst, n, seed)`.
///
/// Should the embedding produce negative eigenvalues they are clipped to
/// zero, which turns the sample into an approximation; a warning is logged.
pub fn generate_fgn(hurst: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::Config(format!("Hurst exponent must lie in (0, 1), got {hurst}")));
    }
    if n < 2 {
        return Err(Error::Config(format!("fGn length must be at least 2, got {n}")));
    }
    let m = 2 * n;
    let mut planner = FftPlanner::<f64>::new();
    let fft: Arc<dyn Fft<f64>> = planner.plan_fft_forward(m);

    // first row of the circulant: γ(0..=n), then γ(n-1..=1)
    let mut row: Vec<Complex64> = (0..=n)
        .map(|k| Complex64::new(fgn_autocovariance(hurst, k), 0.0))
        .collect();
    row.extend((1..n).rev().map(|k| Complex64::new(fgn_autocovariance(hurst, k), 0.0)));
    fft.process(&mut row);

    let mut clipped = 0usize;
    let scale: Vec<f64> = row
        .iter()
        .map(|l| {
            let mut v = l.re;
            if v < 0.0 {
                if v < -1e-10 {
                    clipped += 1;
                }
                v = 0.0;
            }
            (v / m as f64).sqrt()
        })
        .collect();
    if clipped > 0 {
        log::warn!(
            "circulant embedding for H={hurst}, n={n} has {clipped} negative eigenvalues; \
             clipping them makes the sample approximate"
        );
    }

    let mut rng = substream(seed, "fgn");
    let mut w: Vec<Complex64> = scale
        .iter()
        .map(|s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(s * re, s * im)
        })
        .collect();
    fft.process(&mut w);
    Ok(w.into_iter().take(n).map(|c| c.re).collect())
}
