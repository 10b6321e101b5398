//! Long-term memory of fractional Gaussian noise: yearly-segment
//! autocorrelation, Welch spectrum and the exponents α and β.
//! A single ten-year realization scatters widely around theory; the
//! acceptance suite reports medians over many seeds.

use chrono::NaiveDate;
use collective_emotion::memory::{long_memory, LongMemoryConfig};
use collective_emotion::nulls::{synth_series, SynthSpec};

fn main() -> collective_emotion::Result<()> {
    let start = NaiveDate::from_ymd_opt(2006, 11, 1).unwrap();
    for hurst in [0.65, 0.75, 0.85] {
        let mut spec = SynthSpec::new(3650, start);
        spec.hurst = hurst;
        spec.noise = 0.2;
        spec.seed = 21;
        let m = long_memory(&synth_series(&spec)?, &LongMemoryConfig::default())?;
        let tail = m.yearly.estimate.cumulative_abs();
        println!(
            "H {hurst:.2}: {}/{} years used, alpha {:.2} (theory {:.2}), beta {:.2} (theory {:.2}), sum |rho| to 30 / 300: {:.1} / {:.1}",
            m.yearly.segments_used,
            m.yearly.segments_total,
            m.alpha.exponent,
            2.0 - 2.0 * hurst,
            m.beta.exponent,
            2.0 * hurst - 1.0,
            tail[30],
            tail[300],
        );
    }
    Ok(())
}
