use std::fmt;
use std::str::FromStr;

use chrono::Datelike;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::memory::{autocovariance_gapped, CorrelationEstimate, Estimator};
use crate::rng::substream;
use crate::series::DailySeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShuffleScheme {
    /// Full permutation of days.
    Daily,
    /// 7-day blocks from the first day of the series are permuted; the
    /// trailing partial week is dropped.
    Weekly,
    /// Calendar-month blocks are permuted across the whole span.
    Monthly,
}

impl fmt::Display for ShuffleScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShuffleScheme::Daily => "daily",
            ShuffleScheme::Weekly => "weekly",
            ShuffleScheme::Monthly => "monthly",
        })
    }
}

impl FromStr for ShuffleScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "daily" => Ok(Self::Daily),
            "weekly" => Ok(Self::Weekly),
            "monthly" => Ok(Self::Monthly),
            other => Err(Error::Config(format!("unknown shuffle scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateSpec {
    pub scheme: ShuffleScheme,
    pub seed: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
}

fn default_repetitions() -> usize {
    10
}

impl SurrogateSpec {
    pub fn new(scheme: ShuffleScheme, seed: u64) -> Self {
        Self {
            scheme,
            seed,
            repetitions: default_repetitions(),
        }
    }
}

/// Contiguous index ranges that a scheme moves as units.
fn blocks(series: &DailySeries, scheme: ShuffleScheme) -> Vec<(usize, usize)> {
    let n = series.len();
    match scheme {
        ShuffleScheme::Daily => (0..n).map(|i| (i, i + 1)).collect(),
        ShuffleScheme::Weekly => (0..n / 7).map(|w| (7 * w, 7 * w + 7)).collect(),
        ShuffleScheme::Monthly => {
            let mut out = Vec::new();
            let mut begin = 0;
            for i in 1..=n {
                let new_month = i == n || {
                    let (a, b) = (series.date_at(i - 1), series.date_at(i));
                    (a.year(), a.month()) != (b.year(), b.month())
                };
                if new_month {
                    out.push((begin, i));
                    begin = i;
                }
            }
            out
        }
    }
}

/// One surrogate of `series` under `scheme`. Blocks keep their internal
/// order; the order of blocks is a uniform random permutation. The output
/// starts on the same day as the input.
pub fn shuffle<R: Rng + ?Sized>(
    series: &DailySeries,
    scheme: ShuffleScheme,
    rng: &mut R,
) -> Result<DailySeries> {
    let mut blocks = blocks(series, scheme);
    if blocks.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{scheme} shuffle needs at least 2 blocks, series has {}",
            blocks.len()
        )));
    }
    blocks.shuffle(rng);
    let values = series.values();
    let out = blocks
        .into_iter()
        .flat_map(|(a, b)| values[a..b].iter().copied())
        .collect();
    Ok(DailySeries::with_gaps(series.start(), out))
}

/// `spec.repetitions` surrogates, each from its own seeded sub-stream.
pub fn surrogates(series: &DailySeries, spec: &SurrogateSpec) -> Result<Vec<DailySeries>> {
    if spec.repetitions == 0 {
        return Err(Error::Config("surrogate repetitions must be at least 1".into()));
    }
    (0..spec.repetitions)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream(spec.seed, &format!("shuffle-{}-{rep}", spec.scheme));
            shuffle(series, spec.scheme, &mut rng)
        })
        .collect()
}

/// Autocorrelation averaged pointwise over the surrogates of `spec`.
pub fn surrogate_acf(
    series: &DailySeries,
    spec: &SurrogateSpec,
    max_lag: usize,
) -> Result<CorrelationEstimate> {
    let estimates = surrogates(series, spec)?
        .iter()
        .map(|s| autocovariance_gapped(s.values(), max_lag, Estimator::Biased))
        .collect::<Result<Vec<_>>>()?;
    CorrelationEstimate::average(&estimates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ymd;

    fn sorted(v: impl Iterator<Item = f64>) -> Vec<f64> {
        let mut v: Vec<f64> = v.collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn weekly_blocks_intact() {
        let s = DailySeries::new(ymd(2020, 1, 1), (0..24).map(f64::from).collect());
        let mut rng = substream(5, "t");
        let out = shuffle(&s, ShuffleScheme::Weekly, &mut rng).unwrap();
        assert_eq!(out.len(), 21);
        let v: Vec<f64> = out.valid().collect();
        for block in v.chunks(7) {
            assert_eq!(block[0] as usize % 7, 0);
            for w in block.windows(2) {
                assert_eq!(w[1], w[0] + 1.0);
            }
        }
        assert_eq!(sorted(out.valid()), sorted((0..21).map(f64::from)));
    }

    #[test]
    fn monthly_blocks_follow_calendar() {
        // Jan 15 .. Apr 10: partial Jan, Feb, Mar, partial Apr
        let start = ymd(2021, 1, 15);
        let n = (ymd(2021, 4, 10) - start).num_days() as usize + 1;
        let s = DailySeries::new(start, (0..n).map(|i| i as f64).collect());
        assert_eq!(blocks(&s, ShuffleScheme::Monthly).len(), 4);
        let out = shuffle(&s, ShuffleScheme::Monthly, &mut substream(1, "m")).unwrap();
        assert_eq!(sorted(out.valid()), sorted(s.valid()));
    }

    #[test]
    fn too_few_blocks() {
        let s = DailySeries::new(ymd(2020, 1, 1), vec![1.0; 10]);
        assert!(shuffle(&s, ShuffleScheme::Weekly, &mut substream(0, "x")).is_err());
        assert!(shuffle(&s, ShuffleScheme::Monthly, &mut substream(0, "x")).is_err());
    }

    #[test]
    fn surrogates_deterministic() {
        let s = DailySeries::new(ymd(2020, 1, 1), (0..100).map(f64::from).collect());
        let spec = SurrogateSpec::new(ShuffleScheme::Daily, 9);
        assert_eq!(surrogates(&s, &spec).unwrap(), surrogates(&s, &spec).unwrap());
    }
}
