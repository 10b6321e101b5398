//! Recover an injected weekly profile over ten years and divide it out.

use chrono::NaiveDate;
use collective_emotion::memory::{autocovariance_gapped, Estimator};
use collective_emotion::nulls::{synth_series, SynthSpec};
use collective_emotion::periodicity::{remove_cycle, weekly_profile};

fn main() -> collective_emotion::Result<()> {
    let injected = [0.8, 0.9, 1.0, 1.0, 1.0, 1.1, 1.2];
    let mut spec = SynthSpec::new(3640, NaiveDate::from_ymd_opt(2006, 11, 6).unwrap());
    spec.weekly = Some(injected.to_vec());
    spec.noise = 0.1;
    spec.seed = 3;
    let series = synth_series(&spec)?;

    let profile = weekly_profile(&series, &[])?;
    println!("{} weeks", profile.cycles);
    for ((label, p), s) in profile.labels.iter().zip(&profile.p).zip(&profile.s) {
        println!("{label}  p {p:.3}  s {s:.3}");
    }

    let residual = remove_cycle(&series, &profile)?;
    let before = autocovariance_gapped(series.values(), 7, Estimator::Biased)?;
    let after = autocovariance_gapped(residual.values(), 7, Estimator::Biased)?;
    println!("lag-7 autocorrelation {:.3} before removal, {:.3} after", before.rho[7], after.rho[7]);
    Ok(())
}
