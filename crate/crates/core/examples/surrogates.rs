//! Shuffled surrogates: daily shuffling destroys all correlation, weekly and
//! monthly shuffling keep it up to their block length.

use chrono::NaiveDate;
use collective_emotion::memory::{autocovariance_gapped, Estimator};
use collective_emotion::nulls::{surrogate_acf, synth_series, ShuffleScheme, SurrogateSpec, SynthSpec};
use collective_emotion::signal::standardize;

fn main() -> collective_emotion::Result<()> {
    let mut spec = SynthSpec::new(3650, NaiveDate::from_ymd_opt(2006, 11, 1).unwrap());
    spec.hurst = 0.75;
    spec.noise = 0.2;
    spec.seed = 11;
    let z = standardize(&synth_series(&spec)?)?.series;

    let lags = [1, 3, 7, 14, 30, 60, 100];
    let original = autocovariance_gapped(z.values(), 100, Estimator::Biased)?;
    print!("{:<9}", "lag");
    lags.iter().for_each(|l| print!("{l:>8}"));
    print!("\n{:<9}", "original");
    lags.iter().for_each(|&l| print!("{:>8.3}", original.rho[l]));
    println!();
    for scheme in [ShuffleScheme::Daily, ShuffleScheme::Weekly, ShuffleScheme::Monthly] {
        let acf = surrogate_acf(&z, &SurrogateSpec::new(scheme, 5), 100)?;
        print!("{:<9}", scheme.to_string());
        lags.iter().for_each(|&l| print!("{:>8.3}", acf.rho[l]));
        println!();
    }
    Ok(())
}
