//! Yearly periodicity at month and day resolution, with an exclusion window
//! that keeps an anomalous year out of the estimate.

use chrono::{Datelike, NaiveDate};
use collective_emotion::nulls::{synth_series, SynthSpec};
use collective_emotion::periodicity::yearly_profiles;
use collective_emotion::DateWindow;

fn main() -> collective_emotion::Result<()> {
    let start = NaiveDate::from_ymd_opt(2006, 11, 1).unwrap();
    // summer high, winter low
    let yearly: Vec<f64> = (0..365)
        .map(|d| 1.0 + 0.2 * (2.0 * std::f64::consts::PI * (d as f64 - 105.0) / 365.0).sin())
        .collect();
    let mut spec = SynthSpec::new(3652, start);
    spec.yearly = Some(yearly);
    spec.noise = 0.05;
    spec.seed = 8;
    let series = synth_series(&spec)?;

    let skip = [DateWindow::default_yearly_exclusion()];
    let (monthly, daily) = yearly_profiles(&series, &skip)?;
    println!("{} yearly cycles by month, {} by day", monthly.cycles, daily.cycles);
    for (label, p) in monthly.labels.iter().zip(&monthly.p) {
        println!("{label}  {p:.3}  {}", "#".repeat((p * 40.0) as usize));
    }
    let peak = (0..365).max_by(|&a, &b| daily.p[a].total_cmp(&daily.p[b])).unwrap();
    let date = NaiveDate::from_yo_opt(2007, peak as u32 + 1).unwrap();
    println!("daily profile peaks on {}-{:02}", date.format("%b"), date.day());
    Ok(())
}
