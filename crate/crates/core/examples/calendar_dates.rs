//! Month-days that are consistently above or below an emotion's average
//! level across nine years.

use chrono::{Duration, NaiveDate};
use collective_emotion::events::{calendar_report, CalendarConfig};
use collective_emotion::DailySeries;
use rand::Rng;
use rand_distr::StandardNormal;

fn main() -> collective_emotion::Result<()> {
    let start = NaiveDate::from_ymd_opt(2001, 1, 1).unwrap();
    let days = 9 * 365 + 2;
    let mut rng = collective_emotion::rng::substream(4, "calendar-example");
    let values: Vec<f64> = (0..days)
        .map(|i| {
            let date = (start + Duration::days(i)).format("%m-%d").to_string();
            let level = match date.as_str() {
                "01-01" => 0.7,
                "12-24" | "12-25" => 1.25,
                _ => 1.0,
            };
            level * (1.0 + 0.05 * rng.sample::<f64, _>(StandardNormal))
        })
        .collect();
    let report = calendar_report(&DailySeries::new(start, values), "Vigor", &CalendarConfig::default())?;
    print!("{report}");
    Ok(())
}
