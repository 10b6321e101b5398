//! Days whose value exceeds 150% of the trailing seven-day mean, and how
//! long each burst takes to fall back below 110% of that baseline.

use chrono::NaiveDate;
use collective_emotion::events::{detect_spikes, SpikeConfig, SpikeReport};
use collective_emotion::nulls::{synth_series, Spike, SynthSpec};

fn main() -> collective_emotion::Result<()> {
    let start = NaiveDate::from_ymd_opt(2011, 1, 1).unwrap();
    let mut spec = SynthSpec::new(180, start);
    spec.noise = 0.03;
    spec.seed = 2;
    spec.spikes = vec![
        Spike { day: 69, multiplier: 6.0, duration: 1 },
        Spike { day: 70, multiplier: 2.0, duration: 37 },
        Spike { day: 150, multiplier: 1.8, duration: 3 },
    ];
    let anger = detect_spikes(&synth_series(&spec)?, "Anger", &SpikeConfig::default());

    spec.spikes = vec![Spike { day: 120, multiplier: 2.5, duration: 2 }];
    spec.seed = 3;
    let fatigue = detect_spikes(&synth_series(&spec)?, "Fatigue", &SpikeConfig::default());

    print!("{}", SpikeReport::merge([anger, fatigue]));
    Ok(())
}
