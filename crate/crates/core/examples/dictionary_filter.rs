//! Load a dictionary, drop terms outside a document-frequency band, and
//! flag terms that dominate their emotion.

use std::collections::HashMap;

use collective_emotion::dictionary::{dominance_report, frequency_filter, parse_tsv, FrequencyBand};

fn main() -> collective_emotion::Result<()> {
    let dict = parse_tsv("Tension\t緊張\nTension\t不安\nTension\tドキドキ\nVigor\t元気\nVigor\t最高\n")?;
    let docs: HashMap<String, u64> = [("緊張", 40), ("不安", 9_000), ("ドキドキ", 0), ("元気", 500), ("最高", 1_200)]
        .into_iter()
        .map(|(t, c)| (t.to_string(), c))
        .collect();

    let band = FrequencyBand { low: 1e-5, high: 5e-3 };
    let (kept, report) = frequency_filter(&dict, &docs, 1_000_000, band)?;
    for r in &report.removed {
        println!("removed {} ({}) at frequency {:.2e}", r.term, r.emotion, r.frequency);
    }

    let totals: HashMap<String, f64> = docs.iter().map(|(t, c)| (t.clone(), *c as f64)).collect();
    for e in dominance_report(&kept, &totals, 0.3)? {
        for s in e.shares.unwrap_or_default() {
            let mark = if s.flagged { "  dominant" } else { "" };
            println!("{:<8} {:<6} share {:.2}{mark}", e.emotion, s.term, s.share);
        }
    }
    Ok(())
}
