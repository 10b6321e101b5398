//! Count dictionary terms in dated documents. A document counts once per
//! term, however often the term appears in it.

use chrono::NaiveDate;
use collective_emotion::corpus::{count_documents, ingest, MatchMode};
use collective_emotion::dictionary::parse_tsv;
use collective_emotion::signal::aggregate_emotion;

const CORPUS: &str = r#"{"date": "2011-03-11", "text": "地震で不安。不安で眠れない"}
{"date": "2011-03-11", "text": "緊張と不安の一日"}
{"date": "2011-03-12", "text": "今日は元気"}
{"date": "2011-03-12", "text": "no date here"
{"date": "2011-03-13", "text": "ＦＵＬＬ width is folded: 元気"}
"#;

fn main() -> collective_emotion::Result<()> {
    let dict = parse_tsv("Tension\t緊張\nTension\t不安\nVigor\t元気\n")?;
    let (docs, report) = ingest(CORPUS.as_bytes(), false)?;
    for r in &report.rejected {
        println!("line {} skipped: {}", r.line, r.reason);
    }

    let counts = count_documents(&docs, &dict, MatchMode::Substring);
    let tension = aggregate_emotion(&counts, &dict, "Tension")?;
    for day in 0..counts.days() {
        let date: NaiveDate = counts.date_at(day);
        println!("{date}  documents {}  Tension {}", counts.totals()[day], tension[day]);
    }
    counts.write_csv(std::io::stdout())
}
