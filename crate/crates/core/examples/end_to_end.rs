//! The whole command-line pipeline on a generated corpus, driven through
//! the library entry point. Artifacts go to a temporary directory.

use collective_emotion::cli::main_with_args;

fn main() {
    let dir = std::env::temp_dir().join("collective-emotion-example");
    let out = |name: &str| dir.join(name).display().to_string();
    let status = main_with_args([
        "collective-emotion", "synth-corpus", "--days", "800", "--docs-per-day", "200", "--seed", "1", "--out", &out("demo"),
    ]);
    assert_eq!(status, 0);
    let corpus = format!("{}/corpus.jsonl", out("demo"));
    let dictionary = format!("{}/dictionary.tsv", out("demo"));
    let status = main_with_args([
        "collective-emotion", "pipeline", "--corpus", &corpus, "--dictionary", &dictionary, "--seed", "1", "--out", &out("run"),
    ]);
    assert_eq!(status, 0);
    let summary = std::fs::read_to_string(dir.join("run/summary.csv")).expect("summary written");
    println!("{summary}");
    println!("artifacts and manifest.json in {}", out("run"));
}
