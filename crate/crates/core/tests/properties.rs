mod common;

use chrono::Duration;
use collective_emotion::corpus::{count_documents, Document, MatchMode};
use collective_emotion::dictionary::{canonicalize, EmotionDictionary, EmotionEntry};
use collective_emotion::memory::{autocovariance, fit_power_law, psd_wiener_khinchin, Estimator};
use collective_emotion::nulls::{shuffle, ShuffleScheme};
use collective_emotion::pca::pca_fit;
use collective_emotion::periodicity::cycle_periodicities;
use collective_emotion::rng::substream;
use collective_emotion::signal::standardize;
use collective_emotion::DailySeries;
use common::*;
use proptest::prelude::*;

fn dictionary(raw: Vec<String>) -> Option<EmotionDictionary> {
    let mut terms: Vec<String> = raw.iter().map(|t| canonicalize(t)).filter(|t| !t.is_empty()).collect();
    terms.sort();
    terms.dedup();
    if terms.is_empty() {
        return None;
    }
    let half = terms.len().div_ceil(2);
    let mut entries = vec![EmotionEntry {
        name: "first".into(),
        terms: terms[..half].to_vec(),
    }];
    if half < terms.len() {
        entries.push(EmotionEntry {
            name: "second".into(),
            terms: terms[half..].to_vec(),
        });
    }
    EmotionDictionary::new(entries).ok()
}

fn corpus(texts: Vec<(u8, String)>) -> Vec<Document> {
    texts
        .into_iter()
        .map(|(day, text)| Document {
            date: ymd(2009, 12, 30) + Duration::days(i64::from(day % 4)),
            text,
        })
        .collect()
}

fn terms() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec("[abｃあ]{1,3}", 1..8)
}

fn texts() -> impl Strategy<Value = Vec<(u8, String)>> {
    prop::collection::vec((any::<u8>(), "[abcｃＡあい ]{0,16}"), 1..25)
}

fn positive_series(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..10.0, 8..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matcher_agrees_with_substring_scan(raw in terms(), texts in texts()) {
        let Some(dict) = dictionary(raw) else { return Ok(()) };
        let docs = corpus(texts);
        let fast = count_documents(&docs, &dict, MatchMode::Substring);
        let slow = naive_counts(&docs, &dict, fast.start(), fast.days());
        for (i, t) in dict.terms().enumerate() {
            let series = fast.term_series(t).unwrap();
            for (d, row) in slow.iter().enumerate() {
                prop_assert_eq!(series[d], row[i]);
            }
        }
    }

    #[test]
    fn counts_ignore_document_order(raw in terms(), texts in texts(), seed in any::<u64>()) {
        let Some(dict) = dictionary(raw) else { return Ok(()) };
        let docs = corpus(texts);
        let mut shuffled = docs.clone();
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut substream(seed, "order"));
        prop_assert_eq!(
            count_documents(&docs, &dict, MatchMode::Substring),
            count_documents(&shuffled, &dict, MatchMode::Substring)
        );
    }

    #[test]
    fn one_more_document_adds_at_most_one(raw in terms(), texts in texts(), extra in "[abｃあ ]{0,16}") {
        let Some(dict) = dictionary(raw) else { return Ok(()) };
        let docs = corpus(texts);
        let before = count_documents(&docs, &dict, MatchMode::Substring);
        let mut more = docs.clone();
        more.push(Document { date: docs[0].date, text: extra });
        let after = count_documents(&more, &dict, MatchMode::Substring);
        let day = (docs[0].date - before.start()).num_days() as usize;
        let day_after = (docs[0].date - after.start()).num_days() as usize;
        prop_assert_eq!(after.totals()[day_after], before.totals()[day] + 1);
        for t in dict.terms() {
            let gain = after.term_series(t).unwrap()[day_after] - before.term_series(t).unwrap()[day];
            prop_assert!(gain <= 1);
        }
    }

    #[test]
    fn standardize_is_affine_invariant(x in positive_series(400), a in 0.01f64..100.0, b in -50.0f64..50.0) {
        let s = DailySeries::new(ymd(2006, 11, 1), x);
        let z = standardize(&s).unwrap().series;
        let moved = standardize(&s.map(|v| a * v + b)).unwrap().series;
        for (p, q) in z.valid().zip(moved.valid()) {
            prop_assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn autocorrelation_is_affine_invariant(x in positive_series(300), a in -20.0f64..20.0, b in -50.0f64..50.0) {
        prop_assume!(a.abs() > 0.01);
        let lag = x.len() / 2;
        let r = autocovariance(&x, lag, Estimator::Biased).unwrap();
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let q = autocovariance(&y, lag, Estimator::Biased).unwrap();
        for (u, v) in r.rho.iter().zip(&q.rho) {
            prop_assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn wiener_khinchin_equals_periodogram(x in prop::collection::vec(-5.0f64..5.0, 4..200)) {
        prop_assume!(x.iter().any(|v| (v - x[0]).abs() > 1e-6));
        let cov = autocovariance(&x, x.len() - 1, Estimator::Biased).unwrap();
        let s = psd_wiener_khinchin(&cov);
        let scale = naive_periodogram(&x).iter().fold(0.0f64, |m, v| m.max(*v));
        for (a, b) in s.power.iter().zip(naive_periodogram(&x)) {
            prop_assert!((a - b).abs() <= 1e-9 * scale.max(1e-12));
        }
    }

    #[test]
    fn shuffles_permute_values(x in positive_series(200), seed in any::<u64>()) {
        let s = DailySeries::new(ymd(2010, 1, 1), x);
        for scheme in [ShuffleScheme::Daily, ShuffleScheme::Weekly, ShuffleScheme::Monthly] {
            let Ok(out) = shuffle(&s, scheme, &mut substream(seed, "perm")) else { continue };
            // the weekly scheme drops a trailing partial week
            let kept = if scheme == ShuffleScheme::Weekly { s.len() / 7 * 7 } else { s.len() };
            let mut a: Vec<f64> = out.valid().collect();
            let mut b: Vec<f64> = s.valid().take(kept).collect();
            prop_assert_eq!(a.len(), kept);
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn every_cycle_averages_to_one(x in positive_series(300), period in 2usize..12) {
        prop_assume!(x.len() >= period);
        let values: Vec<Option<f64>> = x.iter().copied().map(Some).collect();
        let set = cycle_periodicities(&values, period, &vec![false; x.len()]).unwrap();
        prop_assert_eq!(set.cycles.len(), x.len() / period);
        for c in &set.cycles {
            let mean = c.iter().sum::<f64>() / period as f64;
            prop_assert!((mean - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn pca_reconstructs_rows(seed in any::<u64>(), n in 3usize..15, k in 2usize..7) {
        let rows: Vec<Vec<f64>> = (0..n).map(|i| white(k, seed.wrapping_add(i as u64))).collect();
        let fit = pca_fit(&rows).unwrap();
        prop_assert!((fit.contribution.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        for (row, score) in rows.iter().zip(&fit.scores) {
            for j in 0..k {
                let back: f64 = fit.means[j] + score.iter().zip(&fit.eigenvectors).map(|(s, v)| s * v[j]).sum::<f64>();
                prop_assert!((back - row[j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn exact_power_law_is_recovered(amplitude in 0.01f64..10.0, exponent in 0.05f64..2.0) {
        let x: Vec<f64> = (1..=60).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|t| amplitude * t.powf(-exponent)).collect();
        let fit = fit_power_law(&x, &y, (1.0, 60.0)).unwrap();
        prop_assert!((fit.exponent - exponent).abs() < 1e-10);
        prop_assert!((fit.intercept - amplitude.ln()).abs() < 1e-9);
    }
}
