//! Independent oracles shared by the integration tests. Each one is the
//! slow, obvious version of something the library does fast.
#![allow(dead_code)]

use chrono::{Duration, NaiveDate};
use collective_emotion::corpus::Document;
use collective_emotion::dictionary::{canonicalize, EmotionDictionary};
use collective_emotion::rng::substream;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

/// Per-day, per-term document counts by plain substring search:
/// `counts[day][term]`, terms in dictionary order.
pub fn naive_counts(docs: &[Document], dict: &EmotionDictionary, start: NaiveDate, days: usize) -> Vec<Vec<u32>> {
    let terms: Vec<&str> = dict.terms().collect();
    let mut out = vec![vec![0u32; terms.len()]; days];
    for d in docs {
        let day = (d.date - start).num_days() as usize;
        let text = canonicalize(&d.text);
        for (i, t) in terms.iter().enumerate() {
            if text.contains(t) {
                out[day][i] += 1;
            }
        }
    }
    out
}

/// `|Σ (z_t − mean) e^{−2πi jt/n}|² / n` for `j = 1..=n/2`, summed term by
/// term.
pub fn naive_periodogram(z: &[f64]) -> Vec<f64> {
    let n = z.len();
    let mu = z.iter().sum::<f64>() / n as f64;
    (1..=n / 2)
        .map(|j| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, x) in z.iter().enumerate() {
                let angle = 2.0 * std::f64::consts::PI * ((j * t) % n) as f64 / n as f64;
                re += (x - mu) * angle.cos();
                im -= (x - mu) * angle.sin();
            }
            (re * re + im * im) / n as f64
        })
        .collect()
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn white(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, "test-white");
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Rows of a `dim`-dimensional AR(1) path `x_t = φ x_{t−1} + ε_t`.
pub fn ar1_path(len: usize, dim: usize, phi: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = substream(seed, "test-ar1");
    let mut x = vec![0.0; dim];
    (0..len)
        .map(|_| {
            for v in x.iter_mut() {
                *v = phi * *v + rng.sample::<f64, _>(StandardNormal);
            }
            x.clone()
        })
        .collect()
}

pub fn dates(start: NaiveDate, n: usize) -> impl Iterator<Item = NaiveDate> {
    (0..n).map(move |i| start + Duration::days(i as i64))
}
