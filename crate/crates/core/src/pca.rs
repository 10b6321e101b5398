//! Six-month block averages of the emotion series and their principal
//! components.

use chrono::{Datelike, Duration, NaiveDate};
use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nulls::{shuffle, SurrogateSpec};
use crate::rng::substream;
use crate::series::DailySeries;

pub const BLOCK_MONTHS: u32 = 6;

/// Block means, one row per block and one column per emotion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockMatrix {
    /// First day of each block.
    pub block_starts: Vec<NaiveDate>,
    pub emotions: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn add_months(d: NaiveDate, months: u32) -> NaiveDate {
    let total = d.year() * 12 + d.month0() as i32 + months as i32;
    NaiveDate::from_ymd_opt(total.div_euclid(12), total.rem_euclid(12) as u32 + 1, 1).expect("first of month")
}

/// Consecutive six-month blocks starting at the first month boundary on or
/// after the start of the series; incomplete trailing blocks are dropped.
/// All series must share the same start and length.
pub fn six_month_blocks(series: &[(String, DailySeries)]) -> Result<BlockMatrix> {
    let (_, first) = series
        .first()
        .ok_or_else(|| Error::InsufficientData("no series to aggregate".into()))?;
    for (name, s) in series {
        if s.start() != first.start() || s.len() != first.len() {
            return Err(Error::Config(format!(
                "series {name:?} does not cover the same days as {:?}",
                series[0].0
            )));
        }
    }
    let mut block = first.start();
    if block.day() != 1 {
        block = add_months(block, 1);
    }
    let mut out = BlockMatrix {
        block_starts: Vec::new(),
        emotions: series.iter().map(|(n, _)| n.clone()).collect(),
        rows: Vec::new(),
    };
    loop {
        let next = add_months(block, BLOCK_MONTHS);
        let (Some(a), Some(_)) = (first.index_of(block), first.index_of(next - Duration::days(1))) else {
            break;
        };
        let b = a + (next - block).num_days() as usize;
        let mut row = Vec::with_capacity(series.len());
        for (name, s) in series {
            let (sum, n) = s.values()[a..b]
                .iter()
                .flatten()
                .fold((0.0, 0usize), |(acc, n), v| (acc + v, n + 1));
            if n == 0 {
                return Err(Error::InsufficientData(format!(
                    "block starting {block} of {name:?} has no valid day"
                )));
            }
            row.push(sum / n as f64);
        }
        out.block_starts.push(block);
        out.rows.push(row);
        block = next;
    }
    if out.rows.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "PCA needs 2 complete six-month blocks, found {}",
            out.rows.len()
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaResult {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` is component `k`; its largest-magnitude entry is
    /// positive.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Column means removed before the decomposition.
    pub means: Vec<f64>,
    /// `scores[row][k]`: projection of the centered row on component `k`.
    pub scores: Vec<Vec<f64>>,
    pub contribution: Vec<f64>,
    pub cumulative: Vec<f64>,
}

/// Principal components of the column-centered covariance (divisor
/// `rows − 1`).
pub fn pca_fit(rows: &[Vec<f64>]) -> Result<PcaResult> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!("PCA needs 2 rows, got {n}")));
    }
    let d = rows[0].len();
    if let Some(bad) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::LengthMismatch {
            left: d,
            right: bad.len(),
        });
    }
    let means: Vec<f64> = (0..d)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let centered = DMatrix::from_fn(n, d, |i, j| rows[i][j] - means[j]);
    let cov = centered.transpose() * &centered / (n - 1) as f64;
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| {
            let v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            let lead = v
                .iter()
                .copied()
                .reduce(|a, b| if b.abs() > a.abs() { b } else { a })
                .unwrap_or(1.0);
            if lead < 0.0 {
                v.iter().map(|x| -x).collect()
            } else {
                v
            }
        })
        .collect();
    let scores = (0..n)
        .map(|i| {
            eigenvectors
                .iter()
                .map(|v| (0..d).map(|j| centered[(i, j)] * v[j]).sum())
                .collect()
        })
        .collect();
    let total: f64 = eigenvalues.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ConstantSeries);
    }
    let contribution: Vec<f64> = eigenvalues.iter().map(|l| l / total).collect();
    let cumulative = contribution
        .iter()
        .scan(0.0, |acc, c| {
            *acc += c;
            Some(*acc)
        })
        .collect();
    Ok(PcaResult {
        eigenvalues,
        eigenvectors,
        means,
        scores,
        contribution,
        cumulative,
    })
}

/// Mean distance between consecutive points divided by the mean distance
/// over all pairs. Small values mean the path moves gradually.
pub fn trajectory_smoothness(points: &[Vec<f64>]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "trajectory needs 3 points, got {}",
            points.len()
        )));
    }
    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
    };
    let step = points.windows(2).map(|w| dist(&w[0], &w[1])).sum::<f64>() / (points.len() - 1) as f64;
    let mut all = 0.0;
    let mut pairs = 0usize;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            all += dist(&points[i], &points[j]);
            pairs += 1;
        }
    }
    let all = all / pairs as f64;
    if !(all > 0.0) {
        return Err(Error::DegenerateScores);
    }
    Ok(step / all)
}

/// First `k` score coordinates of each block.
pub fn leading_scores(result: &PcaResult, k: usize) -> Vec<Vec<f64>> {
    result.scores.iter().map(|r| r[..k.min(r.len())].to_vec()).collect()
}

/// Smoothness of the two-component trajectory for `spec.repetitions`
/// surrogate inputs. Every emotion of one repetition is shuffled with the
/// same block permutation.
pub fn surrogate_smoothness(series: &[(String, DailySeries)], spec: &SurrogateSpec) -> Result<Vec<f64>> {
    (0..spec.repetitions)
        .into_par_iter()
        .map(|rep| {
            let name = format!("pca-shuffle-{}-{rep}", spec.scheme);
            let shuffled = series
                .iter()
                .map(|(k, s)| Ok((k.clone(), shuffle(s, spec.scheme, &mut substream(spec.seed, &name))?)))
                .collect::<Result<Vec<_>>>()?;
            let fit = pca_fit(&six_month_blocks(&shuffled)?.rows)?;
            trajectory_smoothness(&leading_scores(&fit, 2))
        })
        .collect()
}
