//! Seeded k-means with probabilistic farthest-point initialization and a
//! fixed number of restarts. Given the same rows, cluster count and seed the
//! fit is identical run to run.

use rand::Rng;

use super::{check_rows, euclidean, AnalysisError, Labeling};
use crate::rng;

const RESTARTS: u64 = 10;
const MAX_ITERATIONS: usize = 300;
const SHIFT_TOLERANCE: f64 = 1e-10;

/// A fitted clustering: assignments, centroids and the within-cluster sum of
/// squared distances.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub labeling: Labeling,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
}

/// Cluster rows into `k` groups. Runs a fixed number of seeded restarts and
/// keeps the fit with the lowest inertia (earliest restart on ties).
pub fn kmeans(rows: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansFit, AnalysisError> {
    check_rows(rows)?;
    if k == 0 || k > rows.len() {
        return Err(AnalysisError::BadClusterCount { k, rows: rows.len() });
    }

    let mut best: Option<KMeansFit> = None;
    for restart in 0..RESTARTS {
        let mut rng = rng::stream(seed, restart);
        let fit = lloyd(rows, k, &mut rng);
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Probabilistic farthest-point seeding: the first centroid is uniform, each
/// further one is drawn with probability proportional to squared distance
/// from the centroids chosen so far.
fn seed_centroids(rows: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut chosen = vec![false; rows.len()];
    let first = rng.gen_range(0..rows.len());
    centroids.push(rows[first].clone());
    chosen[first] = true;

    let mut nearest_sq: Vec<f64> = rows
        .iter()
        .map(|r| {
            let d = euclidean(r, &centroids[0]);
            d * d
        })
        .collect();

    while centroids.len() < k {
        let total: f64 = nearest_sq.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = rows.len() - 1;
            for (i, &w) in nearest_sq.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            // All remaining rows coincide with a centroid; take the first
            // row not yet used so centroids stay distinct as indices.
            chosen.iter().position(|&c| !c).unwrap_or(0)
        };
        chosen[pick] = true;
        centroids.push(rows[pick].clone());
        let latest = centroids.last().expect("just pushed");
        for (slot, row) in nearest_sq.iter_mut().zip(rows) {
            let d = euclidean(row, latest);
            *slot = slot.min(d * d);
        }
    }
    centroids
}

fn assign(rows: &[Vec<f64>], centroids: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let mut labels = Vec::with_capacity(rows.len());
    let mut inertia = 0.0;
    for row in rows {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (j, c) in centroids.iter().enumerate() {
            let d = euclidean(row, c);
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        labels.push(best);
        inertia += best_d * best_d;
    }
    (labels, inertia)
}

fn lloyd(rows: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> KMeansFit {
    let dim = rows[0].len();
    let mut centroids = seed_centroids(rows, k, rng);

    let mut labels = vec![0usize; rows.len()];
    let mut inertia = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let (new_labels, new_inertia) = assign(rows, &centroids);
        labels = new_labels;
        inertia = new_inertia;

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (row, &l) in rows.iter().zip(&labels) {
            counts[l] += 1;
            for (s, v) in sums[l].iter_mut().zip(row) {
                *s += v;
            }
        }

        // Re-seed empty clusters at the rows farthest from their current
        // centroid, lowest index on ties, each empty cluster taking the next
        // farthest row.
        let empties: Vec<usize> = (0..k).filter(|&j| counts[j] == 0).collect();
        if !empties.is_empty() {
            let mut distances: Vec<(usize, f64)> = rows
                .iter()
                .enumerate()
                .map(|(i, row)| (i, euclidean(row, &centroids[labels[i]])))
                .collect();
            distances.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            for (slot, &(row_idx, _)) in empties.iter().zip(&distances) {
                sums[*slot] = rows[row_idx].clone();
                counts[*slot] = 1;
            }
        }

        let mut shift: f64 = 0.0;
        for (j, sum) in sums.iter().enumerate() {
            let count = counts[j].max(1) as f64;
            let updated: Vec<f64> = sum.iter().map(|s| s / count).collect();
            shift = shift.max(euclidean(&updated, &centroids[j]));
            centroids[j] = updated;
        }
        if shift < SHIFT_TOLERANCE {
            let (final_labels, final_inertia) = assign(rows, &centroids);
            labels = final_labels;
            inertia = final_inertia;
            break;
        }
    }

    KMeansFit {
        labeling: Labeling::new(&labels),
        centroids,
        inertia,
    }
}
