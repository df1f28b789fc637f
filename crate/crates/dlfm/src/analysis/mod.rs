//! The downstream statistical protocol: clustering, agreement scores,
//! permutation tests, class separation and rank correlation.
//!
//! Everything stochastic is driven by explicit seeds through [`crate::rng`];
//! k-means restarts and permutation replicates draw from disjoint
//! substreams, so every routine here is reproducible run to run.

mod kmeans;
mod pca;

pub use kmeans::{kmeans, KMeansFit};
pub use pca::{pca, Pca};

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;

use crate::rng;

/// Substream index offset separating permutation shuffles from the k-means
/// restarts that share a caller seed.
const PERMUTATION_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    Empty,
    LengthMismatch { left: usize, right: usize },
    DimMismatch { expected: usize, found: usize },
    BadClusterCount { k: usize, rows: usize },
    TooFewRows { rows: usize, needed: usize },
    TooFewClasses { found: usize, needed: usize },
    /// Every class has exactly one member; within-class spread is undefined.
    AllSingletonClasses,
    ConstantInput,
    NonFinite,
    ZeroPermutations,
    BadComponentCount { requested: usize, max: usize },
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::Empty => write!(f, "input is empty"),
            AnalysisError::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            AnalysisError::DimMismatch { expected, found } => {
                write!(f, "row dimension mismatch: expected {expected}, found {found}")
            }
            AnalysisError::BadClusterCount { k, rows } => {
                write!(f, "cannot form {k} clusters from {rows} rows")
            }
            AnalysisError::TooFewRows { rows, needed } => {
                write!(f, "{rows} rows are too few, need at least {needed}")
            }
            AnalysisError::TooFewClasses { found, needed } => {
                write!(f, "{found} classes are too few, need at least {needed}")
            }
            AnalysisError::AllSingletonClasses => {
                write!(f, "every class is a singleton; within-class spread is undefined")
            }
            AnalysisError::ConstantInput => write!(f, "input has no variation"),
            AnalysisError::NonFinite => write!(f, "input contains non-finite values"),
            AnalysisError::ZeroPermutations => {
                write!(f, "permutation tests need at least one permutation")
            }
            AnalysisError::BadComponentCount { requested, max } => {
                write!(f, "{requested} components requested, at most {max} available")
            }
        }
    }
}

impl std::error::Error for AnalysisError {}

/// A partition of items into classes, stored as contiguous 0-based class
/// indices in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<usize>,
    n_classes: usize,
}

impl Labeling {
    pub fn new(raw: &[usize]) -> Labeling {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut labels = Vec::with_capacity(raw.len());
        for &r in raw {
            let next = remap.len();
            labels.push(*remap.entry(r).or_insert(next));
        }
        Labeling {
            n_classes: remap.len(),
            labels,
        }
    }

    pub fn from_strings<S: AsRef<str>>(raw: &[S]) -> Labeling {
        let mut remap: HashMap<String, usize> = HashMap::new();
        let mut labels = Vec::with_capacity(raw.len());
        for r in raw {
            let next = remap.len();
            labels.push(*remap.entry(r.as_ref().to_string()).or_insert(next));
        }
        Labeling {
            n_classes: remap.len(),
            labels,
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.n_classes];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

fn choose2(n: f64) -> f64 {
    n * (n - 1.0) / 2.0
}

fn contingency(a: &Labeling, b: &Labeling) -> Result<Vec<Vec<f64>>, AnalysisError> {
    if a.len() != b.len() {
        return Err(AnalysisError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(AnalysisError::Empty);
    }
    let mut table = vec![vec![0.0; b.n_classes()]; a.n_classes()];
    for (&x, &y) in a.labels().iter().zip(b.labels()) {
        table[x][y] += 1.0;
    }
    Ok(table)
}

/// Adjusted Rand index between two labelings of the same items: 1 for
/// identical partitions, around 0 for independent ones, possibly negative.
pub fn ari(a: &Labeling, b: &Labeling) -> Result<f64, AnalysisError> {
    let table = contingency(a, b)?;
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..b.n_classes())
        .map(|j| table.iter().map(|r| r[j]).sum())
        .collect();
    let n = a.len() as f64;

    let sum_cells: f64 = table.iter().flatten().map(|&v| choose2(v)).sum();
    let sum_rows: f64 = rows.iter().map(|&v| choose2(v)).sum();
    let sum_cols: f64 = cols.iter().map(|&v| choose2(v)).sum();
    let expected = sum_rows * sum_cols / choose2(n);
    let max_index = (sum_rows + sum_cols) / 2.0;
    let denominator = max_index - expected;
    if denominator == 0.0 {
        // Both partitions are trivial in the same way (all singletons or one
        // block), hence identical.
        return Ok(1.0);
    }
    Ok((sum_cells - expected) / denominator)
}

fn entropy(sizes: &[f64], n: f64) -> f64 {
    sizes
        .iter()
        .filter(|&&s| s > 0.0)
        .map(|&s| {
            let p = s / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information with arithmetic-mean normalization.
/// Two zero-entropy labelings score 1, exactly one scores 0.
pub fn nmi(a: &Labeling, b: &Labeling) -> Result<f64, AnalysisError> {
    let table = contingency(a, b)?;
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..b.n_classes())
        .map(|j| table.iter().map(|r| r[j]).sum())
        .collect();
    let n = a.len() as f64;

    let ha = entropy(&rows, n);
    let hb = entropy(&cols, n);
    match (ha == 0.0, hb == 0.0) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }

    let mut mi = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &cell) in row.iter().enumerate() {
            if cell > 0.0 {
                mi += (cell / n) * ((cell * n) / (rows[i] * cols[j])).ln();
            }
        }
    }
    Ok(mi.max(0.0) / ((ha + hb) / 2.0))
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn check_rows(rows: &[Vec<f64>]) -> Result<usize, AnalysisError> {
    let Some(first) = rows.first() else {
        return Err(AnalysisError::Empty);
    };
    let dim = first.len();
    for r in rows {
        if r.len() != dim {
            return Err(AnalysisError::DimMismatch {
                expected: dim,
                found: r.len(),
            });
        }
    }
    Ok(dim)
}

/// Mean pairwise distance between class centroids divided by the mean
/// distance of rows to their own class centroid. Returns +inf when classes
/// are point masses (zero within-class spread); errors when every class is a
/// singleton, since within-class spread is then meaningless.
pub fn separation_ratio(rows: &[Vec<f64>], labels: &Labeling) -> Result<f64, AnalysisError> {
    let dim = check_rows(rows)?;
    if rows.len() != labels.len() {
        return Err(AnalysisError::LengthMismatch {
            left: rows.len(),
            right: labels.len(),
        });
    }
    let k = labels.n_classes();
    if k < 2 {
        return Err(AnalysisError::TooFewClasses { found: k, needed: 2 });
    }
    let sizes = labels.class_sizes();
    if sizes.iter().all(|&s| s == 1) {
        return Err(AnalysisError::AllSingletonClasses);
    }

    let mut centroids = vec![vec![0.0; dim]; k];
    for (row, &l) in rows.iter().zip(labels.labels()) {
        for (c, v) in centroids[l].iter_mut().zip(row) {
            *c += v;
        }
    }
    for (centroid, &size) in centroids.iter_mut().zip(&sizes) {
        for c in centroid.iter_mut() {
            *c /= size as f64;
        }
    }

    let mut between = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            between += euclidean(&centroids[i], &centroids[j]);
        }
    }
    between /= choose2(k as f64);

    let within: f64 = rows
        .iter()
        .zip(labels.labels())
        .map(|(row, &l)| euclidean(row, &centroids[l]))
        .sum::<f64>()
        / rows.len() as f64;

    if within == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(between / within)
}

/// Outcome of a permutation test.
#[derive(Debug, Clone, PartialEq)]
pub struct StatResult {
    pub statistic: f64,
    pub p_value: f64,
    pub permutations: usize,
}

/// Which statistic a permutation test permutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreKind {
    Ari,
    Nmi,
    Separation,
}

/// Permutation test of a score against label shuffles.
///
/// For [`ScoreKind::Ari`] and [`ScoreKind::Nmi`] the rows are clustered once
/// by seeded k-means (as many clusters as the labeling has classes) and the
/// observed score compares the clustering to the labels; replicate scores
/// compare the same clustering to shuffled labels. For
/// [`ScoreKind::Separation`] the ratio itself is recomputed under shuffled
/// labels. The p-value is `(1 + #{replicate >= observed}) / (1 + n)`.
pub fn permutation_test(
    rows: &[Vec<f64>],
    labels: &Labeling,
    score: ScoreKind,
    permutations: usize,
    seed: u64,
) -> Result<StatResult, AnalysisError> {
    if permutations == 0 {
        return Err(AnalysisError::ZeroPermutations);
    }
    check_rows(rows)?;
    if rows.len() != labels.len() {
        return Err(AnalysisError::LengthMismatch {
            left: rows.len(),
            right: labels.len(),
        });
    }

    let fitted = match score {
        ScoreKind::Ari | ScoreKind::Nmi => {
            Some(kmeans(rows, labels.n_classes(), seed)?.labeling)
        }
        ScoreKind::Separation => None,
    };
    let evaluate = |candidate: &Labeling| -> Result<f64, AnalysisError> {
        match score {
            ScoreKind::Ari => ari(fitted.as_ref().expect("fitted above"), candidate),
            ScoreKind::Nmi => nmi(fitted.as_ref().expect("fitted above"), candidate),
            ScoreKind::Separation => separation_ratio(rows, candidate),
        }
    };

    let observed = evaluate(labels)?;
    let mut exceeding = 0usize;
    let mut shuffled = labels.labels().to_vec();
    for replicate in 0..permutations {
        let mut rng = rng::stream(seed, PERMUTATION_STREAM_BASE + replicate as u64);
        shuffled.copy_from_slice(labels.labels());
        shuffled.shuffle(&mut rng);
        let candidate = Labeling::new(&shuffled);
        if evaluate(&candidate)? >= observed {
            exceeding += 1;
        }
    }
    Ok(StatResult {
        statistic: observed,
        p_value: (1.0 + exceeding as f64) / (1.0 + permutations as f64),
        permutations,
    })
}

/// Mid-ranks: ties share the average of the ranks they occupy.
fn midranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}

/// Spearman rank correlation with a two-sided permutation p-value
/// (shuffling one side, comparing absolute correlations).
pub fn spearman(
    x: &[f64],
    y: &[f64],
    permutations: usize,
    seed: u64,
) -> Result<StatResult, AnalysisError> {
    if x.len() != y.len() {
        return Err(AnalysisError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(AnalysisError::TooFewRows {
            rows: x.len(),
            needed: 3,
        });
    }
    if permutations == 0 {
        return Err(AnalysisError::ZeroPermutations);
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(AnalysisError::NonFinite);
    }
    let rx = midranks(x);
    let ry = midranks(y);
    let rho = pearson(&rx, &ry).ok_or(AnalysisError::ConstantInput)?;

    let mut exceeding = 0usize;
    let mut shuffled = ry.clone();
    for replicate in 0..permutations {
        let mut rng = rng::stream(seed, PERMUTATION_STREAM_BASE + replicate as u64);
        shuffled.copy_from_slice(&ry);
        shuffled.shuffle(&mut rng);
        let r = pearson(&rx, &shuffled).expect("rank variance checked above");
        if r.abs() >= rho.abs() {
            exceeding += 1;
        }
    }
    Ok(StatResult {
        statistic: rho,
        p_value: (1.0 + exceeding as f64) / (1.0 + permutations as f64),
        permutations,
    })
}
