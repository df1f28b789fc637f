//! The discrete landscape feature map.
//!
//! A barcode B is embedded as a time series by evaluating the first `d`
//! landscape levels at a grid of critical points, then featurized by the
//! weight-truncated iterated-sums signature of that series:
//!
//! ```text
//! B  ->  (lambda_1, ..., lambda_d) sampled on a grid  ->  Sig_{<= k}
//! ```
//!
//! Two grids are supported. [`embed`] uses the barcode's own critical
//! points. For a corpus, [`Corpus`] merges the critical points of all member
//! barcodes into one shared grid, so every member (and any guest barcode
//! featurized against the corpus) is sampled at the same t-values and the
//! feature rows are directly comparable. Inserting grid points where all
//! landscapes are flat only repeats series values, which the signature is
//! invariant under.

use std::sync::Arc;

use rayon::prelude::*;

use crate::barcode::Barcode;
use crate::isig::{isig_with_basis, ISig, WordBasis};
use crate::landscape::{critical_points, dedup_sorted, landscape, Landscape};
use crate::timeseries::TimeSeries;

/// Grid values closer than this are merged.
const GRID_TOL: f64 = 1e-12;

/// Series of the first `levels` landscape values of `b` at its own critical
/// points. The empty barcode maps to a single zero point.
///
/// Panics if `levels` is 0.
pub fn embed(b: &Barcode, levels: usize) -> TimeSeries {
    let grid = critical_points(b);
    sample_landscape(&landscape(b), levels, &grid)
}

/// Like [`embed`] but sampling on a caller-provided grid (ascending). Used
/// for corpus-shared grids; an empty grid also yields a single zero point.
pub fn embed_on_grid(b: &Barcode, levels: usize, grid: &[f64]) -> TimeSeries {
    sample_landscape(&landscape(b), levels, grid)
}

fn sample_landscape(l: &Landscape, levels: usize, grid: &[f64]) -> TimeSeries {
    assert!(levels >= 1, "need at least one landscape level");
    if grid.is_empty() {
        return TimeSeries::new(vec![vec![0.0; levels]]).expect("one point, positive dim");
    }
    let padded = l.padded(levels);
    let points = grid.iter().map(|&t| padded.values(levels, t)).collect();
    TimeSeries::new(points).expect("grid is nonempty")
}

/// One barcode of a corpus with its optional metadata.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub barcode: Barcode,
    pub class_label: Option<String>,
    pub depth: Option<f64>,
}

/// A corpus fixes the three ingredients shared by all feature rows: the
/// number of landscape levels, the signature weight (with its word basis),
/// and the merged critical-point grid.
#[derive(Debug)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
    levels: usize,
    weight: usize,
    grid: Vec<f64>,
    basis: Arc<WordBasis>,
}

impl Corpus {
    /// Builds a corpus whose grid is the union of the members' critical
    /// points.
    ///
    /// Panics if `levels` or `weight` is 0.
    pub fn new(entries: Vec<CorpusEntry>, levels: usize, weight: usize) -> Corpus {
        let grid = dedup_sorted(
            entries
                .iter()
                .flat_map(|e| critical_points(&e.barcode))
                .collect(),
            GRID_TOL,
        );
        Corpus::with_grid(entries, levels, weight, grid)
    }

    /// Builds a corpus on a frozen grid (it is sorted and deduplicated).
    pub fn with_grid(
        entries: Vec<CorpusEntry>,
        levels: usize,
        weight: usize,
        grid: Vec<f64>,
    ) -> Corpus {
        assert!(levels >= 1, "need at least one landscape level");
        assert!(weight >= 1, "need signature weight at least 1");
        let grid = dedup_sorted(grid, GRID_TOL);
        let basis = Arc::new(WordBasis::new(levels, weight));
        Corpus {
            entries,
            levels,
            weight,
            grid,
            basis,
        }
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn basis(&self) -> &Arc<WordBasis> {
        &self.basis
    }

    /// Series of any barcode (member or guest) on the corpus grid.
    pub fn embed(&self, b: &Barcode) -> TimeSeries {
        embed_on_grid(b, self.levels, &self.grid)
    }

    /// Feature vector of any barcode (member or guest) on the corpus grid.
    pub fn featurize(&self, b: &Barcode) -> ISig {
        isig_with_basis(&self.embed(b), &self.basis)
            .expect("embedding dimension equals basis dimension")
    }

    /// Feature rows for all members, in entry order. Rows are independent,
    /// so they are computed in parallel; the result does not depend on the
    /// schedule.
    pub fn feature_matrix(&self) -> FeatureMatrix {
        let rows: Vec<Vec<f64>> = self
            .entries
            .par_iter()
            .map(|e| self.featurize(&e.barcode).coefficients().to_vec())
            .collect();
        FeatureMatrix {
            ids: self.entries.iter().map(|e| e.id.clone()).collect(),
            basis: Arc::clone(&self.basis),
            rows,
        }
    }
}

/// Feature rows of a corpus: one row per entry, one column per basis word.
#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    ids: Vec<String>,
    basis: Arc<WordBasis>,
    rows: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn new(ids: Vec<String>, basis: Arc<WordBasis>, rows: Vec<Vec<f64>>) -> FeatureMatrix {
        assert_eq!(ids.len(), rows.len(), "one id per row");
        for row in &rows {
            assert_eq!(row.len(), basis.len(), "one column per word");
        }
        FeatureMatrix { ids, basis, rows }
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn basis(&self) -> &Arc<WordBasis> {
        &self.basis
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.labels()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Columns scaled by the square roots of the Bombieri-Weyl weights, so
    /// Euclidean distance on the scaled rows equals the BW distance of the
    /// signatures.
    pub fn bw_scaled(&self) -> FeatureMatrix {
        let scale: Vec<f64> = self.basis.bw_factors().iter().map(|f| f.sqrt()).collect();
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().zip(&scale).map(|(v, s)| v * s).collect())
            .collect();
        FeatureMatrix {
            ids: self.ids.clone(),
            basis: Arc::clone(&self.basis),
            rows,
        }
    }
}
