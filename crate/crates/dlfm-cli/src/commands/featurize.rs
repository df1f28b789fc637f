use std::path::Path;
use std::sync::Arc;

use dlfm::features::{embed, Corpus, FeatureMatrix};
use dlfm::io;
use dlfm::isig::{isig_with_basis, WordBasis};
use rayon::prelude::*;

use crate::error::CliError;
use crate::Config;

/// Featurize every barcode of a manifest into `features.csv`, one row per
/// entry in canonical word order. Default: the corpus-specialized map on
/// the union grid of all entries. `--grid-from` freezes the grid from a
/// different manifest and treats this one's barcodes as guests;
/// `--per-entry-grid` evaluates each barcode on its own critical points.
pub fn run(
    config: &Config,
    manifest: &Path,
    grid_from: Option<&Path>,
    per_entry_grid: bool,
) -> Result<(), CliError> {
    let entries = io::load_corpus_entries(manifest)?;
    if entries.is_empty() {
        return Err(CliError::Data(format!(
            "{}: manifest lists no entries",
            manifest.display()
        )));
    }

    let matrix = if per_entry_grid {
        let basis = Arc::new(WordBasis::new(config.levels, config.weight));
        let ids: Vec<String> = entries.iter().map(|e| e.id.clone()).collect();
        let rows: Vec<Vec<f64>> = entries
            .par_iter()
            .map(|e| {
                isig_with_basis(&embed(&e.barcode, config.levels), &basis)
                    .map(|s| s.coefficients().to_vec())
            })
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Internal(format!("featurization failed: {e}")))?;
        FeatureMatrix::new(ids, basis, rows)
    } else if let Some(host_manifest) = grid_from {
        let host_entries = io::load_corpus_entries(host_manifest)?;
        if host_entries.is_empty() {
            return Err(CliError::Data(format!(
                "{}: grid manifest lists no entries",
                host_manifest.display()
            )));
        }
        let host = Corpus::new(host_entries, config.levels, config.weight);
        let grid = host.grid().to_vec();
        Corpus::with_grid(entries, config.levels, config.weight, grid).feature_matrix()
    } else {
        Corpus::new(entries, config.levels, config.weight).feature_matrix()
    };

    let path = config.out.join("features.csv");
    io::write_features_csv(&path, &matrix)?;
    println!(
        "wrote {} ({} rows, {} feature columns)",
        path.display(),
        matrix.rows().len(),
        matrix.basis().len()
    );
    Ok(())
}
