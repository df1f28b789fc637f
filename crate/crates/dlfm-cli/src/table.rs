//! Shared plumbing for the analysis subcommands: reload a features CSV,
//! reapply the Bombieri-Weyl scaling, and align manifest labels and depths
//! with the feature rows by id.

use std::collections::HashMap;
use std::path::Path;

use dlfm::analysis::Labeling;
use dlfm::io::{self, ManifestEntry};
use dlfm::isig::parse_word_labels;

use crate::error::CliError;

/// Feature rows ready for analysis, ids aligned with rows. Unless raw
/// coefficients were requested, the rows carry the BW scaling, so plain
/// Euclidean distances between them equal BW distances of the signatures.
pub struct LoadedFeatures {
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn load_features(path: &Path, raw: bool) -> Result<LoadedFeatures, CliError> {
    let table = io::read_features_csv(path)?;
    if table.rows.is_empty() {
        return Err(CliError::Data(format!(
            "{}: no feature rows",
            path.display()
        )));
    }
    let mut rows = table.rows;
    if !raw {
        let labels: Vec<&str> = table.columns.iter().map(String::as_str).collect();
        let (_, words) = parse_word_labels(&labels).map_err(|e| {
            CliError::Data(format!(
                "{}: header is not a feature word list: {e}",
                path.display()
            ))
        })?;
        let scale: Vec<f64> = words.iter().map(|w| w.bw_factor().sqrt()).collect();
        for row in rows.iter_mut() {
            for (v, s) in row.iter_mut().zip(&scale) {
                *v *= s;
            }
        }
    }
    Ok(LoadedFeatures {
        ids: table.ids,
        rows,
    })
}

/// Manifest columns reordered to match a feature table's ids.
pub struct Aligned {
    /// Canonical labeling when every row has a class label.
    pub labels: Option<Labeling>,
    pub label_names: Vec<Option<String>>,
    pub depths: Vec<Option<f64>>,
}

/// Look up every feature id in the manifest. Ids that the manifest misses
/// (or lists twice) abort the run, named one by one.
pub fn align_manifest(ids: &[String], manifest: &Path) -> Result<Aligned, CliError> {
    let entries = io::read_manifest(manifest)?;
    let mut by_id: HashMap<&str, &ManifestEntry> = HashMap::new();
    let mut duplicates = Vec::new();
    for entry in &entries {
        if by_id.insert(entry.id.as_str(), entry).is_some() {
            duplicates.push(entry.id.as_str());
        }
    }
    if !duplicates.is_empty() {
        return Err(CliError::Data(format!(
            "{}: duplicate ids: {}",
            manifest.display(),
            duplicates.join(", ")
        )));
    }
    let missing: Vec<&str> = ids
        .iter()
        .map(String::as_str)
        .filter(|id| !by_id.contains_key(id))
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Data(format!(
            "{}: feature ids missing from the manifest: {}",
            manifest.display(),
            missing.join(", ")
        )));
    }
    let label_names: Vec<Option<String>> = ids
        .iter()
        .map(|id| by_id[id.as_str()].label.clone())
        .collect();
    let depths: Vec<Option<f64>> = ids.iter().map(|id| by_id[id.as_str()].depth).collect();
    let labels = if !label_names.is_empty() && label_names.iter().all(Option::is_some) {
        let strs: Vec<&str> = label_names.iter().map(|l| l.as_deref().unwrap()).collect();
        Some(Labeling::from_strings(&strs))
    } else {
        None
    };
    Ok(Aligned {
        labels,
        label_names,
        depths,
    })
}

pub fn require_labels<'a>(
    aligned: &'a Aligned,
    ids: &[String],
    manifest: &Path,
) -> Result<&'a Labeling, CliError> {
    if let Some(labels) = &aligned.labels {
        return Ok(labels);
    }
    let unlabeled: Vec<&str> = ids
        .iter()
        .zip(&aligned.label_names)
        .filter(|(_, l)| l.is_none())
        .map(|(id, _)| id.as_str())
        .collect();
    Err(CliError::Data(format!(
        "{}: entries without a class label: {}",
        manifest.display(),
        unlabeled.join(", ")
    )))
}

/// The depth covariate for every feature row. The manifest has exactly one
/// numeric column, `depth`; asking for anything else is an error, as is a
/// manifest that leaves depths blank.
pub fn require_depths(
    aligned: &Aligned,
    ids: &[String],
    manifest: &Path,
    column: &str,
) -> Result<Vec<f64>, CliError> {
    if column != "depth" {
        return Err(CliError::Data(format!(
            "{}: no numeric column named '{column}'; the manifest format defines only 'depth'",
            manifest.display()
        )));
    }
    let blank: Vec<&str> = ids
        .iter()
        .zip(&aligned.depths)
        .filter(|(_, d)| d.is_none())
        .map(|(id, _)| id.as_str())
        .collect();
    if !blank.is_empty() {
        return Err(CliError::Data(format!(
            "{}: entries without a depth value: {}",
            manifest.display(),
            blank.join(", ")
        )));
    }
    Ok(aligned.depths.iter().map(|d| d.unwrap()).collect())
}

/// Euclidean distance from every row to the mean row: the one-dimensional
/// feature summary the rank correlation runs against.
pub fn distances_to_mean(rows: &[Vec<f64>]) -> Vec<f64> {
    let dim = rows.first().map_or(0, Vec::len);
    let mut mean = vec![0.0; dim];
    for row in rows {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v / rows.len() as f64;
        }
    }
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(&mean)
                .map(|(v, m)| (v - m) * (v - m))
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}
