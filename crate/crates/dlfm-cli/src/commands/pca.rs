use std::fmt::Write;
use std::fs;
use std::path::Path;

use dlfm::analysis::pca;

use crate::error::{write_error, CliError};
use crate::plots;
use crate::table;
use crate::Config;

/// Project feature rows onto principal components. Writes the projection
/// and per-component variances as CSV plus a scatter of the first two
/// components colored by manifest label.
pub fn run(
    config: &Config,
    features: &Path,
    manifest: Option<&Path>,
    components: usize,
    raw: bool,
) -> Result<(), CliError> {
    if components == 0 {
        return Err(CliError::Usage("--components must be at least 1".to_string()));
    }
    let loaded = table::load_features(features, raw)?;
    let fit = pca(&loaded.rows, components)?;

    let label_names: Vec<Option<String>> = match manifest {
        Some(path) => table::align_manifest(&loaded.ids, path)?.label_names,
        None => vec![None; loaded.ids.len()],
    };

    let mut projection = String::from("id");
    for c in 1..=components {
        let _ = write!(projection, ",pc{c}");
    }
    projection.push_str(",label\n");
    for ((id, row), label) in loaded.ids.iter().zip(&fit.projected).zip(&label_names) {
        let _ = write!(projection, "{id}");
        for v in row {
            let _ = write!(projection, ",{v}");
        }
        let _ = writeln!(projection, ",{}", label.as_deref().unwrap_or(""));
    }
    let projection_path = config.out.join("pca_projection.csv");
    fs::write(&projection_path, projection).map_err(|e| write_error(&projection_path, e))?;

    let mut variance = String::from("component,explained_variance,share\n");
    for (c, ev) in fit.explained_variance.iter().enumerate() {
        let share = if fit.total_variance > 0.0 {
            ev / fit.total_variance
        } else {
            0.0
        };
        let _ = writeln!(variance, "pc{},{ev},{share}", c + 1);
    }
    let variance_path = config.out.join("pca_variance.csv");
    fs::write(&variance_path, variance).map_err(|e| write_error(&variance_path, e))?;

    // Class indices for coloring, in first-appearance order of the names.
    let mut class_names: Vec<String> = Vec::new();
    let classes: Vec<usize> = label_names
        .iter()
        .map(|label| {
            let name = label.as_deref().unwrap_or("unlabeled");
            match class_names.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    class_names.push(name.to_string());
                    class_names.len() - 1
                }
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = fit
        .projected
        .iter()
        .map(|row| (row[0], row.get(1).copied().unwrap_or(0.0)))
        .collect();
    let scatter_path = config.out.join("pca_scatter.svg");
    fs::write(&scatter_path, plots::scatter_svg(&points, &classes, &class_names))
        .map_err(|e| write_error(&scatter_path, e))?;

    println!(
        "projected {} rows onto {} components ({} of the variance)",
        loaded.ids.len(),
        components,
        if fit.total_variance > 0.0 {
            format!(
                "{:.1}%",
                100.0 * fit.explained_variance.iter().sum::<f64>() / fit.total_variance
            )
        } else {
            "all".to_string()
        }
    );
    Ok(())
}
