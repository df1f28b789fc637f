use std::fmt::Write;
use std::fs;
use std::path::Path;

use dlfm::analysis::{ari, kmeans, nmi, separation_ratio, spearman};

use crate::error::{write_error, CliError};
use crate::table;
use crate::Config;

/// Cluster feature rows with k-means. Always writes `assignments.csv`
/// (id,cluster) and `cluster_stats.csv`; with a manifest the stats include
/// agreement with the given class labels, and `--spearman depth` adds the
/// rank correlation between each row's distance to the mean row and the
/// manifest's depth column.
pub fn run(
    config: &Config,
    features: &Path,
    manifest: Option<&Path>,
    raw: bool,
    spearman_column: Option<&str>,
) -> Result<(), CliError> {
    let loaded = table::load_features(features, raw)?;
    let fit = kmeans(&loaded.rows, config.clusters, config.seed)?;

    let mut assignments = String::from("id,cluster\n");
    for (id, cluster) in loaded.ids.iter().zip(fit.labeling.labels()) {
        let _ = writeln!(assignments, "{id},{cluster}");
    }
    let assignments_path = config.out.join("assignments.csv");
    fs::write(&assignments_path, assignments).map_err(|e| write_error(&assignments_path, e))?;

    let mut stats: Vec<(&str, f64)> = vec![("inertia", fit.inertia)];
    let aligned = match manifest {
        Some(path) => Some((path, table::align_manifest(&loaded.ids, path)?)),
        None => None,
    };
    if let Some((path, aligned)) = &aligned {
        let truth = table::require_labels(aligned, &loaded.ids, path)?;
        stats.push(("ari", ari(&fit.labeling, truth)?));
        stats.push(("nmi", nmi(&fit.labeling, truth)?));
        stats.push(("separation_ratio", separation_ratio(&loaded.rows, truth)?));
    }
    if let Some(column) = spearman_column {
        let Some((path, aligned)) = &aligned else {
            return Err(CliError::Usage(
                "--spearman needs --manifest to supply the covariate".to_string(),
            ));
        };
        let depths = table::require_depths(aligned, &loaded.ids, path, column)?;
        let summary = table::distances_to_mean(&loaded.rows);
        let result = spearman(&summary, &depths, config.permutations, config.seed)?;
        stats.push(("spearman_rho", result.statistic));
        stats.push(("spearman_p", result.p_value));
    }

    let mut text = String::from("metric,value\n");
    for (name, value) in &stats {
        let _ = writeln!(text, "{name},{value}");
    }
    let stats_path = config.out.join("cluster_stats.csv");
    fs::write(&stats_path, text).map_err(|e| write_error(&stats_path, e))?;

    let summary: Vec<String> = stats
        .iter()
        .map(|(name, value)| format!("{name} {value}"))
        .collect();
    println!(
        "clustered {} rows into {}: {}",
        loaded.ids.len(),
        config.clusters,
        summary.join(", ")
    );
    Ok(())
}
