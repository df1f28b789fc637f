use std::fs;
use std::path::Path;

use dlfm::analysis::{permutation_test, ScoreKind};

use crate::error::{write_error, CliError};
use crate::table;
use crate::Config;

/// Permutation-test the agreement between the feature geometry and the
/// manifest's class labels; writes `permtest.csv`.
pub fn run(
    config: &Config,
    features: &Path,
    manifest: &Path,
    score: ScoreKind,
    raw: bool,
) -> Result<(), CliError> {
    let loaded = table::load_features(features, raw)?;
    let aligned = table::align_manifest(&loaded.ids, manifest)?;
    let truth = table::require_labels(&aligned, &loaded.ids, manifest)?;

    let result = permutation_test(&loaded.rows, truth, score, config.permutations, config.seed)?;

    let name = match score {
        ScoreKind::Ari => "ari",
        ScoreKind::Nmi => "nmi",
        ScoreKind::Separation => "separation",
    };
    let text = format!(
        "score,statistic,p_value,permutations\n{name},{},{},{}\n",
        result.statistic, result.p_value, result.permutations
    );
    let path = config.out.join("permtest.csv");
    fs::write(&path, text).map_err(|e| write_error(&path, e))?;

    println!(
        "{name}: statistic {}, p = {} ({} permutations)",
        result.statistic, result.p_value, result.permutations
    );
    Ok(())
}
