use std::path::Path;

use dlfm::chen::{loop_diagnostics, LoopReport, PWLPath};
use dlfm::io;
use dlfm::landscape::landscape;

use crate::error::CliError;

/// Run the loop diagnostics on the landscape path of a barcode and print
/// the report as JSON. Landscape levels start and end at zero, so a correct
/// pipeline always reports a loop; the subcommand exists to check exactly
/// that on real data. An empty barcode yields the constant path, a loop by
/// convention.
pub fn run(barcode_path: &Path, tol: f64) -> Result<(), CliError> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "--tol must be a positive number, got {tol}"
        )));
    }
    let barcode = io::read_barcode_file(barcode_path)?;
    let report = if barcode.is_empty() {
        LoopReport {
            conditions: [true; 4],
            residuals: [0.0; 4],
            is_loop: true,
            consistent: true,
        }
    } else {
        let path = PWLPath::from_landscape(&landscape(&barcode))
            .map_err(|e| CliError::Internal(format!("landscape path construction: {e}")))?;
        loop_diagnostics(&path, tol)
    };

    let json = serde_json::json!({
        "is_loop": report.is_loop,
        "consistent": report.consistent,
        "conditions": report.conditions,
        "residuals": report.residuals,
    });
    println!("{json}");
    Ok(())
}
