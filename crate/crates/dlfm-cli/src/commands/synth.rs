use std::fs;
use std::path::PathBuf;

use dlfm::io::{self, ManifestEntry};

use crate::error::{write_error, CliError};
use crate::synthgen;
use crate::Config;

/// Generate the labeled synthetic corpus: one barcode JSON per entry under
/// `barcodes/`, plus `manifest.csv` with class labels and a depth column
/// (each entry's mean persistence).
pub fn run(config: &Config, per_class: usize) -> Result<(), CliError> {
    if per_class == 0 {
        return Err(CliError::Usage("--per-class must be at least 1".to_string()));
    }
    let entries = synthgen::generate(config.seed, per_class);

    let barcode_dir = config.out.join("barcodes");
    fs::create_dir_all(&barcode_dir).map_err(|e| write_error(&barcode_dir, e))?;

    let mut manifest = Vec::with_capacity(entries.len());
    for entry in &entries {
        let relative = PathBuf::from("barcodes").join(format!("{}.json", entry.id));
        let bars: Vec<[f64; 2]> = entry
            .barcode
            .bars()
            .iter()
            .map(|b| [b.birth, b.death])
            .collect();
        let json = serde_json::json!({ "bars": bars });
        let file = config.out.join(&relative);
        fs::write(&file, format!("{json}\n")).map_err(|e| write_error(&file, e))?;
        manifest.push(ManifestEntry {
            id: entry.id.clone(),
            path: relative,
            label: Some(entry.label.clone()),
            depth: Some(entry.depth),
        });
    }
    let manifest_path = config.out.join("manifest.csv");
    io::write_manifest(&manifest_path, &manifest)?;

    println!(
        "wrote {} barcodes ({} classes x {per_class}) and {}",
        entries.len(),
        synthgen::CLASS_COUNT,
        manifest_path.display()
    );
    Ok(())
}
