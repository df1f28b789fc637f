use std::fs;
use std::path::Path;

use dlfm::io;
use dlfm::landscape::landscape;

use crate::error::{write_error, CliError};
use crate::plots;
use crate::Config;

/// Compute the landscape of one barcode file and serialize its critical
/// pairs per level as `landscape.json`, optionally with an SVG rendering.
pub fn run(config: &Config, barcode_path: &Path, svg: bool) -> Result<(), CliError> {
    let barcode = io::read_barcode_file(barcode_path)?;
    let l = landscape(&barcode);

    let levels: Vec<Vec<[f64; 2]>> = l
        .levels()
        .iter()
        .map(|level| level.iter().map(|&(t, v)| [t, v]).collect())
        .collect();
    let json = serde_json::json!({ "levels": levels });
    let json_path = config.out.join("landscape.json");
    fs::write(&json_path, format!("{json}\n")).map_err(|e| write_error(&json_path, e))?;

    if svg {
        let svg_path = config.out.join("landscape.svg");
        fs::write(&svg_path, plots::landscape_svg(&l)).map_err(|e| write_error(&svg_path, e))?;
    }

    println!(
        "{}: {} levels, wrote {}",
        barcode_path.display(),
        l.num_levels(),
        json_path.display()
    );
    Ok(())
}
