//! File formats: barcode JSON, corpus manifests, time-series CSV and
//! feature-matrix CSV.
//!
//! A corpus lives on disk as a manifest CSV (`id,path,label,depth`, the last
//! two optional) next to its barcode files; relative barcode paths are
//! resolved against the manifest's directory. Feature matrices are written
//! with one header column per basis word so they can be read back without
//! the basis at hand.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::barcode::{parse_barcode, Barcode, BarcodeError};
use crate::features::{CorpusEntry, FeatureMatrix};
use crate::timeseries::TimeSeries;

#[derive(Debug)]
pub enum IoError {
    File {
        path: PathBuf,
        source: io::Error,
    },
    Csv {
        path: PathBuf,
        message: String,
    },
    MissingColumn {
        path: PathBuf,
        column: &'static str,
    },
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },
    Barcode {
        path: PathBuf,
        source: BarcodeError,
    },
    /// One entry per manifest row whose barcode could not be loaded, so a
    /// single run reports every broken reference at once.
    CorpusLoad {
        failures: Vec<CorpusFailure>,
    },
}

#[derive(Debug)]
pub struct CorpusFailure {
    pub id: String,
    pub path: PathBuf,
    pub message: String,
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::File { path, source } => {
                write!(f, "{}: {}", path.display(), source)
            }
            IoError::Csv { path, message } => {
                write!(f, "{}: {}", path.display(), message)
            }
            IoError::MissingColumn { path, column } => {
                write!(f, "{}: missing required column '{}'", path.display(), column)
            }
            IoError::Parse { path, row, message } => {
                write!(f, "{} row {}: {}", path.display(), row, message)
            }
            IoError::Barcode { path, source } => {
                write!(f, "{}: {}", path.display(), source)
            }
            IoError::CorpusLoad { failures } => {
                writeln!(f, "{} corpus entries failed to load:", failures.len())?;
                for failure in failures {
                    writeln!(
                        f,
                        "  {} ({}): {}",
                        failure.id,
                        failure.path.display(),
                        failure.message
                    )?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for IoError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            IoError::File { source, .. } => Some(source),
            IoError::Barcode { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// One row of a corpus manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub id: String,
    /// Barcode file location. [`read_manifest`] resolves relative paths
    /// against the manifest's directory; [`write_manifest`] emits the path
    /// as stored.
    pub path: PathBuf,
    pub label: Option<String>,
    pub depth: Option<f64>,
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>, IoError> {
    let file = fs::File::open(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file))
}

/// Read a manifest CSV. Requires `id` and `path` columns; `label` and
/// `depth` columns are optional and empty cells mean absent.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, IoError> {
    let mut reader = csv_reader(path)?;
    let headers = reader
        .headers()
        .map_err(|e| IoError::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?
        .clone();
    let column = |name: &'static str| headers.iter().position(|h| h == name);
    let id_col = column("id").ok_or(IoError::MissingColumn {
        path: path.to_path_buf(),
        column: "id",
    })?;
    let path_col = column("path").ok_or(IoError::MissingColumn {
        path: path.to_path_buf(),
        column: "path",
    })?;
    let label_col = column("label");
    let depth_col = column("depth");

    let directory = path.parent().unwrap_or_else(|| Path::new(""));
    let mut entries = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let row = row + 1;
        let record = record.map_err(|e| IoError::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let field = |col: usize| record.get(col).unwrap_or("");
        let id = field(id_col);
        if id.is_empty() {
            return Err(IoError::Parse {
                path: path.to_path_buf(),
                row,
                message: "empty id".to_string(),
            });
        }
        let raw_path = field(path_col);
        if raw_path.is_empty() {
            return Err(IoError::Parse {
                path: path.to_path_buf(),
                row,
                message: "empty path".to_string(),
            });
        }
        let barcode_path = if Path::new(raw_path).is_absolute() {
            PathBuf::from(raw_path)
        } else {
            directory.join(raw_path)
        };
        let label = label_col
            .map(&field)
            .filter(|l| !l.is_empty())
            .map(str::to_string);
        let depth = match depth_col.map(&field).filter(|d| !d.is_empty()) {
            Some(raw) => Some(raw.parse::<f64>().map_err(|_| IoError::Parse {
                path: path.to_path_buf(),
                row,
                message: format!("bad depth value '{raw}'"),
            })?),
            None => None,
        };
        entries.push(ManifestEntry {
            id: id.to_string(),
            path: barcode_path,
            label,
            depth,
        });
    }
    Ok(entries)
}

/// Write a manifest CSV with the full `id,path,label,depth` header.
pub fn write_manifest(path: &Path, entries: &[ManifestEntry]) -> Result<(), IoError> {
    let wrap = |e: csv::Error| IoError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut writer = csv::Writer::from_path(path).map_err(wrap)?;
    writer
        .write_record(["id", "path", "label", "depth"])
        .map_err(wrap)?;
    for entry in entries {
        writer
            .write_record([
                entry.id.as_str(),
                &entry.path.display().to_string(),
                entry.label.as_deref().unwrap_or(""),
                &entry.depth.map(|d| d.to_string()).unwrap_or_default(),
            ])
            .map_err(wrap)?;
    }
    writer.flush().map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

/// Parse one barcode JSON file.
pub fn read_barcode_file(path: &Path) -> Result<Barcode, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })?;
    parse_barcode(&text).map_err(|source| IoError::Barcode {
        path: path.to_path_buf(),
        source,
    })
}

/// Load every barcode a manifest references. Broken entries do not stop the
/// scan; they are collected and reported together.
pub fn load_corpus_entries(manifest_path: &Path) -> Result<Vec<CorpusEntry>, IoError> {
    let manifest = read_manifest(manifest_path)?;
    let mut entries = Vec::with_capacity(manifest.len());
    let mut failures = Vec::new();
    for row in manifest {
        match read_barcode_file(&row.path) {
            Ok(barcode) => entries.push(CorpusEntry {
                id: row.id,
                barcode,
                class_label: row.label,
                depth: row.depth,
            }),
            Err(error) => failures.push(CorpusFailure {
                id: row.id,
                path: row.path,
                message: match error {
                    IoError::File { source, .. } => source.to_string(),
                    IoError::Barcode { source, .. } => source.to_string(),
                    other => other.to_string(),
                },
            }),
        }
    }
    if failures.is_empty() {
        Ok(entries)
    } else {
        Err(IoError::CorpusLoad { failures })
    }
}

/// Read a headerless CSV of floats, one point per row.
pub fn read_timeseries_csv(path: &Path) -> Result<TimeSeries, IoError> {
    let file = fs::File::open(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut points = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let row = row + 1;
        let record = record.map_err(|e| IoError::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut point = Vec::with_capacity(record.len());
        for raw in record.iter() {
            point.push(raw.parse::<f64>().map_err(|_| IoError::Parse {
                path: path.to_path_buf(),
                row,
                message: format!("bad number '{raw}'"),
            })?);
        }
        points.push(point);
    }
    TimeSeries::new(points).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        row: 0,
        message: e.to_string(),
    })
}

/// Write a feature matrix as CSV: header `id` plus one basis-word label per
/// column, one row per corpus entry. Values use the shortest decimal form
/// that parses back to the same float.
pub fn write_features_csv(path: &Path, features: &FeatureMatrix) -> Result<(), IoError> {
    let wrap = |e: csv::Error| IoError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut writer = csv::Writer::from_path(path).map_err(wrap)?;
    let mut header = vec!["id".to_string()];
    header.extend(features.basis().labels());
    writer.write_record(&header).map_err(wrap)?;
    for (id, row) in features.ids().iter().zip(features.rows()) {
        let mut record = vec![id.clone()];
        record.extend(row.iter().map(|v| v.to_string()));
        writer.write_record(&record).map_err(wrap)?;
    }
    writer.flush().map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

/// A feature matrix read back from CSV, without rebuilding its word basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub ids: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Read a CSV previously written by [`write_features_csv`].
pub fn read_features_csv(path: &Path) -> Result<FeatureTable, IoError> {
    let mut reader = csv_reader(path)?;
    let headers = reader
        .headers()
        .map_err(|e| IoError::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?
        .clone();
    if headers.get(0) != Some("id") {
        return Err(IoError::MissingColumn {
            path: path.to_path_buf(),
            column: "id",
        });
    }
    let columns: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let row = row + 1;
        let record = record.map_err(|e| IoError::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let id = record.get(0).unwrap_or("");
        if id.is_empty() {
            return Err(IoError::Parse {
                path: path.to_path_buf(),
                row,
                message: "empty id".to_string(),
            });
        }
        let mut values = Vec::with_capacity(columns.len());
        for raw in record.iter().skip(1) {
            values.push(raw.parse::<f64>().map_err(|_| IoError::Parse {
                path: path.to_path_buf(),
                row,
                message: format!("bad number '{raw}'"),
            })?);
        }
        ids.push(id.to_string());
        rows.push(values);
    }
    Ok(FeatureTable { ids, columns, rows })
}
