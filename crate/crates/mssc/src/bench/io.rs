//! Dataset ingestion: plain numeric matrices and TSPLIB node-coordinate
//! files, validated against a manifest of expected shapes for the known
//! benchmark names.

use std::path::Path;

use crate::core::Dataset;
use crate::{Error, Result};

/// On-disk dataset formats the loaders understand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Whitespace- or comma-separated numeric rows, one point per line.
    Matrix,
    /// TSPLIB file with a `NODE_COORD_SECTION`.
    Tsplib,
}

impl std::str::FromStr for DataFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix" => Ok(DataFormat::Matrix),
            "tsplib" => Ok(DataFormat::Tsplib),
            other => Err(Error::Config(format!("unknown dataset format '{other}'"))),
        }
    }
}

/// Expected `(n, d)` for the benchmark datasets this crate knows by name.
/// Loaders refuse a known name whose file has a different shape, rather
/// than guessing at preprocessing differences.
pub fn expected_shape(name: &str) -> Option<(usize, usize)> {
    match name {
        "ruspini75" => Some((75, 2)),
        "fisher" => Some((150, 4)),
        "gr202" => Some((202, 2)),
        "gr666" => Some((666, 2)),
        "tsplib1060" => Some((1060, 2)),
        "tsplib3038" => Some((3038, 2)),
        "pendigit" => Some((10992, 16)),
        "letter" => Some((20000, 16)),
        "kegg" => Some((53413, 20)),
        "pla85900" => Some((85900, 2)),
        _ => None,
    }
}

fn name_from_path(path: &Path) -> String {
    path.file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().to_lowercase())
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn check_manifest(dataset: &Dataset) -> Result<()> {
    if let Some((n, d)) = expected_shape(dataset.name()) {
        if dataset.n() != n || dataset.d() != d {
            return Err(Error::ManifestMismatch {
                name: dataset.name().to_string(),
                n: dataset.n(),
                d: dataset.d(),
                expected_n: n,
                expected_d: d,
            });
        }
    }
    Ok(())
}

/// Loads a whitespace- or comma-separated numeric matrix, one point per
/// row. Rows must all have the same width; blank lines are skipped.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = 0usize;
    for (number, line) in text.lines().enumerate() {
        let number = number + 1;
        let cleaned = line.replace(',', " ");
        let tokens: Vec<&str> = cleaned.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(tokens.len());
        for token in &tokens {
            let value: f64 = token
                .parse()
                .map_err(|_| parse_error(path, number, format!("non-numeric token '{token}'")))?;
            if !value.is_finite() {
                return Err(parse_error(
                    path,
                    number,
                    format!("non-finite value '{token}'"),
                ));
            }
            row.push(value);
        }
        if rows.is_empty() {
            width = row.len();
        } else if row.len() != width {
            return Err(parse_error(
                path,
                number,
                format!("row has {} values, expected {width}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(path, 1, "file contains no data rows"));
    }
    let dataset = Dataset::from_rows(name_from_path(path), &rows)?;
    check_manifest(&dataset)?;
    Ok(dataset)
}

/// Loads a TSPLIB node-coordinate file: everything before
/// `NODE_COORD_SECTION` is metadata and ignored, each node line is
/// `id coord...`, and a trailing `EOF` marker is tolerated.
pub fn load_tsplib(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = 0usize;
    let mut in_section = false;
    for (number, line) in text.lines().enumerate() {
        let number = number + 1;
        let trimmed = line.trim();
        if !in_section {
            if trimmed.starts_with("NODE_COORD_SECTION") {
                in_section = true;
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "EOF" {
            break;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(parse_error(
                path,
                number,
                format!("malformed node line '{trimmed}'"),
            ));
        }
        let mut row = Vec::with_capacity(tokens.len() - 1);
        for token in &tokens[1..] {
            let value: f64 = token.parse().map_err(|_| {
                parse_error(path, number, format!("non-numeric coordinate '{token}'"))
            })?;
            row.push(value);
        }
        if rows.is_empty() {
            width = row.len();
        } else if row.len() != width {
            return Err(parse_error(
                path,
                number,
                format!("node has {} coordinates, expected {width}", row.len()),
            ));
        }
        rows.push(row);
    }
    if !in_section {
        return Err(parse_error(path, 1, "no NODE_COORD_SECTION found"));
    }
    if rows.is_empty() {
        return Err(parse_error(path, 1, "NODE_COORD_SECTION contains no nodes"));
    }
    let dataset = Dataset::from_rows(name_from_path(path), &rows)?;
    check_manifest(&dataset)?;
    Ok(dataset)
}

/// Loads a dataset in the given format.
pub fn load_dataset(path: impl AsRef<Path>, format: DataFormat) -> Result<Dataset> {
    match format {
        DataFormat::Matrix => load_matrix(path),
        DataFormat::Tsplib => load_tsplib(path),
    }
}
