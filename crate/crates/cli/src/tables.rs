//! CSV schemas written and read by the pipelines. Column order follows field
//! order; quoting is RFC 4180.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub network: String,
    pub regime: String,
    pub alpha: f64,
    pub achieved_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub network: String,
    pub domain: String,
    pub algorithm: String,
    pub spreadability: String,
    pub alpha: f64,
    pub run: usize,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub network: String,
    pub algorithm: String,
    pub spreadability: String,
    pub k: usize,
    pub reps: usize,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub single_core: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRow {
    pub network: String,
    pub domain: String,
    pub n: usize,
    pub m: usize,
    pub mean_degree: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub network: String,
    pub spreadability: String,
    pub algorithm: String,
    pub beta: f64,
    pub se: f64,
    pub category: String,
    pub flagged: bool,
    pub mean_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestRow {
    pub network: String,
    pub spreadability: String,
    pub mean_degree: f64,
    pub best_algorithm: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestCountRow {
    pub spreadability: String,
    pub algorithm: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaReportCsvRow {
    pub network: String,
    pub selected_alg: String,
    pub beta_selected: f64,
    pub beta_myopic: f64,
    pub perf_diff_pct: Option<f64>,
    pub t_selected_ms: f64,
    pub t_myopic_ms: f64,
    pub speedup: f64,
}

/// Writes via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}

pub fn to_csv_bytes<T: Serialize>(rows: &[T]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

/// Header line for `T`, derived from serializing a sample row.
pub fn header_of<T: Serialize>(sample: &T) -> anyhow::Result<Vec<u8>> {
    let bytes = to_csv_bytes(std::slice::from_ref(sample))?;
    let end = bytes.iter().position(|&b| b == b'\n').map_or(bytes.len(), |i| i + 1);
    Ok(bytes[..end].to_vec())
}

/// Rows without a header, for appending.
pub fn to_csv_body<T: Serialize>(rows: &[T]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<()> {
    write_atomic(path, &to_csv_bytes(rows)?)
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> anyhow::Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    r.deserialize().collect::<Result<Vec<T>, _>>().with_context(|| format!("parsing {}", path.display()))
}

/// Like [`read_csv`], but skips malformed records (a torn final line after an
/// interrupted append) and treats a missing file as empty.
pub fn read_csv_lenient<T: DeserializeOwned>(path: &Path) -> anyhow::Result<Vec<T>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut r = csv::ReaderBuilder::new().flexible(true).from_path(path)?;
    Ok(r.deserialize().filter_map(|row| row.ok()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_quoting() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let rows = vec![ResultRow {
            network: "a,\"b\"".into(),
            domain: "social".into(),
            algorithm: "gonzalez".into(),
            spreadability: "low".into(),
            alpha: 0.25,
            run: 3,
            slope: -0.5,
        }];
        write_csv(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("network,domain,algorithm,spreadability,alpha,run,slope\n\"a,\"\"b\"\"\""));
        assert_eq!(read_csv::<ResultRow>(&path).unwrap(), rows);
        assert_eq!(header_of(&rows[0]).unwrap(), b"network,domain,algorithm,spreadability,alpha,run,slope\n");
    }

    #[test]
    fn lenient_reader_drops_torn_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        std::fs::write(&path, "network,regime,alpha,achieved_fraction\na,low,0.1,0.2\nb,lo").unwrap();
        assert_eq!(read_csv_lenient::<CalibrationRow>(&path).unwrap().len(), 1);
        assert!(read_csv_lenient::<CalibrationRow>(&dir.path().join("none.csv")).unwrap().is_empty());
    }
}
