//! Dataset and series file formats.
//!
//! Supervised datasets are plain CSV with a header row; columns whose names
//! carry a `target:` prefix are outputs, everything else is a feature.
//! Series files are single-column CSV preceded by one `#`-prefixed
//! metadata line recording the generator, its parameters, and the seed.

use std::fs;
use std::path::Path;

use itnn::datasets::Series;

use crate::error::{CliError, Result};

const TARGET_PREFIX: &str = "target:";

/// A parsed supervised dataset: feature matrix plus zero or more target
/// columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub target_names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub targets: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Targets of one row reinterpreted as a non-negative integer class
    /// label; requires exactly one target column holding whole numbers.
    pub fn class_label(&self, row: usize) -> Result<usize> {
        if self.target_names.len() != 1 {
            return Err(CliError::usage(format!(
                "classification needs exactly one target column, found {}",
                self.target_names.len()
            )));
        }
        let v = self.targets[row][0];
        if v < 0.0 || v.fract() != 0.0 {
            return Err(CliError::parse(format!(
                "row {row}: class label must be a non-negative integer, got {v}"
            )));
        }
        Ok(v as usize)
    }
}

/// Reads a dataset CSV. Fails on an empty file, a missing header, or any
/// non-finite/non-numeric cell.
pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)?;

    let headers = reader.headers()?.clone();
    if headers.is_empty() {
        return Err(CliError::parse(format!("{}: no header row", path.display())));
    }

    let mut feature_cols = Vec::new();
    let mut target_cols = Vec::new();
    let mut feature_names = Vec::new();
    let mut target_names = Vec::new();
    for (i, name) in headers.iter().enumerate() {
        if let Some(stripped) = name.strip_prefix(TARGET_PREFIX) {
            target_cols.push(i);
            target_names.push(stripped.to_string());
        } else {
            feature_cols.push(i);
            feature_names.push(name.to_string());
        }
    }

    let mut features = Vec::new();
    let mut targets = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        let parse_cell = |col: usize| -> Result<f64> {
            let raw = record.get(col).ok_or_else(|| {
                CliError::parse(format!("row {row_idx}: missing column {col}"))
            })?;
            let v: f64 = raw.parse().map_err(|_| {
                CliError::parse(format!("row {row_idx}: {raw:?} is not a number"))
            })?;
            if !v.is_finite() {
                return Err(CliError::parse(format!(
                    "row {row_idx}: non-finite value {raw:?}"
                )));
            }
            Ok(v)
        };
        features.push(feature_cols.iter().map(|&c| parse_cell(c)).collect::<Result<_>>()?);
        targets.push(target_cols.iter().map(|&c| parse_cell(c)).collect::<Result<_>>()?);
    }

    if features.is_empty() {
        return Err(CliError::parse(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    if feature_names.is_empty() {
        return Err(CliError::parse(format!(
            "{}: no feature columns",
            path.display()
        )));
    }

    Ok(Dataset {
        feature_names,
        target_names,
        features,
        targets,
    })
}

/// Writes a supervised dataset CSV with `target:`-prefixed target columns.
pub fn write_dataset(path: &Path, dataset: &Dataset) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let header: Vec<String> = dataset
        .feature_names
        .iter()
        .cloned()
        .chain(dataset.target_names.iter().map(|n| format!("{TARGET_PREFIX}{n}")))
        .collect();
    writer.write_record(&header)?;
    for (x, t) in dataset.features.iter().zip(&dataset.targets) {
        let row: Vec<String> = x.iter().chain(t).map(|v| v.to_string()).collect();
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes a series as single-column CSV with its metadata comment line.
pub fn write_series(path: &Path, series: &Series) -> Result<()> {
    let mut out = String::with_capacity(series.values.len() * 20);
    out.push_str(&format!("# {}\n", series.meta));
    out.push_str("value\n");
    for v in &series.values {
        out.push_str(&format!("{v}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a series file written by [`write_series`] (the metadata line and
/// header are optional on input).
pub fn read_series(path: &Path) -> Result<Series> {
    let text = fs::read_to_string(path)?;
    let mut meta = String::new();
    let mut values = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if meta.is_empty() {
                meta = rest.trim().to_string();
            }
            continue;
        }
        if line == "value" {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            CliError::parse(format!(
                "{}: line {}: {line:?} is not a number",
                path.display(),
                line_no + 1
            ))
        })?;
        if !v.is_finite() {
            return Err(CliError::parse(format!(
                "{}: line {}: non-finite value",
                path.display(),
                line_no + 1
            )));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::parse(format!(
            "{}: no series values",
            path.display()
        )));
    }
    Ok(Series { values, meta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_csv(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn reads_features_and_targets() {
        let f = temp_csv("x1,x2,target:y\n0,1,1\n1,0,1\n0,0,0\n");
        let d = read_dataset(f.path()).unwrap();
        assert_eq!(d.feature_names, ["x1", "x2"]);
        assert_eq!(d.target_names, ["y"]);
        assert_eq!(d.features.len(), 3);
        assert_eq!(d.targets[0], [1.0]);
        assert_eq!(d.class_label(2).unwrap(), 0);
    }

    #[test]
    fn empty_and_malformed_files_fail() {
        let f = temp_csv("");
        assert!(read_dataset(f.path()).is_err());

        let only_header = temp_csv("x,target:y\n");
        assert!(read_dataset(only_header.path()).is_err());

        let bad_cell = temp_csv("x,target:y\n1,zebra\n");
        assert!(read_dataset(bad_cell.path()).is_err());

        let non_finite = temp_csv("x,target:y\n1,NaN\n");
        assert!(read_dataset(non_finite.path()).is_err());
    }

    #[test]
    fn dataset_round_trips() {
        let d = Dataset {
            feature_names: vec!["a".into(), "b".into()],
            target_names: vec!["y".into()],
            features: vec![vec![0.125, -3.5], vec![1.0, 2.25]],
            targets: vec![vec![1.0], vec![0.0]],
        };
        let f = tempfile::NamedTempFile::new().unwrap();
        write_dataset(f.path(), &d).unwrap();
        assert_eq!(read_dataset(f.path()).unwrap(), d);
    }

    #[test]
    fn series_round_trips() {
        let series = Series {
            values: vec![1.5, -0.25, 0.3333333333333333],
            meta: "test p=1 seed=0".into(),
        };
        let f = tempfile::NamedTempFile::new().unwrap();
        write_series(f.path(), &series).unwrap();
        assert_eq!(read_series(f.path()).unwrap(), series);
    }

    #[test]
    fn class_label_validation() {
        let f = temp_csv("x,target:y\n1,2.5\n");
        let d = read_dataset(f.path()).unwrap();
        assert!(d.class_label(0).is_err());
    }
}
