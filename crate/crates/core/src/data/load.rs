use std::path::Path;

use nalgebra::DMatrix;

use super::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    /// Header name; requires a header row.
    Name(String),
    /// Zero-based column index.
    Index(usize),
    Last,
}

impl LabelColumn {
    /// Parses a CLI-style spec: `last`, a 0-based index, or a header name.
    pub fn parse(spec: &str) -> Self {
        if spec.eq_ignore_ascii_case("last") {
            LabelColumn::Last
        } else if let Ok(i) = spec.parse::<usize>() {
            LabelColumn::Index(i)
        } else {
            LabelColumn::Name(spec.to_string())
        }
    }
}

#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub label_column: LabelColumn,
    /// Rows whose label equals this string become +1, everything else −1.
    pub positive_label: String,
    /// `None` detects a header when the first row has a non-numeric feature cell.
    pub has_header: Option<bool>,
    pub delimiter: u8,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            label_column: LabelColumn::Last,
            positive_label: "1".into(),
            has_header: None,
            delimiter: b',',
        }
    }
}

impl CsvOptions {
    pub fn new(label_column: LabelColumn, positive_label: impl Into<String>) -> Self {
        Self {
            label_column,
            positive_label: positive_label.into(),
            ..Default::default()
        }
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "?" || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan")
}

fn label_matches(cell: &str, positive: &str) -> bool {
    if cell == positive {
        return true;
    }
    // numeric labels compare by value so "1.0" matches "1"
    match (cell.parse::<f64>(), positive.parse::<f64>()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

fn dataset_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| "dataset".to_string(), |s| s.to_string_lossy().into_owned())
}

/// Reads a delimited text file into a binary [`Dataset`]. Missing cells are
/// rejected; there is no imputation.
pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, dataset_name(path), options)
}

pub(crate) fn parse_csv(text: &str, name: String, options: &CsvOptions) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(options.delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let records: Vec<csv::StringRecord> = reader.records().collect::<std::result::Result<_, _>>()?;
    let Some(first) = records.first() else {
        return Err(Error::InvalidDataset(format!("{name}: empty file")));
    };
    let width = first.len();

    let label_idx = |header: Option<&csv::StringRecord>| -> Result<usize> {
        match &options.label_column {
            LabelColumn::Last => Ok(width.saturating_sub(1)),
            LabelColumn::Index(i) if *i < width => Ok(*i),
            LabelColumn::Index(i) => Err(Error::InvalidArgument(format!("label column {i} out of range ({width} columns)"))),
            LabelColumn::Name(n) => header
                .and_then(|h| h.iter().position(|c| c == n))
                .ok_or_else(|| Error::InvalidArgument(format!("label column {n:?} not found in header"))),
        }
    };

    let has_header = match options.has_header {
        Some(h) => h,
        None => match &options.label_column {
            LabelColumn::Name(_) => true,
            _ => {
                let li = label_idx(None)?;
                first.iter().enumerate().any(|(j, c)| j != li && !is_missing(c) && c.parse::<f64>().is_err())
            }
        },
    };
    let li = label_idx(if has_header { Some(first) } else { None })?;
    let body = if has_header { &records[1..] } else { &records[..] };

    let n = width - 1;
    let mut values = Vec::with_capacity(body.len() * n);
    let mut labels = Vec::with_capacity(body.len());
    for (r, rec) in body.iter().enumerate() {
        let row = r + 1 + usize::from(has_header);
        if rec.len() != width {
            return Err(Error::Parse {
                row,
                column: rec.len().min(width) + 1,
                message: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        for (j, cell) in rec.iter().enumerate() {
            if is_missing(cell) {
                return Err(Error::MissingValue { row, column: j + 1 });
            }
            if j == li {
                labels.push(if label_matches(cell, &options.positive_label) { 1 } else { -1 });
            } else {
                let v = cell.parse::<f64>().map_err(|_| Error::Parse {
                    row,
                    column: j + 1,
                    message: format!("non-numeric feature {cell:?}"),
                })?;
                values.push(v);
            }
        }
    }
    let features = DMatrix::from_row_slice(labels.len(), n, &values);
    Dataset::new(name, features, labels)
}

/// Reads the sparse `label idx:val ...` format (1-based indices).
pub fn load_sparse(path: impl AsRef<Path>, positive_label: &str) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sparse(&text, dataset_name(path), positive_label)
}

pub(crate) fn parse_sparse(text: &str, name: String, positive_label: &str) -> Result<Dataset> {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut n = 0;
    for (r, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let label = toks.next().unwrap_or_default();
        labels.push(if label_matches(label, positive_label) { 1 } else { -1 });
        let mut entries = Vec::new();
        for (c, tok) in toks.enumerate() {
            let bad = |message: String| Error::Parse {
                row: r + 1,
                column: c + 2,
                message,
            };
            let (idx, val) = tok.split_once(':').ok_or_else(|| bad(format!("expected idx:val, found {tok:?}")))?;
            let idx: usize = idx.parse().map_err(|_| bad(format!("bad index {idx:?}")))?;
            if idx == 0 {
                return Err(bad("indices are 1-based".into()));
            }
            let val: f64 = val.parse().map_err(|_| bad(format!("bad value {val:?}")))?;
            n = n.max(idx);
            entries.push((idx - 1, val));
        }
        rows.push(entries);
    }
    let mut features = DMatrix::zeros(rows.len(), n);
    for (i, entries) in rows.iter().enumerate() {
        for &(j, v) in entries {
            features[(i, j)] = v;
        }
    }
    Dataset::new(name, features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binarizes_labels() {
        let d = parse_csv("1,2,a\n3,4,b\n5,6,a\n", "t".into(), &CsvOptions::new(LabelColumn::Last, "a")).unwrap();
        assert_eq!(d.labels(), &[1, -1, 1]);
        assert_eq!(d.n_features(), 2);
        assert_eq!(d.features()[(1, 1)], 4.0);
    }

    #[test]
    fn header_and_named_label() {
        let d = parse_csv(
            "cls,f1,f2\nyes,1,2\nno,3,4\n",
            "t".into(),
            &CsvOptions::new(LabelColumn::Name("cls".into()), "yes"),
        )
        .unwrap();
        assert_eq!(d.labels(), &[1, -1]);
        assert_eq!(d.row(1), vec![3.0, 4.0]);
    }

    #[test]
    fn text_feature_names_the_cell() {
        let err = parse_csv("1,2,a\n3,oops,b\n", "t".into(), &CsvOptions::new(LabelColumn::Last, "a")).unwrap_err();
        match err {
            Error::Parse { row, column, message } => {
                assert_eq!((row, column), (2, 2));
                assert!(message.contains("oops"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn missing_values_rejected() {
        let err = parse_csv("1,2,a\n3,?,b\n", "t".into(), &CsvOptions::new(LabelColumn::Last, "a")).unwrap_err();
        assert!(matches!(err, Error::MissingValue { row: 2, column: 2 }));
    }

    #[test]
    fn numeric_labels_compare_by_value() {
        let d = parse_csv("0.5,1.0\n0.1,-1\n", "t".into(), &CsvOptions::default()).unwrap();
        assert_eq!(d.labels(), &[1, -1]);
    }

    #[test]
    fn sparse_format() {
        let d = parse_sparse("+1 1:0.5 3:2\n-1 2:1\n", "s".into(), "+1").unwrap();
        assert_eq!(d.n_features(), 3);
        assert_eq!(d.labels(), &[1, -1]);
        assert_eq!(d.features()[(0, 2)], 2.0);
        assert_eq!(d.features()[(1, 0)], 0.0);
    }
}
