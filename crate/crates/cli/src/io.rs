//! CSV ingestion and label files.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use isotree::DataSet;

/// Which column, if any, holds class labels.
#[derive(Debug, Clone)]
pub enum LabelColumn {
    Index(usize),
    Name(String),
}

impl std::str::FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

fn open(path: &Path) -> Result<Box<dyn Read>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(io::stdin()));
    }
    Ok(Box::new(File::open(path).with_context(|| format!("cannot read {}", path.display()))?))
}

fn resolve(column: &LabelColumn, headers: Option<&csv::StringRecord>) -> Result<usize> {
    match column {
        LabelColumn::Index(i) => Ok(*i),
        LabelColumn::Name(name) => headers
            .ok_or_else(|| anyhow!("label column {name:?} given by name but the input has no header"))?
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| anyhow!("no column named {name:?}")),
    }
}

/// Numeric rows of `path`; the label column, when given, becomes the dataset labels.
pub fn read_dataset(path: &Path, header: bool, label: Option<&LabelColumn>) -> Result<DataSet> {
    let mut reader = csv::ReaderBuilder::new().has_headers(header).trim(csv::Trim::All).from_reader(open(path)?);
    let headers = if header { Some(reader.headers()?.clone()) } else { None };
    let label_col = label.map(|c| resolve(c, headers.as_ref())).transpose()?;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("malformed CSV at data row {}", row + 1))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let mut point = Vec::with_capacity(record.len());
        for (col, field) in record.iter().enumerate() {
            if Some(col) == label_col {
                labels.push(field.to_string());
                continue;
            }
            let value: f64 =
                field.parse().map_err(|_| anyhow!("data row {}, column {}: {field:?} is not a number", row + 1, col + 1))?;
            point.push(value);
        }
        if let Some(c) = label_col {
            if c >= record.len() {
                bail!("data row {}: label column {c} out of range", row + 1);
            }
        }
        points.push(point);
    }
    let data = DataSet::new(points)?;
    Ok(if label_col.is_some() { data.with_labels(labels)? } else { data })
}

/// `index,cluster` rows, residue as −1.
pub fn write_labels<W: Write>(out: W, labels: &[i64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "cluster"])?;
    for (i, l) in labels.iter().enumerate() {
        w.write_record([i.to_string(), l.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Cluster column of an `index,cluster` file, ordered by index.
pub fn read_labels(path: &Path) -> Result<Vec<i64>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(open(path)?);
    let mut rows: Vec<(usize, i64)> = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let parse = |i: usize| record.get(i).and_then(|f| f.parse().ok());
        match (parse(0), parse(1)) {
            (Some(i), Some(c)) => rows.push((i as usize, c)),
            _ => bail!("{}: row {} is not `index,cluster`", path.display(), row + 1),
        }
    }
    rows.sort_by_key(|r| r.0);
    if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
        bail!("{}: indices are not 0..{}", path.display(), rows.len());
    }
    Ok(rows.into_iter().map(|r| r.1).collect())
}

/// One column of a CSV file as strings.
pub fn read_column(path: &Path, header: bool, column: &LabelColumn) -> Result<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(header).trim(csv::Trim::All).from_reader(open(path)?);
    let headers = if header { Some(reader.headers()?.clone()) } else { None };
    let col = resolve(column, headers.as_ref())?;
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        out.push(record.get(col).ok_or_else(|| anyhow!("row {}: no column {col}", row + 1))?.to_string());
    }
    Ok(out)
}

/// Write to `path`, or to stdout when absent.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p).with_context(|| format!("cannot write {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}
