use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parsed CSV contents before any transformation.
#[derive(Clone, Debug, PartialEq)]
pub struct RawData {
    /// One row per time point.
    pub rows: Vec<Vec<f64>>,
    /// Header fields, when the first row was non-numeric.
    pub header: Option<Vec<String>>,
}

/// Time series ready for fitting: `K` rows of `m` channels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub values: Vec<Vec<f64>>,
    pub channel_names: Vec<String>,
    /// Seconds between samples; informational only.
    pub sampling_interval: Option<f64>,
}

impl Dataset {
    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn m(&self) -> usize {
        self.channel_names.len()
    }

    /// Wraps raw rows without rescaling.
    pub fn from_raw(raw: &RawData) -> Result<Self> {
        let m = raw.rows.first().map_or(0, Vec::len);
        if m == 0 {
            return Err(Error::InvalidData("no data rows".into()));
        }
        Ok(Self {
            values: raw.rows.clone(),
            channel_names: channel_names(raw, m),
            sampling_interval: None,
        })
    }
}

fn channel_names(raw: &RawData, m: usize) -> Vec<String> {
    match &raw.header {
        Some(h) => h.clone(),
        None => (1..=m).map(|c| format!("ch{c}")).collect(),
    }
}

/// Parses a comma-separated file of numeric rows.
///
/// Lines starting with `#` are skipped. The first remaining row is taken as a
/// header if any of its fields is not a number. Row numbers in errors are
/// 1-based file lines, columns are 1-based.
pub fn load_csv(path: impl AsRef<Path>) -> Result<RawData> {
    let path = path.as_ref();
    let text = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}

/// [`load_csv`] on in-memory bytes.
pub fn parse_csv(bytes: &[u8]) -> Result<RawData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut header = None;
    let mut width = None;
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::ParseError {
            row: e.position().map_or(idx + 1, |p| p.line() as usize),
            column: 0,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(idx + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRows {
                row: line,
                expected,
                found: record.len(),
            });
        }
        let parsed: Vec<std::result::Result<f64, _>> = record.iter().map(str::parse::<f64>).collect();
        if rows.is_empty() && header.is_none() && parsed.iter().any(|p| p.is_err()) {
            header = Some(record.iter().map(str::to_owned).collect());
            continue;
        }
        let mut row = Vec::with_capacity(expected);
        for (c, (field, value)) in record.iter().zip(parsed).enumerate() {
            let v = value.map_err(|e| Error::ParseError {
                row: line,
                column: c + 1,
                message: format!("{field:?}: {e}"),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { row: line, column: c + 1 });
            }
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::InvalidData("no data rows".into()));
    }
    Ok(RawData { rows, header })
}

/// Column-wise `(x − mean) / sd` with the sample standard deviation
/// (divisor `K − 1`).
pub fn standardize(raw: &RawData) -> Result<Dataset> {
    let k = raw.rows.len();
    if k < 2 {
        return Err(Error::InvalidData(format!("need at least 2 rows to standardize, got {k}")));
    }
    let m = raw.rows[0].len();
    let mut values = raw.rows.clone();
    for c in 0..m {
        let mean = raw.rows.iter().map(|r| r[c]).sum::<f64>() / k as f64;
        let var = raw.rows.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
        let sd = var.sqrt();
        if !(sd > 0.0) {
            return Err(Error::ConstantChannel { channel: c + 1 });
        }
        for row in values.iter_mut() {
            row[c] = (row[c] - mean) / sd;
        }
    }
    Ok(Dataset {
        values,
        channel_names: channel_names(raw, m),
        sampling_interval: None,
    })
}
