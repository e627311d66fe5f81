//! Labeled CSV datasets replayed as single-pass streams.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::IngestError;

/// Which CSV column carries the label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
    Last,
}

impl LabelColumn {
    /// Numeric specs are zero-based positions, anything else a header name.
    pub fn parse(spec: &str) -> Self {
        match spec.parse::<usize>() {
            Ok(i) => Self::Index(i),
            Err(_) => Self::Name(spec.to_owned()),
        }
    }

    fn resolve(&self, header: &csv::StringRecord) -> Result<usize, IngestError> {
        let found = match self {
            Self::Last => header.len().checked_sub(1),
            Self::Name(name) => header.iter().position(|h| h.trim() == name),
            Self::Index(i) => (*i < header.len()).then_some(*i),
        };
        found.ok_or_else(|| {
            IngestError::MissingColumn(match self {
                Self::Last => "<last>".to_owned(),
                Self::Name(name) => format!("{name:?}"),
                Self::Index(i) => i.to_string(),
            })
        })
    }
}

/// A dataset of fixed dimension with binary labels (`true` = anomaly).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledStream {
    pub name: String,
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<bool>,
}

impl LabeledStream {
    /// Panics if lengths or dimensions disagree.
    pub fn new(name: impl Into<String>, points: Vec<Vec<f64>>, labels: Vec<bool>) -> Self {
        assert_eq!(points.len(), labels.len(), "one label per point");
        let dim = points.first().map_or(0, Vec::len);
        assert!(points.iter().all(|p| p.len() == dim), "uniform dimension");
        Self {
            name: name.into(),
            dim,
            points,
            labels,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn anomalies(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }

    /// Same rows in a seeded random order.
    pub fn shuffled(&self, seed: u64) -> Self {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self {
            name: self.name.clone(),
            dim: self.dim,
            points: order.iter().map(|&i| self.points[i].clone()).collect(),
            labels: order.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Consecutive chunks of at most `batch_size` points; the last may be
    /// short.
    ///
    /// Panics if `batch_size` is zero.
    pub fn batches(&self, batch_size: usize) -> std::slice::Chunks<'_, Vec<f64>> {
        assert!(batch_size >= 1, "batch size must be positive");
        self.points.chunks(batch_size)
    }

    /// Componentwise minimum and maximum over all points.
    pub fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let first = self.points.first()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for p in &self.points[1..] {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Some((lo, hi))
    }
}

/// Loads a headed CSV. Every column but the label must be numeric; a row is
/// an anomaly when its label cell (trimmed) equals `anomaly_value`.
pub fn load_csv(
    path: impl AsRef<Path>,
    label: &LabelColumn,
    anomaly_value: &str,
) -> Result<LabeledStream, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let name = path.file_stem().map_or_else(
        || "dataset".to_owned(),
        |s| s.to_string_lossy().into_owned(),
    );
    read_csv(file, name, label, anomaly_value)
}

/// Maps byte offsets to 1-based line numbers, scanning forward only.
struct LineCounter<'a> {
    text: &'a [u8],
    offset: usize,
    line: usize,
}

impl LineCounter<'_> {
    fn line_at(&mut self, pos: Option<&csv::Position>) -> usize {
        if let Some(pos) = pos {
            let mut target = (pos.byte() as usize).min(self.text.len());
            // record positions precede any blank lines the reader skipped
            while matches!(self.text.get(target), Some(b'\n' | b'\r')) {
                target += 1;
            }
            if target >= self.offset {
                self.line += self.text[self.offset..target]
                    .iter()
                    .filter(|&&b| b == b'\n')
                    .count();
                self.offset = target;
            }
        }
        self.line
    }
}

/// As [`load_csv`], from any reader.
pub fn read_csv<R: Read>(
    mut reader: R,
    name: impl Into<String>,
    label: &LabelColumn,
    anomaly_value: &str,
) -> Result<LabeledStream, IngestError> {
    let mut text = Vec::new();
    reader
        .read_to_end(&mut text)
        .map_err(|source| IngestError::Io {
            path: "<input>".to_owned(),
            source,
        })?;
    let mut lines = LineCounter {
        text: &text,
        offset: 0,
        line: 1,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_slice());
    let header = rdr
        .headers()
        .map_err(|source| IngestError::Csv { row: 1, source })?
        .clone();
    if header.is_empty() {
        return Err(IngestError::Empty);
    }
    let label_idx = label.resolve(&header)?;
    if header.len() < 2 {
        return Err(IngestError::NoFeatures);
    }
    let anomaly_value = anomaly_value.trim();

    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(source) => {
                let row = lines.line_at(source.position());
                return Err(IngestError::Csv { row, source });
            }
        }
        // 1-based file line, header included
        let row = lines.line_at(record.position());
        if record.len() != header.len() {
            return Err(IngestError::RaggedRow {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        let mut point = Vec::with_capacity(header.len() - 1);
        for (col, cell) in record.iter().enumerate() {
            if col == label_idx {
                continue;
            }
            let cell = cell.trim();
            let value: f64 = cell.parse().map_err(|_| IngestError::NotNumeric {
                row,
                column: header[col].to_owned(),
                value: cell.to_owned(),
            })?;
            if !value.is_finite() {
                return Err(IngestError::NonFinite {
                    row,
                    column: header[col].to_owned(),
                    value,
                });
            }
            point.push(value);
        }
        labels.push(record[label_idx].trim() == anomaly_value);
        points.push(point);
    }
    if points.is_empty() {
        return Err(IngestError::Empty);
    }
    Ok(LabeledStream::new(name, points, labels))
}
