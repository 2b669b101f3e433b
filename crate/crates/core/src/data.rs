//! Dense datasets and their CSV representation.
//!
//! A [`DataMatrix`] is `n` points of dimensionality `d`, stored row-major.
//! One CSV row is one point. Point indices are stable: index `i` always
//! refers to row `i` of the input.

use std::fmt::Display;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n: usize,
    d: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    /// Builds a matrix from row-major values. Rejects empty shapes, length
    /// mismatches and non-finite coordinates.
    pub fn from_flat(n: usize, d: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Empty);
        }
        if values.len() != n * d {
            return Err(Error::invalid(format!(
                "{} values cannot form a {n}x{d} matrix",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / d,
                column: pos % d,
            });
        }
        Ok(DataMatrix { n, d, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty)?;
        let d = first.as_ref().len();
        let mut values = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::RaggedRow {
                    row: i,
                    expected: d,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::from_flat(rows.len(), d, values)
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; a matrix holds at least one point.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.d)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Rows selected by index, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            if i >= self.n {
                return Err(Error::invalid(format!("row {i} out of range for {} rows", self.n)));
            }
            values.extend_from_slice(self.point(i));
        }
        Self::from_flat(indices.len(), self.d, values)
    }
}

/// Reads one point per row. When `expect_header` is set the first row is
/// skipped. Cells may use plain decimal or scientific notation.
pub fn load_csv(path: impl AsRef<Path>, expect_header: bool) -> Result<DataMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(expect_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut values = Vec::new();
    let mut d = None;
    let mut n = 0;
    for record in reader.records() {
        let record = record.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let row = record.position().map_or(n + 1, |p| p.line() as usize);
        let expected = *d.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                row,
                expected,
                found: record.len(),
            });
        }
        for (j, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                row,
                column: j + 1,
                value: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite { row, column: j + 1 });
            }
            values.push(v);
        }
        n += 1;
    }
    match d {
        Some(d) if d > 0 => DataMatrix::from_flat(n, d, values),
        _ => Err(Error::Empty),
    }
}

/// Writes `values` as rows of `cols` cells. Reals use the shortest decimal
/// form that parses back to the same `f64`.
pub fn write_csv<W: Write, T: Display>(mut out: W, values: &[T], cols: usize) -> std::io::Result<()> {
    if cols == 0 {
        return Ok(());
    }
    for row in values.chunks(cols) {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.write_all(b",")?;
            }
            write!(out, "{v}")?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

fn save_values<T: Display>(path: &Path, values: &[T], cols: usize) -> Result<()> {
    if values.is_empty() || cols == 0 {
        return Err(Error::Empty);
    }
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_csv(BufWriter::new(file), values, cols).map_err(io_err)
}

pub fn save_csv(data: &DataMatrix, path: impl AsRef<Path>) -> Result<()> {
    save_values(path.as_ref(), &data.values, data.d)
}

/// Writes an integer matrix (neighbor indices, assignments) given row-major.
pub fn save_index_csv(values: &[usize], cols: usize, path: impl AsRef<Path>) -> Result<()> {
    save_values(path.as_ref(), values, cols)
}

/// `n` points with coordinates drawn i.i.d. from `[0, 1)`.
pub fn generate_uniform(n: usize, d: usize, rng: &mut SeededRng) -> Result<DataMatrix> {
    if n == 0 || d == 0 {
        return Err(Error::invalid(format!("cannot generate a {n}x{d} dataset")));
    }
    let values = (0..n * d).map(|_| rng.next_f64()).collect();
    DataMatrix::from_flat(n, d, values)
}
