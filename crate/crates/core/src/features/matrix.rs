use crate::error::{Error, Result};

/// Compressed sparse rows with non-negative counts stored as `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRows {
    pub width: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureData {
    Sparse(SparseRows),
    /// Row-major `rows × width` values.
    Dense {
        width: usize,
        values: Vec<f64>,
    },
}

/// Feature rows aligned with a list of document ids.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub row_ids: Vec<String>,
    pub data: FeatureData,
}

/// Borrowed view of one matrix row.
#[derive(Debug, Clone, Copy)]
pub enum Row<'a> {
    Sparse {
        indices: &'a [u32],
        values: &'a [f64],
    },
    Dense(&'a [f64]),
}

impl Row<'_> {
    #[inline]
    pub fn dot(&self, weights: &[f64]) -> f64 {
        match self {
            Row::Sparse { indices, values } => indices
                .iter()
                .zip(values.iter())
                .map(|(&j, &v)| weights[j as usize] * v)
                .sum(),
            Row::Dense(values) => values.iter().zip(weights).map(|(a, b)| a * b).sum(),
        }
    }

    /// `out += alpha * row`
    #[inline]
    pub fn axpy(&self, alpha: f64, out: &mut [f64]) {
        match self {
            Row::Sparse { indices, values } => {
                for (&j, &v) in indices.iter().zip(values.iter()) {
                    out[j as usize] += alpha * v;
                }
            }
            Row::Dense(values) => {
                for (o, v) in out.iter_mut().zip(values.iter()) {
                    *o += alpha * v;
                }
            }
        }
    }

    pub fn sum(&self) -> f64 {
        match self {
            Row::Sparse { values, .. } => values.iter().sum(),
            Row::Dense(values) => values.iter().sum(),
        }
    }

    /// Materialises the row into a dense vector of length `width`.
    pub fn to_dense(&self, width: usize) -> Vec<f64> {
        let mut out = vec![0.0; width];
        self.axpy(1.0, &mut out);
        out
    }
}

impl FeatureMatrix {
    pub fn dense(row_ids: Vec<String>, width: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != row_ids.len() * width {
            return Err(Error::DimensionMismatch {
                expected: row_ids.len() * width,
                found: values.len(),
            });
        }
        Ok(FeatureMatrix {
            row_ids,
            data: FeatureData::Dense { width, values },
        })
    }

    /// Builds a dense matrix from explicit rows (all of equal length).
    pub fn from_rows(row_ids: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != width) {
            return Err(Error::DimensionMismatch {
                expected: width,
                found: bad.len(),
            });
        }
        Self::dense(row_ids, width, rows.concat())
    }

    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn width(&self) -> usize {
        match &self.data {
            FeatureData::Sparse(s) => s.width,
            FeatureData::Dense { width, .. } => *width,
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.data, FeatureData::Sparse(_))
    }

    pub fn row(&self, i: usize) -> Row<'_> {
        match &self.data {
            FeatureData::Sparse(s) => {
                let (a, b) = (s.indptr[i], s.indptr[i + 1]);
                Row::Sparse {
                    indices: &s.indices[a..b],
                    values: &s.values[a..b],
                }
            }
            FeatureData::Dense { width, values } => Row::Dense(&values[i * width..(i + 1) * width]),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = Row<'_>> {
        (0..self.n_rows()).map(move |i| self.row(i))
    }

    pub fn all_finite(&self) -> bool {
        match &self.data {
            FeatureData::Sparse(s) => s.values.iter().all(|v| v.is_finite()),
            FeatureData::Dense { values, .. } => values.iter().all(|v| v.is_finite()),
        }
    }
}
