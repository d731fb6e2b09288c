//! Externally computed document embeddings.
//!
//! File format: a `dim=<D>` header line, then one `<docid>\t<v1> ... <vD>`
//! line per document.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};

use super::matrix::FeatureMatrix;
use crate::corpus::Document;
use crate::error::{Error, Result};

pub const LASER_DIM: usize = 1024;
pub const MBERT_DIM: usize = 768;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseVectorTable {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl DenseVectorTable {
    pub fn new(dim: usize) -> Self {
        DenseVectorTable {
            dim,
            vectors: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, doc_id: &str) -> Option<&[f64]> {
        self.vectors.get(doc_id).map(Vec::as_slice)
    }

    pub fn insert(&mut self, doc_id: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: vector.len(),
            });
        }
        if let Some(v) = vector.iter().find(|v| !v.is_finite()) {
            return Err(Error::Features(format!("non-finite vector value {v}")));
        }
        let doc_id = doc_id.into();
        if self.vectors.contains_key(&doc_id) {
            return Err(Error::Features(format!("duplicate vector for `{doc_id}`")));
        }
        self.vectors.insert(doc_id, vector);
        Ok(())
    }

    /// Dense rows for `docs`, in order.
    pub fn matrix(&self, docs: &[&Document]) -> Result<FeatureMatrix> {
        let mut values = Vec::with_capacity(docs.len() * self.dim);
        for doc in docs {
            let v = self
                .get(&doc.id)
                .ok_or_else(|| Error::MissingVector(doc.id.clone()))?;
            values.extend_from_slice(v);
        }
        FeatureMatrix::dense(
            docs.iter().map(|d| d.id.clone()).collect(),
            self.dim,
            values,
        )
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "dim={}", self.dim)?;
        for (id, v) in &self.vectors {
            write!(out, "{id}\t")?;
            for (i, x) in v.iter().enumerate() {
                if i > 0 {
                    out.write_all(b" ")?;
                }
                write!(out, "{x:.16e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

pub fn load_dense_vectors<R: Read>(input: R, expected_dim: usize) -> Result<DenseVectorTable> {
    let reader = BufReader::new(input);
    let mut lines = reader.lines().enumerate();
    let err = |line: usize, message: String| Error::Vectors { line, message };

    let header = match lines.next() {
        Some((_, h)) => h.map_err(|e| err(1, e.to_string()))?,
        None => return Err(err(1, "missing `dim=<D>` header".into())),
    };
    let dim: usize = header
        .trim()
        .strip_prefix("dim=")
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| err(1, format!("bad header `{}`", header.trim())))?;
    if dim != expected_dim {
        return Err(Error::DimensionMismatch {
            expected: expected_dim,
            found: dim,
        });
    }

    let mut table = DenseVectorTable::new(dim);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| err(lineno, e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let (id, rest) = line
            .split_once('\t')
            .ok_or_else(|| err(lineno, "expected `<docid>\\t<values>`".into()))?;
        let values: Vec<f64> = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| err(lineno, format!("bad value `{t}`")))
            })
            .collect::<Result<_>>()?;
        if values.len() != dim {
            return Err(err(
                lineno,
                format!("expected {dim} values, found {}", values.len()),
            ));
        }
        table
            .insert(id, values)
            .map_err(|e| err(lineno, e.to_string()))?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Language;
    use proptest::prelude::*;

    #[test]
    fn reads_one_row_exactly() {
        let t = load_dense_vectors("dim=3\nd1\t0.5 0.25 -1.0\n".as_bytes(), 3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.get("d1").unwrap(), &[0.5, 0.25, -1.0]);
    }

    #[test]
    fn header_dimension_must_match() {
        let r = load_dense_vectors("dim=1024\n".as_bytes(), MBERT_DIM);
        assert!(matches!(
            r,
            Err(Error::DimensionMismatch {
                expected: 768,
                found: 1024
            })
        ));
    }

    #[test]
    fn malformed_rows() {
        assert!(load_dense_vectors("dim=2\nd1\t0.5\n".as_bytes(), 2).is_err());
        assert!(load_dense_vectors("dim=2\nd1\t0.5 NaN\n".as_bytes(), 2).is_err());
        assert!(load_dense_vectors("dim=2\nd1\t0.5 inf\n".as_bytes(), 2).is_err());
        assert!(load_dense_vectors("dim=2\nd1\t1 2\nd1\t3 4\n".as_bytes(), 2).is_err());
        assert!(load_dense_vectors("dims=2\n".as_bytes(), 2).is_err());
        assert!(load_dense_vectors("".as_bytes(), 2).is_err());
    }

    #[test]
    fn missing_document_is_named() {
        let t = load_dense_vectors("dim=1\nd1\t1.0\n".as_bytes(), 1).unwrap();
        let doc = Document {
            id: "d2".into(),
            language: Language::It,
            sentences: vec![],
            labels: Default::default(),
        };
        match t.matrix(&[&doc]) {
            Err(Error::MissingVector(id)) => assert_eq!(id, "d2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn write_read_round_trip(rows in proptest::collection::btree_map(
            "[a-z0-9_]{1,6}",
            proptest::collection::vec(-1e6f64..1e6, 4),
            0..6,
        )) {
            let mut t = DenseVectorTable::new(4);
            for (id, v) in &rows {
                t.insert(id.clone(), v.clone()).unwrap();
            }
            let mut buf = Vec::new();
            t.write(&mut buf).unwrap();
            let back = load_dense_vectors(&buf[..], 4).unwrap();
            prop_assert_eq!(back, t);
        }
    }
}
