//! Plain-text model serialisation.
//!
//! ```text
//! linear-model
//! classes A2 B1 B2
//! dim 4
//! k 3
//! weights
//! <K lines of D values>
//! biases
//! <K values>
//! ```

use std::io::{BufRead, BufReader, Read, Write};

use super::LinearModel;
use crate::corpus::CefrLevel;
use crate::error::{Error, Result};

const MAGIC: &str = "linear-model";

fn write_values<W: Write>(out: &mut W, values: &[f64]) -> std::io::Result<()> {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.write_all(b" ")?;
        }
        write!(out, "{v:.16e}")?;
    }
    writeln!(out)
}

pub fn save_model<W: Write>(model: &LinearModel, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{MAGIC}")?;
    let classes: Vec<&str> = model.classes().iter().map(|c| c.as_str()).collect();
    writeln!(out, "classes {}", classes.join(" "))?;
    writeln!(out, "dim {}", model.width())?;
    writeln!(out, "k {}", model.n_classes())?;
    writeln!(out, "weights")?;
    for c in 0..model.n_classes() {
        write_values(&mut out, model.class_weights(c))?;
    }
    writeln!(out, "biases")?;
    write_values(&mut out, model.biases())
}

pub fn load_model<R: Read>(input: R) -> Result<LinearModel> {
    let mut lines = BufReader::new(input).lines().enumerate();
    let mut next = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((i, Ok(l))) => Ok((i + 1, l.trim_end().to_string())),
            Some((i, Err(e))) => Err(Error::ModelFormat {
                line: i + 1,
                message: e.to_string(),
            }),
            None => Err(Error::ModelFormat {
                line: 0,
                message: format!("unexpected end of file, expected {what}"),
            }),
        }
    };
    let bad = |line: usize, message: String| Error::ModelFormat { line, message };
    let keyed = |line: usize, text: &str, key: &str| -> Result<String> {
        text.strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| bad(line, format!("expected `{key} ...`")))
    };
    let values = |line: usize, text: &str| -> Result<Vec<f64>> {
        text.split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| bad(line, format!("bad number `{t}`")))
            })
            .collect()
    };

    let (l, magic) = next("header")?;
    if magic != MAGIC {
        return Err(bad(l, format!("expected `{MAGIC}`")));
    }
    let (l, text) = next("classes")?;
    let classes: Vec<CefrLevel> = keyed(l, &text, "classes")?
        .split_whitespace()
        .map(|c| c.parse().map_err(|m| bad(l, m)))
        .collect::<Result<_>>()?;
    let (l, text) = next("dim")?;
    let dim: usize = keyed(l, &text, "dim")?
        .parse()
        .map_err(|_| bad(l, "bad dim".into()))?;
    let (l, text) = next("k")?;
    let k: usize = keyed(l, &text, "k")?
        .parse()
        .map_err(|_| bad(l, "bad k".into()))?;
    if k != classes.len() {
        return Err(bad(
            l,
            format!("k = {k} but {} classes listed", classes.len()),
        ));
    }
    let (l, text) = next("weights")?;
    if text != "weights" {
        return Err(bad(l, "expected `weights`".into()));
    }
    let mut weights = Vec::with_capacity(k * dim);
    for _ in 0..k {
        let (l, text) = next("weight row")?;
        let row = values(l, &text)?;
        if row.len() != dim {
            return Err(bad(
                l,
                format!("expected {dim} weights, found {}", row.len()),
            ));
        }
        weights.extend(row);
    }
    let (l, text) = next("biases")?;
    if text != "biases" {
        return Err(bad(l, "expected `biases`".into()));
    }
    let (l, text) = next("bias values")?;
    let biases = values(l, &text)?;
    if biases.len() != k {
        return Err(bad(
            l,
            format!("expected {k} biases, found {}", biases.len()),
        ));
    }
    LinearModel::new(classes, dim, weights, biases)
}
