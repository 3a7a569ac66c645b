//! Dataset CSV and constraint file formats.
//!
//! Datasets: header `id,a1,...,ad`, one tuple per line. Tuples are numbered
//! in order of appearance when loaded. Columns with values outside `[0,1]`
//! are min-max rescaled; columns listed as maximized are negated first.
//!
//! Constraints: one inequality per line, `c1*w1 + c2*w2 + ... >= 0`, with the
//! shorthand `wi >= wj`. Either side may be a linear expression; blank lines
//! and `#` comments are ignored.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use flexsky_core::{Dataset, WeightConstraintSet};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Open { path: String, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] flexsky_core::Error),
}

fn open(path: &Path) -> Result<File, IoError> {
    File::open(path).map_err(|source| IoError::Open { path: path.display().to_string(), source })
}

pub fn read_dataset(path: &Path, maximize: &[usize]) -> Result<Dataset, IoError> {
    parse_dataset(open(path)?, maximize)
}

/// `maximize` holds 0-based attribute indices where larger is better.
pub fn parse_dataset<R: Read>(reader: R, maximize: &[usize]) -> Result<Dataset, IoError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.get(0).map(str::to_ascii_lowercase).as_deref() != Some("id") {
        return Err(IoError::Parse { line: 1, msg: "header must start with `id`".into() });
    }
    let dim = headers.len() - 1;
    if dim < 2 {
        return Err(flexsky_core::Error::DimensionTooSmall(dim).into());
    }
    if let Some(&k) = maximize.iter().find(|&&k| k >= dim) {
        return Err(IoError::Parse { line: 1, msg: format!("maximized attribute {} does not exist", k + 1) });
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = i + 2;
        if record.len() != dim + 1 {
            return Err(IoError::Parse { line, msg: format!("expected {} fields, found {}", dim + 1, record.len()) });
        }
        let mut values = Vec::with_capacity(dim);
        for (k, field) in record.iter().skip(1).enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| IoError::Parse { line, msg: format!("`{field}` is not a number") })?;
            if !v.is_finite() {
                return Err(IoError::Parse { line, msg: format!("`{field}` is not finite") });
            }
            values.push(if maximize.contains(&k) { -v } else { v });
        }
        rows.push(values);
    }
    for k in 0..dim {
        let column = rows.iter().map(|r| r[k]);
        let (lo, hi) = column.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if lo < 0.0 || hi > 1.0 {
            let span = hi - lo;
            for r in &mut rows {
                r[k] = if span > 0.0 { (r[k] - lo) / span } else { 0.0 };
            }
        }
    }
    Ok(Dataset::from_rows(dim, rows)?)
}

pub fn write_dataset<W: Write>(writer: W, r: &Dataset) -> Result<(), IoError> {
    let mut w = BufWriter::new(writer);
    let header: Vec<String> = std::iter::once("id".to_string())
        .chain((1..=r.dim()).map(|k| format!("a{k}")))
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for t in r.tuples() {
        write!(w, "{}", t.id())?;
        for v in t.values() {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_constraints(path: &Path, dim: usize) -> Result<WeightConstraintSet, IoError> {
    let mut text = String::new();
    open(path)?.read_to_string(&mut text)?;
    parse_constraints(&text, dim)
}

pub fn parse_constraints(text: &str, dim: usize) -> Result<WeightConstraintSet, IoError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        rows.push(parse_inequality(line, dim).map_err(|msg| IoError::Parse { line: i + 1, msg })?);
    }
    Ok(WeightConstraintSet::new(dim, rows)?)
}

/// Parses `lhs >= rhs` (or `lhs <= rhs`) into the row `a` of `a . w >= 0`.
pub fn parse_inequality(text: &str, dim: usize) -> Result<Vec<f64>, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (lhs, rhs, flip) = if let Some((l, r)) = compact.split_once(">=") {
        (l, r, false)
    } else if let Some((l, r)) = compact.split_once("<=") {
        (l, r, true)
    } else {
        return Err(format!("`{text}` is not an inequality (expected >=)"));
    };
    let left = parse_linear(lhs, dim)?;
    let right = parse_linear(rhs, dim)?;
    let sign = if flip { -1.0 } else { 1.0 };
    Ok(left.iter().zip(&right).map(|(a, b)| sign * (a - b)).collect())
}

fn parse_linear(expr: &str, dim: usize) -> Result<Vec<f64>, String> {
    if expr.is_empty() {
        return Err("empty side of inequality".into());
    }
    let mut row = vec![0.0; dim];
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in expr.char_indices() {
        if (c == '+' || c == '-') && i > start && !expr[..i].ends_with(['e', 'E', '*', '+', '-']) {
            terms.push(&expr[start..i]);
            start = i;
        }
    }
    terms.push(&expr[start..]);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, term.strip_prefix('+').unwrap_or(term)),
        };
        let (coef, var) = match body.rsplit_once('*') {
            Some((c, v)) => (c.parse::<f64>().map_err(|_| format!("bad coefficient `{c}`"))?, v),
            None if body.starts_with(['w', 'W']) => (1.0, body),
            None => {
                let c: f64 = body.parse().map_err(|_| format!("bad term `{body}`"))?;
                if c != 0.0 {
                    return Err(format!("constant term `{body}`: constraints must be homogeneous"));
                }
                continue;
            }
        };
        let index: usize = var
            .strip_prefix(['w', 'W'])
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| format!("bad variable `{var}` (expected w1..w{dim})"))?;
        if index == 0 || index > dim {
            return Err(format!("weight w{index} out of range 1..={dim}"));
        }
        row[index - 1] += sign * coef;
    }
    Ok(row)
}
