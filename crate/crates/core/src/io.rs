//! Reading observations from text.
//!
//! Two layouts are accepted: one number per line (blank lines and `#`
//! comments ignored), or a CSV with header `sample1,sample2`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::TwoSampleData;

fn parse_err(source: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source.to_string(),
        line,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn parse_number(tok: &str, source: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .trim()
        .parse()
        .map_err(|_| parse_err(source, line, format!("not a number: {:?}", tok.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(source, line, "non-finite value"));
    }
    Ok(v)
}

pub fn parse_column(text: &str, source: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        out.push(parse_number(line, source, i + 1)?);
    }
    if out.is_empty() {
        return Err(parse_err(source, 0, "no observations"));
    }
    Ok(out)
}

pub fn parse_two_column_csv(text: &str, source: &str) -> Result<TwoSampleData> {
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = rows
        .next()
        .ok_or_else(|| parse_err(source, 0, "empty file"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["sample1", "sample2"] {
        return Err(parse_err(
            source,
            hline,
            format!("expected header \"sample1,sample2\", found {header:?}"),
        ));
    }
    let (mut s1, mut s2) = (Vec::new(), Vec::new());
    for (ln, line) in rows {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(parse_err(
                source,
                ln,
                format!("expected 2 fields, found {}", fields.len()),
            ));
        }
        s1.push(parse_number(fields[0], source, ln)?);
        s2.push(parse_number(fields[1], source, ln)?);
    }
    TwoSampleData::new(s1, s2)
}

pub fn read_column(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_column(&text, &path.display().to_string())
}

pub fn read_pair(path1: &Path, path2: &Path) -> Result<TwoSampleData> {
    TwoSampleData::new(read_column(path1)?, read_column(path2)?)
}

pub fn read_csv(path: &Path) -> Result<TwoSampleData> {
    let text = std::fs::read_to_string(path)?;
    parse_two_column_csv(&text, &path.display().to_string())
}
