//! Matrix and vector text formats.
//!
//! A matrix is an optional `n m` header followed by `n` rows of `m` scalar
//! tokens. Blank lines and `#` comments are ignored. The first line is read
//! as a header when it holds exactly two non-negative integers and exactly
//! `n` data rows follow; otherwise it is the first row.

use std::str::FromStr;

use crate::error::{Error, ParseError, Result};
use crate::matrix::TropMatrix;
use crate::scalar::TropScalar;

struct DataLine<'a> {
    line: usize,
    tokens: Vec<&'a str>,
}

fn data_lines(text: &str) -> Vec<DataLine<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            (!tokens.is_empty()).then_some(DataLine { line: i + 1, tokens })
        })
        .collect()
}

fn header(first: &DataLine<'_>) -> Option<(usize, usize)> {
    match first.tokens.as_slice() {
        [n, m] if n.bytes().all(|b| b.is_ascii_digit()) && m.bytes().all(|b| b.is_ascii_digit()) => {
            Some((n.parse().ok()?, m.parse().ok()?))
        }
        _ => None,
    }
}

pub fn parse_matrix(text: &str) -> Result<TropMatrix> {
    let lines = data_lines(text);
    let first = lines.first().ok_or(ParseError::NoData)?;
    let (body, declared_cols) = match header(first) {
        Some((n, m)) if n == lines.len() - 1 && n > 0 => (&lines[1..], Some(m)),
        _ => (&lines[..], None),
    };
    let cols = declared_cols.unwrap_or(body[0].tokens.len());
    let mut rows = Vec::with_capacity(body.len());
    for (r, dl) in body.iter().enumerate() {
        if dl.tokens.len() != cols {
            return Err(ParseError::Ragged {
                line: dl.line,
                row: r + 1,
                expected: cols,
                found: dl.tokens.len(),
            }
            .into());
        }
        let row = dl
            .tokens
            .iter()
            .enumerate()
            .map(|(t, tok)| {
                tok.parse::<TropScalar>().map_err(|_| ParseError::Token {
                    line: dl.line,
                    row: r + 1,
                    token: t + 1,
                    text: (*tok).to_string(),
                })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        rows.push(row);
    }
    TropMatrix::from_rows(rows)
}

/// Canonical form: header line, then rows of single-space separated tokens.
pub fn format_matrix(a: &TropMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Whitespace-separated scalar tokens; one per line is canonical.
pub fn parse_vector(text: &str) -> Result<Vec<TropScalar>> {
    let mut out = Vec::new();
    for (r, dl) in data_lines(text).iter().enumerate() {
        for (t, tok) in dl.tokens.iter().enumerate() {
            let v = tok.parse::<TropScalar>().map_err(|_| ParseError::Token {
                line: dl.line,
                row: r + 1,
                token: t + 1,
                text: (*tok).to_string(),
            })?;
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(ParseError::NoData.into());
    }
    Ok(out)
}

pub fn format_vector(x: &[TropScalar]) -> String {
    x.iter().map(|v| format!("{v}\n")).collect()
}

impl FromStr for TropMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_matrix(s)
    }
}
