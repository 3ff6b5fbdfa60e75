//! Text format for information sets:
//!
//! ```text
//! m=<m> k=<k>
//! <I_1>
//! ...
//! <I_k>
//! ```
//!
//! Indices are decimal path indices sorted ascending, one per line, each
//! terminated by `\n`.

use std::io::{BufRead, Write};

use super::CodeSpec;
use crate::error::{Error, Result};

pub fn write_frozen_set<W: Write>(spec: &CodeSpec, mut out: W) -> Result<()> {
    writeln!(out, "m={} k={}", spec.levels(), spec.dimension())?;
    for i in spec.info_indices_ascending() {
        writeln!(out, "{i}")?;
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn header_field(token: Option<&str>, key: &str) -> Option<usize> {
    token?.strip_prefix(key)?.strip_prefix('=')?.parse().ok()
}

pub fn read_frozen_set<R: BufRead>(input: R) -> Result<CodeSpec> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| parse_err(1, "missing header"))??;
    let mut tokens = header.split(' ');
    let m = header_field(tokens.next(), "m").ok_or_else(|| parse_err(1, "expected `m=<m>`"))?;
    let k = header_field(tokens.next(), "k").ok_or_else(|| parse_err(1, "expected `k=<k>`"))?;
    if tokens.next().is_some() {
        return Err(parse_err(1, "unexpected trailing header content"));
    }
    let m = u32::try_from(m).map_err(|_| parse_err(1, "m out of range"))?;

    let mut indices = Vec::with_capacity(k);
    for (offset, line) in lines.enumerate() {
        let line_no = offset + 2;
        let line = line?;
        let index: usize = line.parse().map_err(|_| parse_err(line_no, format!("invalid path index {line:?}")))?;
        if let Some(&prev) = indices.last() {
            if index <= prev {
                return Err(parse_err(line_no, "indices must be strictly ascending"));
            }
        }
        indices.push(index);
    }
    if indices.len() != k {
        return Err(parse_err(
            indices.len() + 1,
            format!("header declares k={k} but {} indices follow", indices.len()),
        ));
    }
    CodeSpec::new(m, indices)
}
