//! Plain-text point set files.
//!
//! ```text
//! # optional comments
//! p=2 d=4
//! 0,0,0,0
//! 1,0,0,0
//! ```
//!
//! The header is the first line that is neither blank nor a comment. Each
//! following non-empty line is one vector of `d` residues in `[0, p)`.
//! Duplicate vectors are rejected.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::{GroupParams, GroupVector, PointSet};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(line_no: usize, line: &str) -> Result<GroupParams> {
    let mut p = None;
    let mut d = None;
    for field in line.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected key=value, got `{field}`")))?;
        let slot = match key {
            "p" => &mut p,
            "d" => &mut d,
            _ => return Err(parse_err(line_no, format!("unknown header key `{key}`"))),
        };
        if slot.is_some() {
            return Err(parse_err(line_no, format!("repeated header key `{key}`")));
        }
        *slot = Some(
            value
                .parse::<u32>()
                .map_err(|e| parse_err(line_no, format!("bad value for `{key}`: {e}")))?,
        );
    }
    match (p, d) {
        (Some(p), Some(d)) => GroupParams::new(p, d as usize).map_err(|e| parse_err(line_no, e.to_string())),
        _ => Err(parse_err(line_no, "header must be `p=<p> d=<d>`")),
    }
}

pub fn parse_set(text: &str) -> Result<PointSet> {
    let mut params = None;
    let mut vectors = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(g) = params else {
            params = Some(parse_header(line_no, line)?);
            continue;
        };
        let coords = line
            .split(',')
            .map(|c| {
                let c = c.trim();
                let x: u32 = c
                    .parse()
                    .map_err(|e| parse_err(line_no, format!("bad residue `{c}`: {e}")))?;
                if x >= g.p() {
                    return Err(parse_err(line_no, format!("residue {x} not in [0, {})", g.p())));
                }
                Ok(x)
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != g.d() {
            return Err(parse_err(
                line_no,
                format!("expected {} coordinates, got {}", g.d(), coords.len()),
            ));
        }
        let v = GroupVector::new(g, coords).map_err(|e| parse_err(line_no, e.to_string()))?;
        vectors.push((line_no, v));
    }
    let g = params.ok_or_else(|| parse_err(text.lines().count().max(1), "missing `p=<p> d=<d>` header"))?;
    let mut seen = std::collections::BTreeSet::new();
    for (line_no, v) in &vectors {
        if !seen.insert(v) {
            return Err(parse_err(*line_no, format!("duplicate vector ({v})")));
        }
    }
    PointSet::new(g, vectors.into_iter().map(|(_, v)| v))
}

pub fn format_set(set: &PointSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", set.params());
    for v in set {
        let _ = writeln!(out, "{v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let text = "# plane\np=2 d=4\n0,0,0,0\n\n# second\n1, 0,0,0\n";
        let s = parse_set(text).unwrap();
        assert_eq!(s.params(), GroupParams::new(2, 4).unwrap());
        assert_eq!(s.len(), 2);
        assert_eq!(parse_set(&format_set(&s)).unwrap(), s);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_set("p=3 d=2\n0,1\n0,3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_set("p=3 d=2\n0,1\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_set("p=3 d=2\n0,1\n\n0,1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = parse_set("p=4 d=2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(parse_set("# nothing\n").is_err());
        assert!(parse_set("q=3 d=2\n").is_err());
    }

    #[test]
    fn empty_body_is_empty_set() {
        let s = parse_set("p=5 d=1\n").unwrap();
        assert!(s.is_empty());
    }
}
