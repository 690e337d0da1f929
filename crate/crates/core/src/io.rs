//! Text formats: `TRN1` tournaments, `DGR1` digraphs and `STW1` step tournamentons.
//!
//! `TRN1`: a line `n`, then `n` rows of `n` characters over `0`, `1`, `-`;
//! character `j` of row `i` is `1` iff `i → j`, `-` on the diagonal.
//!
//! `DGR1`: a line `n m`, then `m` lines `u v`.
//!
//! `STW1`: a JSON object with `m`, `weights` (strings `"p/q"`), `blocks`
//! (`m × m`, strings or numbers) and an optional `mode`.

use serde_json::{json, Value};

use crate::digraph::{Digraph, Tournament};
use crate::error::{Error, ParseError, Result};
use crate::scalar::{Mode, Scalar};
use crate::tournamenton::StepTournamenton;

/// Non-empty lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_count(line: usize, token: Option<&str>, what: &str) -> Result<usize, ParseError> {
    let token = token.ok_or_else(|| ParseError::at(line, format!("missing {what}")))?;
    token.parse().map_err(|_| ParseError::at(line, format!("bad {what} `{token}`")))
}

pub fn parse_trn(text: &str) -> Result<Tournament, ParseError> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or_else(|| ParseError::new("empty input"))?;
    let n = parse_count(first, Some(header), "vertex count")?;
    if n == 0 {
        return Err(ParseError::at(first, "a tournament needs at least one vertex"));
    }
    let mut rows: Vec<(usize, Vec<u8>)> = Vec::with_capacity(n);
    for (no, line) in lines {
        if rows.len() == n {
            return Err(ParseError::at(no, "unexpected extra line"));
        }
        let row = line.as_bytes().to_vec();
        if row.len() != n {
            return Err(ParseError::at(no, format!("expected {n} characters, found {}", row.len())));
        }
        let i = rows.len();
        for (j, &c) in row.iter().enumerate() {
            let ok = if i == j { c == b'-' } else { c == b'0' || c == b'1' };
            if !ok {
                return Err(ParseError::at(no, format!("bad character `{}` in column {j}", c as char)));
            }
        }
        rows.push((no, row));
    }
    if rows.len() != n {
        return Err(ParseError::new(format!("expected {n} rows, found {}", rows.len())));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rows[i].1[j] == rows[j].1[i] {
                return Err(ParseError::at(
                    rows[j].0,
                    format!("entries ({i},{j}) and ({j},{i}) are not complementary"),
                ));
            }
        }
    }
    Ok(Tournament::from_fn(n, |i, j| rows[i].1[j] == b'1'))
}

pub fn write_trn(t: &Tournament) -> String {
    let n = t.order();
    let mut out = format!("{n}\n");
    for i in 0..n {
        for j in 0..n {
            out.push(if i == j {
                '-'
            } else if t.beats(i, j) {
                '1'
            } else {
                '0'
            });
        }
        out.push('\n');
    }
    out
}

pub fn parse_dgr(text: &str) -> Result<Digraph> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or_else(|| ParseError::new("empty input"))?;
    let mut tokens = header.split_whitespace();
    let n = parse_count(first, tokens.next(), "vertex count")?;
    let m = parse_count(first, tokens.next(), "edge count")?;
    if tokens.next().is_some() {
        return Err(ParseError::at(first, "header must be `n m`").into());
    }
    let mut edges = Vec::with_capacity(m);
    for (no, line) in lines {
        if edges.len() == m {
            return Err(ParseError::at(no, "unexpected extra line").into());
        }
        let mut tokens = line.split_whitespace();
        let u = parse_count(no, tokens.next(), "tail")?;
        let v = parse_count(no, tokens.next(), "head")?;
        if tokens.next().is_some() {
            return Err(ParseError::at(no, "edge line must be `u v`").into());
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(ParseError::new(format!("expected {m} edges, found {}", edges.len())).into());
    }
    Digraph::new(n, edges)
}

pub fn write_dgr(h: &Digraph) -> String {
    let mut out = format!("{} {}\n", h.order(), h.edge_count());
    for &(u, v) in h.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

fn scalar_of<S: Scalar>(v: &Value, field: &str) -> Result<S, ParseError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(ParseError::new(format!("{field}: expected a number or string, found {other}"))),
    };
    S::parse_value(&text).map_err(|e| ParseError::new(format!("{field}: {}", e.message)))
}

/// Reads an `STW1` document in the arithmetic of `S`; a declared `mode`
/// that differs from `S` is rejected.
pub fn parse_stw<S: Scalar>(text: &str) -> Result<StepTournamenton<S>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ParseError::at(e.line(), e.to_string()))?;
    let obj = doc.as_object().ok_or_else(|| ParseError::new("STW1 document must be a JSON object"))?;
    if let Some(mode) = obj.get("mode") {
        let found: Mode = mode
            .as_str()
            .ok_or_else(|| ParseError::new("mode must be a string"))?
            .parse()?;
        if found != S::MODE {
            return Err(Error::ModeMismatch { expected: S::MODE, found });
        }
    }
    let m = obj
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| ParseError::new("missing or invalid `m`"))? as usize;
    let weights = obj
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::new("missing `weights` array"))?;
    let blocks = obj
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::new("missing `blocks` array"))?;
    if weights.len() != m || blocks.len() != m {
        return Err(ParseError::new(format!("`weights` and `blocks` must have {m} entries")).into());
    }
    let weights = weights
        .iter()
        .enumerate()
        .map(|(i, v)| scalar_of(v, &format!("weight {i}")))
        .collect::<Result<Vec<S>, _>>()?;
    let mut rows = Vec::with_capacity(m);
    for (i, row) in blocks.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == m)
            .ok_or_else(|| ParseError::new(format!("block row {i} must have {m} entries")))?;
        rows.push(
            row.iter()
                .enumerate()
                .map(|(j, v)| scalar_of(v, &format!("block ({i}, {j})")))
                .collect::<Result<Vec<S>, _>>()?,
        );
    }
    StepTournamenton::new(weights, rows)
}

pub fn write_stw<S: Scalar>(w: &StepTournamenton<S>) -> String {
    let strings = |v: &[S]| v.iter().map(|x| Value::String(x.to_string())).collect::<Vec<_>>();
    let doc = json!({
        "format": "STW1",
        "mode": S::MODE.to_string(),
        "m": w.parts(),
        "weights": strings(w.weights()),
        "blocks": w.block_rows().iter().map(|r| strings(r)).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use num_rational::BigRational;

    #[test]
    fn trn_round_trip() {
        let t = carousel(5).unwrap();
        assert_eq!(parse_trn(&write_trn(&t)).unwrap(), t);
        assert!(write_trn(&transitive(3)).starts_with("3\n-11\n0-1\n00-\n"));
    }

    #[test]
    fn trn_rejects_bad_input() {
        let err = parse_trn("2\n-1\n1-\n").unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(parse_trn("2\n-1\n").is_err());
        assert!(parse_trn("2\n11\n0-\n").is_err());
        assert!(parse_trn("x\n").is_err());
    }

    #[test]
    fn dgr_round_trip() {
        let h = b_graph(2).unwrap();
        assert_eq!(parse_dgr(&write_dgr(&h)).unwrap(), h);
        assert!(parse_dgr("2 2\n0 1\n1 0\n").is_err());
        assert!(parse_dgr("2 1\n0 5\n").is_err());
    }

    #[test]
    fn stw_round_trip_and_validation() {
        let w = StepTournamenton::<BigRational>::from_tournament(&cyclic_triangle());
        assert_eq!(parse_stw::<BigRational>(&write_stw(&w)).unwrap(), w);
        let f = w.to_float();
        assert_eq!(parse_stw::<f64>(&write_stw(&f)).unwrap(), f);
        assert!(matches!(parse_stw::<f64>(&write_stw(&w)), Err(Error::ModeMismatch { .. })));
        let bad = r#"{"m":2,"weights":["1/2","1/2"],"blocks":[["1/2","0.7"],["0.4","1/2"]]}"#;
        let msg = parse_stw::<BigRational>(bad).unwrap_err().to_string();
        assert!(msg.contains("(0, 1)"), "{msg}");
        let decimal = r#"{"m":2,"weights":["1/2","1/2"],"blocks":[[0.5,0.9],[0.1,0.5]]}"#;
        let w = parse_stw::<BigRational>(decimal).unwrap();
        assert_eq!(w.block(0, 1), &BigRational::new(9.into(), 10.into()));
    }
}
