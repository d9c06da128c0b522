//! The vertex-set text format.
//!
//! ```text
//! clforms-vertexset v1 q=2 n=2 l=2
//! # one vertex per line: the l*n entries of A, row-major
//! 0 0 0 0
//! 1 0 0 1
//! ```

use std::fmt::Write as _;

use crate::attenuated::{SpaceParams, Vertex};
use crate::error::{Error, Result};
use crate::fqlinalg::FqMatrix;
use crate::gf::Elem;
use crate::vertexset::VertexSet;

const MAGIC: &str = "clforms-vertexset";
const VERSION: &str = "v1";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses `key=value` fields of the header into `(q, n, l)`.
fn parse_header(line_no: usize, line: &str) -> Result<(u32, usize, usize)> {
    let mut tok = line.split_whitespace();
    if tok.next() != Some(MAGIC) {
        return Err(parse_err(line_no, format!("expected header starting with `{MAGIC}`")));
    }
    if tok.next() != Some(VERSION) {
        return Err(parse_err(line_no, format!("unsupported version, expected `{VERSION}`")));
    }
    let (mut q, mut n, mut l) = (None, None, None);
    for t in tok {
        let (k, v) = t.split_once('=').ok_or_else(|| parse_err(line_no, format!("bad header field `{t}`")))?;
        let v: u64 = v.parse().map_err(|_| parse_err(line_no, format!("bad number in `{t}`")))?;
        let slot = match k {
            "q" => &mut q,
            "n" => &mut n,
            "l" => &mut l,
            _ => return Err(parse_err(line_no, format!("unknown header field `{k}`"))),
        };
        if slot.replace(v).is_some() {
            return Err(parse_err(line_no, format!("repeated header field `{k}`")));
        }
    }
    match (q, n, l) {
        (Some(q), Some(n), Some(l)) if q <= u32::MAX as u64 => Ok((q as u32, n as usize, l as usize)),
        _ => Err(parse_err(line_no, "header needs q, n and l")),
    }
}

/// Parses a vertex-set file. Line numbers in errors are 1-based.
pub fn parse_vertex_set(text: &str) -> Result<VertexSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, s)| !s.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (q, n, l) = parse_header(hl, header)?;
    let sp = SpaceParams::new(q, n, l).map_err(|e| parse_err(hl, e.to_string()))?;
    sp.check_cap(sp.num_vertices_u128()).map_err(|e| parse_err(hl, e.to_string()))?;
    let mut set = VertexSet::empty(&sp);
    for (ln, line) in lines {
        let vals: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse::<u64>().map_err(|_| parse_err(ln, format!("bad entry `{t}`"))))
            .collect::<Result<_>>()?;
        if vals.len() != n * l {
            return Err(parse_err(ln, format!("expected {} entries, got {}", n * l, vals.len())));
        }
        if let Some(v) = vals.iter().find(|&&v| v >= q as u64) {
            return Err(parse_err(ln, format!("entry {v} is not in [0, {q})")));
        }
        let a = FqMatrix::new(l, n, vals.into_iter().map(|v| v as Elem).collect());
        let idx = sp.vertex_index(&Vertex { a });
        if set.contains(idx) {
            return Err(parse_err(ln, "duplicate vertex"));
        }
        set.insert(idx);
    }
    Ok(set)
}

/// Writes `set` with vertices in canonical order.
pub fn write_vertex_set(set: &VertexSet) -> String {
    let sp = set.params();
    let mut out = format!("{MAGIC} {VERSION} q={} n={} l={}\n", sp.q(), sp.n(), sp.l());
    for i in set.members() {
        let v = sp.vertex(i);
        let row: Vec<String> = v.a.data().iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
