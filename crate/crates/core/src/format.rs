//! Text formats: the native json-edgelist and import of graph6.
//!
//! json-edgelist is `{"n": <int>, "edges": [[u, v], ...]}` with 0-based
//! vertices; the edge order defines edge-ids. graph6 follows McKay's format
//! and only describes simple graphs, so exporting a multigraph fails.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Multigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    JsonEdgeList,
    Graph6,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" | "json-edgelist" => Ok(Format::JsonEdgeList),
            "graph6" | "g6" => Ok(Format::Graph6),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("graph6 cannot encode parallel edges")]
    Graph6MultiEdgeUnsupported,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeList {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub fn parse(text: &str, format: Format) -> Result<Multigraph, FormatError> {
    match format {
        Format::JsonEdgeList => parse_json(text),
        Format::Graph6 => parse_graph6(text),
    }
}

pub fn serialize(g: &Multigraph, format: Format) -> Result<String, FormatError> {
    match format {
        Format::JsonEdgeList => Ok(to_json(g)),
        Format::Graph6 => to_graph6(g),
    }
}

/// Byte offset of a 1-based (line, column) position reported by serde_json.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len();
    }
    text.len()
}

pub fn parse_json(text: &str) -> Result<Multigraph, FormatError> {
    let list: EdgeList = serde_json::from_str(text).map_err(|e| FormatError::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let edges = list.edges.into_iter().map(|[u, v]| (u, v)).collect();
    Ok(Multigraph::new(list.n, edges)?)
}

/// Canonical compact json-edgelist text.
pub fn to_json(g: &Multigraph) -> String {
    let list = EdgeList {
        n: g.n(),
        edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
    };
    serde_json::to_string(&list).expect("edge lists always serialize")
}

pub fn to_json_value(g: &Multigraph) -> serde_json::Value {
    serde_json::json!({
        "n": g.n(),
        "edges": g.edges().iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>(),
    })
}

const GRAPH6_HEADER: &str = ">>graph6<<";

pub fn parse_graph6(text: &str) -> Result<Multigraph, FormatError> {
    let trimmed_start = text.len() - text.trim_start().len();
    let mut body = text.trim();
    let mut base = trimmed_start;
    if let Some(rest) = body.strip_prefix(GRAPH6_HEADER) {
        body = rest;
        base += GRAPH6_HEADER.len();
    }
    let bytes = body.as_bytes();
    let err = |offset: usize, message: &str| FormatError::Parse {
        offset: base + offset,
        message: message.to_string(),
    };
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(i, "byte outside the graph6 range 63..=126"));
        }
    }
    if bytes.is_empty() {
        return Err(err(0, "empty graph6 string"));
    }
    let (n, mut pos) = if bytes[0] != 126 {
        (usize::from(bytes[0] - 63), 1)
    } else if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(err(bytes.len(), "truncated 18-bit vertex count"));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63));
        (n, 4)
    } else {
        if bytes.len() < 8 {
            return Err(err(bytes.len(), "truncated 36-bit vertex count"));
        }
        let n = bytes[2..8]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63));
        (n, 8)
    };
    let bits_needed = n * n.saturating_sub(1) / 2;
    let chars_needed = bits_needed.div_ceil(6);
    if bytes.len() - pos < chars_needed {
        return Err(err(bytes.len(), "truncated adjacency data"));
    }
    if bytes.len() - pos > chars_needed {
        return Err(err(pos + chars_needed, "trailing bytes after adjacency data"));
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let chunk = bytes[pos + bit / 6] - 63;
            if chunk & (1 << (5 - bit % 6)) != 0 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    pos += chars_needed;
    debug_assert_eq!(pos, bytes.len());
    Ok(Multigraph::new(n, edges)?)
}

pub fn to_graph6(g: &Multigraph) -> Result<String, FormatError> {
    if !g.is_simple() {
        return Err(FormatError::Graph6MultiEdgeUnsupported);
    }
    let n = g.n();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258_048 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut adj = vec![false; n * n];
    for &(u, v) in g.edges() {
        adj[u * n + v] = true;
        adj[v * n + u] = true;
    }
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            chunk = (chunk << 1) | u8::from(adj[i * n + j]);
            filled += 1;
            if filled == 6 {
                out.push(chunk + 63);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((chunk << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}
