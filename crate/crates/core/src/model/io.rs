//! The `geograph v1` text format.
//!
//! ```text
//! geograph v1 d=<d> t=<t> n=<n> p=<p> r=<r|none> seed=<u64>
//! <n lines of d space-separated coordinates>
//! <one line per edge: u v, with u < v>
//! ```
//!
//! Every line ends in LF. Floats are printed in shortest round-trip form,
//! so parsing a serialized graph restores its coordinates bit for bit.

use std::io::Write;
use std::sync::Arc;

use thiserror::Error;

use crate::model::{Adjacency, EmbeddedGraph, PointCloud};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("line {line}: malformed point: {reason}")]
    BadPoint { line: usize, reason: String },
    #[error("line {line}: coordinate {axis} of vertex {vertex} is {value}, outside [0, t]")]
    CoordinateOutOfRange { line: usize, vertex: usize, axis: usize, value: String },
    #[error("line {line}: malformed edge: {reason}")]
    BadEdge { line: usize, reason: String },
    #[error("line {line}: vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: non-symmetric adjacency: edge listed as {u} {v}, expected u < v")]
    NonSymmetric { line: usize, u: usize, v: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

pub fn write_graph<S: Scalar, W: Write>(graph: &EmbeddedGraph<S>, out: &mut W) -> std::io::Result<()> {
    let cloud = graph.cloud();
    let radius = graph.radius().map_or_else(|| "none".to_string(), |r| r.to_string());
    writeln!(
        out,
        "geograph v1 d={} t={} n={} p={} r={} seed={}",
        cloud.dim(),
        cloud.scale(),
        cloud.len(),
        graph.edge_probability(),
        radius,
        graph.seed()
    )?;
    for point in cloud.points() {
        let mut first = true;
        for c in point {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{c}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn serialize_graph<S: Scalar>(graph: &EmbeddedGraph<S>) -> Vec<u8> {
    let mut buf = Vec::new();
    write_graph(graph, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

struct Header<S> {
    d: usize,
    t: S,
    n: usize,
    p: f64,
    r: Option<S>,
    seed: u64,
}

fn parse_header<S: Scalar>(line: &str) -> Result<Header<S>, ParseError> {
    let bad = |msg: String| ParseError::MalformedHeader(msg);
    let mut tokens = line.split(' ');
    if tokens.next() != Some("geograph") || tokens.next() != Some("v1") {
        return Err(bad("expected `geograph v1`".into()));
    }
    let mut field = |key: &str| -> Result<&str, ParseError> {
        let token = tokens.next().ok_or_else(|| bad(format!("missing `{key}=`")))?;
        token
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| bad(format!("expected `{key}=`, found `{token}`")))
    };
    let number = |key: &str, raw: &str| bad(format!("invalid value `{raw}` for {key}"));
    let d_raw = field("d")?;
    let d: usize = d_raw.parse().map_err(|_| number("d", d_raw))?;
    let t_raw = field("t")?;
    let t: S = t_raw.parse().map_err(|_| number("t", t_raw))?;
    let n_raw = field("n")?;
    let n: usize = n_raw.parse().map_err(|_| number("n", n_raw))?;
    let p_raw = field("p")?;
    let p: f64 = p_raw.parse().map_err(|_| number("p", p_raw))?;
    let r_raw = field("r")?;
    let r = match r_raw {
        "none" => None,
        raw => Some(raw.parse::<S>().map_err(|_| number("r", raw))?),
    };
    let seed_raw = field("seed")?;
    let seed: u64 = seed_raw.parse().map_err(|_| number("seed", seed_raw))?;
    if let Some(extra) = tokens.next() {
        return Err(bad(format!("unexpected trailing field `{extra}`")));
    }
    if d == 0 {
        return Err(bad("d must be at least 1".into()));
    }
    if !(t > S::zero() && t.is_finite()) {
        return Err(bad(format!("t must be positive, got {t}")));
    }
    Ok(Header { d, t, n, p, r, seed })
}

pub fn parse_graph<S: Scalar>(bytes: &[u8]) -> Result<EmbeddedGraph<S>, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError::InvalidUtf8)?;
    let body = match text.strip_suffix('\n') {
        Some(body) => body,
        // Either empty or the last line lost its terminator.
        None => return Err(ParseError::UnexpectedEof),
    };
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header_line) = lines.next().ok_or(ParseError::UnexpectedEof)?;
    let header: Header<S> = parse_header(header_line)?;

    let mut coords = Vec::with_capacity(header.n * header.d);
    for vertex in 0..header.n {
        let (line, text) = lines.next().ok_or(ParseError::UnexpectedEof)?;
        let mut count = 0;
        for (axis, token) in text.split(' ').enumerate() {
            let value: S = token
                .parse()
                .map_err(|_| ParseError::BadPoint { line, reason: format!("`{token}` is not a number") })?;
            if !(value >= S::zero() && value <= header.t) {
                return Err(ParseError::CoordinateOutOfRange { line, vertex, axis, value: token.to_string() });
            }
            coords.push(value);
            count += 1;
        }
        if count != header.d {
            return Err(ParseError::BadPoint {
                line,
                reason: format!("expected {} coordinates, found {count}", header.d),
            });
        }
    }

    let mut upper: Vec<Vec<u32>> = vec![Vec::new(); header.n];
    for (line, text) in lines {
        let mut fields = text.split(' ');
        let mut endpoint = || -> Result<usize, ParseError> {
            let token = fields
                .next()
                .filter(|t| !t.is_empty())
                .ok_or(ParseError::BadEdge { line, reason: "expected two vertex indices".into() })?;
            let vertex: usize = token
                .parse()
                .map_err(|_| ParseError::BadEdge { line, reason: format!("`{token}` is not a vertex index") })?;
            if vertex >= header.n {
                return Err(ParseError::VertexOutOfRange { line, vertex, n: header.n });
            }
            Ok(vertex)
        };
        let u = endpoint()?;
        let v = endpoint()?;
        if fields.next().is_some() {
            return Err(ParseError::BadEdge { line, reason: "trailing fields".into() });
        }
        if u == v {
            return Err(ParseError::SelfLoop { line, vertex: u });
        }
        if u > v {
            return Err(ParseError::NonSymmetric { line, u, v });
        }
        let row = &mut upper[u];
        match row.binary_search(&(v as u32)) {
            Ok(_) => return Err(ParseError::DuplicateEdge { line, u, v }),
            Err(at) => row.insert(at, v as u32),
        }
    }

    let invalid = |e: crate::Error| ParseError::InvalidGraph(e.to_string());
    let cloud = PointCloud::new(header.d, header.t, coords).map_err(invalid)?;
    EmbeddedGraph::new(Arc::new(cloud), Adjacency::from_upper(upper), header.p, header.r, header.seed).map_err(invalid)
}
