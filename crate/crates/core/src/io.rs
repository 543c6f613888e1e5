//! Text format for colored-graph instances.
//!
//! One record per line:
//! ```text
//! c <comment>           ignored
//! k <int>               optional color count
//! v <id> <color> [label]
//! e <u> <v>
//! h <color1> <color2>   optional pattern edges; none present => complete pattern
//! ```
//! Vertex ids must be the dense range `0..n` (any order of `v` lines). Errors
//! carry the 1-based line number of the offending record.

use std::collections::BTreeMap;

use crate::graph::{ColoredGraph, PatternGraph, Vertex};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed record: {text}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: duplicate vertex id {id}")]
    DuplicateVertex { line: usize, id: Vertex },
    #[error("line {line}: edge {u}-{v} references an unknown vertex")]
    UnknownVertex { line: usize, u: Vertex, v: Vertex },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: Vertex },
    #[error("line {line}: vertex {v} has color {color} but only {k} colors are declared")]
    ColorOutOfRange {
        line: usize,
        v: Vertex,
        color: u32,
        k: usize,
    },
    #[error("line {line}: edge {u}-{v} joins two vertices of color {color}")]
    SameColorEdge {
        line: usize,
        u: Vertex,
        v: Vertex,
        color: u32,
    },
    #[error("line {line}: edge {u}-{v} joins colors {cu} and {cv}, not adjacent in the pattern")]
    PatternViolatingEdge {
        line: usize,
        u: Vertex,
        v: Vertex,
        cu: u32,
        cv: u32,
    },
    #[error("vertex ids are not the dense range 0..{n}: missing id {missing}")]
    NonDenseIds { n: usize, missing: Vertex },
}

/// Parses an instance. When no `h` line appears the pattern defaults to the
/// complete graph on the colors, i.e. plain interval k-graph mode.
pub fn parse_graph(text: &str) -> Result<(ColoredGraph, PatternGraph), ParseError> {
    let mut declared_k: Option<usize> = None;
    // id -> (color, label, line)
    let mut verts: BTreeMap<Vertex, (u32, Option<String>, usize)> = BTreeMap::new();
    let mut edges: Vec<(Vertex, Vertex, usize)> = Vec::new();
    let mut h_edges: Vec<(u32, u32)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let rec = raw.trim();
        if rec.is_empty() || rec == "c" || rec.starts_with("c ") {
            continue;
        }
        let malformed = || ParseError::Malformed {
            line,
            text: raw.to_string(),
        };
        let mut fields = rec.split_whitespace();
        match fields.next() {
            Some("k") => {
                let k = fields
                    .next()
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(malformed)?;
                declared_k = Some(k);
            }
            Some("v") => {
                let id: Vertex = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(malformed)?;
                let color: u32 = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(malformed)?;
                let label = fields.next().map(|s| s.to_string());
                if verts.insert(id, (color, label, line)).is_some() {
                    return Err(ParseError::DuplicateVertex { line, id });
                }
            }
            Some("e") => {
                let u: Vertex = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(malformed)?;
                let v: Vertex = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(malformed)?;
                edges.push((u, v, line));
            }
            Some("h") => {
                let a: u32 = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(malformed)?;
                let b: u32 = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(malformed)?;
                h_edges.push((a, b));
            }
            _ => return Err(malformed()),
        }
    }

    let n = verts.len();
    for (expect, &id) in verts.keys().enumerate() {
        if id as usize != expect {
            return Err(ParseError::NonDenseIds {
                n,
                missing: expect as Vertex,
            });
        }
    }

    let max_color = verts
        .values()
        .map(|&(c, _, _)| c as usize + 1)
        .max()
        .unwrap_or(0);
    // a declared k smaller than an observed color is an error at that v line
    if let Some(dk) = declared_k {
        for (&id, &(c, _, vline)) in &verts {
            if c as usize >= dk {
                return Err(ParseError::ColorOutOfRange {
                    line: vline,
                    v: id,
                    color: c,
                    k: dk,
                });
            }
        }
    }
    let k = declared_k.unwrap_or(max_color);

    let pattern = if h_edges.is_empty() {
        PatternGraph::complete(k)
    } else {
        PatternGraph::with_edges(k, &h_edges)
    };
    let kgraph_mode = h_edges.is_empty();

    let colors: Vec<u32> = verts.values().map(|&(c, _, _)| c).collect();
    let mut g = ColoredGraph::new(k, colors, &[]).expect("colors already checked");
    for (&id, (_, label, _)) in &verts {
        if let Some(l) = label {
            g.set_label(id, l.clone());
        }
    }

    let mut plain_edges = Vec::with_capacity(edges.len());
    for &(u, v, line) in &edges {
        if u == v {
            return Err(ParseError::SelfLoop { line, v: u });
        }
        if u as usize >= n || v as usize >= n {
            return Err(ParseError::UnknownVertex { line, u, v });
        }
        let (cu, cv) = (g.color(u), g.color(v));
        if cu == cv && kgraph_mode {
            return Err(ParseError::SameColorEdge {
                line,
                u,
                v,
                color: cu,
            });
        }
        if !pattern.allows(cu, cv) {
            return Err(ParseError::PatternViolatingEdge { line, u, v, cu, cv });
        }
        plain_edges.push((u, v));
    }

    let mut g = ColoredGraph::new(k, g.colors().to_vec(), &plain_edges).expect("validated above");
    for (&id, (_, label, _)) in &verts {
        if let Some(l) = label {
            g.set_label(id, l.clone());
        }
    }
    Ok((g, pattern))
}

/// Renders an instance back to the text format: `k`, `v` lines ascending,
/// `e` lines lexicographic, `h` lines lexicographic (omitted for a complete
/// pattern). `parse_graph(render_graph(g, h)) == (g, h)`.
pub fn render_graph(g: &ColoredGraph, h: &PatternGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("k {}\n", g.k()));
    for v in 0..g.n() as Vertex {
        match g.label(v) {
            Some(l) => out.push_str(&format!("v {} {} {}\n", v, g.color(v), l)),
            None => out.push_str(&format!("v {} {}\n", v, g.color(v))),
        }
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u, v));
    }
    if !h.is_complete() {
        for (a, b) in h.edges() {
            out.push_str(&format!("h {} {}\n", a, b));
        }
    }
    out
}
