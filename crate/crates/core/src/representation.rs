//! Orderings, interval representations, and the verifiers tying them to the
//! input graph.
//!
//! An ordering is good when no triple a < b < c has: ac an edge, bc a
//! non-edge, and the colors of b and c adjacent in the pattern. For a
//! complete pattern this single condition covers all three classical
//! forbidden triple shapes at once (same-color b,c; same-color a,c with the
//! extra ab edge; all colors distinct). Good orderings and interval
//! representations are interconvertible, and both directions are verified
//! rather than trusted.

use serde::Serialize;

use crate::graph::{ColoredGraph, PatternGraph, Vertex};

/// Closed interval per vertex, integer endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub l: i64,
    pub r: i64,
}

impl Interval {
    pub fn intersects(&self, other: &Interval) -> bool {
        self.l <= other.r && other.l <= self.r
    }
}

/// Forbidden triple found in an ordering: positions `a < b < c` with the
/// vertices at those positions violating the pattern condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternViolation {
    pub va: Vertex,
    pub vb: Vertex,
    pub vc: Vertex,
    /// Color relation within the triple: "same-color-bc", "same-color-ac",
    /// "same-color-ab", or "distinct".
    pub tag: &'static str,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OrderingError {
    #[error("sequence is not a permutation of the vertex set")]
    NotAPermutation,
    #[error("ordering contains forbidden triple ({}, {}, {})", .0.va, .0.vb, .0.vc)]
    Violation(PatternViolation),
}

fn classify(g: &ColoredGraph, va: Vertex, vb: Vertex, vc: Vertex) -> &'static str {
    let (ca, cb, cc) = (g.color(va), g.color(vb), g.color(vc));
    if cb == cc {
        "same-color-bc"
    } else if ca == cc {
        "same-color-ac"
    } else if ca == cb {
        "same-color-ab"
    } else {
        "distinct"
    }
}

fn check_permutation(g: &ColoredGraph, ordering: &[Vertex]) -> Result<(), OrderingError> {
    if ordering.len() != g.n() {
        return Err(OrderingError::NotAPermutation);
    }
    let mut seen = vec![false; g.n()];
    for &v in ordering {
        if v as usize >= g.n() || seen[v as usize] {
            return Err(OrderingError::NotAPermutation);
        }
        seen[v as usize] = true;
    }
    Ok(())
}

/// Ok iff no forbidden triple exists. The first violation in lexicographic
/// position order (a, b, c) is reported.
pub fn verify_ordering(
    g: &ColoredGraph,
    h: &PatternGraph,
    ordering: &[Vertex],
) -> Result<(), OrderingError> {
    check_permutation(g, ordering)?;
    let n = g.n();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (va, vb, vc) = (ordering[a], ordering[b], ordering[c]);
                if g.has_edge(va, vc) && !g.has_edge(vb, vc) && h.allows(g.color(vb), g.color(vc)) {
                    return Err(OrderingError::Violation(PatternViolation {
                        va,
                        vb,
                        vc,
                        tag: classify(g, va, vb, vc),
                    }));
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RepresentationError {
    #[error("ordering is not pattern-free, refusing to build intervals")]
    OrderingNotPatternFree(OrderingError),
    #[error("intervals disagree with the graph at pair ({0}, {1})")]
    Mismatch(Vertex, Vertex),
    #[error("interval of vertex {0} has l > r")]
    EmptyInterval(Vertex),
    #[error("representation has {got} intervals for {want} vertices")]
    WrongSize { got: usize, want: usize },
}

/// Intervals from a verified good ordering: vertex at position i (1-based)
/// gets right endpoint i and left endpoint the position of its earliest
/// earlier neighbor (or i when none).
pub fn ordering_to_intervals(
    g: &ColoredGraph,
    h: &PatternGraph,
    ordering: &[Vertex],
) -> Result<Vec<Interval>, RepresentationError> {
    verify_ordering(g, h, ordering).map_err(RepresentationError::OrderingNotPatternFree)?;
    let mut pos = vec![0usize; g.n()]; // vertex -> 1-based position
    for (i, &v) in ordering.iter().enumerate() {
        pos[v as usize] = i + 1;
    }
    let mut rep = vec![Interval { l: 0, r: 0 }; g.n()];
    for (i, &v) in ordering.iter().enumerate() {
        let r = (i + 1) as i64;
        let l = g
            .neighbors(v)
            .iter()
            .map(|&w| pos[w as usize] as i64)
            .filter(|&j| j < r)
            .min()
            .unwrap_or(r);
        rep[v as usize] = Interval { l, r };
    }
    Ok(rep)
}

/// Ok iff for every pattern-adjacent pair of vertices, adjacency in the
/// graph coincides with interval intersection. Pairs whose colors are not
/// pattern-adjacent are unconstrained. First mismatch in lexicographic
/// vertex order is reported.
pub fn verify_representation(
    g: &ColoredGraph,
    h: &PatternGraph,
    rep: &[Interval],
) -> Result<(), RepresentationError> {
    if rep.len() != g.n() {
        return Err(RepresentationError::WrongSize {
            got: rep.len(),
            want: g.n(),
        });
    }
    for (v, iv) in rep.iter().enumerate() {
        if iv.l > iv.r {
            return Err(RepresentationError::EmptyInterval(v as Vertex));
        }
    }
    for u in 0..g.n() as Vertex {
        for v in u + 1..g.n() as Vertex {
            if !h.allows(g.color(u), g.color(v)) {
                continue;
            }
            let meet = rep[u as usize].intersects(&rep[v as usize]);
            if meet != g.has_edge(u, v) {
                return Err(RepresentationError::Mismatch(u, v));
            }
        }
    }
    Ok(())
}

/// Ordering recovered from a verified representation: sort by (r, l), ties
/// by vertex id.
pub fn intervals_to_ordering(
    g: &ColoredGraph,
    h: &PatternGraph,
    rep: &[Interval],
) -> Result<Vec<Vertex>, RepresentationError> {
    verify_representation(g, h, rep)?;
    let mut order: Vec<Vertex> = (0..g.n() as Vertex).collect();
    order.sort_by_key(|&v| (rep[v as usize].r, rep[v as usize].l, v));
    Ok(order)
}
