//! Colored (partitioned) graphs and pattern graphs.
//!
//! A `ColoredGraph` is a simple undirected graph whose vertices carry a color
//! in `0..k`. A `PatternGraph` over the colors says which color pairs are
//! allowed to be adjacent at all; the complete pattern reproduces the plain
//! k-partite setting.

use std::collections::BTreeSet;

pub type Vertex = u32;

/// Loop-free graph on the color set. Two vertices of an instance may only be
/// adjacent when their colors are adjacent here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGraph {
    k: usize,
    adj: Vec<bool>, // k*k, symmetric, false on the diagonal
}

impl PatternGraph {
    /// Complete pattern on `k` colors: all distinct colors adjacent.
    pub fn complete(k: usize) -> Self {
        let mut adj = vec![false; k * k];
        for a in 0..k {
            for b in 0..k {
                adj[a * k + b] = a != b;
            }
        }
        PatternGraph { k, adj }
    }

    /// Pattern with exactly the given color edges.
    pub fn with_edges(k: usize, edges: &[(u32, u32)]) -> Self {
        let mut adj = vec![false; k * k];
        for &(a, b) in edges {
            let (a, b) = (a as usize, b as usize);
            assert!(a < k && b < k && a != b, "invalid pattern edge");
            adj[a * k + b] = true;
            adj[b * k + a] = true;
        }
        PatternGraph { k, adj }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// True when vertices of colors `a` and `b` may be adjacent.
    pub fn allows(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize * self.k + b as usize]
    }

    /// True when this is the complete pattern on its colors.
    pub fn is_complete(&self) -> bool {
        (0..self.k as u32).all(|a| (0..self.k as u32).all(|b| a == b || self.allows(a, b)))
    }

    /// Color edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for a in 0..self.k as u32 {
            for b in a + 1..self.k as u32 {
                if self.allows(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge {0}-{1} references an unknown vertex")]
    UnknownVertex(Vertex, Vertex),
    #[error("vertex {0} has color {1} but only {2} colors are declared")]
    ColorOutOfRange(Vertex, u32, usize),
}

/// Simple graph with a total coloring onto `0..k`.
///
/// Vertices are dense integers `0..n`. Adjacency is stored both as sorted
/// neighbor lists and as a bit matrix for constant-time membership tests.
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    n: usize,
    k: usize,
    color: Vec<u32>,
    adj: Vec<Vec<Vertex>>,
    matrix: Vec<u64>,
    labels: Vec<Option<String>>,
    m: usize,
}

impl PartialEq for ColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.k == other.k
            && self.color == other.color
            && self.adj == other.adj
            && self.labels == other.labels
    }
}
impl Eq for ColoredGraph {}

impl ColoredGraph {
    pub fn new(k: usize, colors: Vec<u32>, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let n = colors.len();
        for (v, &c) in colors.iter().enumerate() {
            if c as usize >= k {
                return Err(GraphError::ColorOutOfRange(v as Vertex, c, k));
            }
        }
        let mut g = ColoredGraph {
            n,
            k,
            color: colors,
            adj: vec![Vec::new(); n],
            matrix: vec![0u64; (n * n).div_ceil(64)],
            labels: vec![None; n],
            m: 0,
        };
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if u as usize >= self.n || v as usize >= self.n {
            return Err(GraphError::UnknownVertex(u, v));
        }
        if self.has_edge(u, v) {
            return Ok(()); // duplicate edge lines are idempotent
        }
        let (ui, vi) = (u as usize, v as usize);
        self.matrix[(ui * self.n + vi) / 64] |= 1 << ((ui * self.n + vi) % 64);
        self.matrix[(vi * self.n + ui) / 64] |= 1 << ((vi * self.n + ui) % 64);
        self.adj[ui].push(v);
        self.adj[vi].push(u);
        self.m += 1;
        Ok(())
    }

    pub fn set_label(&mut self, v: Vertex, label: String) {
        self.labels[v as usize] = Some(label);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn color(&self, v: Vertex) -> u32 {
        self.color[v as usize]
    }

    pub fn colors(&self) -> &[u32] {
        &self.color
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.labels[v as usize].as_deref()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let idx = u as usize * self.n + v as usize;
        self.matrix[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// Edges `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n as Vertex {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Checks every edge against the pattern graph. Returns the first
    /// offending edge, lexicographically.
    pub fn validate_against(&self, h: &PatternGraph) -> Result<(), (Vertex, Vertex)> {
        for (u, v) in self.edges() {
            if !h.allows(self.color(u), self.color(v)) {
                return Err((u, v));
            }
        }
        Ok(())
    }

    /// Maximal connected vertex sets, each in ascending vertex order, the
    /// components ordered by their smallest member.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start as Vertex];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &w in self.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
            comps.push(comp.into_iter().collect());
        }
        comps
    }

    /// Subgraph induced by `verts` (must be sorted ascending). Vertex `i` of
    /// the result is `verts[i]`; colors are preserved.
    pub fn induced(&self, verts: &[Vertex]) -> ColoredGraph {
        let mut local = vec![u32::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let colors = verts.iter().map(|&v| self.color(v)).collect();
        let mut edges = Vec::new();
        for &v in verts {
            for &w in self.neighbors(v) {
                if v < w && local[w as usize] != u32::MAX {
                    edges.push((local[v as usize], local[w as usize]));
                }
            }
        }
        let mut g = ColoredGraph::new(self.k, colors, &edges).expect("induced subgraph is valid");
        for (i, &v) in verts.iter().enumerate() {
            if let Some(l) = self.label(v) {
                g.set_label(i as Vertex, l.to_string());
            }
        }
        g
    }
}
