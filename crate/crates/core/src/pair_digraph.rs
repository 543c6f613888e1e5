//! The pair digraph: ordered vertex pairs with the ordering-implication arcs,
//! its strong components, and the coupling between reversed components.
//!
//! A pair (u,v) stands for the decision "u before v". The two arc rules say
//! which decisions force which others:
//!
//! * R1: (u,v) -> (u',v)  when uu' is an edge, u'v is not, and the colors of
//!   u' and v are adjacent in the pattern;
//! * R2: (u,v) -> (u,v')  when vv' is an edge, uv is not, and the colors of
//!   u and v are adjacent in the pattern.
//!
//! Both are instances of one fact: if the forbidden triple a < b < c (with ac
//! an edge, bc a non-edge, colors of b and c pattern-adjacent) is to be
//! avoided, then a before b forces c before b, and b before c forces b after
//! a. Reversing every pair of an arc yields the reverse arc, so the digraph
//! is skew-symmetric and its strong components come in coupled mirror pairs.

use std::collections::BinaryHeap;
use std::fmt::Write as _;

use crate::graph::{ColoredGraph, PatternGraph, Vertex};

/// Dense id of an ordered pair: `u * n + v`. Diagonal ids are never used.
pub type PairId = u32;

pub fn pair_id(u: Vertex, v: Vertex, n: usize) -> PairId {
    debug_assert!(u != v);
    u * n as u32 + v
}

pub fn pair_of(p: PairId, n: usize) -> (Vertex, Vertex) {
    (p / n as u32, p % n as u32)
}

/// Id of the reversed pair.
pub fn reverse_id(p: PairId, n: usize) -> PairId {
    let (u, v) = pair_of(p, n);
    pair_id(v, u, n)
}

/// Out-neighbors of the pair (u,v) computed directly from the rules, without
/// consulting any stored arc lists. Sorted by pair id.
pub fn arcs_from(g: &ColoredGraph, h: &PatternGraph, u: Vertex, v: Vertex) -> Vec<PairId> {
    let n = g.n();
    let mut out = Vec::new();
    // R1: move the first coordinate along an edge of G
    for &u2 in g.neighbors(u) {
        if u2 != v && !g.has_edge(u2, v) && h.allows(g.color(u2), g.color(v)) {
            out.push(pair_id(u2, v, n));
        }
    }
    // R2: move the second coordinate along an edge of G
    if !g.has_edge(u, v) && h.allows(g.color(u), g.color(v)) {
        for &v2 in g.neighbors(v) {
            if v2 != u {
                out.push(pair_id(u, v2, n));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub struct PairDigraph {
    n: usize,
    /// pid -> sorted out-neighbor pids; diagonal entries stay empty.
    out: Vec<Vec<PairId>>,
    /// pid -> strong-component id (u32::MAX on the diagonal).
    comp: Vec<u32>,
    /// component id -> member pids, ascending.
    members: Vec<Vec<PairId>>,
    /// component id -> id of the component of the reversed pairs.
    couple: Vec<u32>,
    n_arcs: usize,
}

impl PairDigraph {
    /// Builds the digraph and its strong components. Component ids follow a
    /// reverse topological order of the component DAG (sinks first), ties
    /// broken by the smallest contained pair.
    pub fn build(g: &ColoredGraph, h: &PatternGraph) -> Self {
        let n = g.n();
        let np = n * n;
        let mut out = vec![Vec::new(); np];
        let mut n_arcs = 0;
        for u in 0..n as Vertex {
            for v in 0..n as Vertex {
                if u != v {
                    let a = arcs_from(g, h, u, v);
                    n_arcs += a.len();
                    out[pair_id(u, v, n) as usize] = a;
                }
            }
        }
        let (comp, members) = strong_components(n, &out);
        let mut couple = vec![u32::MAX; members.len()];
        for (id, mem) in members.iter().enumerate() {
            couple[id] = comp[reverse_id(mem[0], n) as usize];
        }
        PairDigraph {
            n,
            out,
            comp,
            members,
            couple,
            n_arcs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_arcs(&self) -> usize {
        self.n_arcs
    }

    pub fn out_arcs(&self, p: PairId) -> &[PairId] {
        &self.out[p as usize]
    }

    pub fn comp_of(&self, p: PairId) -> u32 {
        self.comp[p as usize]
    }

    pub fn n_components(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self, comp: u32) -> &[PairId] {
        &self.members[comp as usize]
    }

    pub fn couple(&self, comp: u32) -> u32 {
        self.couple[comp as usize]
    }

    pub fn is_trivial(&self, comp: u32) -> bool {
        self.members[comp as usize].len() == 1
    }

    /// First self-coupled component (one containing some pair and its
    /// reverse), if any. Such a component is a length-2 circuit in any
    /// selection, so the instance must be rejected.
    pub fn self_coupled(&self) -> Option<u32> {
        (0..self.members.len() as u32).find(|&s| self.couple(s) == s)
    }

    /// All pairs reachable from `seeds` (inclusive), ascending.
    pub fn reach_closure(&self, seeds: &[PairId]) -> Vec<PairId> {
        let mut seen = vec![false; self.n * self.n];
        let mut stack: Vec<PairId> = Vec::new();
        for &s in seeds {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
        while let Some(p) = stack.pop() {
            for &q in self.out_arcs(p) {
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    stack.push(q);
                }
            }
        }
        (0..(self.n * self.n) as PairId)
            .filter(|&p| seen[p as usize])
            .collect()
    }

    /// Shortest arc path from any seed to `target`, as a pid sequence
    /// starting at a seed and ending at `target`. None when unreachable.
    pub fn shortest_path(&self, seeds: &[PairId], target: PairId) -> Option<Vec<PairId>> {
        let mut parent = vec![u32::MAX; self.n * self.n];
        let mut seen = vec![false; self.n * self.n];
        let mut queue = std::collections::VecDeque::new();
        for &s in seeds {
            if !seen[s as usize] {
                seen[s as usize] = true;
                queue.push_back(s);
            }
        }
        while let Some(p) = queue.pop_front() {
            if p == target {
                let mut path = vec![p];
                let mut cur = p;
                while parent[cur as usize] != u32::MAX {
                    cur = parent[cur as usize];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &q in self.out_arcs(p) {
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    parent[q as usize] = p;
                    queue.push_back(q);
                }
            }
        }
        None
    }

    /// Debug dump: every arc, then every component with its couple.
    pub fn dump(&self) -> String {
        let n = self.n;
        let mut s = String::new();
        for p in 0..(n * n) as PairId {
            let (u, v) = pair_of(p, n);
            for &q in &self.out[p as usize] {
                let (x, y) = pair_of(q, n);
                let _ = writeln!(s, "({},{}) -> ({},{})", u, v, x, y);
            }
        }
        for (id, mem) in self.members.iter().enumerate() {
            let pairs = mem
                .iter()
                .map(|&p| {
                    let (u, v) = pair_of(p, n);
                    format!("({},{})", u, v)
                })
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(s, "S{}: {{{}}} couple=S{}", id, pairs, self.couple[id]);
        }
        s
    }
}

/// Iterative Tarjan over the pair ids in ascending order, then a renumbering
/// pass: Kahn's algorithm on the reversed component DAG with a min-heap keyed
/// by smallest member pair, so ids are reverse-topological with the stated
/// tie-break.
fn strong_components(n: usize, out: &[Vec<PairId>]) -> (Vec<u32>, Vec<Vec<PairId>>) {
    let np = n * n;
    const NONE: u32 = u32::MAX;
    let mut index = vec![NONE; np];
    let mut low = vec![0u32; np];
    let mut on_stack = vec![false; np];
    let mut comp = vec![NONE; np];
    let mut stack: Vec<PairId> = Vec::new();
    let mut raw: Vec<Vec<PairId>> = Vec::new();
    let mut next_index = 0u32;

    // explicit DFS frames: (pid, next out-arc position)
    let mut frames: Vec<(PairId, usize)> = Vec::new();
    for u in 0..n as Vertex {
        for v in 0..n as Vertex {
            if u == v {
                continue;
            }
            let root = pair_id(u, v, n);
            if index[root as usize] != NONE {
                continue;
            }
            frames.push((root, 0));
            index[root as usize] = next_index;
            low[root as usize] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root as usize] = true;
            while let Some(&mut (p, ref mut i)) = frames.last_mut() {
                if *i < out[p as usize].len() {
                    let q = out[p as usize][*i];
                    *i += 1;
                    if index[q as usize] == NONE {
                        index[q as usize] = next_index;
                        low[q as usize] = next_index;
                        next_index += 1;
                        stack.push(q);
                        on_stack[q as usize] = true;
                        frames.push((q, 0));
                    } else if on_stack[q as usize] {
                        low[p as usize] = low[p as usize].min(index[q as usize]);
                    }
                } else {
                    frames.pop();
                    if let Some(&mut (parent, _)) = frames.last_mut() {
                        low[parent as usize] = low[parent as usize].min(low[p as usize]);
                    }
                    if low[p as usize] == index[p as usize] {
                        let id = raw.len() as u32;
                        let mut mem = Vec::new();
                        loop {
                            let q = stack.pop().unwrap();
                            on_stack[q as usize] = false;
                            comp[q as usize] = id;
                            mem.push(q);
                            if q == p {
                                break;
                            }
                        }
                        mem.sort_unstable();
                        raw.push(mem);
                    }
                }
            }
        }
    }

    // renumber: sinks first, ties by smallest member pair
    let nc = raw.len();
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); nc];
    for p in 0..np as PairId {
        if comp[p as usize] == NONE {
            continue;
        }
        let a = comp[p as usize];
        for &q in &out[p as usize] {
            let b = comp[q as usize];
            if a != b {
                preds[b as usize].push(a);
            }
        }
    }
    for ps in &mut preds {
        ps.sort_unstable();
        ps.dedup();
    }
    let mut succ_count = vec![0usize; nc]; // distinct successors per component
    for ps in &preds {
        for &a in ps {
            succ_count[a as usize] += 1;
        }
    }
    // min-heap by smallest member pair (BinaryHeap is a max-heap, use Reverse)
    use std::cmp::Reverse;
    let mut heap: BinaryHeap<Reverse<(PairId, u32)>> = BinaryHeap::new();
    for a in 0..nc as u32 {
        if succ_count[a as usize] == 0 {
            heap.push(Reverse((raw[a as usize][0], a)));
        }
    }
    let mut order = Vec::with_capacity(nc); // new id -> raw id
    while let Some(Reverse((_, a))) = heap.pop() {
        order.push(a);
        for &pr in &preds[a as usize] {
            succ_count[pr as usize] -= 1;
            if succ_count[pr as usize] == 0 {
                heap.push(Reverse((raw[pr as usize][0], pr)));
            }
        }
    }
    debug_assert_eq!(order.len(), nc);
    let mut renum = vec![0u32; nc]; // raw id -> new id
    for (new_id, &a) in order.iter().enumerate() {
        renum[a as usize] = new_id as u32;
    }
    for c in comp.iter_mut() {
        if *c != NONE {
            *c = renum[*c as usize];
        }
    }
    let mut members = vec![Vec::new(); nc];
    for (new_id, &a) in order.iter().enumerate() {
        members[new_id] = std::mem::take(&mut raw[a as usize]);
    }
    (comp, members)
}
