//! Independent ground truth for testing: brute-force recognition by ordering
//! search, obstruction checkers, and small-instance enumeration.
//!
//! Nothing here shares code with the main pipeline beyond the graph type and
//! the ordering verifier's *definition* (re-stated locally as a prefix
//! check), so disagreements point at real bugs.

use crate::graph::{ColoredGraph, PatternGraph, Vertex};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("instance has {n} vertices, oracle bound is {bound}")]
pub struct InstanceTooLarge {
    pub n: usize,
    pub bound: usize,
}

pub const DEFAULT_ORDERING_BOUND: usize = 9;
pub const DEFAULT_EXOBICLIQUE_BOUND: usize = 16;

/// Brute-force recognition: backtracking over vertex orderings. Placing a
/// vertex at position c only ever completes triples whose rightmost member
/// is that vertex, so a prefix free of violations can be extended soundly —
/// pruning never cuts a good ordering.
pub fn brute_force_recognize(
    g: &ColoredGraph,
    h: &PatternGraph,
    bound: usize,
) -> Result<Option<Vec<Vertex>>, InstanceTooLarge> {
    if g.n() > bound {
        return Err(InstanceTooLarge { n: g.n(), bound });
    }
    let mut prefix = Vec::with_capacity(g.n());
    let mut used = vec![false; g.n()];
    if place_next(g, h, &mut prefix, &mut used) {
        Ok(Some(prefix))
    } else {
        Ok(None)
    }
}

fn place_next(
    g: &ColoredGraph,
    h: &PatternGraph,
    prefix: &mut Vec<Vertex>,
    used: &mut [bool],
) -> bool {
    if prefix.len() == g.n() {
        return true;
    }
    for vc in 0..g.n() as Vertex {
        if used[vc as usize] {
            continue;
        }
        if !closes_violation(g, h, prefix, vc) {
            used[vc as usize] = true;
            prefix.push(vc);
            if place_next(g, h, prefix, used) {
                return true;
            }
            prefix.pop();
            used[vc as usize] = false;
        }
    }
    false
}

/// Would appending `vc` create a forbidden triple (va, vb, vc) inside the
/// prefix?
fn closes_violation(g: &ColoredGraph, h: &PatternGraph, prefix: &[Vertex], vc: Vertex) -> bool {
    for a in 0..prefix.len() {
        let va = prefix[a];
        if !g.has_edge(va, vc) {
            continue;
        }
        for &vb in &prefix[a + 1..] {
            if !g.has_edge(vb, vc) && h.allows(g.color(vb), g.color(vc)) {
                return true;
            }
        }
    }
    false
}

/// Plain exhaustive search with a full verification at each leaf, for
/// validating the pruned search on tiny instances.
pub fn brute_force_recognize_naive(g: &ColoredGraph, h: &PatternGraph) -> Option<Vec<Vertex>> {
    let n = g.n();
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    permute(&mut order, 0, &mut |ord| {
        crate::representation::verify_ordering(g, h, ord).is_ok()
    })
}

fn permute<F: FnMut(&[Vertex]) -> bool>(
    order: &mut Vec<Vertex>,
    i: usize,
    accept: &mut F,
) -> Option<Vec<Vertex>> {
    if i == order.len() {
        return accept(order).then(|| order.clone());
    }
    for j in i..order.len() {
        order.swap(i, j);
        if let Some(found) = permute(order, i + 1, accept) {
            return Some(found);
        }
        order.swap(i, j);
    }
    None
}

/// Test whether (B1, W1) witnesses an exobiclique in the two-colored graph:
/// B1 ∪ W1 induces a biclique, three vertices of color 0 outside B1 have
/// pairwise inclusion-incomparable neighborhoods into W1, and three vertices
/// of color 1 outside W1 do the same into B1.
pub fn is_exobiclique(g: &ColoredGraph, b1: &[Vertex], w1: &[Vertex]) -> bool {
    if g.k() != 2 || b1.is_empty() || w1.is_empty() {
        return false;
    }
    if b1.iter().any(|&v| g.color(v) != 0) || w1.iter().any(|&v| g.color(v) != 1) {
        return false;
    }
    for &b in b1 {
        for &w in w1 {
            if !g.has_edge(b, w) {
                return false;
            }
        }
    }
    let outside_incomparable = |side_color: u32, inside: &[Vertex], target: &[Vertex]| {
        let outside: Vec<Vertex> = (0..g.n() as Vertex)
            .filter(|&v| g.color(v) == side_color && !inside.contains(&v))
            .collect();
        let nb = |v: Vertex| -> Vec<Vertex> {
            target
                .iter()
                .copied()
                .filter(|&t| g.has_edge(v, t))
                .collect()
        };
        let subset = |a: &[Vertex], b: &[Vertex]| a.iter().all(|x| b.contains(x));
        for i in 0..outside.len() {
            for j in i + 1..outside.len() {
                for l in j + 1..outside.len() {
                    let (x, y, z) = (nb(outside[i]), nb(outside[j]), nb(outside[l]));
                    if !subset(&x, &y)
                        && !subset(&y, &x)
                        && !subset(&x, &z)
                        && !subset(&z, &x)
                        && !subset(&y, &z)
                        && !subset(&z, &y)
                    {
                        return true;
                    }
                }
            }
        }
        false
    };
    outside_incomparable(0, b1, w1) && outside_incomparable(1, w1, b1)
}

/// Two sides of an exobiclique witness.
pub type Biclique = (Vec<Vertex>, Vec<Vertex>);

/// Exhaustive search for an exobiclique witness over all nonempty subsets of
/// the two color classes.
pub fn find_exobiclique(
    g: &ColoredGraph,
    bound: usize,
) -> Result<Option<Biclique>, InstanceTooLarge> {
    if g.n() > bound {
        return Err(InstanceTooLarge { n: g.n(), bound });
    }
    if g.k() != 2 {
        return Ok(None);
    }
    let blacks: Vec<Vertex> = (0..g.n() as Vertex).filter(|&v| g.color(v) == 0).collect();
    let whites: Vec<Vertex> = (0..g.n() as Vertex).filter(|&v| g.color(v) == 1).collect();
    for bm in 1u32..(1 << blacks.len()) {
        let b1: Vec<Vertex> = blacks
            .iter()
            .enumerate()
            .filter(|&(i, _)| bm >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        for wm in 1u32..(1 << whites.len()) {
            let w1: Vec<Vertex> = whites
                .iter()
                .enumerate()
                .filter(|&(i, _)| wm >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            if is_exobiclique(g, &b1, &w1) {
                return Ok(Some((b1, w1)));
            }
        }
    }
    Ok(None)
}

/// Is `g` (colors respected, classes of sizes 3/3/1/1) the 4-color
/// obstruction: a matching from three color-0 vertices onto three color-1
/// vertices, with the color-1 side completely joined to the two singleton
/// vertices?
pub fn matches_fig7_obstruction(g: &ColoredGraph) -> bool {
    if g.k() != 4 || g.n() != 8 || g.m() != 9 {
        return false;
    }
    let class =
        |c: u32| -> Vec<Vertex> { (0..g.n() as Vertex).filter(|&v| g.color(v) == c).collect() };
    let (c0, c1, c2, c3) = (class(0), class(1), class(2), class(3));
    let mut sizes = [c0.len(), c1.len(), c2.len(), c3.len()];
    sizes.sort_unstable();
    if sizes != [1, 1, 3, 3] {
        return false;
    }
    // identify the roles: two triples and two singletons, in either color
    // assignment consistent with the sizes
    let classes = [c0, c1, c2, c3];
    let triples: Vec<&Vec<Vertex>> = classes.iter().filter(|c| c.len() == 3).collect();
    let singles: Vec<Vertex> = classes
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| c[0])
        .collect();
    let (ta, tb) = (triples[0], triples[1]);
    let (u, v) = (singles[0], singles[1]);
    // one triple plays the pendant side, the other the hub side
    for (pend, hub) in [(ta, tb), (tb, ta)] {
        // hub side: each hub vertex adjacent to both singletons
        if !hub.iter().all(|&d| g.has_edge(d, u) && g.has_edge(d, v)) {
            continue;
        }
        if g.has_edge(u, v) {
            continue;
        }
        // pendant side: a perfect matching pend -> hub and nothing else
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        'perm: for p in perms {
            for i in 0..3 {
                let a = pend[i];
                let d = hub[p[i]];
                if !g.has_edge(a, d) {
                    continue 'perm;
                }
                // pendant vertices must have degree exactly 1
                if g.neighbors(a).len() != 1 {
                    continue 'perm;
                }
            }
            return true;
        }
    }
    false
}

/// All connected colored graphs with 1..=n vertices and colorings using at
/// most k colors, modulo a cheap symmetry filter. Duplicates are tolerated;
/// omissions are not: the filter only drops a graph when swapping two
/// adjacent same-colored vertices of the (sorted) coloring yields a strictly
/// smaller edge list, which is a relabeling of the same instance.
pub fn enumerate_instances(n_max: usize, k: usize) -> Vec<ColoredGraph> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for coloring in sorted_colorings(n, k) {
            let pairs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
                .flat_map(|u| (u + 1..n as Vertex).map(move |v| (u, v)))
                .filter(|&(u, v)| coloring[u as usize] != coloring[v as usize])
                .collect();
            let np = pairs.len();
            if np >= 64 {
                // cannot happen for the intended n <= 6 but keep it explicit
                panic!("enumeration asked for {} candidate edges", np);
            }
            for mask in 0u64..(1 << np) {
                let edges: Vec<(Vertex, Vertex)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                if !is_local_min(&coloring, &edges, &pairs) {
                    continue;
                }
                let g = ColoredGraph::new(k, coloring.clone(), &edges).unwrap();
                if g.connected_components().len() == 1 {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// Nondecreasing colorings of n vertices using colors 0..k (every used color
/// prefix-contiguous), i.e. compositions of n into at most k parts.
fn sorted_colorings(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    fn rec(n: usize, k: usize, parts: &mut Vec<usize>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            let mut coloring = Vec::new();
            for (c, &sz) in parts.iter().enumerate() {
                coloring.extend(std::iter::repeat_n(c as u32, sz));
            }
            out.push(coloring);
            return;
        }
        if parts.len() == k {
            return;
        }
        for take in 1..=n {
            parts.push(take);
            rec(n - take, k, parts, out);
            parts.pop();
        }
    }
    rec(n, k, &mut parts, &mut out);
    out
}

/// Keep a graph only if no swap of two same-colored vertices yields a
/// lexicographically smaller edge mask. Swapping same-colored vertices is a
/// color-preserving relabeling, so every equivalence class keeps at least
/// its minimal member.
fn is_local_min(coloring: &[u32], edges: &[(Vertex, Vertex)], pairs: &[(Vertex, Vertex)]) -> bool {
    let n = coloring.len();
    let has = |es: &[(Vertex, Vertex)], u: Vertex, v: Vertex| {
        let key = if u < v { (u, v) } else { (v, u) };
        es.contains(&key)
    };
    let mask_of = |es: &[(Vertex, Vertex)]| -> u64 {
        let mut m = 0u64;
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if has(es, u, v) {
                m |= 1 << i;
            }
        }
        m
    };
    let base = mask_of(edges);
    for a in 0..n as Vertex {
        for b in a + 1..n as Vertex {
            if coloring[a as usize] != coloring[b as usize] {
                continue;
            }
            let swapped: Vec<(Vertex, Vertex)> = edges
                .iter()
                .map(|&(u, v)| {
                    let f = |x: Vertex| {
                        if x == a {
                            b
                        } else if x == b {
                            a
                        } else {
                            x
                        }
                    };
                    let (x, y) = (f(u), f(v));
                    if x < y {
                        (x, y)
                    } else {
                        (y, x)
                    }
                })
                .collect();
            if mask_of(&swapped) < base {
                return false;
            }
        }
    }
    true
}
