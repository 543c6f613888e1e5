//! Seeded random instance generation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{ColoredGraph, PatternGraph, Vertex};

/// Random colored graph: colors assigned round-robin (`v % k`), then every
/// pattern-allowed pair kept with probability `p`. The pair scan is
/// lexicographic, so a given seed always yields the same graph.
pub fn gen_random(n: usize, k: usize, p: f64, seed: u64) -> ColoredGraph {
    gen_random_h(n, &PatternGraph::complete(k), p, seed)
}

/// Same, but against an arbitrary pattern graph.
pub fn gen_random_h(n: usize, h: &PatternGraph, p: f64, seed: u64) -> ColoredGraph {
    assert!((0.0..=1.0).contains(&p), "edge probability out of range");
    let k = h.k();
    assert!(k >= 1 || n == 0);
    let colors: Vec<u32> = (0..n).map(|v| (v % k) as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if !h.allows(colors[u as usize], colors[v as usize]) {
                continue;
            }
            // draw for every allowed pair so edge sets at different p but the
            // same seed stay comparable
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    ColoredGraph::new(k, colors, &edges).expect("generated edges are valid")
}
