//! Verdicts and evidence kinds on the shipped fixture files, plus pinned
//! regression instances.

use ikg::graph::{ColoredGraph, PatternGraph};
use ikg::oracle::{brute_force_recognize, find_exobiclique};
use ikg::recognizer::{recognize, Evidence};

fn load(name: &str) -> (ColoredGraph, PatternGraph) {
    let path = format!(
        "{}/../../fixtures/{}.graph",
        env!("CARGO_MANIFEST_DIR"),
        name
    );
    let text = std::fs::read_to_string(path).unwrap();
    ikg::parse_graph(&text).unwrap()
}

#[test]
fn fig5_rejects_at_stage1_and_contains_exobiclique() {
    let (g, h) = load("fig5");
    assert_eq!(g.n(), 12);
    assert_eq!(g.m(), 15);
    let out = recognize(&g, &h);
    assert!(!out.accepted());
    let ev = out.evidence.unwrap();
    match &ev {
        Evidence::Stage1BothFail {
            circuit,
            couple_circuit,
            ..
        } => {
            assert_eq!(circuit.len(), 4);
            assert_eq!(couple_circuit.len(), 4);
        }
        other => panic!("expected stage1_both_fail, got {:?}", other),
    }
    // a stage-1 rejection with a length-4 circuit promises an exobiclique
    let witness = find_exobiclique(&g, 16).unwrap();
    let (b1, w1) = witness.expect("fig5 must contain an exobiclique");
    assert!(ikg::oracle::is_exobiclique(&g, &b1, &w1));
    // the caption's witness also validates: B1 = {d,e,f}, W1 = {1,2,3};
    // with our ids the biclique is {9,10,11} x {0,1,2}, but is_exobiclique
    // takes (color0, color1) sides, so B1 = {0,1,2}, W1 = {9,10,11}
    assert!(ikg::oracle::is_exobiclique(&g, &[0, 1, 2], &[9, 10, 11]));
}

#[test]
fn fig6_rejects() {
    let (g, h) = load("fig6");
    assert_eq!(g.n(), 19);
    assert_eq!(g.m(), 33);
    let out = recognize(&g, &h);
    assert!(!out.accepted());
    assert_eq!(out.evidence.unwrap().kind(), "stage1_both_fail");
}

#[test]
fn fig7_rejects_and_matches_shape() {
    let (g, h) = load("fig7");
    let out = recognize(&g, &h);
    assert!(!out.accepted());
    assert_eq!(out.evidence.unwrap().kind(), "self_coupled");
    assert!(!brute_force_recognize(&g, &h, 9).unwrap().is_some());
    assert!(ikg::oracle::matches_fig7_obstruction(&g));
    // removing one hub edge breaks the shape
    let g2 = ColoredGraph::new(
        4,
        g.colors().to_vec(),
        &g.edges()
            .into_iter()
            .filter(|&e| e != (5, 7))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    assert!(!ikg::oracle::matches_fig7_obstruction(&g2));
}

#[test]
fn c6_rejects() {
    let (g, h) = load("c6");
    let out = recognize(&g, &h);
    assert!(!out.accepted());
    assert_eq!(out.evidence.unwrap().kind(), "self_coupled");
    assert!(!brute_force_recognize(&g, &h, 9).unwrap().is_some());
    assert!(find_exobiclique(&g, 16).unwrap().is_none());
}

#[test]
fn small_positive_fixtures_accept() {
    for name in ["p4", "k22", "k3"] {
        let (g, h) = load(name);
        let out = recognize(&g, &h);
        assert!(out.accepted(), "{} should accept", name);
        assert!(brute_force_recognize(&g, &h, 9).unwrap().is_some());
    }
}

#[test]
fn all_trees_up_to_8_accept() {
    // every tree on <= 8 vertices, built from parent sequences, properly
    // 2-colored by depth parity
    fn rec(n: usize, parents: &mut Vec<usize>, count: &mut usize) {
        if parents.len() == n - 1 {
            let mut depth = vec![0usize; n];
            let edges: Vec<(u32, u32)> = parents
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    depth[i + 1] = depth[p] + 1;
                    (p as u32, (i + 1) as u32)
                })
                .collect();
            let colors: Vec<u32> = depth.iter().map(|&d| (d % 2) as u32).collect();
            let g = ColoredGraph::new(2, colors, &edges).unwrap();
            let h = PatternGraph::complete(2);
            let out = recognize(&g, &h);
            assert!(
                out.accepted(),
                "tree rejected: {}",
                ikg::render_graph(&g, &h)
            );
            *count += 1;
            return;
        }
        let v = parents.len() + 1;
        for p in 0..v {
            parents.push(p);
            rec(n, parents, count);
            parents.pop();
        }
    }
    let mut count = 0;
    for n in 2..=8 {
        rec(n, &mut Vec::new(), &mut count);
    }
    assert_eq!(
        count,
        (2..=8usize)
            .map(|n| (1..n).product::<usize>())
            .sum::<usize>()
    );
}

/// Instance that activates the dictator machinery: Stage 1 succeeds, the
/// envelope closes a circuit naming one dictator, and the rebuilt state
/// still has a circuit, so the verdict is a stage-3 rejection. Cross-checked
/// against the brute-force oracle.
#[test]
fn dictator_stage_regression() {
    let h = PatternGraph::with_edges(5, &[(0, 2), (0, 4), (1, 2), (1, 3), (2, 3), (2, 4)]);
    let g = ColoredGraph::new(
        5,
        vec![0, 1, 2, 3, 4, 0, 1, 2],
        &[
            (0, 2),
            (0, 4),
            (0, 7),
            (1, 2),
            (1, 3),
            (1, 7),
            (2, 3),
            (2, 5),
            (2, 6),
            (3, 7),
            (4, 5),
            (4, 7),
            (6, 7),
        ],
    )
    .unwrap();
    g.validate_against(&h).unwrap();
    let out = recognize(&g, &h);
    assert_eq!(out.stats.dictators, 1);
    assert!(!out.accepted());
    assert_eq!(out.evidence.as_ref().unwrap().kind(), "stage3_circuit");
    assert!(brute_force_recognize(&g, &h, 9).unwrap().is_none());
}
