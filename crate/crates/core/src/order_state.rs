//! The growing set D of decided pairs, kept acyclic at all times.
//!
//! A decided pair (u,v) is the commitment "u before v". The state supports:
//!
//! * atomic batch insertion with a circuit witness on failure (`try_add`);
//! * incremental envelope computation (`envelope_step`): the closure of D
//!   under transitivity and reachability in the pair digraph, emitted one
//!   pair at a time in a deterministic order, with level labels and a
//!   provenance record per pair;
//! * attribution of every pair to the strong component whose choice caused
//!   it (`dic_of`), memoized at insertion time by following provenance.
//!
//! Acyclicity is maintained by keeping a topological order of the vertices
//! and repairing it locally on each arc insertion (two-way bounded search);
//! an insertion that cannot be repaired yields a shortest circuit witness.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::graph::{ColoredGraph, Vertex};
use crate::pair_digraph::{pair_id, pair_of, reverse_id, PairDigraph, PairId};

/// Cyclic sequence of pairs (x0,x1),(x1,x2),...,(xr,x0). All but possibly
/// the last are decided; the last may be the candidate whose insertion
/// closed the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub pairs: Vec<PairId>,
}

impl Circuit {
    pub fn render(&self, n: usize) -> String {
        self.pairs
            .iter()
            .map(|&p| {
                let (u, v) = pair_of(p, n);
                format!("({},{})", u, v)
            })
            .collect::<Vec<_>>()
            .join("->")
    }
}

/// How a pair entered (or tried to enter) the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prov {
    /// Not decided.
    None,
    /// Inserted as part of a component's reachability closure.
    Closure,
    /// Reachability-implied by a decided pair via one arc of the digraph.
    Reached { from: PairId },
    /// Transitivity on left=(x,w) and right=(w,y).
    Transitive { left: PairId, right: PairId },
}

/// One step of the envelope drain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnvStep {
    /// Fixpoint reached: D is closed under reachability and transitivity.
    Done,
    Added {
        pair: PairId,
        level: u32,
        prov: Prov,
    },
    /// Inserting `pair` would close `circuit`; the pair was not inserted.
    /// `dic` is the component responsible for the pair.
    Circuit {
        pair: PairId,
        circuit: Circuit,
        dic: u32,
    },
}

const NO_STAMP: u32 = u32::MAX;

/// Join candidate: insert `tgt` by transitivity on `left`,`right`, ordered
/// by the stamps the witnesses had when discovered.
type JoinEntry = Reverse<(u32, u32, PairId, PairId, PairId)>; // (sl, sr, tgt, left, right)

#[derive(Clone)]
pub struct OrderState {
    n: usize,
    color: Vec<u32>,
    decided: Vec<bool>,
    level: Vec<u32>,
    stamp: Vec<u32>,
    dic: Vec<u32>,
    prov: Vec<Prov>,
    next_stamp: u32,
    /// vertex -> decided in/out neighbors, in insertion order
    preds: Vec<Vec<Vertex>>,
    succs: Vec<Vec<Vertex>>,
    /// topological order of vertices: pos[v] = slot, vert[slot] = v
    pos: Vec<usize>,
    vert: Vec<Vertex>,
    /// pairs withheld after closing a circuit during an envelope drain
    withheld: Vec<bool>,
    /// reachability propagations pending, processed before any join
    reach_queue: VecDeque<(PairId, PairId)>, // (from, target)
    join_heap: BinaryHeap<JoinEntry>,
    n_decided: usize,
}

impl OrderState {
    pub fn new(g: &ColoredGraph) -> Self {
        let n = g.n();
        OrderState {
            n,
            color: g.colors().to_vec(),
            decided: vec![false; n * n],
            level: vec![0; n * n],
            stamp: vec![NO_STAMP; n * n],
            dic: vec![u32::MAX; n * n],
            prov: vec![Prov::None; n * n],
            next_stamp: 0,
            preds: vec![Vec::new(); n],
            succs: vec![Vec::new(); n],
            pos: (0..n).collect(),
            vert: (0..n as Vertex).collect(),
            withheld: vec![false; n * n],
            reach_queue: VecDeque::new(),
            join_heap: BinaryHeap::new(),
            n_decided: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_decided(&self, p: PairId) -> bool {
        self.decided[p as usize]
    }

    pub fn n_decided(&self) -> usize {
        self.n_decided
    }

    pub fn level_of(&self, p: PairId) -> u32 {
        self.level[p as usize]
    }

    pub fn stamp_of(&self, p: PairId) -> u32 {
        self.stamp[p as usize]
    }

    pub fn prov_of(&self, p: PairId) -> Prov {
        self.prov[p as usize]
    }

    /// Component responsible for a decided pair.
    pub fn dic_of(&self, p: PairId) -> u32 {
        self.dic[p as usize]
    }

    pub fn is_withheld(&self, p: PairId) -> bool {
        self.withheld[p as usize]
    }

    /// Decided pairs in insertion (stamp) order.
    pub fn decided_pairs(&self) -> Vec<PairId> {
        let mut ps: Vec<PairId> = (0..(self.n * self.n) as PairId)
            .filter(|&p| self.decided[p as usize])
            .collect();
        ps.sort_by_key(|&p| self.stamp[p as usize]);
        ps
    }

    /// Vertices in the current topological order of the decided relation.
    pub fn topo_order(&self) -> Vec<Vertex> {
        self.vert.clone()
    }

    /// Atomically insert every pair of `pairs` (already-decided members are
    /// skipped) at level 0 with the given component attribution. On a
    /// circuit nothing is inserted and a witness is returned.
    pub fn try_add(&mut self, pairs: &[PairId], dic: u32) -> Result<Vec<PairId>, Circuit> {
        let mut inserted = Vec::new();
        for &p in pairs {
            if self.decided[p as usize] {
                continue;
            }
            match self.insert_pair(p, 0, dic, Prov::Closure) {
                Ok(()) => inserted.push(p),
                Err(circuit) => {
                    self.undo(&inserted);
                    return Err(circuit);
                }
            }
        }
        Ok(inserted)
    }

    /// Roll back pairs inserted by a failed batch, most recent first, and
    /// rebuild the topological order. Only valid for the trailing inserts.
    fn undo(&mut self, inserted: &[PairId]) {
        for &p in inserted.iter().rev() {
            let (u, v) = pair_of(p, self.n);
            debug_assert_eq!(self.succs[u as usize].last(), Some(&v));
            debug_assert_eq!(self.preds[v as usize].last(), Some(&u));
            self.succs[u as usize].pop();
            self.preds[v as usize].pop();
            self.decided[p as usize] = false;
            self.level[p as usize] = 0;
            self.stamp[p as usize] = NO_STAMP;
            self.dic[p as usize] = u32::MAX;
            self.prov[p as usize] = Prov::None;
            self.n_decided -= 1;
        }
        self.next_stamp -= inserted.len() as u32;
        self.rebuild_topo();
        // stale envelope entries are filtered on pop by the validity checks
    }

    /// One envelope step: drain pending reachability propagations first,
    /// then the smallest-stamp transitive join. Emitted pairs are inserted;
    /// a circuit leaves the offending pair out and reports the component
    /// responsible for it.
    pub fn envelope_step(&mut self, pd: &PairDigraph) -> EnvStep {
        while let Some((from, tgt)) = self.reach_queue.pop_front() {
            if !self.decided[from as usize]
                || self.decided[tgt as usize]
                || self.withheld[tgt as usize]
            {
                continue;
            }
            let level = self.level[from as usize];
            let dic = self.dic[from as usize];
            let prov = Prov::Reached { from };
            return match self.insert_pair_with_arcs(tgt, level, dic, prov, pd) {
                Ok(()) => EnvStep::Added {
                    pair: tgt,
                    level,
                    prov,
                },
                Err(circuit) => EnvStep::Circuit {
                    pair: tgt,
                    circuit,
                    dic,
                },
            };
        }
        while let Some(&Reverse((sl, sr, tgt, left, right))) = self.join_heap.peek() {
            self.join_heap.pop();
            if !self.decided[left as usize]
                || !self.decided[right as usize]
                || self.stamp[left as usize] != sl
                || self.stamp[right as usize] != sr
                || self.decided[tgt as usize]
                || self.withheld[tgt as usize]
            {
                continue;
            }
            let level = self.level[left as usize].max(self.level[right as usize]) + 1;
            // attribution rule: same-colored endpoints follow the right
            // witness, differently-colored ones the left
            let (x, y) = pair_of(tgt, self.n);
            let dic = if self.color[x as usize] == self.color[y as usize] {
                self.dic[right as usize]
            } else {
                self.dic[left as usize]
            };
            let prov = Prov::Transitive { left, right };
            return match self.insert_pair_with_arcs(tgt, level, dic, prov, pd) {
                Ok(()) => EnvStep::Added {
                    pair: tgt,
                    level,
                    prov,
                },
                Err(circuit) => EnvStep::Circuit {
                    pair: tgt,
                    circuit,
                    dic,
                },
            };
        }
        EnvStep::Done
    }

    /// Permanently exclude a pair that closed a circuit during a drain.
    pub fn withhold(&mut self, p: PairId) {
        self.withheld[p as usize] = true;
    }

    /// Queue the reachability successors of every decided pair, so the next
    /// drain re-establishes closure under the digraph's arcs.
    pub fn seed_reachability(&mut self, pd: &PairDigraph) {
        for p in self.decided_pairs() {
            for &q in pd.out_arcs(p) {
                if !self.decided[q as usize] {
                    self.reach_queue.push_back((p, q));
                }
            }
        }
    }

    fn insert_pair_with_arcs(
        &mut self,
        p: PairId,
        level: u32,
        dic: u32,
        prov: Prov,
        pd: &PairDigraph,
    ) -> Result<(), Circuit> {
        self.insert_pair(p, level, dic, prov)?;
        for &q in pd.out_arcs(p) {
            if !self.decided[q as usize] {
                self.reach_queue.push_back((p, q));
            }
        }
        Ok(())
    }

    fn insert_pair(&mut self, p: PairId, level: u32, dic: u32, prov: Prov) -> Result<(), Circuit> {
        debug_assert!(!self.decided[p as usize]);
        let (u, v) = pair_of(p, self.n);
        if self.decided[reverse_id(p, self.n) as usize] {
            return Err(Circuit {
                pairs: vec![p, reverse_id(p, self.n)],
            });
        }
        if let Err(path) = self.order_arc(u, v) {
            // path runs v .. u along decided arcs; closing with (u,v) gives
            // the circuit (u,v),(v,x1),(x1,x2),...,(xr,u)
            let mut pairs = vec![p];
            for w in path.windows(2) {
                pairs.push(pair_id(w[0], w[1], self.n));
            }
            return Err(Circuit { pairs });
        }
        self.decided[p as usize] = true;
        self.level[p as usize] = level;
        self.stamp[p as usize] = self.next_stamp;
        self.next_stamp += 1;
        self.dic[p as usize] = dic;
        self.prov[p as usize] = prov;
        self.succs[u as usize].push(v);
        self.preds[v as usize].push(u);
        self.n_decided += 1;
        // discover transitive joins through the new pair
        let sp = self.stamp[p as usize];
        for i in 0..self.preds[u as usize].len() {
            let x = self.preds[u as usize][i];
            if x == v {
                continue;
            }
            let left = pair_id(x, u, self.n);
            let tgt = pair_id(x, v, self.n);
            if !self.decided[tgt as usize] && !self.withheld[tgt as usize] {
                self.join_heap
                    .push(Reverse((self.stamp[left as usize], sp, tgt, left, p)));
            }
        }
        for i in 0..self.succs[v as usize].len() {
            let y = self.succs[v as usize][i];
            if y == u {
                continue;
            }
            let right = pair_id(v, y, self.n);
            let tgt = pair_id(u, y, self.n);
            if !self.decided[tgt as usize] && !self.withheld[tgt as usize] {
                self.join_heap
                    .push(Reverse((sp, self.stamp[right as usize], tgt, p, right)));
            }
        }
        Ok(())
    }

    /// Insert arc u -> v into the maintained topological order. On success
    /// the order is repaired locally; on a cycle, nothing changes and the
    /// shortest decided-arc path from v to u is returned.
    fn order_arc(&mut self, u: Vertex, v: Vertex) -> Result<(), Vec<Vertex>> {
        if self.pos[u as usize] < self.pos[v as usize] {
            return Ok(());
        }
        let lb = self.pos[v as usize];
        let ub = self.pos[u as usize];
        // forward BFS from v, bounded by ub; finding u means a cycle
        let mut parent = vec![u32::MAX; self.n];
        let mut fwd = Vec::new();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen[v as usize] = true;
        queue.push_back(v);
        while let Some(w) = queue.pop_front() {
            fwd.push(w);
            for &x in &self.succs[w as usize] {
                if self.pos[x as usize] > ub || seen[x as usize] {
                    continue;
                }
                seen[x as usize] = true;
                parent[x as usize] = w;
                if x == u {
                    let mut path = vec![u];
                    let mut cur = u;
                    while parent[cur as usize] != u32::MAX {
                        cur = parent[cur as usize];
                        path.push(cur);
                    }
                    path.reverse(); // v .. u
                    return Err(path);
                }
                queue.push_back(x);
            }
        }
        // backward BFS from u, bounded below by lb
        let mut bwd = Vec::new();
        let mut seen_b = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen_b[u as usize] = true;
        queue.push_back(u);
        while let Some(w) = queue.pop_front() {
            bwd.push(w);
            for &x in &self.preds[w as usize] {
                if self.pos[x as usize] < lb || seen_b[x as usize] {
                    continue;
                }
                seen_b[x as usize] = true;
                queue.push_back(x);
            }
        }
        // reassign: the affected vertices keep their slot set, backward
        // region first (ending at u), forward region after (starting at v)
        bwd.sort_by_key(|&w| self.pos[w as usize]);
        fwd.sort_by_key(|&w| self.pos[w as usize]);
        let mut slots: Vec<usize> = bwd
            .iter()
            .chain(fwd.iter())
            .map(|&w| self.pos[w as usize])
            .collect();
        slots.sort_unstable();
        for (slot, &w) in slots.iter().zip(bwd.iter().chain(fwd.iter())) {
            self.pos[w as usize] = *slot;
            self.vert[*slot] = w;
        }
        Ok(())
    }

    fn rebuild_topo(&mut self) {
        let mut indeg: Vec<usize> = self.preds.iter().map(|p| p.len()).collect();
        let mut heap: BinaryHeap<Reverse<Vertex>> = (0..self.n as Vertex)
            .filter(|&v| indeg[v as usize] == 0)
            .map(Reverse)
            .collect();
        let mut slot = 0;
        while let Some(Reverse(v)) = heap.pop() {
            self.pos[v as usize] = slot;
            self.vert[slot] = v;
            slot += 1;
            for &w in &self.succs[v as usize] {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    heap.push(Reverse(w));
                }
            }
        }
        debug_assert_eq!(slot, self.n, "decided relation is cyclic after rollback");
    }

    /// Full-state snapshot for multi-step rollback (Stage 4 retries).
    pub fn checkpoint(&self) -> OrderState {
        self.clone()
    }

    pub fn restore(&mut self, saved: OrderState) {
        *self = saved;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ColoredGraph, PatternGraph};

    fn empty_pd(n: usize) -> (ColoredGraph, PairDigraph) {
        let colors = (0..n).map(|v| (v % 2) as u32).collect();
        let g = ColoredGraph::new(2, colors, &[]).unwrap();
        let pd = PairDigraph::build(&g, &PatternGraph::complete(2));
        (g, pd)
    }

    #[test]
    fn add_then_circuit() {
        let (g, _pd) = empty_pd(3);
        let n = g.n();
        let mut st = OrderState::new(&g);
        st.try_add(&[pair_id(0, 1, n)], 0).unwrap();
        st.try_add(&[pair_id(1, 2, n)], 1).unwrap();
        let err = st.try_add(&[pair_id(2, 0, n)], 2).unwrap_err();
        assert_eq!(
            err.pairs,
            vec![pair_id(2, 0, n), pair_id(0, 1, n), pair_id(1, 2, n)]
        );
        // state unchanged by the failure
        assert!(!st.is_decided(pair_id(2, 0, n)));
        assert_eq!(st.n_decided(), 2);
    }

    #[test]
    fn both_orientations_is_a_two_cycle() {
        let (g, _pd) = empty_pd(2);
        let n = g.n();
        let mut st = OrderState::new(&g);
        st.try_add(&[pair_id(0, 1, n)], 0).unwrap();
        let err = st.try_add(&[pair_id(1, 0, n)], 1).unwrap_err();
        assert_eq!(err.pairs, vec![pair_id(1, 0, n), pair_id(0, 1, n)]);
    }

    #[test]
    fn rollback_exactness() {
        let (g, _pd) = empty_pd(4);
        let n = g.n();
        let mut st = OrderState::new(&g);
        st.try_add(&[pair_id(0, 1, n), pair_id(1, 2, n)], 0)
            .unwrap();
        let before: Vec<_> = (0..(n * n) as PairId)
            .map(|p| {
                (
                    st.is_decided(p),
                    st.level_of(p),
                    st.stamp_of(p),
                    st.dic_of(p),
                )
            })
            .collect();
        // batch whose last member closes a circuit 0 -> 1 -> 2 -> 3 -> 0
        let err = st.try_add(&[pair_id(2, 3, n), pair_id(3, 0, n)], 1);
        assert!(err.is_err());
        let after: Vec<_> = (0..(n * n) as PairId)
            .map(|p| {
                (
                    st.is_decided(p),
                    st.level_of(p),
                    st.stamp_of(p),
                    st.dic_of(p),
                )
            })
            .collect();
        assert_eq!(before, after);
        // and the state still accepts consistent additions
        st.try_add(&[pair_id(2, 3, n)], 1).unwrap();
    }

    #[test]
    fn envelope_pure_transitivity() {
        let (g, pd) = empty_pd(3);
        let n = g.n();
        let mut st = OrderState::new(&g);
        st.try_add(&[pair_id(0, 1, n), pair_id(1, 2, n)], 0)
            .unwrap();
        match st.envelope_step(&pd) {
            EnvStep::Added { pair, level, prov } => {
                assert_eq!(pair, pair_id(0, 2, n));
                assert_eq!(level, 1);
                assert_eq!(
                    prov,
                    Prov::Transitive {
                        left: pair_id(0, 1, n),
                        right: pair_id(1, 2, n)
                    }
                );
            }
            other => panic!("expected transitive add, got {:?}", other),
        }
        assert_eq!(st.envelope_step(&pd), EnvStep::Done);
    }

    #[test]
    fn envelope_closed_state_is_done() {
        let (g, pd) = empty_pd(3);
        let n = g.n();
        let mut st = OrderState::new(&g);
        st.try_add(&[pair_id(0, 1, n), pair_id(1, 2, n), pair_id(0, 2, n)], 0)
            .unwrap();
        assert_eq!(st.envelope_step(&pd), EnvStep::Done);
    }

    #[test]
    fn envelope_deterministic() {
        let (g, pd) = empty_pd(5);
        let n = g.n();
        let run = || {
            let mut st = OrderState::new(&g);
            st.try_add(
                &[
                    pair_id(0, 1, n),
                    pair_id(1, 2, n),
                    pair_id(2, 3, n),
                    pair_id(3, 4, n),
                ],
                0,
            )
            .unwrap();
            let mut events = Vec::new();
            loop {
                match st.envelope_step(&pd) {
                    EnvStep::Done => break,
                    e => events.push(e),
                }
            }
            events
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn topo_order_respects_decided() {
        let (g, _pd) = empty_pd(4);
        let n = g.n();
        let mut st = OrderState::new(&g);
        st.try_add(&[pair_id(3, 1, n), pair_id(1, 0, n), pair_id(0, 2, n)], 0)
            .unwrap();
        let order = st.topo_order();
        let posn = |v: Vertex| order.iter().position(|&w| w == v).unwrap();
        assert!(posn(3) < posn(1) && posn(1) < posn(0) && posn(0) < posn(2));
    }
}
