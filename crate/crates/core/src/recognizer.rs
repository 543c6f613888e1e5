//! The recognition pipeline.
//!
//! Per connected component of the input:
//!
//! 1. build the pair digraph; a self-coupled strong component is an
//!    immediate rejection;
//! 2. Stage 1: for each coupled pair of non-trivial components, commit the
//!    reachability closure of one of them; if both orientations close a
//!    circuit, reject;
//! 3. Stage 2: close the decided set under transitivity and reachability
//!    (the envelope); every circuit met along the way names a dictator
//!    component whose choice was wrong;
//! 4. Stage 3: if any dictators were found, rebuild the decided set with
//!    those choices flipped and re-close; a circuit now is a rejection;
//! 5. Stage 4: orient the remaining pairs, always picking a pair that is a
//!    sink among the undecided part of the digraph, re-closing after each.
//!
//! Before any ACCEPT the ordering and the derived intervals are re-verified
//! from scratch; a verification failure is reported as evidence of an
//! internal bug rather than papered over.

use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::graph::{ColoredGraph, PatternGraph, Vertex};
use crate::order_state::{Circuit, EnvStep, OrderState, Prov};
use crate::pair_digraph::{pair_id, pair_of, reverse_id, PairDigraph, PairId};
use crate::representation::{
    ordering_to_intervals, verify_ordering, verify_representation, Interval, PatternViolation,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

/// Rejection evidence. Vertex pairs are in global vertex ids; component ids
/// refer to the pair digraph of the connected component that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// A strong component contains both orientations of some pair.
    SelfCoupled {
        component: u32,
        pairs: Vec<(Vertex, Vertex)>,
    },
    /// Neither orientation of a coupled component pair could be committed.
    Stage1BothFail {
        component: u32,
        couple: u32,
        circuit: Vec<(Vertex, Vertex)>,
        couple_circuit: Vec<(Vertex, Vertex)>,
    },
    /// The rebuilt decided set with all dictators flipped still has a
    /// circuit in its envelope.
    Stage3Circuit {
        circuit: Vec<(Vertex, Vertex)>,
        dictators: Vec<u32>,
    },
    /// The pipeline produced something the verifiers refused; always a bug,
    /// never a property of the input.
    InternalVerificationFailure {
        violation: Option<PatternViolation>,
        detail: String,
    },
}

impl Evidence {
    pub fn kind(&self) -> &'static str {
        match self {
            Evidence::SelfCoupled { .. } => "self_coupled",
            Evidence::Stage1BothFail { .. } => "stage1_both_fail",
            Evidence::Stage3Circuit { .. } => "stage3_circuit",
            Evidence::InternalVerificationFailure { .. } => "internal_verification_failure",
        }
    }

    /// Witness pairs, flattened.
    pub fn pairs(&self) -> Vec<(Vertex, Vertex)> {
        match self {
            Evidence::SelfCoupled { pairs, .. } => pairs.clone(),
            Evidence::Stage1BothFail {
                circuit,
                couple_circuit,
                ..
            } => circuit
                .iter()
                .chain(couple_circuit.iter())
                .copied()
                .collect(),
            Evidence::Stage3Circuit { circuit, .. } => circuit.clone(),
            Evidence::InternalVerificationFailure { violation, .. } => violation
                .as_ref()
                .map(|pv| vec![(pv.va, pv.vb), (pv.vb, pv.vc)])
                .unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub n: usize,
    pub m: usize,
    /// connected components of the input graph
    pub components: usize,
    /// dictator components found across all connected components
    pub dictators: usize,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognitionOutcome {
    pub verdict: Verdict,
    pub ordering: Option<Vec<Vertex>>,
    pub intervals: Option<Vec<Interval>>,
    pub evidence: Option<Evidence>,
    pub stats: Stats,
}

impl RecognitionOutcome {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }

    pub fn to_json(&self) -> serde_json::Value {
        let evidence = self.evidence.as_ref().map(|ev| {
            let pairs: Vec<[Vertex; 2]> = ev.pairs().iter().map(|&(u, v)| [u, v]).collect();
            let mut obj = json!({ "kind": ev.kind(), "pairs": pairs });
            match ev {
                Evidence::SelfCoupled { component, .. } => {
                    obj["component"] = json!(component);
                }
                Evidence::Stage1BothFail {
                    component,
                    couple,
                    circuit,
                    couple_circuit,
                } => {
                    obj["component"] = json!(component);
                    obj["couple"] = json!(couple);
                    obj["circuit"] =
                        json!(circuit.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>());
                    obj["couple_circuit"] = json!(couple_circuit
                        .iter()
                        .map(|&(u, v)| [u, v])
                        .collect::<Vec<_>>());
                }
                Evidence::Stage3Circuit { dictators, .. } => {
                    obj["dictators"] = json!(dictators);
                }
                Evidence::InternalVerificationFailure { violation, detail } => {
                    obj["detail"] = json!(detail);
                    if let Some(pv) = violation {
                        obj["violation"] = json!({
                            "va": pv.va, "vb": pv.vb, "vc": pv.vc, "tag": pv.tag,
                        });
                    }
                }
            }
            obj
        });
        let intervals = self.intervals.as_ref().map(|rep| {
            rep.iter()
                .enumerate()
                .map(|(v, iv)| json!({ "v": v, "l": iv.l, "r": iv.r }))
                .collect::<Vec<_>>()
        });
        json!({
            "verdict": if self.accepted() { "accept" } else { "reject" },
            "ordering": self.ordering,
            "intervals": intervals,
            "evidence": evidence,
            "stats": {
                "n": self.stats.n,
                "m": self.stats.m,
                "components": self.stats.components,
                "dictators": self.stats.dictators,
                "millis": self.stats.millis,
            },
        })
    }
}

pub fn recognize(g: &ColoredGraph, h: &PatternGraph) -> RecognitionOutcome {
    recognize_traced(g, h, &mut |_| {})
}

/// `trace` receives one line per pipeline event, with global vertex ids.
pub fn recognize_traced(
    g: &ColoredGraph,
    h: &PatternGraph,
    trace: &mut dyn FnMut(&str),
) -> RecognitionOutcome {
    let start = Instant::now();
    let comps = g.connected_components();
    let mut ordering: Vec<Vertex> = Vec::new();
    let mut dictators_total = 0usize;
    let mut failure: Option<Evidence> = None;
    for comp in &comps {
        let sub = g.induced(comp);
        let mut pipe = Pipeline::new(&sub, h, comp, trace);
        match pipe.run() {
            Ok(local_order) => {
                dictators_total += pipe.dictator_count;
                ordering.extend(local_order.iter().map(|&v| comp[v as usize]));
            }
            Err(ev) => {
                dictators_total += pipe.dictator_count;
                failure = Some(ev);
                break;
            }
        }
    }
    let stats = |millis| Stats {
        n: g.n(),
        m: g.m(),
        components: comps.len(),
        dictators: dictators_total,
        millis,
    };
    if let Some(ev) = failure {
        return RecognitionOutcome {
            verdict: Verdict::Reject,
            ordering: None,
            intervals: None,
            evidence: Some(ev),
            stats: stats(start.elapsed().as_millis()),
        };
    }
    // safety net: never report an unverified positive
    if let Err(e) = verify_ordering(g, h, &ordering) {
        let violation = match &e {
            crate::representation::OrderingError::Violation(pv) => Some(pv.clone()),
            _ => None,
        };
        return RecognitionOutcome {
            verdict: Verdict::Reject,
            ordering: None,
            intervals: None,
            evidence: Some(Evidence::InternalVerificationFailure {
                violation,
                detail: format!("final ordering failed verification: {}", e),
            }),
            stats: stats(start.elapsed().as_millis()),
        };
    }
    let intervals = match ordering_to_intervals(g, h, &ordering) {
        Ok(rep) => rep,
        Err(e) => {
            return RecognitionOutcome {
                verdict: Verdict::Reject,
                ordering: None,
                intervals: None,
                evidence: Some(Evidence::InternalVerificationFailure {
                    violation: None,
                    detail: format!("interval construction failed: {}", e),
                }),
                stats: stats(start.elapsed().as_millis()),
            }
        }
    };
    if let Err(e) = verify_representation(g, h, &intervals) {
        return RecognitionOutcome {
            verdict: Verdict::Reject,
            ordering: None,
            intervals: None,
            evidence: Some(Evidence::InternalVerificationFailure {
                violation: None,
                detail: format!("interval representation failed verification: {}", e),
            }),
            stats: stats(start.elapsed().as_millis()),
        };
    }
    RecognitionOutcome {
        verdict: Verdict::Accept,
        ordering: Some(ordering),
        intervals: Some(intervals),
        evidence: None,
        stats: stats(start.elapsed().as_millis()),
    }
}

/// One connected component's run. Vertices are local; `vmap` translates to
/// global ids for traces and evidence.
struct Pipeline<'a> {
    g: &'a ColoredGraph,
    vmap: &'a [Vertex],
    pd: PairDigraph,
    st: OrderState,
    /// stage-1 placements in order: (component added, its couple)
    placements: Vec<u32>,
    dictator_count: usize,
    trace: &'a mut dyn FnMut(&str),
}

impl<'a> Pipeline<'a> {
    fn new(
        g: &'a ColoredGraph,
        h: &PatternGraph,
        vmap: &'a [Vertex],
        trace: &'a mut dyn FnMut(&str),
    ) -> Self {
        let pd = PairDigraph::build(g, h);
        let st = OrderState::new(g);
        Pipeline {
            g,
            vmap,
            pd,
            st,
            placements: Vec::new(),
            dictator_count: 0,
            trace,
        }
    }

    fn gpair(&self, p: PairId) -> (Vertex, Vertex) {
        let (u, v) = pair_of(p, self.g.n());
        (self.vmap[u as usize], self.vmap[v as usize])
    }

    fn gcircuit(&self, c: &Circuit) -> Vec<(Vertex, Vertex)> {
        c.pairs.iter().map(|&p| self.gpair(p)).collect()
    }

    fn trace_circuit(&mut self, c: &Circuit) {
        let s = c
            .pairs
            .iter()
            .map(|&p| {
                let (u, v) = self.gpair(p);
                format!("({},{})", u, v)
            })
            .collect::<Vec<_>>()
            .join("->");
        (self.trace)(&format!("CIRCUIT: {}", s));
    }

    fn trace_add(&mut self, p: PairId) {
        let (u, v) = self.gpair(p);
        let prov = match self.st.prov_of(p) {
            Prov::Closure => "closure".to_string(),
            Prov::Reached { from } => {
                let (a, b) = self.gpair(from);
                format!("reached({},{})", a, b)
            }
            Prov::Transitive { left, right } => {
                let (a, b) = self.gpair(left);
                let (c, d) = self.gpair(right);
                format!("trans({},{};{},{})", a, b, c, d)
            }
            Prov::None => "none".to_string(),
        };
        (self.trace)(&format!(
            "ADD ({},{}) lvl={} stamp={} dic=S{} prov={}",
            u,
            v,
            self.st.level_of(p),
            self.st.stamp_of(p),
            self.st.dic_of(p),
            prov
        ));
    }

    fn run(&mut self) -> Result<Vec<Vertex>, Evidence> {
        if let Some(s) = self.pd.self_coupled() {
            let pairs = self.pd.members(s).iter().map(|&p| self.gpair(p)).collect();
            return Err(Evidence::SelfCoupled {
                component: s,
                pairs,
            });
        }
        self.stage1()?;
        let dictators = self.stage2();
        if !dictators.is_empty() {
            self.dictator_count = dictators.len();
            self.stage3(&dictators)?;
        }
        self.stage4()?;
        Ok(self.st.topo_order())
    }

    /// Commit one component of every coupled pair of non-trivial strong
    /// components, scanning vertex pairs by nondecreasing color then id.
    fn stage1(&mut self) -> Result<(), Evidence> {
        let n = self.g.n();
        let mut verts: Vec<Vertex> = (0..n as Vertex).collect();
        verts.sort_by_key(|&v| (self.g.color(v), v));
        let mut handled = vec![false; self.pd.n_components()];
        for i in 0..n {
            for j in i + 1..n {
                let p = pair_id(verts[i], verts[j], n);
                let s = self.pd.comp_of(p);
                if self.pd.is_trivial(s) || handled[s as usize] {
                    continue;
                }
                let s2 = self.pd.couple(s);
                handled[s as usize] = true;
                handled[s2 as usize] = true;
                let closure = self.pd.reach_closure(self.pd.members(s));
                match self.st.try_add(&closure, s) {
                    Ok(added) => {
                        for q in added {
                            self.trace_add(q);
                        }
                        self.placements.push(s);
                        continue;
                    }
                    Err(c1) => {
                        self.trace_circuit(&c1);
                        let closure2 = self.pd.reach_closure(self.pd.members(s2));
                        match self.st.try_add(&closure2, s2) {
                            Ok(added) => {
                                for q in added {
                                    self.trace_add(q);
                                }
                                self.placements.push(s2);
                            }
                            Err(c2) => {
                                self.trace_circuit(&c2);
                                // report globally shortest circuits in
                                // D ∪ N⁺[S] (resp. S'), not just the ones the
                                // incremental check tripped over
                                let w1 = self.minimal_circuit_with(&closure).unwrap_or(c1);
                                let w2 = self.minimal_circuit_with(&closure2).unwrap_or(c2);
                                return Err(Evidence::Stage1BothFail {
                                    component: s,
                                    couple: s2,
                                    circuit: self.gcircuit(&w1),
                                    couple_circuit: self.gcircuit(&w2),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Shortest circuit in decided ∪ extra, viewed as a relation on the
    /// component's vertices.
    fn minimal_circuit_with(&self, extra: &[PairId]) -> Option<Circuit> {
        let n = self.g.n();
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        let mut present = vec![false; n * n];
        for p in self
            .st
            .decided_pairs()
            .into_iter()
            .chain(extra.iter().copied())
        {
            if !present[p as usize] {
                present[p as usize] = true;
                let (u, v) = pair_of(p, n);
                adj[u as usize].push(v);
            }
        }
        let mut best: Option<Vec<Vertex>> = None;
        for s in 0..n as Vertex {
            // BFS from s; shortest cycle through s closes on an arc back to s
            let mut dist = vec![u32::MAX; n];
            let mut parent = vec![u32::MAX; n];
            let mut queue = std::collections::VecDeque::new();
            dist[s as usize] = 0;
            queue.push_back(s);
            while let Some(w) = queue.pop_front() {
                for &x in &adj[w as usize] {
                    if x == s {
                        let len = dist[w as usize] + 1;
                        if best.as_ref().is_none_or(|b| b.len() as u32 > len) {
                            let mut path = vec![w];
                            let mut cur = w;
                            while parent[cur as usize] != u32::MAX {
                                cur = parent[cur as usize];
                                path.push(cur);
                            }
                            path.push(s); // path now ends at s (it started there)
                            path.reverse(); // s .. w
                            best = Some(path);
                        }
                    } else if dist[x as usize] == u32::MAX {
                        dist[x as usize] = dist[w as usize] + 1;
                        parent[x as usize] = w;
                        queue.push_back(x);
                    }
                }
            }
        }
        best.map(|cycle| {
            // cycle = s, x1, ..., w; pairs (s,x1),...,(w,s)
            let mut pairs = Vec::new();
            for i in 0..cycle.len() {
                let u = cycle[i];
                let v = cycle[(i + 1) % cycle.len()];
                if u != v {
                    pairs.push(pair_id(u, v, n));
                }
            }
            Circuit { pairs }
        })
    }

    /// Drain the envelope; collect the dictator of every circuit met and
    /// withhold the offending pair.
    fn stage2(&mut self) -> Vec<u32> {
        self.st.seed_reachability(&self.pd);
        let mut dictators = Vec::new();
        loop {
            match self.st.envelope_step(&self.pd) {
                EnvStep::Done => break,
                EnvStep::Added { pair, .. } => self.trace_add(pair),
                EnvStep::Circuit { pair, circuit, dic } => {
                    self.trace_circuit(&circuit);
                    self.st.withhold(pair);
                    if !dictators.contains(&dic) {
                        dictators.push(dic);
                    }
                }
            }
        }
        dictators
    }

    /// Rebuild the decided set with the dictator components flipped to their
    /// couples, then re-close; any circuit rejects.
    fn stage3(&mut self, dictators: &[u32]) -> Result<(), Evidence> {
        let placements = self.placements.clone();
        self.st = OrderState::new(self.g);
        for &s in &placements {
            let use_comp = if dictators.contains(&s) {
                self.pd.couple(s)
            } else {
                s
            };
            let closure = self.pd.reach_closure(self.pd.members(use_comp));
            match self.st.try_add(&closure, use_comp) {
                Ok(added) => {
                    for q in added {
                        self.trace_add(q);
                    }
                }
                Err(c) => {
                    self.trace_circuit(&c);
                    return Err(Evidence::Stage3Circuit {
                        circuit: self.gcircuit(&c),
                        dictators: dictators.to_vec(),
                    });
                }
            }
        }
        self.st.seed_reachability(&self.pd);
        loop {
            match self.st.envelope_step(&self.pd) {
                EnvStep::Done => break,
                EnvStep::Added { pair, .. } => self.trace_add(pair),
                EnvStep::Circuit { circuit, .. } => {
                    self.trace_circuit(&circuit);
                    return Err(Evidence::Stage3Circuit {
                        circuit: self.gcircuit(&circuit),
                        dictators: dictators.to_vec(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Orient all remaining pairs. Only pairs in trivial components remain;
    /// repeatedly commit one that is a sink among the undecided pairs.
    fn stage4(&mut self) -> Result<(), Evidence> {
        let n = self.g.n();
        loop {
            let mut sink: Option<PairId> = None;
            let mut fallback: Option<PairId> = None;
            for u in 0..n as Vertex {
                for v in 0..n as Vertex {
                    if u == v {
                        continue;
                    }
                    let p = pair_id(u, v, n);
                    if self.st.is_decided(p) || self.st.is_decided(reverse_id(p, n)) {
                        continue;
                    }
                    if fallback.is_none() {
                        fallback = Some(p);
                    }
                    let is_sink =
                        self.pd.out_arcs(p).iter().all(|&q| {
                            self.st.is_decided(q) || self.st.is_decided(reverse_id(q, n))
                        });
                    if is_sink {
                        sink = Some(p);
                        break;
                    }
                }
                if sink.is_some() {
                    break;
                }
            }
            let Some(p) = sink.or(fallback) else {
                return Ok(()); // everything decided
            };
            self.commit_stage4_pair(p)?;
        }
    }

    /// Add a pair (with its reachability closure) and re-close; on failure
    /// restore and try the reverse orientation.
    fn commit_stage4_pair(&mut self, p: PairId) -> Result<(), Evidence> {
        let n = self.g.n();
        for (attempt, cand) in [p, reverse_id(p, n)].into_iter().enumerate() {
            let saved = self.st.checkpoint();
            let closure = self.pd.reach_closure(&[cand]);
            let ok = match self.st.try_add(&closure, self.pd.comp_of(cand)) {
                Ok(added) => {
                    for q in added {
                        self.trace_add(q);
                    }
                    let mut clean = true;
                    loop {
                        match self.st.envelope_step(&self.pd) {
                            EnvStep::Done => break,
                            EnvStep::Added { pair, .. } => self.trace_add(pair),
                            EnvStep::Circuit { circuit, .. } => {
                                self.trace_circuit(&circuit);
                                clean = false;
                                break;
                            }
                        }
                    }
                    clean
                }
                Err(c) => {
                    self.trace_circuit(&c);
                    false
                }
            };
            if ok {
                return Ok(());
            }
            self.st.restore(saved);
            if attempt == 1 {
                let (u, v) = self.gpair(p);
                return Err(Evidence::InternalVerificationFailure {
                    violation: None,
                    detail: format!(
                        "neither orientation of undecided pair ({},{}) could be committed",
                        u, v
                    ),
                });
            }
        }
        unreachable!()
    }
}
