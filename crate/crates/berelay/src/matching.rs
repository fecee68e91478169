//! Matching algorithms for relay selection.
//!
//! * [`blossom_mwm`]: exact maximum weighted matching on general graphs;
//! * [`greedy_local_mwm`]: the distributed local greedy protocol, a
//!   ½-approximation with a full message trace;
//! * [`bipartite_max_matching`]: maximum-cardinality matching for the
//!   outage-reduction scheme;
//! * [`enumerate_mwm`]: exhaustive oracle for small graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

mod blossom;
pub use blossom::blossom_mwm;

/// Edges at or below this weight are dropped at construction: matching a
/// zero-gain pair is no better than leaving both nodes direct, and strictly
/// positive weights keep the matching preconditions clean.
pub const EDGE_WEIGHT_THRESHOLD: f64 = 1e-9;

/// Maximum vertex count accepted by [`enumerate_mwm`].
pub const ENUMERATION_LIMIT: usize = 14;

/// One undirected edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Undirected graph with strictly positive edge weights and no self-loops
/// or duplicate pairs. Vertices may exist without edges.
#[derive(Debug, Clone, Default)]
pub struct WeightedGraph {
    vertices: BTreeSet<usize>,
    edges: Vec<GraphEdge>,
    index: BTreeMap<(usize, usize), usize>,
}

impl WeightedGraph {
    pub fn new() -> Self {
        WeightedGraph::default()
    }

    pub fn with_vertices(vertices: impl IntoIterator<Item = usize>) -> Self {
        WeightedGraph {
            vertices: vertices.into_iter().collect(),
            ..WeightedGraph::default()
        }
    }

    pub fn add_vertex(&mut self, v: usize) {
        self.vertices.insert(v);
    }

    /// Insert an edge; both endpoints are registered as vertices either
    /// way. Returns whether the edge was kept: weights at or below
    /// [`EDGE_WEIGHT_THRESHOLD`] are dropped silently. Self-loops,
    /// non-finite weights and duplicate pairs are errors.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<bool> {
        if u == v {
            return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
        }
        if !weight.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "edge ({u}, {v}) has non-finite weight {weight}"
            )));
        }
        let key = (u.min(v), u.max(v));
        if self.index.contains_key(&key) {
            return Err(Error::InvalidArgument(format!(
                "duplicate edge ({}, {})",
                key.0, key.1
            )));
        }
        self.vertices.insert(u);
        self.vertices.insert(v);
        if weight <= EDGE_WEIGHT_THRESHOLD {
            return Ok(false);
        }
        self.index.insert(key, self.edges.len());
        self.edges.push(GraphEdge {
            u: key.0,
            v: key.1,
            weight,
        });
        Ok(true)
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let key = (u.min(v), u.max(v));
        self.index.get(&key).map(|&i| self.edges[i].weight)
    }

    /// Neighbors of `v` in ascending id order with edge weights.
    pub fn neighbors(&self, v: usize) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.u == v {
                    Some((e.v, e.weight))
                } else if e.v == v {
                    Some((e.u, e.weight))
                } else {
                    None
                }
            })
            .collect();
        out.sort_by_key(|&(u, _)| u);
        out
    }

    /// Line-oriented text form, one `u v weight` line per edge.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for e in &self.edges {
            writeln!(s, "{} {} {}", e.u, e.v, e.weight).unwrap();
        }
        s
    }

    /// Parse the [`dump`](Self::dump) format. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut g = WeightedGraph::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |what: &str| {
                Error::Config(format!("edge list line {}: {what}: {line:?}", lineno + 1))
            };
            if fields.len() != 3 {
                return Err(parse_err("expected `u v weight`"));
            }
            let u: usize = fields[0].parse().map_err(|_| parse_err("bad vertex id"))?;
            let v: usize = fields[1].parse().map_err(|_| parse_err("bad vertex id"))?;
            let w: f64 = fields[2].parse().map_err(|_| parse_err("bad weight"))?;
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }
}

/// A vertex-disjoint edge set. `total_weight` is the sum of the member
/// weights, always accumulated in canonical `(u, v)` order so that equal
/// edge sets produce bitwise-equal totals regardless of which algorithm
/// found them.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
    total_weight: f64,
}

impl Matching {
    /// Build from pairs that must all be edges of `graph`. Panics on a
    /// non-edge or on overlapping pairs; the matching algorithms only emit
    /// valid selections.
    pub fn from_edges(graph: &WeightedGraph, pairs: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        Self::assert_disjoint(&edges);
        let total_weight = edges
            .iter()
            .map(|&(u, v)| {
                graph
                    .weight(u, v)
                    .unwrap_or_else(|| panic!("({u}, {v}) is not a graph edge"))
            })
            .sum();
        Matching {
            edges,
            total_weight,
        }
    }

    /// Build from pairs of an unweighted graph; every edge counts 1, so the
    /// total equals the cardinality.
    pub fn from_unit_pairs(pairs: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        Self::assert_disjoint(&edges);
        Matching {
            total_weight: edges.len() as f64,
            edges,
        }
    }

    fn assert_disjoint(edges: &[(usize, usize)]) {
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            assert!(u != v && seen.insert(u) && seen.insert(v), "matching edges overlap");
        }
    }

    /// Selected edges as canonical `(u, v)` pairs in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn matched_vertices(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|&(u, v)| [u, v]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageKind {
    Add,
    Drop,
}

/// One control message of the distributed greedy protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Message {
    pub round: usize,
    pub from: usize,
    pub to: usize,
    pub kind: MessageKind,
}

/// Ordered log of every message the greedy protocol exchanged. Bounded by
/// `2·|E| + |V|` messages: each edge carries at most one standing proposal
/// per direction and dies to at most one drop.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MessageTrace {
    messages: Vec<Message>,
}

impl MessageTrace {
    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Line-oriented text form: `round sender receiver kind` per message.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for m in &self.messages {
            let kind = match m.kind {
                MessageKind::Add => "add",
                MessageKind::Drop => "drop",
            };
            writeln!(s, "{} {} {} {kind}", m.round, m.from, m.to).unwrap();
        }
        s
    }
}

/// Distributed local greedy matching, simulated in synchronous rounds.
///
/// Per round: every unmatched node with a live neighbor keeps a standing
/// proposal to its heaviest neighbor (ties to the smallest id), sending an
/// `add` only when the proposal is new; mutual proposals match; each newly
/// matched node sends `drop` to its other neighbors and all its edges are
/// removed. Nodes whose proposal edge was dropped re-propose next round.
/// Runs until no edges remain. The result is at least half the weight of
/// the exact maximum weighted matching.
pub fn greedy_local_mwm(graph: &WeightedGraph) -> (Matching, MessageTrace) {
    let mut adj: BTreeMap<usize, BTreeMap<usize, f64>> = BTreeMap::new();
    for &v in graph.vertices() {
        adj.insert(v, BTreeMap::new());
    }
    for e in graph.edges() {
        adj.get_mut(&e.u).unwrap().insert(e.v, e.weight);
        adj.get_mut(&e.v).unwrap().insert(e.u, e.weight);
    }

    let mut candidate: BTreeMap<usize, usize> = BTreeMap::new();
    let mut partner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut trace = MessageTrace::default();
    let mut round = 0;
    while adj.values().any(|nb| !nb.is_empty()) {
        round += 1;
        debug_assert!(round <= graph.n_vertices() + 1, "greedy failed to progress");

        // Propose: heaviest live neighbor, smallest id on ties. Standing
        // proposals are not re-sent.
        let ids: Vec<usize> = adj.keys().copied().collect();
        for &u in &ids {
            if partner.contains_key(&u) || candidate.contains_key(&u) || adj[&u].is_empty() {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for (&nb, &w) in &adj[&u] {
                if best.is_none() || w > best.unwrap().1 {
                    best = Some((nb, w));
                }
            }
            let (target, _) = best.unwrap();
            candidate.insert(u, target);
            trace.messages.push(Message {
                round,
                from: u,
                to: target,
                kind: MessageKind::Add,
            });
        }

        // Match mutual proposals.
        let mut newly: Vec<usize> = Vec::new();
        for &u in &ids {
            if let Some(&v) = candidate.get(&u) {
                if u < v && candidate.get(&v) == Some(&u) {
                    partner.insert(u, v);
                    partner.insert(v, u);
                    newly.push(u);
                    newly.push(v);
                }
            }
        }
        newly.sort_unstable();

        // Matched nodes drop their remaining edges.
        for &m in &newly {
            candidate.remove(&m);
            let mate = partner[&m];
            let neighbors: Vec<usize> = adj[&m].keys().copied().collect();
            for x in neighbors {
                if x != mate {
                    trace.messages.push(Message {
                        round,
                        from: m,
                        to: x,
                        kind: MessageKind::Drop,
                    });
                    if candidate.get(&x) == Some(&m) {
                        candidate.remove(&x);
                    }
                }
                adj.get_mut(&x).unwrap().remove(&m);
            }
            adj.get_mut(&m).unwrap().clear();
        }
    }

    let pairs: Vec<(usize, usize)> = partner
        .iter()
        .filter(|&(&u, &v)| u < v)
        .map(|(&u, &v)| (u, v))
        .collect();
    (Matching::from_edges(graph, pairs), trace)
}

/// Maximum-cardinality matching in a bipartite graph via augmenting paths.
/// Deterministic: left vertices and their neighbors are scanned in
/// ascending id order. The returned matching uses unit weights, so its
/// total equals its size.
pub fn bipartite_max_matching(
    left: &[usize],
    right: &[usize],
    edges: &[(usize, usize)],
) -> Result<Matching> {
    let left_set: BTreeSet<usize> = left.iter().copied().collect();
    let right_set: BTreeSet<usize> = right.iter().copied().collect();
    if let Some(v) = left_set.intersection(&right_set).next() {
        return Err(Error::InvalidArgument(format!(
            "vertex {v} appears on both sides"
        )));
    }
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for &(l, r) in edges {
        if !left_set.contains(&l) || !right_set.contains(&r) {
            return Err(Error::InvalidArgument(format!(
                "edge ({l}, {r}) does not go from left to right"
            )));
        }
        adj.entry(l).or_default().insert(r);
    }

    fn try_augment(
        l: usize,
        adj: &BTreeMap<usize, BTreeSet<usize>>,
        visited: &mut BTreeSet<usize>,
        match_right: &mut BTreeMap<usize, usize>,
    ) -> bool {
        let Some(neighbors) = adj.get(&l) else {
            return false;
        };
        for &r in neighbors {
            if visited.insert(r) {
                let taken = match_right.get(&r).copied();
                if taken.is_none()
                    || try_augment(taken.unwrap(), adj, visited, match_right)
                {
                    match_right.insert(r, l);
                    return true;
                }
            }
        }
        false
    }

    let mut match_right: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in left_set.iter() {
        let mut visited = BTreeSet::new();
        try_augment(l, &adj, &mut visited, &mut match_right);
    }
    let pairs: Vec<(usize, usize)> = match_right.iter().map(|(&r, &l)| (l, r)).collect();
    Ok(Matching::from_unit_pairs(pairs))
}

/// Exhaustive maximum weighted matching by dynamic programming over vertex
/// subsets. Exact ground truth for graphs of at most
/// [`ENUMERATION_LIMIT`] vertices.
pub fn enumerate_mwm(graph: &WeightedGraph) -> Result<Matching> {
    let verts: Vec<usize> = graph.vertices().iter().copied().collect();
    let n = verts.len();
    if n > ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit {
            vertices: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let idx: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut w = vec![vec![None; n]; n];
    for e in graph.edges() {
        let (i, j) = (idx[&e.u], idx[&e.v]);
        w[i][j] = Some(e.weight);
        w[j][i] = Some(e.weight);
    }

    let full = 1usize << n;
    let mut value = vec![0.0f64; full];
    // Partner of the lowest vertex in the optimal matching of each mask;
    // usize::MAX means it stays single.
    let mut choice = vec![usize::MAX; full];
    for mask in 1..full {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut best = value[rest];
        let mut pick = usize::MAX;
        for u in (v + 1)..n {
            if rest & (1 << u) != 0 {
                if let Some(wt) = w[v][u] {
                    let cand = wt + value[rest & !(1 << u)];
                    if cand > best {
                        best = cand;
                        pick = u;
                    }
                }
            }
        }
        value[mask] = best;
        choice[mask] = pick;
    }

    let mut pairs = Vec::new();
    let mut mask = full - 1;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        let pick = choice[mask];
        mask &= !(1 << v);
        if pick != usize::MAX {
            pairs.push((verts[v], verts[pick]));
            mask &= !(1 << pick);
        }
    }
    Ok(Matching::from_edges(graph, pairs))
}
