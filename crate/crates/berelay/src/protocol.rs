//! Network-level orchestration: eligibility screening, cooperation-graph
//! construction, centralized or distributed pair selection, bandwidth-exchange
//! allocation across the network, and the outage-reduction scheme.
//!
//! The network problem decomposes into per-pair allocations (pairsolver) and
//! a pair-selection matching (matching): maximizing total α-fair utility over
//! pairings is the maximum weighted matching of the cooperation graph whose
//! edge weights are pairwise utility gains.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matching::{
    bipartite_max_matching, blossom_mwm, greedy_local_mwm, MessageTrace, WeightedGraph,
};
use crate::netmodel::{ChannelRealization, NodeId, NodeState};
use crate::pairsolver::{
    solve_alpha_fair, solve_minrate_feasible, PairAllocation, PairProblem, DEFAULT_TOL,
};
use crate::utility::alpha_utility;

/// How sender-forwarder pairs are selected from the cooperation graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    /// Exact nonbipartite maximum weighted matching; unlimited neighbor
    /// radius.
    Centralized,
    /// Local greedy matching restricted to the configured neighbor radius;
    /// a ½-approximation.
    Distributed,
}

/// A full partition of the node set into sender-forwarder pairs and direct
/// transmitters, with the per-pair allocations. With K pairs and L direct
/// nodes, 2K + L = N.
#[derive(Debug, Clone)]
pub struct PairingOutcome {
    /// Selected (sender, forwarder) pairs.
    pub sf_pairs: Vec<(NodeId, NodeId)>,
    /// Nodes that keep transmitting directly.
    pub direct_set: Vec<NodeId>,
    /// Allocation for each pair, parallel to `sf_pairs`.
    pub allocations: Vec<PairAllocation>,
}

impl PairingOutcome {
    /// All nodes direct; no pairs.
    pub fn all_direct(n_nodes: usize) -> Self {
        PairingOutcome {
            sf_pairs: Vec::new(),
            direct_set: (1..=n_nodes).collect(),
            allocations: Vec::new(),
        }
    }

    /// Check the partition invariants against a node set `1..=n_nodes`.
    pub fn validate(&self, n_nodes: usize) -> Result<()> {
        if self.allocations.len() != self.sf_pairs.len() {
            return Err(Error::InvalidArgument(
                "allocations and sf_pairs lengths differ".into(),
            ));
        }
        let mut seen = vec![false; n_nodes + 1];
        let mut mark = |id: NodeId| -> Result<()> {
            if id == 0 || id > n_nodes {
                return Err(Error::InvalidArgument(format!(
                    "node id {id} outside 1..={n_nodes}"
                )));
            }
            if seen[id] {
                return Err(Error::InvalidArgument(format!("node {id} appears twice")));
            }
            seen[id] = true;
            Ok(())
        };
        for &(s, f) in &self.sf_pairs {
            mark(s)?;
            mark(f)?;
        }
        for &d in &self.direct_set {
            mark(d)?;
        }
        if seen[1..].iter().any(|&s| !s) {
            return Err(Error::InvalidArgument(
                "pairs and direct set do not cover all nodes".into(),
            ));
        }
        Ok(())
    }

    pub fn n_pairs(&self) -> usize {
        self.sf_pairs.len()
    }

    /// Total utility gain of the selected pairs; equals the weight of the
    /// selected matching.
    pub fn total_gain(&self) -> f64 {
        self.allocations.iter().map(|a| a.gain).sum()
    }
}

/// Per-node bandwidths and rates after bandwidth-exchange operation.
/// Vectors are indexed by `node id - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkAllocation {
    pub w_be: Vec<f64>,
    pub r_be: Vec<f64>,
    /// Σ U^α(r_be) over all nodes.
    pub total_utility: f64,
    /// Σ r_be, Mbps.
    pub total_rate: f64,
}

impl NetworkAllocation {
    /// Apply a pairing outcome on top of the initial allocation: paired
    /// nodes take their pair allocation, direct nodes keep `(w_in, r_in)`.
    pub fn assemble(nodes: &[NodeState], outcome: &PairingOutcome, alpha: f64) -> Self {
        let mut w_be: Vec<f64> = nodes.iter().map(|n| n.w_in).collect();
        let mut r_be: Vec<f64> = nodes.iter().map(|n| n.r_in).collect();
        for (&(s, f), alloc) in outcome.sf_pairs.iter().zip(&outcome.allocations) {
            w_be[s - 1] = alloc.w_s_be;
            r_be[s - 1] = alloc.r_s_be;
            w_be[f - 1] = alloc.w_f_be;
            r_be[f - 1] = alloc.r_f_be;
        }
        let total_utility = r_be.iter().map(|&r| alpha_utility(r, alpha)).sum();
        let total_rate = r_be.iter().sum();
        NetworkAllocation {
            w_be,
            r_be,
            total_utility,
            total_rate,
        }
    }

    /// The all-direct baseline.
    pub fn direct(nodes: &[NodeState], alpha: f64) -> Self {
        Self::assemble(nodes, &PairingOutcome::all_direct(nodes.len()), alpha)
    }
}

/// Cooperation graph plus, for every kept edge, the gain-maximizing role
/// orientation and its allocation. Edge weights equal the stored
/// allocations' utility gains.
#[derive(Debug, Clone)]
pub struct CooperationGraph {
    n_nodes: usize,
    graph: WeightedGraph,
    oriented: BTreeMap<(NodeId, NodeId), ((NodeId, NodeId), PairAllocation)>,
}

impl CooperationGraph {
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    /// `(sender, forwarder)` orientation stored for an edge.
    pub fn orientation(&self, u: NodeId, v: NodeId) -> Option<(NodeId, NodeId)> {
        self.oriented.get(&(u.min(v), u.max(v))).map(|e| e.0)
    }

    pub fn allocation(&self, u: NodeId, v: NodeId) -> Option<&PairAllocation> {
        self.oriented.get(&(u.min(v), u.max(v))).map(|e| &e.1)
    }

    /// Drop edges between nodes farther apart than `radius`. The radius
    /// gate is symmetric in the two roles, so the surviving edges keep
    /// exactly the weights and orientations an equally restricted rebuild
    /// would produce.
    pub fn restrict_radius(&self, nodes: &[NodeState], radius: Option<f64>) -> CooperationGraph {
        assert_eq!(nodes.len(), self.n_nodes, "node list size mismatch");
        let mut graph = WeightedGraph::with_vertices(1..=self.n_nodes);
        let mut oriented = BTreeMap::new();
        for e in self.graph.edges() {
            if within_radius(nodes, e.u, e.v, radius) {
                graph.add_edge(e.u, e.v, e.weight).unwrap();
                oriented.insert((e.u, e.v), self.oriented[&(e.u, e.v)]);
            }
        }
        CooperationGraph {
            n_nodes: self.n_nodes,
            graph,
            oriented,
        }
    }
}

fn check_consistent(channel: &ChannelRealization, nodes: &[NodeState]) -> Result<()> {
    if channel.len() != nodes.len() {
        return Err(Error::Precondition(format!(
            "channel has {} nodes, state list has {}",
            channel.len(),
            nodes.len()
        )));
    }
    for (k, node) in nodes.iter().enumerate() {
        if node.id != k + 1 {
            return Err(Error::Precondition(format!(
                "node list must be ordered by id; found id {} at position {k}",
                node.id
            )));
        }
        if node.rho_ap != channel.ap_gain(node.id) {
            return Err(Error::Precondition(format!(
                "node {} AP gain disagrees with the channel realization",
                node.id
            )));
        }
        if node.p_max != nodes[0].p_max {
            return Err(Error::Precondition(
                "all nodes must share the same maximum power".into(),
            ));
        }
    }
    Ok(())
}

fn within_radius(nodes: &[NodeState], u: NodeId, v: NodeId, radius: Option<f64>) -> bool {
    match radius {
        None => true,
        Some(r) => nodes[u - 1].position.distance(&nodes[v - 1].position) <= r,
    }
}

/// Directed relay candidates. `(v, u)` means node u may forward node v's
/// data: `min(ρ_uv, ρ_u0) ≥ ρ_v0`, and the nodes lie within
/// `neighbor_radius` of each other (`None` = unlimited).
pub fn eligible_pairs(
    channel: &ChannelRealization,
    nodes: &[NodeState],
    neighbor_radius: Option<f64>,
) -> Vec<(NodeId, NodeId)> {
    assert_eq!(channel.len(), nodes.len(), "channel/node dimension mismatch");
    let n = nodes.len();
    let mut out = Vec::new();
    for v in 1..=n {
        for u in 1..=n {
            if u == v || !within_radius(nodes, u, v, neighbor_radius) {
                continue;
            }
            let rho_uv = channel.gain(u, v);
            if rho_uv.min(channel.ap_gain(u)) >= channel.ap_gain(v) {
                out.push((v, u));
            }
        }
    }
    out
}

fn pair_problem(
    channel: &ChannelRealization,
    nodes: &[NodeState],
    s: NodeId,
    f: NodeId,
    alpha: f64,
) -> Result<PairProblem> {
    PairProblem::new(
        nodes[s - 1].w_in,
        nodes[f - 1].w_in,
        nodes[s - 1].p_max,
        channel.ap_gain(s),
        channel.ap_gain(f),
        channel.gain(s, f),
        alpha,
    )
}

/// Build the cooperation graph: for every unordered pair with at least one
/// eligible orientation, solve the pairwise allocation per orientation and
/// keep the larger gain as the edge weight. Zero-gain edges (≤ 10⁻⁹) are
/// dropped. Vertices always cover the whole node set.
pub fn build_cooperation_graph(
    channel: &ChannelRealization,
    nodes: &[NodeState],
    alpha: f64,
    tol: f64,
    neighbor_radius: Option<f64>,
) -> Result<CooperationGraph> {
    check_consistent(channel, nodes)?;
    if alpha >= 1.0 {
        if let Some(node) = nodes.iter().find(|n| n.r_in <= 0.0) {
            return Err(Error::Precondition(format!(
                "alpha = {alpha} requires positive initial rates; node {} has r_in = {}",
                node.id, node.r_in
            )));
        }
    }
    let n = nodes.len();
    let eligible = eligible_pairs(channel, nodes, neighbor_radius);
    let mut graph = WeightedGraph::with_vertices(1..=n);
    let mut oriented = BTreeMap::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let mut best: Option<((NodeId, NodeId), PairAllocation)> = None;
            for (s, f) in [(i, j), (j, i)] {
                if !eligible.contains(&(s, f)) {
                    continue;
                }
                let alloc = solve_alpha_fair(&pair_problem(channel, nodes, s, f, alpha)?, tol)?;
                if best.is_none() || alloc.gain > best.as_ref().unwrap().1.gain {
                    best = Some(((s, f), alloc));
                }
            }
            if let Some((roles, alloc)) = best {
                if graph.add_edge(i, j, alloc.gain)? {
                    oriented.insert((i, j), (roles, alloc));
                }
            }
        }
    }
    Ok(CooperationGraph {
        n_nodes: n,
        graph,
        oriented,
    })
}

/// Select sender-forwarder pairs from a cooperation graph. Centralized mode
/// runs the exact blossom matching; distributed mode simulates the local
/// greedy protocol and also returns its message trace. Matched edges take
/// their stored orientation; unmatched nodes go direct.
pub fn select_pairs(
    coop: &CooperationGraph,
    mode: SelectionMode,
) -> (PairingOutcome, Option<MessageTrace>) {
    let (matching, trace) = match mode {
        SelectionMode::Centralized => (blossom_mwm(&coop.graph), None),
        SelectionMode::Distributed => {
            let (m, t) = greedy_local_mwm(&coop.graph);
            (m, Some(t))
        }
    };
    let mut outcome = PairingOutcome {
        sf_pairs: Vec::new(),
        direct_set: Vec::new(),
        allocations: Vec::new(),
    };
    let matched = matching.matched_vertices();
    for &(u, v) in matching.edges() {
        let (roles, alloc) = &coop.oriented[&(u, v)];
        outcome.sf_pairs.push(*roles);
        outcome.allocations.push(*alloc);
    }
    for id in 1..=coop.n_nodes {
        if !matched.contains(&id) {
            outcome.direct_set.push(id);
        }
    }
    (outcome, trace)
}

/// End-to-end bandwidth-exchange allocation: cooperation graph, pair
/// selection, and network assembly. Direct nodes keep their initial
/// allocation; the utility improvement over direct operation equals the
/// selected matching's weight (within solver tolerance).
pub fn run_be_allocation(
    channel: &ChannelRealization,
    nodes: &[NodeState],
    alpha: f64,
    mode: SelectionMode,
    neighbor_radius: Option<f64>,
    tol: f64,
) -> Result<(NetworkAllocation, PairingOutcome)> {
    let radius = match mode {
        SelectionMode::Centralized => None,
        SelectionMode::Distributed => neighbor_radius,
    };
    let coop = build_cooperation_graph(channel, nodes, alpha, tol, radius)?;
    let (outcome, _) = select_pairs(&coop, mode);
    let allocation = NetworkAllocation::assemble(nodes, &outcome, alpha);
    Ok((allocation, outcome))
}

/// Split node ids into (outage, non-outage): a node is in outage when its
/// rate is strictly below `r_min`.
pub fn classify_outage(rates: &[f64], r_min: f64) -> (Vec<NodeId>, Vec<NodeId>) {
    assert!(r_min >= 0.0, "r_min must be nonnegative");
    let mut outage = Vec::new();
    let mut fine = Vec::new();
    for (k, &r) in rates.iter().enumerate() {
        if r < r_min {
            outage.push(k + 1);
        } else {
            fine.push(k + 1);
        }
    }
    (outage, fine)
}

/// Fraction of nodes below `r_min`.
pub fn outage_probability(rates: &[f64], r_min: f64) -> Result<f64> {
    if rates.is_empty() {
        return Err(Error::InvalidArgument("empty rate list".into()));
    }
    let (outage, _) = classify_outage(rates, r_min);
    Ok(outage.len() as f64 / rates.len() as f64)
}

/// Outage-reduction pairing and the resulting per-node rates.
#[derive(Debug, Clone)]
pub struct OutageOutcome {
    pub outcome: PairingOutcome,
    /// Post-pairing rates, indexed by `node id - 1`.
    pub rates: Vec<f64>,
}

/// Pair outage nodes (senders) with non-outage forwarders so that the most
/// outage nodes reach `r_min`. An edge exists when the eligibility rule
/// holds for the outage→forwarder direction and the pairwise allocation can
/// put both nodes at or above `r_min`; maximum-cardinality bipartite
/// matching then decides the pairs. Matched pairs adopt the feasible
/// allocation; everyone else keeps the initial one.
pub fn outage_pairing(
    channel: &ChannelRealization,
    nodes: &[NodeState],
    r_min: f64,
    neighbor_radius: Option<f64>,
    mode: SelectionMode,
) -> Result<OutageOutcome> {
    check_consistent(channel, nodes)?;
    let radius = match mode {
        SelectionMode::Centralized => None,
        SelectionMode::Distributed => neighbor_radius,
    };
    let r_in: Vec<f64> = nodes.iter().map(|n| n.r_in).collect();
    let (outage, fine) = classify_outage(&r_in, r_min);
    let eligible = eligible_pairs(channel, nodes, radius);
    let mut edges = Vec::new();
    let mut feasible: BTreeMap<(NodeId, NodeId), PairAllocation> = BTreeMap::new();
    for &o in &outage {
        for &f in &fine {
            if !eligible.contains(&(o, f)) {
                continue;
            }
            let problem = pair_problem(channel, nodes, o, f, 0.0)?;
            if let Some(alloc) = solve_minrate_feasible(&problem, r_min, DEFAULT_TOL)? {
                edges.push((o, f));
                feasible.insert((o, f), alloc);
            }
        }
    }
    let matching = bipartite_max_matching(&outage, &fine, &edges)?;

    let mut outcome = PairingOutcome {
        sf_pairs: Vec::new(),
        direct_set: Vec::new(),
        allocations: Vec::new(),
    };
    let mut rates = r_in.clone();
    let matched = matching.matched_vertices();
    for &(u, v) in matching.edges() {
        // Left side is the outage group; orient back to (sender, forwarder).
        let (o, f) = if outage.contains(&u) { (u, v) } else { (v, u) };
        let alloc = feasible[&(o, f)];
        rates[o - 1] = alloc.r_s_be;
        rates[f - 1] = alloc.r_f_be;
        outcome.sf_pairs.push((o, f));
        outcome.allocations.push(alloc);
    }
    for id in 1..=nodes.len() {
        if !matched.contains(&id) {
            outcome.direct_set.push(id);
        }
    }
    Ok(OutageOutcome { outcome, rates })
}
