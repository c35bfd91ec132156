//! Literal information flow graphs and an exact max-flow oracle.
//!
//! The graph for `(s, π)` starts from `n` original nodes, replaces `k` of them
//! one at a time in the order `π`, and attaches a data collector to the `k`
//! newcomers.  For the orders the closed form in [`crate::optimal`] selects,
//! the source–collector max-flow equals the closed-form cut.  For other
//! orders the closed form can exceed the max-flow: an original node that
//! helps several newcomers may be cut once at `α` instead of once per
//! download.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use num_integer::Integer;
use num_traits::Zero;

use crate::error::Error;
use crate::mincut::{enumerate_distributions, enumerate_orders, ClusterOrder, SelectedDistribution};
use crate::optimal::CapacityResult;
use crate::params::{validate, RepairParams, SystemParams};
use crate::rational::{self, Rational};

/// Edge capacity; infinite edges model the source and collector links.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Infinite,
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(r) => f.write_str(&rational::to_fraction_string(r)),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

/// Role of an edge, which fixes its capacity in terms of the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Source,
    Storage,
    Intra,
    Cross,
    Separate,
    Collector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowEdge {
    pub from: usize,
    pub to: usize,
    pub capacity: Capacity,
    pub kind: EdgeKind,
}

/// What a storage node in the graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StorageRole {
    /// Initial node in a physical slot.
    Original { slot: usize },
    /// Replacement created at repair step `step` (1-indexed) for `slot`.
    Newcomer { step: usize, slot: usize, pool: usize },
}

/// A storage node is an input/output vertex pair joined by an `α` edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StorageVertex {
    pub role: StorageRole,
    pub input: usize,
    pub output: usize,
}

/// Which alive nodes a newcomer downloads from when it has a choice.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum HelperPolicy {
    /// Earlier newcomers first, then original nodes.  Minimises the cut.
    #[default]
    PreferNewcomers,
    /// Original nodes first, then newcomers.
    PreferInitial,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IfgOptions {
    pub policy: HelperPolicy,
    /// Permutation of `0..n`: original slot `t` has priority `priority[t]`
    /// (lower fails first and is chosen first as a helper).  Defaults to the
    /// slot index.
    pub priority: Option<Vec<usize>>,
}

/// Directed acyclic flow network with one source and one data collector.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowGraph {
    pub vertex_count: usize,
    pub source: usize,
    pub collector: usize,
    pub storage: Vec<StorageVertex>,
    pub edges: Vec<FlowEdge>,
}

impl FlowGraph {
    /// Edges entering `vertex`.
    pub fn in_edges(&self, vertex: usize) -> impl Iterator<Item = &FlowEdge> {
        self.edges.iter().filter(move |e| e.to == vertex)
    }

    /// Graphviz rendering for debugging.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ifg {\n  rankdir=LR;\n");
        let _ = writeln!(out, "  v{} [label=\"S\", shape=box];", self.source);
        let _ = writeln!(out, "  v{} [label=\"DC\", shape=box];", self.collector);
        for (t, node) in self.storage.iter().enumerate() {
            let name = match node.role {
                StorageRole::Original { slot } => format!("x{}", slot + 1),
                StorageRole::Newcomer { step, slot, .. } => format!("x{} (repair {step} of x{})", t + 1, slot + 1),
            };
            let _ = writeln!(out, "  v{} [label=\"{name} in\"];", node.input);
            let _ = writeln!(out, "  v{} [label=\"{name} out\"];", node.output);
        }
        for e in &self.edges {
            let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", e.from, e.to, e.capacity);
        }
        out.push_str("}\n");
        out
    }

    /// Reassign every capacity from `rep`, keeping the topology.  The helper
    /// counts in `rep` must be the ones the graph was built with.
    pub fn reweight(&mut self, rep: &RepairParams) {
        for e in &mut self.edges {
            e.capacity = match e.kind {
                EdgeKind::Source | EdgeKind::Collector => Capacity::Infinite,
                EdgeKind::Storage => Capacity::Finite(rep.alpha),
                EdgeKind::Intra => Capacity::Finite(rep.beta_i),
                EdgeKind::Cross => Capacity::Finite(rep.beta_c),
                EdgeKind::Separate => Capacity::Finite(rep.beta_s),
            };
        }
    }

    fn finite_total(&self) -> Rational {
        rational::sum(self.edges.iter().filter_map(|e| match e.capacity {
            Capacity::Finite(c) => Some(c),
            Capacity::Infinite => None,
        }))
    }
}

fn pool_slots(sys: &SystemParams, pool: usize) -> std::ops::Range<usize> {
    if pool == 0 {
        sys.cluster_nodes()..sys.n
    } else {
        (pool - 1) * sys.cluster_size..pool * sys.cluster_size
    }
}

fn slot_pool(sys: &SystemParams, slot: usize) -> usize {
    if slot >= sys.cluster_nodes() {
        0
    } else {
        slot / sys.cluster_size + 1
    }
}

/// Build the information flow graph for `(s, π)`.
///
/// Original slots are numbered cluster by cluster, separate slots last.  Each
/// cluster newcomer downloads `β_I` from all `R − 1` alive nodes of its
/// cluster and `β_C` from `d_C` alive nodes elsewhere; a separate newcomer
/// downloads `β_S` from `d` alive nodes.  Helpers are picked by `opts.policy`.
pub fn build_ifg(
    sys: &SystemParams,
    rep: &RepairParams,
    s: &SelectedDistribution,
    pi: &ClusterOrder,
    opts: &IfgOptions,
) -> Result<FlowGraph, Error> {
    validate(sys, rep).into_result()?;
    pi.matches(s)?;
    let n = sys.n;
    let k = pi.len();
    let priority: Vec<usize> = match &opts.priority {
        Some(p) => {
            let mut sorted = p.clone();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(Error::Parse(format!("priority must be a permutation of 0..{n}")));
            }
            p.clone()
        }
        None => (0..n).collect(),
    };

    let source = 0;
    let collector = 1;
    let input = |t: usize| 2 + 2 * t;
    let output = |t: usize| 3 + 2 * t;
    let alpha = Capacity::Finite(rep.alpha);
    let mut storage = Vec::with_capacity(n + k);
    let mut edges = Vec::new();

    for slot in 0..n {
        storage.push(StorageVertex { role: StorageRole::Original { slot }, input: input(slot), output: output(slot) });
        edges.push(FlowEdge { from: source, to: input(slot), capacity: Capacity::Infinite, kind: EdgeKind::Source });
        edges.push(FlowEdge { from: input(slot), to: output(slot), capacity: alpha, kind: EdgeKind::Storage });
    }

    // occupant[slot] = storage index currently alive in that slot.
    let mut occupant: Vec<usize> = (0..n).collect();
    // Order in which helpers are considered for a slot's occupant.
    let helper_key = |occupant: &[usize], slot: usize| -> (bool, usize) {
        let t = occupant[slot];
        let is_newcomer = t >= n;
        let rank = if is_newcomer { t } else { priority[slot] };
        match opts.policy {
            HelperPolicy::PreferNewcomers => (!is_newcomer, rank),
            HelperPolicy::PreferInitial => (is_newcomer, rank),
        }
    };

    for (idx, &pool) in pi.pools().iter().enumerate() {
        let step = idx + 1;
        let slot = pool_slots(sys, pool)
            .filter(|&sl| occupant[sl] < n)
            .min_by_key(|&sl| priority[sl])
            .ok_or_else(|| Error::OrderMismatch(format!("pool {pool} has no original node left at step {step}")))?;
        let t = n + idx;
        storage.push(StorageVertex { role: StorageRole::Newcomer { step, slot, pool }, input: input(t), output: output(t) });
        edges.push(FlowEdge { from: input(t), to: output(t), capacity: alpha, kind: EdgeKind::Storage });

        let mut cross: Vec<usize> = if pool == 0 {
            (0..n).filter(|&sl| sl != slot).collect()
        } else {
            for sl in pool_slots(sys, pool).filter(|&sl| sl != slot) {
                edges.push(FlowEdge {
                    from: output(occupant[sl]),
                    to: input(t),
                    capacity: Capacity::Finite(rep.beta_i),
                    kind: EdgeKind::Intra,
                });
            }
            (0..n).filter(|&sl| slot_pool(sys, sl) != pool).collect()
        };
        let (needed, beta, kind) =
            if pool == 0 { (rep.d(), rep.beta_s, EdgeKind::Separate) } else { (rep.d_c, rep.beta_c, EdgeKind::Cross) };
        if cross.len() < needed {
            return Err(Error::InsufficientHelpers { step, needed, available: cross.len() });
        }
        cross.sort_by_key(|&sl| helper_key(&occupant, sl));
        for &sl in &cross[..needed] {
            edges.push(FlowEdge { from: output(occupant[sl]), to: input(t), capacity: Capacity::Finite(beta), kind });
        }
        occupant[slot] = t;
        edges.push(FlowEdge { from: output(t), to: collector, capacity: Capacity::Infinite, kind: EdgeKind::Collector });
    }

    Ok(FlowGraph { vertex_count: 2 + 2 * (n + k), source, collector, storage, edges })
}

/// Exact maximum source-to-collector flow.
///
/// Capacities are scaled to a common denominator and pushed through Dinic's
/// algorithm in integers; infinite edges carry a bound larger than the sum of
/// every finite capacity.
pub fn max_flow(g: &FlowGraph) -> Rational {
    let finite = g.finite_total();
    let mut den: i64 = 1;
    for e in &g.edges {
        if let Capacity::Finite(c) = e.capacity {
            den = den.lcm(c.denom());
        }
    }
    let scale = |c: Rational| -> i128 {
        let scaled = c * Rational::from_integer(den);
        debug_assert!(scaled.is_integer());
        *scaled.numer() as i128
    };
    let infinite = scale(finite) + 1;
    let mut net = Dinic::new(g.vertex_count);
    for e in &g.edges {
        let cap = match e.capacity {
            Capacity::Finite(c) => scale(c),
            Capacity::Infinite => infinite,
        };
        net.add_edge(e.from, e.to, cap);
    }
    let flow = net.run(g.source, g.collector);
    if flow.is_zero() {
        return Rational::zero();
    }
    Rational::new(i64::try_from(flow).expect("flow fits in i64"), den)
}

struct Dinic {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i128>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Self { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), level: vec![-1; n], iter: vec![0; n] }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: i128) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i128) -> i128 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.head[u].len() {
            let e = self.head[u][self.iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let pushed = self.dfs(v, t, limit.min(self.cap[e]));
                if pushed > 0 {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn run(&mut self, s: usize, t: usize) -> i128 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(s, t, i128::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }
}

/// Default ceiling on the number of graphs [`brute_force_capacity`] builds.
pub const DEFAULT_BUDGET: u128 = 2_000_000;

/// Number of `(s, π)` graphs with `s_0` in `s0_range`.
pub fn enumeration_size(sys: &SystemParams, s0_range: &[usize]) -> Result<u128, Error> {
    sys.check()?;
    let mut total = 0u128;
    for &s0 in s0_range {
        if let Ok(dists) = enumerate_distributions(sys, s0) {
            total += dists.iter().map(SelectedDistribution::order_count).sum::<u128>();
        }
    }
    Ok(total)
}

/// True capacity by exhaustive search: the smallest max-flow over every
/// distribution with `s_0 ∈ s0_range` and every cluster order.  Among tied
/// graphs the witness has the lexicographically largest distribution and
/// its lexicographically smallest order.
pub fn brute_force_capacity(
    sys: &SystemParams,
    rep: &RepairParams,
    s0_range: &[usize],
    budget: u128,
) -> Result<CapacityResult, Error> {
    validate(sys, rep).into_result()?;
    let needed = enumeration_size(sys, s0_range)?;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut ranges: Vec<usize> = s0_range.to_vec();
    ranges.sort_unstable();
    ranges.dedup();
    let opts = IfgOptions::default();
    let mut best: Option<(Rational, SelectedDistribution, ClusterOrder)> = None;
    for &s0 in &ranges {
        let Ok(dists) = enumerate_distributions(sys, s0) else { continue };
        for s in dists {
            for pi in enumerate_orders(&s) {
                let value = max_flow(&build_ifg(sys, rep, &s, &pi, &opts)?);
                // Ties keep the lexicographically largest s and, within it,
                // the first order enumerated.
                let better = best.as_ref().is_none_or(|(b, bs, _)| value < *b || (value == *b && s.counts() > bs.counts()));
                if better {
                    best = Some((value, s.clone(), pi));
                }
            }
        }
    }
    let (capacity, argmin_s, argmin_pi) = best.ok_or_else(|| Error::NoDistribution {
        s0: ranges.first().copied().unwrap_or(0),
        reason: "no distribution in the requested s_0 range".into(),
    })?;
    let complete = (0..=sys.separate.min(sys.k))
        .all(|s0| ranges.contains(&s0) || enumerate_distributions(sys, s0).is_err());
    let separate_position = match argmin_pi.separate_positions().as_slice() {
        [j] => Some(*j),
        _ => None,
    };
    Ok(CapacityResult { capacity, argmin_s, argmin_pi, separate_position, complete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mincut::cut_profile;
    use crate::rational::int;

    fn dist(sys: &SystemParams, v: &[usize]) -> SelectedDistribution {
        SelectedDistribution::new(sys, v.to_vec()).unwrap()
    }

    #[test]
    fn small_network_flow() {
        // Hand-checked diamond: 0 -> {2,3} -> 1 with a bottleneck.
        let g = FlowGraph {
            vertex_count: 4,
            source: 0,
            collector: 1,
            storage: vec![],
            edges: vec![
                FlowEdge { from: 0, to: 2, capacity: Capacity::Finite(rational::ratio(3, 2)), kind: EdgeKind::Cross },
                FlowEdge { from: 0, to: 3, capacity: Capacity::Finite(int(2)), kind: EdgeKind::Cross },
                FlowEdge { from: 2, to: 3, capacity: Capacity::Finite(int(1)), kind: EdgeKind::Cross },
                FlowEdge { from: 2, to: 1, capacity: Capacity::Finite(rational::ratio(1, 3)), kind: EdgeKind::Cross },
                FlowEdge { from: 3, to: 1, capacity: Capacity::Infinite, kind: EdgeKind::Cross },
            ],
        };
        assert_eq!(max_flow(&g), rational::ratio(10, 3));
    }

    #[test]
    fn separate_newcomer_in_degree() {
        // One cluster of three plus three separate nodes, d = 5.
        let sys = SystemParams::new(6, 4, 1, 3, 3);
        let rep = RepairParams { alpha: int(10), d_i: 2, beta_i: int(2), d_c: 3, beta_c: int(1), beta_s: int(1) };
        let s = dist(&sys, &[1, 3]);
        let pi = ClusterOrder::new(vec![1, 0, 1, 1]);
        let g = build_ifg(&sys, &rep, &s, &pi, &IfgOptions::default()).unwrap();
        assert_eq!(g.vertex_count, 2 * (6 + 4) + 2);
        let first = g.storage[6];
        let incoming: Vec<_> = g.in_edges(first.input).collect();
        assert_eq!(incoming.len(), 5);
        assert_eq!(incoming.iter().filter(|e| e.capacity == Capacity::Finite(int(2))).count(), 2);
        assert_eq!(incoming.iter().filter(|e| e.capacity == Capacity::Finite(int(1))).count(), 3);
        let second = g.storage[7];
        assert_eq!(g.in_edges(second.input).count(), 5);
        assert!(g.in_edges(second.input).any(|e| e.from == first.output));
    }

    #[test]
    fn cross_edges_from_earlier_newcomers() {
        let sys = SystemParams::new(12, 8, 3, 4, 0);
        let rep = RepairParams { alpha: int(4), d_i: 3, beta_i: int(4), d_c: 8, beta_c: int(2), beta_s: int(0) };
        let s = dist(&sys, &[0, 4, 4, 0]);
        let pi = ClusterOrder::new(vec![1, 2, 1, 2, 1, 2, 1, 2]);
        let g = build_ifg(&sys, &rep, &s, &pi, &IfgOptions::default()).unwrap();
        let h = crate::mincut::relative_locations(&pi);
        for i in 1..=8 {
            let node = g.storage[12 + i - 1];
            let newcomer_outputs: Vec<usize> = g.storage[12..12 + i - 1].iter().map(|v| v.output).collect();
            let edges: Vec<_> = g.in_edges(node.input).collect();
            let cross_from_newcomers = edges
                .iter()
                .filter(|e| e.capacity == Capacity::Finite(int(2)) && newcomer_outputs.contains(&e.from))
                .count();
            assert_eq!(cross_from_newcomers, (i - h[i - 1]).min(8), "step {i}");
            assert_eq!(edges.len(), 11);
        }
        assert_eq!(max_flow(&g), int(32));
    }

    #[test]
    fn saturated_storage_caps_flow() {
        let sys = SystemParams::new(6, 4, 2, 3, 0);
        let rep = RepairParams { alpha: int(1), d_i: 2, beta_i: int(3), d_c: 3, beta_c: int(3), beta_s: int(0) };
        let s = dist(&sys, &[0, 3, 1]);
        for pi in enumerate_orders(&s) {
            let g = build_ifg(&sys, &rep, &s, &pi, &IfgOptions::default()).unwrap();
            assert_eq!(max_flow(&g), int(4));
        }
    }

    #[test]
    fn flow_matches_closed_form_on_small_system() {
        let sys = SystemParams::new(7, 4, 2, 3, 1);
        for (bi, bc, bs) in [(2, 1, 1), (3, 1, 2), (1, 1, 0)] {
            for alpha in [1, 2, 3, 5, 9] {
                let rep = RepairParams { alpha: int(alpha), d_i: 2, beta_i: int(bi), d_c: 3, beta_c: int(bc), beta_s: int(bs) };
                for s0 in 0..=1 {
                    for s in enumerate_distributions(&sys, s0).unwrap() {
                        for pi in enumerate_orders(&s) {
                            let closed = cut_profile(&sys, &rep, &s, &pi).unwrap().mc;
                            let g = build_ifg(&sys, &rep, &s, &pi, &IfgOptions::default()).unwrap();
                            assert_eq!(max_flow(&g), closed, "{s} {pi} {rep:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shared_original_helper_cuts_below_closed_form() {
        // Original x6 is an intra helper of both cluster-2 newcomers; cutting
        // its α edge (3) is cheaper than the 2 + 2 it would otherwise feed.
        let sys = SystemParams::new(6, 5, 2, 3, 0);
        let rep = RepairParams { alpha: int(3), d_i: 2, beta_i: int(2), d_c: 3, beta_c: int(1), beta_s: int(0) };
        let s = dist(&sys, &[0, 3, 2]);
        let pi = ClusterOrder::new(vec![1, 1, 1, 2, 2]);
        assert_eq!(cut_profile(&sys, &rep, &s, &pi).unwrap().mc, int(14));
        assert_eq!(max_flow(&build_ifg(&sys, &rep, &s, &pi, &IfgOptions::default()).unwrap()), int(13));
        // The order the closed form selects is exact.
        let best = crate::optimal::capacity(&sys, &rep).unwrap();
        let g = build_ifg(&sys, &rep, &best.argmin_s, &best.argmin_pi, &IfgOptions::default()).unwrap();
        assert_eq!(max_flow(&g), best.capacity);
    }

    #[test]
    fn prefer_initial_never_lowers_the_cut() {
        let sys = SystemParams::new(8, 5, 2, 4, 0);
        let rep = RepairParams { alpha: int(6), d_i: 3, beta_i: int(2), d_c: 3, beta_c: int(1), beta_s: int(0) };
        let opts = IfgOptions { policy: HelperPolicy::PreferInitial, priority: None };
        let mut strictly_larger = 0;
        for s in enumerate_distributions(&sys, 0).unwrap() {
            for pi in enumerate_orders(&s) {
                let worst = max_flow(&build_ifg(&sys, &rep, &s, &pi, &IfgOptions::default()).unwrap());
                let other = max_flow(&build_ifg(&sys, &rep, &s, &pi, &opts).unwrap());
                assert!(other >= worst);
                if other > worst {
                    strictly_larger += 1;
                }
            }
        }
        assert!(strictly_larger > 0);
    }

    #[test]
    fn brute_force_tiny_system() {
        // k = 2, two clusters of two: S = {(0,2,0), (0,1,1)}.
        let sys = SystemParams::new(4, 2, 2, 2, 0);
        let rep = RepairParams { alpha: int(5), d_i: 1, beta_i: int(3), d_c: 2, beta_c: int(1), beta_s: int(0) };
        // By hand:
        //   (1,1): w = (3+2, 2+... ) -> a=(1,0), b=(2,2): w=(5,2) -> 7
        //   (1,2)/(2,1): a=(1,1), b=(2,1): w=(5,4) -> 9
        let r = brute_force_capacity(&sys, &rep, &[0], DEFAULT_BUDGET).unwrap();
        assert_eq!(r.capacity, int(7));
        assert_eq!(r.argmin_s.counts(), &[0, 2, 0]);
        assert_eq!(r.argmin_pi.pools(), &[1, 1]);
        assert!(r.complete);
    }

    #[test]
    fn budget_is_enforced() {
        let sys = SystemParams::new(12, 8, 3, 4, 0);
        let rep = RepairParams { alpha: int(4), d_i: 3, beta_i: int(4), d_c: 8, beta_c: int(2), beta_s: int(0) };
        let needed = enumeration_size(&sys, &[0]).unwrap();
        assert_eq!(needed, 70 + 420 + 280 + 560);
        assert!(matches!(
            brute_force_capacity(&sys, &rep, &[0], 100),
            Err(Error::BudgetExceeded { budget: 100, .. })
        ));
    }

    #[test]
    fn dot_output_mentions_every_edge() {
        let sys = SystemParams::new(4, 2, 2, 2, 0);
        let rep = RepairParams { alpha: int(5), d_i: 1, beta_i: int(3), d_c: 2, beta_c: int(1), beta_s: int(0) };
        let s = dist(&sys, &[0, 1, 1]);
        let g = build_ifg(&sys, &rep, &s, &ClusterOrder::new(vec![1, 2]), &IfgOptions::default()).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph ifg {"));
        assert_eq!(dot.matches("->").count(), g.edges.len());
        assert!(dot.contains("label=\"inf\""));
    }

    #[test]
    fn bad_priority_rejected() {
        let sys = SystemParams::new(4, 2, 2, 2, 0);
        let rep = RepairParams { alpha: int(5), d_i: 1, beta_i: int(3), d_c: 2, beta_c: int(1), beta_s: int(0) };
        let s = dist(&sys, &[0, 1, 1]);
        let opts = IfgOptions { policy: HelperPolicy::PreferNewcomers, priority: Some(vec![0, 0, 1, 2]) };
        assert!(build_ifg(&sys, &rep, &s, &ClusterOrder::new(vec![1, 2]), &opts).is_err());
    }
}
