use serde::{Deserialize, Serialize};

use crate::error::{input, precondition, Error, Result};
use crate::nodeset::{NodeSet, MAX_NODES};

/// A simple graph on nodes `1..=n`, stored as one adjacency mask per node.
///
/// Connectedness is not an invariant: disconnected values are used for
/// disjoint unions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GraphWire", into = "GraphWire")]
pub struct Graph {
    adj: Vec<NodeSet>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphWire {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphWire> for Graph {
    type Error = Error;

    fn try_from(w: GraphWire) -> Result<Graph> {
        Graph::new(w.n, w.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphWire {
    fn from(g: Graph) -> GraphWire {
        GraphWire {
            n: g.node_count(),
            edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.node_count(), self.edges())
    }
}

/// An order-preserving renumbering of a parent graph's node subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeled {
    pub graph: Graph,
    /// Parent nodes that survive, in increasing order; local node `k` is the
    /// `k`-th member.
    pub support: NodeSet,
}

impl Relabeled {
    pub fn pull_back(&self, local: NodeSet) -> NodeSet {
        local.expand(self.support)
    }

    pub fn push_forward(&self, parent: NodeSet) -> NodeSet {
        parent.compress(self.support)
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, out-of-range endpoints and `n`
    /// outside `1..=64`. Duplicate edges are rejected too.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Graph> {
        if n == 0 {
            return input("graph must have at least one node");
        }
        if n > MAX_NODES {
            return Err(Error::Resource {
                what: "node count",
                limit: MAX_NODES,
                got: n,
            });
        }
        let mut adj = vec![NodeSet::EMPTY; n];
        for (a, b) in edges {
            if a == b {
                return input(format!("self-loop at node {a}"));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return input(format!("edge ({a},{b}) has an endpoint outside 1..={n}"));
            }
            if adj[a - 1].contains(b) {
                return input(format!("duplicate edge ({a},{b})"));
            }
            adj[a - 1] = adj[a - 1].with(b);
            adj[b - 1] = adj[b - 1].with(a);
        }
        Ok(Graph { adj })
    }

    pub(crate) fn from_adjacency(adj: Vec<NodeSet>) -> Graph {
        debug_assert!(!adj.is_empty() && adj.len() <= MAX_NODES);
        Graph { adj }
    }

    pub fn complete(n: usize) -> Graph {
        let all = NodeSet::full(n);
        Graph::from_adjacency((1..=n).map(|v| all.without(v)).collect())
    }

    /// The path `1 - 2 - ... - n`.
    pub fn linear(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|v| (v, v + 1))).expect("valid path")
    }

    /// The cycle on `n ≥ 3` nodes; smaller `n` gives the path.
    pub fn cycle(n: usize) -> Graph {
        if n < 3 {
            return Graph::linear(n);
        }
        Graph::new(n, (1..n).map(|v| (v, v + 1)).chain([(1, n)])).expect("valid cycle")
    }

    pub fn edgeless(n: usize) -> Graph {
        Graph::from_adjacency(vec![NodeSet::EMPTY; n])
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.adj.len())
    }

    pub fn neighbors(&self, v: usize) -> NodeSet {
        self.adj[v - 1]
    }

    /// Union of the neighbor sets of the nodes of `s` (may meet `s`).
    pub fn neighborhood(&self, s: NodeSet) -> NodeSet {
        s.iter().fold(NodeSet::EMPTY, |acc, v| acc | self.adj[v - 1])
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a >= 1 && a <= self.adj.len() && self.adj[a - 1].contains(b)
    }

    /// Some edge joins a node of `a` to a node of `b`.
    pub fn adjacent(&self, a: NodeSet, b: NodeSet) -> bool {
        self.neighborhood(a).intersects(b)
    }

    /// Edges `(i, j)` with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 1..=self.adj.len() {
            for b in self.adj[a - 1].iter().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_set(self.nodes())
    }

    /// `s` is non-empty and induces a connected subgraph. Nodes outside the
    /// graph are ignored; callers validate range separately.
    pub fn is_connected_set(&self, s: NodeSet) -> bool {
        if s.is_empty() {
            return false;
        }
        self.reach(s.lowest(), s) == s
    }

    /// Nodes of `within` reachable from `start` inside `within`.
    fn reach(&self, start: NodeSet, within: NodeSet) -> NodeSet {
        let mut seen = start;
        let mut frontier = start;
        while !frontier.is_empty() {
            let next = self.neighborhood(frontier) & within;
            frontier = next - seen;
            seen |= next;
        }
        seen
    }

    /// Connected components of the subgraph induced on `s`, ordered by
    /// minimal node.
    pub fn components(&self, s: NodeSet) -> Vec<NodeSet> {
        let mut out = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let c = self.reach(rest.lowest(), rest);
            out.push(c);
            rest -= c;
        }
        out
    }

    pub fn check_range(&self, s: NodeSet) -> Result<()> {
        if s.is_subset(self.nodes()) {
            Ok(())
        } else {
            input(format!(
                "node set {s} has nodes outside 1..={}",
                self.node_count()
            ))
        }
    }

    /// True iff `s` is a non-empty node set inducing a connected subgraph.
    pub fn is_tube(&self, s: NodeSet) -> Result<bool> {
        self.check_range(s)?;
        Ok(self.is_connected_set(s))
    }

    fn require_tube(&self, t: NodeSet) -> Result<()> {
        if self.is_tube(t)? {
            Ok(())
        } else {
            precondition(format!("{t} is not a tube"))
        }
    }

    /// Subgraph induced on any non-empty node subset, renumbered.
    pub(crate) fn restrict_nodes(&self, s: NodeSet) -> Relabeled {
        let adj = s.iter().map(|v| (self.adj[v - 1] & s).compress(s)).collect();
        Relabeled {
            graph: Graph::from_adjacency(adj),
            support: s,
        }
    }

    /// Γ_t, renumbered order-preservingly.
    pub fn induced_subgraph(&self, t: NodeSet) -> Result<Graph> {
        Ok(self.induced_relabeled(t)?.graph)
    }

    pub fn induced_relabeled(&self, t: NodeSet) -> Result<Relabeled> {
        self.require_tube(t)?;
        Ok(self.restrict_nodes(t))
    }

    /// Γ_t*: the surviving nodes, with former neighbors of `t` made pairwise
    /// adjacent, renumbered order-preservingly.
    pub fn reconnected_complement(&self, t: NodeSet) -> Result<Graph> {
        Ok(self.complement_relabeled(t)?.graph)
    }

    pub fn complement_relabeled(&self, t: NodeSet) -> Result<Relabeled> {
        self.iterated_complement_relabeled(&[t])
    }

    /// Fold of reconnected complements by pairwise disjoint node sets given
    /// in this graph's coordinates. Each set must be a tube of the
    /// intermediate graph it is removed from.
    pub fn iterated_complement(&self, ts: &[NodeSet]) -> Result<Graph> {
        Ok(self.iterated_complement_relabeled(ts)?.graph)
    }

    pub fn iterated_complement_relabeled(&self, ts: &[NodeSet]) -> Result<Relabeled> {
        let mut seen = NodeSet::EMPTY;
        for &t in ts {
            self.check_range(t)?;
            if t.intersects(seen) {
                return input(format!("tube {t} overlaps an earlier tube"));
            }
            seen |= t;
        }
        let mut pc = PartialComplement::new(self);
        for &t in ts {
            if !pc.is_tube(t) {
                return precondition(format!("{t} is not a tube of the intermediate complement"));
            }
            pc.remove(t);
        }
        if pc.active.is_empty() {
            return precondition("complement is empty");
        }
        Ok(pc.finish())
    }

    /// Ordered disjoint union; `other`'s nodes are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n = self.node_count();
        let total = n + other.node_count();
        if total > MAX_NODES {
            return Err(Error::Resource {
                what: "node count",
                limit: MAX_NODES,
                got: total,
            });
        }
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|s| s.shift(n)));
        Ok(Graph::from_adjacency(adj))
    }

    /// Adds the edge `{a, b}` (no-op if present).
    pub fn with_edge(&self, a: usize, b: usize) -> Graph {
        debug_assert!(a != b && a <= self.node_count() && b <= self.node_count());
        let mut adj = self.adj.clone();
        adj[a - 1] = adj[a - 1].with(b);
        adj[b - 1] = adj[b - 1].with(a);
        Graph { adj }
    }

    /// Same node count and every edge of `self` is an edge of `other`.
    pub fn is_edge_subgraph_of(&self, other: &Graph) -> bool {
        self.node_count() == other.node_count()
            && self.adj.iter().zip(&other.adj).all(|(a, b)| a.is_subset(*b))
    }

    pub fn is_complete(&self) -> bool {
        *self == Graph::complete(self.node_count())
    }
}

/// Reconnected complements computed in parent coordinates; renumbering is
/// deferred to [`PartialComplement::finish`].
#[derive(Clone)]
pub(crate) struct PartialComplement {
    adj: Vec<NodeSet>,
    pub(crate) active: NodeSet,
}

impl PartialComplement {
    pub(crate) fn new(g: &Graph) -> Self {
        PartialComplement {
            adj: g.adj.clone(),
            active: g.nodes(),
        }
    }

    /// Starts from the subgraph of `g` induced on `s`, still in `g`'s
    /// coordinates.
    pub(crate) fn on_subset(g: &Graph, s: NodeSet) -> Self {
        let mut adj = g.adj.clone();
        for v in s.iter() {
            adj[v - 1] &= s;
        }
        PartialComplement { adj, active: s }
    }

    fn neighborhood(&self, s: NodeSet) -> NodeSet {
        s.iter().fold(NodeSet::EMPTY, |acc, v| acc | self.adj[v - 1])
    }

    pub(crate) fn is_tube(&self, t: NodeSet) -> bool {
        if t.is_empty() || !t.is_subset(self.active) {
            return false;
        }
        let mut seen = t.lowest();
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = self.neighborhood(frontier) & t;
            frontier = next - seen;
            seen |= next;
        }
        seen == t
    }

    /// Removes `t ⊆ active`, joining its surviving neighbors pairwise.
    pub(crate) fn remove(&mut self, t: NodeSet) {
        debug_assert!(t.is_subset(self.active));
        self.active -= t;
        let boundary = self.neighborhood(t) & self.active;
        for v in self.active.iter() {
            let mut a = self.adj[v - 1] & self.active;
            if boundary.contains(v) {
                a |= boundary.without(v);
            }
            self.adj[v - 1] = a;
        }
        for v in t.iter() {
            self.adj[v - 1] = NodeSet::EMPTY;
        }
    }

    pub(crate) fn finish(&self) -> Relabeled {
        let s = self.active;
        let adj = s.iter().map(|v| self.adj[v - 1].compress(s)).collect();
        Relabeled {
            graph: Graph::from_adjacency(adj),
            support: s,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ns(v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(v.iter().copied())
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(1, 4)]).is_err());
        assert!(Graph::new(3, [(1, 2), (2, 1)]).is_err());
        assert!(Graph::new(0, []).is_err());
        assert!(matches!(Graph::new(65, []), Err(Error::Resource { .. })));
    }

    #[test]
    fn tube_examples() {
        let l3 = Graph::linear(3);
        assert!(l3.is_tube(ns(&[1, 2])).unwrap());
        assert!(!l3.is_tube(ns(&[1, 3])).unwrap());
        assert!(!l3.is_tube(NodeSet::EMPTY).unwrap());
        assert!(l3.is_tube(ns(&[4])).is_err());
        let k5 = Graph::complete(5);
        for bits in 1u64..32 {
            assert!(k5.is_tube(NodeSet::from_bits(bits)).unwrap());
        }
    }

    #[test]
    fn induced_examples() {
        assert_eq!(
            Graph::linear(5).induced_subgraph(ns(&[2, 3, 4])).unwrap(),
            Graph::linear(3)
        );
        assert_eq!(
            Graph::complete(6).induced_subgraph(ns(&[1, 3, 4, 6])).unwrap(),
            Graph::complete(4)
        );
        assert_eq!(
            Graph::cycle(5).induced_subgraph(ns(&[4])).unwrap(),
            Graph::complete(1)
        );
        assert!(Graph::linear(3).induced_subgraph(ns(&[1, 3])).is_err());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(
            Graph::complete(6).reconnected_complement(ns(&[2, 5])).unwrap(),
            Graph::complete(4)
        );
        assert_eq!(
            Graph::cycle(6).reconnected_complement(ns(&[2, 3])).unwrap(),
            Graph::cycle(4)
        );
        assert_eq!(
            Graph::linear(4).reconnected_complement(ns(&[2, 3])).unwrap(),
            Graph::linear(2)
        );
        assert!(Graph::linear(2).reconnected_complement(ns(&[1, 2])).is_err());
    }

    #[test]
    fn iterated_examples() {
        let k8 = Graph::complete(8);
        assert_eq!(
            k8.iterated_complement(&[ns(&[2, 3, 5, 6, 7, 8])]).unwrap(),
            Graph::complete(2)
        );
        assert_eq!(k8.iterated_complement(&[]).unwrap(), k8);
        let l4 = Graph::linear(4);
        let a = l4.iterated_complement(&[ns(&[1]), ns(&[4])]).unwrap();
        let b = l4.iterated_complement(&[ns(&[4]), ns(&[1])]).unwrap();
        assert_eq!(a, Graph::linear(2));
        assert_eq!(a, b);
        assert!(l4.iterated_complement(&[ns(&[1, 2]), ns(&[2])]).is_err());
    }

    #[test]
    fn relabel_table_pulls_back() {
        let r = Graph::cycle(6).complement_relabeled(ns(&[2, 3])).unwrap();
        assert_eq!(r.pull_back(ns(&[1, 2])), ns(&[1, 4]));
        assert_eq!(r.push_forward(ns(&[5, 6])), ns(&[3, 4]));
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::cycle(4);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":4,"edges":[[1,2],[1,4],[2,3],[3,4]]}"#);
        assert_eq!(serde_json::from_str::<Graph>(&s).unwrap(), g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[1,3]]}"#).is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (1..=n)
                .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
                .collect();
            proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |mask| {
                Graph::new(
                    n,
                    pairs.iter().zip(mask).filter(|(_, m)| *m).map(|(e, _)| *e),
                )
                .unwrap()
            })
        })
    }

    fn tubes_of(g: &Graph) -> Vec<NodeSet> {
        (1..(1u64 << g.node_count()))
            .map(NodeSet::from_bits)
            .filter(|&s| g.is_connected_set(s))
            .collect()
    }

    proptest! {
        #[test]
        fn disjoint_complements_commute(g in arb_graph(6), pick in any::<(u16, u16)>()) {
            let tubes = tubes_of(&g);
            let t = tubes[pick.0 as usize % tubes.len()];
            let ok: Vec<NodeSet> = tubes.iter().copied().filter(|u| u.is_disjoint(t)).collect();
            prop_assume!(!ok.is_empty());
            let u = ok[pick.1 as usize % ok.len()];
            prop_assume!(t | u != g.nodes());
            let a = g.iterated_complement(&[t, u]);
            let b = g.iterated_complement(&[u, t]);
            // Removing `t` only adds edges among survivors, so `u` stays a tube.
            prop_assert_eq!(a.unwrap(), b.unwrap());
        }

        #[test]
        fn complement_of_connected_is_connected(g in arb_graph(6), pick in any::<u16>()) {
            prop_assume!(g.is_connected());
            let proper: Vec<NodeSet> =
                tubes_of(&g).into_iter().filter(|&t| t != g.nodes()).collect();
            prop_assume!(!proper.is_empty());
            let t = proper[pick as usize % proper.len()];
            prop_assert!(g.reconnected_complement(t).unwrap().is_connected());
        }

        #[test]
        fn complement_preserves_order_and_edges(g in arb_graph(6), pick in any::<u16>()) {
            let proper: Vec<NodeSet> =
                tubes_of(&g).into_iter().filter(|&t| t != g.nodes()).collect();
            prop_assume!(!proper.is_empty());
            let t = proper[pick as usize % proper.len()];
            let r = g.complement_relabeled(t).unwrap();
            let survivors = r.support.to_vec();
            prop_assert_eq!(survivors.len(), g.node_count() - t.len());
            let touch = g.neighborhood(t) - t;
            for (i, &v) in survivors.iter().enumerate() {
                // Order preservation: the i-th survivor is local node i+1.
                prop_assert_eq!(r.push_forward(NodeSet::singleton(v)), NodeSet::singleton(i + 1));
                for (j, &w) in survivors.iter().enumerate().skip(i + 1) {
                    let expect = g.has_edge(v, w) || (touch.contains(v) && touch.contains(w));
                    prop_assert_eq!(r.graph.has_edge(i + 1, j + 1), expect);
                }
            }
        }
    }
}
