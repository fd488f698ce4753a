use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub, SubAssign};

/// Largest supported node count.
pub const MAX_NODES: usize = 64;

/// A set of nodes of an ambient graph. Node `v` (1-based) is bit `v - 1`.
///
/// The total order is the canonical tube order: empty set first, then by
/// minimal node, then by size, then lexicographically on the ascending
/// node lists.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Nodes `1..=n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_NODES);
        if n == MAX_NODES {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!((1..=MAX_NODES).contains(&v));
        NodeSet(1u64 << (v - 1))
    }

    /// Nodes `a..=b`; empty when `a > b`.
    pub fn range(a: usize, b: usize) -> Self {
        if a > b {
            return NodeSet::EMPTY;
        }
        NodeSet(NodeSet::full(b).0 & !NodeSet::full(a - 1).0)
    }

    pub fn from_nodes<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        nodes
            .into_iter()
            .fold(NodeSet::EMPTY, |acc, v| acc | NodeSet::singleton(v))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=MAX_NODES).contains(&v) && self.0 >> (v - 1) & 1 == 1
    }

    pub fn min_node(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn max_node(self) -> Option<usize> {
        (self.0 != 0).then(|| MAX_NODES - self.0.leading_zeros() as usize)
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: NodeSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn intersects(self, other: NodeSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn with(self, v: usize) -> Self {
        self | NodeSet::singleton(v)
    }

    pub fn without(self, v: usize) -> Self {
        self - NodeSet::singleton(v)
    }

    /// Lowest node as a singleton set (empty if `self` is empty).
    pub fn lowest(self) -> NodeSet {
        NodeSet(self.0 & self.0.wrapping_neg())
    }

    /// Ascending iteration over nodes.
    pub fn iter(self) -> Nodes {
        Nodes(self.0)
    }

    /// Rank of `v` inside `self` (1-based); `v` must be a member.
    pub fn rank(self, v: usize) -> usize {
        debug_assert!(self.contains(v));
        (self.0 & ((1u64 << (v - 1)) - 1)).count_ones() as usize + 1
    }

    /// Renumbers `self ∩ support` order-preservingly into `1..=|support|`.
    pub fn compress(self, support: NodeSet) -> NodeSet {
        let mut out = 0u64;
        let mut bit = 0;
        for v in support.iter() {
            if self.contains(v) {
                out |= 1u64 << bit;
            }
            bit += 1;
        }
        NodeSet(out)
    }

    /// Inverse of [`compress`](Self::compress): local node `k` becomes the
    /// `k`-th smallest member of `support`.
    pub fn expand(self, support: NodeSet) -> NodeSet {
        let mut out = 0u64;
        for (k, v) in support.iter().enumerate() {
            if self.0 >> k & 1 == 1 {
                out |= 1u64 << (v - 1);
            }
        }
        NodeSet(out)
    }

    /// Ascending node list.
    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Shifts every node up by `k`.
    pub fn shift(self, k: usize) -> NodeSet {
        debug_assert!(self.max_node().is_none_or(|m| m + k <= MAX_NODES));
        if k >= 64 {
            NodeSet::EMPTY
        } else {
            NodeSet(self.0 << k)
        }
    }
}

/// Ascending node iterator.
pub struct Nodes(u64);

impl Iterator for Nodes {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Nodes {}

impl IntoIterator for NodeSet {
    type Item = usize;
    type IntoIter = Nodes;

    fn into_iter(self) -> Nodes {
        self.iter()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        NodeSet::from_nodes(iter)
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let key = |s: &NodeSet| (s.min_node().unwrap_or(0), s.len());
        key(self).cmp(&key(other)).then_with(|| {
            // Equal size: the ascending lists first differ at the lowest
            // differing bit, which the smaller list owns.
            let d = self.0 ^ other.0;
            if self.0 & d & d.wrapping_neg() != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl BitOr for NodeSet {
    type Output = NodeSet;
    fn bitor(self, rhs: NodeSet) -> NodeSet {
        NodeSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for NodeSet {
    fn bitor_assign(&mut self, rhs: NodeSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for NodeSet {
    type Output = NodeSet;
    fn bitand(self, rhs: NodeSet) -> NodeSet {
        NodeSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for NodeSet {
    fn bitand_assign(&mut self, rhs: NodeSet) {
        self.0 &= rhs.0;
    }
}

impl Sub for NodeSet {
    type Output = NodeSet;
    fn sub(self, rhs: NodeSet) -> NodeSet {
        NodeSet(self.0 & !rhs.0)
    }
}

impl SubAssign for NodeSet {
    fn sub_assign(&mut self, rhs: NodeSet) {
        self.0 &= !rhs.0;
    }
}

impl Not for NodeSet {
    type Output = NodeSet;
    fn not(self) -> NodeSet {
        NodeSet(!self.0)
    }
}
