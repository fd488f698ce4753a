//! Tubings as bases of finite topologies on the node set.

use crate::error::{precondition, Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::tubing::{all_tubes, is_tubing, Tubing};

/// Largest tube count for which every tube collection is examined.
pub const COLLECTION_CAP: usize = 20;

/// All unions of subfamilies of the tubes of `tubing`, plus the empty set,
/// in canonical order.
pub fn generated_topology(tubing: &Tubing) -> Vec<NodeSet> {
    unions(tubing.tubes())
}

fn unions(family: &[NodeSet]) -> Vec<NodeSet> {
    let mut opens = vec![NodeSet::EMPTY];
    for &b in family {
        let extra: Vec<NodeSet> = opens.iter().map(|&o| o | b).collect();
        opens.extend(extra);
        opens.sort();
        opens.dedup();
    }
    opens
}

/// `family` covers `points` and each pairwise intersection is a union of
/// members.
pub fn is_topological_basis(points: NodeSet, family: &[NodeSet]) -> bool {
    let cover = family.iter().fold(NodeSet::EMPTY, |acc, &b| acc | b);
    if cover != points || family.iter().any(|b| !b.is_subset(points)) {
        return false;
    }
    family.iter().enumerate().all(|(i, &a)| {
        family[i + 1..].iter().all(|&b| {
            let meet = a & b;
            let inner = family
                .iter()
                .filter(|c| c.is_subset(meet))
                .fold(NodeSet::EMPTY, |acc, &c| acc | c);
            inner == meet
        })
    })
}

/// The subspace {v, w} is discrete iff some basis member contains v but not
/// w and another contains w but not v.
fn two_point_connected(basis: &[NodeSet], v: usize, w: usize) -> bool {
    let sep = |a: usize, b: usize| basis.iter().any(|s| s.contains(a) && !s.contains(b));
    !(sep(v, w) && sep(w, v))
}

fn condition_holds(g: &Graph, basis: &[NodeSet]) -> bool {
    if !g.edges().iter().all(|&(v, w)| two_point_connected(basis, v, w)) {
        return false;
    }
    basis.iter().filter(|&&t| t != g.nodes()).all(|&t| {
        let r = g.complement_relabeled(t).expect("proper tube");
        r.graph.edges().iter().all(|&(a, b)| {
            let v = NodeSet::singleton(a).expand(r.support).min_node().expect("node");
            let w = NodeSet::singleton(b).expand(r.support).min_node().expect("node");
            two_point_connected(basis, v, w)
        })
    })
}

/// Every edge of Γ, and of Γ_t* for each proper basis member t, spans a
/// connected two-point subspace.
pub fn satisfies_connectivity_condition(g: &Graph, basis: &[NodeSet]) -> Result<bool> {
    for &t in basis {
        if !g.is_tube(t)? {
            return precondition(format!("basis member {t} is not a tube"));
        }
    }
    if !is_topological_basis(g.nodes(), basis) {
        return precondition("family is not a topological basis");
    }
    Ok(condition_holds(g, basis))
}

/// Collections of tubes where "is a tubing" and "is a basis satisfying the
/// connectivity condition" disagree.
pub fn topo_equivalence_failures(g: &Graph) -> Result<(usize, Vec<Vec<NodeSet>>)> {
    let tubes = all_tubes(g)?;
    if tubes.len() > COLLECTION_CAP {
        return Err(Error::Resource {
            what: "tube count for collection sweep",
            limit: COLLECTION_CAP,
            got: tubes.len(),
        });
    }
    let mut fails = Vec::new();
    let total = 1usize << tubes.len();
    for mask in 0..total {
        let fam: Vec<NodeSet> = (0..tubes.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| tubes[i])
            .collect();
        let lhs = is_tubing(g, &fam);
        let rhs = is_topological_basis(g.nodes(), &fam) && condition_holds(g, &fam);
        if lhs != rhs {
            fails.push(fam);
        }
    }
    Ok((total, fails))
}

/// Exhaustive check of the tubing / topological-basis equivalence on `g`.
pub fn tubing_iff_basis_check(g: &Graph) -> Result<bool> {
    Ok(topo_equivalence_failures(g)?.1.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tubing::enumerate_tubings;

    fn ns(v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(v.iter().copied())
    }

    #[test]
    fn topology_examples() {
        let l3 = Graph::linear(3);
        assert_eq!(
            generated_topology(&Tubing::trivial(l3.clone()).unwrap()),
            vec![NodeSet::EMPTY, ns(&[1, 2, 3])]
        );
        let t = Tubing::new(l3, [ns(&[1]), ns(&[3]), ns(&[1, 2, 3])]).unwrap();
        let mut expect = vec![NodeSet::EMPTY, ns(&[1]), ns(&[3]), ns(&[1, 3]), ns(&[1, 2, 3])];
        expect.sort();
        assert_eq!(generated_topology(&t), expect);
        let k2 = Tubing::new(Graph::complete(2), [ns(&[1]), ns(&[1, 2])]).unwrap();
        assert_eq!(
            generated_topology(&k2),
            vec![NodeSet::EMPTY, ns(&[1]), ns(&[1, 2])]
        );
    }

    #[test]
    fn connectivity_examples() {
        let k2 = Graph::complete(2);
        assert!(!satisfies_connectivity_condition(&k2, &[ns(&[1]), ns(&[2]), ns(&[1, 2])]).unwrap());
        assert!(satisfies_connectivity_condition(&Graph::linear(3), &[ns(&[1, 2, 3])]).unwrap());
        assert!(satisfies_connectivity_condition(&k2, &[ns(&[1])]).is_err());
        for g in [Graph::cycle(4), Graph::complete(4), Graph::linear(4)] {
            for t in enumerate_tubings(&g).unwrap() {
                assert!(satisfies_connectivity_condition(&g, t.tubes()).unwrap());
            }
        }
    }

    #[test]
    fn equivalence_small_graphs() {
        for g in [Graph::linear(3), Graph::complete(3), Graph::linear(4)] {
            assert!(tubing_iff_basis_check(&g).unwrap(), "{g:?}");
        }
        assert!(tubing_iff_basis_check(&Graph::complete(5)).is_err());
    }

    #[test]
    fn edges_span_connected_subspaces() {
        for g in [Graph::cycle(5), Graph::complete(4)] {
            for t in enumerate_tubings(&g).unwrap() {
                let opens = generated_topology(&t);
                for (v, w) in g.edges() {
                    assert!(two_point_connected(&opens, v, w));
                }
            }
        }
    }
}
