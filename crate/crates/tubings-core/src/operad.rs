//! The non-symmetric operad on linear-graph tubings and the permutad on
//! complete-graph tubings, both built from the signed partial compositions.
//!
//! Arity is the node count: x ∘_i y inserts y ∈ Tub(L_m) into x ∈ Tub(L_n) at
//! the tube {i+1, …, i+m} of L_{n+m}, for 0 ≤ i ≤ n. A permutad product
//! x ∘_σ y uses an (n, m)-shuffle σ, whose last m values form the tube of
//! K_{n+m} carrying y.

use crate::chain::{circ_signed_with, RelationReport, SignConvention};
use crate::error::Result;
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::tubing::{enumerate_tubings, Tubing};

type Term = (i64, Tubing);

fn linear_graft(conv: SignConvention, x: &Tubing, i: usize, y: &Tubing) -> Result<Term> {
    let (n, m) = (x.node_count(), y.node_count());
    let g = Graph::linear(n + m);
    circ_signed_with(conv, &g, NodeSet::range(i + 1, i + m), y, x)
}

fn then_graft(conv: SignConvention, (c, x): Term, i: usize, y: &Tubing) -> Result<Term> {
    let (d, r) = linear_graft(conv, &x, i, y)?;
    Ok((c * d, r))
}

fn parity(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Relation (a) (x ∘_i y) ∘_j z = ε (x ∘_{j−m} z) ∘_i y for i + m < j, and
/// relation (b) x ∘_i (y ∘_j z) = (x ∘_i y) ∘_{i+j} z, on all tubings of L_n,
/// L_m, L_p. Under the Koszul convention ε = (−1)^{dim y · dim z}; under the
/// literal one ε = 1.
pub fn ns_operad_relation_check(
    conv: SignConvention,
    n: usize,
    m: usize,
    p: usize,
) -> Result<RelationReport> {
    let mut rep = RelationReport::new("non-symmetric operad relations");
    let xs = enumerate_tubings(&Graph::linear(n))?;
    let ys = enumerate_tubings(&Graph::linear(m))?;
    let zs = enumerate_tubings(&Graph::linear(p))?;
    for x in &xs {
        for y in &ys {
            for z in &zs {
                let eps = match conv {
                    SignConvention::Koszul => parity(y.dimension() * z.dimension()),
                    SignConvention::Literal => 1,
                };
                for i in 0..=n {
                    let xy = linear_graft(conv, x, i, y)?;
                    for j in i + m + 1..=n + m {
                        let lhs = then_graft(conv, xy.clone(), j, z)?;
                        let xz = linear_graft(conv, x, j - m, z)?;
                        let rhs = then_graft(conv, xz, i, y)?;
                        rep.record(lhs.1 == rhs.1 && lhs.0 == eps * rhs.0, || {
                            format!("(a) x={x:?} y={y:?} z={z:?} i={i} j={j}: {} vs {}·{}", lhs.0, eps, rhs.0)
                        });
                    }
                    for j in 0..=m {
                        let yz = linear_graft(conv, y, j, z)?;
                        let (c, w) = yz;
                        let (d, lhs) = linear_graft(conv, x, i, &w)?;
                        let rhs = then_graft(conv, xy.clone(), i + j, z)?;
                        rep.record(lhs == rhs.1 && c * d == rhs.0, || {
                            format!("(b) x={x:?} y={y:?} z={z:?} i={i} j={j}: {} vs {}", c * d, rhs.0)
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// The (n, m)-shuffle whose last m values are `s`, as 1-based images.
fn shuffle_of(total: usize, s: NodeSet) -> Vec<usize> {
    let mut out = (NodeSet::full(total) - s).to_vec();
    out.extend(s.to_vec());
    out
}

/// Splits a permutation of 1..=total as a shuffle with blocks (first, rest).
fn shuffle_set(perm: &[usize], first: usize) -> Option<NodeSet> {
    let increasing = |w: &[usize]| w.windows(2).all(|p| p[0] < p[1]);
    (increasing(&perm[..first]) && increasing(&perm[first..]))
        .then(|| NodeSet::from_nodes(perm[first..].iter().copied()))
}

fn subsets(total: usize, size: usize) -> impl Iterator<Item = NodeSet> {
    (0u64..1 << total)
        .filter(move |b| b.count_ones() as usize == size)
        .map(NodeSet::from_bits)
}

fn permutad_product(conv: SignConvention, x: &Tubing, s: NodeSet, y: &Tubing) -> Result<Term> {
    let g = Graph::complete(x.node_count() + y.node_count());
    circ_signed_with(conv, &g, s, y, x)
}

/// (x ∘_σ y) ∘_τ z = x ∘_δ (y ∘_γ z) whenever τ·(σ × 1_p) = δ·(1_n × γ), for
/// x, y, z ranging over the tubings of K_n, K_m, K_p.
pub fn permutad_relation_check(
    conv: SignConvention,
    n: usize,
    m: usize,
    p: usize,
) -> Result<RelationReport> {
    let mut rep = RelationReport::new("permutad relation");
    let xs = enumerate_tubings(&Graph::complete(n))?;
    let ys = enumerate_tubings(&Graph::complete(m))?;
    let zs = enumerate_tubings(&Graph::complete(p))?;
    let total = n + m + p;
    for s in subsets(n + m, m) {
        let sigma = shuffle_of(n + m, s);
        for u in subsets(total, p) {
            let tau = shuffle_of(total, u);
            // π = τ·(σ × 1_p); δ must agree with π on 1..=n, and its last
            // block is then the remaining values as a set.
            let pi: Vec<usize> = (0..total)
                .map(|k| if k < n + m { tau[sigma[k] - 1] } else { tau[k] })
                .collect();
            let Some(d) = pi[..n]
                .windows(2)
                .all(|w| w[0] < w[1])
                .then(|| NodeSet::from_nodes(pi[n..].iter().copied()))
            else {
                rep.record(false, || format!("σ={sigma:?} τ={tau:?}: no δ"));
                continue;
            };
            let delta = shuffle_of(total, d);
            let mut delta_inv = vec![0; total + 1];
            for (k, &v) in delta.iter().enumerate() {
                delta_inv[v] = k + 1;
            }
            let gamma: Vec<usize> = pi[n..].iter().map(|&v| delta_inv[v] - n).collect();
            let Some(gs) = shuffle_set(&gamma, m) else {
                rep.record(false, || format!("σ={sigma:?} τ={tau:?}: no γ"));
                continue;
            };
            for x in &xs {
                for y in &ys {
                    let (a, xy) = permutad_product(conv, x, s, y)?;
                    for z in &zs {
                        let (b, lhs) = permutad_product(conv, &xy, u, z)?;
                        let (c, yz) = permutad_product(conv, y, gs, z)?;
                        let (e, rhs) = permutad_product(conv, x, d, &yz)?;
                        rep.record(lhs == rhs && a * b == c * e, || {
                            format!("x={x:?} y={y:?} z={z:?} σ={sigma:?} τ={tau:?}: {} vs {}", a * b, c * e)
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Every size triple with positive parts and n + m + p ≤ max_total.
pub fn size_triples(max_total: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for n in 1..max_total {
        for m in 1..max_total - n {
            for p in 1..=max_total - n - m {
                out.push((n, m, p));
            }
        }
    }
    out
}

fn merge(name: &'static str, reps: Vec<RelationReport>) -> RelationReport {
    let mut all = RelationReport::new(name);
    for r in reps {
        all.absorb(r);
    }
    all
}

pub fn ns_operad_suite(conv: SignConvention, max_total: usize) -> Result<RelationReport> {
    let reps = size_triples(max_total)
        .into_iter()
        .map(|(n, m, p)| ns_operad_relation_check(conv, n, m, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge("non-symmetric operad relations", reps))
}

pub fn permutad_suite(conv: SignConvention, max_total: usize) -> Result<RelationReport> {
    let reps = size_triples(max_total)
        .into_iter()
        .map(|(n, m, p)| permutad_relation_check(conv, n, m, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge("permutad relation", reps))
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: SignConvention = SignConvention::Koszul;

    #[test]
    fn shuffles() {
        assert_eq!(shuffle_of(4, NodeSet::from_nodes([2, 4])), vec![1, 3, 2, 4]);
        assert_eq!(shuffle_set(&[1, 3, 2, 4], 2), Some(NodeSet::from_nodes([2, 4])));
        assert_eq!(shuffle_set(&[3, 1, 2, 4], 2), None);
        assert_eq!(subsets(4, 2).count(), 6);
        assert_eq!(size_triples(4), vec![(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1)]);
    }

    #[test]
    fn linear_graft_is_tree_grafting() {
        let x = Tubing::trivial(Graph::linear(2)).unwrap();
        let y = Tubing::trivial(Graph::linear(1)).unwrap();
        let (c, r) = linear_graft(K, &x, 0, &y).unwrap();
        assert_eq!(c, 1);
        assert_eq!(r.tubes(), &[NodeSet::singleton(1), NodeSet::full(3)]);
        let (_, r) = linear_graft(K, &x, 2, &y).unwrap();
        assert!(r.contains_tube(NodeSet::singleton(3)) && r.tube_count() == 2);
    }

    #[test]
    fn degenerate_and_small_sizes() {
        for (n, m, p) in [(1, 1, 1), (2, 2, 2)] {
            assert!(ns_operad_relation_check(K, n, m, p).unwrap().pass());
            assert!(permutad_relation_check(K, n, m, p).unwrap().pass());
        }
    }

    #[test]
    fn literal_signs_break_the_permutad_relation() {
        assert!(!permutad_relation_check(SignConvention::Literal, 1, 1, 1).unwrap().pass());
    }

    #[test]
    fn suites_up_to_five_nodes() {
        let a = ns_operad_suite(K, 5).unwrap();
        let b = permutad_suite(K, 5).unwrap();
        assert!(a.pass(), "{:?}", a.failures);
        assert!(b.pass(), "{:?}", b.failures);
        assert!(a.checked > 0 && b.checked > 0);
    }
}
