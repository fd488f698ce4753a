//! Substitution of tubings into tubes and reconnected complements.

use std::sync::Arc;

use crate::error::{input, precondition, Result};
use crate::graph::{Graph, PartialComplement, Relabeled};
use crate::nodeset::NodeSet;
use crate::opcat::tube_numbering;
use crate::tubing::{induce_member, is_tubing, restriction_map, Tubing};

/// A tubing whose tubes carry labels `t^0 = t_Γ, t^1, …, t^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTubing {
    base: Tubing,
    labels: Vec<NodeSet>,
}

impl LabeledTubing {
    pub fn new(base: Tubing, labels: Vec<NodeSet>) -> Result<LabeledTubing> {
        if labels.first() != Some(&base.universal()) {
            return input("label t^0 must be the universal tube");
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted != base.tubes() {
            return input("labels must enumerate exactly the tubes of the tubing");
        }
        Ok(LabeledTubing { base, labels })
    }

    /// t^0 = t_Γ, then the proper tubes in order of their canonical numbers.
    pub fn by_numbering(base: Tubing) -> LabeledTubing {
        let mut labels: Vec<NodeSet> = tube_numbering(&base)
            .into_iter()
            .map(|(t, _)| t)
            .filter(|&t| t != base.universal())
            .collect();
        labels.insert(0, base.universal());
        LabeledTubing { base, labels }
    }

    pub fn base(&self) -> &Tubing {
        &self.base
    }

    pub fn labels(&self) -> &[NodeSet] {
        &self.labels
    }
}

fn require_member(tubing: &Tubing, t: NodeSet) -> Result<()> {
    if tubing.contains_tube(t) {
        Ok(())
    } else {
        input(format!("{t} is not a tube of the tubing"))
    }
}

fn require_graph(got: &Graph, expected: &Graph, what: &str) -> Result<()> {
    if got == expected {
        Ok(())
    } else {
        input(format!(
            "{what}: expected a tubing on {expected:?}, got one on {got:?}"
        ))
    }
}

/// Maximal tubes of `tubing` strictly inside `t`.
fn inner_maximal(tubing: &Tubing, t: NodeSet) -> Vec<NodeSet> {
    let inner: Vec<NodeSet> = tubing
        .tubes()
        .iter()
        .copied()
        .filter(|u| u.is_proper_subset(t))
        .collect();
    inner
        .iter()
        .copied()
        .filter(|&u| !inner.iter().any(|&w| u.is_proper_subset(w)))
        .collect()
}

/// (Γ_t)_{T|_t}*: the complement of the maximal tubes of `T` inside `t`,
/// with its support given in Γ coordinates.
pub fn fiber_graph(tubing: &Tubing, t: NodeSet) -> Result<Relabeled> {
    require_member(tubing, t)?;
    let mut pc = PartialComplement::on_subset(tubing.graph(), t);
    for m in inner_maximal(tubing, t) {
        pc.remove(m);
    }
    Ok(pc.finish())
}

/// T ∘_t S: adds the tubes of `S` (a tubing of Γ_t) pulled back to Γ.
pub fn insert_in_tube(tubing: &Tubing, t: NodeSet, s: &Tubing) -> Result<Tubing> {
    require_member(tubing, t)?;
    let r = tubing.graph().restrict_nodes(t);
    require_graph(s.graph(), &r.graph, "insert_in_tube")?;
    let mut tubes = tubing.tubes().to_vec();
    tubes.extend(s.tubes().iter().map(|&u| r.pull_back(u)));
    Tubing::new(tubing.graph_arc().clone(), tubes)
}

/// T ◊ S: adds each tube of `S` (a tubing of Γ_t*), absorbing `t` when the
/// tube is linked to it.
pub fn insert_in_complement(tubing: &Tubing, t: NodeSet, s: &Tubing) -> Result<Tubing> {
    require_member(tubing, t)?;
    if t == tubing.universal() {
        return precondition("the universal tube has an empty complement");
    }
    let g = tubing.graph();
    let r = g.complement_relabeled(t)?;
    require_graph(s.graph(), &r.graph, "insert_in_complement")?;
    let induced = induce_member(tubing, t);
    let mut joint = induced.tubes().to_vec();
    joint.extend_from_slice(s.tubes());
    if !is_tubing(s.graph(), &joint) {
        return precondition("the inserted tubing is not compatible with the induced tubing");
    }
    let mut tubes = tubing.tubes().to_vec();
    for &u in s.tubes() {
        let u = r.pull_back(u);
        tubes.push(if g.adjacent(u, t) { u | t } else { u });
    }
    Tubing::new(tubing.graph_arc().clone(), tubes)
}

fn close(g: &Graph, inner: &[NodeSet], s: NodeSet) -> NodeSet {
    inner
        .iter()
        .filter(|&&m| g.adjacent(m, s))
        .fold(s, |acc, &m| acc | m)
}

/// s̃: the tube `s` of Γ_T* in Γ coordinates, joined with every maximal
/// proper tube of `T` linked to it.
pub fn tilde_closure(tubing: &Tubing, s: NodeSet) -> Result<NodeSet> {
    let fib = fiber_graph(tubing, tubing.universal())?;
    if !fib.graph.is_tube(s)? {
        return precondition(format!("{s} is not a tube of the complement"));
    }
    let inner = tubing.maximal_proper_tubes();
    Ok(close(tubing.graph(), &inner, fib.pull_back(s)))
}

/// γ_t(T; S) for `S` a tubing of (Γ_t)_{T|_t}*.
pub fn gamma_t(tubing: &Tubing, t: NodeSet, s: &Tubing) -> Result<Tubing> {
    let fib = fiber_graph(tubing, t)?;
    require_graph(s.graph(), &fib.graph, "gamma_t")?;
    let inner = inner_maximal(tubing, t);
    let g = tubing.graph();
    let mut tubes = tubing.tubes().to_vec();
    tubes.extend(s.tubes().iter().map(|&u| close(g, &inner, fib.pull_back(u))));
    Ok(Tubing::from_parts(tubing.graph_arc().clone(), tubes))
}

/// The closure s̃ in Γ of a tube `s` of the fiber (Γ_t)_{T|_t}*.
pub fn closure_in_fiber(tubing: &Tubing, t: NodeSet, s: NodeSet) -> Result<NodeSet> {
    let fib = fiber_graph(tubing, t)?;
    if !fib.graph.is_tube(s)? {
        return precondition(format!("{s} is not a tube of the fiber"));
    }
    let inner = inner_maximal(tubing, t);
    Ok(close(tubing.graph(), &inner, fib.pull_back(s)))
}

/// γ(T; S^0, …, S^k), slot `i` feeding label `t^i`.
pub fn gamma_full(labeled: &LabeledTubing, slots: &[Tubing]) -> Result<Tubing> {
    let labels = labeled.labels();
    if slots.len() != labels.len() {
        return input(format!(
            "expected {} slot tubings, got {}",
            labels.len(),
            slots.len()
        ));
    }
    for (i, (&t, s)) in labels.iter().zip(slots).enumerate() {
        let fib = fiber_graph(labeled.base(), t)?;
        if *s.graph() != fib.graph {
            return input(format!(
                "slot {i}: expected a tubing on {:?}, got one on {:?}",
                fib.graph,
                s.graph()
            ));
        }
    }
    let mut out = labeled.base().clone();
    for (i, (&t, s)) in labels.iter().zip(slots).enumerate() {
        out = gamma_t(&out, t, s).map_err(|e| crate::Error::Input(format!("slot {i}: {e}")))?;
    }
    Ok(out)
}

/// Proper tubes of `T`, innermost first; each is maximal among those
/// inserted so far when its turn comes.
pub fn generator_decomposition(tubing: &Tubing) -> Vec<NodeSet> {
    let mut seq: Vec<NodeSet> = tubing.proper_tubes().collect();
    seq.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    seq
}

/// Rebuilds a tubing from T_Γ by single-tube substitutions γ_{t_Γ}(·, {u}).
pub fn replay_generators(graph: &Graph, seq: &[NodeSet]) -> Result<Tubing> {
    let mut cur = Tubing::trivial(Arc::new(graph.clone()))?;
    for &u in seq {
        let fib = fiber_graph(&cur, cur.universal())?;
        let local = fib.push_forward(u);
        let step = Tubing::new(fib.graph.clone(), [local, fib.graph.nodes()])?;
        cur = gamma_t(&cur, cur.universal(), &step)?;
    }
    Ok(cur)
}

/// γ_{t′}(γ_t(T;S);S′) = γ_t(γ_{t′}(T;S′);S).
pub fn commutation_holds(
    tubing: &Tubing,
    t: NodeSet,
    s: &Tubing,
    t2: NodeSet,
    s2: &Tubing,
) -> Result<bool> {
    let a = gamma_t(&gamma_t(tubing, t, s)?, t2, s2)?;
    let b = gamma_t(&gamma_t(tubing, t2, s2)?, t, s)?;
    Ok(a == b)
}

/// For a tube `u` of `S` and `W` on the fiber of `S` at `u`: the fibers of
/// `S` at `u` and of γ_t(T;S) at ũ agree, and
/// γ_t(T, γ_u(S,W)) = γ_ũ(γ_t(T,S), W).
pub fn associativity_holds(
    tubing: &Tubing,
    t: NodeSet,
    s: &Tubing,
    u: NodeSet,
    w: &Tubing,
) -> Result<bool> {
    let inner = gamma_t(tubing, t, s)?;
    let u_tilde = closure_in_fiber(tubing, t, u)?;
    let left_fiber = fiber_graph(s, u)?.graph;
    let right_fiber = fiber_graph(&inner, u_tilde)?.graph;
    if left_fiber != right_fiber {
        return Ok(false);
    }
    let lhs = gamma_t(tubing, t, &gamma_t(s, u, w)?)?;
    let rhs = gamma_t(&inner, u_tilde, w)?;
    Ok(lhs == rhs)
}

/// Restriction to a spanning subgraph Ω commutes with γ_t: the slots of the
/// components t_i of `t` in Ω receive the tubings induced by `S`.
pub fn restriction_commutes(tubing: &Tubing, t: NodeSet, s: &Tubing, omega: &Graph) -> Result<bool> {
    let fib = fiber_graph(tubing, t)?;
    require_graph(s.graph(), &fib.graph, "restriction_commutes")?;
    let res = restriction_map(tubing, omega)?;
    let mut cur = res.clone();
    for ti in omega.components(t) {
        let fi = fiber_graph(&res, ti)?;
        let mut tubes = Vec::new();
        for &u in s.tubes() {
            let part = fib.pull_back(u) & fi.support;
            for c in fi.graph.components(fi.push_forward(part)) {
                tubes.push(c);
            }
        }
        let slot = match Tubing::new(fi.graph.clone(), tubes) {
            Ok(x) => x,
            Err(_) => return Ok(false),
        };
        cur = gamma_t(&cur, ti, &slot)?;
    }
    Ok(cur == restriction_map(&gamma_t(tubing, t, s)?, omega)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tubing::{enumerate_tubings, from_surjection, to_surjection};
    use proptest::prelude::*;

    fn ns(v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(v.iter().copied())
    }

    fn tubing(g: Graph, tubes: &[&[usize]]) -> Tubing {
        Tubing::new(g, tubes.iter().map(|t| ns(t))).unwrap()
    }

    fn k8_base() -> Tubing {
        tubing(
            Graph::complete(8),
            &[&[3], &[2, 3, 6, 7], &[2, 3, 5, 6, 7, 8], &[1, 2, 3, 4, 5, 6, 7, 8]],
        )
    }

    #[test]
    fn k8_full_substitution() {
        let lt = LabeledTubing::by_numbering(k8_base());
        assert_eq!(
            lt.labels(),
            &[
                NodeSet::full(8),
                ns(&[3]),
                ns(&[2, 3, 6, 7]),
                ns(&[2, 3, 5, 6, 7, 8])
            ]
        );
        let slots = vec![
            tubing(Graph::complete(2), &[&[2], &[1, 2]]),
            Tubing::trivial(Graph::complete(1)).unwrap(),
            tubing(Graph::complete(3), &[&[2], &[1, 2], &[1, 2, 3]]),
            tubing(Graph::complete(2), &[&[1], &[1, 2]]),
        ];
        let out = gamma_full(&lt, &slots).unwrap();
        let expect = tubing(
            Graph::complete(8),
            &[
                &[1, 2, 3, 4, 5, 6, 7, 8],
                &[3],
                &[3, 6],
                &[2, 3, 6],
                &[2, 3, 6, 7],
                &[2, 3, 5, 6, 7],
                &[2, 3, 5, 6, 7, 8],
                &[2, 3, 4, 5, 6, 7, 8],
            ],
        );
        assert_eq!(out, expect);
        assert_eq!(to_surjection(&out).unwrap(), vec![8, 3, 1, 7, 5, 2, 4, 6]);
    }

    #[test]
    fn k8_slot_errors_name_the_slot() {
        let lt = LabeledTubing::by_numbering(k8_base());
        let slots = vec![
            Tubing::trivial(Graph::complete(2)).unwrap(),
            Tubing::trivial(Graph::complete(2)).unwrap(),
            Tubing::trivial(Graph::complete(3)).unwrap(),
            Tubing::trivial(Graph::complete(2)).unwrap(),
        ];
        let err = gamma_full(&lt, &slots).unwrap_err().to_string();
        assert!(err.contains("slot 1"), "{err}");
        assert!(gamma_full(&lt, &slots[..2]).is_err());
    }

    #[test]
    fn k6_single_substitution() {
        let t = tubing(Graph::complete(6), &[&[1, 4], &[1, 3, 4, 6], &[1, 2, 3, 4, 5, 6]]);
        let s = tubing(Graph::complete(2), &[&[2], &[1, 2]]);
        let out = gamma_t(&t, ns(&[1, 3, 4, 6]), &s).unwrap();
        assert_eq!(out, from_surjection(&[1, 4, 3, 1, 4, 2]).unwrap());
        assert_eq!(
            out.tubes(),
            tubing(
                Graph::complete(6),
                &[&[1, 4], &[1, 4, 6], &[1, 3, 4, 6], &[1, 2, 3, 4, 5, 6]]
            )
            .tubes()
        );
    }

    #[test]
    fn gamma_on_trivial_tubing_is_the_argument() {
        let g = Graph::cycle(5);
        for s in enumerate_tubings(&g).unwrap() {
            let triv = Tubing::trivial(g.clone()).unwrap();
            assert_eq!(gamma_t(&triv, g.nodes(), &s).unwrap(), s);
        }
    }

    #[test]
    fn trivial_slots_give_the_base() {
        let lt = LabeledTubing::by_numbering(k8_base());
        let slots: Vec<Tubing> = lt
            .labels()
            .iter()
            .map(|&t| Tubing::trivial(fiber_graph(lt.base(), t).unwrap().graph).unwrap())
            .collect();
        assert_eq!(&gamma_full(&lt, &slots).unwrap(), lt.base());
    }

    #[test]
    fn insertion_examples() {
        let t = tubing(Graph::complete(3), &[&[1, 2], &[1, 2, 3]]);
        let s = tubing(Graph::complete(2), &[&[1], &[1, 2]]);
        assert_eq!(
            insert_in_tube(&t, ns(&[1, 2]), &s).unwrap(),
            tubing(Graph::complete(3), &[&[1], &[1, 2], &[1, 2, 3]])
        );
        let triv = Tubing::trivial(Graph::complete(2)).unwrap();
        assert_eq!(insert_in_tube(&t, ns(&[1, 2]), &triv).unwrap(), t);
        let l4 = Tubing::trivial(Graph::linear(4)).unwrap();
        let s4 = tubing(Graph::linear(4), &[&[2], &[4], &[1, 2, 3, 4]]);
        assert_eq!(insert_in_tube(&l4, NodeSet::full(4), &s4).unwrap(), s4);

        let l3 = tubing(Graph::linear(3), &[&[1], &[1, 2, 3]]);
        let near = tubing(Graph::linear(2), &[&[1], &[1, 2]]);
        let far = tubing(Graph::linear(2), &[&[2], &[1, 2]]);
        assert_eq!(
            insert_in_complement(&l3, ns(&[1]), &near).unwrap(),
            tubing(Graph::linear(3), &[&[1], &[1, 2], &[1, 2, 3]])
        );
        assert_eq!(
            insert_in_complement(&l3, ns(&[1]), &far).unwrap(),
            tubing(Graph::linear(3), &[&[1], &[3], &[1, 2, 3]])
        );
        let triv2 = Tubing::trivial(Graph::linear(2)).unwrap();
        assert_eq!(insert_in_complement(&l3, ns(&[1]), &triv2).unwrap(), l3);
    }

    #[test]
    fn tilde_examples() {
        let g = Graph::cycle(5);
        let triv = Tubing::trivial(g.clone()).unwrap();
        assert_eq!(tilde_closure(&triv, ns(&[2, 3])).unwrap(), ns(&[2, 3]));
        let l4 = tubing(Graph::linear(4), &[&[2], &[4], &[1, 2, 3, 4]]);
        assert_eq!(tilde_closure(&l4, ns(&[1])).unwrap(), ns(&[1, 2]));
        let k8 = tubing(Graph::complete(8), &[&[3], &[1, 2, 3, 4, 5, 6, 7, 8]]);
        let six = NodeSet::singleton(6).compress(NodeSet::full(8).without(3));
        assert_eq!(tilde_closure(&k8, six).unwrap(), ns(&[3, 6]));
    }

    #[test]
    fn complement_insertion_is_gamma_of_two_tube_tubing() {
        for g in [Graph::cycle(5), Graph::linear(4), Graph::complete(4)] {
            for t in crate::tubing::all_tubes(&g).unwrap() {
                if t == g.nodes() {
                    continue;
                }
                let base = Tubing::new(g.clone(), [t, g.nodes()]).unwrap();
                let comp = g.reconnected_complement(t).unwrap();
                for s in enumerate_tubings(&comp).unwrap() {
                    assert_eq!(
                        insert_in_complement(&base, t, &s).unwrap(),
                        gamma_t(&base, g.nodes(), &s).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn generator_examples() {
        let triv = Tubing::trivial(Graph::complete(3)).unwrap();
        assert!(generator_decomposition(&triv).is_empty());
        let t = tubing(Graph::complete(3), &[&[1], &[1, 2], &[1, 2, 3]]);
        let seq = generator_decomposition(&t);
        assert_eq!(seq, vec![ns(&[1]), ns(&[1, 2])]);
        assert_eq!(replay_generators(t.graph(), &seq).unwrap(), t);
    }

    fn sample_tubings() -> Vec<Tubing> {
        [
            Graph::complete(4),
            Graph::cycle(5),
            Graph::new(5, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (2, 5)]).unwrap(),
        ]
        .iter()
        .flat_map(|g| enumerate_tubings(g).unwrap())
        .collect()
    }

    proptest! {
        #[test]
        fn gamma_contains_base(t in proptest::sample::select(sample_tubings()), pick in any::<(u16, u16)>()) {
            let tube = t.tubes()[pick.0 as usize % t.tube_count()];
            let fib = fiber_graph(&t, tube).unwrap();
            let slots = enumerate_tubings(&fib.graph).unwrap();
            let s = &slots[pick.1 as usize % slots.len()];
            let out = gamma_t(&t, tube, s).unwrap();
            prop_assert!(t.tubes().iter().all(|&u| out.contains_tube(u)));
            prop_assert_eq!(out.tube_count(), t.tube_count() + s.tube_count() - 1);
        }
    }
}
