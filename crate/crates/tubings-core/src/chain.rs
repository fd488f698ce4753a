//! Signed partial compositions, the boundary operator and the pre-Lie
//! coproduct on the span of tubings.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{input, precondition, Result};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::opcat::tube_numbering;
use crate::tubing::{all_tubes, compatible, enumerate_tubings, induce_member, restrict_member, Tubing};

/// Integer combination of tubings. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TubingChain {
    terms: BTreeMap<Tubing, i64>,
}

impl TubingChain {
    pub fn zero() -> TubingChain {
        TubingChain::default()
    }

    pub fn single(t: Tubing, c: i64) -> TubingChain {
        let mut out = TubingChain::zero();
        out.add_term(t, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &Tubing) -> i64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tubing, i64)> {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn add_term(&mut self, t: Tubing, c: i64) {
        add_to_map(&mut self.terms, t, c);
    }

    /// `self += scale · other`.
    pub fn add_scaled(&mut self, other: &TubingChain, scale: i64) {
        for (t, c) in other.terms() {
            let c = c.checked_mul(scale).expect("chain coefficient overflow");
            self.add_term(t.clone(), c);
        }
    }

    pub fn scaled(&self, scale: i64) -> TubingChain {
        let mut out = TubingChain::zero();
        out.add_scaled(self, scale);
        out
    }
}

impl Serialize for TubingChain {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            coeff: i64,
            tubing: &'a Tubing,
        }
        let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
        for (tubing, coeff) in self.terms() {
            seq.serialize_element(&Term { coeff, tubing })?;
        }
        seq.end()
    }
}

/// σ_t: the nodes of `t` ascending, then the remaining nodes ascending.
pub fn sigma_t(g: &Graph, t: NodeSet) -> Result<Vec<usize>> {
    if !g.is_tube(t)? {
        return precondition(format!("{t} is not a tube"));
    }
    Ok(t.iter().chain((g.nodes() - t).iter()).collect())
}

/// Number of edges {i, j}, i < j, whose endpoints `sigma` places in reverse
/// order.
pub fn graph_inversions(g: &Graph, sigma: &[usize]) -> usize {
    let mut pos = vec![0usize; sigma.len() + 1];
    for (p, &v) in sigma.iter().enumerate() {
        pos[v] = p;
    }
    g.edges().iter().filter(|&&(i, j)| pos[j] < pos[i]).count()
}

/// sgn^Γ(σ) = (−1)^{inv(σ)}.
pub fn graph_signature(g: &Graph, sigma: &[usize]) -> i64 {
    if graph_inversions(g, sigma).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn sign_of_len(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// α from minimal nodes: −1 iff `t_min` is below every listed minimum
/// (including the case of an empty list).
fn alpha_from_mins(t_min: usize, mins: impl IntoIterator<Item = usize>) -> i64 {
    match mins.into_iter().min() {
        Some(m) if m < t_min => 1,
        _ => -1,
    }
}

/// Maximal proper tubes of `w`, in the parent coordinates given by `support`.
fn lifted_maximal(w: &Tubing, support: NodeSet) -> Vec<NodeSet> {
    w.maximal_proper_tubes()
        .into_iter()
        .map(|m| m.expand(support))
        .collect()
}

/// α(t, W) for `w` a tubing of Γ_t*. Requires `t` not linked in Γ to any
/// proper tube of `w`.
pub fn alpha(g: &Graph, t: NodeSet, w: &Tubing) -> Result<i64> {
    let cr = g.complement_relabeled(t)?;
    if w.graph() != &cr.graph {
        return input("second argument is not a tubing of the reconnected complement");
    }
    if linked_to_proper(g, t, w, cr.support) {
        return precondition(format!("{t} is linked to a proper tube of the tubing"));
    }
    Ok(alpha_unchecked(t, w, cr.support))
}

fn alpha_unchecked(t: NodeSet, w: &Tubing, support: NodeSet) -> i64 {
    let tmin = t.min_node().expect("non-empty tube");
    alpha_from_mins(
        tmin,
        lifted_maximal(w, support).into_iter().filter_map(|m| m.min_node()),
    )
}

fn linked_to_proper(g: &Graph, t: NodeSet, w: &Tubing, support: NodeSet) -> bool {
    w.proper_tubes().any(|u| g.adjacent(u.expand(support), t))
}

/// How partial compositions and the facets of T_Γ are signed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// Facets {t_Γ, t} carry (−1)^{|t|} sgn(σ_t) with the ordinary
    /// permutation sign; S ∘ W carries the Koszul sign reordering the fibers
    /// of S followed by those of W into canonical order, each fiber of
    /// degree (size − 1).
    #[default]
    Koszul,
    /// Facets carry (−1)^{|t|} sgn^Γ(σ_t); S ∘ W carries α(t,W)(−1)^{|t|}
    /// unless t is linked to a proper tube of W, with α = −1 for trivial W.
    Literal,
}

/// The unsigned tubing γ_{t_Γ}(T_Γ ∘_t S, W), where `s` lives on Γ_t and
/// `w` on Γ_t*.
pub fn compose_tubing(g: &Graph, t: NodeSet, s: &Tubing, w: &Tubing) -> Result<Tubing> {
    Ok(circ_signed(g, t, s, w)?.1)
}

/// S ∘_(Γ,t) W as a single signed tubing, under the default convention.
pub fn circ_signed(g: &Graph, t: NodeSet, s: &Tubing, w: &Tubing) -> Result<(i64, Tubing)> {
    circ_signed_with(SignConvention::default(), g, t, s, w)
}

pub fn circ_signed_with(
    conv: SignConvention,
    g: &Graph,
    t: NodeSet,
    s: &Tubing,
    w: &Tubing,
) -> Result<(i64, Tubing)> {
    let g = Arc::new(g.clone());
    let support = check_circ_args(&g, t, s, w)?;
    Ok(circ_parts(conv, &g, t, s, w, support))
}

fn check_circ_args(g: &Graph, t: NodeSet, s: &Tubing, w: &Tubing) -> Result<NodeSet> {
    if t == g.nodes() {
        return precondition("partial composition needs a proper tube");
    }
    let sr = g.induced_relabeled(t)?;
    let cr = g.complement_relabeled(t)?;
    if s.graph() != &sr.graph {
        return input("first argument is not a tubing of the induced subgraph on the tube");
    }
    if w.graph() != &cr.graph {
        return input("second argument is not a tubing of the reconnected complement");
    }
    Ok(cr.support)
}

/// Fibers of `t` in canonical tube order, as node sets of its graph.
pub fn fibers(t: &Tubing) -> Vec<NodeSet> {
    tube_numbering(t)
        .into_iter()
        .map(|(u, _)| {
            t.tubes()
                .iter()
                .filter(|v| v.is_proper_subset(u))
                .fold(u, |acc, &v| acc - v)
        })
        .collect()
}

/// Sign of reordering graded items from `from` into `to` (both lists of
/// the same disjoint node sets); an item's degree is its size minus one.
fn koszul_sign(from: &[NodeSet], to: &[NodeSet]) -> i64 {
    let pos: Vec<usize> = from
        .iter()
        .map(|f| to.iter().position(|g| g == f).expect("same fibers"))
        .collect();
    let mut odd = false;
    for i in 0..from.len() {
        for j in i + 1..from.len() {
            if pos[j] < pos[i] && (from[i].len() - 1) * (from[j].len() - 1) % 2 == 1 {
                odd = !odd;
            }
        }
    }
    if odd {
        -1
    } else {
        1
    }
}

fn circ_parts(
    conv: SignConvention,
    g: &Arc<Graph>,
    t: NodeSet,
    s: &Tubing,
    w: &Tubing,
    support: NodeSet,
) -> (i64, Tubing) {
    let mut tubes: Vec<NodeSet> = s.tubes().iter().map(|&u| u.expand(t)).collect();
    tubes.push(g.nodes());
    let mut linked = false;
    for &u in w.tubes() {
        let lifted = u.expand(support);
        if g.adjacent(lifted, t) {
            if u != w.universal() {
                linked = true;
            }
            tubes.push(lifted | t);
        } else {
            tubes.push(lifted);
        }
    }
    let out = Tubing::from_parts(g.clone(), tubes);
    let coeff = match conv {
        SignConvention::Koszul => {
            let from: Vec<NodeSet> = fibers(s)
                .into_iter()
                .map(|f| f.expand(t))
                .chain(fibers(w).into_iter().map(|f| f.expand(support)))
                .collect();
            koszul_sign(&from, &fibers(&out))
        }
        SignConvention::Literal if linked => 1,
        SignConvention::Literal => alpha_unchecked(t, w, support) * sign_of_len(t.len()),
    };
    (coeff, out)
}

/// Bilinear extension of ∘_(Γ,t).
pub fn circ_chain(
    conv: SignConvention,
    g: &Graph,
    t: NodeSet,
    s: &TubingChain,
    w: &TubingChain,
) -> Result<TubingChain> {
    let g = Arc::new(g.clone());
    let mut support = g.nodes() - t;
    for (x, _) in s.terms() {
        for (y, _) in w.terms() {
            support = check_circ_args(&g, t, x, y)?;
        }
    }
    Ok(circ_chain_unchecked(conv, &g, t, s, w, support))
}

fn circ_chain_unchecked(
    conv: SignConvention,
    g: &Arc<Graph>,
    t: NodeSet,
    s: &TubingChain,
    w: &TubingChain,
    support: NodeSet,
) -> TubingChain {
    let mut out = TubingChain::zero();
    for (x, a) in s.terms() {
        for (y, b) in w.terms() {
            let (c, z) = circ_parts(conv, g, t, x, y, support);
            out.add_term(z, a * b * c);
        }
    }
    out
}

/// Which proper tube the recursive boundary splits along.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DecompositionChoice {
    /// Smallest canonical number.
    #[default]
    Innermost,
    /// Largest canonical number among proper tubes.
    Outermost,
}

/// The boundary operator with a per-tubing memo table.
#[derive(Debug, Default)]
pub struct BoundaryOperator {
    conv: SignConvention,
    choice: DecompositionChoice,
    cache: RwLock<HashMap<Tubing, TubingChain>>,
}

impl BoundaryOperator {
    pub fn new(conv: SignConvention, choice: DecompositionChoice) -> BoundaryOperator {
        BoundaryOperator {
            conv,
            choice,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn convention(&self) -> SignConvention {
        self.conv
    }

    pub fn cached(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    pub fn boundary(&self, t: &Tubing) -> Result<TubingChain> {
        if let Some(hit) = self.cache.read().expect("cache lock").get(t) {
            return Ok(hit.clone());
        }
        let out = if t.is_trivial() {
            base_boundary(self.conv, t)?
        } else {
            let numbering = tube_numbering(t);
            let mut proper = numbering.iter().map(|&(u, _)| u).filter(|&u| u != t.universal());
            let tube = match self.choice {
                DecompositionChoice::Innermost => proper.take(1).last(),
                DecompositionChoice::Outermost => proper.next_back(),
            }
            .expect("non-trivial tubing has a proper tube");
            self.split_boundary(t, tube)?
        };
        self.cache
            .write()
            .expect("cache lock")
            .insert(t.clone(), out.clone());
        Ok(out)
    }

    /// ∂T evaluated through the decomposition T = ±(T|_u ∘_(Γ,u) T_u*) for
    /// the given proper tube `u ∈ T`.
    pub fn boundary_via(&self, t: &Tubing, u: NodeSet) -> Result<TubingChain> {
        if !t.contains_tube(u) || u == t.universal() {
            return input(format!("{u} is not a proper tube of the tubing"));
        }
        self.split_boundary(t, u)
    }

    fn split_boundary(&self, t: &Tubing, u: NodeSet) -> Result<TubingChain> {
        let g = t.graph_arc();
        let s = restrict_member(t, u);
        let w = induce_member(t, u);
        let support = g.nodes() - u;
        let conv = self.conv;
        let (c, back) = circ_parts(conv, g, u, &s, &w, support);
        debug_assert_eq!(&back, t);
        let ds = self.boundary(&s)?;
        let dw = self.boundary(&w)?;
        let mut out = circ_chain_unchecked(conv, g, u, &ds, &TubingChain::single(w.clone(), 1), support);
        let right = circ_chain_unchecked(conv, g, u, &TubingChain::single(s.clone(), 1), &dw, support);
        out.add_scaled(&right, sign_of_len(s.dimension()));
        Ok(out.scaled(c))
    }

    pub fn boundary_chain(&self, c: &TubingChain) -> Result<TubingChain> {
        let mut out = TubingChain::zero();
        for (t, k) in c.terms() {
            out.add_scaled(&self.boundary(t)?, k);
        }
        Ok(out)
    }
}

/// Ordinary sign of a permutation given by its image sequence.
pub fn permutation_sign(sigma: &[usize]) -> i64 {
    let inv = (0..sigma.len())
        .flat_map(|i| (i + 1..sigma.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| sigma[j] < sigma[i])
        .count();
    sign_of_len(inv)
}

/// ∂(T_Γ) = Σ_t (−1)^{|t|} sgn(σ_t) {t_Γ, t} over proper tubes t, with the
/// sign of σ_t taken according to the convention.
fn base_boundary(conv: SignConvention, t: &Tubing) -> Result<TubingChain> {
    let g = t.graph();
    let mut out = TubingChain::zero();
    for u in all_tubes(g)? {
        if u == g.nodes() {
            continue;
        }
        let sigma: Vec<usize> = u.iter().chain((g.nodes() - u).iter()).collect();
        let sgn = match conv {
            SignConvention::Koszul => permutation_sign(&sigma),
            SignConvention::Literal => graph_signature(g, &sigma),
        };
        let c = sign_of_len(u.len()) * sgn;
        out.add_term(Tubing::from_parts(t.graph_arc().clone(), vec![u, g.nodes()]), c);
    }
    Ok(out)
}

pub fn boundary(t: &Tubing) -> Result<TubingChain> {
    BoundaryOperator::default().boundary(t)
}

pub fn boundary_chain(c: &TubingChain) -> Result<TubingChain> {
    BoundaryOperator::default().boundary_chain(c)
}

/// Tubings with exactly one more tube than `t`.
pub fn covers(t: &Tubing) -> Result<Vec<Tubing>> {
    let g = t.graph();
    Ok(all_tubes(g)?
        .into_iter()
        .filter(|&u| !t.contains_tube(u) && t.tubes().iter().all(|&v| compatible(g, u, v)))
        .map(|u| {
            let mut tubes = t.tubes().to_vec();
            tubes.push(u);
            Tubing::from_parts(t.graph_arc().clone(), tubes)
        })
        .collect())
}

/// ∂T is supported exactly on the covers of T, with unit coefficients.
pub fn boundary_support_is_covers(op: &BoundaryOperator, t: &Tubing) -> Result<bool> {
    let d = op.boundary(t)?;
    let cov = covers(t)?;
    Ok(d.len() == cov.len() && cov.iter().all(|c| d.coeff(c).abs() == 1))
}

/// A tensor factor of the coproduct: a tubing or the unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoElem {
    Unit,
    Tubing(Tubing),
}

/// Integer combination of pure tensors `a ⊗ b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoproductChain {
    terms: BTreeMap<(CoElem, CoElem), i64>,
}

impl CoproductChain {
    pub fn terms(&self) -> impl Iterator<Item = (&CoElem, &CoElem, i64)> {
        self.terms.iter().map(|((a, b), &c)| (a, b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &CoElem, b: &CoElem) -> i64 {
        self.terms.get(&(a.clone(), b.clone())).copied().unwrap_or(0)
    }

    fn add(&mut self, a: CoElem, b: CoElem, c: i64) {
        add_to_map(&mut self.terms, (a, b), c);
    }
}

impl Serialize for CoproductChain {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            coeff: i64,
            left: &'a CoElem,
            right: &'a CoElem,
        }
        let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
        for (left, right, coeff) in self.terms() {
            seq.serialize_element(&Term { coeff, left, right })?;
        }
        seq.end()
    }
}

fn add_to_map<K: Ord>(map: &mut BTreeMap<K, i64>, k: K, c: i64) {
    match map.entry(k) {
        Entry::Vacant(v) => {
            if c != 0 {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().checked_add(c).expect("coefficient overflow");
            if sum == 0 {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// Δ•(x): 1 ⊗ T plus T|_t ⊗ T_t* for every tube t (T ⊗ 1 for t = t_Γ);
/// Δ•(1) = 1 ⊗ 1.
pub fn prelie_coproduct_elem(x: &CoElem) -> CoproductChain {
    let mut out = CoproductChain::default();
    match x {
        CoElem::Unit => out.add(CoElem::Unit, CoElem::Unit, 1),
        CoElem::Tubing(t) => {
            out.add(CoElem::Unit, x.clone(), 1);
            for &u in t.tubes() {
                if u == t.universal() {
                    out.add(x.clone(), CoElem::Unit, 1);
                } else {
                    out.add(
                        CoElem::Tubing(restrict_member(t, u)),
                        CoElem::Tubing(induce_member(t, u)),
                        1,
                    );
                }
            }
        }
    }
    out
}

pub fn prelie_coproduct(t: &Tubing) -> CoproductChain {
    prelie_coproduct_elem(&CoElem::Tubing(t.clone()))
}

type Triple = (CoElem, CoElem, CoElem);

/// (Id ⊗ Δ• − Δ• ⊗ Id) ∘ Δ•(T).
pub fn prelie_associator(t: &Tubing) -> BTreeMap<Triple, i64> {
    let mut out = BTreeMap::new();
    for (a, b, c) in prelie_coproduct(t).terms() {
        for (b1, b2, d) in prelie_coproduct_elem(b).terms() {
            add_to_map(&mut out, (a.clone(), b1.clone(), b2.clone()), c * d);
        }
        for (a1, a2, d) in prelie_coproduct_elem(a).terms() {
            add_to_map(&mut out, (a1.clone(), a2.clone(), b.clone()), -c * d);
        }
    }
    out
}

/// The associator is symmetric in its first two tensor factors.
pub fn prelie_identity_holds(t: &Tubing) -> bool {
    let x = prelie_associator(t);
    x.iter()
        .all(|((a, b, c), &k)| x.get(&(b.clone(), a.clone(), c.clone())) == Some(&k))
}

pub fn prelie_identity_check(g: &Graph) -> Result<bool> {
    Ok(enumerate_tubings(g)?
        .iter()
        .all(prelie_identity_holds))
}

/// Outcome of a relation check over all instances.
#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub relation: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// At most five counterexamples.
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn new(relation: &'static str) -> RelationReport {
        RelationReport {
            relation,
            checked: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(what());
            }
        }
    }

    /// Adds another report's counts and samples.
    pub fn absorb(&mut self, other: RelationReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < 5 {
                self.failures.push(f);
            }
        }
    }

    pub fn pass(&self) -> bool {
        self.failed == 0
    }
}

fn circ_known(conv: SignConvention, g: &Arc<Graph>, t: NodeSet, s: &Tubing, w: &Tubing) -> (i64, Tubing) {
    circ_parts(conv, g, t, s, w, g.nodes() - t)
}

/// (T2 ∘_(Γ_t,t′) T1) ∘_(Γ,t) S = T2 ∘_(Γ,t′) (T1 ∘_(Γ_t′*,t̃) S) for nested
/// proper tubes t′ ⊊ t, with no sign.
pub fn nested_relation_check(conv: SignConvention, g: &Graph) -> Result<RelationReport> {
    let g = Arc::new(g.clone());
    let mut rep = RelationReport::new("nested partial compositions");
    let tubes: Vec<NodeSet> = all_tubes(&g)?.into_iter().filter(|&u| u != g.nodes()).collect();
    for &t in &tubes {
        let gt = Arc::new(g.induced_subgraph(t)?);
        let rest = enumerate_tubings(&g.reconnected_complement(t)?)?;
        for &tp in tubes.iter().filter(|u| u.is_proper_subset(t)) {
            let tp_loc = tp.compress(t);
            let outer = g.complement_relabeled(tp)?;
            let outer_g = Arc::new(outer.graph.clone());
            let tt = (t - tp).compress(outer.support);
            let inner = enumerate_tubings(&gt.reconnected_complement(tp_loc)?)?;
            let small = enumerate_tubings(&g.induced_subgraph(tp)?)?;
            for t1 in &inner {
                for t2 in &small {
                    let (a, x) = circ_known(conv, &gt, tp_loc, t2, t1);
                    for s in &rest {
                        let (b, lhs) = circ_known(conv, &g, t, &x, s);
                        let (c, y) = circ_known(conv, &outer_g, tt, t1, s);
                        let (d, rhs) = circ_known(conv, &g, tp, t2, &y);
                        rep.record(lhs == rhs && a * b == c * d, || {
                            format!("t={t} t'={tp} T1={t1:?} T2={t2:?} S={s:?}: {} vs {}", a * b, c * d)
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// The sign relating T2 ∘_(Γ,t′)(T1 ∘ S) to T1 ∘_(Γ,t)(T2 ∘ S) for disjoint
/// non-linked t, t′: (−1)^{‖T1‖‖T2‖} under the Koszul convention, and
/// max{α(t,S), α(t′,S)} under the literal one.
pub fn disjoint_relation_sign(
    conv: SignConvention,
    t: NodeSet,
    tp: NodeSet,
    t1: &Tubing,
    t2: &Tubing,
    s: &Tubing,
    support: NodeSet,
) -> i64 {
    match conv {
        SignConvention::Koszul => sign_of_len(t1.dimension() * t2.dimension()),
        SignConvention::Literal => {
            let mins: Vec<usize> = lifted_maximal(s, support)
                .into_iter()
                .filter_map(|m| m.min_node())
                .collect();
            let a = alpha_from_mins(t.min_node().expect("tube"), mins.iter().copied());
            let b = alpha_from_mins(tp.min_node().expect("tube"), mins.iter().copied());
            a.max(b)
        }
    }
}

/// T2 ∘_(Γ,t′)(T1 ∘_(Γ_t′*,t) S) = ε · T1 ∘_(Γ,t)(T2 ∘_(Γ_t*,t′) S) for
/// disjoint non-linked proper tubes, with ε from `disjoint_relation_sign`.
pub fn disjoint_relation_check(conv: SignConvention, g: &Graph) -> Result<RelationReport> {
    let g = Arc::new(g.clone());
    let mut rep = RelationReport::new("disjoint partial compositions");
    let tubes: Vec<NodeSet> = all_tubes(&g)?.into_iter().filter(|&u| u != g.nodes()).collect();
    for &t in &tubes {
        for &tp in &tubes {
            if t == tp || !t.is_disjoint(tp) || g.adjacent(t, tp) {
                continue;
            }
            let both = g.iterated_complement_relabeled(&[t, tp])?;
            let left = g.complement_relabeled(tp)?;
            let right = g.complement_relabeled(t)?;
            let (lg, rg) = (Arc::new(left.graph.clone()), Arc::new(right.graph.clone()));
            let (t_in_left, tp_in_right) = (t.compress(left.support), tp.compress(right.support));
            if lg.reconnected_complement(t_in_left)? != both.graph
                || rg.reconnected_complement(tp_in_right)? != both.graph
            {
                rep.record(false, || format!("t={t} t'={tp}: double complements differ"));
                continue;
            }
            let ones = enumerate_tubings(&g.induced_subgraph(t)?)?;
            let twos = enumerate_tubings(&g.induced_subgraph(tp)?)?;
            for s in enumerate_tubings(&both.graph)? {
                for t1 in &ones {
                    let (a, x) = circ_known(conv, &lg, t_in_left, t1, &s);
                    for t2 in &twos {
                        let (b, lhs) = circ_known(conv, &g, tp, t2, &x);
                        let (c, y) = circ_known(conv, &rg, tp_in_right, t2, &s);
                        let (d, rhs) = circ_known(conv, &g, t, t1, &y);
                        let eps = disjoint_relation_sign(conv, t, tp, t1, t2, &s, both.support);
                        rep.record(lhs == rhs && a * b == eps * c * d, || {
                            format!(
                                "t={t} t'={tp} T1={t1:?} T2={t2:?} S={s:?}: {} vs {}·{}",
                                a * b,
                                eps,
                                c * d
                            )
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// The graph-signature cocycles: for disjoint non-linked t, t′,
/// sgn^Γ(σ_t)·sgn^{Γ_t*}(σ_t′) = sgn^Γ(σ_t′)·sgn^{Γ_t′*}(σ_t); and for t′ ⊊ t,
/// sgn^Γ(σ_t)·sgn^{Γ_t}(σ_t′) = sgn^Γ(σ_t′)·sgn^{Γ_t′*}(σ_{t−t′}). Returns the
/// disjoint and nested reports.
pub fn signature_cocycle_check(g: &Graph) -> Result<(RelationReport, RelationReport)> {
    let mut disjoint = RelationReport::new("signature cocycle, disjoint tubes");
    let mut nested = RelationReport::new("signature cocycle, nested tubes");
    let tubes: Vec<NodeSet> = all_tubes(g)?.into_iter().filter(|&u| u != g.nodes()).collect();
    let sgn = |h: &Graph, t: NodeSet| -> Result<i64> { Ok(graph_signature(h, &sigma_t(h, t)?)) };
    for &t in &tubes {
        let ct = g.complement_relabeled(t)?;
        for &tp in &tubes {
            let ctp = g.complement_relabeled(tp)?;
            if t.is_disjoint(tp) && !g.adjacent(t, tp) {
                let l = sgn(g, t)? * sgn(&ct.graph, tp.compress(ct.support))?;
                let r = sgn(g, tp)? * sgn(&ctp.graph, t.compress(ctp.support))?;
                disjoint.record(l == r, || format!("t={t} t'={tp}: {l} vs {r}"));
            } else if tp.is_proper_subset(t) {
                let gt = g.induced_subgraph(t)?;
                let l = sgn(g, t)? * sgn(&gt, tp.compress(t))?;
                let r = sgn(g, tp)? * sgn(&ctp.graph, (t - tp).compress(ctp.support))?;
                nested.record(l == r, || format!("t={t} t'={tp}: {l} vs {r}"));
            }
        }
    }
    Ok((disjoint, nested))
}

/// α(t, {t′}) = −α(t′, {t}) for disjoint non-linked proper tubes.
pub fn alpha_antisymmetry_check(g: &Graph) -> Result<RelationReport> {
    let mut rep = RelationReport::new("alpha antisymmetry");
    let g = Arc::new(g.clone());
    let tubes: Vec<NodeSet> = all_tubes(&g)?.into_iter().filter(|&u| u != g.nodes()).collect();
    let single = |t: NodeSet, u: NodeSet| -> Result<i64> {
        let c = g.complement_relabeled(t)?;
        let h = Arc::new(c.graph);
        let w = Tubing::new(h.clone(), [u.compress(c.support), h.nodes()])?;
        alpha(&g, t, &w)
    };
    for &t in &tubes {
        for &tp in &tubes {
            if t != tp && t.is_disjoint(tp) && !g.adjacent(t, tp) {
                let (a, b) = (single(t, tp)?, single(tp, t)?);
                rep.record(a == -b, || format!("t={t} t'={tp}: {a}, {b}"));
            }
        }
    }
    Ok(rep)
}
