//! Tubings of disconnected graphs with the Trias' products ⊢, ⊣, × and
//! their differential, plus the L-algebra products ▷, ◁, ⊥ on connected
//! tubings.
//!
//! A component flagged `reduced` stands for T̄, the proper tubes of a genuine
//! tubing W; the stored tubing is W itself, so no information is lost.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::chain::{BoundaryOperator, RelationReport, SignConvention};
use crate::error::{input, precondition, Error, Result};
use crate::graph::Graph;
use crate::nodeset::{NodeSet, MAX_NODES};
use crate::tubing::{nodeset_from_list, Tubing};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub tubing: Tubing,
    pub reduced: bool,
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.reduced { "reduced" } else { "full" };
        write!(f, "{mark} {:?}", self.tubing)
    }
}

/// An ordered list of components on the disjoint union of their graphs.
/// One component is always full; with two or more, at least one is reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DTubingWire", into = "DTubingWire")]
pub struct DTubing {
    components: Vec<Component>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentWire {
    graph: Graph,
    tubes: Vec<Vec<usize>>,
    reduced: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DTubingWire {
    components: Vec<ComponentWire>,
}

impl TryFrom<DTubingWire> for DTubing {
    type Error = Error;

    fn try_from(w: DTubingWire) -> Result<DTubing> {
        let mut comps = Vec::with_capacity(w.components.len());
        for c in w.components {
            let g = Arc::new(c.graph);
            let mut tubes = c
                .tubes
                .iter()
                .map(|t| nodeset_from_list(&g, t))
                .collect::<Result<Vec<_>>>()?;
            if c.reduced {
                if tubes.contains(&g.nodes()) {
                    return input("a reduced component lists only proper tubes");
                }
                tubes.push(g.nodes());
            }
            comps.push(Component {
                tubing: Tubing::new(g, tubes)?,
                reduced: c.reduced,
            });
        }
        DTubing::new(comps)
    }
}

impl From<DTubing> for DTubingWire {
    fn from(t: DTubing) -> DTubingWire {
        let components = t
            .components
            .into_iter()
            .map(|c| {
                let u = c.tubing.universal();
                ComponentWire {
                    graph: c.tubing.graph().clone(),
                    tubes: c
                        .tubing
                        .tubes()
                        .iter()
                        .filter(|&&s| !(c.reduced && s == u))
                        .map(|s| s.to_vec())
                        .collect(),
                    reduced: c.reduced,
                }
            })
            .collect();
        DTubingWire { components }
    }
}

impl fmt::Debug for DTubing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

impl DTubing {
    pub fn new(components: Vec<Component>) -> Result<DTubing> {
        match components.len() {
            0 => return input("a tubing needs at least one component"),
            1 if components[0].reduced => {
                return precondition("a single component must be full");
            }
            1 => {}
            _ if components.iter().all(|c| !c.reduced) => {
                return precondition("some component of a disconnected tubing must be reduced");
            }
            _ => {}
        }
        let total: usize = components.iter().map(|c| c.tubing.node_count()).sum();
        if total > MAX_NODES {
            return Err(Error::Resource {
                what: "node count",
                limit: MAX_NODES,
                got: total,
            });
        }
        Ok(DTubing { components })
    }

    /// A connected tubing as a one-component element.
    pub fn generator(t: Tubing) -> DTubing {
        DTubing {
            components: vec![Component {
                tubing: t,
                reduced: false,
            }],
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn as_generator(&self) -> Option<&Tubing> {
        match self.components.as_slice() {
            [c] => Some(&c.tubing),
            _ => None,
        }
    }

    pub fn node_count(&self) -> usize {
        self.components.iter().map(|c| c.tubing.node_count()).sum()
    }

    /// Number of reduced components; 0 for a connected tubing.
    pub fn def_count(&self) -> usize {
        self.components.iter().filter(|c| c.reduced).count()
    }

    /// Σ‖T_i‖ + max(0, def − 1).
    pub fn degree(&self) -> usize {
        let dims: usize = self.components.iter().map(|c| c.tubing.dimension()).sum();
        dims + self.def_count().saturating_sub(1)
    }

    pub fn ambient_graph(&self) -> Result<Graph> {
        let mut comps = self.components.iter();
        let first = comps.next().expect("non-empty").tubing.graph().clone();
        comps.try_fold(first, |g, c| g.disjoint_union(c.tubing.graph()))
    }

    /// The tubes on the ambient graph, universal tubes of reduced components
    /// omitted.
    pub fn tubes(&self) -> Vec<NodeSet> {
        let mut out = Vec::new();
        let mut offset = 0;
        for c in &self.components {
            let u = c.tubing.universal();
            out.extend(
                c.tubing
                    .tubes()
                    .iter()
                    .filter(|&&s| !(c.reduced && s == u))
                    .map(|s| s.shift(offset)),
            );
            offset += c.tubing.node_count();
        }
        out.sort();
        out
    }

    /// T^c: every component full.
    fn completed(&self) -> Vec<Component> {
        self.components
            .iter()
            .map(|c| Component {
                tubing: c.tubing.clone(),
                reduced: false,
            })
            .collect()
    }

    /// T̄ for a connected tubing, T itself otherwise.
    fn barred(&self) -> Vec<Component> {
        let mut out = self.components.clone();
        if out.len() == 1 {
            out[0].reduced = true;
        }
        out
    }
}

fn concat(mut a: Vec<Component>, b: Vec<Component>) -> Result<DChain> {
    a.extend(b);
    Ok(DChain::single(DTubing::new(a)?, 1))
}

/// T ⊢ S: T^c ⊔ S̄ (or S when S is disconnected), zero when def(T) > 1.
pub fn vdash(t: &DTubing, s: &DTubing) -> Result<DChain> {
    if t.def_count() > 1 {
        return Ok(DChain::zero());
    }
    concat(t.completed(), s.barred())
}

/// T ⊣ S: T̄ (or T) ⊔ S^c, zero when def(S) > 1.
pub fn dashv(t: &DTubing, s: &DTubing) -> Result<DChain> {
    if s.def_count() > 1 {
        return Ok(DChain::zero());
    }
    concat(t.barred(), s.completed())
}

/// T × S: T̄ (or T) ⊔ S̄ (or S).
pub fn times(t: &DTubing, s: &DTubing) -> Result<DChain> {
    concat(t.barred(), s.barred())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DOp {
    Vdash,
    Dashv,
    Times,
}

impl DOp {
    pub fn apply(self, t: &DTubing, s: &DTubing) -> Result<DChain> {
        match self {
            DOp::Vdash => vdash(t, s),
            DOp::Dashv => dashv(t, s),
            DOp::Times => times(t, s),
        }
    }

    pub fn apply_chains(self, a: &DChain, b: &DChain) -> Result<DChain> {
        let mut out = DChain::zero();
        for (x, p) in a.terms() {
            for (y, q) in b.terms() {
                out.add_scaled(&self.apply(x, y)?, p * q);
            }
        }
        Ok(out)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            DOp::Vdash => "⊢",
            DOp::Dashv => "⊣",
            DOp::Times => "×",
        }
    }
}

/// Finite integer combination of disconnected tubings; no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DChain {
    terms: BTreeMap<DTubing, i64>,
}

impl DChain {
    pub fn zero() -> DChain {
        DChain::default()
    }

    pub fn single(t: DTubing, c: i64) -> DChain {
        let mut out = DChain::zero();
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

    pub fn coeff(&self, t: &DTubing) -> i64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DTubing, i64)> {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn add_term(&mut self, t: DTubing, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
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

    pub fn add_scaled(&mut self, other: &DChain, scale: i64) {
        for (t, c) in other.terms() {
            self.add_term(t.clone(), c.checked_mul(scale).expect("coefficient overflow"));
        }
    }

    pub fn scaled(&self, scale: i64) -> DChain {
        let mut out = DChain::zero();
        out.add_scaled(self, scale);
        out
    }
}

impl Serialize for DChain {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            coeff: i64,
            tubing: &'a DTubing,
        }
        let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
        for (t, &c) in &self.terms {
            seq.serialize_element(&Term { coeff: c, tubing: t })?;
        }
        seq.end()
    }
}

/// A product expression over connected tubings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DExpr {
    Gen(Tubing),
    Node(DOp, Box<DExpr>, Box<DExpr>),
}

impl DExpr {
    pub fn evaluate(&self) -> Result<DChain> {
        match self {
            DExpr::Gen(t) => Ok(DChain::single(DTubing::generator(t.clone()), 1)),
            DExpr::Node(op, a, b) => op.apply_chains(&a.evaluate()?, &b.evaluate()?),
        }
    }
}

impl fmt::Display for DExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DExpr::Gen(t) => write!(f, "{:?}", t.tubes()),
            DExpr::Node(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

/// Right comb c_1 op_1 (c_2 op_2 (… c_r)) evaluating to `t`. Before the last
/// reduced component c_j, full gives ⊢ and reduced gives ×. If c_j is last,
/// that is the whole rule; otherwise the tail is c_j ⊣ (c_{j+1} ⊢ (… ⊢ c_r)).
pub fn canonical_decompose(t: &DTubing) -> Result<DExpr> {
    let cs = t.components();
    if cs.len() < 2 {
        return precondition("a connected tubing is a generator");
    }
    let gen = |k: usize| DExpr::Gen(cs[k].tubing.clone());
    let node = |op, a, b| DExpr::Node(op, Box::new(a), Box::new(b));
    let r = cs.len();
    let j = cs.iter().rposition(|c| c.reduced).expect("some component is reduced");
    let mut expr = if j == r - 1 {
        gen(r - 1)
    } else {
        let tail = (j + 1..r - 1).rev().fold(gen(r - 1), |acc, k| node(DOp::Vdash, gen(k), acc));
        node(DOp::Dashv, gen(j), tail)
    };
    let last = if j == r - 1 { r - 1 } else { j };
    for k in (0..last).rev() {
        let op = if cs[k].reduced { DOp::Times } else { DOp::Vdash };
        expr = node(op, gen(k), expr);
    }
    Ok(expr)
}

fn parity(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The differential d on disconnected tubings: ∂ on generators, extended by
/// the Leibniz rules of ⊢, ⊣ and × along the canonical decomposition.
#[derive(Debug, Default)]
pub struct Differential {
    boundary: BoundaryOperator,
}

impl Differential {
    pub fn new(boundary: BoundaryOperator) -> Differential {
        Differential { boundary }
    }

    pub fn with_convention(conv: SignConvention) -> Differential {
        Differential::new(BoundaryOperator::new(conv, Default::default()))
    }

    pub fn boundary_operator(&self) -> &BoundaryOperator {
        &self.boundary
    }

    pub fn apply(&self, t: &DTubing) -> Result<DChain> {
        match t.as_generator() {
            Some(g) => self.generator(g),
            None => Ok(self.expr(&canonical_decompose(t)?)?.1),
        }
    }

    pub fn apply_chain(&self, c: &DChain) -> Result<DChain> {
        let mut out = DChain::zero();
        for (t, k) in c.terms() {
            out.add_scaled(&self.apply(t)?, k);
        }
        Ok(out)
    }

    fn generator(&self, g: &Tubing) -> Result<DChain> {
        let mut out = DChain::zero();
        for (t, c) in self.boundary.boundary(g)?.terms() {
            out.add_term(DTubing::generator(t.clone()), c);
        }
        Ok(out)
    }

    /// (value, d(value)) of an expression whose left factors are generators.
    fn expr(&self, e: &DExpr) -> Result<(DChain, DChain)> {
        match e {
            DExpr::Gen(t) => Ok((DChain::single(DTubing::generator(t.clone()), 1), self.generator(t)?)),
            DExpr::Node(op, a, b) => {
                let (x, dx) = self.expr(a)?;
                let (y, dy) = self.expr(b)?;
                let deg = match a.as_ref() {
                    DExpr::Gen(t) => t.dimension(),
                    _ => unreachable!("canonical decompositions are right combs"),
                };
                let value = op.apply_chains(&x, &y)?;
                let mut d = op.apply_chains(&dx, &y)?;
                let s = parity(deg);
                match op {
                    DOp::Vdash | DOp::Dashv => d.add_scaled(&op.apply_chains(&x, &dy)?, s),
                    DOp::Times => {
                        d.add_scaled(&op.apply_chains(&x, &dy)?, -s);
                        d.add_scaled(&DOp::Dashv.apply_chains(&x, &y)?, s);
                        d.add_scaled(&DOp::Vdash.apply_chains(&x, &y)?, -s);
                    }
                }
                Ok((value, d))
            }
        }
    }
}

pub fn differential(t: &DTubing) -> Result<DChain> {
    Differential::default().apply(t)
}

/// Every DTubing on the given component tubings (in order), over all valid
/// flag patterns.
pub fn flag_patterns(components: &[Tubing]) -> Vec<DTubing> {
    let r = components.len();
    let masks: Vec<u32> = if r == 1 { vec![0] } else { (1..1u32 << r).collect() };
    masks
        .into_iter()
        .map(|m| DTubing {
            components: components
                .iter()
                .enumerate()
                .map(|(i, t)| Component {
                    tubing: t.clone(),
                    reduced: m >> i & 1 == 1,
                })
                .collect(),
        })
        .collect()
}

/// All DTubings whose components are drawn, in order, from `by_size[k]`
/// (connected tubings with k nodes) and whose node counts sum to `n`.
pub fn dtubings_of_size(by_size: &[Vec<Tubing>], n: usize, max_components: usize) -> Vec<DTubing> {
    fn go(
        by_size: &[Vec<Tubing>],
        left: usize,
        max_components: usize,
        prefix: &mut Vec<Tubing>,
        out: &mut Vec<DTubing>,
    ) {
        if left == 0 {
            out.extend(flag_patterns(prefix));
            return;
        }
        if prefix.len() == max_components {
            return;
        }
        for k in 1..=left.min(by_size.len() - 1) {
            for t in &by_size[k] {
                prefix.push(t.clone());
                go(by_size, left - k, max_components, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(by_size, n, max_components, &mut Vec::new(), &mut out);
    out
}

/// Number of DTubings whose components are the n single-node tubings.
pub fn simplex_basis_count(n: usize) -> Result<usize> {
    if n == 0 || n > 20 {
        return input("simplex count needs 1 <= n <= 20");
    }
    let point = Tubing::trivial(Graph::complete(1))?;
    Ok(flag_patterns(&vec![point; n]).len())
}

/// Trias' relations (i)–(vii) and associativity of ⊢, ⊣, × on one triple.
pub fn trias_relations(x: &DTubing, y: &DTubing, z: &DTubing) -> Result<Vec<(&'static str, bool)>> {
    use DOp::*;
    let one = |t: &DTubing| DChain::single(t.clone(), 1);
    let (x, y, z) = (one(x), one(y), one(z));
    let l = |a: DOp, b: DOp| -> Result<DChain> { b.apply_chains(&a.apply_chains(&x, &y)?, &z) };
    let r = |a: DOp, b: DOp| -> Result<DChain> { a.apply_chains(&x, &b.apply_chains(&y, &z)?) };
    Ok(vec![
        ("⊢ associative", l(Vdash, Vdash)? == r(Vdash, Vdash)?),
        ("⊣ associative", l(Dashv, Dashv)? == r(Dashv, Dashv)?),
        ("× associative", l(Times, Times)? == r(Times, Times)?),
        ("(i) (x⊢y)⊣z = x⊢(y⊣z)", l(Vdash, Dashv)? == r(Vdash, Dashv)?),
        ("(ii) (x⊣y)⊣z = x⊣(y⊢z)", l(Dashv, Dashv)? == r(Dashv, Vdash)?),
        ("(iii) (x⊣y)⊢z = x⊢(y⊢z)", l(Dashv, Vdash)? == r(Vdash, Vdash)?),
        ("(iv) (x⊢y)×z = x⊢(y×z)", l(Vdash, Times)? == r(Vdash, Times)?),
        ("(v) (x×y)⊣z = x×(y⊣z)", l(Times, Dashv)? == r(Times, Dashv)?),
        ("(vi) (x⊣y)×z = x×(y⊢z)", l(Dashv, Times)? == r(Times, Vdash)?),
        ("(vii) (x×y)⊢z = 0", l(Times, Vdash)?.is_zero()),
        ("(vii) x⊣(y×z) = 0", r(Dashv, Times)?.is_zero()),
    ])
}

/// Rules (viii)–(x) for d on one pair. Rule (viii) is reported separately
/// for connected and disconnected x: with the sign-free relations it cannot
/// hold for every disconnected x (apply it to both sides of (vi) with |y|
/// odd).
pub fn leibniz_rules(d: &Differential, x: &DTubing, y: &DTubing) -> Result<Vec<(&'static str, bool)>> {
    let (cx, cy) = (DChain::single(x.clone(), 1), DChain::single(y.clone(), 1));
    let (dx, dy) = (d.apply(x)?, d.apply(y)?);
    let s = parity(x.degree());
    let mut out = Vec::new();
    for op in [DOp::Times, DOp::Vdash, DOp::Dashv] {
        let lhs = d.apply_chain(&op.apply(x, y)?)?;
        let mut rhs = op.apply_chains(&dx, &cy)?;
        if op == DOp::Times {
            rhs.add_scaled(&op.apply_chains(&cx, &dy)?, -s);
            rhs.add_scaled(&dashv(x, y)?, s);
            rhs.add_scaled(&vdash(x, y)?, -s);
        } else {
            rhs.add_scaled(&op.apply_chains(&cx, &dy)?, s);
        }
        let name = match op {
            DOp::Times if x.as_generator().is_some() => "(viii) d(x×y), x connected",
            DOp::Times => "(viii) d(x×y), x disconnected",
            DOp::Vdash => "(ix) d(x⊢y)",
            DOp::Dashv => "(x) d(x⊣y)",
        };
        out.push((name, lhs == rhs));
    }
    Ok(out)
}

/// Named pass counts for a family of relations.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationTally {
    pub relations: BTreeMap<&'static str, RelationCount>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationCount {
    pub checked: usize,
    pub failed: usize,
    pub samples: Vec<String>,
}

impl RelationTally {
    pub fn record(&mut self, name: &'static str, ok: bool, what: impl FnOnce() -> String) {
        let e = self.relations.entry(name).or_default();
        e.checked += 1;
        if !ok {
            e.failed += 1;
            if e.samples.len() < 3 {
                e.samples.push(what());
            }
        }
    }

    pub fn merge(&mut self, other: RelationTally) {
        for (k, v) in other.relations {
            let e = self.relations.entry(k).or_default();
            e.checked += v.checked;
            e.failed += v.failed;
            for s in v.samples {
                if e.samples.len() < 3 {
                    e.samples.push(s);
                }
            }
        }
    }

    pub fn pass(&self) -> bool {
        self.relations.values().all(|c| c.failed == 0)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.relations
            .iter()
            .filter(|(_, c)| c.failed > 0)
            .map(|(&k, _)| k)
            .collect()
    }
}

/// d² = 0 on one element.
pub fn d_squared_vanishes(d: &Differential, t: &DTubing) -> Result<bool> {
    Ok(d.apply_chain(&d.apply(t)?)?.is_zero())
}

/// Γ ∪_{T,S} Ω: the disjoint union plus the edge from the largest node of Γ
/// outside the proper tubes of T to the smallest node of Ω outside those of
/// S.
pub fn join_graph(t: &Tubing, s: &Tubing) -> Result<Graph> {
    let n = t.node_count();
    let i = t.free_nodes().max_node().expect("proper tubes never cover the graph");
    let j = s.free_nodes().min_node().expect("proper tubes never cover the graph");
    Ok(t.graph().disjoint_union(s.graph())?.with_edge(i, j + n))
}

fn joined(t: &Tubing, s: &Tubing, keep_t: bool, keep_s: bool) -> Result<Tubing> {
    let g = Arc::new(join_graph(t, s)?);
    let n = t.node_count();
    let mut tubes: Vec<NodeSet> = if keep_t { t.tubes().to_vec() } else { t.proper_tubes().collect() };
    if keep_s {
        tubes.extend(s.tubes().iter().map(|u| u.shift(n)));
    } else {
        tubes.extend(s.proper_tubes().map(|u| u.shift(n)));
    }
    tubes.push(g.nodes());
    Ok(Tubing::from_parts(g, tubes))
}

/// T ▷ S = T ∪ (S̄ + n) ∪ {universal}.
pub fn l_right(t: &Tubing, s: &Tubing) -> Result<Tubing> {
    joined(t, s, true, false)
}

/// T ◁ S = T̄ ∪ (S + n) ∪ {universal}.
pub fn l_left(t: &Tubing, s: &Tubing) -> Result<Tubing> {
    joined(t, s, false, true)
}

/// T ⊥ S = T̄ ∪ (S̄ + n) ∪ {universal}.
pub fn l_perp(t: &Tubing, s: &Tubing) -> Result<Tubing> {
    joined(t, s, false, false)
}

/// The L-algebra identity, ⊥ associativity and relations (i)–(iii) on one
/// triple.
pub fn l_relations(t: &Tubing, s: &Tubing, w: &Tubing) -> Result<Vec<(&'static str, bool)>> {
    Ok(vec![
        ("L identity x▷(y◁z) = (x▷y)◁z", l_right(t, &l_left(s, w)?)? == l_left(&l_right(t, s)?, w)?),
        ("⊥ associative", l_perp(t, &l_perp(s, w)?)? == l_perp(&l_perp(t, s)?, w)?),
        ("(i) T▷(S⊥W) = (T▷S)⊥W", l_right(t, &l_perp(s, w)?)? == l_perp(&l_right(t, s)?, w)?),
        ("(ii) T⊥(S▷W) = (T◁S)⊥W", l_perp(t, &l_right(s, w)?)? == l_perp(&l_left(t, s)?, w)?),
        ("(iii) T⊥(S◁W) = (T⊥S)◁W", l_perp(t, &l_left(s, w)?)? == l_left(&l_perp(t, s)?, w)?),
    ])
}

pub fn l_relation_tally(triples: &[(Tubing, Tubing, Tubing)]) -> Result<RelationTally> {
    let mut tally = RelationTally::default();
    for (t, s, w) in triples {
        for (name, ok) in l_relations(t, s, w)? {
            tally.record(name, ok, || format!("{t:?} | {s:?} | {w:?}"));
        }
    }
    Ok(tally)
}

/// Trias' relations over every triple drawn from `pool` whose node counts sum
/// to at most `max_total`, plus the Leibniz rules over the pairs involved.
pub fn trias_relation_check(
    d: &Differential,
    pool: &[DTubing],
    max_total: usize,
) -> Result<RelationTally> {
    let mut tally = RelationTally::default();
    for x in pool {
        for y in pool {
            if x.node_count() + y.node_count() > max_total {
                continue;
            }
            for (name, ok) in leibniz_rules(d, x, y)? {
                tally.record(name, ok, || format!("{x:?} | {y:?}"));
            }
            for z in pool {
                if x.node_count() + y.node_count() + z.node_count() > max_total {
                    continue;
                }
                for (name, ok) in trias_relations(x, y, z)? {
                    tally.record(name, ok, || format!("{x:?} | {y:?} | {z:?}"));
                }
            }
        }
    }
    Ok(tally)
}

/// Report form of d² = 0 over a list.
pub fn d_squared_check(d: &Differential, items: &[DTubing]) -> Result<RelationReport> {
    let mut rep = RelationReport::new("d² = 0 on disconnected tubings");
    for t in items {
        let ok = d_squared_vanishes(d, t)?;
        rep.record(ok, || format!("{t:?}"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tubing::enumerate_tubings;

    fn point() -> Tubing {
        Tubing::trivial(Graph::complete(1)).unwrap()
    }

    fn gen(t: &Tubing) -> DTubing {
        DTubing::generator(t.clone())
    }

    fn dt(parts: &[(&Tubing, bool)]) -> DTubing {
        DTubing::new(
            parts
                .iter()
                .map(|&(t, reduced)| Component {
                    tubing: t.clone(),
                    reduced,
                })
                .collect(),
        )
        .unwrap()
    }

    fn only(c: DChain) -> DTubing {
        assert_eq!(c.len(), 1);
        let (t, k) = c.terms().next().unwrap();
        assert_eq!(k, 1);
        t.clone()
    }

    #[test]
    fn validity_and_counts() {
        let p = point();
        assert!(DTubing::new(vec![]).is_err());
        assert!(DTubing::new(vec![Component { tubing: p.clone(), reduced: true }]).is_err());
        assert!(DTubing::new(vec![
            Component { tubing: p.clone(), reduced: false },
            Component { tubing: p.clone(), reduced: false },
        ])
        .is_err());
        assert_eq!(gen(&p).def_count(), 0);
        assert_eq!(dt(&[(&p, true), (&p, false)]).def_count(), 1);
        assert_eq!(dt(&[(&p, true), (&p, true)]).def_count(), 2);
        assert_eq!(dt(&[(&p, true), (&p, true)]).degree(), 1);
        assert_eq!(dt(&[(&p, false), (&p, true)]).degree(), 0);
        let k3 = Tubing::trivial(Graph::complete(3)).unwrap();
        assert_eq!(gen(&k3).degree(), 2);
        for n in 1..=10 {
            assert_eq!(simplex_basis_count(n).unwrap(), (1 << n) - 1);
        }
    }

    #[test]
    fn interval_faces() {
        let p = point();
        let (x, y) = (gen(&p), gen(&p));
        assert_eq!(only(vdash(&x, &y).unwrap()), dt(&[(&p, false), (&p, true)]));
        assert_eq!(only(dashv(&x, &y).unwrap()), dt(&[(&p, true), (&p, false)]));
        assert_eq!(only(times(&x, &y).unwrap()), dt(&[(&p, true), (&p, true)]));
        let edge = dt(&[(&p, true), (&p, true)]);
        let d = differential(&edge).unwrap();
        assert_eq!(d.coeff(&dt(&[(&p, true), (&p, false)])), 1);
        assert_eq!(d.coeff(&dt(&[(&p, false), (&p, true)])), -1);
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn vdash_offsets_the_right_factor() {
        let t = Tubing::new(Arc::new(Graph::complete(2)), [NodeSet::singleton(1), NodeSet::full(2)]).unwrap();
        let s = Tubing::new(Arc::new(Graph::linear(3)), [NodeSet::singleton(2), NodeSet::full(3)]).unwrap();
        let r = only(vdash(&gen(&t), &gen(&s)).unwrap());
        assert_eq!(r, dt(&[(&t, false), (&s, true)]));
        assert_eq!(
            r.tubes(),
            vec![NodeSet::singleton(1), NodeSet::full(2), NodeSet::singleton(4)]
        );
        assert_eq!(r.ambient_graph().unwrap().edges(), vec![(1, 2), (3, 4), (4, 5)]);
    }

    #[test]
    fn zero_cases() {
        let p = point();
        let xy = only(times(&gen(&p), &gen(&p)).unwrap());
        assert!(vdash(&xy, &gen(&p)).unwrap().is_zero());
        assert!(dashv(&gen(&p), &xy).unwrap().is_zero());
    }

    #[test]
    fn canonical_decomposition_replays() {
        let l2 = enumerate_tubings(&Graph::linear(2)).unwrap();
        let p = point();
        for r in 2..=4 {
            let comps: Vec<Tubing> = (0..r).map(|i| if i % 2 == 0 { p.clone() } else { l2[i % 3].clone() }).collect();
            for t in flag_patterns(&comps) {
                let e = canonical_decompose(&t).unwrap();
                assert_eq!(only(e.evaluate().unwrap()), t, "{e}");
            }
        }
        let t = dt(&[(&p, false), (&p, true), (&p, false)]);
        let e = canonical_decompose(&t).unwrap();
        assert_eq!(e.to_string(), "([{1}] ⊢ ([{1}] ⊣ [{1}]))");
        assert!(canonical_decompose(&gen(&p)).is_err());
    }

    #[test]
    fn generator_differential_is_boundary() {
        let k3 = Tubing::trivial(Graph::complete(3)).unwrap();
        let d = differential(&gen(&k3)).unwrap();
        assert_eq!(d.len(), 6);
    }

    #[test]
    fn relations_on_small_pool() {
        let by_size: Vec<Vec<Tubing>> = vec![
            vec![],
            enumerate_tubings(&Graph::complete(1)).unwrap(),
            enumerate_tubings(&Graph::complete(2)).unwrap(),
        ];
        let pool: Vec<DTubing> = (1..=2).flat_map(|n| dtubings_of_size(&by_size, n, 2)).collect();
        let d = Differential::default();
        let tally = trias_relation_check(&d, &pool, 4).unwrap();
        assert!(tally.pass(), "{:?}", tally.failing());
        let all: Vec<DTubing> = (1..=4).flat_map(|n| dtubings_of_size(&by_size, n, 4)).collect();
        assert!(d_squared_check(&d, &all).unwrap().pass());
    }

    #[test]
    fn join_and_l_products() {
        let p = point();
        assert_eq!(join_graph(&p, &p).unwrap(), Graph::linear(2));
        let l2 = Tubing::trivial(Graph::linear(2)).unwrap();
        assert_eq!(join_graph(&l2, &l2).unwrap(), Graph::linear(4));
        let t = Tubing::new(Arc::new(Graph::linear(2)), [NodeSet::singleton(2), NodeSet::full(2)]).unwrap();
        assert_eq!(join_graph(&t, &p).unwrap().edges(), vec![(1, 2), (1, 3)]);
        let u = NodeSet::full(2);
        let right = l_right(&p, &p).unwrap();
        assert!(right.contains_tube(NodeSet::singleton(1)) && right.tube_count() == 2);
        let left = l_left(&p, &p).unwrap();
        assert!(left.contains_tube(NodeSet::singleton(2)) && left.tube_count() == 2);
        assert_eq!(l_perp(&p, &p).unwrap().tubes(), &[u]);
    }

    #[test]
    fn l_relations_on_points() {
        let p = point();
        let rel = l_relations(&p, &p, &p).unwrap();
        let get = |k: &str| rel.iter().find(|(n, _)| n.starts_with(k)).unwrap().1;
        assert!(get("L identity"));
        assert!(get("⊥ associative"));
        assert!(get("(i)"));
        assert!(get("(iii)"));
        // The two sides live on different joined graphs: edges {1,3},{2,3}
        // versus {1,2},{1,3}.
        assert!(!get("(ii)"));
        assert_eq!(l_perp(&p, &l_right(&p, &p).unwrap()).unwrap().graph().edges(), vec![(1, 3), (2, 3)]);
        assert_eq!(l_perp(&l_left(&p, &p).unwrap(), &p).unwrap().graph().edges(), vec![(1, 2), (1, 3)]);
    }

    #[test]
    fn json_round_trip() {
        let p = point();
        let l3 = Tubing::new(Arc::new(Graph::linear(3)), [NodeSet::singleton(2), NodeSet::full(3)]).unwrap();
        let t = dt(&[(&p, false), (&l3, true)]);
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains("\"reduced\":true"));
        assert_eq!(serde_json::from_str::<DTubing>(&s).unwrap(), t);
        let bad = r#"{"components":[{"graph":{"n":1,"edges":[]},"tubes":[[1]],"reduced":true},{"graph":{"n":1,"edges":[]},"tubes":[[1]],"reduced":false}]}"#;
        assert!(serde_json::from_str::<DTubing>(bad).is_err());
    }
}
