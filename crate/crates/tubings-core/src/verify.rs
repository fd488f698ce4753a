//! Exhaustive and sampled verification suites over the graph census.
//!
//! Every suite returns `RelationReport`s; per-graph work runs on the rayon
//! pool and is merged in census order, so reports are deterministic.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::census::{connected_graphs, random_connected_graph};
use crate::chain::{
    alpha_antisymmetry_check, covers, disjoint_relation_check, nested_relation_check,
    prelie_identity_holds, signature_cocycle_check, BoundaryOperator, DecompositionChoice,
    RelationReport, SignConvention,
};
use crate::dtub::{self, d_squared_vanishes, dtubings_of_size, leibniz_rules, trias_relations, DTubing, Differential};
use crate::error::Result;
use crate::graph::Graph;
use crate::opcat::{axiom_suite, AxiomReport};
use crate::substitution::{
    associativity_holds, commutation_holds, fiber_graph, generator_decomposition, replay_generators,
};
use crate::topology::topo_equivalence_failures;
use crate::tubing::{enumerate_tubings, Tubing};

/// All connected graphs with 1..=max_n nodes, in census order.
pub fn census_up_to(max_n: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(connected_graphs(n)?);
    }
    Ok(out)
}

fn merge(name: &'static str, parts: Vec<RelationReport>) -> RelationReport {
    let mut all = RelationReport::new(name);
    for p in parts {
        all.absorb(p);
    }
    all
}

fn per_graph<F>(graphs: &[Graph], name: &'static str, f: F) -> Result<RelationReport>
where
    F: Fn(&Graph, &mut RelationReport) -> Result<()> + Sync,
{
    let parts = graphs
        .par_iter()
        .map(|g| {
            let mut rep = RelationReport::new(name);
            f(g, &mut rep)?;
            Ok(rep)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(name, parts))
}

/// ∂² = 0 and "∂T is supported on the covers of T with coefficients ±1" on
/// every tubing of every connected graph with at most `max_n` nodes.
pub fn boundary_suite(max_n: usize, conv: SignConvention) -> Result<Vec<RelationReport>> {
    let graphs = census_up_to(max_n)?;
    let parts = graphs
        .par_iter()
        .map(|g| {
            let op = BoundaryOperator::new(conv, DecompositionChoice::Innermost);
            let mut d2 = RelationReport::new("∂² = 0");
            let mut support = RelationReport::new("∂T supported on covers with coefficients ±1");
            for t in enumerate_tubings(g)? {
                let d = op.boundary(&t)?;
                let dd = op.boundary_chain(&d)?;
                d2.record(dd.is_zero(), || format!("{t:?}: ∂² has {} terms", dd.len()));
                let cov = covers(&t)?;
                let ok = d.len() == cov.len() && cov.iter().all(|c| d.coeff(c).abs() == 1);
                support.record(ok, || format!("{t:?}"));
            }
            Ok((d2, support))
        })
        .collect::<Result<Vec<_>>>()?;
    let (a, b): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    Ok(vec![merge("∂² = 0", a), merge("∂T supported on covers with coefficients ±1", b)])
}

/// The recursive ∂ gives the same chain through every proper tube.
pub fn choice_suite(max_n: usize, conv: SignConvention) -> Result<RelationReport> {
    let graphs = census_up_to(max_n)?;
    per_graph(&graphs, "∂ independent of decomposition tube", |g, rep| {
        let op = BoundaryOperator::new(conv, DecompositionChoice::Innermost);
        for t in enumerate_tubings(g)? {
            let d = op.boundary(&t)?;
            for u in t.proper_tubes() {
                let via = op.boundary_via(&t, u)?;
                rep.record(via == d, || format!("{t:?} via {u}"));
            }
        }
        Ok(())
    })
}

pub fn prelie_suite(max_n: usize) -> Result<RelationReport> {
    let graphs = census_up_to(max_n)?;
    per_graph(&graphs, "pre-Lie co-identity", |g, rep| {
        for t in enumerate_tubings(g)? {
            rep.record(prelie_identity_holds(&t), || format!("{t:?}"));
        }
        Ok(())
    })
}

/// Tubing ⟺ topological basis with the connectivity condition, over every
/// collection of tubes.
pub fn topology_suite(max_n: usize) -> Result<RelationReport> {
    let graphs = census_up_to(max_n)?;
    per_graph(&graphs, "tubing iff basis with connectivity", |g, rep| {
        let (total, fails) = topo_equivalence_failures(g)?;
        rep.checked += total - fails.len();
        for f in fails {
            rep.record(false, || format!("{g:?}: {f:?}"));
        }
        Ok(())
    })
}

fn commutation_cases(t: &Tubing, pick: &mut dyn FnMut(&[Tubing]) -> Vec<Tubing>, rep: &mut RelationReport) -> Result<()> {
    let tubes = t.tubes().to_vec();
    for (i, &a) in tubes.iter().enumerate() {
        for &b in &tubes[i + 1..] {
            let sa = pick(&enumerate_tubings(&fiber_graph(t, a)?.graph)?);
            let sb = pick(&enumerate_tubings(&fiber_graph(t, b)?.graph)?);
            for s in &sa {
                for s2 in &sb {
                    let ok = commutation_holds(t, a, s, b, s2).unwrap_or(false);
                    rep.record(ok, || format!("{t:?} t={a} t'={b} S={s:?} S'={s2:?}"));
                }
            }
        }
    }
    Ok(())
}

fn associativity_cases(t: &Tubing, pick: &mut dyn FnMut(&[Tubing]) -> Vec<Tubing>, rep: &mut RelationReport) -> Result<()> {
    for &a in t.tubes() {
        for s in pick(&enumerate_tubings(&fiber_graph(t, a)?.graph)?) {
            for u in s.proper_tubes() {
                for w in pick(&enumerate_tubings(&fiber_graph(&s, u)?.graph)?) {
                    let ok = associativity_holds(t, a, &s, u, &w).unwrap_or(false);
                    rep.record(ok, || format!("{t:?} t={a} S={s:?} s={u} W={w:?}"));
                }
            }
        }
    }
    Ok(())
}

/// Commutation of substitutions at distinct tubes and associativity of
/// substitution: exhaustive up to `max_n` nodes, then at least `samples`
/// random cases on each node count in `sampled_n`.
pub fn substitution_suite(
    max_n: usize,
    sampled_n: &[usize],
    samples: usize,
    seed: u64,
) -> Result<Vec<RelationReport>> {
    let graphs = census_up_to(max_n)?;
    let mut comm = per_graph(&graphs, "substitution commutation", |g, rep| {
        for t in enumerate_tubings(g)? {
            commutation_cases(&t, &mut |v| v.to_vec(), rep)?;
        }
        Ok(())
    })?;
    let mut assoc = per_graph(&graphs, "substitution associativity", |g, rep| {
        for t in enumerate_tubings(g)? {
            associativity_cases(&t, &mut |v| v.to_vec(), rep)?;
        }
        Ok(())
    })?;
    for (k, &n) in sampled_n.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64 + 1) << 32);
        let mut c = RelationReport::new("substitution commutation");
        let mut a = RelationReport::new("substitution associativity");
        while c.checked < samples || a.checked < samples {
            let g = random_connected_graph(&mut rng, n)?;
            let all = enumerate_tubings(&g)?;
            for _ in 0..16 {
                let t = all.choose(&mut rng).expect("non-empty");
                let mut one = |v: &[Tubing]| vec![v.choose(&mut rng).expect("non-empty").clone()];
                if c.checked < samples {
                    commutation_cases(t, &mut one, &mut c)?;
                }
                if a.checked < samples {
                    associativity_cases(t, &mut one, &mut a)?;
                }
            }
        }
        comm.absorb(c);
        assoc.absorb(a);
    }
    Ok(vec![comm, assoc])
}

/// The single-tube generator sequence rebuilds every tubing.
pub fn generator_suite(max_n: usize) -> Result<RelationReport> {
    let graphs = census_up_to(max_n)?;
    per_graph(&graphs, "generator replay", |g, rep| {
        for t in enumerate_tubings(g)? {
            let seq = generator_decomposition(&t);
            let ok = replay_generators(g, &seq).map(|r| r == t).unwrap_or(false);
            rep.record(ok, || format!("{t:?} via {seq:?}"));
        }
        Ok(())
    })
}

/// Relations (1) and (2) between partial compositions, the signature
/// cocycles, and α antisymmetry.
pub fn composition_relation_suite(max_n: usize, conv: SignConvention) -> Result<Vec<RelationReport>> {
    let graphs = census_up_to(max_n)?;
    let nested = per_graph(&graphs, "nested partial compositions", |g, rep| {
        rep.absorb(nested_relation_check(conv, g)?);
        Ok(())
    })?;
    let disjoint = per_graph(&graphs, "disjoint partial compositions", |g, rep| {
        rep.absorb(disjoint_relation_check(conv, g)?);
        Ok(())
    })?;
    Ok(vec![nested, disjoint])
}

pub fn cocycle_suite(max_n: usize) -> Result<Vec<RelationReport>> {
    let graphs = census_up_to(max_n)?;
    let d = per_graph(&graphs, "signature cocycle, disjoint tubes", |g, rep| {
        rep.absorb(signature_cocycle_check(g)?.0);
        Ok(())
    })?;
    let n = per_graph(&graphs, "signature cocycle, nested tubes", |g, rep| {
        rep.absorb(signature_cocycle_check(g)?.1);
        Ok(())
    })?;
    let a = per_graph(&graphs, "alpha antisymmetry", |g, rep| {
        rep.absorb(alpha_antisymmetry_check(g)?);
        Ok(())
    })?;
    Ok(vec![d, n, a])
}

/// Connected tubings of every census graph, indexed by node count.
pub fn tubings_by_size(max_n: usize) -> Result<Vec<Vec<Tubing>>> {
    let mut out = vec![Vec::new()];
    for n in 1..=max_n {
        let graphs = connected_graphs(n)?;
        let per: Vec<Vec<Tubing>> = graphs
            .par_iter()
            .map(enumerate_tubings)
            .collect::<Result<Vec<_>>>()?;
        out.push(per.into_iter().flatten().collect());
    }
    Ok(out)
}

/// Trias' relations on all triples and the Leibniz rules on all pairs of
/// disconnected tubings with node total at most `max_total`, and d² = 0 on
/// all disconnected tubings (two or more components) with node total at
/// most `max_total`.
pub fn dtub_suite(max_total: usize, conv: SignConvention) -> Result<Vec<RelationReport>> {
    let by_size = tubings_by_size(max_total.saturating_sub(1).max(1))?;
    let pools: Vec<Vec<DTubing>> = (0..=max_total)
        .map(|n| if n == 0 { Vec::new() } else { dtubings_of_size(&by_size, n, n) })
        .collect();
    let d = Differential::with_convention(conv);
    let names: Vec<&'static str> = {
        let p = DTubing::generator(Tubing::trivial(Graph::complete(1))?);
        trias_relations(&p, &p, &p)?.into_iter().map(|(k, _)| k).collect()
    };
    let xs: Vec<&DTubing> = pools.iter().flatten().collect();
    let parts = xs
        .par_iter()
        .map(|x| {
            let mut reps: BTreeMap<&'static str, RelationReport> = BTreeMap::new();
            let mut put = |name: &'static str, ok: bool, what: &dyn Fn() -> String| {
                reps.entry(name).or_insert_with(|| RelationReport::new(name)).record(ok, what);
            };
            let nx = x.node_count();
            for ny in 1..=max_total - nx.min(max_total) {
                for y in &pools[ny] {
                    for (name, ok) in leibniz_rules(&d, x, y)? {
                        put(name, ok, &|| format!("{x:?} | {y:?}"));
                    }
                    for nz in 1..=max_total.saturating_sub(nx + ny) {
                        for z in &pools[nz] {
                            for (name, ok) in trias_relations(x, y, z)? {
                                put(name, ok, &|| format!("{x:?} | {y:?} | {z:?}"));
                            }
                        }
                    }
                }
            }
            if x.component_count() >= 2 {
                put("d² = 0", d_squared_vanishes(&d, x)?, &|| format!("{x:?}"));
            }
            Ok(reps)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut merged: BTreeMap<&'static str, RelationReport> = BTreeMap::new();
    for p in parts {
        for (k, v) in p {
            merged.entry(k).or_insert_with(|| RelationReport::new(k)).absorb(v);
        }
    }
    let mut out: Vec<RelationReport> = names
        .iter()
        .filter_map(|k| merged.remove(k))
        .collect();
    out.extend(merged.into_values());
    Ok(out)
}

/// The simplex count over C_n for every n ≤ max_n.
pub fn simplex_suite(max_n: usize) -> Result<RelationReport> {
    let mut rep = RelationReport::new("DTubings over C_n number 2^n − 1");
    for n in 1..=max_n {
        let c = dtub::simplex_basis_count(n)?;
        rep.record(c == (1 << n) - 1, || format!("n={n}: {c}"));
    }
    Ok(rep)
}

/// L-algebra relations: all triples of tubings on graphs with at most
/// `exhaustive_n` nodes, then `samples` random triples on graphs with
/// 3..=max_random_n nodes.
pub fn l_algebra_suite(
    exhaustive_n: usize,
    samples: usize,
    max_random_n: usize,
    seed: u64,
) -> Result<Vec<RelationReport>> {
    let small: Vec<Tubing> = tubings_by_size(exhaustive_n)?.into_iter().flatten().collect();
    let mut triples = Vec::new();
    for t in &small {
        for s in &small {
            for w in &small {
                triples.push((t.clone(), s.clone(), w.clone()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = 3.min(max_random_n);
    let mut cache: BTreeMap<Graph, Arc<Vec<Tubing>>> = BTreeMap::new();
    let mut draw = |rng: &mut ChaCha8Rng| -> Result<Tubing> {
        let n = rng.gen_range(lo..=max_random_n);
        let g = random_connected_graph(rng, n)?;
        let all = match cache.get(&g) {
            Some(v) => v.clone(),
            None => {
                let v = Arc::new(enumerate_tubings(&g)?);
                cache.insert(g, v.clone());
                v
            }
        };
        Ok(all.choose(rng).expect("non-empty").clone())
    };
    for _ in 0..samples {
        let t = draw(&mut rng)?;
        let s = draw(&mut rng)?;
        let w = draw(&mut rng)?;
        triples.push((t, s, w));
    }
    let tally = dtub::l_relation_tally(&triples)?;
    Ok(tally
        .relations
        .into_iter()
        .map(|(name, c)| RelationReport {
            relation: name,
            checked: c.checked,
            failed: c.failed,
            failures: c.samples,
        })
        .collect())
}

/// The operadic-category axioms on every connected graph with at most
/// `max_n` nodes, merged by axiom.
pub fn opcat_suite(max_n: usize) -> Result<(usize, usize, Vec<RelationReport>)> {
    let graphs = census_up_to(max_n)?;
    let reports: Vec<AxiomReport> = graphs.par_iter().map(axiom_suite).collect::<Result<Vec<_>>>()?;
    let mut order: Vec<&'static str> = Vec::new();
    let mut merged: BTreeMap<&'static str, RelationReport> = BTreeMap::new();
    let (mut tubings, mut chains) = (0, 0);
    for r in reports {
        tubings += r.tubings;
        chains += r.chains;
        for a in r.axioms {
            if !merged.contains_key(a.relation) {
                order.push(a.relation);
            }
            merged.entry(a.relation).or_insert_with(|| RelationReport::new(a.relation)).absorb(a);
        }
    }
    let axioms = order.into_iter().filter_map(|k| merged.remove(k)).collect();
    Ok((tubings, chains, axioms))
}
