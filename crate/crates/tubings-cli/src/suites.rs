//! Verification suites as run by `tubings verify`.

use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;
use tubings_core::census::{connected_graphs, CENSUS_CAP};
use tubings_core::chain::{RelationReport, SignConvention};
use tubings_core::{operad, verify};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    /// Labeled connected graph counts.
    Census,
    /// ∂² = 0 and support of ∂ on the covers.
    D2,
    /// Independence of ∂ from the decomposition tube.
    Choice,
    /// Right pre-Lie co-identity of Δ•.
    Prelie,
    /// Tubings versus topologies generated by tube collections.
    Topology,
    /// Substitution commutation and associativity.
    Substitution,
    /// Generator decomposition replay.
    Generators,
    /// Nested and disjoint composition relations.
    Composition,
    /// Signature cocycles and α antisymmetry.
    Cocycle,
    /// Non-symmetric operad relations on linear graphs (total nodes).
    Operad,
    /// Permutad relation on complete graphs (total nodes).
    Permutad,
    /// Trias' relations, Leibniz rules and d² = 0 on DTub (total nodes).
    Dtub,
    /// DTubings over C_n number 2^n − 1.
    Simplex,
    /// L-algebra relations.
    Lalgebra,
    /// Operadic-category axioms.
    Opcat,
    /// Every suite at its default size.
    All,
}

/// (default, cap) for `--max-n`.
fn bounds(s: Suite) -> (usize, usize) {
    match s {
        Suite::Census => (5, CENSUS_CAP),
        Suite::D2 | Suite::Generators => (5, CENSUS_CAP),
        Suite::Choice | Suite::Prelie | Suite::Composition | Suite::Cocycle => (4, CENSUS_CAP),
        Suite::Topology => (4, 5),
        Suite::Substitution => (4, 5),
        Suite::Opcat => (4, 5),
        Suite::Operad | Suite::Permutad => (7, 9),
        Suite::Dtub => (5, CENSUS_CAP),
        Suite::Simplex => (10, 16),
        Suite::Lalgebra => (4, CENSUS_CAP),
        Suite::All => (0, 0),
    }
}

pub const ALL: [Suite; 15] = [
    Suite::Census,
    Suite::D2,
    Suite::Choice,
    Suite::Prelie,
    Suite::Topology,
    Suite::Substitution,
    Suite::Generators,
    Suite::Composition,
    Suite::Cocycle,
    Suite::Operad,
    Suite::Permutad,
    Suite::Dtub,
    Suite::Simplex,
    Suite::Lalgebra,
    Suite::Opcat,
];

#[derive(Clone, Debug)]
pub struct Params {
    pub max_n: Option<usize>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub sample_sizes: Vec<usize>,
    pub convention: SignConvention,
    pub timing: bool,
}

#[derive(Serialize)]
pub struct Relation {
    pub relation: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl From<RelationReport> for Relation {
    fn from(r: RelationReport) -> Relation {
        Relation {
            pass: r.pass(),
            relation: r.relation,
            checked: r.checked,
            failed: r.failed,
            failures: r.failures,
        }
    }
}

#[derive(Serialize)]
pub struct Report {
    pub suite: String,
    pub census: String,
    pub max_n: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub convention: SignConvention,
    pub cases: usize,
    pub pass: bool,
    pub relations: Vec<Relation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

fn suite_name(s: Suite) -> String {
    s.to_possible_value().expect("named").get_name().to_string()
}

fn census_text(max_n: usize) -> Result<String, CliError> {
    let counts = (1..=max_n)
        .map(|n| connected_graphs(n).map(|g| g.len().to_string()))
        .collect::<tubings_core::Result<Vec<_>>>()?;
    Ok(format!(
        "labeled connected graphs on 1..={max_n} nodes ({})",
        counts.join(", ")
    ))
}

/// Checks `--max-n` against the suite's cap and returns the effective size.
pub fn resolve_max_n(s: Suite, requested: Option<usize>) -> Result<usize, CliError> {
    let (default, cap) = bounds(s);
    let n = requested.unwrap_or(default);
    if n > cap {
        return Err(CliError::Input(format!(
            "--max-n {n} exceeds the limit {cap} for suite {}",
            suite_name(s)
        )));
    }
    if n == 0 {
        return Err(CliError::Input("--max-n must be at least 1".into()));
    }
    Ok(n)
}

pub fn run(s: Suite, p: &Params) -> Result<Report, CliError> {
    let max_n = resolve_max_n(s, p.max_n)?;
    let conv = p.convention;
    let start = Instant::now();
    let mut samples = None;
    let (census, reports): (String, Vec<RelationReport>) = match s {
        Suite::Census => {
            let mut rep = RelationReport::new("labeled connected graph count");
            const KNOWN: [usize; 6] = [1, 1, 4, 38, 728, 26704];
            for n in 1..=max_n {
                let c = connected_graphs(n)?.len();
                rep.record(c == KNOWN[n - 1], || format!("n={n}: {c}"));
            }
            (census_text(max_n)?, vec![rep])
        }
        Suite::D2 => (census_text(max_n)?, verify::boundary_suite(max_n, conv)?),
        Suite::Choice => (census_text(max_n)?, vec![verify::choice_suite(max_n, conv)?]),
        Suite::Prelie => (census_text(max_n)?, vec![verify::prelie_suite(max_n)?]),
        Suite::Topology => (census_text(max_n)?, vec![verify::topology_suite(max_n)?]),
        Suite::Substitution => {
            let m = p.samples.unwrap_or(10_000);
            samples = Some(m);
            for &k in &p.sample_sizes {
                if !(1..=CENSUS_CAP).contains(&k) {
                    return Err(CliError::Input(format!(
                        "--sample-sizes entry {k} outside 1..={CENSUS_CAP}"
                    )));
                }
            }
            let sizes: Vec<String> = p.sample_sizes.iter().map(|k| k.to_string()).collect();
            (
                format!(
                    "{}; {m} random cases on each of n = [{}]",
                    census_text(max_n)?,
                    sizes.join(", ")
                ),
                verify::substitution_suite(max_n, &p.sample_sizes, m, p.seed)?,
            )
        }
        Suite::Generators => (census_text(max_n)?, vec![verify::generator_suite(max_n)?]),
        Suite::Composition => (census_text(max_n)?, verify::composition_relation_suite(max_n, conv)?),
        Suite::Cocycle => (census_text(max_n)?, verify::cocycle_suite(max_n)?),
        Suite::Operad => (
            format!("linear graphs, all size triples with total ≤ {max_n}"),
            vec![operad::ns_operad_suite(conv, max_n)?],
        ),
        Suite::Permutad => (
            format!("complete graphs, all size triples with total ≤ {max_n}"),
            vec![operad::permutad_suite(conv, max_n)?],
        ),
        Suite::Dtub => (
            format!("DTubings over labeled connected graphs, node total ≤ {max_n}"),
            verify::dtub_suite(max_n, conv)?,
        ),
        Suite::Simplex => (
            format!("edgeless components C_n, n = 1..={max_n}"),
            vec![verify::simplex_suite(max_n)?],
        ),
        Suite::Lalgebra => {
            let m = p.samples.unwrap_or(1000);
            samples = Some(m);
            (
                format!("all triples on ≤ 2 nodes; {m} random triples on 3..={max_n} nodes"),
                verify::l_algebra_suite(2, m, max_n.max(3), p.seed)?,
            )
        }
        Suite::Opcat => {
            let (tubings, chains, axioms) = verify::opcat_suite(max_n)?;
            (
                format!("{}; {tubings} tubings, {chains} chains", census_text(max_n)?),
                axioms,
            )
        }
        Suite::All => unreachable!("expanded by the caller"),
    };
    let relations: Vec<Relation> = reports.into_iter().map(Relation::from).collect();
    Ok(Report {
        suite: suite_name(s),
        census,
        max_n,
        seed: p.seed,
        samples,
        convention: conv,
        cases: relations.iter().map(|r| r.checked).sum(),
        pass: relations.iter().all(|r| r.pass),
        relations,
        wall_time_ms: p.timing.then(|| start.elapsed().as_millis()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(max_n: usize) -> Params {
        Params {
            max_n: Some(max_n),
            seed: 7,
            samples: Some(50),
            sample_sizes: vec![5],
            convention: SignConvention::Koszul,
            timing: false,
        }
    }

    #[test]
    fn caps_are_enforced() {
        assert!(resolve_max_n(Suite::D2, Some(7)).is_err());
        assert!(resolve_max_n(Suite::D2, Some(0)).is_err());
        assert_eq!(resolve_max_n(Suite::D2, None).unwrap(), 5);
    }

    #[test]
    fn small_reports() {
        let r = run(Suite::D2, &params(3)).unwrap();
        assert!(r.pass);
        assert_eq!(r.census, "labeled connected graphs on 1..=3 nodes (1, 1, 4)");
        let r = run(Suite::Substitution, &params(3)).unwrap();
        assert!(r.pass && r.cases > 100);
        let r = run(Suite::Lalgebra, &params(3)).unwrap();
        assert!(!r.pass);
        assert!(r.relations.iter().filter(|x| !x.pass).all(|x| x.relation.starts_with("(ii)")));
    }
}
