//! `tubings`: JSON front end for tubings-core.
//!
//! Exit status 0 on success, 1 when a verification suite reports a failure,
//! 2 on malformed input or an exceeded limit.

mod cache;
mod input;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use tubings_core::chain::{prelie_coproduct, BoundaryOperator, DecompositionChoice, SignConvention};
use tubings_core::dtub::{canonical_decompose, DOp, DTubing, Differential};
use tubings_core::opcat::{cardinality_of_morphism, fiber, tube_numbering, OcdMorphism};
use tubings_core::substitution::{gamma_full, gamma_t, LabeledTubing};
use tubings_core::tubing::to_surjection;
use tubings_core::{Graph, NodeSet, Tubing};

use crate::suites::{Params, Suite};

pub const CACHE_ENV: &str = "TUBINGS_CACHE_DIR";

#[derive(Debug)]
pub enum CliError {
    Input(String),
}

impl From<tubings_core::Error> for CliError {
    fn from(e: tubings_core::Error) -> CliError {
        CliError::Input(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "tubings", version, about = "Tubings of graphs: enumeration, substitution, boundaries and verification suites")]
struct Cli {
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Convention {
    #[default]
    Koszul,
    Literal,
}

impl From<Convention> for SignConvention {
    fn from(c: Convention) -> SignConvention {
        match c {
            Convention::Koszul => SignConvention::Koszul,
            Convention::Literal => SignConvention::Literal,
        }
    }
}

#[derive(Args)]
struct CacheArgs {
    /// Cache directory for tubing enumerations (overrides $TUBINGS_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl CacheArgs {
    fn dir(&self) -> Option<PathBuf> {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }
}

#[derive(Subcommand)]
enum Command {
    /// List every tubing of a connected graph.
    Enumerate {
        /// Graph JSON, a file, `-`, or a preset such as K4, L5, Cy4.
        graph: String,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Face counts by dimension.
    Fvector {
        graph: String,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Signed boundary of a tubing.
    Boundary {
        tubing: String,
        #[arg(long, value_enum, default_value_t = Convention::Koszul)]
        convention: Convention,
    },
    /// Pre-Lie coproduct Δ• of a tubing.
    Coproduct { tubing: String },
    /// Substitute tubings: a single tube with --slot/--insert, or all tubes with --full.
    Substitute {
        tubing: String,
        /// Tube to substitute at, e.g. 1,3,4,6.
        #[arg(long, requires = "insert", conflicts_with = "full")]
        slot: Option<String>,
        /// Tubing of the fiber graph at --slot.
        #[arg(long)]
        insert: Option<String>,
        /// JSON array of slot tubings, one per tube in labeling order.
        #[arg(long)]
        full: Option<String>,
        /// JSON array of tubes (node lists) fixing the labeling; t^0 must be the universal tube.
        #[arg(long, requires = "full")]
        labels: Option<String>,
    },
    /// Export to external polytope formats (no formats are implemented yet).
    Convert {
        tubing: String,
        #[arg(long)]
        to: String,
    },
    /// Operations on disconnected tubings.
    Dtub {
        #[command(subcommand)]
        op: DtubCommand,
    },
    /// The operadic category of tubings.
    Opcat {
        #[command(subcommand)]
        op: OpcatCommand,
    },
    /// List the labeled connected graphs on 1..=max-n nodes.
    Census {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
    /// Run a verification suite; exit 1 if any relation fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        opts: VerifyArgs,
    },
}

#[derive(Args, Clone)]
struct VerifyArgs {
    /// Size bound: nodes per graph, or total nodes for operad, permutad and dtub.
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random cases for the sampled suites.
    #[arg(long)]
    samples: Option<usize>,
    /// Node counts sampled by the substitution suite.
    #[arg(long, value_delimiter = ',', default_value = "5,6")]
    sample_sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Convention::Koszul)]
    convention: Convention,
    /// Include wall time in the report (output is then not reproducible).
    #[arg(long)]
    timing: bool,
    /// Accepted for uniformity; suites enumerate in memory.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DtubCommand {
    /// T ⊢ S.
    Vdash { a: String, b: String },
    /// T ⊣ S.
    Dashv { a: String, b: String },
    /// T × S.
    Times { a: String, b: String },
    /// The differential d.
    D {
        a: String,
        #[arg(long, value_enum, default_value_t = Convention::Koszul)]
        convention: Convention,
    },
    /// Canonical product expression over connected tubings.
    Decompose { a: String },
}

#[derive(Subcommand)]
enum OpcatCommand {
    /// Cardinality and fibers of the morphism SOURCE → TARGET.
    Fiber {
        source: String,
        target: String,
        /// Only this fiber (1-based canonical number of a target tube).
        #[arg(long)]
        index: Option<usize>,
    },
    /// Axiom suite over the census.
    Verify {
        #[arg(long)]
        max_n: Option<usize>,
    },
}

fn tube_lists(t: &Tubing) -> Vec<Vec<usize>> {
    t.tubes().iter().map(|s| s.to_vec()).collect()
}

fn surjection_if_complete(t: &Tubing) -> Result<Option<Vec<usize>>, CliError> {
    if t.graph().is_complete() {
        Ok(Some(to_surjection(t)?))
    } else {
        Ok(None)
    }
}

fn emit<T: Serialize>(v: &T, pretty: bool) {
    let s = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("output serializes");
    println!("{s}");
}

fn connected(g: &Graph) -> Result<(), CliError> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(CliError::Input("the graph is not connected".into()))
    }
}

fn substitute(
    tubing: &str,
    slot: Option<String>,
    insert: Option<String>,
    full: Option<String>,
    labels: Option<String>,
) -> Result<Value, CliError> {
    let t: Tubing = input::read_json(tubing)?;
    let out = match (slot, insert, full) {
        (Some(slot), Some(insert), None) => {
            let s: Tubing = input::read_json(&insert)?;
            gamma_t(&t, input::parse_tube(&slot)?, &s)?
        }
        (None, None, Some(full)) => {
            let slots: Vec<Tubing> = input::read_json(&full)?;
            let labeled = match labels {
                None => LabeledTubing::by_numbering(t.clone()),
                Some(l) => {
                    let lists: Vec<Vec<usize>> = input::read_json(&l)?;
                    let sets = lists
                        .iter()
                        .map(|v| input::tube_from_list(v))
                        .collect::<Result<Vec<NodeSet>, _>>()?;
                    LabeledTubing::new(t.clone(), sets)?
                }
            };
            gamma_full(&labeled, &slots)?
        }
        _ => return Err(CliError::Input("give either --slot with --insert, or --full".into())),
    };
    Ok(json!({
        "tubing": out,
        "surjection": surjection_if_complete(&out)?,
    }))
}

fn opcat_fiber(source: &str, target: &str, index: Option<usize>) -> Result<Value, CliError> {
    let f = OcdMorphism::new(input::read_json(source)?, input::read_json(target)?)?;
    let count = f.target().tube_count();
    let indices: Vec<usize> = match index {
        Some(i) if i == 0 || i > count => {
            return Err(CliError::Input(format!("--index {i} outside 1..={count}")));
        }
        Some(i) => vec![i],
        None => (1..=count).collect(),
    };
    let numbering = |t: &Tubing| -> Vec<Value> {
        tube_numbering(t)
            .into_iter()
            .map(|(s, k)| json!({"number": k, "tube": s.to_vec()}))
            .collect()
    };
    let fibers = indices
        .into_iter()
        .map(|i| Ok(json!({"index": i, "fiber": fiber(&f, i)?})))
        .collect::<Result<Vec<Value>, CliError>>()?;
    Ok(json!({
        "source_numbering": numbering(f.source()),
        "target_numbering": numbering(f.target()),
        "cardinality": cardinality_of_morphism(&f),
        "fibers": fibers,
    }))
}

fn census(max_n: usize) -> Result<Value, CliError> {
    if max_n == 0 || max_n > tubings_core::census::CENSUS_CAP {
        return Err(CliError::Input(format!(
            "--max-n {max_n} outside 1..={}",
            tubings_core::census::CENSUS_CAP
        )));
    }
    let mut levels = Vec::new();
    for n in 1..=max_n {
        let graphs = tubings_core::census::connected_graphs(n)?;
        levels.push(json!({"n": n, "count": graphs.len(), "graphs": graphs}));
    }
    Ok(Value::Array(levels))
}

/// Runs one command; `Ok(false)` means a verification failure.
fn run(cmd: Command, pretty: bool) -> Result<bool, CliError> {
    let value = match cmd {
        Command::Enumerate { graph, cache } => {
            let g = input::read_graph(&graph)?;
            connected(&g)?;
            let all = cache::tubings(&g, cache.dir().as_deref())?;
            json!({
                "graph": g,
                "count": all.len(),
                "tubings": all.iter().map(tube_lists).collect::<Vec<_>>(),
            })
        }
        Command::Fvector { graph, cache } => {
            let g = input::read_graph(&graph)?;
            connected(&g)?;
            let all = cache::tubings(&g, cache.dir().as_deref())?;
            let mut f = vec![0usize; g.node_count()];
            for t in &all {
                f[t.dimension()] += 1;
            }
            json!({"graph": g, "f_vector": f, "total": all.len()})
        }
        Command::Boundary { tubing, convention } => {
            let t: Tubing = input::read_json(&tubing)?;
            let op = BoundaryOperator::new(convention.into(), DecompositionChoice::Innermost);
            json!({
                "tubing": t,
                "convention": SignConvention::from(convention),
                "boundary": op.boundary(&t)?,
            })
        }
        Command::Coproduct { tubing } => {
            let t: Tubing = input::read_json(&tubing)?;
            json!({"tubing": t, "coproduct": prelie_coproduct(&t)})
        }
        Command::Substitute { tubing, slot, insert, full, labels } => substitute(&tubing, slot, insert, full, labels)?,
        Command::Convert { tubing, to } => {
            let _: Tubing = input::read_json(&tubing)?;
            return Err(CliError::Input(format!("convert: no exporter for {to:?}; no target formats are implemented")));
        }
        Command::Dtub { op } => match op {
            DtubCommand::Vdash { a, b } => dtub_product(DOp::Vdash, &a, &b)?,
            DtubCommand::Dashv { a, b } => dtub_product(DOp::Dashv, &a, &b)?,
            DtubCommand::Times { a, b } => dtub_product(DOp::Times, &a, &b)?,
            DtubCommand::D { a, convention } => {
                let x: DTubing = input::read_json(&a)?;
                let d = Differential::with_convention(convention.into());
                json!({"input": x, "degree": x.degree(), "d": d.apply(&x)?})
            }
            DtubCommand::Decompose { a } => {
                let x: DTubing = input::read_json(&a)?;
                let e = canonical_decompose(&x)?;
                json!({"input": x, "expression": e.to_string()})
            }
        },
        Command::Opcat { op } => match op {
            OpcatCommand::Fiber { source, target, index } => opcat_fiber(&source, &target, index)?,
            OpcatCommand::Verify { max_n } => {
                let p = Params {
                    max_n,
                    seed: 1,
                    samples: None,
                    sample_sizes: Vec::new(),
                    convention: SignConvention::Koszul,
                    timing: false,
                };
                let r = suites::run(Suite::Opcat, &p)?;
                let pass = r.pass;
                emit(&r, pretty);
                return Ok(pass);
            }
        },
        Command::Census { max_n } => census(max_n)?,
        Command::Verify { suite, opts } => {
            let p = Params {
                max_n: opts.max_n,
                seed: opts.seed,
                samples: opts.samples,
                sample_sizes: opts.sample_sizes,
                convention: opts.convention.into(),
                timing: opts.timing,
            };
            if suite == Suite::All {
                if p.max_n.is_some() {
                    return Err(CliError::Input("verify all runs each suite at its default size; drop --max-n".into()));
                }
                let reports = suites::ALL
                    .iter()
                    .map(|&s| suites::run(s, &p))
                    .collect::<Result<Vec<_>, _>>()?;
                let pass = reports.iter().all(|r| r.pass);
                emit(&json!({"pass": pass, "suites": reports}), pretty);
                return Ok(pass);
            }
            let r = suites::run(suite, &p)?;
            let pass = r.pass;
            emit(&r, pretty);
            return Ok(pass);
        }
    };
    emit(&value, pretty);
    Ok(true)
}

fn dtub_product(op: DOp, a: &str, b: &str) -> Result<Value, CliError> {
    let x: DTubing = input::read_json(a)?;
    let y: DTubing = input::read_json(b)?;
    Ok(json!({"op": op.symbol(), "left": x, "right": y, "result": op.apply(&x, &y)?}))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let _ = cli.json;
    match run(cli.command, cli.pretty) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
