//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::commgraph::{CommGraph, GraphKind};
use crate::constructions::{construct, GroupSpec};
use crate::error::{Error, Result};
use crate::group::{GroupTable, DEFAULT_ORDER_CAP};
use crate::io::{load_or_enumerate, to_json_text, write_atomic, AnalysisDoc, CacheStatus, GroupInfo, GraphDoc};
use crate::lattice::{enumerate_subgroups, Lattice, DEFAULT_LATTICE_CAP};
use crate::verify::{self, Corpus, Suite, VerdictReport, VerifyOptions};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERDICT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_ORDER_CAP: i32 = 3;
pub const EXIT_LATTICE_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "commgraph", version, about = "Subgroup lattices and p-local commensurability graphs of finite groups")]
pub struct Cli {
    /// Largest group order that may be constructed.
    #[arg(long, global = true, env = "COMMGRAPH_ORDER_CAP", default_value_t = DEFAULT_ORDER_CAP)]
    pub order_cap: usize,

    /// Largest number of subgroups that may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_LATTICE_CAP)]
    pub lattice_cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, factorization, structure flags and derived series.
    Group {
        /// Group spec document, or @PATH to read one from a file.
        spec: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Enumerate the subgroup lattice.
    Subgroups {
        spec: String,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Build a graph on the subgroup lattice and export it.
    Graph(GraphArgs),
    /// Components, their classes and diameters.
    Analyze(GraphArgs),
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(
            ["totaldisc", "bounds", "lemmas", "sym4", "construction", "cd", "p2q", "all"]))]
        suite: String,
        #[arg(long, default_value_t = verify::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// JSON array of {"name", "spec", "enumerate"} entries replacing the default corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Include wall-clock runtimes in the report.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    spec: String,
    #[arg(short = 'p')]
    p: u64,
    #[arg(long, default_value = "comm")]
    kind: String,
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OrderCapExceeded { .. } => EXIT_ORDER_CAP,
        Error::LatticeCapExceeded { .. } => EXIT_LATTICE_CAP,
        _ => EXIT_PARSE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_PASS };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read_spec(arg: &str) -> Result<GroupSpec> {
    match arg.strip_prefix('@') {
        Some(path) => GroupSpec::parse(&std::fs::read_to_string(path)?),
        None => GroupSpec::parse(arg),
    }
}

fn build_group(cli: &Cli, spec: &GroupSpec) -> Result<Arc<GroupTable>> {
    Ok(Arc::new(construct(spec, cli.order_cap)?))
}

fn lattice(cli: &Cli, spec: &GroupSpec, table: &Arc<GroupTable>, cache: Option<&Path>, err: &mut dyn Write) -> Result<Lattice> {
    match cache {
        None => enumerate_subgroups(table, cli.lattice_cap),
        Some(path) => {
            let (lattice, status) = load_or_enumerate(path, spec, table, cli.lattice_cap)?;
            let verb = match status {
                CacheStatus::Loaded => "loaded lattice from",
                CacheStatus::Written => "wrote lattice cache",
            };
            writeln!(err, "{verb} {}", path.display())?;
            Ok(lattice)
        }
    }
}

fn build_graph(cli: &Cli, args: &GraphArgs, err: &mut dyn Write) -> Result<(GroupSpec, CommGraph)> {
    let spec = read_spec(&args.spec)?;
    let kind: GraphKind = args.kind.parse().map_err(Error::InvalidSpec)?;
    let table = build_group(cli, &spec)?;
    let lattice = Arc::new(lattice(cli, &spec, &table, args.cache.as_deref(), err)?);
    let graph = CommGraph::build(&lattice, args.p, kind)?;
    Ok((spec, graph))
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Group { spec, json } => {
            let spec = read_spec(spec)?;
            let table = build_group(cli, &spec)?;
            let doc = GroupInfo::new(&spec, &table);
            if let Some(path) = json {
                write_atomic(path, to_json_text(&doc).as_bytes())?;
            }
            out.write_all(doc.to_text().as_bytes())?;
        }
        Command::Subgroups { spec, cache } => {
            let spec = read_spec(spec)?;
            let table = build_group(cli, &spec)?;
            let lattice = lattice(cli, &spec, &table, cache.as_deref(), err)?;
            writeln!(out, "{} subgroups", lattice.len())?;
            for (order, ids) in lattice.by_order() {
                writeln!(out, "order {order}: {}", ids.len())?;
            }
        }
        Command::Graph(args) => {
            let (spec, graph) = build_graph(cli, args, err)?;
            let dot = args.dot.as_ref().map(|_| crate::io::export_dot(&graph));
            let json = args.json.as_ref().map(|_| to_json_text(&GraphDoc::new(&spec, &graph, &graph.analyze())));
            if let (Some(path), Some(text)) = (&args.dot, dot) {
                write_atomic(path, text.as_bytes())?;
            }
            if let (Some(path), Some(text)) = (&args.json, json) {
                write_atomic(path, text.as_bytes())?;
            }
            writeln!(out, "{} vertices, {} edges", graph.vertex_count(), graph.edges().len())?;
        }
        Command::Analyze(args) => {
            let (spec, graph) = build_graph(cli, args, err)?;
            let analysis = graph.analyze();
            let text = to_json_text(&AnalysisDoc::new(&spec, &graph, &analysis));
            if let Some(path) = &args.json {
                write_atomic(path, text.as_bytes())?;
            }
            if let Some(path) = &args.dot {
                write_atomic(path, crate::io::export_dot(&graph).as_bytes())?;
            }
            if args.json.is_some() {
                writeln!(
                    out,
                    "{} components, connected diameter {}",
                    analysis.components.len(),
                    analysis.connected_diameter
                )?;
            } else {
                out.write_all(text.as_bytes())?;
            }
        }
        Command::Verify {
            suite,
            trials,
            seed,
            corpus,
            json,
            timing,
        } => {
            let suite: Suite = suite.parse()?;
            let mut opts = VerifyOptions {
                trials: *trials,
                seed: *seed,
                order_cap: cli.order_cap,
                lattice_cap: cli.lattice_cap,
                ..VerifyOptions::default()
            };
            if let Some(path) = corpus {
                opts.corpus = Corpus::from_json(&std::fs::read_to_string(path)?)?;
            }
            let reports: Vec<VerdictReport> = verify::run(suite, &opts)?
                .into_iter()
                .map(|r| if *timing { r } else { r.without_timing() })
                .collect();
            let mut text = if suite == Suite::All {
                serde_json::to_string_pretty(&reports).expect("reports serialize")
            } else {
                reports[0].to_json()
            };
            text.push('\n');
            match json {
                Some(path) => {
                    write_atomic(path, text.as_bytes())?;
                    for r in &reports {
                        writeln!(
                            out,
                            "{}: {} ({} checks, {} failed, {} warnings, {} skips)",
                            r.suite,
                            if r.pass { "pass" } else { "FAIL" },
                            r.records.len(),
                            r.failures().count(),
                            r.warnings.len(),
                            r.skips
                        )?;
                    }
                }
                None => out.write_all(text.as_bytes())?,
            }
            for r in &reports {
                for w in &r.warnings {
                    writeln!(err, "warning [{}]: {w}", r.suite)?;
                }
            }
            if !reports.iter().all(|r| r.pass) {
                return Ok(EXIT_VERDICT_FAIL);
            }
        }
    }
    Ok(EXIT_PASS)
}
