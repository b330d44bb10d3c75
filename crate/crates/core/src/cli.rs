//! Command-line front end. Exit codes: 0 success, 1 predicate or
//! verification failure, 2 cap or budget exhausted, 3 parse or usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::completion::{find_induced_nonmetric_cycles, has_nonmetric_cycle_up_to, is_connected, shortest_path_completion};
use crate::error::Error;
use crate::graph::{EdgeLabelledGraph, PartialMap, VertexId};
use crate::pipeline::{build_witness, extend_isometry, witness_stats, Config, Witness};
use crate::set_repr::build_eppa_graph_capped;
use crate::verifier::cross_check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Names a JSON file holding default [`Config`] values.
pub const CONFIG_ENV: &str = "EPPA_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "eppa", version, about = "Finite metric spaces with extensions of all partial isometries")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Shared {
    /// Maximum vertex count of any constructed level.
    #[arg(long, global = true)]
    vertex_cap: Option<usize>,
    /// Maximum edge count of any constructed level or completion.
    #[arg(long, global = true)]
    edge_cap: Option<usize>,
    /// Node budget for backtracking searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Extend without the order-preserving completion of permutations.
    #[arg(long, global = true)]
    no_coherent: bool,
    /// Where to write the command's data file.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report on a graph; fails if a requested predicate does not hold.
    Check {
        file: PathBuf,
        /// Require a metric space.
        #[arg(long)]
        metric: bool,
        /// Require a connected graph.
        #[arg(long)]
        connected: bool,
        /// Require no induced non-metric cycle on 3..=K vertices.
        #[arg(long, value_name = "K")]
        cycles: Option<usize>,
    },
    /// Shortest path completion of a connected graph.
    Complete { file: PathBuf },
    /// List induced non-metric cycles on exactly `size` vertices.
    Cycles {
        file: PathBuf,
        #[arg(long, required_unless_present = "up_to")]
        size: Option<usize>,
        /// Instead search for any non-metric cycle on at most this many vertices.
        #[arg(long, value_name = "M", conflicts_with = "size")]
        up_to: Option<usize>,
    },
    /// Build the subset graph for a graph and its embedded copy.
    EppaStep { file: PathBuf },
    /// Build a witness for a metric space.
    Witness { file: PathBuf },
    /// Extend a partial isometry of the embedded copy to the whole witness.
    /// The map may name copy vertices or the input's own vertices.
    Extend { witness: PathBuf, map: PathBuf },
    /// Re-check a witness with the independent oracles.
    Verify { witness: PathBuf },
    /// Size report of a witness.
    Stats {
        witness: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// Failure carrying its exit code.
struct Exit(i32, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Exit(exit_code(&e), e.to_string())
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } | Error::EdgeCapExceeded { .. } | Error::BudgetExhausted(_) | Error::Overflow(_) => EXIT_RESOURCE,
        Error::Parse(_)
        | Error::Label(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::UnknownVertex(_)
        | Error::DuplicateVertex(_)
        | Error::Loop(_)
        | Error::DuplicatePair(..)
        | Error::NotInjective(_)
        | Error::NotFunctional(_)
        | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_FAILED,
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| Exit(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<EdgeLabelledGraph, Exit> {
    EdgeLabelledGraph::from_json_str(&read(path)?).map_err(|e| Exit(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn read_witness(path: &Path) -> Result<Witness, Exit> {
    Witness::from_json_str(&read(path)?).map_err(|e| Exit(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn config(shared: &Shared) -> Result<Config, Exit> {
    let mut c = match std::env::var_os(CONFIG_ENV) {
        Some(path) => {
            let path = PathBuf::from(path);
            serde_json::from_str(&read(&path)?).map_err(|e| Exit(EXIT_USAGE, format!("{}: {e}", path.display())))?
        }
        None => Config::default(),
    };
    if let Some(v) = shared.vertex_cap {
        c.vertex_cap = v;
    }
    if let Some(e) = shared.edge_cap {
        c.edge_cap = e;
    }
    if let Some(b) = shared.budget {
        c.search_budget = b;
    }
    if shared.no_coherent {
        c.coherent = false;
    }
    c.validate()?;
    Ok(c)
}

/// Writes data to `--output`, or to standard output without one.
fn emit(shared: &Shared, out: &mut dyn Write, data: &str) -> Result<(), Exit> {
    match &shared.output {
        Some(path) => fs::write(path, data).map_err(|e| Exit(EXIT_USAGE, format!("{}: {e}", path.display()))),
        None => writeln!(out, "{data}").map_err(|e| Exit(EXIT_USAGE, e.to_string())),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable")
}

/// Reads a map written on the input's vertex names as the same map on the
/// embedded copy; maps already on the copy pass through.
fn in_copy(w: &Witness, phi: PartialMap) -> Result<PartialMap, Exit> {
    let names_input = |x: &VertexId| w.input.contains(x) && !w.final_graph.contains(x);
    if phi.is_empty() || !phi.pairs().all(|(x, y)| names_input(x) && names_input(y)) {
        return Ok(phi);
    }
    let at = |x: &VertexId| w.final_embedding.get(x).cloned().expect("embedding is total");
    Ok(PartialMap::new(phi.pairs().map(|(x, y)| (at(x), at(y))))?)
}

/// Runs one command with the given arguments (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Exit> {
    let shared = &cli.shared;
    let say = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| Exit(EXIT_USAGE, e.to_string()));
    match &cli.command {
        Command::Check {
            file,
            metric,
            connected,
            cycles,
        } => {
            let g = read_graph(file)?;
            let mut ok = true;
            say(out, format!("vertices: {}, edges: {}", g.vertex_count(), g.edge_count()))?;
            let spectrum: Vec<String> = g.spectrum().iter().map(|l| l.to_string()).collect();
            say(out, format!("spectrum: [{}]", spectrum.join(", ")))?;
            match g.metric_violation() {
                None => say(out, "metric: yes".into())?,
                Some(v) => {
                    say(out, format!("metric: no ({v})"))?;
                    ok &= !metric;
                }
            }
            let conn = !g.is_empty() && is_connected(&g)?;
            say(out, format!("connected: {}", if conn { "yes" } else { "no" }))?;
            ok &= conn || !connected;
            if let Some(k) = cycles {
                for size in 3..=*k {
                    let found = find_induced_nonmetric_cycles(&g, size)?;
                    say(out, format!("induced non-metric cycles on {size} vertices: {}", found.len()))?;
                    for c in &found {
                        let vs: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
                        say(out, format!("  [{}] long edge {{{}, {}}}", vs.join(", "), c.long_edge.0, c.long_edge.1))?;
                    }
                    ok &= found.is_empty();
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Complete { file } => {
            let g = read_graph(file)?;
            let c = shortest_path_completion(&g)?;
            emit(shared, out, &pretty(&c))?;
            Ok(EXIT_OK)
        }
        Command::Cycles { file, size, up_to } => {
            let g = read_graph(file)?;
            match up_to {
                Some(m) => {
                    let cfg = config(shared)?;
                    let found = has_nonmetric_cycle_up_to(&g, *m, cfg.search_budget)?;
                    emit(shared, out, &pretty(&found))?;
                }
                None => {
                    let size = size.expect("clap requires one of the two");
                    emit(shared, out, &pretty(&find_induced_nonmetric_cycles(&g, size)?))?
                }
            }
            Ok(EXIT_OK)
        }
        Command::EppaStep { file } => {
            let cfg = config(shared)?;
            let g = read_graph(file)?;
            let b = build_eppa_graph_capped(&g, cfg.vertex_cap, cfg.edge_cap)?;
            let data = serde_json::json!({
                "assignment": b.assignment,
                "graph": b.graph,
                "embedding": b.embedding,
            });
            emit(shared, out, &pretty(&data))?;
            if shared.output.is_some() {
                say(
                    out,
                    format!(
                        "universe: {} elements, k = {}\nsubset graph: {} vertices, {} edges",
                        b.assignment.universe.len(),
                        b.assignment.k,
                        b.graph.vertex_count(),
                        b.graph.edge_count()
                    ),
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Witness { file } => {
            let cfg = config(shared)?;
            let g = read_graph(file)?;
            let w = build_witness(&g, cfg)?;
            emit(shared, out, &w.to_json_string())?;
            if shared.output.is_some() {
                say(out, witness_stats(&w).to_string())?;
            }
            Ok(EXIT_OK)
        }
        Command::Extend { witness, map } => {
            let w = read_witness(witness)?;
            let phi: PartialMap =
                serde_json::from_str(&read(map)?).map_err(|e| Exit(EXIT_USAGE, format!("{}: {e}", map.display())))?;
            let theta = extend_isometry(&w, &in_copy(&w, phi)?)?;
            emit(shared, out, &pretty(&theta))?;
            Ok(EXIT_OK)
        }
        Command::Verify { witness } => {
            let cfg = config(shared)?;
            let w = read_witness(witness)?;
            let report = cross_check(&w, cfg.search_budget)?;
            say(out, report.to_string())?;
            if let Some(path) = &shared.output {
                fs::write(path, report.to_json_string()).map_err(|e| Exit(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            }
            Ok(if report.failures().next().is_some() {
                EXIT_FAILED
            } else if report.budget_exhausted {
                EXIT_RESOURCE
            } else {
                EXIT_OK
            })
        }
        Command::Stats { witness, json } => {
            let w = read_witness(witness)?;
            let stats = witness_stats(&w);
            if *json {
                emit(shared, out, &pretty(&stats))?;
            } else {
                say(out, stats.to_string())?;
            }
            Ok(EXIT_OK)
        }
    }
}
