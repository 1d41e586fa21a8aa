//! `pcf`: batch front end for the PCF coloring library.
//!
//! Exit codes: 0 success, 1 negative verdict (not PCF, UNSAT, refuted, no
//! configuration, failing criterion), 2 usage or I/O error, 3 internal
//! invariant failure or exhausted solver budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pcf_core::acceptance::{run_all, AcceptConfig};
use pcf_core::colorer::{color, ColorError, ColorOptions, Regime};
use pcf_core::coloring::{degree_plus_k, is_pcf, random_uniform_size, Violation};
use pcf_core::discharging::verify_contradiction;
use pcf_core::generators::{gen_girth12, gen_k4mf, gen_o1p, named};
use pcf_core::io::{parse_edge_list, write_edge_list};
use pcf_core::patterns::{all_patterns, find, find_all, find_any, ConfigId};
use pcf_core::solver::{budget_from_env, chi_pcf, refute_choosability, solve, RefuteOutcome, SolveStatus};
use pcf_core::{ClassCertificate, Coloring, Graph, GraphClass, ListAssignment};

#[derive(Parser)]
#[command(name = "pcf", version, about = "Proper conflict-free list coloring tools")]
struct Cli {
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Edge-list file (`p <n> <m>` header, then `e <u> <v>` lines).
    graph: Option<PathBuf>,
    /// Built-in graph: C<l>, P<l>, K<n> or SK<n>.
    #[arg(long, conflicts_with = "graph")]
    named: Option<String>,
}

#[derive(Args)]
struct ListsArg {
    /// List assignment file (`{"lists": {...}}`).
    #[arg(long, conflicts_with_all = ["uniform", "degree_plus"])]
    lists: Option<PathBuf>,
    /// Every vertex gets the list 1..=K.
    #[arg(long, value_name = "K")]
    uniform: Option<u32>,
    /// Random lists of size d(v)+K.
    #[arg(long, value_name = "K", conflicts_with = "uniform")]
    degree_plus: Option<usize>,
    /// Color universe for random lists (default max degree + K + 2).
    #[arg(long)]
    universe: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a coloring is PCF (and respects lists, if given).
    Verify {
        graph: PathBuf,
        coloring: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
    },
    /// Exact PCF list coloring.
    Solve {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        lists: ListsArg,
    },
    /// PCF chromatic number.
    Chi {
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Search for a (degree+k) list assignment with no PCF coloring.
    Refute {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(short, long)]
        k: usize,
        #[arg(long)]
        universe: Option<usize>,
    },
    /// Constructive coloring by reduction, with a trace.
    Color {
        #[command(flatten)]
        graph: GraphArg,
        /// Class certificate; defaults to `<graph>.cert.json` when present.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Class to certify directly (k4mf or any) when there is no certificate file.
        #[arg(long)]
        class: Option<GraphClass>,
        /// degree+<k> or uniform-<k>.
        #[arg(long, default_value = "degree+2")]
        regime: Regime,
        #[arg(long)]
        lists: Option<PathBuf>,
        #[arg(long)]
        universe: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the reduction trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Find configurations.
    Detect {
        #[command(flatten)]
        graph: GraphArg,
        /// Comma-separated ids such as T1,T8,X2 (default: every pattern).
        #[arg(long, value_delimiter = ',')]
        ids: Vec<ConfigId>,
        /// List every match of every id instead of the first hit.
        #[arg(long)]
        all: bool,
    },
    /// Thread decomposition, charges and properties of a girth-12 graph.
    Discharge {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Generate a certified random instance.
    Gen {
        #[arg(long)]
        class: GraphClass,
        /// Order (for girth12: order of the base before subdivision).
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Edge-list output; the certificate goes to `<out>.cert.json`.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run the acceptance suite.
    Accept {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

type Outcome = Result<bool, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph_file(path: &Path) -> Result<Graph, Failure> {
    parse_edge_list(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(arg: &GraphArg) -> Result<Graph, Failure> {
    match (&arg.graph, &arg.named) {
        (Some(p), _) => load_graph_file(p),
        (None, Some(name)) => named::by_name(name).map_err(usage),
        (None, None) => Err(usage("give a graph file or --named")),
    }
}

/// Uses the given seed or derives one from the clock and reports it.
fn seed_or_derive(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos() as u64);
        eprintln!("seed: {s}");
        s
    })
}

fn load_lists(g: &Graph, arg: &ListsArg) -> Result<ListAssignment, Failure> {
    if let Some(p) = &arg.lists {
        let lists = ListAssignment::from_json(&read(p)?).map_err(usage)?;
        lists.check_covers(g).map_err(usage)?;
        return Ok(lists);
    }
    if let Some(k) = arg.uniform {
        return Ok(ListAssignment::uniform(g, 1..=k));
    }
    let k = arg
        .degree_plus
        .ok_or_else(|| usage("give --lists, --uniform or --degree-plus"))?;
    let universe = arg.universe.unwrap_or(g.max_degree() + k + 2);
    degree_plus_k(g, k, universe, seed_or_derive(arg.seed)).map_err(usage)
}

fn emit(json_mode: bool, value: Value, human: impl FnOnce() -> String) {
    if json_mode {
        println!("{value}");
    } else {
        println!("{}", human());
    }
}

fn verify(json_mode: bool, graph: &Path, coloring: &Path, lists: Option<&Path>) -> Outcome {
    let g = load_graph_file(graph)?;
    let phi = Coloring::from_json(&read(coloring)?).map_err(usage)?;
    let lists = lists
        .map(|p| read(p).and_then(|t| ListAssignment::from_json(&t).map_err(usage)))
        .transpose()?;
    let report = is_pcf(&g, &phi, lists.as_ref()).map_err(usage)?;
    emit(json_mode, serde_json::to_value(&report).unwrap(), || {
        if report.pcf {
            return "PCF".to_string();
        }
        let lines: Vec<String> = report
            .violations
            .iter()
            .map(|v| match v {
                Violation::Improper { u, v, color } => format!("improper edge {u}-{v} (both color {color})"),
                Violation::NoUniqueColor { v } => format!("vertex {v} has no unique color"),
                Violation::NotInList { v, color } => format!("vertex {v} colored {color} outside its list"),
            })
            .collect();
        format!("not PCF\n{}", lines.join("\n"))
    });
    Ok(report.pcf)
}

fn solve_cmd(json_mode: bool, graph: &GraphArg, lists: &ListsArg) -> Outcome {
    let g = load_graph(graph)?;
    let lists = load_lists(&g, lists)?;
    let out = solve(&g, &lists, budget_from_env()).map_err(usage)?;
    emit(json_mode, serde_json::to_value(&out).unwrap(), || match &out.status {
        SolveStatus::Sat { coloring } => format!("SAT ({} nodes)\n{}", out.nodes, coloring.to_json()),
        SolveStatus::Unsat => format!("UNSAT ({} nodes)", out.nodes),
        SolveStatus::BudgetExhausted => format!("budget exhausted after {} nodes", out.nodes),
    });
    if matches!(out.status, SolveStatus::BudgetExhausted) {
        return Err(Failure::Internal(format!(
            "solver budget exhausted after {} nodes",
            out.nodes
        )));
    }
    Ok(out.is_sat())
}

fn chi_cmd(json_mode: bool, graph: &GraphArg) -> Outcome {
    let g = load_graph(graph)?;
    let out = chi_pcf(&g, budget_from_env()).map_err(usage)?;
    emit(json_mode, serde_json::to_value(&out).unwrap(), || out.chi.to_string());
    Ok(true)
}

fn refute_cmd(json_mode: bool, graph: &GraphArg, k: usize, universe: Option<usize>) -> Outcome {
    let g = load_graph(graph)?;
    let out = refute_choosability(&g, k, universe, budget_from_env()).map_err(usage)?;
    emit(json_mode, serde_json::to_value(&out).unwrap(), || match &out {
        RefuteOutcome::Found {
            lists,
            assignments_checked,
            ..
        } => {
            format!(
                "not (degree+{k})-choosable; bad lists after {assignments_checked} assignments:\n{}",
                lists.to_json()
            )
        }
        RefuteOutcome::NotFound {
            universe,
            assignments_checked,
            ..
        } => {
            format!("no bad assignment over universe {universe} ({assignments_checked} assignments)")
        }
    });
    Ok(matches!(out, RefuteOutcome::NotFound { .. }))
}

fn cert_path(graph: &GraphArg) -> Option<PathBuf> {
    let p = graph.graph.as_ref()?;
    let mut s = p.clone().into_os_string();
    s.push(".cert.json");
    Some(PathBuf::from(s)).filter(|p| p.exists())
}

fn load_cert(
    g: &Graph,
    graph: &GraphArg,
    cert: Option<&Path>,
    class: Option<GraphClass>,
) -> Result<ClassCertificate, Failure> {
    if let Some(class) = class {
        return match class {
            GraphClass::Unrestricted => Ok(ClassCertificate::unrestricted(g)),
            GraphClass::K4MinorFree => ClassCertificate::k4_minor_free(g).ok_or_else(|| usage("graph has a K4 minor")),
            other => Err(usage(format!("class {other} needs a certificate file"))),
        };
    }
    let path = cert.map(Path::to_path_buf).or_else(|| cert_path(graph));
    let path = path.ok_or_else(|| usage("give --cert or --class"))?;
    ClassCertificate::from_json(g, &read(&path)?).map_err(usage)
}

#[allow(clippy::too_many_arguments)]
fn color_cmd(
    json_mode: bool,
    graph: &GraphArg,
    cert: Option<&Path>,
    class: Option<GraphClass>,
    regime: Regime,
    lists: Option<&Path>,
    universe: Option<usize>,
    seed: Option<u64>,
    trace: Option<&Path>,
) -> Outcome {
    let g = load_graph(graph)?;
    let cert = load_cert(&g, graph, cert, class)?;
    let lists = match lists {
        Some(p) => ListAssignment::from_json(&read(p)?).map_err(usage)?,
        None => {
            let seed = seed_or_derive(seed);
            match regime {
                Regime::DegreePlus(k) => degree_plus_k(&g, k, universe.unwrap_or(g.max_degree() + k + 2), seed),
                Regime::Uniform(k) => random_uniform_size(&g, k, universe.unwrap_or(k + 4), seed),
            }
            .map_err(usage)?
        }
    };
    let opts = ColorOptions {
        budget: budget_from_env(),
        ..Default::default()
    };
    match color(&g, &lists, &cert, regime, &opts) {
        Ok(r) => {
            if let Some(p) = trace {
                write(p, &serde_json::to_string_pretty(&r.trace).unwrap())?;
            }
            emit(
                json_mode,
                json!({"coloring": r.coloring, "steps": r.trace.steps.len()}),
                || format!("{}\n{} reduction steps", r.coloring.to_json(), r.trace.steps.len()),
            );
            Ok(true)
        }
        // without a class guarantee a failed reduction is a finding, not a bug
        Err(e) if e.is_internal() && cert.class() == GraphClass::Unrestricted => {
            emit(json_mode, json!({"error": e.to_string()}), || {
                format!("no coloring found: {e}")
            });
            Ok(false)
        }
        Err(e) if e.is_internal() || matches!(e, ColorError::BudgetExhausted) => Err(Failure::Internal(e.to_string())),
        Err(e) => Err(usage(e)),
    }
}

fn detect_cmd(json_mode: bool, graph: &GraphArg, ids: &[ConfigId], all: bool) -> Outcome {
    let g = load_graph(graph)?;
    let ids: Vec<ConfigId> = if ids.is_empty() {
        all_patterns().iter().map(|p| p.id).collect()
    } else {
        ids.to_vec()
    };
    let matches = if all {
        ids.iter().flat_map(|&id| find_all(&g, id, usize::MAX)).collect()
    } else if ids.len() == 1 {
        find(&g, ids[0]).into_iter().collect()
    } else {
        find_any(&g, &ids).into_iter().collect::<Vec<_>>()
    };
    emit(json_mode, serde_json::to_value(&matches).unwrap(), || {
        if matches.is_empty() {
            return "no configuration found".to_string();
        }
        matches
            .iter()
            .map(|m| {
                let roles: Vec<String> = m.roles().iter().map(|(c, v)| format!("{c}={v}")).collect();
                format!("{} {}", m.id, roles.join(" "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    });
    Ok(!matches.is_empty())
}

fn discharge_cmd(json_mode: bool, graph: &GraphArg, cert: Option<&Path>) -> Outcome {
    let g = load_graph(graph)?;
    let cert = load_cert(&g, graph, cert, None)?;
    let report = verify_contradiction(&g, Some(&cert)).map_err(usage)?;
    let value = serde_json::to_value(&report).unwrap();
    emit(json_mode, value.clone(), || {
        serde_json::to_string_pretty(&value).unwrap()
    });
    Ok(report.initial_bound_holds && report.edge_bound_holds)
}

fn gen_cmd(
    json_mode: bool,
    class: GraphClass,
    n: usize,
    max_degree: Option<usize>,
    seed: Option<u64>,
    out: &Path,
) -> Outcome {
    let seed = seed_or_derive(seed);
    let c = match class {
        GraphClass::K4MinorFree => gen_k4mf(n, seed),
        GraphClass::Outer1Planar => gen_o1p(n, seed, max_degree),
        GraphClass::PlanarGirth12 => gen_girth12(n, seed),
        GraphClass::Unrestricted => return Err(usage("no generator for class any")),
    }
    .map_err(usage)?;
    let text = write_edge_list(&c.graph).map_err(|e| Failure::Internal(e.to_string()))?;
    write(out, &text)?;
    let mut cert_path = out.as_os_str().to_owned();
    cert_path.push(".cert.json");
    write(Path::new(&cert_path), &c.cert.to_json())?;
    emit(
        json_mode,
        json!({"seed": seed, "n": c.graph.order(), "m": c.graph.size(), "max_degree": c.graph.max_degree()}),
        || {
            format!(
                "seed {seed}: n={} m={} max degree {}",
                c.graph.order(),
                c.graph.size(),
                c.graph.max_degree()
            )
        },
    );
    Ok(true)
}

fn accept_cmd(json_mode: bool, quick: bool, seed: u64) -> Outcome {
    let cfg = if quick {
        AcceptConfig::quick(seed)
    } else {
        AcceptConfig::full(seed)
    };
    let report = run_all(&cfg);
    emit(json_mode, serde_json::to_value(&report).unwrap(), || {
        report.criteria.iter().map(|c| c.line()).collect::<Vec<_>>().join("\n")
    });
    Ok(report.all_pass())
}

fn run(cli: Cli) -> Outcome {
    let j = cli.json;
    match &cli.command {
        Command::Verify { graph, coloring, lists } => verify(j, graph, coloring, lists.as_deref()),
        Command::Solve { graph, lists } => solve_cmd(j, graph, lists),
        Command::Chi { graph } => chi_cmd(j, graph),
        Command::Refute { graph, k, universe } => refute_cmd(j, graph, *k, *universe),
        Command::Color {
            graph,
            cert,
            class,
            regime,
            lists,
            universe,
            seed,
            trace,
        } => color_cmd(
            j,
            graph,
            cert.as_deref(),
            *class,
            *regime,
            lists.as_deref(),
            *universe,
            *seed,
            trace.as_deref(),
        ),
        Command::Detect { graph, ids, all } => detect_cmd(j, graph, ids, *all),
        Command::Discharge { graph, cert } => discharge_cmd(j, graph, cert.as_deref()),
        Command::Gen {
            class,
            n,
            max_degree,
            seed,
            out,
        } => gen_cmd(j, *class, *n, *max_degree, *seed, out),
        Command::Accept { quick, seed } => accept_cmd(j, *quick, *seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
