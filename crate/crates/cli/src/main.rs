mod dot;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use antimagic::constructions::{self, LabelingReport};
use antimagic::families::{self, NecklaceSpec};
use antimagic::graph::{corona_with_empty, join_with_empty};
use antimagic::magic::{construct_mr, construct_mrs};
use antimagic::solver::{chi_la_exact, chi_la_upper_heuristic, SolveOptions, SolveStatus};
use antimagic::verifier::{bounds_report, is_local_antimagic};
use antimagic::{EdgeLabeling, Error, Graph};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use manifest::RunManifest;

const EXIT_INVALID: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "antimagic", version, about = "Local antimagic labelings: generate, label, verify, solve")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph from a family
    Gen(FamilyArgs),
    /// Build a labeling for a family
    Label(FamilyArgs),
    /// Check a labeling against a graph
    Verify {
        graph: PathBuf,
        labeling: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute the local antimagic chromatic number
    Solve(SolveArgs),
    /// Report lower bounds
    Bounds {
        graph: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Magic rectangle
    Mr {
        #[arg(short)]
        a: usize,
        #[arg(short)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        offset: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Magic rectangle set
    Mrs {
        #[arg(short)]
        a: usize,
        #[arg(short)]
        b: usize,
        #[arg(short)]
        c: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Graphviz output, with labels and weights when a labeling is given
    ExportDot {
        graph: PathBuf,
        labeling: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum Family {
    Paths,
    Cycles,
    Stars,
    Complete,
    Bipartite,
    Multipartite,
    Necklace,
    Corona,
    Join,
}

#[derive(Args, Debug, Serialize)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// number of copies
    #[arg(short, default_value_t = 1)]
    r: usize,
    #[arg(short)]
    n: Option<usize>,
    /// first side for bipartite, pendants per vertex for corona
    #[arg(short)]
    m: Option<usize>,
    /// vertices added by a join
    #[arg(short)]
    q: Option<usize>,
    /// part sizes for multipartite
    #[arg(long, value_delimiter = ',')]
    parts: Vec<usize>,
    /// cycle lengths for a necklace
    #[arg(long, value_delimiter = ',')]
    lengths: Vec<usize>,
    /// per-cycle `upper:lower` splits for a necklace
    #[arg(long, value_delimiter = ',')]
    splits: Vec<String>,
    /// base graph for corona and join
    #[arg(long)]
    graph: Option<PathBuf>,
    /// base labeling for corona and join
    #[arg(long)]
    labeling: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// also write the labeled graph (label only)
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = antimagic::solver::DEFAULT_MAX_EDGES)]
    max_edges: usize,
    #[arg(long)]
    budget_ms: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// randomized upper bound instead of exact search
    #[arg(long, requires = "seed")]
    heuristic: bool,
    #[arg(long, default_value_t = 20000)]
    iterations: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

/// Failure carrying its exit code and a one-line reason.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::InfeasibleParameters(_) | Error::NotBipartite | Error::NotConnected | Error::K2Component => {
                EXIT_INFEASIBLE
            }
            Error::BudgetExceeded(_) | Error::TooLarge { .. } | Error::NoValidLabelingFound(_) => EXIT_BUDGET,
            Error::InvalidGraph(_)
            | Error::FormulaBreakdown(_)
            | Error::LengthMismatch { .. }
            | Error::WeightCollision { .. } => EXIT_INVALID,
        };
        Fail(code, e.to_string())
    }
}

type CmdResult = Result<u8, Fail>;

fn read(path: &Path, m: &mut RunManifest, name: &str) -> Result<String, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail(EXIT_INVALID, format!("{}: {e}", path.display())))?;
    m.input(name, text.as_bytes());
    Ok(text)
}

fn read_graph(path: &Path, m: &mut RunManifest) -> Result<Graph, Fail> {
    let text = read(path, m, "graph")?;
    Graph::from_json(&text).map_err(|e| Fail(EXIT_INVALID, format!("{}: {e}", path.display())))
}

/// Accepts a bare labeling or a labeling report; a report made for a
/// different graph is rejected.
fn read_labeling(path: &Path, g: &Graph, m: &mut RunManifest) -> Result<EdgeLabeling, Fail> {
    let text = read(path, m, "labeling")?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Fail(EXIT_INVALID, format!("{}: {e}", path.display())))?;
    if let Some(h) = value.get("graph_hash").and_then(Value::as_str) {
        if h != g.content_hash() {
            return Err(Fail(EXIT_INVALID, format!("{}: labeling belongs to a different graph", path.display())));
        }
    }
    serde_json::from_value(value).map_err(|e| Fail(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn write(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail(EXIT_INVALID, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(out: Option<&Path>, body: impl Serialize, m: &RunManifest) -> Result<(), Fail> {
    let mut v = serde_json::to_value(body).expect("output serializes");
    match &mut v {
        Value::Object(map) => {
            map.insert("manifest".into(), m.to_value());
        }
        other => {
            *other = json!({ "value": other.take(), "manifest": m.to_value() });
        }
    }
    write(out, &(serde_json::to_string_pretty(&v).expect("json") + "\n"))
}

fn need(v: Option<usize>, flag: &str, family: Family) -> Result<usize, Fail> {
    v.ok_or_else(|| Fail(EXIT_INFEASIBLE, format!("{family:?} needs -{flag}").to_lowercase()))
}

fn necklace_spec(a: &FamilyArgs) -> Result<NecklaceSpec, Fail> {
    if a.splits.is_empty() {
        return Ok(NecklaceSpec::new(a.lengths.clone()));
    }
    let splits = a
        .splits
        .iter()
        .map(|s| {
            let (u, l) = s.split_once(':')?;
            Some((u.trim().parse().ok()?, l.trim().parse().ok()?))
        })
        .collect::<Option<Vec<(usize, usize)>>>()
        .ok_or_else(|| Fail(EXIT_INFEASIBLE, "splits must look like 3:2,2:2".into()))?;
    Ok(NecklaceSpec::with_splits(a.lengths.clone(), splits))
}

fn base_of(a: &FamilyArgs, m: &mut RunManifest) -> Result<Graph, Fail> {
    let path = a.graph.as_deref().ok_or_else(|| Fail(EXIT_INFEASIBLE, "--graph is required".into()))?;
    read_graph(path, m)
}

fn generate(a: &FamilyArgs, m: &mut RunManifest) -> Result<Graph, Fail> {
    let f = a.family;
    let g = match f {
        Family::Paths => families::union_paths(a.r, need(a.n, "n", f)?)?,
        Family::Cycles => families::union_cycles(a.r, need(a.n, "n", f)?)?,
        Family::Stars => families::union_stars(a.r, need(a.n, "n", f)?)?,
        Family::Complete => families::complete(need(a.n, "n", f)?)?,
        Family::Bipartite => families::union_complete_bipartite(a.r, need(a.m, "m", f)?, need(a.n, "n", f)?)?,
        Family::Multipartite => families::complete_multipartite(&a.parts)?,
        Family::Necklace => families::necklace(&necklace_spec(a)?)?,
        Family::Corona => {
            let pendants = need(a.m, "m", f)?;
            if pendants == 0 {
                return Err(Fail(EXIT_INFEASIBLE, "corona needs -m >= 1".into()));
            }
            corona_with_empty(&base_of(a, m)?, pendants)
        }
        Family::Join => {
            let q = need(a.q, "q", f)?;
            if q == 0 {
                return Err(Fail(EXIT_INFEASIBLE, "join needs -q >= 1".into()));
            }
            join_with_empty(&base_of(a, m)?, q)
        }
    };
    Ok(g)
}

fn label(a: &FamilyArgs, m: &mut RunManifest) -> Result<LabelingReport, Fail> {
    let f = a.family;
    let base = |m: &mut RunManifest| -> Result<(Graph, EdgeLabeling), Fail> {
        let g = base_of(a, m)?;
        let path = a.labeling.as_deref().ok_or_else(|| Fail(EXIT_INFEASIBLE, "--labeling is required".into()))?;
        let l = read_labeling(path, &g, m)?;
        Ok((g, l))
    };
    let r = match f {
        Family::Paths => constructions::label_union_paths(a.r, need(a.n, "n", f)?)?,
        Family::Cycles => {
            let n = need(a.n, "n", f)?;
            if n % 2 == 0 {
                constructions::label_union_cycles_even(a.r, n)?
            } else {
                constructions::label_union_cycles_odd(a.r, n)?
            }
        }
        Family::Stars => constructions::label_union_stars(a.r, need(a.n, "n", f)?)?,
        Family::Complete => constructions::label_complete(need(a.n, "n", f)?)?,
        Family::Bipartite => {
            constructions::label_union_complete_bipartite(a.r, need(a.m, "m", f)?, need(a.n, "n", f)?)?
        }
        Family::Multipartite => constructions::label_complete_multipartite(&a.parts)?,
        Family::Necklace => constructions::label_necklace(&necklace_spec(a)?)?,
        Family::Corona => {
            let (g, l) = base(m)?;
            constructions::label_corona(&g, &l, need(a.m, "m", f)?)?
        }
        Family::Join => {
            let (g, l) = base(m)?;
            constructions::extend_join(&g, &l, need(a.q, "q", f)?)?
        }
    };
    Ok(r)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Gen(a) => {
            let mut m = RunManifest::new("gen", &a);
            let g = generate(&a, &mut m)?;
            m.outcome = format!("graph {} vertices {} edges", g.num_vertices(), g.num_edges());
            emit(a.out.as_deref(), &g, &m)?;
            Ok(0)
        }
        Command::Label(a) => {
            let mut m = RunManifest::new("label", &a);
            let r = label(&a, &mut m)?;
            m.outcome = format!("{} colours", r.num_colors);
            if let Some(p) = &a.graph_out {
                emit(Some(p), &r.graph, &m)?;
            }
            emit(a.out.as_deref(), &r, &m)?;
            Ok(0)
        }
        Command::Verify { graph, labeling, out } => {
            let mut m = RunManifest::new("verify", json!({ "graph": graph, "labeling": labeling }));
            let g = read_graph(&graph, &mut m)?;
            let f = read_labeling(&labeling, &g, &mut m)?;
            let v = is_local_antimagic(&g, &f);
            let valid = v.is_valid();
            m.outcome = if valid { format!("valid, {} colours", v.num_colors) } else { "invalid".into() };
            let mut body = serde_json::to_value(&v).expect("json");
            body["valid"] = json!(valid);
            emit(out.as_deref(), body, &m)?;
            if valid {
                return Ok(0);
            }
            if let Some(e) = &v.error {
                eprintln!("invalid: {e}");
            } else if !v.bijection {
                eprintln!("invalid: labels are not a bijection onto 1..{}", f.len());
            } else if let Some((a, b)) = v.first_violation {
                eprintln!("invalid: adjacent vertices {a} and {b} share weight {}", v.weights[a]);
            }
            Ok(EXIT_INVALID)
        }
        Command::Solve(a) => {
            let mut m = RunManifest::new("solve", &a);
            let g = read_graph(&a.graph, &mut m)?;
            let result = if a.heuristic {
                chi_la_upper_heuristic(&g, a.iterations, a.seed.unwrap_or_default())?
            } else {
                let opts = SolveOptions {
                    max_edges: a.max_edges,
                    time_budget: a.budget_ms.map(Duration::from_millis),
                    threads: a.threads,
                    ..Default::default()
                };
                chi_la_exact(&g, &opts)?
            };
            m.outcome = format!("chi_la {} ({:?})", result.chi_la, result.status);
            emit(a.out.as_deref(), &result, &m)?;
            if result.status == SolveStatus::BudgetExceeded {
                eprintln!("budget exceeded: lower bound {}", result.chi_la);
                return Ok(EXIT_BUDGET);
            }
            Ok(0)
        }
        Command::Bounds { graph, out } => {
            let mut m = RunManifest::new("bounds", json!({ "graph": graph }));
            let g = read_graph(&graph, &mut m)?;
            let r = bounds_report(&g);
            m.outcome = format!("best lower {}", r.best_lower);
            emit(out.as_deref(), &r, &m)?;
            Ok(0)
        }
        Command::Mr { a, b, offset, out } => {
            let mut m = RunManifest::new("mr", json!({ "a": a, "b": b, "offset": offset }));
            let r = construct_mr(a, b, offset)?;
            m.outcome = format!("row sum {}, column sum {}", r.row_sum(), r.col_sum());
            let mut body = serde_json::to_value(&r).expect("json");
            body["row_sum"] = json!(r.row_sum());
            body["col_sum"] = json!(r.col_sum());
            emit(out.as_deref(), body, &m)?;
            Ok(0)
        }
        Command::Mrs { a, b, c, out } => {
            let mut m = RunManifest::new("mrs", json!({ "a": a, "b": b, "c": c }));
            let s = construct_mrs(a, b, c)?;
            m.outcome = format!("row sum {}, column sum {}", s.row_sum(), s.col_sum());
            let mut body = serde_json::to_value(&s).expect("json");
            body["row_sum"] = json!(s.row_sum());
            body["col_sum"] = json!(s.col_sum());
            emit(out.as_deref(), body, &m)?;
            Ok(0)
        }
        Command::ExportDot { graph, labeling, out } => {
            let mut m = RunManifest::new("export-dot", json!({ "graph": graph, "labeling": labeling }));
            let g = read_graph(&graph, &mut m)?;
            let f = labeling.as_deref().map(|p| read_labeling(p, &g, &mut m)).transpose()?;
            m.outcome = "dot".into();
            let text = dot::to_dot(&g, f.as_ref(), Some(&format!("manifest {}", m.hash())))?;
            write(out.as_deref(), &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
