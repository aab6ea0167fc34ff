//! Command-line driver: generation, classification, graph building, solving,
//! line colorings, and the reproduction suite.
//!
//! Exit codes: 0 success, 1 input error, 2 budget exhaustion, 3 claim failure.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sha2::{Digest, Sha256};

use babai::classify::{classify, DistanceClassMatrix};
use babai::constructions::{
    enumerate_odd_parity_solutions, check_odd_parity_solution, product_coloring,
    verify_line_scheme, LineColoringScheme,
};
use babai::error::Error;
use babai::extremal::{bound_report, max_k_distance_set};
use babai::fixtures::{fixture, Fixture};
use babai::graph::{build_graph, DistanceGraph, ForbiddenSpec};
use babai::points::{generate_grid, PointSet};
use babai::rational::Rational;
use babai::solver::{
    bipartition, chromatic_bruteforce, chromatic_exact, degeneracy_order, greedy_coloring,
    BipartitionResult, Coloring, DEFAULT_NODE_BUDGET,
};
use babai::verify::run_claims;

#[derive(Parser)]
#[command(name = "babai", version, about = "Forbidden-distance chromatic numbers on finite point sets")]
struct Cli {
    /// Seed for all randomness (fixed default, never time-based)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on solver parallelism; results are identical for any value
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set: a grid window or a named fixture
    Gen(GenArgs),
    /// Classify pairwise squared distances of a point set
    Classify(ClassifyArgs),
    /// Build the distance graph for a forbidden set and export DIMACS
    Graph(GraphArgs),
    /// Color a graph: exact, greedy, bipartite, or brute force
    Chroma(ChromaArgs),
    /// Evaluate or verify the two-distance interval coloring of the line
    Linecolor(LinecolorArgs),
    /// Combine two colorings into their product
    Product(ProductArgs),
    /// Maximum subset realizing at most k distance classes
    Kdist(KdistArgs),
    /// Primitive solutions of q(a^2+b^2) = 2pc^2 and their parities
    Parity(ParityArgs),
    /// Lower/upper bound ledger for an instance
    Report(ReportArgs),
    /// Run the reproduction suite
    VerifyPaper(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    side: Option<u64>,
    #[arg(long, default_value_t = 1)]
    den: u64,
    #[arg(long, conflicts_with_all = ["dim", "side"])]
    fixture: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    /// Point-set or class-matrix JSON file
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated squared distances as rational strings
    #[arg(long)]
    forbid: Option<String>,
    /// Comma-separated class IDs
    #[arg(long, conflicts_with = "forbid")]
    classes: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChromaArgs {
    /// DIMACS graph file
    #[arg(long)]
    input: PathBuf,
    #[arg(long, conflicts_with_all = ["greedy", "bipartite", "brute"])]
    exact: bool,
    #[arg(long, conflicts_with_all = ["bipartite", "brute"])]
    greedy: bool,
    #[arg(long, conflicts_with = "brute")]
    bipartite: bool,
    #[arg(long)]
    brute: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Point-set JSON matching the graph's vertices, for --svg
    #[arg(long)]
    points: Option<PathBuf>,
    /// Best-effort SVG dump of a 2-D coloring
    #[arg(long, requires = "points")]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct LinecolorArgs {
    #[arg(long)]
    s1: String,
    #[arg(long)]
    s2: String,
    #[arg(long)]
    query: Option<String>,
    #[arg(long, conflicts_with = "query")]
    verify: bool,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value = "100")]
    range: String,
}

#[derive(Args)]
struct ProductArgs {
    /// First coloring JSON ({"assignment": [...], "color_count": c} or chroma output)
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Optional DIMACS union graph to validate the product against
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KdistArgs {
    /// Point-set or class-matrix JSON file
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct ParityArgs {
    #[arg(long)]
    p: i64,
    #[arg(long)]
    q: i64,
    #[arg(long, default_value_t = 50)]
    cmax: i64,
}

#[derive(Args)]
struct ReportArgs {
    /// Point-set or class-matrix JSON file, or a fixture name via --fixture
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, conflicts_with = "input")]
    fixture: Option<String>,
    #[arg(long)]
    k: usize,
    /// Explicit forbidden squared distances (rational strings)
    #[arg(long)]
    forbid: Option<String>,
    /// Explicit forbidden class IDs
    #[arg(long, conflicts_with = "forbid")]
    classes: Option<String>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated list of claim names to run (default: all)
    #[arg(long)]
    only: Option<String>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut inputs: BTreeMap<String, String> = BTreeMap::new();
    let outcome = run(&cli, &mut inputs);
    match outcome {
        Ok((result, exit)) => {
            let report = json!({
                "command": std::env::args().skip(1).collect::<Vec<_>>(),
                "seed": cli.seed,
                "inputs": inputs,
                "result": result,
                "wall_time_ms": started.elapsed().as_millis() as u64,
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExhausted { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(
    cli: &Cli,
    inputs: &mut BTreeMap<String, String>,
) -> Result<(serde_json::Value, ExitCode), Error> {
    match &cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Classify(args) => cmd_classify(args, inputs),
        Command::Graph(args) => cmd_graph(args, inputs),
        Command::Chroma(args) => cmd_chroma(args, inputs),
        Command::Linecolor(args) => cmd_linecolor(args, cli.seed),
        Command::Product(args) => cmd_product(args, inputs),
        Command::Kdist(args) => cmd_kdist(args, inputs),
        Command::Parity(args) => cmd_parity(args),
        Command::Report(args) => cmd_report(args, inputs, cli.seed),
        Command::VerifyPaper(args) => cmd_verify_paper(args, cli.seed),
    }
}

fn digest(inputs: &mut BTreeMap<String, String>, path: &Path, data: &str) {
    let mut hasher = Sha256::new();
    hasher.update(data.as_bytes());
    inputs.insert(
        path.display().to_string(),
        format!("sha256:{:x}", hasher.finalize()),
    );
}

fn read_input(inputs: &mut BTreeMap<String, String>, path: &Path) -> Result<String, Error> {
    let data = fs::read_to_string(path)?;
    digest(inputs, path, &data);
    Ok(data)
}

/// Writes `data` to `--out` when given; otherwise returns it for embedding
/// under the report's `data` key, keeping stdout a single JSON document.
fn write_or_embed(
    out: &Option<PathBuf>,
    data: &str,
    as_json: bool,
) -> Result<serde_json::Value, Error> {
    match out {
        Some(path) => {
            fs::write(path, data)?;
            Ok(serde_json::Value::Null)
        }
        None if as_json => Ok(serde_json::from_str(data)?),
        None => Ok(serde_json::Value::String(data.to_string())),
    }
}

/// Accepts either a point-set file or a class-matrix file; point sets are
/// classified on the fly.
fn load_matrix(
    inputs: &mut BTreeMap<String, String>,
    path: &Path,
) -> Result<(DistanceClassMatrix, Option<PointSet>), Error> {
    let data = read_input(inputs, path)?;
    let value: serde_json::Value = serde_json::from_str(&data)?;
    if value.get("points").is_some() {
        let ps = PointSet::from_json(&data)?;
        Ok((classify(&ps)?, Some(ps)))
    } else if value.get("classes").is_some() {
        Ok((DistanceClassMatrix::from_json(&data)?, None))
    } else {
        Err(Error::Parse("expected a point-set or class-matrix file".into()))
    }
}

fn parse_rational_list(s: &str) -> Result<Vec<Rational>, Error> {
    s.split(',')
        .map(|t| Rational::parse_canonical(t.trim()))
        .collect()
}

fn parse_class_list(s: &str) -> Result<BTreeSet<u32>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad class ID `{t}`")))
        })
        .collect()
}

fn forbidden_spec(
    forbid: &Option<String>,
    classes: &Option<String>,
) -> Result<ForbiddenSpec, Error> {
    match (forbid, classes) {
        (Some(f), None) => Ok(ForbiddenSpec::SquaredDistances(parse_rational_list(f)?)),
        (None, Some(c)) => Ok(ForbiddenSpec::Classes(parse_class_list(c)?)),
        _ => Err(Error::Parse("provide exactly one of --forbid / --classes".into())),
    }
}

fn cmd_gen(args: &GenArgs) -> Result<(serde_json::Value, ExitCode), Error> {
    if let Some(name) = &args.fixture {
        let (payload, count, kind) = match fixture(name)? {
            Fixture::Points(ps) => (ps.to_json(), ps.len(), "points"),
            Fixture::Matrix(m) => (m.to_json(), m.size, "matrix"),
        };
        let data = write_or_embed(&args.out, &payload, true)?;
        return Ok((
            json!({"fixture": name, "kind": kind, "points": count, "data": data,
                   "file": args.out.as_ref().map(|p| p.display().to_string())}),
            ExitCode::SUCCESS,
        ));
    }
    let (dim, side) = match (args.dim, args.side) {
        (Some(d), Some(s)) => (d, s),
        _ => return Err(Error::Parse("gen needs --dim and --side, or --fixture".into())),
    };
    let ps = generate_grid(dim, side, args.den)?;
    let data = write_or_embed(&args.out, &ps.to_json(), true)?;
    Ok((
        json!({"points": ps.len(), "dimension": dim, "data": data,
               "file": args.out.as_ref().map(|p| p.display().to_string())}),
        ExitCode::SUCCESS,
    ))
}

fn cmd_classify(
    args: &ClassifyArgs,
    inputs: &mut BTreeMap<String, String>,
) -> Result<(serde_json::Value, ExitCode), Error> {
    let data = read_input(inputs, &args.input)?;
    let ps = PointSet::from_json(&data)?;
    let m = classify(&ps)?;
    let data = write_or_embed(&args.out, &m.to_json(), true)?;
    Ok((
        json!({"points": ps.len(), "classes": m.class_count(),
               "class_table": m.class_table, "data": data,
               "file": args.out.as_ref().map(|p| p.display().to_string())}),
        ExitCode::SUCCESS,
    ))
}

fn cmd_graph(
    args: &GraphArgs,
    inputs: &mut BTreeMap<String, String>,
) -> Result<(serde_json::Value, ExitCode), Error> {
    let (m, _) = load_matrix(inputs, &args.input)?;
    let spec = forbidden_spec(&args.forbid, &args.classes)?;
    let g = build_graph(&m, &spec)?;
    let data = write_or_embed(&args.out, &g.to_dimacs(), false)?;
    Ok((
        json!({
            "data": data,
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "max_degree": g.max_degree(),
            "forbidden_classes": g.forbidden_classes,
            "realized": g.realized.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "unrealized": g.unrealized.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "file": args.out.as_ref().map(|p| p.display().to_string()),
        }),
        ExitCode::SUCCESS,
    ))
}

fn cmd_chroma(
    args: &ChromaArgs,
    inputs: &mut BTreeMap<String, String>,
) -> Result<(serde_json::Value, ExitCode), Error> {
    let data = read_input(inputs, &args.input)?;
    let g = DistanceGraph::from_dimacs(&data)?;
    let (result, coloring): (serde_json::Value, Option<Coloring>) = if args.greedy {
        let c = greedy_coloring(&g, &degeneracy_order(&g));
        (json!({"mode": "greedy", "colors": c.color_count, "coloring": c.assignment}), Some(c))
    } else if args.bipartite {
        let r = bipartition(&g);
        let coloring = match &r {
            BipartitionResult::Bipartition { sides } => {
                let mut a = vec![0usize; g.vertex_count()];
                for &v in &sides[1] {
                    a[v] = 1;
                }
                Some(Coloring { assignment: a, color_count: 2 })
            }
            BipartitionResult::OddCycle { .. } => None,
        };
        (serde_json::to_value(&r)?, coloring)
    } else if args.brute {
        let chi = chromatic_bruteforce(&g)?;
        (json!({"mode": "brute", "chi": chi}), None)
    } else {
        // exact is the default mode
        let r = chromatic_exact(&g, args.budget)?;
        (serde_json::to_value(&r)?, Some(r.witness))
    };
    if let (Some(svg_path), Some(points_path)) = (&args.svg, &args.points) {
        if let Some(c) = &coloring {
            let ps = PointSet::from_json(&read_input(inputs, points_path)?)?;
            if ps.dimension == 2 && ps.len() == g.vertex_count() {
                fs::write(svg_path, svg_dump(&ps, c))?;
            }
        }
    }
    Ok((result, ExitCode::SUCCESS))
}

fn svg_dump(ps: &PointSet, c: &Coloring) -> String {
    const PALETTE: [&str; 8] = [
        "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    ];
    let xs: Vec<f64> = ps.points.iter().map(|p| p.coords[0].to_f64_lossy()).collect();
    let ys: Vec<f64> = ps.points.iter().map(|p| p.coords[1].to_f64_lossy()).collect();
    let (x0, x1) = (xs.iter().cloned().fold(f64::MAX, f64::min), xs.iter().cloned().fold(f64::MIN, f64::max));
    let (y0, y1) = (ys.iter().cloned().fold(f64::MAX, f64::min), ys.iter().cloned().fold(f64::MIN, f64::max));
    let scale = 400.0 / (x1 - x0).max(y1 - y0).max(1.0);
    let mut s = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"440\">\n",
    );
    for (i, p) in ps.points.iter().enumerate() {
        let x = 20.0 + (p.coords[0].to_f64_lossy() - x0) * scale;
        let y = 20.0 + (y1 - p.coords[1].to_f64_lossy()) * scale;
        let color = PALETTE[c.assignment[i] % PALETTE.len()];
        s.push_str(&format!(
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"6\" fill=\"{color}\"/>\n"
        ));
    }
    s.push_str("</svg>\n");
    s
}

fn cmd_linecolor(args: &LinecolorArgs, seed: u64) -> Result<(serde_json::Value, ExitCode), Error> {
    let s1 = Rational::parse_canonical(&args.s1)?;
    let s2 = Rational::parse_canonical(&args.s2)?;
    let scheme = LineColoringScheme::new(s1, s2)?;
    if let Some(q) = &args.query {
        let x = Rational::parse_canonical(q)?;
        let color = scheme.eval(&x);
        return Ok((
            json!({"x": x.to_string(), "color": color, "color_index": color.index()}),
            ExitCode::SUCCESS,
        ));
    }
    if !args.verify {
        return Err(Error::Parse("linecolor needs --query or --verify".into()));
    }
    let range = Rational::parse_canonical(&args.range)?;
    if !range.is_positive() {
        return Err(Error::Precondition("range must be positive".into()));
    }
    let report = verify_line_scheme(&scheme, args.samples, &range, seed);
    let ok = report.violations.is_empty();
    Ok((
        serde_json::to_value(&report)?,
        if ok { ExitCode::SUCCESS } else { ExitCode::from(3) },
    ))
}

fn load_coloring(inputs: &mut BTreeMap<String, String>, path: &Path) -> Result<Coloring, Error> {
    let data = read_input(inputs, path)?;
    let value: serde_json::Value = serde_json::from_str(&data)?;
    // accept chroma output envelopes too
    let value = value.get("result").cloned().unwrap_or(value);
    if let Ok(c) = serde_json::from_value::<Coloring>(value.clone()) {
        return Ok(c);
    }
    if let Some(arr) = value.get("coloring").and_then(|v| v.as_array()) {
        let assignment: Option<Vec<usize>> =
            arr.iter().map(|v| v.as_u64().map(|u| u as usize)).collect();
        if let Some(assignment) = assignment {
            return Ok(Coloring::new(assignment));
        }
    }
    Err(Error::Parse(format!("{} is not a coloring file", path.display())))
}

fn cmd_product(
    args: &ProductArgs,
    inputs: &mut BTreeMap<String, String>,
) -> Result<(serde_json::Value, ExitCode), Error> {
    let a = load_coloring(inputs, &args.a)?;
    let b = load_coloring(inputs, &args.b)?;
    let prod = product_coloring(&a, &b)?;
    let valid = match &args.graph {
        Some(path) => {
            let g = DistanceGraph::from_dimacs(&read_input(inputs, path)?)?;
            Some(prod.is_valid(&g))
        }
        None => None,
    };
    let payload = serde_json::to_string_pretty(&prod).unwrap();
    if let Some(out) = &args.out {
        fs::write(out, &payload)?;
    }
    Ok((
        json!({"color_count": prod.color_count, "coloring": prod.assignment,
               "valid_on_graph": valid}),
        ExitCode::SUCCESS,
    ))
}

fn cmd_kdist(
    args: &KdistArgs,
    inputs: &mut BTreeMap<String, String>,
) -> Result<(serde_json::Value, ExitCode), Error> {
    let (m, _) = load_matrix(inputs, &args.input)?;
    let r = max_k_distance_set(&m, args.k, args.budget)?;
    let exit = if r.optimal { ExitCode::SUCCESS } else { ExitCode::from(2) };
    Ok((serde_json::to_value(&r)?, exit))
}

fn cmd_parity(args: &ParityArgs) -> Result<(serde_json::Value, ExitCode), Error> {
    let sols = enumerate_odd_parity_solutions(args.p, args.q, args.cmax)?;
    let mut entries = Vec::new();
    let mut all_odd = true;
    for &(a, b, c) in &sols {
        let verdict = check_odd_parity_solution(a, b, c, args.p, args.q)?;
        all_odd &= verdict.all_odd();
        entries.push(json!({"a": a, "b": b, "c": c, "parity": verdict}));
    }
    Ok((
        json!({"p": args.p, "q": args.q, "c_max": args.cmax,
               "solutions": entries, "all_odd": all_odd}),
        ExitCode::SUCCESS,
    ))
}

fn cmd_report(
    args: &ReportArgs,
    inputs: &mut BTreeMap<String, String>,
    seed: u64,
) -> Result<(serde_json::Value, ExitCode), Error> {
    let (m, space) = match (&args.input, &args.fixture) {
        (Some(path), None) => {
            let (m, _) = load_matrix(inputs, path)?;
            (m, path.display().to_string())
        }
        (None, Some(name)) => {
            let m = match fixture(name)? {
                Fixture::Points(ps) => classify(&ps)?,
                Fixture::Matrix(m) => m,
            };
            (m, name.clone())
        }
        _ => return Err(Error::Parse("report needs --input or --fixture".into())),
    };
    let explicit = match (&args.forbid, &args.classes) {
        (None, None) => None,
        (f, c) => {
            let spec = forbidden_spec(f, c)?;
            let classes = match spec {
                ForbiddenSpec::Classes(ids) => ids,
                ForbiddenSpec::SquaredDistances(sqs) => {
                    let mut ids = BTreeSet::new();
                    for sq in &sqs {
                        match m.class_for_squared(sq) {
                            Some(id) => {
                                ids.insert(id);
                            }
                            None => {
                                return Err(Error::Parse(format!(
                                    "squared distance {sq} not realized"
                                )))
                            }
                        }
                    }
                    ids
                }
            };
            Some(classes)
        }
    };
    let ledger = bound_report(&space, &m, args.k, explicit, seed, args.budget)?;
    Ok((serde_json::to_value(&ledger)?, ExitCode::SUCCESS))
}

fn cmd_verify_paper(args: &VerifyArgs, seed: u64) -> Result<(serde_json::Value, ExitCode), Error> {
    let only: Option<Vec<&str>> = args
        .only
        .as_deref()
        .map(|s| s.split(',').map(str::trim).collect());
    if let Some(names) = &only {
        for name in names {
            if !babai::verify::CLAIM_NAMES.contains(name) {
                return Err(Error::Parse(format!(
                    "unknown claim `{name}`; choose one of {:?}",
                    babai::verify::CLAIM_NAMES
                )));
            }
        }
    }
    let results = run_claims(only.as_deref(), args.budget, seed);
    for r in &results {
        let status = if r.passed {
            "PASS"
        } else if r.budget_exhausted {
            "BUDGET"
        } else {
            "FAIL"
        };
        eprintln!("{status} {}", r.name);
    }
    let any_budget = results.iter().any(|r| r.budget_exhausted);
    let all_passed = results.iter().all(|r| r.passed);
    let exit = if all_passed {
        ExitCode::SUCCESS
    } else if any_budget {
        ExitCode::from(2)
    } else {
        ExitCode::from(3)
    };
    Ok((serde_json::to_value(&results)?, exit))
}
