//! Command-line front end. One verb per concept: `arbor` for
//! arborescence sums, `laplacian` for the matrices of a graph, `cover`
//! for derived covers and their ratio, `expect` for expected ratios
//! under random voltages, `moment` for the permutation moments.
//!
//! Output is deterministic: identical inputs, flags, and seeds produce
//! byte-identical output. Exit codes: 0 success, 1 usage error,
//! 2 input or parse error, 3 budget exceeded, 4 internal consistency
//! failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;

use arbolift::arborescence::{
    arborescence_sum_matrixtree, enumerate_arborescences, ArborError,
};
use arbolift::cover::{
    derive_cover, ratio_direct, ratio_via_det, validate_cover, voltage_laplacian, CoverError,
};
use arbolift::expectation::{
    expected_ratio_exact, expected_ratio_exact_at, expected_ratio_formula, expected_ratio_mc,
    y_moment_bruteforce, y_moment_formula, ExpectError, ExpectationReport, MomentQuery,
    DEFAULT_BUDGET,
};
use arbolift::graph::{parse_graph, ParsedGraph, VertexId, VoltageGraph, WeightedDigraph};
use arbolift::matrix::RingMatrix;
use arbolift::ring::{Poly, Rational, VarId};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "arbolift",
    version,
    about = "Exact arborescence sums, voltage covers, and expected cover ratios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Arborescence sum of a weighted digraph at a root
    Arbor(ArborArgs),
    /// Degree, adjacency, and Laplacian matrices, or the voltage Laplacian
    Laplacian(LaplacianArgs),
    /// Derived covers of a voltage graph
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Expected arborescence ratio under uniformly random voltages
    Expect(ExpectArgs),
    /// Permutation moment underlying the expectation identity
    Moment(MomentArgs),
}

#[derive(Args)]
struct ArborArgs {
    /// Graph file (voltage data, if present, is ignored)
    #[arg(long, value_name = "PATH")]
    graph: String,
    /// Root vertex name
    #[arg(long, value_name = "VERTEX")]
    root: String,
    /// Computation route
    #[arg(long, value_enum, default_value_t = Method::Det)]
    method: Method,
    /// Tab-separated machine output
    #[arg(long)]
    porcelain: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Matrix-tree determinant
    Det,
    /// Brute-force enumeration
    Brute,
    /// Both, cross-checked
    Both,
}

#[derive(Args)]
struct LaplacianArgs {
    /// Graph file; a fold header selects the voltage Laplacian
    #[arg(long, value_name = "PATH")]
    graph: String,
    /// Tab-separated machine output
    #[arg(long)]
    porcelain: bool,
}

#[derive(Subcommand)]
enum CoverCommand {
    /// Print the derived k-fold cover in graph file syntax
    Derive(CoverIoArgs),
    /// Check the four covering-map conditions on the derived cover
    Validate(CoverIoArgs),
    /// Print the voltage Laplacian
    Laplacian(CoverIoArgs),
    /// Arborescence ratio of the cover, (1/k) times the determinant
    Ratio(CoverRatioArgs),
}

#[derive(Args)]
struct CoverIoArgs {
    /// Voltage graph file (fold header required)
    #[arg(long, value_name = "PATH")]
    graph: String,
    /// Tab-separated machine output
    #[arg(long)]
    porcelain: bool,
}

#[derive(Args)]
struct CoverRatioArgs {
    /// Voltage graph file (fold header required)
    #[arg(long, value_name = "PATH")]
    graph: String,
    /// Also compute every (root, lift) ratio by brute-force enumeration
    /// on the cover and compare
    #[arg(long)]
    check_direct: bool,
    /// Tab-separated machine output
    #[arg(long)]
    porcelain: bool,
}

#[derive(Args)]
struct ExpectArgs {
    /// Graph file (voltage data, if present, is ignored: the voltages
    /// are what the expectation ranges over)
    #[arg(long, value_name = "PATH")]
    graph: String,
    /// Fold count
    #[arg(long, value_name = "INT")]
    k: usize,
    /// Computation route
    #[arg(long, value_enum)]
    mode: ExpectMode,
    /// Weight assignment, e.g. a=1,b=2/3 (exact with an assignment
    /// evaluates numerically; mc requires one unless all weights are
    /// constant)
    #[arg(long, value_name = "VAR=RATIONAL,...")]
    assign: Option<String>,
    /// Monte Carlo sample count
    #[arg(long, value_name = "INT", default_value_t = 10_000)]
    samples: u64,
    /// Monte Carlo master seed
    #[arg(long, value_name = "U64", default_value_t = 0)]
    seed: u64,
    /// Cap on exhaustive enumeration, in ratio evaluations
    #[arg(long, value_name = "INT", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Tab-separated machine output
    #[arg(long)]
    porcelain: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpectMode {
    /// Closed formula
    Formula,
    /// Exhaustive average over all voltage assignments
    Exact,
    /// Seeded Monte Carlo estimate
    Mc,
}

#[derive(Args)]
struct MomentArgs {
    /// Fold count
    #[arg(long, value_name = "INT")]
    k: usize,
    /// Pairing size, 1 <= t <= k-1
    #[arg(long, value_name = "INT")]
    t: usize,
    /// Also evaluate the canonical size-t query by exhaustive
    /// summation over all k! permutations and compare
    #[arg(long)]
    brute: bool,
    /// Tab-separated machine output
    #[arg(long)]
    porcelain: bool,
}

/// An error ready for the shell: a message and an exit code per the
/// contract in the crate docs.
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code: 2,
        }
    }

    fn budget(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code: 3,
        }
    }

    fn inconsistency(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code: 4,
        }
    }
}

impl From<ArborError> for CliError {
    fn from(e: ArborError) -> CliError {
        match e {
            ArborError::ChoiceBudgetExceeded { .. } => CliError::budget(e.to_string()),
        }
    }
}

impl From<ExpectError> for CliError {
    fn from(e: ExpectError) -> CliError {
        match e {
            ExpectError::BudgetExceeded { .. } => CliError::budget(e.to_string()),
            ExpectError::Domain(_) | ExpectError::Ring(_) => CliError::input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else
            // is a usage error.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Arbor(args) => run_arbor(args),
        Command::Laplacian(args) => run_laplacian(args),
        Command::Cover(CoverCommand::Derive(args)) => run_cover_derive(args),
        Command::Cover(CoverCommand::Validate(args)) => run_cover_validate(args),
        Command::Cover(CoverCommand::Laplacian(args)) => run_cover_laplacian(args),
        Command::Cover(CoverCommand::Ratio(args)) => run_cover_ratio(args),
        Command::Expect(args) => run_expect(args),
        Command::Moment(args) => run_moment(args),
    }
}

fn load_graph(path: &str) -> Result<ParsedGraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {path}: {e}")))?;
    parse_graph(&text).map_err(|e| CliError::input(format!("{path}: {e}")))
}

fn load_voltage_graph(path: &str) -> Result<VoltageGraph, CliError> {
    load_graph(path)?
        .into_voltage()
        .map_err(|e| CliError::input(format!("{path}: {e}")))
}

fn resolve_root(g: &WeightedDigraph, name: &str) -> Result<VertexId, CliError> {
    g.vertex_by_name(name)
        .ok_or_else(|| CliError::input(format!("unknown vertex `{name}`")))
}

fn run_arbor(args: ArborArgs) -> Result<String, CliError> {
    let g = load_graph(&args.graph)?.into_base();
    let root = resolve_root(&g, &args.root)?;
    let det = match args.method {
        Method::Det | Method::Both => Some(arborescence_sum_matrixtree(&g, root)),
        Method::Brute => None,
    };
    let brute = match args.method {
        Method::Brute | Method::Both => {
            let trees = enumerate_arborescences(&g, root)?;
            let sum = trees
                .iter()
                .fold(Poly::zero(), |acc, t| acc.add(&t.weight(&g)));
            Some((trees.len(), sum))
        }
        Method::Det => None,
    };
    let verdict = match (&det, &brute) {
        (Some(d), Some((_, b))) => Some(d == b),
        _ => None,
    };
    let mut out = String::new();
    if args.porcelain {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".to_string());
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            args.root,
            opt(brute.as_ref().map(|(n, _)| n.to_string())),
            opt(det.as_ref().map(Poly::to_string)),
            opt(brute.as_ref().map(|(_, s)| s.to_string())),
            opt(verdict.map(|ok| if ok { "MATCH" } else { "MISMATCH" }.to_string())),
        )
        .unwrap();
    } else {
        writeln!(out, "root: {}", args.root).unwrap();
        if let Some((count, _)) = &brute {
            writeln!(out, "arborescences: {count}").unwrap();
        }
        if let Some(d) = &det {
            writeln!(out, "matrix-tree: {d}").unwrap();
        }
        if let Some((_, b)) = &brute {
            writeln!(out, "brute-force: {b}").unwrap();
        }
        if let Some(ok) = verdict {
            writeln!(out, "{}", if ok { "MATCH" } else { "MISMATCH" }).unwrap();
        }
    }
    if verdict == Some(false) {
        print!("{out}");
        return Err(CliError::inconsistency(
            "matrix-tree and brute-force sums disagree",
        ));
    }
    Ok(out)
}

fn porcelain_matrix(out: &mut String, tag: &str, m: &RingMatrix) {
    for i in 0..m.rows() {
        write!(out, "{tag}").unwrap();
        if let Some(labels) = m.row_labels() {
            write!(out, "\t{}", labels[i]).unwrap();
        }
        for j in 0..m.cols() {
            write!(out, "\t{}", m.get(i, j)).unwrap();
        }
        writeln!(out).unwrap();
    }
}

fn run_laplacian(args: LaplacianArgs) -> Result<String, CliError> {
    let parsed = load_graph(&args.graph)?;
    let mut out = String::new();
    match parsed {
        ParsedGraph::Weighted(g) => {
            if args.porcelain {
                porcelain_matrix(&mut out, "D", &g.degree_matrix());
                porcelain_matrix(&mut out, "A", &g.adjacency_matrix());
                porcelain_matrix(&mut out, "L", &g.laplacian());
            } else {
                writeln!(out, "degree:\n{}", g.degree_matrix()).unwrap();
                writeln!(out, "adjacency:\n{}", g.adjacency_matrix()).unwrap();
                writeln!(out, "laplacian:\n{}", g.laplacian()).unwrap();
            }
        }
        ParsedGraph::Voltage(vg) => {
            let vl = voltage_laplacian(&vg);
            if args.porcelain {
                porcelain_matrix(&mut out, "VL", &vl.matrix);
            } else {
                writeln!(out, "voltage laplacian (fold {}):\n{}", vg.k(), vl.matrix).unwrap();
            }
        }
    }
    Ok(out)
}

fn run_cover_derive(args: CoverIoArgs) -> Result<String, CliError> {
    let vg = load_voltage_graph(&args.graph)?;
    let dc = derive_cover(&vg);
    let mut out = String::new();
    if args.porcelain {
        for v in dc.cover.vertex_ids() {
            writeln!(out, "vertex\t{}", dc.cover.vertex_name(v)).unwrap();
        }
        for e in dc.cover.edges() {
            writeln!(
                out,
                "edge\t{}\t{}\t{}",
                dc.cover.vertex_name(e.src),
                dc.cover.vertex_name(e.tgt),
                e.weight
            )
            .unwrap();
        }
    } else {
        out.push_str(&dc.cover.to_text());
    }
    Ok(out)
}

fn run_cover_validate(args: CoverIoArgs) -> Result<String, CliError> {
    let vg = load_voltage_graph(&args.graph)?;
    let dc = derive_cover(&vg);
    let violations = validate_cover(&dc);
    let mut out = String::new();
    if violations.is_empty() {
        if args.porcelain {
            writeln!(
                out,
                "valid\t{}\t{}\t{}",
                dc.k,
                dc.cover.vertex_count(),
                dc.cover.edge_count()
            )
            .unwrap();
        } else {
            writeln!(
                out,
                "valid: {}-fold cover with {} vertices and {} edges satisfies conditions 1-4",
                dc.k,
                dc.cover.vertex_count(),
                dc.cover.edge_count()
            )
            .unwrap();
        }
        return Ok(out);
    }
    for v in &violations {
        if args.porcelain {
            writeln!(out, "violation\t{}\t{}\t{}", v.condition, v.witness, v.detail).unwrap();
        } else {
            writeln!(out, "violation: {v}").unwrap();
        }
    }
    print!("{out}");
    Err(CliError::inconsistency(format!(
        "derived cover fails {} covering condition check(s)",
        violations.len()
    )))
}

fn run_cover_laplacian(args: CoverIoArgs) -> Result<String, CliError> {
    let vg = load_voltage_graph(&args.graph)?;
    let vl = voltage_laplacian(&vg);
    let mut out = String::new();
    if args.porcelain {
        porcelain_matrix(&mut out, "VL", &vl.matrix);
    } else {
        writeln!(out, "voltage laplacian (fold {}):\n{}", vg.k(), vl.matrix).unwrap();
    }
    Ok(out)
}

fn run_cover_ratio(args: CoverRatioArgs) -> Result<String, CliError> {
    let vg = load_voltage_graph(&args.graph)?;
    let ratio = ratio_via_det(&vg);
    let mut out = String::new();
    if args.porcelain {
        writeln!(out, "ratio\t{ratio}").unwrap();
    } else {
        writeln!(out, "ratio: {ratio}").unwrap();
    }
    if !args.check_direct {
        return Ok(out);
    }
    let mut mismatches = 0usize;
    for root in vg.base().vertex_ids() {
        let name = vg.base().vertex_name(root).to_string();
        for lift in 1..=vg.k() {
            let status = match ratio_direct(&vg, root, lift) {
                Ok(direct) if direct == ratio => "MATCH".to_string(),
                Ok(direct) => {
                    mismatches += 1;
                    format!("MISMATCH: {direct}")
                }
                Err(CoverError::BaseHasNoArborescence { .. }) => "undefined".to_string(),
                Err(e) => {
                    print!("{out}");
                    return Err(CliError::inconsistency(e.to_string()));
                }
            };
            if args.porcelain {
                writeln!(out, "direct\t{name}\t{lift}\t{status}").unwrap();
            } else {
                writeln!(out, "direct root {name} lift {lift}: {status}").unwrap();
            }
        }
    }
    if mismatches > 0 {
        print!("{out}");
        return Err(CliError::inconsistency(format!(
            "{mismatches} direct ratio(s) disagree with the determinant route"
        )));
    }
    Ok(out)
}

fn parse_assignment(text: &str) -> Result<BTreeMap<VarId, Rational>, CliError> {
    let mut map = BTreeMap::new();
    for chunk in text.split(',').filter(|c| !c.trim().is_empty()) {
        let (name, value) = chunk
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("bad assignment `{chunk}`: expected var=rational")))?;
        let var = VarId::new(name.trim())
            .map_err(|e| CliError::input(format!("bad assignment `{chunk}`: {e}")))?;
        let poly: Poly = value
            .trim()
            .parse()
            .map_err(|e| CliError::input(format!("bad assignment `{chunk}`: {e}")))?;
        let rational = poly
            .as_constant()
            .ok_or_else(|| CliError::input(format!("bad assignment `{chunk}`: value is not a rational constant")))?;
        if map.insert(var, rational).is_some() {
            return Err(CliError::input(format!("variable assigned twice in `{text}`")));
        }
    }
    Ok(map)
}

fn run_expect(args: ExpectArgs) -> Result<String, CliError> {
    if args.k < 1 {
        return Err(CliError::input("fold count must be at least 1"));
    }
    let g = load_graph(&args.graph)?.into_base();
    let assignment = args.assign.as_deref().map(parse_assignment).transpose()?;
    let report = match args.mode {
        ExpectMode::Formula => ExpectationReport {
            formula_value: expected_ratio_formula(&g, args.k),
            exact_value: None,
            mc_estimate: None,
            mc_stddev: None,
            mc_variance: None,
            samples: 0,
            seed: 0,
            k: args.k,
        },
        ExpectMode::Exact => {
            let exact = match &assignment {
                None => expected_ratio_exact(&g, args.k, args.budget)?,
                Some(at) => {
                    Poly::constant(expected_ratio_exact_at(&g, args.k, at, args.budget)?)
                }
            };
            ExpectationReport {
                formula_value: expected_ratio_formula(&g, args.k),
                exact_value: Some(exact),
                mc_estimate: None,
                mc_stddev: None,
                mc_variance: None,
                samples: 0,
                seed: 0,
                k: args.k,
            }
        }
        ExpectMode::Mc => {
            if args.samples < 1 {
                return Err(CliError::input("need at least one sample"));
            }
            let at = assignment.unwrap_or_default();
            expected_ratio_mc(&g, args.k, args.samples, args.seed, &at)?
        }
    };
    Ok(if args.porcelain {
        format!("{}\n", report.porcelain_line())
    } else {
        report.to_string()
    })
}

fn run_moment(args: MomentArgs) -> Result<String, CliError> {
    let formula = y_moment_formula(args.k, args.t)?;
    let brute = if args.brute {
        // Canonical query: sources 2..t+1 paired identically.
        let pairing: Vec<(usize, usize)> = (2..=args.t + 1).map(|i| (i, i)).collect();
        let q = MomentQuery::new(args.k, pairing)?;
        Some(y_moment_bruteforce(&q))
    } else {
        None
    };
    let verdict = brute.as_ref().map(|b| *b == formula);
    let mut out = String::new();
    if args.porcelain {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            args.k,
            args.t,
            formula,
            brute
                .as_ref()
                .map_or("-".to_string(), Rational::to_string),
            verdict.map_or("-".to_string(), |ok| {
                if ok { "MATCH" } else { "MISMATCH" }.to_string()
            }),
        )
        .unwrap();
    } else {
        writeln!(out, "k: {}", args.k).unwrap();
        writeln!(out, "t: {}", args.t).unwrap();
        writeln!(out, "formula: {formula}").unwrap();
        if let Some(b) = &brute {
            writeln!(out, "brute-force: {b}").unwrap();
        }
        if let Some(ok) = verdict {
            writeln!(out, "{}", if ok { "MATCH" } else { "MISMATCH" }).unwrap();
        }
    }
    if verdict == Some(false) {
        print!("{out}");
        return Err(CliError::inconsistency(
            "moment formula and brute force disagree",
        ));
    }
    Ok(out)
}
