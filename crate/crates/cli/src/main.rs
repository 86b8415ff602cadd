//! Command-line front end: evaluate objectives, run recursive sparsest cut,
//! compute exact optima, decide admissibility, build generating trees, and
//! run the seeded benchmark battery.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 valid run with a negative
//! verdict (inadmissible objective, no generating tree) plus a
//! machine-readable witness on standard output.

mod verdict;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use admiss_hc_core::bench::{self, BenchConfig};
use admiss_hc_core::formats::{
    objective_from_json, parse_matrix_auto, rational_to_decimal, tree_from_json, tree_to_json,
};
use admiss_hc_core::gentree::{construct_generating_tree, reverse_ultrametric_witness};
use admiss_hc_core::objective::gamma;
use admiss_hc_core::oracle::{brute_force_opt, DEFAULT_ENUM_LIMIT};
use admiss_hc_core::solver::{rsc, CutStrategy, DEFAULT_MAX_EXACT_N, DEFAULT_RESTARTS};
use admiss_hc_core::{newick, ClusterTree, ElementSet, Rat, RatMatrix, RatObjective};

/// Worker cap honored by the benchmark fan-out.
const THREADS_ENV: &str = "ADMISS_HC_THREADS";

#[derive(Parser)]
#[command(
    name = "admiss-hc",
    version,
    about = "Hierarchical clustering with admissible objective functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the objective value of a tree against a matrix
    Eval(EvalArgs),
    /// Cluster a matrix with the recursive sparsest cut algorithm
    Rsc(RscArgs),
    /// Exact optimum over all cluster trees (brute force)
    Opt(OptArgs),
    /// Decide admissibility of an objective specification
    CheckAdmissible(CheckArgs),
    /// Construct a generating tree with weights, or report a violated triple
    GenTree(GenTreeArgs),
    /// Seeded battery: OPT vs RSC with charging diagnostics, CSV output
    Bench(BenchArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Matrix file (CSV with a `labels,...` header, or TSV edge list)
    #[arg(long)]
    matrix: PathBuf,
    /// Tree file: Newick (`((a,b),c);`) or the JSON node-list form
    #[arg(long)]
    tree: PathBuf,
    /// Objective spec: inline JSON or a path to a JSON file
    #[arg(long)]
    objective: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Decimal digits echoed next to the exact value (presentation only)
    #[arg(long, default_value_t = 6)]
    digits: usize,
}

#[derive(Args)]
struct RscArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Cut subroutine
    #[arg(long, value_enum, default_value_t = CutKind::Exact)]
    cut: CutKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    /// Size limit for the exhaustive cut search
    #[arg(long, default_value_t = DEFAULT_MAX_EXACT_N)]
    max_exact_n: usize,
    /// Objective spec to evaluate the resulting tree under (optional)
    #[arg(long)]
    objective: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    digits: Option<usize>,
}

#[derive(Args)]
struct OptArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    objective: String,
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    enum_limit: usize,
    /// Also print every minimizer as a Newick line
    #[arg(long)]
    dump_minimizers: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    digits: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    objective: String,
    /// Bound for the violation scans backing inconclusive cases
    #[arg(long, default_value_t = 50)]
    bound: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct GenTreeArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// `newick` (default) or `json` for the certificate
    #[arg(long, value_enum, default_value_t = Format::Newick)]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Total instances: first half generating, second half fully random
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    enum_limit: usize,
    #[arg(long, value_enum, default_value_t = CutKind::Exact)]
    cut: CutKind,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_EXACT_N)]
    max_exact_n: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Newick,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CutKind {
    Exact,
    Local,
}

/// A run that parsed and executed; `refuted` runs exit with code 2.
struct Outcome {
    refuted: bool,
}

#[derive(Debug)]
struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome { refuted: false }) => ExitCode::SUCCESS,
        Ok(Outcome { refuted: true }) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Rsc(args) => cmd_rsc(args),
        Command::Opt(args) => cmd_opt(args),
        Command::CheckAdmissible(args) => cmd_check(args),
        Command::GenTree(args) => cmd_gen_tree(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn load_matrix(path: &PathBuf) -> Result<RatMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_matrix_auto(&text)?)
}

fn load_objective(spec: &str) -> Result<RatObjective, CliError> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| CliError(format!("cannot read objective file {spec}: {e}")))?
    };
    Ok(objective_from_json(&text)?)
}

fn load_tree(path: &PathBuf, elements: &ElementSet) -> Result<ClusterTree, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let (tree, tree_elements, _) = tree_from_json(&text)?;
        if tree_elements != *elements {
            return Err(CliError(
                "tree labels do not match the matrix elements".into(),
            ));
        }
        Ok(tree)
    } else {
        let (tree, _) = newick::parse(text.trim())?.to_cluster_tree(elements)?;
        Ok(tree)
    }
}

/// Exact value plus optional decimal echo.
fn echo(value: &Rat, digits: Option<usize>) -> String {
    match digits {
        Some(k) => format!("{value} ({})", rational_to_decimal(value, k)),
        None => value.to_string(),
    }
}

fn cmd_eval(args: EvalArgs) -> Result<Outcome, CliError> {
    let matrix = load_matrix(&args.matrix)?;
    let tree = load_tree(&args.tree, matrix.elements())?;
    let spec = load_objective(&args.objective)?;
    let value = gamma(&tree, &matrix, &spec)?;
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "gamma": value.to_string(),
                "decimal": rational_to_decimal(&value, args.digits),
            }))
            .expect("serializable")
        ),
        _ => println!("gamma = {}", echo(&value, Some(args.digits))),
    }
    Ok(Outcome { refuted: false })
}

fn cut_strategy(cut: CutKind, seed: u64, restarts: usize, max_exact_n: usize) -> CutStrategy {
    match cut {
        CutKind::Exact => CutStrategy::Exact { max_n: max_exact_n },
        CutKind::Local => CutStrategy::LocalSearch { seed, restarts },
    }
}

fn cmd_rsc(args: RscArgs) -> Result<Outcome, CliError> {
    let matrix = load_matrix(&args.matrix)?;
    let strategy = cut_strategy(args.cut, args.seed, args.restarts, args.max_exact_n);
    let trace = rsc(&matrix, &strategy)?;
    let tree_text = newick::write(&trace.tree, matrix.elements())?;
    let spec = args.objective.as_deref().map(load_objective).transpose()?;
    let value = spec
        .as_ref()
        .map(|s| gamma(&trace.tree, &matrix, s))
        .transpose()?;
    let split_json = |s: &admiss_hc_core::solver::SplitRecord<Rat>| {
        json!({
            "cluster": s.cluster,
            "side": s.side,
            "min_side": s.min_side,
            "density": s.density.to_string(),
        })
    };
    match args.format {
        Format::Json => {
            let doc = json!({
                "tree": tree_text,
                "splits": trace.splits.iter().map(split_json).collect::<Vec<_>>(),
                "gamma": value.as_ref().map(Rat::to_string),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        _ => {
            println!("{tree_text}");
            for s in &trace.splits {
                println!("{}", split_json(s));
            }
            if let Some(v) = &value {
                println!("gamma = {}", echo(v, args.digits));
            }
        }
    }
    Ok(Outcome { refuted: false })
}

fn cmd_opt(args: OptArgs) -> Result<Outcome, CliError> {
    let matrix = load_matrix(&args.matrix)?;
    let spec = load_objective(&args.objective)?;
    let report = brute_force_opt(&matrix, &spec, args.enum_limit)?;
    let minimizers: Vec<String> = if args.dump_minimizers {
        report
            .minimizers
            .iter()
            .map(|t| newick::write(t, matrix.elements()))
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };
    match args.format {
        Format::Json => {
            let doc = json!({
                "opt": report.opt_value.to_string(),
                "decimal": args.digits.map(|k| rational_to_decimal(&report.opt_value, k)),
                "minimizer_count": report.minimizers.len(),
                "minimizers_truncated": report.truncated,
                "tree_count": report.tree_count.to_string(),
                "minimizers": minimizers,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        _ => {
            println!("opt = {}", echo(&report.opt_value, args.digits));
            println!(
                "minimizers = {}{} of {} trees",
                report.minimizers.len(),
                if report.truncated { "+ (truncated)" } else { "" },
                report.tree_count
            );
            for line in &minimizers {
                println!("{line}");
            }
        }
    }
    Ok(Outcome { refuted: false })
}

fn cmd_check(args: CheckArgs) -> Result<Outcome, CliError> {
    let spec = load_objective(&args.objective)?;
    let verdict = verdict::check(&spec, args.bound);
    match args.format {
        Format::Json => {
            let doc = json!({
                "admissible": verdict.admissible,
                "conclusive": verdict.conclusive,
                "reason": verdict.reason,
                "witness": verdict.witness,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        _ => {
            let headline = match (verdict.admissible, verdict.conclusive) {
                (true, true) => "admissible",
                (true, false) => "no obstruction found",
                (false, true) => "not admissible",
                (false, false) => "not established",
            };
            println!("{headline}: {}", verdict.reason);
            if let Some(w) = &verdict.witness {
                println!("witness: {w}");
            }
        }
    }
    Ok(Outcome {
        refuted: !verdict.admissible,
    })
}

fn cmd_gen_tree(args: GenTreeArgs) -> Result<Outcome, CliError> {
    let matrix = load_matrix(&args.matrix)?;
    if matrix.len() < 2 {
        return Err(CliError("gen-tree needs at least two elements".into()));
    }
    match construct_generating_tree(&matrix) {
        Some(cert) => {
            match args.format {
                Format::Json => {
                    println!(
                        "{}",
                        tree_to_json(&cert.tree, matrix.elements(), Some(&cert.weights))
                    );
                }
                _ => {
                    println!(
                        "{}",
                        newick::write_annotated(&cert.tree, matrix.elements(), &cert.weights)?
                    );
                }
            }
            Ok(Outcome { refuted: false })
        }
        None => {
            let (x, y, z) =
                reverse_ultrametric_witness(&matrix).expect("no tree implies a violated triple");
            let labels = matrix.elements();
            let doc = json!({
                "generating_tree": false,
                "violated_triple": {
                    "x": labels.label(x),
                    "y": labels.label(y),
                    "z": labels.label(z),
                    "m_xz": matrix.get(x, z).to_string(),
                    "m_xy": matrix.get(x, y).to_string(),
                    "m_yz": matrix.get(y, z).to_string(),
                    "condition": "M(x,z) >= min(M(x,y), M(y,z))",
                },
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            Ok(Outcome { refuted: true })
        }
    }
}

fn cmd_bench(args: BenchArgs) -> Result<Outcome, CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(text) => text
            .parse::<usize>()
            .map_err(|_| CliError(format!("{THREADS_ENV} must be a positive integer")))?
            .max(1),
        Err(_) => 1,
    };
    let config = BenchConfig {
        seed: args.seed,
        instances: args.instances,
        n_min: args.n_min,
        n_max: args.n_max,
        enum_limit: args.enum_limit,
        cut: cut_strategy(args.cut, args.seed, args.restarts, args.max_exact_n),
        threads,
        ..BenchConfig::default()
    };
    let report = bench::run(&config)?;
    print!("{}", bench::to_csv(&report));
    Ok(Outcome { refuted: false })
}
