use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pln::commands::{self, Session, VerifyOptions};
use pln::formats::{parse_bindings, parse_color, parse_graph, resolve_pair};
use pln::report::Render;
use pln_core::planar::{Color, GraphPlanarAlgebra};

#[derive(Parser)]
#[command(name = "pln", version, about = "Exact verification of the planar algebra of a subgroup subfactor")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized checks and default bindings.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArgs {
    /// Builtin pair `G:H` with G, H among S<n>, A<n>, C<n>, D<n>.
    #[arg(long, conflicts_with = "group_file")]
    pair: Option<String>,
    /// Group file: `group { generators = [...] } subgroup { generators = [...] }`.
    #[arg(long)]
    group_file: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Loop,
    Matrix,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of P_k(⋆_n)^G computed four ways.
    Dims {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        depth: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check that φ is a planar algebra isomorphism, with the supporting suites.
    Verify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        depth: Option<u32>,
        /// Number of random composite tangles.
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump the orbit-sum basis of the loop model or the matrix model.
    Basis {
        #[command(flatten)]
        pair: PairArgs,
        /// `0+`, `0-` or a positive integer.
        #[arg(long)]
        color: String,
        #[arg(long, value_enum, default_value_t = Side::Loop)]
        side: Side,
        /// A general bipartite graph (trivial action) instead of ⋆_n.
        #[arg(long, conflicts_with = "pair")]
        graph_file: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate tangle expressions in both models and compare through φ.
    Eval {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, required_unless_present = "expr_file")]
        expr: Option<String>,
        /// One expression per line, `#` comments.
        #[arg(long, conflicts_with = "expr")]
        expr_file: Option<PathBuf>,
        /// JSON object of `{"name": {"color": "2", "coefficients": ["1", "1/2"]}}`.
        #[arg(long)]
        bindings: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

enum Failure {
    Usage(String),
    Check,
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn session(args: &PairArgs, max_order: usize) -> Result<Session, Failure> {
    let text = args.group_file.as_ref().map(read).transpose()?;
    let pair = resolve_pair(args.pair.as_deref(), text.as_deref(), max_order).map_err(|e| Failure::Usage(e.to_string()))?;
    Session::new(pair).map_err(|e| Failure::Usage(e.to_string()))
}

fn emit<R: Render>(report: &R, output: &OutputArgs) -> Result<(), Failure> {
    let text = match output.format {
        Format::Table => report.table(),
        Format::Csv => report.csv(),
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
    };
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let max_order = commands::max_group_order().map_err(Failure::Usage)?;
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Dims { pair, depth, output } => {
            let s = session(&pair, max_order)?;
            let depth = depth.unwrap_or_else(|| commands::default_depth(s.info.index));
            let report = commands::dims(&s, depth).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(&report, &output)?;
            if !report.passed {
                for r in report.rows.iter().filter(|r| !r.status.passed()) {
                    eprintln!(
                        "k = {}: formula {}, burnside {}, matrix model {}, loop model {}",
                        r.k, r.formula, r.burnside, r.matrix_model, r.loop_model
                    );
                }
                return Err(Failure::Check);
            }
        }
        Command::Verify { pair, depth, samples, output } => {
            let s = session(&pair, max_order)?;
            let depth = depth.unwrap_or_else(|| commands::default_depth(s.info.index));
            let report = commands::verify(&s, &VerifyOptions { depth, seed: cli.seed, samples, max_order });
            emit(&report, &output)?;
            if !report.passed {
                if output.format != Format::Json || output.out.is_some() {
                    eprintln!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
                }
                return Err(Failure::Check);
            }
        }
        Command::Basis { pair, color, side, graph_file, output } => {
            let color: Color = parse_color(&color).ok_or_else(|| Failure::Usage(format!("bad color `{color}`")))?;
            let elements = if let Some(path) = graph_file {
                if side == Side::Matrix {
                    return Err(Failure::Usage("--graph-file only has a loop side".into()));
                }
                let (graph, spin) = parse_graph(&read(&path)?).map_err(|e| Failure::Usage(e.to_string()))?;
                let pa = GraphPlanarAlgebra::new(graph, spin).map_err(|e| Failure::Usage(e.to_string()))?;
                commands::graph_loop_basis(pa, color).map_err(|e| Failure::Usage(e.to_string()))?
            } else {
                let s = session(&pair, max_order)?;
                match side {
                    Side::Loop => commands::loop_basis(s.phi.loops(), color),
                    Side::Matrix => commands::matrix_basis(&s, color),
                }
            };
            let side = match side {
                Side::Loop => "loop",
                Side::Matrix => "matrix",
            };
            let report = pln::report::BasisReport { side: side.into(), color: color.to_string(), dimension: elements.len(), elements };
            emit(&report, &output)?;
        }
        Command::Eval { pair, expr, expr_file, bindings, output } => {
            let s = session(&pair, max_order)?;
            let exprs = match (expr, expr_file) {
                (Some(e), _) => vec![(1, e)],
                (None, Some(path)) => commands::expression_lines(&read(&path)?),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let bound = match bindings {
                Some(path) => parse_bindings(&read(&path)?, |c| s.phi.model_basis(c)).map_err(|e| Failure::Usage(e.to_string()))?,
                None => BTreeMap::new(),
            };
            let report = commands::eval(&s, &exprs, &bound, cli.seed).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(&report, &output)?;
            if !report.passed {
                return Err(Failure::Check);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("pln: {msg}");
            ExitCode::from(2)
        }
    }
}
