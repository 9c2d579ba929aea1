use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use diffpoly::enumeration::{polytope, PolytopeConfig, PolytopeResult};
use diffpoly::optimize::{optimize_over, vertex_set, Method, Objective};
use diffpoly::plot::{hull_svg, projection_csv};
use diffpoly::presets::parse_population;
use diffpoly::{DiffusionGraph, PopulationVector};

mod verify;

#[derive(Parser)]
#[command(
    name = "diffpoly",
    version,
    about = "Diffusion polytopes of pairwise-averaging processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Enumerate,
    Structured,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Enumerate => Method::Enumerate,
            MethodArg::Structured => Method::Structured,
        }
    }
}

#[derive(clap::Args)]
struct Problem {
    /// complete:N, path:N, cycle:N, helium, grid:MxN, edges:N:1-2,2-3 or a JSON file
    #[arg(long)]
    graph: String,
    /// Comma-separated rationals, exp:N, uniform:N, or a JSON file holding a list
    #[arg(long)]
    rho: String,
    /// Longest generating sequence to expand (default C(n,2) + n)
    #[arg(long)]
    depth: Option<usize>,
    /// Block operators over connected subsets (default: on unless the graph is complete)
    #[arg(long, value_enum)]
    blocks: Option<Switch>,
    #[arg(long, value_enum, default_value = "enumerate")]
    method: MethodArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Certified vertices with generating sequences and classification
    Enumerate {
        #[command(flatten)]
        problem: Problem,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Minimum of a linear objective and the recovered share of the rearrangement bound
    Optimize {
        #[command(flatten)]
        problem: Problem,
        /// Positive distinct weights, comma-separated
        #[arg(long)]
        weights: String,
    },
    /// Run built-in verification suites
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: verify::Suite,
        /// Size parameter for pn, counts and decomposition
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Check,
}

impl From<diffpoly::Error> for Failure {
    fn from(e: diffpoly::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_population(spec: &str) -> Result<PopulationVector, Failure> {
    let path = std::path::Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{spec}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{spec}: {e}")));
    }
    Ok(parse_population(spec)?)
}

fn resolve(problem: &Problem) -> Result<(DiffusionGraph, PopulationVector), Failure> {
    let graph = DiffusionGraph::from_spec_or_file(&problem.graph)?;
    let rho = read_population(&problem.rho)?;
    if rho.dim() != graph.n() {
        return Err(Failure::Input(format!(
            "population has {} components but the graph has {} vertices",
            rho.dim(),
            graph.n()
        )));
    }
    Ok((graph, rho))
}

fn custom_config(problem: &Problem, graph: &DiffusionGraph) -> Option<PolytopeConfig> {
    if problem.depth.is_none() && problem.blocks.is_none() {
        return None;
    }
    let mut config = PolytopeConfig::for_graph(graph);
    if let Some(d) = problem.depth {
        config.max_depth = d;
    }
    if let Some(b) = problem.blocks {
        config.use_blocks = b == Switch::On;
    }
    Some(config)
}

fn vertices_for(problem: &Problem, graph: &DiffusionGraph, rho: &PopulationVector) -> Result<PolytopeResult, Failure> {
    let method = Method::from(problem.method);
    match (method, custom_config(problem, graph)) {
        (Method::Enumerate, Some(config)) => Ok(polytope(graph, rho, &config)?),
        (Method::Structured, Some(_)) => Err(Failure::Input(
            "--depth/--blocks apply to the enumerate method only".into(),
        )),
        (m, None) => Ok(vertex_set(graph, rho, m)?),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Enumerate { problem, format } => {
            let (graph, rho) = resolve(&problem)?;
            let result = vertices_for(&problem, &graph, &rho)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&result).expect("serializable") + "\n",
                Format::Csv => projection_csv(&result)?,
                Format::Svg => hull_svg(&result)?,
            };
            emit(&problem.out, &text)?;
            for note in &result.notes {
                eprintln!("note: {note}");
            }
            Ok(())
        }
        Command::Optimize { problem, weights } => {
            let (graph, rho) = resolve(&problem)?;
            let w = Objective::parse(&weights)?;
            if w.dim() != graph.n() {
                return Err(Failure::Input(format!(
                    "{} weights for {} vertices",
                    w.dim(),
                    graph.n()
                )));
            }
            let report = match custom_config(&problem, &graph) {
                None => optimize_over(&graph, &rho, &w, problem.method.into())?,
                Some(_) => {
                    diffpoly::optimize::report_for(&vertices_for(&problem, &graph, &rho)?, &w, problem.method.into())?
                }
            };
            let json = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            let best = report.optimal_vertex();
            let summary = format!(
                "recovered {}% of the rearrangement bound ({}); optimum {} via {}",
                report.recovered_percent, report.completeness, best.point, best.sequence
            );
            if problem.out.is_some() {
                emit(&problem.out, &json)?;
                println!("{summary}");
            } else {
                emit(&None, &json)?;
                eprintln!("{summary}");
            }
            Ok(())
        }
        Command::Verify { suite, n, seed } => {
            if verify::run(suite, n, seed)? {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn configure_threads() {
    if let Some(count) = std::env::var("DIFFPOLY_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(count.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
