//! Command-line harness for the counting protocols: exact counts,
//! single protocol runs, baselines, config-file experiments, and
//! budget-ledger audits over edge-list files.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fgrdp::baseline::{run_kstar_uniform, run_triangle_uniform};
use fgrdp::experiment::{DTildeSpec, ExperimentConfig, TaskSpec};
use fgrdp::graph::{exact_kstar_count, exact_triangle_count, load_edge_list, LoadedGraph};
use fgrdp::kstar::{run_kstar, KStarConfig};
use fgrdp::privacy::{assign_edge_levels, ledger_check, BudgetLedger, PrivacyPolicy};
use fgrdp::triangle::{run_triangle, TriangleConfig};
use fgrdp::Graph;

#[derive(Parser)]
#[command(
    name = "fgrdp",
    version,
    about = "Subgraph counting under fine-grained relationship privacy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact (non-private) count for a task.
    CountExact {
        /// Edge-list file: `u v` per line, `#` comments allowed.
        #[arg(long)]
        input: PathBuf,
        /// `triangle` or `kstar:<k>`.
        #[arg(long, default_value = "triangle")]
        task: String,
    },
    /// Run the fine-grained k-star protocol once.
    RunKstar {
        #[command(flatten)]
        common: CommonArgs,
        /// Star arity k.
        #[arg(long, default_value_t = 2)]
        k: u64,
    },
    /// Run the fine-grained triangle protocol once.
    RunTriangle {
        #[command(flatten)]
        common: CommonArgs,
        /// Budget share spent on the round-one upload.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Run a protocol with every edge at one uniform budget.
    RunBaseline {
        #[command(flatten)]
        common: CommonArgs,
        /// `triangle` or `kstar:<k>`.
        #[arg(long)]
        task: String,
        /// The single budget applied to every edge.
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Run a config-file experiment and emit CSV.
    Experiment {
        /// Flat key=value config file.
        config: PathBuf,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a protocol, audit its per-edge budget spend, and report.
    CheckLedger {
        #[command(flatten)]
        common: CommonArgs,
        /// `triangle` or `kstar:<k>`.
        #[arg(long)]
        task: String,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Write the per-edge charge table here as CSV.
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Edge-list file: `u v` per line, `#` comments allowed.
    #[arg(long)]
    input: PathBuf,
    /// Per-level budgets, strictest first, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0])]
    budgets: Vec<f64>,
    /// Probability of each level when assigning edges, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.8])]
    fractions: Vec<f64>,
    /// Seed for the random edge-level assignment.
    #[arg(long, default_value_t = 7)]
    levels_seed: u64,
    /// Protocol noise seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Degree cap: `exact` for the true maximum degree, or `fixed:<n>`.
    #[arg(long, default_value = "exact")]
    d_tilde: String,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::CountExact { input, task } => count_exact(&input, &task),
        Command::RunKstar { common, k } => run_kstar_cmd(&common, k),
        Command::RunTriangle { common, alpha } => run_triangle_cmd(&common, alpha),
        Command::RunBaseline {
            common,
            task,
            epsilon,
            alpha,
        } => run_baseline_cmd(&common, &task, epsilon, alpha),
        Command::Experiment { config, out } => experiment_cmd(&config, out.as_deref()),
        Command::CheckLedger {
            common,
            task,
            alpha,
            csv_out,
        } => check_ledger_cmd(&common, &task, alpha, csv_out.as_deref()),
    }
}

fn load(input: &std::path::Path) -> Result<LoadedGraph> {
    let file = File::open(input).with_context(|| format!("opening {}", input.display()))?;
    let loaded = load_edge_list(BufReader::new(file))
        .with_context(|| format!("parsing {}", input.display()))?;
    eprintln!(
        "loaded {}: {} nodes, {} edges",
        input.display(),
        loaded.meta.node_count,
        loaded.meta.edge_count
    );
    if loaded.meta.self_loops_dropped > 0 || loaded.meta.duplicates_dropped > 0 {
        eprintln!(
            "dropped {} self-loops and {} duplicate edges",
            loaded.meta.self_loops_dropped, loaded.meta.duplicates_dropped
        );
    }
    Ok(loaded)
}

fn setup(common: &CommonArgs) -> Result<(Graph, PrivacyPolicy, usize)> {
    let graph = load(&common.input)?.graph;
    let policy = assign_edge_levels(
        &graph,
        &common.budgets,
        &common.fractions,
        common.levels_seed,
    )?;
    let d_tilde = match DTildeSpec::parse(&common.d_tilde)? {
        DTildeSpec::MaxDegree => graph.max_degree(),
        DTildeSpec::Fixed(v) => v,
    };
    Ok((graph, policy, d_tilde))
}

fn print_estimate(truth: f64, estimate: f64) {
    println!("true count: {truth}");
    println!("estimate: {estimate}");
    if truth != 0.0 {
        println!("relative error: {}", (estimate - truth).abs() / truth);
    }
}

fn count_exact(input: &std::path::Path, task: &str) -> Result<()> {
    let task = TaskSpec::parse(task)?;
    let graph = load(input)?.graph;
    match task {
        TaskSpec::Triangle => println!("triangles: {}", exact_triangle_count(&graph)),
        TaskSpec::KStar { k } => println!("{k}-stars: {}", exact_kstar_count(&graph, k)?),
    }
    Ok(())
}

fn run_kstar_cmd(common: &CommonArgs, k: u64) -> Result<()> {
    let (graph, policy, d_tilde) = setup(common)?;
    let out = run_kstar(&graph, &policy, &KStarConfig::new(k, d_tilde, common.seed))?;
    print_estimate(exact_kstar_count(&graph, k)? as f64, out.estimate);
    Ok(())
}

fn run_triangle_cmd(common: &CommonArgs, alpha: f64) -> Result<()> {
    let (graph, policy, d_tilde) = setup(common)?;
    let out = run_triangle(
        &graph,
        &policy,
        &TriangleConfig::new(alpha, d_tilde, common.seed),
    )?;
    print_estimate(exact_triangle_count(&graph) as f64, out.estimate);
    Ok(())
}

fn run_baseline_cmd(common: &CommonArgs, task: &str, epsilon: f64, alpha: f64) -> Result<()> {
    let task = TaskSpec::parse(task)?;
    let graph = load(&common.input)?.graph;
    let d_tilde = match DTildeSpec::parse(&common.d_tilde)? {
        DTildeSpec::MaxDegree => graph.max_degree(),
        DTildeSpec::Fixed(v) => v,
    };
    match task {
        TaskSpec::Triangle => {
            let cfg = TriangleConfig::new(alpha, d_tilde, common.seed);
            let out = run_triangle_uniform(&graph, epsilon, &cfg)?;
            print_estimate(exact_triangle_count(&graph) as f64, out.estimate);
        }
        TaskSpec::KStar { k } => {
            let cfg = KStarConfig::new(k, d_tilde, common.seed);
            let out = run_kstar_uniform(&graph, epsilon, &cfg)?;
            print_estimate(exact_kstar_count(&graph, k)? as f64, out.estimate);
        }
    }
    Ok(())
}

fn experiment_cmd(config: &std::path::Path, out: Option<&std::path::Path>) -> Result<()> {
    let text = std::fs::read_to_string(config)
        .with_context(|| format!("reading {}", config.display()))?;
    let cfg = ExperimentConfig::parse(&text)?;
    let result = fgrdp::experiment::run_experiment(&cfg)?;
    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
    match out {
        Some(path) => {
            let mut w = BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            w.write_all(result.csv.as_bytes())?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", result.csv),
    }
    Ok(())
}

fn check_ledger_cmd(
    common: &CommonArgs,
    task: &str,
    alpha: f64,
    csv_out: Option<&std::path::Path>,
) -> Result<()> {
    let task = TaskSpec::parse(task)?;
    let (graph, policy, d_tilde) = setup(common)?;
    let ledger: BudgetLedger = match task {
        TaskSpec::Triangle => {
            let cfg = TriangleConfig::new(alpha, d_tilde, common.seed);
            run_triangle(&graph, &policy, &cfg)?.ledger.expect("ledger recording is on")
        }
        TaskSpec::KStar { k } => {
            let cfg = KStarConfig::new(k, d_tilde, common.seed);
            run_kstar(&graph, &policy, &cfg)?.ledger.expect("ledger recording is on")
        }
    };
    let report = ledger_check(&ledger, &policy)?;
    println!("edges checked: {}", report.edges_checked);
    println!("tight edges: {}", report.tight_edges);
    println!("violations: {}", report.violations.len());
    if let Some(path) = csv_out {
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        ledger.write_csv(&mut w)?;
        eprintln!("wrote {}", path.display());
    }
    for violation in &report.violations {
        eprintln!(
            "edge {}-{} at level {} consumed {} of allowed {}",
            violation.edge.0, violation.edge.1, violation.level, violation.consumed, violation.allowed
        );
    }
    if !report.is_ok() {
        bail!("{} budget violations", report.violations.len());
    }
    Ok(())
}
