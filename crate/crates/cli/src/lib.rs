//! Command-line front end for `sgplan`.

pub mod server;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sgplan::genbench::{gen_graph, gen_problem, run_experiment, write_csv, write_outputs, ExperimentConfig};
use sgplan::oracle::{
    abstract_enumerate, classes_by_robot_count, composite_enumerate, composite_solve, subgraph_classes,
};
use sgplan::partitioner::{auto_partition, partition_stats};
use sgplan::planners::{run_planner, Algorithm, PlannerConfig};
use sgplan::plans::{validate_plan, ConcretePlan, Problem};
use sgplan::roadmap::{count_composite_space, validate_partition, Partition, RoadMap, SubgraphKind};
use sgplan::search::{HeuristicMode, Limits, Outcome, SearchOptions, Strategy};
use sgplan::session::Session;

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failed = 1,
    Limit = 2,
    InputError = 3,
}

#[derive(Parser, Debug)]
#[command(name = "sgplan", version, about = "Multi-robot planning with subgraph abstraction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Plan a problem and print the plan as JSON.
    Plan(PlanArgs),
    /// Partition a map automatically.
    Partition(PartitionArgs),
    /// Generate random maps and problems.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run an experiment sweep from a JSON config.
    Bench(BenchArgs),
    /// Check a map, partition, problem or plan.
    Validate(ValidateArgs),
    /// Brute-force reference computations.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Serve the partition-editor HTTP API.
    Serve(ServeArgs),
}

#[derive(Args, Debug)]
pub struct PlanArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, default_value = "subgraph")]
    pub algorithm: Algorithm,
    #[arg(long, default_value = "bfs")]
    pub search: Strategy,
    #[arg(long, default_value = "none")]
    pub heuristic: HeuristicMode,
    #[arg(long, default_value_t = Limits::default().max_nodes)]
    pub max_nodes: u64,
    #[arg(long, default_value_t = Limits::default().max_time.as_secs())]
    pub max_seconds: u64,
    /// Turn off duplicate detection.
    #[arg(long)]
    pub keep_duplicates: bool,
    /// Write the plan here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the metrics row (CSV with header) here instead of stderr.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Also print the abstract plans to stderr.
    #[arg(long)]
    pub show_abstract: bool,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append a statistics row (CSV) to this file.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// A connected random map with round(degree * vertices) edges.
    Map {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        degree: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random distinct starts and goals on a map.
    Problem {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        robots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Results CSV; summary, failure table and gnuplot script go next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long)]
    pub problem: Option<PathBuf>,
    /// Needs --problem.
    #[arg(long)]
    pub plan: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Closed-form composite state and transition counts.
    Count {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        robots: usize,
        #[arg(long)]
        edges: usize,
    },
    /// Enumerate the composite space of a map, or its abstract space with
    /// --partition.
    Enumerate {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        robots: usize,
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Equivalence classes of one structure, over all subsets of robots.
    Classes {
        #[arg(long)]
        kind: SubgraphKind,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        robots: u32,
    },
    /// Shortest plan by exhaustive search of the composite space.
    Solve {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        problem: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    #[arg(long)]
    pub map: PathBuf,
    /// Starting partition; its subgraphs count as committed.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Rewrite the working partition here after every change.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

/// Parses arguments, runs the command and maps errors to exit code 3.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match run(cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            Status::InputError
        }
    };
    ExitCode::from(status as u8)
}

// Joins the error chain, skipping causes a wrapper already printed.
fn describe(e: &anyhow::Error) -> String {
    let mut msg = String::new();
    for cause in e.chain().map(|c| c.to_string()) {
        if !msg.contains(&cause) {
            if !msg.is_empty() {
                msg.push_str(": ");
            }
            msg.push_str(&cause);
        }
    }
    msg
}

pub fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Plan(a) => plan(a),
        Command::Partition(a) => partition(a),
        Command::Gen(g) => generate(g),
        Command::Bench(a) => bench(a),
        Command::Validate(a) => validate(a),
        Command::Oracle(o) => oracle(o),
        Command::Serve(a) => serve(a),
    }
}

fn load_map(path: &Path) -> Result<RoadMap> {
    RoadMap::load(path).with_context(|| format!("loading map {}", path.display()))
}

fn load_partition(path: &Path, map: &RoadMap) -> Result<Partition> {
    Partition::load(path, map.vertex_count()).with_context(|| format!("loading partition {}", path.display()))
}

fn load_problem(path: &Path) -> Result<Problem> {
    Problem::load(path).with_context(|| format!("loading problem {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                // A closed pipe (`| head`) is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

fn plan(a: PlanArgs) -> Result<Status> {
    let map = load_map(&a.map)?;
    let partition = a.partition.as_deref().map(|p| load_partition(p, &map)).transpose()?;
    let problem = load_problem(&a.problem)?;
    let mut search = SearchOptions::new(a.search).with_limits(Limits {
        max_nodes: a.max_nodes,
        max_time: Duration::from_secs(a.max_seconds),
    });
    search.keep_duplicates = a.keep_duplicates;
    let cfg = PlannerConfig {
        search,
        heuristic: a.heuristic,
    };
    let out = run_planner(a.algorithm, &map, partition.as_ref(), &problem, &cfg)?;
    let instance = a.problem.file_stem().and_then(|s| s.to_str()).unwrap_or("problem");
    let row = out.metrics.row(instance, a.algorithm.name());
    let mut csv = Vec::new();
    write_csv(&mut csv, [&row])?;
    match &a.metrics {
        Some(p) => fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stderr().write_all(&csv)?,
    }
    if a.show_abstract {
        for abs in &out.abstract_plans {
            eprintln!("{abs}");
        }
    }
    if let Some(p) = &out.plan {
        validate_plan(&map, &problem.start(), &problem.goal(), p).context("planner returned an invalid plan")?;
        emit(a.out.as_deref(), &p.to_json())?;
    }
    Ok(status_of(out.metrics.outcome))
}

fn partition(a: PartitionArgs) -> Result<Status> {
    let map = load_map(&a.map)?;
    let p = auto_partition(&map, a.seed);
    let stats = partition_stats(&map, &p)?;
    let id = a.map.file_stem().and_then(|s| s.to_str()).unwrap_or("map");
    match &a.stats {
        Some(path) => {
            let fresh = !path.exists();
            let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
            let mut buf = Vec::new();
            write_csv(&mut buf, [stats.row(id)])?;
            let text = String::from_utf8(buf)?;
            let body = if fresh {
                &text[..]
            } else {
                text.split_once('\n').map_or("", |x| x.1)
            };
            f.write_all(body.as_bytes())?;
        }
        None => eprintln!(
            "{} subgraphs, mean size {:.2}, reduced degree {:.3} (map {:.3})",
            stats.n_subgraphs,
            stats.mean_size,
            stats.reduced_degree,
            map.average_degree()
        ),
    }
    emit(a.out.as_deref(), &p.to_json())?;
    Ok(Status::Ok)
}

fn generate(g: GenCommand) -> Result<Status> {
    match g {
        GenCommand::Map {
            vertices,
            degree,
            seed,
            out,
        } => emit(out.as_deref(), &gen_graph(vertices, degree, seed)?.to_json())?,
        GenCommand::Problem { map, robots, seed, out } => {
            let map = load_map(&map)?;
            emit(out.as_deref(), &gen_problem(&map, robots, seed)?.to_json())?
        }
    }
    Ok(Status::Ok)
}

fn bench(a: BenchArgs) -> Result<Status> {
    let cfg = ExperimentConfig::load(&a.config)?;
    let result = run_experiment(&cfg)?;
    for path in write_outputs(&result, &a.out)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(Status::Ok)
}

fn validate(a: ValidateArgs) -> Result<Status> {
    let map = load_map(&a.map)?;
    let mut clean = true;
    if let Some(p) = &a.partition {
        let violations = validate_partition(&map, &load_partition(p, &map)?);
        println!("{}", serde_json::to_string_pretty(&violations)?);
        clean &= violations.is_empty();
    }
    let problem = a.problem.as_deref().map(load_problem).transpose()?;
    if let Some(pr) = &problem {
        if let Err(e) = pr.validate(&map) {
            println!("problem: {e}");
            clean = false;
        }
    }
    if let Some(path) = &a.plan {
        let Some(pr) = problem.filter(|_| clean) else {
            bail!("--plan needs a valid --problem");
        };
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let plan = ConcretePlan::from_json_str(&text)?;
        match validate_plan(&map, &pr.start(), &pr.goal(), &plan) {
            Ok(()) => println!("plan: valid, {} steps", plan.len()),
            Err(e) => {
                println!("plan: {e}");
                clean = false;
            }
        }
    }
    Ok(if clean { Status::Ok } else { Status::Failed })
}

fn oracle(o: OracleCommand) -> Result<Status> {
    match o {
        OracleCommand::Count {
            vertices,
            robots,
            edges,
        } => {
            let (s, t) = count_composite_space(vertices, robots, edges)?;
            println!("states {s}\ntransitions {t}");
        }
        OracleCommand::Enumerate { map, robots, partition } => {
            let map = load_map(&map)?;
            let (s, t) = match partition {
                Some(p) => abstract_enumerate(&map, &load_partition(&p, &map)?, robots)?,
                None => composite_enumerate(&map, robots)?,
            };
            println!("states {s}\ntransitions {t}");
        }
        OracleCommand::Classes { kind, size, robots } => {
            let c = subgraph_classes(kind, size, robots)?;
            println!("arrangements {}\nclasses {}", c.arrangements.len(), c.class_count);
            for (k, n) in classes_by_robot_count(&c) {
                println!("  {k} robots: {n} classes");
            }
        }
        OracleCommand::Solve { map, problem } => {
            let map = load_map(&map)?;
            let problem = load_problem(&problem)?;
            problem.validate(&map)?;
            match composite_solve(&map, &problem.start(), &problem.goal())? {
                Some(p) => emit(None, &p.to_json())?,
                None => {
                    eprintln!("no plan exists");
                    return Ok(Status::Failed);
                }
            }
        }
    }
    Ok(Status::Ok)
}

fn serve(a: ServeArgs) -> Result<Status> {
    let map = load_map(&a.map)?;
    let mut session = Session::new(map);
    if let Some(p) = &a.partition {
        let part = load_partition(p, session.map())?;
        session = session.with_partition(&part);
    }
    if let Some(s) = &a.save {
        session = session.persist_to(s);
    }
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(("127.0.0.1", a.port)).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, server::router(session)).await?;
        anyhow::Ok(())
    })?;
    Ok(Status::Ok)
}

/// Exit status for a finished search outcome.
pub fn status_of(outcome: Outcome) -> Status {
    match outcome {
        Outcome::Solved => Status::Ok,
        Outcome::Exhausted => Status::Failed,
        Outcome::NodeLimit | Outcome::TimeLimit => Status::Limit,
    }
}
