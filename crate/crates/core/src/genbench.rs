//! Random instances and the experiment harness.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io;
use std::path::Path;
use std::time::Duration;

use rand::seq::{index::sample, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partitioner::auto_partition;
use crate::planners::{run_planner, Algorithm, PlannerConfig};
use crate::plans::{Problem, RobotId, RobotTask};
use crate::roadmap::{Edge, RoadMap};
use crate::search::{HeuristicMode, Limits, MetricsRow, Outcome, SearchOptions, Strategy};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("{edges} edges cannot connect {vertices} vertices")]
    TooFewEdges { vertices: usize, edges: usize },
    #[error("{edges} edges exceed the {max} possible on {vertices} vertices")]
    TooManyEdges { vertices: usize, edges: usize, max: usize },
    #[error("cannot place {robots} robots on {vertices} vertices")]
    TooManyRobots { robots: usize, vertices: usize },
}

/// Connected undirected graph with `round(degree * n)` edges: a random
/// spanning tree grown vertex by vertex, then random extra edges between
/// non-adjacent pairs.
pub fn gen_graph(n: usize, degree: f64, seed: u64) -> Result<RoadMap, GenError> {
    let m = (degree * n as f64).round() as usize;
    let max = n * n.saturating_sub(1) / 2;
    if m + 1 < n {
        return Err(GenError::TooFewEdges { vertices: n, edges: m });
    }
    if m > max {
        return Err(GenError::TooManyEdges {
            vertices: n,
            edges: m,
            max,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacent = vec![vec![false; n]; n];
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(m);
    for (v, row) in adjacent.iter_mut().enumerate().skip(1) {
        let u = rng.random_range(0..v);
        row[u] = true;
        pairs.push((u, v));
    }
    let mut free: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !adjacent[v][u])
        .collect();
    free.shuffle(&mut rng);
    pairs.extend(free.into_iter().take(m - pairs.len()));
    pairs.sort_unstable();
    let map = RoadMap::new(
        n,
        pairs.into_iter().map(|(from, to)| Edge {
            from,
            to,
            directed: false,
        }),
    )
    .expect("generated edges are simple");
    Ok(map)
}

/// `k` robots with distinct random starts and distinct random goals.
pub fn gen_problem(map: &RoadMap, k: usize, seed: u64) -> Result<Problem, GenError> {
    let n = map.vertex_count();
    if k > n {
        return Err(GenError::TooManyRobots { robots: k, vertices: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts = sample(&mut rng, n, k).into_vec();
    let goals = sample(&mut rng, n, k).into_vec();
    Ok(Problem::new(
        starts
            .into_iter()
            .zip(goals)
            .enumerate()
            .map(|(i, (start, goal))| RobotTask {
                id: RobotId(i as u32 + 1),
                start,
                goal,
            })
            .collect(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Vertices,
    Degree,
    Robots,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

/// Experiment description, read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub vertices: usize,
    pub degree: f64,
    pub robots: usize,
    pub sweep: Sweep,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub strategy: Strategy,
    #[serde(default)]
    pub heuristic: HeuristicMode,
    #[serde(default = "default_max_nodes")]
    pub max_nodes: u64,
    #[serde(default = "default_max_time_ms")]
    pub max_time_ms: u64,
    /// Record wall-clock times. Off gives byte-identical reruns.
    #[serde(default = "default_timing")]
    pub timing: bool,
}

fn default_trials() -> usize {
    25
}

fn default_max_nodes() -> u64 {
    Limits::default().max_nodes
}

fn default_max_time_ms() -> u64 {
    Limits::default().max_time.as_millis() as u64
}

fn default_timing() -> bool {
    true
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("bad experiment config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("bad experiment config: {0}")]
    Invalid(String),
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    fn check(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.sweep.values.is_empty() {
            return bad("sweep has no values".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms listed".into());
        }
        if self.sweep.variable != SweepVariable::Degree {
            if let Some(v) = self.sweep.values.iter().find(|v| v.fract() != 0.0 || **v < 0.0) {
                return bad(format!(
                    "{:?} values must be whole numbers, got {v}",
                    self.sweep.variable
                ));
            }
        }
        for p in self.points() {
            if p.robots > p.vertices {
                return bad(format!("{} robots on {} vertices", p.robots, p.vertices));
            }
        }
        Ok(())
    }

    /// The sweep points in listed order.
    pub fn points(&self) -> Vec<Point> {
        self.sweep
            .values
            .iter()
            .map(|&x| {
                let mut p = Point {
                    value: x,
                    vertices: self.vertices,
                    degree: self.degree,
                    robots: self.robots,
                };
                match self.sweep.variable {
                    SweepVariable::Vertices => p.vertices = x as usize,
                    SweepVariable::Degree => p.degree = x,
                    SweepVariable::Robots => p.robots = x as usize,
                }
                p
            })
            .collect()
    }

    pub fn planner_config(&self) -> PlannerConfig {
        PlannerConfig {
            search: SearchOptions::new(self.strategy).with_limits(Limits {
                max_nodes: self.max_nodes,
                max_time: Duration::from_millis(self.max_time_ms),
            }),
            heuristic: self.heuristic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub value: f64,
    pub vertices: usize,
    pub degree: f64,
    pub robots: usize,
}

/// Mixes a run seed with coordinates into an independent stream seed.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    let mut x = seed;
    for &p in parts {
        x ^= p
            .wrapping_add(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(x << 6)
            .wrapping_add(x >> 2);
        // splitmix64 finaliser
        x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^= x >> 31;
    }
    x
}

/// One generated instance.
pub struct Instance {
    pub id: String,
    pub point: usize,
    pub map: RoadMap,
    pub partition: crate::roadmap::Partition,
    pub problem: Problem,
}

pub fn make_instance(cfg: &ExperimentConfig, point: usize, trial: usize) -> Result<Instance, GenError> {
    let p = cfg.points()[point];
    let s = |key: u64, stream: u64| derive_seed(cfg.seed, &[key, trial as u64, stream]);
    // A robot sweep reuses each trial's graph across all robot counts.
    let graph_key = match cfg.sweep.variable {
        SweepVariable::Robots => u64::MAX,
        _ => point as u64,
    };
    let map = gen_graph(p.vertices, p.degree, s(graph_key, 0))?;
    let problem = gen_problem(&map, p.robots, s(point as u64, 1))?;
    let partition = auto_partition(&map, s(graph_key, 2));
    Ok(Instance {
        id: format!("{}-p{point}-t{trial}", cfg.name),
        point,
        map,
        partition,
        problem,
    })
}

#[derive(Clone, Debug)]
pub struct Run {
    pub point: usize,
    pub algorithm: Algorithm,
    pub outcome: Outcome,
    pub row: MetricsRow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub point: f64,
    pub algorithm: String,
    pub runs: usize,
    pub solved: usize,
    pub goal_depth_q1: Option<f64>,
    pub goal_depth_median: Option<f64>,
    pub goal_depth_q3: Option<f64>,
    pub branching_q1: Option<f64>,
    pub branching_median: Option<f64>,
    pub branching_q3: Option<f64>,
    /// Unsolved runs count as infinite; `None` when the median is infinite.
    pub nodes_expanded_median: Option<f64>,
    pub wall_ms_median: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRow {
    pub point: f64,
    pub trials: usize,
    pub prio_failures: usize,
    pub prio_subgraph_failures: usize,
    /// Instances solved by naive prioritised but not by prioritised subgraph.
    pub subgraph_only_failures: usize,
    /// Instances where naive prioritised solved but complete naive search
    /// did not. Nonzero only when limits cut the complete search short.
    pub incomplete_naive: usize,
}

pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub runs: Vec<Run>,
}

/// Runs every (instance, algorithm) cell in parallel. Output order is by
/// point, trial, then listed algorithm, independent of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, GenError> {
    let points = cfg.points().len();
    let cells: Vec<(usize, usize)> = (0..points).flat_map(|p| (0..cfg.trials).map(move |t| (p, t))).collect();
    let planner = cfg.planner_config();
    let per_cell: Vec<Result<Vec<Run>, GenError>> = cells
        .par_iter()
        .map(|&(p, t)| {
            let inst = make_instance(cfg, p, t)?;
            Ok(cfg
                .algorithms
                .iter()
                .map(|&alg| run_cell(&inst, alg, &planner, cfg.timing))
                .collect())
        })
        .collect();
    let mut runs = Vec::new();
    for c in per_cell {
        runs.extend(c?);
    }
    Ok(ExperimentResult {
        config: cfg.clone(),
        runs,
    })
}

fn run_cell(inst: &Instance, alg: Algorithm, planner: &PlannerConfig, timing: bool) -> Run {
    let out = run_planner(alg, &inst.map, Some(&inst.partition), &inst.problem, planner)
        .expect("generated instances are well formed");
    let mut row = out.metrics.row(&inst.id, alg.name());
    if !timing {
        row.wall_ms = None;
    }
    Run {
        point: inst.point,
        algorithm: alg,
        outcome: out.metrics.outcome,
        row,
    }
}

/// Quartiles by linear interpolation; infinite entries sort last.
pub fn quartiles(values: &[f64]) -> Option<(f64, f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let at = |q: f64| {
        let pos = q * (v.len() - 1) as f64;
        let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
        if v[hi].is_infinite() {
            v[hi]
        } else {
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        }
    };
    Some((at(0.25), at(0.5), at(0.75)))
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl ExperimentResult {
    pub fn rows(&self) -> impl Iterator<Item = &MetricsRow> {
        self.runs.iter().map(|r| &r.row)
    }

    fn cell(&self, point: usize, alg: Algorithm) -> impl Iterator<Item = &Run> {
        self.runs.iter().filter(move |r| r.point == point && r.algorithm == alg)
    }

    pub fn summary(&self) -> Vec<SummaryRow> {
        let points = self.config.points();
        let mut out = Vec::new();
        for (pi, p) in points.iter().enumerate() {
            for &alg in &self.config.algorithms {
                let runs: Vec<&Run> = self.cell(pi, alg).collect();
                let solved: Vec<&&Run> = runs.iter().filter(|r| r.outcome == Outcome::Solved).collect();
                let depth: Vec<f64> = solved
                    .iter()
                    .filter_map(|r| r.row.goal_depth)
                    .map(|d| d as f64)
                    .collect();
                let branching: Vec<f64> = solved
                    .iter()
                    .map(|r| r.row.branching_factor.parse::<f64>().unwrap_or(0.0))
                    .collect();
                let inf_unless_solved = |r: &&Run, x: f64| if r.outcome == Outcome::Solved { x } else { f64::INFINITY };
                let expanded: Vec<f64> = runs
                    .iter()
                    .map(|r| inf_unless_solved(r, r.row.nodes_expanded as f64))
                    .collect();
                let wall: Vec<f64> = runs
                    .iter()
                    .filter_map(|r| {
                        let ms = r.row.wall_ms.as_ref()?.parse::<f64>().ok()?;
                        Some(inf_unless_solved(r, ms))
                    })
                    .collect();
                let (d, b) = (quartiles(&depth), quartiles(&branching));
                out.push(SummaryRow {
                    point: p.value,
                    algorithm: alg.name().to_string(),
                    runs: runs.len(),
                    solved: solved.len(),
                    goal_depth_q1: d.map(|q| q.0),
                    goal_depth_median: d.map(|q| q.1),
                    goal_depth_q3: d.map(|q| q.2),
                    branching_q1: b.map(|q| q.0),
                    branching_median: b.map(|q| q.1),
                    branching_q3: b.map(|q| q.2),
                    nodes_expanded_median: quartiles(&expanded).and_then(|q| finite(q.1)),
                    wall_ms_median: quartiles(&wall).and_then(|q| finite(q.1)),
                });
            }
        }
        out
    }

    /// Whether `alg` solved the instance at index `trial` of `point`.
    fn solved(&self, point: usize, alg: Algorithm) -> Vec<bool> {
        self.cell(point, alg).map(|r| r.outcome == Outcome::Solved).collect()
    }

    pub fn failures(&self) -> Vec<FailureRow> {
        let algs: BTreeSet<Algorithm> = self.config.algorithms.iter().copied().collect();
        let pick = |pi: usize, a: Algorithm| algs.contains(&a).then(|| self.solved(pi, a));
        self.config
            .points()
            .iter()
            .enumerate()
            .map(|(pi, p)| {
                let prio = pick(pi, Algorithm::Prio);
                let sub = pick(pi, Algorithm::PrioSubgraph);
                let naive = pick(pi, Algorithm::Naive);
                let fails = |v: &Option<Vec<bool>>| v.as_ref().map_or(0, |v| v.iter().filter(|s| !**s).count());
                let both = |a: &Option<Vec<bool>>, b: &Option<Vec<bool>>| match (a, b) {
                    (Some(a), Some(b)) => a.iter().zip(b).filter(|(x, y)| **x && !**y).count(),
                    _ => 0,
                };
                FailureRow {
                    point: p.value,
                    trials: self.config.trials,
                    prio_failures: fails(&prio),
                    prio_subgraph_failures: fails(&sub),
                    subgraph_only_failures: both(&prio, &sub),
                    incomplete_naive: both(&prio, &naive),
                }
            })
            .collect()
    }

    pub fn write_rows<W: io::Write>(&self, w: W) -> csv::Result<()> {
        write_csv(w, self.rows())
    }

    /// Gnuplot script drawing medians from the summary CSV against the
    /// sweep variable.
    pub fn gnuplot(&self, summary_file: &str) -> String {
        let var = match self.config.sweep.variable {
            SweepVariable::Vertices => "vertices",
            SweepVariable::Degree => "degree",
            SweepVariable::Robots => "robots",
        };
        let mut s = String::new();
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set key left top");
        let _ = writeln!(s, "set xlabel '{var}'");
        let _ = writeln!(s, "set terminal pngcairo size 1200,400");
        let _ = writeln!(s, "set output '{}.png'", self.config.name);
        let _ = writeln!(s, "set multiplot layout 1,3");
        for (col, label) in [
            (12, "median wall ms"),
            (9, "median branching factor"),
            (6, "median goal depth"),
        ] {
            let _ = writeln!(s, "set ylabel '{label}'");
            let plots: Vec<String> = self
                .config
                .algorithms
                .iter()
                .map(|a| {
                    format!(
                        "'{summary_file}' using 1:(strcol(2) eq '{n}' ? ${col} : NaN) with linespoints title '{n}'",
                        n = a.name()
                    )
                })
                .collect();
            let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
        }
        let _ = writeln!(s, "unset multiplot");
        s
    }
}

pub fn write_csv<W: io::Write, T: Serialize>(w: W, rows: impl IntoIterator<Item = T>) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// Writes rows, summary, failure table and gnuplot script next to `out`.
/// Returns the paths written.
pub fn write_outputs(result: &ExperimentResult, out: &Path) -> io::Result<Vec<std::path::PathBuf>> {
    let stem = out
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("results")
        .to_string();
    let dir = out.parent().unwrap_or(Path::new("."));
    let summary = dir.join(format!("{stem}.summary.csv"));
    let failures = dir.join(format!("{stem}.failures.csv"));
    let plot = dir.join(format!("{stem}.gp"));
    let to_io = |e: csv::Error| io::Error::other(e.to_string());
    result.write_rows(std::fs::File::create(out)?).map_err(to_io)?;
    write_csv(std::fs::File::create(&summary)?, result.summary()).map_err(to_io)?;
    write_csv(std::fs::File::create(&failures)?, result.failures()).map_err(to_io)?;
    let summary_name = summary.file_name().unwrap().to_string_lossy().to_string();
    std::fs::write(&plot, result.gnuplot(&summary_name))?;
    Ok(vec![out.to_path_buf(), summary, failures, plot])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn connected(map: &RoadMap) -> bool {
        map.weak_components().len() == 1
    }

    #[test]
    fn tree_when_degree_is_low() {
        let g = gen_graph(10, 0.9, 4).unwrap();
        assert_eq!(g.edge_count(), 9);
        assert!(connected(&g));
    }

    #[test]
    fn exact_edge_count() {
        let g = gen_graph(30, 3.0, 11).unwrap();
        assert_eq!(g.edge_count(), 90);
        assert!(connected(&g));
        assert_eq!(g.to_json(), gen_graph(30, 3.0, 11).unwrap().to_json());
    }

    #[test]
    fn infeasible_counts() {
        assert!(matches!(gen_graph(4, 2.0, 0), Err(GenError::TooManyEdges { .. })));
        assert!(matches!(gen_graph(10, 0.5, 0), Err(GenError::TooFewEdges { .. })));
    }

    #[test]
    fn problems_are_injective_and_reproducible() {
        let g = gen_graph(12, 1.5, 2).unwrap();
        let p = gen_problem(&g, 12, 7).unwrap();
        p.validate(&g).unwrap();
        assert_eq!(p, gen_problem(&g, 12, 7).unwrap());
        assert!(gen_problem(&g, 0, 1).unwrap().robots.is_empty());
        assert!(gen_problem(&g, 13, 1).is_err());
    }

    #[test]
    fn quartile_interpolation() {
        assert_eq!(quartiles(&[1.0, 2.0, 3.0, 4.0, 5.0]), Some((2.0, 3.0, 4.0)));
        let (_, m, _) = quartiles(&[1.0, f64::INFINITY, f64::INFINITY]).unwrap();
        assert!(m.is_infinite());
        assert_eq!(quartiles(&[]), None);
    }

    #[test]
    fn config_parsing() {
        let text = r#"{"name":"t","seed":1,"vertices":8,"degree":1.5,"robots":2,
            "sweep":{"variable":"robots","values":[1,2]},"trials":2,
            "algorithms":["naive","prio"],"timing":false}"#;
        let cfg = ExperimentConfig::from_json_str(text).unwrap();
        assert_eq!(cfg.points().len(), 2);
        assert_eq!(cfg.points()[1].robots, 2);
        let bad = text.replace("[1,2]", "[1.5]");
        assert!(ExperimentConfig::from_json_str(&bad).is_err());
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.runs.len(), 2 * 2 * 2);
        assert_eq!(r.summary().len(), 4);
        assert_eq!(r.failures().len(), 2);
    }
}
