//! Generic search over choice points, with metrics.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::roadmap::{RoadMap, VertexId};

/// A state space explored by [`search`].
pub trait SearchSpace {
    type State: Clone + Eq + Hash;
    type Action: Clone;

    /// Pushes successors of `s` onto `out` in a fixed order.
    fn expand(&self, s: &Self::State, out: &mut Vec<(Self::Action, Self::State)>);

    fn is_goal(&self, s: &Self::State) -> bool;

    /// Estimated distance to a goal. `None` marks a dead state, which is
    /// dropped. Only consulted by best-first search.
    fn heuristic(&self, _s: &Self::State) -> Option<u64> {
        Some(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[default]
    Bfs,
    BestFirst,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Bfs => "bfs",
            Strategy::BestFirst => "best-first",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bfs" => Ok(Strategy::Bfs),
            "best-first" => Ok(Strategy::BestFirst),
            other => Err(format!("unknown strategy `{other}` (expected bfs or best-first)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_nodes: u64,
    #[serde(with = "millis")]
    pub max_time: Duration,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: 10_000_000,
            max_time: Duration::from_secs(300),
        }
    }
}

mod millis {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SearchOptions {
    pub strategy: Strategy,
    pub limits: Limits,
    /// Prune states already seen. On by default.
    pub keep_duplicates: bool,
}

impl SearchOptions {
    pub fn new(strategy: Strategy) -> Self {
        SearchOptions {
            strategy,
            ..Default::default()
        }
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn with_max_nodes(mut self, n: u64) -> Self {
        self.limits.max_nodes = n;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Solved,
    Exhausted,
    NodeLimit,
    TimeLimit,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Solved => "solved",
            Outcome::Exhausted => "exhausted",
            Outcome::NodeLimit => "node_limit",
            Outcome::TimeLimit => "time_limit",
        }
    }

    pub fn hit_limit(self) -> bool {
        matches!(self, Outcome::NodeLimit | Outcome::TimeLimit)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchMetrics {
    pub nodes_generated: u64,
    pub nodes_expanded: u64,
    pub goal_depth: Option<u64>,
    pub outcome: Outcome,
    #[serde(skip)]
    pub wall: Duration,
}

impl SearchMetrics {
    pub fn empty(outcome: Outcome) -> Self {
        SearchMetrics {
            nodes_generated: 0,
            nodes_expanded: 0,
            goal_depth: None,
            outcome,
            wall: Duration::ZERO,
        }
    }

    /// Nodes generated per node expanded; zero before any expansion.
    pub fn branching_factor(&self) -> f64 {
        if self.nodes_expanded == 0 {
            0.0
        } else {
            self.nodes_generated as f64 / self.nodes_expanded as f64
        }
    }

    /// Adds the counts of a later search phase. Depth and outcome come from
    /// `later`.
    pub fn absorb(&mut self, later: &SearchMetrics) {
        self.nodes_generated += later.nodes_generated;
        self.nodes_expanded += later.nodes_expanded;
        self.goal_depth = later.goal_depth;
        self.outcome = later.outcome;
        self.wall += later.wall;
    }

    pub fn row(&self, instance: &str, algorithm: &str) -> MetricsRow {
        MetricsRow {
            instance: instance.to_string(),
            algorithm: algorithm.to_string(),
            outcome: self.outcome.name().to_string(),
            nodes_generated: self.nodes_generated,
            nodes_expanded: self.nodes_expanded,
            goal_depth: self.goal_depth,
            branching_factor: format!("{:.4}", self.branching_factor()),
            wall_ms: Some(self.wall.as_secs_f64() * 1e3).map(|ms| format!("{ms:.3}")),
        }
    }
}

/// One CSV line of metrics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub instance: String,
    pub algorithm: String,
    pub outcome: String,
    pub nodes_generated: u64,
    pub nodes_expanded: u64,
    pub goal_depth: Option<u64>,
    pub branching_factor: String,
    /// Blank when timing is switched off for reproducible output.
    pub wall_ms: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Solution<A, S> {
    pub actions: Vec<A>,
    /// States along the path, root first; one more than `actions`.
    pub states: Vec<S>,
}

#[derive(Clone, Debug)]
pub struct SearchResult<A, S> {
    pub solution: Option<Solution<A, S>>,
    pub metrics: SearchMetrics,
}

struct Node<A, S> {
    state: S,
    parent: Option<usize>,
    action: Option<A>,
    depth: u64,
}

enum Frontier {
    Fifo(VecDeque<usize>),
    Best(BinaryHeap<Reverse<(u64, u64, usize)>>),
}

impl Frontier {
    fn pop(&mut self) -> Option<usize> {
        match self {
            Frontier::Fifo(q) => q.pop_front(),
            Frontier::Best(h) => h.pop().map(|Reverse((_, _, i))| i),
        }
    }
}

/// Runs breadth-first or greedy best-first search from `root`.
///
/// The goal test is applied when a node is taken off the frontier; every
/// successor produced counts as generated, duplicates included.
pub fn search<S: SearchSpace>(space: &S, root: S::State, opts: &SearchOptions) -> SearchResult<S::Action, S::State> {
    let started = Instant::now();
    let mut nodes: Vec<Node<S::Action, S::State>> = Vec::new();
    let mut seen: HashSet<S::State> = HashSet::new();
    let mut seq = 0u64;
    let mut metrics = SearchMetrics::empty(Outcome::Exhausted);
    let mut frontier = match opts.strategy {
        Strategy::Bfs => Frontier::Fifo(VecDeque::new()),
        Strategy::BestFirst => Frontier::Best(BinaryHeap::new()),
    };

    let mut push =
        |nodes: &mut Vec<Node<S::Action, S::State>>, frontier: &mut Frontier, node: Node<S::Action, S::State>| {
            let h = match frontier {
                Frontier::Fifo(_) => Some(0),
                Frontier::Best(_) => space.heuristic(&node.state),
            };
            let Some(h) = h else { return };
            let i = nodes.len();
            nodes.push(node);
            match frontier {
                Frontier::Fifo(q) => q.push_back(i),
                Frontier::Best(heap) => {
                    heap.push(Reverse((h, seq, i)));
                    seq += 1;
                }
            }
        };

    metrics.nodes_generated = 1;
    if !opts.keep_duplicates {
        seen.insert(root.clone());
    }
    push(
        &mut nodes,
        &mut frontier,
        Node {
            state: root,
            parent: None,
            action: None,
            depth: 0,
        },
    );

    let mut children = Vec::new();
    while let Some(i) = frontier.pop() {
        metrics.nodes_expanded += 1;
        if space.is_goal(&nodes[i].state) {
            metrics.outcome = Outcome::Solved;
            metrics.goal_depth = Some(nodes[i].depth);
            metrics.wall = started.elapsed();
            return SearchResult {
                solution: Some(trace(&nodes, i)),
                metrics,
            };
        }
        if metrics.nodes_expanded.is_multiple_of(256) && started.elapsed() > opts.limits.max_time {
            metrics.outcome = Outcome::TimeLimit;
            break;
        }
        children.clear();
        space.expand(&nodes[i].state, &mut children);
        let depth = nodes[i].depth + 1;
        for (action, state) in children.drain(..) {
            metrics.nodes_generated += 1;
            if !opts.keep_duplicates && !seen.insert(state.clone()) {
                continue;
            }
            push(
                &mut nodes,
                &mut frontier,
                Node {
                    state,
                    parent: Some(i),
                    action: Some(action),
                    depth,
                },
            );
        }
        if metrics.nodes_generated >= opts.limits.max_nodes {
            metrics.outcome = Outcome::NodeLimit;
            break;
        }
    }
    metrics.wall = started.elapsed();
    SearchResult {
        solution: None,
        metrics,
    }
}

fn trace<A: Clone, S: Clone>(nodes: &[Node<A, S>], mut i: usize) -> Solution<A, S> {
    let mut actions = Vec::new();
    let mut states = vec![nodes[i].state.clone()];
    while let Some(p) = nodes[i].parent {
        actions.push(nodes[i].action.clone().expect("non-root node has an action"));
        states.push(nodes[p].state.clone());
        i = p;
    }
    actions.reverse();
    states.reverse();
    Solution { actions, states }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HeuristicMode {
    #[default]
    None,
    #[serde(alias = "sum")]
    SumShortestPaths,
    #[serde(alias = "subgraph")]
    SubgraphMaxShortestPaths,
}

impl FromStr for HeuristicMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(HeuristicMode::None),
            "sum" | "sum_shortest_paths" => Ok(HeuristicMode::SumShortestPaths),
            "subgraph" | "subgraph_max_shortest_paths" => Ok(HeuristicMode::SubgraphMaxShortestPaths),
            other => Err(format!("unknown heuristic `{other}`")),
        }
    }
}

/// Hop-distance heuristics over a fixed all-pairs table.
#[derive(Clone, Debug)]
pub struct Heuristic {
    pub mode: HeuristicMode,
    dist: Vec<Vec<Option<u32>>>,
}

impl Heuristic {
    pub fn new(map: &RoadMap, mode: HeuristicMode) -> Self {
        Heuristic {
            mode,
            dist: map.all_pairs_hops(),
        }
    }

    pub fn dist(&self, from: VertexId, to: VertexId) -> Option<u32> {
        self.dist[from][to]
    }

    /// Sum of hop distances from each position to its goal.
    pub fn sum(&self, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Option<u64> {
        pairs
            .into_iter()
            .map(|(at, goal)| self.dist(at, goal).map(u64::from))
            .sum()
    }

    /// Worst distance to `goal` from any member, ignoring members that
    /// cannot reach it; `None` only if none can.
    pub fn worst_from(&self, members: &[VertexId], goal: VertexId) -> Option<u64> {
        members.iter().filter_map(|&v| self.dist(v, goal)).max().map(u64::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counting up by one or two from zero; goal is a fixed number.
    struct Count {
        goal: u32,
        cap: u32,
    }

    impl SearchSpace for Count {
        type State = u32;
        type Action = u32;
        fn expand(&self, s: &u32, out: &mut Vec<(u32, u32)>) {
            for d in [1, 2] {
                if s + d <= self.cap {
                    out.push((d, s + d));
                }
            }
        }
        fn is_goal(&self, s: &u32) -> bool {
            *s == self.goal
        }
        fn heuristic(&self, s: &u32) -> Option<u64> {
            (*s <= self.goal).then(|| u64::from(self.goal - s))
        }
    }

    #[test]
    fn goal_at_root() {
        let r = search(&Count { goal: 0, cap: 5 }, 0, &SearchOptions::default());
        let sol = r.solution.unwrap();
        assert!(sol.actions.is_empty());
        assert_eq!(r.metrics.nodes_expanded, 1);
        assert_eq!(r.metrics.nodes_generated, 1);
        assert_eq!(r.metrics.goal_depth, Some(0));
    }

    #[test]
    fn bfs_is_shallowest() {
        let r = search(&Count { goal: 7, cap: 10 }, 0, &SearchOptions::default());
        assert_eq!(r.metrics.goal_depth, Some(4));
        let sol = r.solution.unwrap();
        assert_eq!(sol.actions.iter().sum::<u32>(), 7);
        assert_eq!(sol.states.len(), 5);
        let m = r.metrics;
        assert!(m.nodes_generated >= m.nodes_expanded && m.nodes_expanded >= 5);
    }

    #[test]
    fn exhaustion_and_limits() {
        let r = search(&Count { goal: 99, cap: 10 }, 0, &SearchOptions::default());
        assert_eq!(r.metrics.outcome, Outcome::Exhausted);
        let r = search(
            &Count { goal: 99, cap: 1000 },
            0,
            &SearchOptions::default().with_max_nodes(50),
        );
        assert_eq!(r.metrics.outcome, Outcome::NodeLimit);
    }

    #[test]
    fn best_first_prunes_dead_states() {
        let opts = SearchOptions::new(Strategy::BestFirst);
        let r = search(&Count { goal: 7, cap: 100 }, 0, &opts);
        assert_eq!(r.metrics.outcome, Outcome::Solved);
        // Overshooting states have no heuristic value and are never queued.
        assert!(r.metrics.nodes_expanded <= 8);
    }

    #[test]
    fn duplicates_kept_on_request() {
        let mut opts = SearchOptions::default();
        let with = search(&Count { goal: 6, cap: 6 }, 0, &opts).metrics;
        opts.keep_duplicates = true;
        let without = search(&Count { goal: 6, cap: 6 }, 0, &opts).metrics;
        assert!(without.nodes_expanded > with.nodes_expanded);
    }

    #[test]
    fn heuristic_sums_and_worst() {
        let map = RoadMap::undirected(6, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let h = Heuristic::new(&map, HeuristicMode::SumShortestPaths);
        assert_eq!(h.sum([(2, 2)]), Some(0));
        assert_eq!(h.sum([(0, 3), (4, 0)]), Some(7));
        assert_eq!(h.sum([(0, 5)]), None);
        assert_eq!(h.worst_from(&[0, 1, 2], 4), Some(4));
        assert_eq!(h.worst_from(&[0, 5], 4), Some(4));
        assert_eq!(h.worst_from(&[5], 4), None);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [Strategy::Bfs, Strategy::BestFirst] {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
    }
}
