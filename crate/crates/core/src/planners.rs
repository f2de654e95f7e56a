//! The four planners: naive and subgraph, each centralised or prioritised.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plans::{
    apply_step, combine, induce, validate_plan, Arrangement, ConcretePlan, PlanStep, PlanViolation, Problem,
    ProblemError, RobotId,
};
use crate::roadmap::{reduce, InvalidPartition, Partition, ReducedGraph, RoadMap, SubgraphRef, VertexId};
use crate::search::{search, Heuristic, HeuristicMode, Outcome, SearchMetrics, SearchOptions, SearchSpace};
use crate::structures::{structure_for, Configuration, NextAction, StructureError, SubgraphMethods};

/// Abstract search state: one configuration per subgraph, by subgraph id.
pub type ConfigTuple = Vec<Configuration>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Naive,
    Subgraph,
    Prio,
    PrioSubgraph,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Naive,
        Algorithm::Subgraph,
        Algorithm::Prio,
        Algorithm::PrioSubgraph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Subgraph => "subgraph",
            Algorithm::Prio => "prio",
            Algorithm::PrioSubgraph => "prio-subgraph",
        }
    }

    pub fn needs_partition(self) -> bool {
        matches!(self, Algorithm::Subgraph | Algorithm::PrioSubgraph)
    }

    pub fn is_prioritised(self) -> bool {
        matches!(self, Algorithm::Prio | Algorithm::PrioSubgraph)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected naive, subgraph, prio or prio-subgraph)"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PlannerConfig {
    pub search: SearchOptions,
    pub heuristic: HeuristicMode,
}

#[derive(Debug, Error)]
pub enum PlannerError {
    #[error("algorithm {0} needs a partition")]
    MissingPartition(Algorithm),
    #[error("invalid partition: {0}")]
    Partition(#[from] InvalidPartition),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("resolution failed: {0}")]
    Resolve(#[from] StructureError),
    #[error("planner produced an invalid plan: {0}")]
    InvalidPlan(#[from] PlanViolation),
}

/// Subgraph transitions and the configuration tuples around them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractPlan {
    pub gammas: Vec<ConfigTuple>,
    pub transitions: Vec<PlanStep>,
}

impl AbstractPlan {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }
}

impl fmt::Display for AbstractPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gammas.iter().enumerate() {
            let parts: Vec<String> = g.iter().map(ToString::to_string).collect();
            writeln!(f, "({})", parts.join(" "))?;
            if let Some(s) = self.transitions.get(i) {
                writeln!(f, "  {s}")?;
            }
        }
        Ok(())
    }
}

/// What a planner returns. `plan` is `None` on failure, with the reason
/// in `metrics.outcome`.
#[derive(Clone, Debug)]
pub struct PlanOutcome {
    pub plan: Option<ConcretePlan>,
    /// Subgraph modes only: the abstract plan (centralised) or one joint
    /// abstract plan per priority level (prioritised).
    pub abstract_plans: Vec<AbstractPlan>,
    pub metrics: SearchMetrics,
}

impl PlanOutcome {
    pub fn solved(&self) -> bool {
        self.plan.is_some()
    }

    fn failed(metrics: SearchMetrics) -> Self {
        PlanOutcome {
            plan: None,
            abstract_plans: Vec::new(),
            metrics,
        }
    }
}

/// A partition together with its reduced graph and structure methods.
pub struct Abstraction {
    pub partition: Partition,
    pub reduced: ReducedGraph,
    structures: Vec<Box<dyn SubgraphMethods>>,
}

impl Abstraction {
    pub fn new(map: &RoadMap, partition: &Partition) -> Result<Self, InvalidPartition> {
        let reduced = reduce(map, partition)?;
        let structures = partition.subgraphs().iter().map(structure_for).collect();
        Ok(Abstraction {
            partition: partition.clone(),
            reduced,
            structures,
        })
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    pub fn structure(&self, x: usize) -> &dyn SubgraphMethods {
        self.structures[x].as_ref()
    }

    pub fn subgraph(&self, x: usize) -> &SubgraphRef {
        self.partition.subgraph(x)
    }

    pub fn owner(&self, v: VertexId) -> usize {
        self.partition.subgraph_of(v).expect("vertex covered by partition")
    }

    /// The configuration tuple of an arrangement.
    pub fn tuple_of(&self, a: &Arrangement) -> Result<ConfigTuple, StructureError> {
        (0..self.len())
            .map(|x| self.structure(x).config_of(&induce(a, self.subgraph(x))))
            .collect()
    }

    /// Whether every subgraph can settle into `goal`.
    pub fn can_terminate(&self, gamma: &[Configuration], goal_parts: &[Arrangement]) -> bool {
        gamma
            .iter()
            .zip(goal_parts)
            .enumerate()
            .all(|(x, (c, g))| self.structure(x).can_terminate(c, g))
    }

    pub fn goal_parts(&self, goal: &Arrangement) -> Vec<Arrangement> {
        (0..self.len()).map(|x| induce(goal, self.subgraph(x))).collect()
    }

    /// Successors of `gamma` by one transition of `robot`, in fixed order:
    /// neighbouring subgraph, connecting arc, resulting configuration.
    fn transitions_of(&self, gamma: &[Configuration], robot: RobotId, out: &mut Vec<(PlanStep, ConfigTuple)>) {
        let Some(x) = gamma.iter().position(|c| c.contains(robot)) else {
            return;
        };
        for &y in self.reduced.neighbours(x) {
            for &(u, v) in self.reduced.connecting(x, y) {
                let Some(cx) = self.structure(x).exit(&gamma[x], robot, u) else {
                    continue;
                };
                for cy in self.structure(y).enter(&gamma[y], robot, v) {
                    let mut next = gamma.to_vec();
                    next[x] = cx.clone();
                    next[y] = cy;
                    out.push((PlanStep::new(robot, u, v), next));
                }
            }
        }
    }

    /// Applies a known transition, returning every resulting tuple.
    fn replay(&self, gamma: &[Configuration], step: &PlanStep) -> Vec<ConfigTuple> {
        let (x, y) = (self.owner(step.from), self.owner(step.to));
        let Some(cx) = self.structure(x).exit(&gamma[x], step.robot, step.from) else {
            return Vec::new();
        };
        self.structure(y)
            .enter(&gamma[y], step.robot, step.to)
            .into_iter()
            .map(|cy| {
                let mut next = gamma.to_vec();
                next[x] = cx.clone();
                next[y] = cy;
                next
            })
            .collect()
    }

    /// Bound on a robot's remaining distance from anywhere in subgraph `x`.
    fn subgraph_estimate(&self, h: &Heuristic, x: usize, goal: VertexId) -> Option<u64> {
        let members = &self.subgraph(x).members;
        match h.mode {
            HeuristicMode::None => Some(0),
            HeuristicMode::SumShortestPaths => members.iter().filter_map(|&v| h.dist(v, goal)).min().map(u64::from),
            HeuristicMode::SubgraphMaxShortestPaths => h.worst_from(members, goal),
        }
    }

    fn tuple_estimate(&self, h: &Heuristic, gamma: &[Configuration], goal: &Arrangement) -> Option<u64> {
        let mut total = 0;
        for (x, c) in gamma.iter().enumerate() {
            for &r in c.robots() {
                total += self.subgraph_estimate(h, x, goal.position(r)?)?;
            }
        }
        Some(total)
    }

    /// Turns an abstract plan into moves, transition by transition, then
    /// settles every subgraph into the goal. No search is involved.
    pub fn resolve(
        &self,
        map: &RoadMap,
        abs: &AbstractPlan,
        start: &Arrangement,
        goal: &Arrangement,
    ) -> Result<ConcretePlan, PlannerError> {
        let mut cur = start.clone();
        let mut plan = ConcretePlan::default();
        for (i, step) in abs.transitions.iter().enumerate() {
            let (x, y) = (self.owner(step.from), self.owner(step.to));
            let target = &abs.gammas[i + 1];
            let ax = induce(&cur, self.subgraph(x));
            let ay = induce(&cur, self.subgraph(y));
            let (px, ax) = self.structure(x).resolve_exit(&ax, step.robot, step.from, &target[x])?;
            let next = self.next_action(abs, i, y, goal);
            let (py, ay) = self
                .structure(y)
                .resolve_enter(&ay, step.robot, step.to, &target[y], Some(next))?;
            let rest: Vec<Arrangement> = (0..self.len())
                .filter(|&z| z != x && z != y)
                .map(|z| induce(&cur, self.subgraph(z)))
                .collect();
            cur = combine(rest.iter().chain([&ax, &ay])).expect("resolved parts are disjoint");
            plan.extend(px);
            plan.extend(py);
            cur = apply_step(&cur, step)
                .map_err(|_| StructureError::Contract(format!("transition {step} not applicable after resolution")))?;
            plan.push(*step);
        }
        for x in 0..self.len() {
            let s = self.subgraph(x);
            plan.extend(
                self.structure(x)
                    .resolve_terminate(&induce(&cur, s), &induce(goal, s))?,
            );
        }
        validate_plan(map, start, goal, &plan)?;
        Ok(plan)
    }

    fn next_action<'g>(&self, abs: &AbstractPlan, i: usize, y: usize, goal: &'g Arrangement) -> NextAction<'g> {
        abs.transitions[i + 1..]
            .iter()
            .find(|s| self.owner(s.from) == y)
            .map(|s| NextAction::Exit {
                robot: s.robot,
                via: s.from,
            })
            .unwrap_or(NextAction::Terminate { goal })
    }

    /// Lifts a concrete plan to its subgraph transitions. Fails if some
    /// crossing step is not a legal transition of the configuration
    /// calculus, or if the final tuple cannot terminate in `goal`.
    pub fn extract(
        &self,
        plan: &ConcretePlan,
        start: &Arrangement,
        goal: &Arrangement,
    ) -> Result<AbstractPlan, String> {
        let mut cur = start.clone();
        let mut gamma = self.tuple_of(start).map_err(|e| e.to_string())?;
        let mut abs = AbstractPlan {
            gammas: vec![gamma.clone()],
            transitions: Vec::new(),
        };
        for step in &plan.steps {
            cur = apply_step(&cur, step).map_err(|e| e.to_string())?;
            let (x, y) = (self.owner(step.from), self.owner(step.to));
            if x == y {
                continue;
            }
            let cx = self
                .structure(x)
                .exit(&gamma[x], step.robot, step.from)
                .ok_or_else(|| format!("{step}: exit refused by {}", gamma[x]))?;
            let ay = induce(&cur, self.subgraph(y));
            let cy = self
                .structure(y)
                .enter(&gamma[y], step.robot, step.to)
                .into_iter()
                .find(|c| self.structure(y).admits(c, &ay))
                .ok_or_else(|| format!("{step}: no entry result admits {ay}"))?;
            gamma[x] = cx;
            gamma[y] = cy;
            abs.gammas.push(gamma.clone());
            abs.transitions.push(*step);
        }
        if !self.can_terminate(&gamma, &self.goal_parts(goal)) {
            return Err("final tuple cannot terminate in the goal".into());
        }
        Ok(abs)
    }

    /// Checks the defining conditions of an abstract plan.
    pub fn check(&self, abs: &AbstractPlan) -> Result<(), String> {
        if abs.gammas.len() != abs.transitions.len() + 1 {
            return Err("tuple count must exceed transition count by one".into());
        }
        for (i, step) in abs.transitions.iter().enumerate() {
            if !self.replay(&abs.gammas[i], step).contains(&abs.gammas[i + 1]) {
                return Err(format!("transition {} ({step}) does not lead to the next tuple", i + 1));
            }
        }
        Ok(())
    }
}

fn prepare(map: &RoadMap, problem: &Problem) -> Result<(Arrangement, Arrangement), PlannerError> {
    problem.validate(map)?;
    Ok((problem.start(), problem.goal()))
}

// ---------------------------------------------------------------------------
// Naive centralised search over exact positions

struct NaiveSpace<'a> {
    map: &'a RoadMap,
    robots: Vec<RobotId>,
    goal: Vec<VertexId>,
    h: Heuristic,
}

impl SearchSpace for NaiveSpace<'_> {
    type State = Vec<VertexId>;
    type Action = PlanStep;

    fn expand(&self, s: &Vec<VertexId>, out: &mut Vec<(PlanStep, Vec<VertexId>)>) {
        for (i, &u) in s.iter().enumerate() {
            for &v in self.map.successors(u) {
                if !s.contains(&v) {
                    let mut t = s.clone();
                    t[i] = v;
                    out.push((PlanStep::new(self.robots[i], u, v), t));
                }
            }
        }
    }

    fn is_goal(&self, s: &Vec<VertexId>) -> bool {
        *s == self.goal
    }

    fn heuristic(&self, s: &Vec<VertexId>) -> Option<u64> {
        match self.h.mode {
            HeuristicMode::None => Some(0),
            _ => self.h.sum(s.iter().copied().zip(self.goal.iter().copied())),
        }
    }
}

/// Centralised search over the composite space.
pub fn plan_naive(map: &RoadMap, problem: &Problem, cfg: &PlannerConfig) -> Result<PlanOutcome, PlannerError> {
    let (start, goal) = prepare(map, problem)?;
    let (robots, s0): (Vec<RobotId>, Vec<VertexId>) = start.iter().unzip();
    let space = NaiveSpace {
        map,
        goal: robots.iter().map(|&r| goal.position(r).unwrap()).collect(),
        robots,
        h: Heuristic::new(map, cfg.heuristic),
    };
    let result = search(&space, s0, &cfg.search);
    let Some(sol) = result.solution else {
        return Ok(PlanOutcome::failed(result.metrics));
    };
    let plan = ConcretePlan::new(sol.actions);
    validate_plan(map, &start, &goal, &plan)?;
    Ok(PlanOutcome {
        plan: Some(plan),
        abstract_plans: Vec::new(),
        metrics: result.metrics,
    })
}

// ---------------------------------------------------------------------------
// Centralised search over configuration tuples

struct SubgraphSpace<'a> {
    abs: &'a Abstraction,
    robots: Vec<RobotId>,
    goal: &'a Arrangement,
    goal_parts: Vec<Arrangement>,
    h: Heuristic,
}

impl SearchSpace for SubgraphSpace<'_> {
    type State = ConfigTuple;
    type Action = PlanStep;

    fn expand(&self, s: &ConfigTuple, out: &mut Vec<(PlanStep, ConfigTuple)>) {
        for &r in &self.robots {
            self.abs.transitions_of(s, r, out);
        }
    }

    fn is_goal(&self, s: &ConfigTuple) -> bool {
        self.abs.can_terminate(s, &self.goal_parts)
    }

    fn heuristic(&self, s: &ConfigTuple) -> Option<u64> {
        self.abs.tuple_estimate(&self.h, s, self.goal)
    }
}

/// Search over configuration tuples, then resolution.
pub fn plan_subgraph(
    map: &RoadMap,
    partition: &Partition,
    problem: &Problem,
    cfg: &PlannerConfig,
) -> Result<PlanOutcome, PlannerError> {
    let (start, goal) = prepare(map, problem)?;
    let abs = Abstraction::new(map, partition)?;
    let space = SubgraphSpace {
        abs: &abs,
        robots: start.robots().collect(),
        goal: &goal,
        goal_parts: abs.goal_parts(&goal),
        h: Heuristic::new(map, cfg.heuristic),
    };
    let result = search(&space, abs.tuple_of(&start)?, &cfg.search);
    let Some(sol) = result.solution else {
        return Ok(PlanOutcome::failed(result.metrics));
    };
    let abstract_plan = AbstractPlan {
        gammas: sol.states,
        transitions: sol.actions,
    };
    let plan = abs.resolve(map, &abstract_plan, &start, &goal)?;
    Ok(PlanOutcome {
        plan: Some(plan),
        abstract_plans: vec![abstract_plan],
        metrics: result.metrics,
    })
}

// ---------------------------------------------------------------------------
// Prioritised planning

/// Level-`i` state: positions of robots `1..=i` plus replay pointers of
/// robots `1..i`.
#[derive(Clone, PartialEq, Eq, Hash)]
struct PrioState<S> {
    inner: S,
    pointers: Vec<usize>,
}

struct PrioNaiveSpace<'a> {
    map: &'a RoadMap,
    robots: &'a [RobotId],
    committed: &'a [Vec<PlanStep>],
    goal: Vec<VertexId>,
    h: Heuristic,
}

impl SearchSpace for PrioNaiveSpace<'_> {
    type State = PrioState<Vec<VertexId>>;
    type Action = PlanStep;

    fn expand(&self, s: &Self::State, out: &mut Vec<(PlanStep, Self::State)>) {
        let i = self.robots.len() - 1;
        for (j, own) in self.committed.iter().enumerate() {
            let Some(step) = own.get(s.pointers[j]) else {
                continue;
            };
            if s.inner.contains(&step.to) {
                continue;
            }
            let mut t = s.clone();
            t.inner[j] = step.to;
            t.pointers[j] += 1;
            out.push((*step, t));
        }
        let u = s.inner[i];
        for &v in self.map.successors(u) {
            if !s.inner.contains(&v) {
                let mut t = s.clone();
                t.inner[i] = v;
                out.push((PlanStep::new(self.robots[i], u, v), t));
            }
        }
    }

    fn is_goal(&self, s: &Self::State) -> bool {
        s.inner == self.goal
    }

    fn heuristic(&self, s: &Self::State) -> Option<u64> {
        match self.h.mode {
            HeuristicMode::None => Some(0),
            _ => self.h.sum(s.inner.iter().copied().zip(self.goal.iter().copied())),
        }
    }
}

/// Plans robots one at a time in priority order. Earlier robots replay
/// their committed moves; no backtracking across robots.
pub fn plan_prioritised(map: &RoadMap, problem: &Problem, cfg: &PlannerConfig) -> Result<PlanOutcome, PlannerError> {
    let (start, goal) = prepare(map, problem)?;
    let order = problem.priority();
    let h = Heuristic::new(map, cfg.heuristic);
    let mut committed: Vec<Vec<PlanStep>> = Vec::new();
    let mut metrics = SearchMetrics::empty(Outcome::Solved);
    metrics.goal_depth = Some(0);
    let mut plan = ConcretePlan::default();
    for i in 0..order.len() {
        let robots = &order[..=i];
        let space = PrioNaiveSpace {
            map,
            robots,
            committed: &committed,
            goal: robots.iter().map(|&r| goal.position(r).unwrap()).collect(),
            h: h.clone(),
        };
        let root = PrioState {
            inner: robots.iter().map(|&r| start.position(r).unwrap()).collect(),
            pointers: vec![0; i],
        };
        let result = search(&space, root, &cfg.search);
        metrics.absorb(&result.metrics);
        let Some(sol) = result.solution else {
            return Ok(PlanOutcome::failed(metrics));
        };
        committed.push(sol.actions.iter().filter(|s| s.robot == order[i]).copied().collect());
        plan = ConcretePlan::new(sol.actions);
    }
    validate_plan(map, &start, &goal, &plan)?;
    Ok(PlanOutcome {
        plan: Some(plan),
        abstract_plans: Vec::new(),
        metrics,
    })
}

struct PrioSubgraphSpace<'a> {
    abs: &'a Abstraction,
    robot: RobotId,
    committed: &'a [Vec<PlanStep>],
    goal: &'a Arrangement,
    goal_parts: Vec<Arrangement>,
    h: Heuristic,
}

impl SearchSpace for PrioSubgraphSpace<'_> {
    type State = PrioState<ConfigTuple>;
    type Action = PlanStep;

    fn expand(&self, s: &Self::State, out: &mut Vec<(PlanStep, Self::State)>) {
        for (j, own) in self.committed.iter().enumerate() {
            let Some(step) = own.get(s.pointers[j]) else {
                continue;
            };
            for next in self.abs.replay(&s.inner, step) {
                let mut pointers = s.pointers.clone();
                pointers[j] += 1;
                out.push((*step, PrioState { inner: next, pointers }));
            }
        }
        let mut own = Vec::new();
        self.abs.transitions_of(&s.inner, self.robot, &mut own);
        for (step, next) in own {
            out.push((
                step,
                PrioState {
                    inner: next,
                    pointers: s.pointers.clone(),
                },
            ));
        }
    }

    fn is_goal(&self, s: &Self::State) -> bool {
        self.abs.can_terminate(&s.inner, &self.goal_parts)
    }

    fn heuristic(&self, s: &Self::State) -> Option<u64> {
        self.abs.tuple_estimate(&self.h, &s.inner, self.goal)
    }
}

fn restrict(a: &Arrangement, robots: &[RobotId]) -> Arrangement {
    Arrangement::from_pairs(robots.iter().map(|&r| (r, a.position(r).expect("robot placed")))).unwrap()
}

/// Prioritised planning at the abstract level. Each robot commits to its
/// own subgraph transitions; a single resolution runs at the end.
pub fn plan_prioritised_subgraph(
    map: &RoadMap,
    partition: &Partition,
    problem: &Problem,
    cfg: &PlannerConfig,
) -> Result<PlanOutcome, PlannerError> {
    let (start, goal) = prepare(map, problem)?;
    let abs = Abstraction::new(map, partition)?;
    let order = problem.priority();
    let h = Heuristic::new(map, cfg.heuristic);
    let mut committed: Vec<Vec<PlanStep>> = Vec::new();
    let mut levels: Vec<AbstractPlan> = Vec::new();
    let mut metrics = SearchMetrics::empty(Outcome::Solved);
    metrics.goal_depth = Some(0);
    for i in 0..order.len() {
        let robots = &order[..=i];
        let level_start = restrict(&start, robots);
        let level_goal = restrict(&goal, robots);
        let space = PrioSubgraphSpace {
            abs: &abs,
            robot: order[i],
            committed: &committed,
            goal: &level_goal,
            goal_parts: abs.goal_parts(&level_goal),
            h: h.clone(),
        };
        let root = PrioState {
            inner: abs.tuple_of(&level_start)?,
            pointers: vec![0; i],
        };
        let result = search(&space, root, &cfg.search);
        metrics.absorb(&result.metrics);
        let Some(sol) = result.solution else {
            return Ok(PlanOutcome {
                plan: None,
                abstract_plans: levels,
                metrics,
            });
        };
        committed.push(sol.actions.iter().filter(|s| s.robot == order[i]).copied().collect());
        levels.push(AbstractPlan {
            gammas: sol.states.into_iter().map(|s| s.inner).collect(),
            transitions: sol.actions,
        });
    }
    let plan = match levels.last() {
        Some(joint) => abs.resolve(map, joint, &start, &goal)?,
        None => ConcretePlan::default(),
    };
    Ok(PlanOutcome {
        plan: Some(plan),
        abstract_plans: levels,
        metrics,
    })
}

/// Runs the named planner. Subgraph modes require a partition.
pub fn run_planner(
    algorithm: Algorithm,
    map: &RoadMap,
    partition: Option<&Partition>,
    problem: &Problem,
    cfg: &PlannerConfig,
) -> Result<PlanOutcome, PlannerError> {
    let part = || partition.ok_or(PlannerError::MissingPartition(algorithm));
    match algorithm {
        Algorithm::Naive => plan_naive(map, problem, cfg),
        Algorithm::Subgraph => plan_subgraph(map, part()?, problem, cfg),
        Algorithm::Prio => plan_prioritised(map, problem, cfg),
        Algorithm::PrioSubgraph => plan_prioritised_subgraph(map, part()?, problem, cfg),
    }
}

/// Per-robot transitions of an abstract plan, keyed by robot.
pub fn transitions_by_robot(abs: &AbstractPlan) -> BTreeMap<RobotId, Vec<PlanStep>> {
    let mut out: BTreeMap<RobotId, Vec<PlanStep>> = BTreeMap::new();
    for s in &abs.transitions {
        out.entry(s.robot).or_default().push(*s);
    }
    out
}
