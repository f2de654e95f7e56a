//! Arrangements of robots, plan steps and concrete plans.
//!
//! [`validate_plan`] is the ground-truth legality check used on the output
//! of every planner in the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roadmap::{MapError, RoadMap, SubgraphRef, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RobotId(pub u32);

impl fmt::Display for RobotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// An injective partial placement of robots on vertices.
///
/// Both directions are indexed so that "who is at v" and "where is r" are
/// cheap lookups.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Arrangement {
    by_vertex: BTreeMap<VertexId, RobotId>,
    by_robot: BTreeMap<RobotId, VertexId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("vertex {0} is already occupied")]
    VertexTaken(VertexId),
    #[error("robot {0} is already placed")]
    RobotPlaced(RobotId),
}

impl Arrangement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (RobotId, VertexId)>) -> Result<Self, ArrangementError> {
        let mut a = Arrangement::new();
        for (r, v) in pairs {
            a.place(r, v)?;
        }
        Ok(a)
    }

    pub fn place(&mut self, robot: RobotId, at: VertexId) -> Result<(), ArrangementError> {
        if self.by_vertex.contains_key(&at) {
            return Err(ArrangementError::VertexTaken(at));
        }
        if self.by_robot.contains_key(&robot) {
            return Err(ArrangementError::RobotPlaced(robot));
        }
        self.by_vertex.insert(at, robot);
        self.by_robot.insert(robot, at);
        Ok(())
    }

    /// Removes `robot`, returning the vertex it occupied.
    pub fn remove(&mut self, robot: RobotId) -> Option<VertexId> {
        let v = self.by_robot.remove(&robot)?;
        self.by_vertex.remove(&v);
        Some(v)
    }

    pub fn at(&self, v: VertexId) -> Option<RobotId> {
        self.by_vertex.get(&v).copied()
    }

    pub fn position(&self, robot: RobotId) -> Option<VertexId> {
        self.by_robot.get(&robot).copied()
    }

    pub fn is_free(&self, v: VertexId) -> bool {
        !self.by_vertex.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.by_robot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_robot.is_empty()
    }

    /// Robots in id order.
    pub fn robots(&self) -> impl Iterator<Item = RobotId> + '_ {
        self.by_robot.keys().copied()
    }

    /// `(robot, vertex)` pairs in robot order.
    pub fn iter(&self) -> impl Iterator<Item = (RobotId, VertexId)> + '_ {
        self.by_robot.iter().map(|(&r, &v)| (r, v))
    }

    /// `(vertex, robot)` pairs in vertex order.
    pub fn occupied(&self) -> impl Iterator<Item = (VertexId, RobotId)> + '_ {
        self.by_vertex.iter().map(|(&v, &r)| (v, r))
    }

    /// Moves `robot` to `to` without any legality check beyond injectivity.
    pub(crate) fn relocate(&mut self, robot: RobotId, to: VertexId) {
        let from = self.remove(robot).expect("robot is placed");
        if let Err(e) = self.place(robot, to) {
            self.place(robot, from).unwrap();
            panic!("relocate: {e}");
        }
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (r, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}@{v}")?;
        }
        f.write_str("}")
    }
}

/// Movement of one robot along one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanStep {
    pub robot: RobotId,
    pub from: VertexId,
    pub to: VertexId,
}

impl PlanStep {
    pub fn new(robot: RobotId, from: VertexId, to: VertexId) -> Self {
        PlanStep { robot, from, to }
    }

    pub fn reversed(self) -> Self {
        PlanStep {
            robot: self.robot,
            from: self.to,
            to: self.from,
        }
    }
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.robot, self.from, self.to)
    }
}

pub fn is_applicable(a: &Arrangement, s: &PlanStep) -> bool {
    s.from != s.to && a.at(s.from) == Some(s.robot) && a.is_free(s.to)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("step {step} is not applicable")]
pub struct InapplicableStep {
    pub step: PlanStep,
}

pub fn apply_step(a: &Arrangement, s: &PlanStep) -> Result<Arrangement, InapplicableStep> {
    if !is_applicable(a, s) {
        return Err(InapplicableStep { step: *s });
    }
    let mut b = a.clone();
    b.relocate(s.robot, s.to);
    Ok(b)
}

/// A sequential plan: exactly one robot moves per step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConcretePlan {
    pub steps: Vec<PlanStep>,
}

impl ConcretePlan {
    pub fn new(steps: Vec<PlanStep>) -> Self {
        ConcretePlan { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, s: PlanStep) {
        self.steps.push(s);
    }

    pub fn extend(&mut self, other: ConcretePlan) {
        self.steps.extend(other.steps);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, MapError> {
        serde_json::from_str(text).map_err(MapError::from_json)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepFault {
    /// `from == to`.
    Stationary,
    /// The map has no arc `from -> to`.
    MissingEdge,
    /// The robot is not at `from`.
    WrongSource,
    /// Another robot stands on `to`.
    Occupied,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PlanViolation {
    /// `step` counts from 1.
    #[error("step {step} {movement}: {fault:?}")]
    Step {
        step: usize,
        movement: PlanStep,
        fault: StepFault,
    },
    #[error("plan ends at {actual}, expected {expected}")]
    WrongFinal { expected: Arrangement, actual: Arrangement },
}

/// Replays `p` from `a` and checks every step is legal on `map` and that the
/// final arrangement is exactly `b`.
pub fn validate_plan(map: &RoadMap, a: &Arrangement, b: &Arrangement, p: &ConcretePlan) -> Result<(), PlanViolation> {
    let mut cur = a.clone();
    for (i, s) in p.steps.iter().enumerate() {
        let fault = if s.from == s.to {
            Some(StepFault::Stationary)
        } else if !map.has_arc(s.from, s.to) {
            Some(StepFault::MissingEdge)
        } else if cur.at(s.from) != Some(s.robot) {
            Some(StepFault::WrongSource)
        } else if !cur.is_free(s.to) {
            Some(StepFault::Occupied)
        } else {
            None
        };
        if let Some(fault) = fault {
            return Err(PlanViolation::Step {
                step: i + 1,
                movement: *s,
                fault,
            });
        }
        cur.relocate(s.robot, s.to);
    }
    if &cur != b {
        return Err(PlanViolation::WrongFinal {
            expected: b.clone(),
            actual: cur,
        });
    }
    Ok(())
}

/// The part of `a` lying inside `s`.
pub fn induce(a: &Arrangement, s: &SubgraphRef) -> Arrangement {
    let mut out = Arrangement::new();
    for &v in &s.members {
        if let Some(r) = a.at(v) {
            out.place(r, v).unwrap();
        }
    }
    out
}

/// Merges arrangements with disjoint domains and ranges.
pub fn combine<'a>(parts: impl IntoIterator<Item = &'a Arrangement>) -> Result<Arrangement, ArrangementError> {
    let mut out = Arrangement::new();
    for part in parts {
        for (r, v) in part.iter() {
            out.place(r, v)?;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Problems

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotTask {
    pub id: RobotId,
    pub start: VertexId,
    pub goal: VertexId,
}

/// Start and goal for each robot. Listing order is priority order, highest
/// first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub robots: Vec<RobotTask>,
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("robot {robot}: {what} vertex {vertex} is not on the map")]
    OffMap {
        robot: RobotId,
        what: &'static str,
        vertex: VertexId,
    },
    #[error("robot {0} is listed twice")]
    DuplicateRobot(RobotId),
    #[error("{what} positions collide at vertex {vertex}")]
    Collision { what: &'static str, vertex: VertexId },
}

impl Problem {
    pub fn new(robots: Vec<RobotTask>) -> Self {
        Problem { robots }
    }

    pub fn from_arrangements(start: &Arrangement, goal: &Arrangement) -> Self {
        Problem {
            robots: start
                .iter()
                .map(|(id, s)| RobotTask {
                    id,
                    start: s,
                    goal: goal.position(id).expect("goal places every robot"),
                })
                .collect(),
        }
    }

    pub fn start(&self) -> Arrangement {
        Arrangement::from_pairs(self.robots.iter().map(|t| (t.id, t.start))).expect("validated problem")
    }

    pub fn goal(&self) -> Arrangement {
        Arrangement::from_pairs(self.robots.iter().map(|t| (t.id, t.goal))).expect("validated problem")
    }

    /// Robots in priority order.
    pub fn priority(&self) -> Vec<RobotId> {
        self.robots.iter().map(|t| t.id).collect()
    }

    pub fn validate(&self, map: &RoadMap) -> Result<(), ProblemError> {
        let n = map.vertex_count();
        let mut ids = std::collections::BTreeSet::new();
        let mut starts = std::collections::BTreeSet::new();
        let mut goals = std::collections::BTreeSet::new();
        for t in &self.robots {
            if !ids.insert(t.id) {
                return Err(ProblemError::DuplicateRobot(t.id));
            }
            for (what, v, set) in [("start", t.start, &mut starts), ("goal", t.goal, &mut goals)] {
                if v >= n {
                    return Err(ProblemError::OffMap {
                        robot: t.id,
                        what,
                        vertex: v,
                    });
                }
                if !set.insert(v) {
                    return Err(ProblemError::Collision { what, vertex: v });
                }
            }
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self, ProblemError> {
        Ok(serde_json::from_str(text).map_err(MapError::from_json)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ProblemError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| MapError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }
}
