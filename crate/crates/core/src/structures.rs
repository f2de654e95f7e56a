//! Per-structure configuration calculus.
//!
//! A [`Configuration`] is a class of arrangements inside one subgraph that
//! are mutually reachable without any robot leaving it. Each structure kind
//! implements [`SubgraphMethods`]: the transition queries used by the
//! abstract planner (`enter`, `exit`, `can_terminate`) and the resolvers
//! that turn a chosen transition into concrete moves without search.
//!
//! Vertex positions inside configurations are *slots*: indices into the
//! subgraph's canonical member list.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::plans::{Arrangement, ConcretePlan, PlanStep, RobotId};
use crate::roadmap::{SubgraphKind, SubgraphRef, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Configuration {
    /// Robots from the head down.
    Stack(Vec<RobotId>),
    /// Robots from the first member to the last.
    Hall(Vec<RobotId>),
    /// A clique with a free vertex: the sorted set of occupants.
    CliqueOpen(Vec<RobotId>),
    /// A full clique with every position recorded.
    CliqueLocked(Vec<RobotId>),
    /// A full clique whose last entrant (`locker`) is pinned to `slot`; the
    /// other occupants may be in any of the remaining positions until a
    /// later exit or termination fixes them.
    CliquePending {
        robots: Vec<RobotId>,
        locker: RobotId,
        slot: usize,
    },
    /// A ring with a free vertex: cyclic order starting at the smallest id.
    RingOpen(Vec<RobotId>),
    /// A full ring with every position recorded.
    RingLocked(Vec<RobotId>),
    Singleton(Option<RobotId>),
}

impl Configuration {
    pub fn empty(kind: SubgraphKind) -> Self {
        match kind {
            SubgraphKind::Stack => Configuration::Stack(Vec::new()),
            SubgraphKind::Hall => Configuration::Hall(Vec::new()),
            SubgraphKind::Clique => Configuration::CliqueOpen(Vec::new()),
            SubgraphKind::Ring => Configuration::RingOpen(Vec::new()),
            SubgraphKind::Singleton => Configuration::Singleton(None),
        }
    }

    /// The robots inside, in the configuration's own order.
    pub fn robots(&self) -> &[RobotId] {
        match self {
            Configuration::Stack(v)
            | Configuration::Hall(v)
            | Configuration::CliqueOpen(v)
            | Configuration::CliqueLocked(v)
            | Configuration::RingOpen(v)
            | Configuration::RingLocked(v) => v,
            Configuration::CliquePending { robots, .. } => robots,
            Configuration::Singleton(r) => r.as_slice(),
        }
    }

    pub fn contains(&self, r: RobotId) -> bool {
        self.robots().contains(&r)
    }

    pub fn len(&self) -> usize {
        self.robots().len()
    }

    pub fn is_empty(&self) -> bool {
        self.robots().is_empty()
    }

    pub fn is_locked(&self) -> bool {
        matches!(
            self,
            Configuration::CliqueLocked(_) | Configuration::CliquePending { .. } | Configuration::RingLocked(_)
        )
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, open: &str, items: &[RobotId], close: &str) -> fmt::Result {
    f.write_str(open)?;
    for (i, r) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{r}")?;
    }
    f.write_str(close)
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Configuration::Stack(v) => write_list(f, "stack:[", v, "]"),
            Configuration::Hall(v) => write_list(f, "hall:[", v, "]"),
            Configuration::CliqueOpen(v) => write_list(f, "clique:{", v, "}"),
            Configuration::CliqueLocked(v) => write_list(f, "clique!:[", v, "]"),
            Configuration::CliquePending { robots, locker, slot } => {
                write_list(f, "clique*:{", robots, "}")?;
                write!(f, "|{locker}@{slot}")
            }
            Configuration::RingOpen(v) => write_list(f, "ring:<", v, ">"),
            Configuration::RingLocked(v) => write_list(f, "ring!:[", v, "]"),
            Configuration::Singleton(Some(r)) => write!(f, "single:{r}"),
            Configuration::Singleton(None) => f.write_str("single:-"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("robot {robot} stands on vertex {vertex}, outside the subgraph")]
    RobotOutside { robot: RobotId, vertex: VertexId },
    #[error("vertex {0} is not in the subgraph")]
    VertexOutside(VertexId),
    /// A resolver was asked for something the transition queries never
    /// offered. Indicates a planner bug.
    #[error("contract violation: {0}")]
    Contract(String),
}

fn contract<T>(msg: impl Into<String>) -> Result<T, StructureError> {
    Err(StructureError::Contract(msg.into()))
}

/// The next abstract action touching a subgraph after a resolved entry.
/// Least-commitment clique locking looks at it to decide where to put the
/// robots before the lock closes.
#[derive(Clone, Copy, Debug)]
pub enum NextAction<'a> {
    Exit { robot: RobotId, via: VertexId },
    Terminate { goal: &'a Arrangement },
}

/// The six subgraph methods, uniform over structure kinds.
///
/// Arrangements passed in and returned use global vertex ids and must only
/// contain robots inside the subgraph.
pub trait SubgraphMethods: Send + Sync {
    fn subgraph(&self) -> &SubgraphRef;

    fn config_of(&self, arr: &Arrangement) -> Result<Configuration, StructureError>;

    /// Configurations reachable by `robot` entering at `at`, in canonical
    /// order. Empty when the entry is impossible.
    fn enter(&self, c: &Configuration, robot: RobotId, at: VertexId) -> Vec<Configuration>;

    /// The configuration left behind when `robot` leaves via `via`, if it can.
    fn exit(&self, c: &Configuration, robot: RobotId, via: VertexId) -> Option<Configuration>;

    /// Whether the occupants can be moved into `goal` (restricted to this
    /// subgraph) without leaving it.
    fn can_terminate(&self, c: &Configuration, goal: &Arrangement) -> bool;

    /// Rearranges so that `at` is free and admitting `robot` there yields
    /// `target`. Returns the moves and the arrangement before the entry.
    fn resolve_enter(
        &self,
        arr: &Arrangement,
        robot: RobotId,
        at: VertexId,
        target: &Configuration,
        next: Option<NextAction<'_>>,
    ) -> Result<(ConcretePlan, Arrangement), StructureError>;

    /// Moves `robot` onto `via`, ready to leave. `target` is the
    /// configuration after it has gone.
    fn resolve_exit(
        &self,
        arr: &Arrangement,
        robot: RobotId,
        via: VertexId,
        target: &Configuration,
    ) -> Result<(ConcretePlan, Arrangement), StructureError>;

    fn resolve_terminate(&self, arr: &Arrangement, goal: &Arrangement) -> Result<ConcretePlan, StructureError>;

    /// Membership test: is `arr` one of the arrangements `c` stands for?
    fn admits(&self, c: &Configuration, arr: &Arrangement) -> bool {
        self.config_of(arr).is_ok_and(|d| &d == c)
    }
}

/// The methods for a subgraph, chosen by its kind.
pub fn structure_for(sub: &SubgraphRef) -> Box<dyn SubgraphMethods> {
    let local = Local::new(sub.clone());
    match sub.kind {
        SubgraphKind::Stack => Box::new(Chain { local, stack: true }),
        SubgraphKind::Hall => Box::new(Chain { local, stack: false }),
        SubgraphKind::Clique => Box::new(Clique { local }),
        SubgraphKind::Ring => Box::new(Ring { local }),
        SubgraphKind::Singleton => Box::new(Singleton { local }),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing

struct Local {
    sub: SubgraphRef,
    slot_of: BTreeMap<VertexId, usize>,
}

type Slots = Vec<Option<RobotId>>;

impl Local {
    fn new(sub: SubgraphRef) -> Self {
        let slot_of = sub.members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Local { sub, slot_of }
    }

    fn n(&self) -> usize {
        self.sub.members.len()
    }

    fn slot(&self, v: VertexId) -> Result<usize, StructureError> {
        self.slot_of.get(&v).copied().ok_or(StructureError::VertexOutside(v))
    }

    fn slots(&self, arr: &Arrangement) -> Result<Slots, StructureError> {
        let mut out = vec![None; self.n()];
        for (robot, vertex) in arr.iter() {
            match self.slot_of.get(&vertex) {
                Some(&i) => out[i] = Some(robot),
                None => return Err(StructureError::RobotOutside { robot, vertex }),
            }
        }
        Ok(out)
    }

    fn arrangement(&self, slots: &[Option<RobotId>]) -> Arrangement {
        Arrangement::from_pairs(
            slots
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r.map(|r| (r, self.sub.members[i]))),
        )
        .unwrap()
    }

    fn mover(&self, arr: &Arrangement) -> Result<Mover<'_>, StructureError> {
        Ok(Mover {
            members: &self.sub.members,
            slots: self.slots(arr)?,
            steps: Vec::new(),
        })
    }
}

/// Applies slot-level moves and records them as plan steps.
struct Mover<'a> {
    members: &'a [VertexId],
    slots: Slots,
    steps: Vec<PlanStep>,
}

impl Mover<'_> {
    fn n(&self) -> usize {
        self.slots.len()
    }

    fn mv(&mut self, from: usize, to: usize) {
        let r = self.slots[from].expect("moving from an empty slot");
        assert!(self.slots[to].is_none(), "moving onto an occupied slot");
        self.slots[from] = None;
        self.slots[to] = Some(r);
        self.steps.push(PlanStep::new(r, self.members[from], self.members[to]));
    }

    fn find(&self, r: RobotId) -> Option<usize> {
        self.slots.iter().position(|&s| s == Some(r))
    }

    fn free_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(i, _)| i)
    }

    fn occupied(&self) -> Vec<(usize, RobotId)> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.map(|r| (i, r)))
            .collect()
    }

    /// Walks a robot one slot at a time along `path` (adjacent slots).
    fn walk(&mut self, path: impl IntoIterator<Item = usize>) {
        let mut cur = None;
        for s in path {
            if let Some(c) = cur {
                self.mv(c, s);
            }
            cur = Some(s);
        }
    }

    /// Moves robots sitting on the chain `line` (slot list, consecutive
    /// entries adjacent) to `targets`, given as chain indices for the robots
    /// in chain order. Order along the chain is preserved.
    fn rearrange_chain(&mut self, line: &[usize], targets: &[usize]) {
        let current: Vec<usize> = (0..line.len()).filter(|&i| self.slots[line[i]].is_some()).collect();
        assert_eq!(current.len(), targets.len());
        debug_assert!(targets.windows(2).all(|w| w[0] < w[1]));
        // Robots heading towards the start go first, in order; then the rest
        // in reverse order. Neither group ever blocks the other.
        for (t, &x) in current.iter().enumerate() {
            let y = targets[t];
            if y < x {
                self.walk((y..=x).rev().map(|i| line[i]));
            }
        }
        for (t, &x) in current.iter().enumerate().rev() {
            let y = targets[t];
            if y > x {
                self.walk((x..=y).map(|i| line[i]));
            }
        }
    }

    fn finish(self, local: &Local) -> (ConcretePlan, Arrangement) {
        let arr = local.arrangement(&self.slots);
        (ConcretePlan::new(self.steps), arr)
    }
}

fn robots_in_slot_order(slots: &[Option<RobotId>]) -> Vec<RobotId> {
    slots.iter().flatten().copied().collect()
}

fn without(v: &[RobotId], r: RobotId) -> Vec<RobotId> {
    v.iter().copied().filter(|&x| x != r).collect()
}

// ---------------------------------------------------------------------------
// Stacks and halls

/// A chain of vertices in which robots cannot pass one another. A stack is
/// the special case whose only entrance is the head (slot 0); the insertion
/// and exit bounds below specialise correctly to it.
struct Chain {
    local: Local,
    stack: bool,
}

impl Chain {
    fn wrap(&self, order: Vec<RobotId>) -> Configuration {
        if self.stack {
            Configuration::Stack(order)
        } else {
            Configuration::Hall(order)
        }
    }

    fn order<'c>(&self, c: &'c Configuration) -> Option<&'c [RobotId]> {
        match (c, self.stack) {
            (Configuration::Stack(v), true) | (Configuration::Hall(v), false) => Some(v),
            _ => None,
        }
    }

    /// Range of insertion points `j` (robots ahead of the entrant) when
    /// entering at slot `i` with `k` robots inside. In one-based vertex
    /// numbering this is `max(0, k-(n-i)) <= j <= min(i-1, k)`.
    fn insertion_range(n: usize, k: usize, i: usize) -> std::ops::RangeInclusive<usize> {
        let lo = k.saturating_sub(n - 1 - i);
        let hi = i.min(k);
        lo..=hi
    }

    /// Whether the robot at zero-based order index `j` can reach slot `i`:
    /// one-based, `j <= i <= n - (k - j)`.
    fn can_reach(n: usize, k: usize, j: usize, i: usize) -> bool {
        j <= i && i + (k - 1 - j) < n
    }

    fn line(&self) -> Vec<usize> {
        (0..self.local.n()).collect()
    }
}

impl SubgraphMethods for Chain {
    fn subgraph(&self) -> &SubgraphRef {
        &self.local.sub
    }

    fn config_of(&self, arr: &Arrangement) -> Result<Configuration, StructureError> {
        Ok(self.wrap(robots_in_slot_order(&self.local.slots(arr)?)))
    }

    fn enter(&self, c: &Configuration, robot: RobotId, at: VertexId) -> Vec<Configuration> {
        let (Some(order), Ok(i)) = (self.order(c), self.local.slot(at)) else {
            return Vec::new();
        };
        let n = self.local.n();
        let k = order.len();
        if k >= n || order.contains(&robot) {
            return Vec::new();
        }
        let mut out: Vec<Configuration> = Self::insertion_range(n, k, i)
            .map(|j| {
                let mut v = order.to_vec();
                v.insert(j, robot);
                self.wrap(v)
            })
            .collect();
        out.sort();
        out
    }

    fn exit(&self, c: &Configuration, robot: RobotId, via: VertexId) -> Option<Configuration> {
        let order = self.order(c)?;
        let i = self.local.slot(via).ok()?;
        let j = order.iter().position(|&r| r == robot)?;
        Self::can_reach(self.local.n(), order.len(), j, i).then(|| self.wrap(without(order, robot)))
    }

    fn can_terminate(&self, c: &Configuration, goal: &Arrangement) -> bool {
        match (self.order(c), self.local.slots(goal)) {
            (Some(order), Ok(slots)) => robots_in_slot_order(&slots) == order,
            _ => false,
        }
    }

    fn resolve_enter(
        &self,
        arr: &Arrangement,
        robot: RobotId,
        at: VertexId,
        target: &Configuration,
        _next: Option<NextAction<'_>>,
    ) -> Result<(ConcretePlan, Arrangement), StructureError> {
        let i = self.local.slot(at)?;
        let mut m = self.local.mover(arr)?;
        let current = robots_in_slot_order(&m.slots);
        let Some(order) = self.order(target) else {
            return contract(format!("{target} is not a target for this chain"));
        };
        let Some(j) = order.iter().position(|&r| r == robot) else {
            return contract(format!("{target} does not contain entering robot {robot}"));
        };
        if without(order, robot) != current || !Self::insertion_range(m.n(), current.len(), i).contains(&j) {
            return contract(format!("{target} is not reachable by entering at {at}"));
        }
        let xs: Vec<usize> = m.occupied().iter().map(|&(s, _)| s).collect();
        let targets: Vec<usize> = xs
            .iter()
            .enumerate()
            .map(|(t, &x)| if t < j { x.min(i + t - j) } else { x.max(i + 1 + t - j) })
            .collect();
        let line = self.line();
        m.rearrange_chain(&line, &targets);
        Ok(m.finish(&self.local))
    }

    fn resolve_exit(
        &self,
        arr: &Arrangement,
        robot: RobotId,
        via: VertexId,
        target: &Configuration,
    ) -> Result<(ConcretePlan, Arrangement), StructureError> {
        let i = self.local.slot(via)?;
        let mut m = self.local.mover(arr)?;
        let c = self.wrap(robots_in_slot_order(&m.slots));
        if self.exit(&c, robot, via).as_ref() != Some(target) {
            return contract(format!("{robot} cannot leave {c} via {via} into {target}"));
        }
        let xs: Vec<usize> = m.occupied().iter().map(|&(s, _)| s).collect();
        let j = m.occupied().iter().position(|&(_, r)| r == robot).unwrap();
        let targets: Vec<usize> = xs
            .iter()
            .enumerate()
            .map(|(t, &x)| match t.cmp(&j) {
                std::cmp::Ordering::Less => x.min(i + t - j),
                std::cmp::Ordering::Equal => i,
                std::cmp::Ordering::Greater => x.max(i + t - j),
            })
            .collect();
        let line = self.line();
        m.rearrange_chain(&line, &targets);
        Ok(m.finish(&self.local))
    }

    fn resolve_terminate(&self, arr: &Arrangement, goal: &Arrangement) -> Result<ConcretePlan, StructureError> {
        let mut m = self.local.mover(arr)?;
        let goal_slots = self.local.slots(goal)?;
        if robots_in_slot_order(&goal_slots) != robots_in_slot_order(&m.slots) {
            return contract("goal order differs from the current order");
        }
        let targets: Vec<usize> = goal_slots
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_some())
            .map(|(i, _)| i)
            .collect();
        let line = self.line();
        m.rearrange_chain(&line, &targets);
        Ok(ConcretePlan::new(m.steps))
    }
}

// ---------------------------------------------------------------------------
// Cliques

struct Clique {
    local: Local,
}

impl Clique {
    fn sorted(mut v: Vec<RobotId>) -> Vec<RobotId> {
        v.sort_unstable();
        v
    }

    /// Free slot for a displaced robot: its own goal slot if that is free,
    /// otherwise the lowest free slot other than `avoid`.
    fn parking(m: &Mover<'_>, preferred: Option<usize>, avoid: &[usize]) -> Option<usize> {
        if let Some(p) = preferred {
            if m.slots[p].is_none() && !avoid.contains(&p) {
                return Some(p);
            }
        }
        m.free_slots().find(|s| !avoid.contains(s))
    }

    /// Places robots on their goal slots: vacate a goal slot by parking its
    /// occupant elsewhere, then move the owner in. Needs a free slot.
    fn displace_into(m: &mut Mover<'_>, goal: &[Option<RobotId>]) -> Result<(), StructureError> {
        let goal_slot: BTreeMap<RobotId, usize> =
            goal.iter().enumerate().filter_map(|(i, r)| r.map(|r| (r, i))).collect();
        for (g, want) in goal.iter().enumerate() {
            let Some(want) = *want else { continue };
            if m.slots[g] == Some(want) {
                continue;
            }
            if let Some(o) = m.slots[g] {
                let park = Self::parking(m, goal_slot.get(&o).copied(), &[g])
                    .ok_or_else(|| StructureError::Contract("no free vertex to park a robot".into()))?;
                m.mv(g, park);
            }
            let from = m
                .find(want)
                .ok_or_else(|| StructureError::Contract(format!("{want} is not in the clique")))?;
            m.mv(from, g);
        }
        Ok(())
    }
}

impl SubgraphMethods for Clique {
    fn subgraph(&self) -> &SubgraphRef {
        &self.local.sub
    }

    fn config_of(&self, arr: &Arrangement) -> Result<Configuration, StructureError> {
        let slots = self.local.slots(arr)?;
        if slots.iter().all(Option::is_some) {
            Ok(Configuration::CliqueLocked(robots_in_slot_order(&slots)))
        } else {
            Ok(Configuration::CliqueOpen(Self::sorted(robots_in_slot_order(&slots))))
        }
    }

    fn enter(&self, c: &Configuration, robot: RobotId, at: VertexId) -> Vec<Configuration> {
        let (Configuration::CliqueOpen(set), Ok(slot)) = (c, self.local.slot(at)) else {
            return Vec::new();
        };
        let n = self.local.n();
        if set.len() >= n || set.contains(&robot) {
            return Vec::new();
        }
        let mut robots = set.clone();
        robots.push(robot);
        let robots = Self::sorted(robots);
        if robots.len() < n {
            vec![Configuration::CliqueOpen(robots)]
        } else {
            vec![Configuration::CliquePending {
                robots,
                locker: robot,
                slot,
            }]
        }
    }

    fn exit(&self, c: &Configuration, robot: RobotId, via: VertexId) -> Option<Configuration> {
        let i = self.local.slot(via).ok()?;
        let ok = match c {
            Configuration::CliqueOpen(set) => set.contains(&robot),
            Configuration::CliqueLocked(slots) => slots.get(i) == Some(&robot),
            Configuration::CliquePending { robots, locker, slot } => {
                if robot == *locker {
                    i == *slot
                } else {
                    robots.contains(&robot) && i != *slot
                }
            }
            _ => false,
        };
        ok.then(|| Configuration::CliqueOpen(Self::sorted(without(c.robots(), robot))))
    }

    fn can_terminate(&self, c: &Configuration, goal: &Arrangement) -> bool {
        let Ok(goal_slots) = self.local.slots(goal) else {
            return false;
        };
        match c {
            Configuration::CliqueOpen(set) => {
                goal_slots.iter().any(Option::is_none) && Self::sorted(robots_in_slot_order(&goal_slots)) == *set
            }
            Configuration::CliqueLocked(slots) => goal_slots.iter().map(|r| r.as_ref()).eq(slots.iter().map(Some)),
            Configuration::CliquePending { robots, locker, slot } => {
                Self::sorted(robots_in_slot_order(&goal_slots)) == *robots && goal_slots[*slot] == Some(*locker)
            }
            _ => false,
        }
    }

    fn resolve_enter(
        &self,
        arr: &Arrangement,
        robot: RobotId,
        at: VertexId,
        target: &Configuration,
        next: Option<NextAction<'_>>,
    ) -> Result<(ConcretePlan, Arrangement), StructureError> {
        let v = self.local.slot(at)?;
        let mut m = self.local.mover(arr)?;
        let current = self.config_of(arr)?;
        if !self.enter(&current, robot, at).contains(target) {
            return contract(format!(
                "{target} is not reachable by {robot} entering {current} at {at}"
            ));
        }
        let vacate = |m: &mut Mover<'_>| {
            if m.slots[v].is_some() {
                let park = m.free_slots().next().expect("clique has a free vertex");
                m.mv(v, park);
            }
        };
        match target {
            Configuration::CliqueOpen(_) => vacate(&mut m),
            Configuration::CliquePending { .. } => match next {
                Some(NextAction::Exit { robot: e, via }) => {
                    let u = self.local.slot(via)?;
                    vacate(&mut m);
                    if e == robot {
                        if u != v {
                            return contract("the locking robot must leave where it entered");
                        }
                    } else {
                        if u == v {
                            return contract("only the locking robot may leave via its vertex");
                        }
                        let p = m
                            .find(e)
                            .ok_or_else(|| StructureError::Contract(format!("{e} is not in the clique")))?;
                        if p != u {
                            // v is the only free slot: rotate e onto u through it.
                            m.mv(u, v);
                            m.mv(p, u);
                            m.mv(v, p);
                        }
                    }
                }
                Some(NextAction::Terminate { goal }) => {
                    let mut goal_slots = self.local.slots(goal)?;
                    if goal_slots[v] != Some(robot) {
                        return contract("goal does not put the locking robot on its entry vertex");
                    }
                    goal_slots[v] = None;
                    Self::displace_into(&mut m, &goal_slots)?;
                }
                None => return contract("locking entry needs the next action on this clique"),
            },
            _ => unreachable!("enter only yields open or pending cliques"),
        }
        Ok(m.finish(&self.local))
    }

    fn resolve_exit(
        &self,
        arr: &Arrangement,
        robot: RobotId,
        via: VertexId,
        target: &Configuration,
    ) -> Result<(ConcretePlan, Arrangement), StructureError> {
        let u = self.local.slot(via)?;
        let mut m = self.local.mover(arr)?;
        let Some(p) = m.find(robot) else {
            return contract(format!("{robot} is not in the clique"));
        };
        let remaining = Self::sorted(without(&robots_in_slot_order(&m.slots), robot));
        if target != &Configuration::CliqueOpen(remaining) {
            return contract(format!("{target} is not the result of {robot} leaving"));
        }
        if m.free_slots().next().is_none() {
            // Full: the robot must already be in place.
            if p != u {
                return contract(format!("{robot} is locked away from {via}"));
            }
        } else if p != u {
            if m.slots[u].is_some() {
                let park = Self::parking(&m, None, &[u]).unwrap();
                m.mv(u, park);
            }
            m.mv(p, u);
        }
        Ok(m.finish(&self.local))
    }

    fn resolve_terminate(&self, arr: &Arrangement, goal: &Arrangement) -> Result<ConcretePlan, StructureError> {
        let mut m = self.local.mover(arr)?;
        let goal_slots = self.local.slots(goal)?;
        if Self::sorted(robots_in_slot_order(&goal_slots)) != Self::sorted(robots_in_slot_order(&m.slots)) {
            return contract("goal occupants differ from current occupants");
        }
        if m.free_slots().next().is_none() {
            if m.slots != goal_slots {
                return contract("full clique is not in its goal arrangement");
            }
            return Ok(ConcretePlan::default());
        }
        Self::displace_into(&mut m, &goal_slots)?;
        Ok(ConcretePlan::new(m.steps))
    }

    fn admits(&self, c: &Configuration, arr: &Arrangement) -> bool {
        match c {
            Configuration::CliquePending { robots, locker, slot } => self.local.slots(arr).is_ok_and(|s| {
                s.iter().all(Option::is_some)
                    && Self::sorted(robots_in_slot_order(&s)) == *robots
                    && s[*slot] == Some(*locker)
            }),
            _ => self.config_of(arr).is_ok_and(|d| &d == c),
        }
    }
}

// ---------------------------------------------------------------------------
// Rings

struct Ring {
    local: Local,
}

/// Rotation of a cyclic sequence starting at its smallest element.
fn canonical_cycle(mut v: Vec<RobotId>) -> Vec<RobotId> {
    if let Some((pos, _)) = v.iter().enumerate().min_by_key(|&(_, r)| *r) {
        v.rotate_left(pos);
    }
    v
}

impl Ring {
    fn cyclic_of(&self, slots: &[Option<RobotId>]) -> Configuration {
        if slots.iter().all(Option::is_some) {
            Configuration::RingLocked(robots_in_slot_order(slots))
        } else {
            Configuration::RingOpen(canonical_cycle(robots_in_slot_order(slots)))
        }
    }

    /// Moves `robot` to slot `goal` around the ring, pushing any robots in
    /// the way ahead of it. Cyclic order is preserved; needs a free slot.
    fn move_to(m: &mut Mover<'_>, robot: RobotId, goal: usize) {
        let n = m.n();
        let mut p = m.find(robot).expect("robot on ring");
        let forward = (goal + n - p) % n;
        let step = |s: usize, fwd: bool| if fwd { (s + 1) % n } else { (s + n - 1) % n };
        let fwd = forward <= n - forward;
        while p != goal {
            let next = step(p, fwd);
            if m.slots[next].is_some() {
                let mut free = next;
                while m.slots[free].is_some() {
                    free = step(free, fwd);
                    assert_ne!(free, p, "ring is full");
                }
                // Shift the blocking run one slot ahead, front robot first.
                while free != next {
                    let behind = step(free, !fwd);
                    m.mv(behind, free);
                    free = behind;
                }
            }
            m.mv(p, next);
            p = next;
        }
    }

    /// Brings the ring into `target` (same robots, same cyclic order). Fixes
    /// one robot first, then treats the rest of the ring as a chain.
    fn rearrange(m: &mut Mover<'_>, target: &[Option<RobotId>]) {
        let n = m.n();
        let Some((g0, anchor)) = target.iter().enumerate().find_map(|(i, r)| r.map(|r| (i, r))) else {
            return;
        };
        Self::move_to(m, anchor, g0);
        let line: Vec<usize> = (1..n).map(|d| (g0 + d) % n).collect();
        let targets: Vec<usize> = line
            .iter()
            .enumerate()
            .filter(|(_, &s)| target[s].is_some())
            .map(|(i, _)| i)
            .collect();
        m.rearrange_chain(&line, &targets);
    }
}

impl SubgraphMethods for Ring {
    fn subgraph(&self) -> &SubgraphRef {
        &self.local.sub
    }

    fn config_of(&self, arr: &Arrangement) -> Result<Configuration, StructureError> {
        Ok(self.cyclic_of(&self.local.slots(arr)?))
    }

    fn enter(&self, c: &Configuration, robot: RobotId, at: VertexId) -> Vec<Configuration> {
        let (Configuration::RingOpen(seq), Ok(v)) = (c, self.local.slot(at)) else {
            return Vec::new();
        };
        let n = self.local.n();
        let k = seq.len();
        if k >= n || seq.contains(&robot) {
            return Vec::new();
        }
        if k == 0 {
            return vec![Configuration::RingOpen(vec![robot])];
        }
        let mut out: Vec<Configuration> = (0..k)
            .map(|gap| {
                if k + 1 < n {
                    let mut s = seq.clone();
                    s.insert(gap + 1, robot);
                    Configuration::RingOpen(canonical_cycle(s))
                } else {
                    // Locks: the entrant's position fixes everyone else's.
                    let mut slots = vec![robot; n];
                    for t in 0..k {
                        slots[(v + 1 + t) % n] = seq[(gap + 1 + t) % k];
                    }
                    Configuration::RingLocked(slots)
                }
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn exit(&self, c: &Configuration, robot: RobotId, via: VertexId) -> Option<Configuration> {
        let i = self.local.slot(via).ok()?;
        match c {
            Configuration::RingOpen(seq) if seq.contains(&robot) => {
                Some(Configuration::RingOpen(canonical_cycle(without(seq, robot))))
            }
            Configuration::RingLocked(slots) if slots.get(i) == Some(&robot) => {
                Some(Configuration::RingOpen(canonical_cycle(without(slots, robot))))
            }
            _ => None,
        }
    }

    fn can_terminate(&self, c: &Configuration, goal: &Arrangement) -> bool {
        match (c, self.local.slots(goal)) {
            (Configuration::RingOpen(_) | Configuration::RingLocked(_), Ok(slots)) => &self.cyclic_of(&slots) == c,
            _ => false,
        }
    }

    fn resolve_enter(
        &self,
        arr: &Arrangement,
        robot: RobotId,
        at: VertexId,
        target: &Configuration,
        _next: Option<NextAction<'_>>,
    ) -> Result<(ConcretePlan, Arrangement), StructureError> {
        let v = self.local.slot(at)?;
        let n = self.local.n();
        let mut m = self.local.mover(arr)?;
        let current = self.cyclic_of(&m.slots);
        if !self.enter(&current, robot, at).contains(target) {
            return contract(format!(
                "{target} is not reachable by {robot} entering {current} at {at}"
            ));
        }
        let layout: Slots = match target {
            Configuration::RingLocked(slots) => {
                let mut s: Slots = slots.iter().copied().map(Some).collect();
                s[v] = None;
                s
            }
            Configuration::RingOpen(seq) if seq.len() <= 2 => {
                // Any placement with the entry vertex free will do.
                if let Some(occupant) = m.slots[v] {
                    // At most one robot inside, so a neighbour is free.
                    Self::move_to(&mut m, occupant, (v + 1) % n);
                }
                return Ok(m.finish(&self.local));
            }
            Configuration::RingOpen(seq) => {
                // Pack the robots just after the entry vertex, starting with
                // the entrant's successor.
                let at_r = seq.iter().position(|&r| r == robot).unwrap();
                let k = seq.len() - 1;
                let mut s: Slots = vec![None; n];
                for t in 0..k {
                    s[(v + 1 + t) % n] = Some(seq[(at_r + 1 + t) % seq.len()]);
                }
                s
            }
            _ => unreachable!("enter only yields ring configurations"),
        };
        Self::rearrange(&mut m, &layout);
        Ok(m.finish(&self.local))
    }

    fn resolve_exit(
        &self,
        arr: &Arrangement,
        robot: RobotId,
        via: VertexId,
        target: &Configuration,
    ) -> Result<(ConcretePlan, Arrangement), StructureError> {
        let u = self.local.slot(via)?;
        let mut m = self.local.mover(arr)?;
        let current = self.cyclic_of(&m.slots);
        if self.exit(&current, robot, via).as_ref() != Some(target) {
            return contract(format!("{robot} cannot leave {current} via {via} into {target}"));
        }
        if !current.is_locked() {
            Self::move_to(&mut m, robot, u);
        }
        Ok(m.finish(&self.local))
    }

    fn resolve_terminate(&self, arr: &Arrangement, goal: &Arrangement) -> Result<ConcretePlan, StructureError> {
        let mut m = self.local.mover(arr)?;
        let goal_slots = self.local.slots(goal)?;
        let current = self.cyclic_of(&m.slots);
        if !self.can_terminate(&current, goal) {
            return contract(format!("{current} cannot terminate in {goal}"));
        }
        if !current.is_locked() {
            Self::rearrange(&mut m, &goal_slots);
        }
        Ok(ConcretePlan::new(m.steps))
    }
}

// ---------------------------------------------------------------------------
// Singletons

struct Singleton {
    local: Local,
}

impl SubgraphMethods for Singleton {
    fn subgraph(&self) -> &SubgraphRef {
        &self.local.sub
    }

    fn config_of(&self, arr: &Arrangement) -> Result<Configuration, StructureError> {
        Ok(Configuration::Singleton(self.local.slots(arr)?[0]))
    }

    fn enter(&self, c: &Configuration, robot: RobotId, at: VertexId) -> Vec<Configuration> {
        match c {
            Configuration::Singleton(None) if self.local.slot(at).is_ok() => {
                vec![Configuration::Singleton(Some(robot))]
            }
            _ => Vec::new(),
        }
    }

    fn exit(&self, c: &Configuration, robot: RobotId, via: VertexId) -> Option<Configuration> {
        (c == &Configuration::Singleton(Some(robot)) && self.local.slot(via).is_ok())
            .then_some(Configuration::Singleton(None))
    }

    fn can_terminate(&self, c: &Configuration, goal: &Arrangement) -> bool {
        self.config_of(goal).is_ok_and(|g| &g == c)
    }

    fn resolve_enter(
        &self,
        arr: &Arrangement,
        robot: RobotId,
        at: VertexId,
        target: &Configuration,
        _next: Option<NextAction<'_>>,
    ) -> Result<(ConcretePlan, Arrangement), StructureError> {
        self.local.slot(at)?;
        if !arr.is_empty() || target != &Configuration::Singleton(Some(robot)) {
            return contract("singleton is occupied");
        }
        Ok((ConcretePlan::default(), arr.clone()))
    }

    fn resolve_exit(
        &self,
        arr: &Arrangement,
        robot: RobotId,
        via: VertexId,
        _target: &Configuration,
    ) -> Result<(ConcretePlan, Arrangement), StructureError> {
        if arr.at(via) != Some(robot) {
            return contract(format!("{robot} is not on {via}"));
        }
        Ok((ConcretePlan::default(), arr.clone()))
    }

    fn resolve_terminate(&self, arr: &Arrangement, goal: &Arrangement) -> Result<ConcretePlan, StructureError> {
        if arr != goal {
            return contract("singleton occupant differs from goal");
        }
        Ok(ConcretePlan::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plans::validate_plan;
    use crate::roadmap::RoadMap;

    fn r(i: u32) -> RobotId {
        RobotId(i)
    }

    fn rs(ids: &[u32]) -> Vec<RobotId> {
        ids.iter().map(|&i| RobotId(i)).collect()
    }

    fn arr(pairs: &[(u32, VertexId)]) -> Arrangement {
        Arrangement::from_pairs(pairs.iter().map(|&(r, v)| (RobotId(r), v))).unwrap()
    }

    /// A map that is exactly one structure on vertices 0..n.
    fn lone(kind: SubgraphKind, n: usize) -> (RoadMap, Box<dyn SubgraphMethods>) {
        let mut pairs = Vec::new();
        match kind {
            SubgraphKind::Stack | SubgraphKind::Hall => pairs.extend((1..n).map(|i| (i - 1, i))),
            SubgraphKind::Ring => pairs.extend((0..n).map(|i| (i, (i + 1) % n))),
            SubgraphKind::Clique => pairs.extend((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))),
            SubgraphKind::Singleton => {}
        }
        let map = RoadMap::undirected(n, &pairs).unwrap();
        let s = structure_for(&SubgraphRef::new(0, kind, (0..n).collect()));
        (map, s)
    }

    #[test]
    fn hall_config_reads_positions() {
        let (_, hall) = lone(SubgraphKind::Hall, 6);
        // r1 on the second vertex, r2 on the fifth.
        assert_eq!(
            hall.config_of(&arr(&[(1, 1), (2, 4)])).unwrap(),
            Configuration::Hall(rs(&[1, 2]))
        );
    }

    #[test]
    fn hall_entry_insertion_points() {
        // n = 6, k = 3 robots, entering at the third vertex: only j = 0, 1, 2.
        let (_, hall) = lone(SubgraphKind::Hall, 6);
        let c = Configuration::Hall(rs(&[1, 2, 3]));
        let got = hall.enter(&c, r(4), 2);
        let mut want = vec![
            Configuration::Hall(rs(&[4, 1, 2, 3])),
            Configuration::Hall(rs(&[1, 4, 2, 3])),
            Configuration::Hall(rs(&[1, 2, 4, 3])),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn hall_exit_bounds() {
        let (_, hall) = lone(SubgraphKind::Hall, 6);
        let c = Configuration::Hall(rs(&[1, 2, 3]));
        // j = 3 (robot 3), i = 2: 3 <= 2 fails.
        assert_eq!(hall.exit(&c, r(3), 1), None);
        // j = 1, i = 4: 1 <= 4 <= 4.
        assert_eq!(hall.exit(&c, r(1), 3), Some(Configuration::Hall(rs(&[2, 3]))));
        // j = 1, i = 5: 5 <= 4 fails.
        assert_eq!(hall.exit(&c, r(1), 4), None);
    }

    #[test]
    fn full_stack_refuses_entry() {
        let (_, stack) = lone(SubgraphKind::Stack, 3);
        let c = Configuration::Stack(rs(&[1, 2, 3]));
        assert!(stack.enter(&c, r(4), 0).is_empty());
        assert_eq!(
            stack.enter(&Configuration::Stack(rs(&[1])), r(4), 0),
            vec![Configuration::Stack(rs(&[4, 1]))]
        );
        assert_eq!(stack.exit(&c, r(2), 0), None);
        assert_eq!(stack.exit(&c, r(1), 0), Some(Configuration::Stack(rs(&[2, 3]))));
    }

    #[test]
    fn clique_entry_and_lock() {
        let (_, clique) = lone(SubgraphKind::Clique, 4);
        let two = Configuration::CliqueOpen(rs(&[1, 2]));
        assert_eq!(
            clique.enter(&two, r(3), 0),
            vec![Configuration::CliqueOpen(rs(&[1, 2, 3]))]
        );
        let three = Configuration::CliqueOpen(rs(&[1, 2, 3]));
        assert_eq!(
            clique.enter(&three, r(4), 2),
            vec![Configuration::CliquePending {
                robots: rs(&[1, 2, 3, 4]),
                locker: r(4),
                slot: 2
            }]
        );
    }

    #[test]
    fn clique_exit_rules() {
        let (_, clique) = lone(SubgraphKind::Clique, 3);
        let open = Configuration::CliqueOpen(rs(&[1, 2]));
        for v in 0..3 {
            assert_eq!(clique.exit(&open, r(2), v), Some(Configuration::CliqueOpen(rs(&[1]))));
        }
        let locked = Configuration::CliqueLocked(rs(&[3, 1, 2]));
        assert!(clique.exit(&locked, r(1), 1).is_some());
        assert!(clique.exit(&locked, r(1), 0).is_none());
        let pending = Configuration::CliquePending {
            robots: rs(&[1, 2, 3]),
            locker: r(3),
            slot: 0,
        };
        assert!(clique.exit(&pending, r(3), 0).is_some());
        assert!(clique.exit(&pending, r(3), 1).is_none());
        assert!(clique.exit(&pending, r(1), 0).is_none());
        assert!(clique.exit(&pending, r(1), 2).is_some());
    }

    #[test]
    fn full_ring_is_locked() {
        let (_, ring) = lone(SubgraphKind::Ring, 3);
        let a = arr(&[(1, 0), (2, 1), (3, 2)]);
        assert_eq!(ring.config_of(&a).unwrap(), Configuration::RingLocked(rs(&[1, 2, 3])));
        let b = arr(&[(3, 0), (1, 1), (2, 2)]);
        assert_ne!(ring.config_of(&a).unwrap(), ring.config_of(&b).unwrap());
    }

    #[test]
    fn empty_clique_config() {
        let (_, clique) = lone(SubgraphKind::Clique, 4);
        assert_eq!(
            clique.config_of(&Arrangement::new()).unwrap(),
            Configuration::CliqueOpen(vec![])
        );
    }

    #[test]
    fn ring_termination_up_to_rotation() {
        let (_, ring) = lone(SubgraphKind::Ring, 5);
        let c = Configuration::RingOpen(rs(&[1, 2, 3]));
        // Going around the ring: r3, r1, r2.
        assert!(ring.can_terminate(&c, &arr(&[(3, 0), (1, 2), (2, 3)])));
        // r2, r1, r3 is the mirror order.
        assert!(!ring.can_terminate(&c, &arr(&[(2, 0), (1, 2), (3, 3)])));
        assert!(ring.can_terminate(&Configuration::RingOpen(vec![]), &Arrangement::new()));
    }

    #[test]
    fn ring_entry_counts() {
        let (_, ring) = lone(SubgraphKind::Ring, 6);
        assert_eq!(ring.enter(&Configuration::RingOpen(vec![]), r(9), 0).len(), 1);
        assert_eq!(ring.enter(&Configuration::RingOpen(rs(&[1, 2, 3])), r(9), 0).len(), 3);
        let (_, ring4) = lone(SubgraphKind::Ring, 4);
        let locked = ring4.enter(&Configuration::RingOpen(rs(&[1, 2, 3])), r(9), 2);
        assert_eq!(locked.len(), 3);
        assert!(locked
            .iter()
            .all(|c| matches!(c, Configuration::RingLocked(s) if s[2] == r(9))));
    }

    #[test]
    fn textual_rendering() {
        assert_eq!(Configuration::Hall(rs(&[1, 2])).to_string(), "hall:[r1,r2]");
        assert_eq!(
            Configuration::CliquePending {
                robots: rs(&[1, 2]),
                locker: r(2),
                slot: 1
            }
            .to_string(),
            "clique*:{r1,r2}|r2@1"
        );
        assert_eq!(Configuration::Singleton(None).to_string(), "single:-");
    }

    #[test]
    fn stack_exit_walks_to_head() {
        let (map, stack) = lone(SubgraphKind::Stack, 6);
        let a = arr(&[(1, 3), (2, 5)]);
        let (plan, after) = stack
            .resolve_exit(&a, r(1), 0, &Configuration::Stack(rs(&[2])))
            .unwrap();
        assert_eq!(plan.len(), 3);
        assert!(plan.len() <= 6);
        assert_eq!(after, arr(&[(1, 0), (2, 5)]));
        validate_plan(&map, &a, &after, &plan).unwrap();
    }

    #[test]
    fn clique_lock_premoves_exiting_robot() {
        let (map, clique) = lone(SubgraphKind::Clique, 4);
        // r1, r2, r3 inside; r9 about to enter at vertex 3 and lock it.
        let a = arr(&[(1, 0), (2, 1), (3, 3)]);
        let c = clique.config_of(&a).unwrap();
        let target = clique.enter(&c, r(9), 3).pop().unwrap();
        let next = NextAction::Exit { robot: r(1), via: 2 };
        let (plan, before) = clique.resolve_enter(&a, r(9), 3, &target, Some(next)).unwrap();
        validate_plan(&map, &a, &before, &plan).unwrap();
        assert!(before.is_free(3));
        assert_eq!(before.at(2), Some(r(1)));
    }

    #[test]
    fn clique_lock_arranges_for_termination() {
        let (map, clique) = lone(SubgraphKind::Clique, 3);
        let a = arr(&[(1, 0), (2, 1)]);
        let c = clique.config_of(&a).unwrap();
        let target = clique.enter(&c, r(9), 0).pop().unwrap();
        let goal = arr(&[(9, 0), (2, 1), (1, 2)]);
        assert!(clique.can_terminate(&target, &goal));
        let (plan, before) = clique
            .resolve_enter(&a, r(9), 0, &target, Some(NextAction::Terminate { goal: &goal }))
            .unwrap();
        validate_plan(&map, &a, &before, &plan).unwrap();
        assert_eq!(before, arr(&[(2, 1), (1, 2)]));
    }

    #[test]
    fn hall_shuffle_bounded_by_nk() {
        let (map, hall) = lone(SubgraphKind::Hall, 8);
        // Three robots crowded at the far end must all move to let r9 in
        // at the near end, ahead of all of them.
        let a = arr(&[(1, 5), (2, 6), (3, 7)]);
        let c = hall.config_of(&a).unwrap();
        let target = Configuration::Hall(rs(&[1, 2, 3, 9]));
        assert!(hall.enter(&c, r(9), 7).contains(&target));
        let (plan, before) = hall.resolve_enter(&a, r(9), 7, &target, None).unwrap();
        validate_plan(&map, &a, &before, &plan).unwrap();
        assert!(plan.len() <= 8 * 3);
        assert!(before.is_free(7));
        // Then walk r1 from the far end to the near exit: worst case.
        let goal = arr(&[(1, 0), (2, 1), (3, 2)]);
        let p = hall.resolve_terminate(&a, &goal).unwrap();
        validate_plan(&map, &a, &goal, &p).unwrap();
        assert_eq!(p.len(), 15);
        assert!(p.len() <= 8 * 3);
    }

    #[test]
    fn resolvers_reject_unoffered_targets() {
        let (_, hall) = lone(SubgraphKind::Hall, 4);
        let a = arr(&[(1, 0)]);
        let bogus = Configuration::Hall(rs(&[2, 1, 3]));
        assert!(matches!(
            hall.resolve_enter(&a, r(2), 1, &bogus, None),
            Err(StructureError::Contract(_))
        ));
        assert!(matches!(
            hall.config_of(&arr(&[(1, 9)])),
            Err(StructureError::RobotOutside { .. })
        ));
    }

    #[test]
    fn ring_terminate_rotates_then_shuffles() {
        let (map, ring) = lone(SubgraphKind::Ring, 6);
        let a = arr(&[(1, 0), (2, 1), (3, 2)]);
        let goal = arr(&[(3, 0), (1, 2), (2, 4)]);
        let c = ring.config_of(&a).unwrap();
        assert!(ring.can_terminate(&c, &goal));
        let p = ring.resolve_terminate(&a, &goal).unwrap();
        validate_plan(&map, &a, &goal, &p).unwrap();
    }
}
