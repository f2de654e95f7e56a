//! Brute-force ground truth.
//!
//! Everything here works on raw vertex/robot tuples and exhaustive
//! enumeration. Nothing is borrowed from the structure calculus or the
//! planners, so agreement between the two is meaningful.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::plans::{Arrangement, ConcretePlan, PlanStep, RobotId};
use crate::roadmap::{Partition, RoadMap, SubgraphKind, VertexId};

pub const MAX_COMPOSITE_VERTICES: usize = 12;
pub const MAX_COMPOSITE_ROBOTS: usize = 4;
pub const MAX_CLASS_VERTICES: usize = 6;
/// Upper bound on the number of composite states `abstract_enumerate` and
/// `composite_enumerate` will walk.
pub const MAX_ENUMERATED_STATES: u64 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
    #[error("start and goal hold different robots")]
    RobotMismatch,
    #[error("robot {robot} is placed off the map at {vertex}")]
    OffMap { robot: RobotId, vertex: VertexId },
}

/// Composite state: vertex of each robot, robots in ascending id order.
type State = Vec<VertexId>;

fn falling(n: usize, k: usize) -> u64 {
    (0..k).map(|i| (n - i) as u64).product()
}

fn split(a: &Arrangement) -> (Vec<RobotId>, State) {
    a.iter().unzip()
}

fn check_on_map(map: &RoadMap, a: &Arrangement) -> Result<(), OracleError> {
    for (robot, vertex) in a.iter() {
        if vertex >= map.vertex_count() {
            return Err(OracleError::OffMap { robot, vertex });
        }
    }
    Ok(())
}

/// Every collision-free single move out of `s`, as (robot index, to).
fn moves<'a>(map: &'a RoadMap, s: &'a State) -> impl Iterator<Item = (usize, VertexId)> + 'a {
    s.iter().enumerate().flat_map(move |(i, &u)| {
        map.successors(u)
            .iter()
            .copied()
            .filter(move |v| !s.contains(v))
            .map(move |v| (i, v))
    })
}

/// Shortest concrete plan by breadth-first search over the full composite
/// space, or `None` when the reachable space holds no goal state.
pub fn composite_solve(
    map: &RoadMap,
    start: &Arrangement,
    goal: &Arrangement,
) -> Result<Option<ConcretePlan>, OracleError> {
    let n = map.vertex_count();
    if n > MAX_COMPOSITE_VERTICES || start.len() > MAX_COMPOSITE_ROBOTS {
        return Err(OracleError::TooLarge(format!(
            "{n} vertices, {} robots (limits {MAX_COMPOSITE_VERTICES}, {MAX_COMPOSITE_ROBOTS})",
            start.len()
        )));
    }
    check_on_map(map, start)?;
    check_on_map(map, goal)?;
    let (robots, s0) = split(start);
    let (goal_robots, target) = split(goal);
    if robots != goal_robots {
        return Err(OracleError::RobotMismatch);
    }
    let mut parent: HashMap<State, Option<(State, usize)>> = HashMap::new();
    parent.insert(s0.clone(), None);
    let mut queue = VecDeque::from([s0]);
    while let Some(s) = queue.pop_front() {
        if s == target {
            let mut steps = Vec::new();
            let mut cur = s;
            while let Some(Some((prev, i))) = parent.get(&cur) {
                steps.push(PlanStep::new(robots[*i], prev[*i], cur[*i]));
                cur = prev.clone();
            }
            steps.reverse();
            return Ok(Some(ConcretePlan::new(steps)));
        }
        for (i, v) in moves(map, &s) {
            let mut t = s.clone();
            t[i] = v;
            if !parent.contains_key(&t) {
                parent.insert(t.clone(), Some((s.clone(), i)));
                queue.push_back(t);
            }
        }
    }
    Ok(None)
}

/// Every injective placement of `k` labelled robots on `n` vertices.
fn placements(n: usize, k: usize) -> Vec<State> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(n: usize, k: usize, cur: &mut Vec<VertexId>, out: &mut Vec<State>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    go(n, k, &mut cur, &mut out);
    out
}

fn guard_enumeration(n: usize, k: usize) -> Result<(), OracleError> {
    if k > n {
        return Err(OracleError::TooLarge(format!("{k} robots on {n} vertices")));
    }
    let states = falling(n, k);
    if states > MAX_ENUMERATED_STATES {
        return Err(OracleError::TooLarge(format!("{states} composite states")));
    }
    Ok(())
}

/// Counts states and transitions of the composite graph for `k` robots by
/// enumeration. A transition is an unordered pair of states one move apart.
pub fn composite_enumerate(map: &RoadMap, k: usize) -> Result<(u64, u64), OracleError> {
    let n = map.vertex_count();
    guard_enumeration(n, k)?;
    let all = placements(n, k);
    let mut links: HashSet<(State, State)> = HashSet::new();
    for s in &all {
        for (i, v) in moves(map, s) {
            let mut t = s.clone();
            t[i] = v;
            let pair = if *s < t { (s.clone(), t) } else { (t, s.clone()) };
            links.insert(pair);
        }
    }
    Ok((all.len() as u64, links.len() as u64))
}

/// Intra-subgraph adjacency for a structure kind on local slots `0..n`.
fn internal_arcs(kind: SubgraphKind, n: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    let mut link = |a: usize, b: usize| {
        if a != b && !adj[a].contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    };
    match kind {
        SubgraphKind::Stack | SubgraphKind::Hall => (1..n).for_each(|i| link(i - 1, i)),
        SubgraphKind::Ring => (0..n).for_each(|i| link(i, (i + 1) % n)),
        SubgraphKind::Clique => (0..n).for_each(|a| (0..n).for_each(|b| link(a, b))),
        SubgraphKind::Singleton => {}
    }
    adj
}

/// Local placement: slot index to robot number (1-based), 0 for empty.
pub type Slots = Vec<u32>;

/// Arrangements of a lone structure grouped into mutual-reachability classes.
#[derive(Clone, Debug)]
pub struct SubgraphClasses {
    pub kind: SubgraphKind,
    pub n: usize,
    pub robots: u32,
    /// Every placement of any subset of robots `1..=robots`.
    pub arrangements: Vec<Slots>,
    /// Class index of each arrangement.
    pub class_of: Vec<usize>,
    pub class_count: usize,
    index: HashMap<Slots, usize>,
    by_class: Vec<Vec<usize>>,
}

impl SubgraphClasses {
    pub fn members(&self, class: usize) -> impl Iterator<Item = &Slots> + '_ {
        self.by_class[class].iter().map(|&i| &self.arrangements[i])
    }

    /// Indices into `arrangements` of the members of `class`.
    pub fn member_indices(&self, class: usize) -> &[usize] {
        &self.by_class[class]
    }

    pub fn class_of_slots(&self, s: &Slots) -> Option<usize> {
        self.index.get(s).map(|&i| self.class_of[i])
    }

    /// Robot numbers present in a class (all members share them).
    pub fn robots_in(&self, class: usize) -> BTreeSet<u32> {
        self.members(class)
            .next()
            .map(|a| a.iter().copied().filter(|&r| r != 0).collect())
            .unwrap_or_default()
    }

    /// Classes reached by robot `r` entering at `slot`, applied to every
    /// member of `class` with that slot free.
    pub fn enter(&self, class: usize, r: u32, slot: usize) -> BTreeSet<usize> {
        self.members(class)
            .filter(|a| a[slot] == 0 && !a.contains(&r))
            .filter_map(|a| {
                let mut b = a.clone();
                b[slot] = r;
                self.class_of_slots(&b)
            })
            .collect()
    }

    /// Classes left behind by robot `r` leaving from `slot`, over every
    /// member of `class` holding `r` there.
    pub fn exit(&self, class: usize, r: u32, slot: usize) -> BTreeSet<usize> {
        self.members(class)
            .filter(|a| a[slot] == r)
            .filter_map(|a| {
                let mut b = a.clone();
                b[slot] = 0;
                self.class_of_slots(&b)
            })
            .collect()
    }
}

/// Enumerates every arrangement of up to `robots` named robots in a lone
/// structure of `n` vertices and groups them by mutual reachability using
/// the strongly connected components of the move graph.
pub fn subgraph_classes(kind: SubgraphKind, n: usize, robots: u32) -> Result<SubgraphClasses, OracleError> {
    if n > MAX_CLASS_VERTICES || robots as usize > n.max(1) + 1 {
        return Err(OracleError::TooLarge(format!("{kind} of {n} with {robots} robots")));
    }
    let adj = internal_arcs(kind, n);
    let mut arrangements: Vec<Slots> = Vec::new();
    fn fill(i: usize, n: usize, robots: u32, cur: &mut Slots, out: &mut Vec<Slots>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for r in 0..=robots {
            if r == 0 || !cur[..i].contains(&r) {
                cur[i] = r;
                fill(i + 1, n, robots, cur, out);
            }
        }
        cur[i] = 0;
    }
    fill(0, n, robots, &mut vec![0; n], &mut arrangements);
    let index: HashMap<Slots, usize> = arrangements.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
    let mut g = DiGraph::<(), ()>::with_capacity(arrangements.len(), 0);
    let nodes: Vec<_> = arrangements.iter().map(|_| g.add_node(())).collect();
    for (i, a) in arrangements.iter().enumerate() {
        for (u, &r) in a.iter().enumerate() {
            if r == 0 {
                continue;
            }
            for &v in &adj[u] {
                if a[v] == 0 {
                    let mut b = a.clone();
                    b[u] = 0;
                    b[v] = r;
                    g.add_edge(nodes[i], nodes[index[&b]], ());
                }
            }
        }
    }
    let mut class_of = vec![0; arrangements.len()];
    let sccs = tarjan_scc(&g);
    // Number classes by their smallest arrangement index for stable ids.
    let mut ordered: Vec<Vec<usize>> = sccs
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    ordered.sort_by_key(|c| c[0]);
    for (id, comp) in ordered.iter().enumerate() {
        for &i in comp {
            class_of[i] = id;
        }
    }
    Ok(SubgraphClasses {
        kind,
        n,
        robots,
        class_count: ordered.len(),
        by_class: ordered,
        arrangements,
        class_of,
        index,
    })
}

/// Counts abstract states and transitions for `k` labelled robots.
///
/// Each composite state is mapped to its tuple of per-subgraph classes,
/// where classes come from mutual reachability using only arcs inside the
/// subgraph. A transition is a distinct triple (tuple, crossing move,
/// tuple) realised by at least one composite state.
pub fn abstract_enumerate(map: &RoadMap, partition: &Partition, k: usize) -> Result<(u64, u64), OracleError> {
    let n = map.vertex_count();
    guard_enumeration(n, k)?;
    let owner: Vec<usize> = (0..n)
        .map(|v| {
            partition
                .subgraph_of(v)
                .ok_or_else(|| OracleError::TooLarge(format!("vertex {v} outside the partition")))
        })
        .collect::<Result<_, _>>()?;
    let m = partition.len();
    let all = placements(n, k);
    // Per-subgraph local states: the positions of the robots inside, with
    // robots outside marked as absent.
    let local =
        |s: &State, x: usize| -> Vec<Option<VertexId>> { s.iter().map(|&v| (owner[v] == x).then_some(v)).collect() };
    let mut class_ids: Vec<HashMap<Vec<Option<VertexId>>, usize>> = Vec::with_capacity(m);
    for x in 0..m {
        let mut locals: Vec<Vec<Option<VertexId>>> = all
            .iter()
            .map(|s| local(s, x))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        locals.sort();
        let idx: HashMap<_, _> = locals.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let mut g = DiGraph::<(), ()>::with_capacity(locals.len(), 0);
        let nodes: Vec<_> = locals.iter().map(|_| g.add_node(())).collect();
        for (i, l) in locals.iter().enumerate() {
            for (r, pos) in l.iter().enumerate() {
                let Some(u) = *pos else { continue };
                for &v in map.successors(u) {
                    if owner[v] == x && !l.contains(&Some(v)) {
                        let mut t = l.clone();
                        t[r] = Some(v);
                        g.add_edge(nodes[i], nodes[idx[&t]], ());
                    }
                }
            }
        }
        let mut ids = HashMap::new();
        for (cid, comp) in tarjan_scc(&g).into_iter().enumerate() {
            for node in comp {
                ids.insert(locals[node.index()].clone(), cid);
            }
        }
        class_ids.push(ids);
    }
    let tuple = |s: &State| -> Vec<usize> { (0..m).map(|x| class_ids[x][&local(s, x)]).collect() };
    let mut states: BTreeSet<Vec<usize>> = BTreeSet::new();
    // (from tuple, robot, from vertex, to vertex, to tuple)
    type Transition = (Vec<usize>, usize, VertexId, VertexId, Vec<usize>);
    let mut transitions: BTreeSet<Transition> = BTreeSet::new();
    for s in &all {
        let gamma = tuple(s);
        for (i, v) in moves(map, s) {
            let u = s[i];
            if owner[u] != owner[v] {
                let mut t = s.clone();
                t[i] = v;
                transitions.insert((gamma.clone(), i, u, v, tuple(&t)));
            }
        }
        states.insert(gamma);
    }
    Ok((states.len() as u64, transitions.len() as u64))
}

/// Per-robot set of subgraphs visited, in order, by a concrete plan: the
/// subgraph transitions it contains. Used to lift oracle plans to the
/// abstract level.
pub fn crossing_steps(partition: &Partition, plan: &ConcretePlan) -> Vec<(usize, PlanStep)> {
    plan.steps
        .iter()
        .enumerate()
        .filter(|(_, s)| partition.subgraph_of(s.from) != partition.subgraph_of(s.to))
        .map(|(i, s)| (i, *s))
        .collect()
}

/// Robots by id with their composite positions; handy for tests that build
/// oracle inputs by hand.
pub fn arrangement_of(pairs: &[(u32, VertexId)]) -> Arrangement {
    Arrangement::from_pairs(pairs.iter().map(|&(r, v)| (RobotId(r), v))).expect("distinct placements")
}

/// Histogram of class sizes, keyed by robot count.
pub fn classes_by_robot_count(c: &SubgraphClasses) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for class in 0..c.class_count {
        *out.entry(c.robots_in(class).len()).or_insert(0) += 1;
    }
    out
}
