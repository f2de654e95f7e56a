//! Checks shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgplan::genbench::{gen_graph, gen_problem};
use sgplan::oracle::{composite_solve, subgraph_classes, Slots, SubgraphClasses};
use sgplan::planners::{plan_subgraph, Abstraction, PlannerConfig};
use sgplan::plans::{validate_plan, Arrangement, Problem, RobotId};
use sgplan::roadmap::{Edge, Partition, RoadMap, SubgraphKind, SubgraphRef};
use sgplan::structures::{structure_for, Configuration, NextAction, SubgraphMethods};
use sgplan::{auto_partition, validate_partition};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn load(map: &str, part: Option<&str>, problem: &str) -> (RoadMap, Option<Partition>, Problem) {
    let m = RoadMap::load(data(map)).unwrap();
    let p = part.map(|p| Partition::load(data(p), m.vertex_count()).unwrap());
    let pr = Problem::load(data(problem)).unwrap();
    (m, p, pr)
}

pub fn to_arrangement(s: &Slots) -> Arrangement {
    Arrangement::from_pairs(
        s.iter()
            .enumerate()
            .filter(|(_, &r)| r != 0)
            .map(|(v, &r)| (RobotId(r), v)),
    )
    .unwrap()
}

pub fn sizes(kind: SubgraphKind) -> std::ops::RangeInclusive<usize> {
    match kind {
        SubgraphKind::Ring => 3..=6,
        SubgraphKind::Singleton => 1..=1,
        _ => 1..=6,
    }
}

fn lone_map(kind: SubgraphKind, n: usize) -> RoadMap {
    let mut pairs = Vec::new();
    match kind {
        SubgraphKind::Stack | SubgraphKind::Hall => pairs.extend((1..n).map(|i| (i - 1, i))),
        SubgraphKind::Ring => pairs.extend((0..n).map(|i| (i, (i + 1) % n))),
        SubgraphKind::Clique => pairs.extend((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))),
        SubgraphKind::Singleton => {}
    }
    RoadMap::undirected(n, &pairs).unwrap()
}

struct Fixture {
    classes: SubgraphClasses,
    s: Box<dyn SubgraphMethods>,
    config: Vec<Configuration>,
    by_robot_set: BTreeMap<BTreeSet<u32>, Vec<usize>>,
}

impl Fixture {
    fn new(kind: SubgraphKind, n: usize) -> Self {
        let classes = subgraph_classes(kind, n, n as u32).unwrap();
        let s = structure_for(&SubgraphRef::new(0, kind, (0..n).collect()));
        let mut config = vec![None; classes.class_count];
        let mut by_robot_set: BTreeMap<BTreeSet<u32>, Vec<usize>> = BTreeMap::new();
        for (i, a) in classes.arrangements.iter().enumerate() {
            let c = s.config_of(&to_arrangement(a)).unwrap();
            let class = classes.class_of[i];
            match &config[class] {
                None => config[class] = Some(c),
                Some(d) => assert_eq!(d, &c, "{kind} n={n}: class {class} maps to two configurations"),
            }
            by_robot_set
                .entry(a.iter().copied().filter(|&r| r != 0).collect())
                .or_default()
                .push(i);
        }
        let config: Vec<Configuration> = config.into_iter().map(Option::unwrap).collect();
        let distinct: BTreeSet<_> = config.iter().collect();
        assert_eq!(
            distinct.len(),
            config.len(),
            "{kind} n={n}: configurations merge classes"
        );
        Fixture {
            classes,
            s,
            config,
            by_robot_set,
        }
    }

    /// Arrangement indices admitted by any of `cs`.
    fn admitted(&self, cs: &[Configuration]) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for c in cs {
            let set: BTreeSet<u32> = c.robots().iter().map(|r| r.0).collect();
            for &i in self.by_robot_set.get(&set).into_iter().flatten() {
                if self.s.admits(c, &to_arrangement(&self.classes.arrangements[i])) {
                    out.insert(i);
                }
            }
        }
        out
    }

    fn class_members(&self, classes: &BTreeSet<usize>) -> BTreeSet<usize> {
        classes
            .iter()
            .flat_map(|&c| self.classes.member_indices(c).iter().copied())
            .collect()
    }

    /// Compares a structure result set against an oracle class set.
    fn same(&self, got: &[Configuration], want: &BTreeSet<usize>) -> bool {
        if got.iter().any(|c| matches!(c, Configuration::CliquePending { .. })) {
            self.admitted(got) == self.class_members(want)
        } else {
            let got: BTreeSet<&Configuration> = got.iter().collect();
            let want: BTreeSet<&Configuration> = want.iter().map(|&c| &self.config[c]).collect();
            got == want
        }
    }
}

pub const KINDS: [SubgraphKind; 5] = [
    SubgraphKind::Stack,
    SubgraphKind::Hall,
    SubgraphKind::Clique,
    SubgraphKind::Ring,
    SubgraphKind::Singleton,
];

/// Every enter and exit result against the oracle's class-level sets.
pub fn check_enter_exit(kind: SubgraphKind, n: usize) {
    {
        {
            let f = Fixture::new(kind, n);
            for class in 0..f.classes.class_count {
                let inside = f.classes.robots_in(class);
                let c = &f.config[class];
                for r in 1..=n as u32 {
                    for v in 0..n {
                        if inside.contains(&r) {
                            let want = f.classes.exit(class, r, v);
                            let got: Vec<_> = f.s.exit(c, RobotId(r), v).into_iter().collect();
                            assert!(f.same(&got, &want), "{kind} n={n}: exit {c} r{r} via {v}: {got:?}");
                        } else {
                            let want = f.classes.enter(class, r, v);
                            let got = f.s.enter(c, RobotId(r), v);
                            assert!(f.same(&got, &want), "{kind} n={n}: enter {c} r{r} at {v}: {got:?}");
                            for p in got.iter().filter(|p| matches!(p, Configuration::CliquePending { .. })) {
                                check_pending_exits(&f, p);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Exits from a least-commitment lock against the set-level definition
/// applied to the arrangements the lock stands for.
fn check_pending_exits(f: &Fixture, p: &Configuration) {
    let members = f.admitted(std::slice::from_ref(p));
    let n = f.classes.n;
    for &r in p.robots() {
        for v in 0..n {
            let want: BTreeSet<usize> = members
                .iter()
                .filter(|&&i| f.classes.arrangements[i][v] == r.0)
                .map(|&i| {
                    let mut b = f.classes.arrangements[i].clone();
                    b[v] = 0;
                    f.classes.class_of_slots(&b).unwrap()
                })
                .collect();
            let got: Vec<_> = f.s.exit(p, r, v).into_iter().collect();
            assert!(f.same(&got, &want), "exit {p} {r} via {v}");
        }
    }
}

pub fn check_termination(kind: SubgraphKind, n: usize) {
    {
        {
            let f = Fixture::new(kind, n);
            for idx in f.by_robot_set.values() {
                let classes: BTreeSet<usize> = idx.iter().map(|&j| f.classes.class_of[j]).collect();
                for &i in idx {
                    let goal = to_arrangement(&f.classes.arrangements[i]);
                    for &class in &classes {
                        let want = class == f.classes.class_of[i];
                        assert_eq!(f.s.can_terminate(&f.config[class], &goal), want, "{kind} n={n}");
                    }
                }
            }
        }
    }
}

pub fn check_hall_insertion_example() {
    // Six-vertex hall, three robots, entry at the third vertex.
    let f = Fixture::new(SubgraphKind::Hall, 6);
    let c = Configuration::Hall(vec![RobotId(1), RobotId(2), RobotId(3)]);
    let got = f.s.enter(&c, RobotId(4), 2);
    let positions: BTreeSet<usize> = got
        .iter()
        .map(|c| c.robots().iter().position(|&r| r == RobotId(4)).unwrap())
        .collect();
    assert_eq!(positions, BTreeSet::from([0, 1, 2]));
}

/// Every resolver lands in the promised configuration with a valid plan.
pub fn check_resolvers(kind: SubgraphKind, n: usize) {
    {
        {
            let f = Fixture::new(kind, n);
            let map = lone_map(kind, n);
            for a in f.classes.arrangements.iter().map(to_arrangement) {
                let c = f.s.config_of(&a).unwrap();
                for r in (1..=n as u32).map(RobotId) {
                    for v in 0..n {
                        if a.position(r).is_some() {
                            check_exit(&*f.s, &map, &a, &c, r, v);
                        } else {
                            check_enter(&f, &map, &a, &c, r, v);
                        }
                    }
                }
                let goals = &f.by_robot_set[&a.robots().map(|r| r.0).collect::<BTreeSet<_>>()];
                for g in goals.iter().map(|&i| to_arrangement(&f.classes.arrangements[i])) {
                    if f.s.can_terminate(&c, &g) {
                        let p = f.s.resolve_terminate(&a, &g).unwrap();
                        validate_plan(&map, &a, &g, &p).unwrap();
                    }
                }
            }
        }
    }
}

fn check_exit(s: &dyn SubgraphMethods, map: &RoadMap, a: &Arrangement, c: &Configuration, r: RobotId, v: usize) {
    let Some(target) = s.exit(c, r, v) else { return };
    let (plan, after) = s.resolve_exit(a, r, v, &target).unwrap();
    validate_plan(map, a, &after, &plan).unwrap();
    assert_eq!(after.at(v), Some(r));
    let mut left = after.clone();
    left.remove(r);
    assert!(s.admits(&target, &left));
}

fn check_enter(f: &Fixture, map: &RoadMap, a: &Arrangement, c: &Configuration, r: RobotId, v: usize) {
    let s = &*f.s;
    for target in s.enter(c, r, v) {
        let nexts: Vec<(NextAction<'_>, Option<Arrangement>)> = match &target {
            Configuration::CliquePending { .. } => {
                let goal = f
                    .admitted(std::slice::from_ref(&target))
                    .into_iter()
                    .map(|i| to_arrangement(&f.classes.arrangements[i]))
                    .next()
                    .unwrap();
                let mut out: Vec<(NextAction<'_>, Option<Arrangement>)> = Vec::new();
                for &e in target.robots() {
                    for u in 0..f.classes.n {
                        if s.exit(&target, e, u).is_some() {
                            out.push((NextAction::Exit { robot: e, via: u }, None));
                        }
                    }
                }
                // Terminate needs the goal to outlive the action; leak a copy.
                let goal: &'static Arrangement = Box::leak(Box::new(goal));
                out.push((NextAction::Terminate { goal }, Some(goal.clone())));
                out
            }
            _ => vec![(NextAction::Terminate { goal: a }, None)],
        };
        for (next, goal) in nexts {
            let (plan, before) = s.resolve_enter(a, r, v, &target, Some(next)).unwrap();
            validate_plan(map, a, &before, &plan).unwrap();
            assert!(before.is_free(v));
            let mut after = before.clone();
            after.place(r, v).unwrap();
            assert!(s.admits(&target, &after), "{target} does not admit {after}");
            match next {
                NextAction::Exit { robot, via } => assert_eq!(after.at(via), Some(robot)),
                NextAction::Terminate { .. } => {
                    if let Some(g) = goal {
                        assert_eq!(after, g);
                    }
                }
            }
        }
    }
}

/// Random undirected map, with some edges made one-way.
pub fn random_map(rng: &mut ChaCha8Rng, max_n: usize) -> RoadMap {
    let n = rng.random_range(3..=max_n);
    let degree = rng.random_range(1.0..=(1.8f64).min((n - 1) as f64 / 2.0));
    let g = gen_graph(n, degree, rng.random()).unwrap();
    let one_way = rng.random_bool(0.3);
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| {
            if one_way && rng.random_bool(0.2) {
                let (from, to) = if rng.random_bool(0.5) {
                    (e.from, e.to)
                } else {
                    (e.to, e.from)
                };
                Edge {
                    from,
                    to,
                    directed: true,
                }
            } else {
                *e
            }
        })
        .collect();
    RoadMap::new(n, edges).unwrap()
}

/// Runs `cases` random instances through the subgraph planner and the
/// composite oracle, panicking on any disagreement. Returns the counts of
/// solvable and unsolvable instances.
pub fn theorem_check(seed: u64, cases: usize, max_n: usize, max_k: usize) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = PlannerConfig::default();
    let (mut solvable, mut unsolvable) = (0, 0);
    for case in 0..cases {
        let map = random_map(&mut rng, max_n);
        let k = rng.random_range(1..=max_k.min(map.vertex_count()));
        let problem = gen_problem(&map, k, rng.random()).unwrap();
        let partition = auto_partition(&map, rng.random());
        assert!(validate_partition(&map, &partition).is_empty());
        let (start, goal) = (problem.start(), problem.goal());

        let oracle = composite_solve(&map, &start, &goal).unwrap();
        let out = plan_subgraph(&map, &partition, &problem, &cfg).unwrap();
        assert_eq!(
            out.solved(),
            oracle.is_some(),
            "case {case}: map {} partition {} problem {}",
            map.to_json(),
            partition.to_json(),
            problem.to_json()
        );
        let abs = Abstraction::new(&map, &partition).unwrap();
        if let Some(plan) = &out.plan {
            validate_plan(&map, &start, &goal, plan).unwrap();
            abs.check(&out.abstract_plans[0]).unwrap();
            solvable += 1;
        } else {
            unsolvable += 1;
        }
        if let Some(plan) = oracle {
            validate_plan(&map, &start, &goal, &plan).unwrap();
            // Any concrete plan lifts to a legal abstract plan.
            let lifted = abs.extract(&plan, &start, &goal).unwrap();
            abs.check(&lifted).unwrap();
        }
    }
    (solvable, unsolvable)
}
