mod common;

use common::{data, load};
use sgplan::oracle::{abstract_enumerate, composite_enumerate, composite_solve};
use sgplan::planners::{
    plan_naive, plan_prioritised, plan_prioritised_subgraph, plan_subgraph, Abstraction, PlannerConfig,
};
use sgplan::plans::validate_plan;
use sgplan::roadmap::{count_composite_space, reduce, validate_partition, Partition};

#[test]
fn three_stack_counts() {
    let (map, part, _) = load(
        "three-stacks.map.json",
        Some("three-stacks.part.json"),
        "three-stacks.reverse.problem.json",
    );
    let part = part.unwrap();
    assert_eq!((map.vertex_count(), map.edge_count()), (18, 17));
    assert!(validate_partition(&map, &part).is_empty());
    let x = reduce(&map, &part).unwrap();
    assert_eq!(x.edge_count(), 2);
    let (s, t) = count_composite_space(18, 3, 17).unwrap();
    assert_eq!((s.to_string(), t.to_string()), ("4896".into(), "12240".into()));
    assert_eq!(composite_enumerate(&map, 3).unwrap(), (4896, 12240));
    assert_eq!(abstract_enumerate(&map, &part, 3).unwrap(), (60, 144));
}

#[test]
fn three_stack_reversal() {
    let (map, part, problem) = load(
        "three-stacks.map.json",
        Some("three-stacks.part.json"),
        "three-stacks.reverse.problem.json",
    );
    let part = part.unwrap();
    let out = plan_subgraph(&map, &part, &problem, &PlannerConfig::default()).unwrap();
    let abs = &out.abstract_plans[0];
    // Every robot has to leave the stack and come back.
    assert_eq!(abs.len(), 10);
    for r in problem.priority() {
        assert!(abs.transitions.iter().any(|s| s.robot == r && s.from < 6 && s.to >= 6));
    }
    assert!(out.metrics.nodes_expanded <= 60);
    Abstraction::new(&map, &part).unwrap().check(abs).unwrap();
    validate_plan(&map, &problem.start(), &problem.goal(), out.plan.as_ref().unwrap()).unwrap();
    let naive = plan_naive(&map, &problem, &PlannerConfig::default()).unwrap();
    assert!(naive.solved());
    assert!(naive.metrics.nodes_expanded <= 4896);
}

#[test]
fn swap_with_side_pocket() {
    let (map, hall, problem) = load(
        "side-pocket.map.json",
        Some("side-pocket.hall.part.json"),
        "side-pocket.problem.json",
    );
    let hall = hall.unwrap();
    let bad = Partition::load(data("side-pocket.stack-hall.part.json"), 5).unwrap();
    assert!(validate_partition(&map, &bad).is_empty());
    let cfg = PlannerConfig::default();
    assert!(plan_naive(&map, &problem, &cfg).unwrap().solved());
    assert!(composite_solve(&map, &problem.start(), &problem.goal())
        .unwrap()
        .is_some());
    assert!(!plan_prioritised(&map, &problem, &cfg).unwrap().solved());
    let good = plan_prioritised_subgraph(&map, &hall, &problem, &cfg).unwrap();
    assert!(good.solved());
    assert!(good.abstract_plans[0].is_empty());
    assert!(!plan_prioritised_subgraph(&map, &bad, &problem, &cfg).unwrap().solved());
}

#[test]
fn one_way_bypass() {
    let (map, part, problem) = load("one-way.map.json", Some("one-way.part.json"), "one-way.problem.json");
    let part = part.unwrap();
    assert!(validate_partition(&map, &part).is_empty());
    let cfg = PlannerConfig::default();
    assert!(plan_prioritised(&map, &problem, &cfg).unwrap().solved());
    assert!(!plan_prioritised_subgraph(&map, &part, &problem, &cfg).unwrap().solved());
}

#[test]
fn indoor_sample() {
    let (map, part, problem) = load("indoor.map.json", Some("indoor.part.json"), "indoor.problem.json");
    let part = part.unwrap();
    assert_eq!(validate_partition(&map, &part), vec![]);
    let x = reduce(&map, &part).unwrap();
    assert!(x.average_degree() < map.average_degree());
    let cfg = PlannerConfig::default();
    for out in [
        plan_subgraph(&map, &part, &problem, &cfg).unwrap(),
        plan_prioritised_subgraph(&map, &part, &problem, &cfg).unwrap(),
    ] {
        validate_plan(&map, &problem.start(), &problem.goal(), out.plan.as_ref().unwrap()).unwrap();
    }
}
