//! Two small maps where the planners disagree. A side pocket lets two robots
//! swap, but only if the first robot is allowed to step aside; a one-way
//! bypass helps the prioritised planner but is hidden inside a hall.

use sgplan::planners::{plan_naive, plan_prioritised, plan_prioritised_subgraph, PlannerConfig};
use sgplan::{Partition, Problem, RoadMap};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn verdict(solved: bool) -> &'static str {
    if solved {
        "solved"
    } else {
        "no plan"
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = PlannerConfig::default();

    let map = RoadMap::load(data("side-pocket.map.json"))?;
    let problem = Problem::load(data("side-pocket.problem.json"))?;
    let hall = Partition::load(data("side-pocket.hall.part.json"), map.vertex_count())?;
    let stack_hall = Partition::load(data("side-pocket.stack-hall.part.json"), map.vertex_count())?;
    println!("side pocket");
    println!(
        "  naive                        {}",
        verdict(plan_naive(&map, &problem, &cfg)?.solved())
    );
    println!(
        "  prioritised                  {}",
        verdict(plan_prioritised(&map, &problem, &cfg)?.solved())
    );
    for (name, p) in [("hall", &hall), ("stack + hall", &stack_hall)] {
        let out = plan_prioritised_subgraph(&map, p, &problem, &cfg)?;
        println!("  prioritised, {name:<15} {}", verdict(out.solved()));
    }

    let map = RoadMap::load(data("one-way.map.json"))?;
    let problem = Problem::load(data("one-way.problem.json"))?;
    let part = Partition::load(data("one-way.part.json"), map.vertex_count())?;
    println!("one-way bypass");
    println!(
        "  prioritised                  {}",
        verdict(plan_prioritised(&map, &problem, &cfg)?.solved())
    );
    let out = plan_prioritised_subgraph(&map, &part, &problem, &cfg)?;
    println!("  prioritised, subgraphs       {}", verdict(out.solved()));
    Ok(())
}
