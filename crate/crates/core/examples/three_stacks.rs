//! Three stacks of six joined at their heads, three robots reversing their
//! order. Compares the size of the composite space with the abstract one and
//! plans in both.

use sgplan::oracle::{abstract_enumerate, composite_enumerate};
use sgplan::planners::{plan_naive, plan_subgraph, PlannerConfig};
use sgplan::roadmap::count_composite_space;
use sgplan::{Partition, Problem, RoadMap};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = RoadMap::load(data("three-stacks.map.json"))?;
    let part = Partition::load(data("three-stacks.part.json"), map.vertex_count())?;
    let problem = Problem::load(data("three-stacks.reverse.problem.json"))?;

    let (s, t) = count_composite_space(map.vertex_count(), 3, map.edge_count())?;
    println!("composite space, closed form: {s} states, {t} transitions");
    let (s, t) = composite_enumerate(&map, 3)?;
    println!("composite space, enumerated:  {s} states, {t} transitions");
    let (s, t) = abstract_enumerate(&map, &part, 3)?;
    println!("abstract space, enumerated:   {s} states, {t} transitions");

    let cfg = PlannerConfig::default();
    let naive = plan_naive(&map, &problem, &cfg)?;
    let sub = plan_subgraph(&map, &part, &problem, &cfg)?;
    println!(
        "\nabstract plan ({} transitions):\n{}",
        sub.abstract_plans[0].len(),
        sub.abstract_plans[0]
    );
    for (name, out) in [("naive", &naive), ("subgraph", &sub)] {
        let m = &out.metrics;
        println!(
            "{name:>8}: {} steps, {} expanded, {} generated, depth {:?}",
            out.plan.as_ref().map_or(0, |p| p.len()),
            m.nodes_expanded,
            m.nodes_generated,
            m.goal_depth
        );
    }
    Ok(())
}
