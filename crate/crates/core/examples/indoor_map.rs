//! A building-like map: a corridor with storage bays, a lobby, a ring
//! around an atrium, a side hall and a kitchen. All four planners on the
//! same four-robot task.

use sgplan::planners::{run_planner, Algorithm, PlannerConfig};
use sgplan::{partition_stats, validate_plan, Partition, Problem, RoadMap};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = RoadMap::load(data("indoor.map.json"))?;
    let part = Partition::load(data("indoor.part.json"), map.vertex_count())?;
    let problem = Problem::load(data("indoor.problem.json"))?;
    let stats = partition_stats(&map, &part)?;
    println!(
        "{} vertices, {} edges; {} subgraphs, reduced degree {:.3} (map {:.3})",
        map.vertex_count(),
        map.edge_count(),
        stats.n_subgraphs,
        stats.reduced_degree,
        map.average_degree()
    );
    for s in part.subgraphs() {
        println!("  {:>9} {:?}", s.kind.to_string(), s.members);
    }
    let cfg = PlannerConfig::default();
    for alg in [
        Algorithm::Naive,
        Algorithm::Subgraph,
        Algorithm::Prio,
        Algorithm::PrioSubgraph,
    ] {
        let out = run_planner(alg, &map, Some(&part), &problem, &cfg)?;
        if let Some(p) = &out.plan {
            validate_plan(&map, &problem.start(), &problem.goal(), p)?;
        }
        let row = out.metrics.row("indoor", alg.name());
        println!(
            "{:>13}: {:<9} {:>3} steps  expanded {:>7}  branching {}",
            alg.name(),
            row.outcome,
            out.plan.as_ref().map_or(0, |p| p.len()),
            row.nodes_expanded,
            row.branching_factor
        );
    }
    Ok(())
}
