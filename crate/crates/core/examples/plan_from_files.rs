//! Plan from JSON files and print the moves.
//!
//! cargo run --example plan_from_files -- MAP PROBLEM [PARTITION] [ALGORITHM]

use sgplan::planners::{run_planner, Algorithm, PlannerConfig};
use sgplan::{Partition, Problem, RoadMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [map, problem, rest @ ..] = args.as_slice() else {
        return Err("usage: plan_from_files MAP PROBLEM [PARTITION] [ALGORITHM]".into());
    };
    let map = RoadMap::load(map)?;
    let problem = Problem::load(problem)?;
    let part = rest
        .first()
        .map(|p| Partition::load(p, map.vertex_count()))
        .transpose()?;
    let alg: Algorithm = match rest.get(1) {
        Some(a) => a.parse()?,
        None if part.is_some() => Algorithm::Subgraph,
        None => Algorithm::Naive,
    };
    let out = run_planner(alg, &map, part.as_ref(), &problem, &PlannerConfig::default())?;
    match &out.plan {
        Some(plan) => {
            for (i, step) in plan.steps.iter().enumerate() {
                println!("{:>4}  {step}", i + 1);
            }
        }
        None => println!("no plan ({})", out.metrics.outcome),
    }
    Ok(())
}
