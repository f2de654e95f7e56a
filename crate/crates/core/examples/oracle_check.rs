//! Random small instances, each solved twice: by the subgraph planner and
//! by brute force over the composite space. They must agree on solvability.
//!
//! cargo run --release --example oracle_check -- [instances] [seed]

use sgplan::genbench::{gen_graph, gen_problem};
use sgplan::oracle::composite_solve;
use sgplan::planners::{plan_subgraph, PlannerConfig};
use sgplan::{auto_partition, validate_plan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let count: u64 = args.next().map_or(Ok(300), |a| a.parse())?;
    let seed: u64 = args.next().map_or(Ok(0), |a| a.parse())?;
    let (mut solvable, mut unsolvable) = (0, 0);
    for i in 0..count {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(i);
        let n = 4 + (s % 6) as usize;
        // Trees, one cycle, two cycles: sparse enough for swaps to fail.
        let edges = n - 1 + (s / 7 % 3) as usize;
        let map = gen_graph(n, edges as f64 / n as f64, s)?;
        let problem = gen_problem(&map, 2 + (s % 2) as usize, s)?;
        let part = auto_partition(&map, s);
        let ours = plan_subgraph(&map, &part, &problem, &PlannerConfig::default())?;
        let truth = composite_solve(&map, &problem.start(), &problem.goal())?;
        if ours.solved() != truth.is_some() {
            return Err(format!(
                "instance {i} (seed {s}): planner {} vs oracle {}",
                ours.solved(),
                truth.is_some()
            )
            .into());
        }
        if let Some(p) = &ours.plan {
            validate_plan(&map, &problem.start(), &problem.goal(), p)?;
            solvable += 1;
        } else {
            unsolvable += 1;
        }
    }
    println!("{count} instances agree: {solvable} solvable, {unsolvable} unsolvable");
    Ok(())
}
