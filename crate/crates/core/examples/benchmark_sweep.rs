//! Run an experiment config and print its summary table.
//!
//! cargo run --release --example benchmark_sweep -- [config.json]

use sgplan::genbench::{run_experiment, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| format!("{}/data/experiments/depth-branching.json", env!("CARGO_MANIFEST_DIR")));
    let cfg = ExperimentConfig::load(&path)?;
    let result = run_experiment(&cfg)?;
    let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.2}"));
    println!(
        "{:>8} {:>13} {:>6} {:>6} {:>12} {:>12} {:>14}",
        "point", "algorithm", "runs", "solved", "depth med", "branch med", "expanded med"
    );
    for r in result.summary() {
        println!(
            "{:>8} {:>13} {:>6} {:>6} {:>12} {:>12} {:>14}",
            r.point,
            r.algorithm,
            r.runs,
            r.solved,
            opt(r.goal_depth_median),
            opt(r.branching_median),
            opt(r.nodes_expanded_median)
        );
    }
    println!("\nfailures of the prioritised planners");
    for f in result.failures() {
        println!(
            "  {:>6}: prio {:>3}, prio-subgraph {:>3} of {}",
            f.point, f.prio_failures, f.prio_subgraph_failures, f.trials
        );
    }
    Ok(())
}
