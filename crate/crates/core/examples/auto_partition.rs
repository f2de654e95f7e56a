//! Partition random maps of growing density and report how much the
//! reduced graph shrinks.
//!
//! cargo run --example auto_partition -- [vertices] [seed]

use sgplan::genbench::gen_graph;
use sgplan::{auto_partition, partition_stats, validate_partition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(60), |a| a.parse())?;
    let seed: u64 = args.next().map_or(Ok(1), |a| a.parse())?;
    println!("degree  subgraphs  halls rings cliques singles  mean size  reduced degree");
    for degree in [1.0, 1.25, 1.5, 2.0, 3.0] {
        let map = gen_graph(n, degree, seed)?;
        let p = auto_partition(&map, seed);
        assert!(validate_partition(&map, &p).is_empty());
        let s = partition_stats(&map, &p)?;
        println!(
            "{:>6.2}  {:>9}  {:>5} {:>5} {:>7} {:>7}  {:>9.2}  {:>6.3} (from {:.3})",
            degree,
            s.n_subgraphs,
            s.n_halls,
            s.n_rings,
            s.n_cliques,
            s.n_singletons,
            s.mean_size,
            s.reduced_degree,
            map.average_degree()
        );
    }
    Ok(())
}
