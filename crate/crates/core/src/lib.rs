//! Multi-robot path planning on partitioned road maps.
//!
//! A road map is cut into stacks, halls, cliques, rings and singletons.
//! Robots inside each piece are tracked only up to an equivalence class,
//! which shrinks the search space, and abstract plans over these classes
//! are resolved back into concrete step-by-step plans.
//!
//! ```
//! use sgplan::{plan_subgraph, Partition, PlannerConfig, Problem, RoadMap, SubgraphKind};
//!
//! let map = RoadMap::undirected(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
//! let part = Partition::new(4, vec![(SubgraphKind::Hall, vec![0, 1, 2, 3])]);
//! let problem = Problem::from_json_str(
//!     r#"{"robots":[{"id":1,"start":0,"goal":1},{"id":2,"start":3,"goal":2}]}"#,
//! ).unwrap();
//! let out = plan_subgraph(&map, &part, &problem, &PlannerConfig::default()).unwrap();
//! assert!(out.solved());
//! ```

pub mod genbench;
pub mod oracle;
pub mod partitioner;
pub mod planners;
pub mod plans;
pub mod roadmap;
pub mod search;
pub mod session;
pub mod structures;

pub use partitioner::{auto_partition, partition_stats};
pub use planners::{
    plan_naive, plan_prioritised, plan_prioritised_subgraph, plan_subgraph, run_planner, Algorithm, PlanOutcome,
    PlannerConfig,
};
pub use plans::{validate_plan, Arrangement, ConcretePlan, PlanStep, Problem, RobotId};
pub use roadmap::{validate_partition, Partition, RoadMap, SubgraphKind, VertexId};
pub use search::{HeuristicMode, SearchOptions, Strategy};
