//! What each structure's configuration forgets, and how robots enter and
//! leave it.

use sgplan::plans::{Arrangement, RobotId};
use sgplan::roadmap::SubgraphRef;
use sgplan::structures::structure_for;
use sgplan::SubgraphKind;

fn arr(pairs: &[(u32, usize)]) -> Arrangement {
    Arrangement::from_pairs(pairs.iter().map(|&(r, v)| (RobotId(r), v))).unwrap()
}

fn main() {
    let cases = [
        (SubgraphKind::Stack, vec![0, 1, 2, 3], arr(&[(1, 1), (2, 3)]), 0),
        (SubgraphKind::Hall, vec![0, 1, 2, 3], arr(&[(1, 1), (2, 2)]), 3),
        (SubgraphKind::Clique, vec![0, 1, 2, 3], arr(&[(1, 0), (2, 3)]), 1),
        (SubgraphKind::Ring, vec![0, 1, 2, 3, 4], arr(&[(1, 0), (2, 2)]), 4),
        (SubgraphKind::Singleton, vec![0], Arrangement::new(), 0),
    ];
    for (kind, members, a, door) in cases {
        let s = structure_for(&SubgraphRef::new(0, kind, members.clone()));
        let c = s.config_of(&a).unwrap();
        println!("{kind} {members:?}");
        println!("  {a}  ->  {c}");
        let entered = s.enter(&c, RobotId(9), door);
        let shown: Vec<String> = entered.iter().map(|d| d.to_string()).collect();
        println!(
            "  r9 entering at {door}: {}",
            if shown.is_empty() {
                "impossible".into()
            } else {
                shown.join("  ")
            }
        );
        if let Some(r) = c.robots().first() {
            match s.exit(&c, *r, door) {
                Some(d) => println!("  {r} leaving via {door}: {d}"),
                None => println!("  {r} cannot leave via {door}"),
            }
        }
        println!("  can stay put: {}", s.can_terminate(&c, &a));
    }
}
