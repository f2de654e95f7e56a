//! The editing workflow behind the HTTP service, driven directly: ask for
//! suggestions, commit some, undo one, validate, preview a plan.

use sgplan::roadmap::SubgraphEntry;
use sgplan::session::{PreviewRequest, Session, SuggestRequest};
use sgplan::{RoadMap, SubgraphKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A ring of six with a three-vertex tail hanging off vertex 0.
    let map = RoadMap::undirected(
        9,
        &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 6), (6, 7), (7, 8)],
    )?;
    let mut s = Session::new(map);

    // Unfiltered, the longest hall through the tail ranks first; ask for the
    // ring instead and give the tail its own hall.
    for (seed, kind) in [((1, 2), Some(SubgraphKind::Ring)), ((6, 7), None)] {
        let got = s.suggest(&SuggestRequest { seed, kind })?;
        println!("suggestions from {seed:?}:");
        for c in &got {
            println!("  {} {:?}", c.kind, c.vertices);
        }
        let best = &got[0];
        let id = s.commit(SubgraphEntry {
            kind: best.kind,
            vertices: best.vertices.clone(),
        })?;
        println!("committed #{id}");
    }
    println!(
        "violations: {:?}",
        s.validate().iter().map(|v| v.to_string()).collect::<Vec<_>>()
    );
    s.undo()?;
    println!(
        "after undo: {} subgraphs, {} violations",
        s.partition().len(),
        s.validate().len()
    );

    let req: PreviewRequest = serde_json::from_str(
        r#"{"problem":{"robots":[{"id":1,"start":8,"goal":3},{"id":2,"start":3,"goal":8}]},"algorithm":"subgraph"}"#,
    )?;
    let out = s.preview(&req)?;
    println!(
        "preview: solved {}, {} steps",
        out.solved,
        out.plan.map_or(0, |p| p.len())
    );
    Ok(())
}
