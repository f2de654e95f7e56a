//! Automatic partitioning by randomised growth of halls, rings and cliques.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::roadmap::{check_structure, reduce, Partition, RoadMap, SubgraphKind, VertexId};

/// A structure grown from a seed pair, members in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub kind: SubgraphKind,
    pub vertices: Vec<VertexId>,
}

impl Candidate {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Kinds grown by the partitioner, in tie-break preference order.
pub const GROWN_KINDS: [SubgraphKind; 3] = [SubgraphKind::Hall, SubgraphKind::Ring, SubgraphKind::Clique];

/// Grows one structure of `kind` from the mutually adjacent, unused pair
/// `(u, v)`. Returns an empty candidate when nothing valid can be grown.
pub fn grow<R: Rng>(
    map: &RoadMap,
    used: &[bool],
    (u, v): (VertexId, VertexId),
    kind: SubgraphKind,
    rng: &mut R,
) -> Candidate {
    let members = if used[u] || used[v] || u == v || !map.mutual(u, v) {
        Vec::new()
    } else {
        match kind {
            SubgraphKind::Hall => grow_hall(map, used, u, v, rng),
            SubgraphKind::Ring => grow_ring(map, used, u, v, rng),
            SubgraphKind::Clique => grow_clique(map, used, u, v, rng),
            SubgraphKind::Stack | SubgraphKind::Singleton => Vec::new(),
        }
    };
    let members = if members.is_empty() {
        members
    } else {
        crate::roadmap::canonical_order(kind, members)
    };
    debug_assert!(members.is_empty() || check_structure(map, kind, &members).is_ok());
    Candidate {
        kind,
        vertices: members,
    }
}

/// Unused vertices joined both ways to `end` and not touching any other
/// vertex of `chain`.
fn chain_extensions(map: &RoadMap, used: &[bool], chain: &[VertexId], end: VertexId) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = map
        .successors(end)
        .iter()
        .copied()
        .filter(|&w| !used[w] && !chain.contains(&w) && map.mutual(end, w))
        .filter(|&w| chain.iter().all(|&c| c == end || !map.adjacent(c, w)))
        .collect();
    out.dedup();
    out
}

fn grow_hall<R: Rng>(map: &RoadMap, used: &[bool], u: VertexId, v: VertexId, rng: &mut R) -> Vec<VertexId> {
    let mut chain = vec![u, v];
    loop {
        let first = chain[0];
        let last = *chain.last().unwrap();
        let mut options: Vec<(bool, VertexId)> = chain_extensions(map, used, &chain, first)
            .into_iter()
            .map(|w| (true, w))
            .collect();
        options.extend(
            chain_extensions(map, used, &chain, last)
                .into_iter()
                .map(|w| (false, w)),
        );
        let Some(&(front, w)) = options.choose(rng) else {
            return chain;
        };
        if front {
            chain.insert(0, w);
        } else {
            chain.push(w);
        }
    }
}

fn grow_ring<R: Rng>(map: &RoadMap, used: &[bool], u: VertexId, v: VertexId, rng: &mut R) -> Vec<VertexId> {
    let mut chain = vec![u, v];
    for _ in 0..map.vertex_count() {
        let first = chain[0];
        let last = *chain.last().unwrap();
        let mut options: Vec<(bool, VertexId)> = Vec::new();
        for (front, end) in [(true, first), (false, last)] {
            for &w in map.successors(end) {
                if !used[w] && !chain.contains(&w) && map.mutual(end, w) {
                    options.push((front, w));
                }
            }
        }
        let mut grew = false;
        while !options.is_empty() {
            let (front, w) = options.swap_remove(rng.random_range(0..options.len()));
            let end_index = if front { 0 } else { chain.len() - 1 };
            let touching: Vec<usize> = (0..chain.len())
                .filter(|&i| i != end_index && map.adjacent(chain[i], w))
                .collect();
            if touching.is_empty() {
                if front {
                    chain.insert(0, w);
                } else {
                    chain.push(w);
                }
                grew = true;
                break;
            }
            // Closes a loop through the touching vertex nearest the end.
            let c = if front {
                *touching.iter().min().unwrap()
            } else {
                *touching.iter().max().unwrap()
            };
            let mut ring: Vec<VertexId> = if front {
                chain[..=c].to_vec()
            } else {
                chain[c..].to_vec()
            };
            ring.push(w);
            if map.mutual(chain[c], w) && check_structure(map, SubgraphKind::Ring, &ring).is_ok() {
                return ring;
            }
        }
        if !grew {
            return Vec::new();
        }
    }
    Vec::new()
}

fn grow_clique<R: Rng>(map: &RoadMap, used: &[bool], u: VertexId, v: VertexId, rng: &mut R) -> Vec<VertexId> {
    let mut clique = vec![u, v];
    loop {
        let options: Vec<VertexId> = map
            .vertices()
            .filter(|&w| !used[w] && !clique.contains(&w))
            .filter(|&w| clique.iter().all(|&c| map.mutual(c, w)))
            .collect();
        let Some(&w) = options.choose(rng) else {
            return clique;
        };
        clique.push(w);
    }
}

/// All three growths from a seed pair, biggest first; ties prefer halls,
/// then rings. Empty candidates are dropped.
pub fn suggest<R: Rng>(map: &RoadMap, used: &[bool], pair: (VertexId, VertexId), rng: &mut R) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = GROWN_KINDS
        .iter()
        .map(|&k| grow(map, used, pair, k, rng))
        .filter(|c| !c.is_empty())
        .collect();
    // Stable sort keeps the preference order among equal sizes.
    out.sort_by_key(|c| std::cmp::Reverse(c.len()));
    out
}

fn seed_pairs(map: &RoadMap, used: &[bool]) -> Vec<(VertexId, VertexId)> {
    map.vertices()
        .filter(|&u| !used[u])
        .flat_map(|u| {
            map.successors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v && !used[v] && map.mutual(u, v))
                .map(move |v| (u, v))
        })
        .collect()
}

/// Repeatedly picks a random unused adjacent pair, grows a hall, a ring
/// and a clique from it and keeps the biggest. Leftover vertices become
/// singletons.
pub fn auto_partition(map: &RoadMap, seed: u64) -> Partition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = map.vertex_count();
    let mut used = vec![false; n];
    let mut parts: Vec<(SubgraphKind, Vec<VertexId>)> = Vec::new();
    loop {
        let pairs = seed_pairs(map, &used);
        let Some(&pair) = pairs.choose(&mut rng) else {
            break;
        };
        let best = suggest(map, &used, pair, &mut rng)
            .into_iter()
            .next()
            .expect("a mutual pair always forms a hall");
        for &v in &best.vertices {
            used[v] = true;
        }
        parts.push((best.kind, best.vertices));
    }
    parts.extend((0..n).filter(|&v| !used[v]).map(|v| (SubgraphKind::Singleton, vec![v])));
    Partition::new(n, parts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionStats {
    pub n_subgraphs: usize,
    /// `|E(X)| / |V(X)|` of the reduced graph.
    pub reduced_degree: f64,
    pub n_stacks: usize,
    pub n_halls: usize,
    pub n_rings: usize,
    pub n_cliques: usize,
    pub n_singletons: usize,
    pub mean_size: f64,
}

/// One CSV line of partition statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub map_id: String,
    pub n_subgraphs: usize,
    pub reduced_degree: f64,
    pub n_halls: usize,
    pub n_rings: usize,
    pub n_cliques: usize,
    pub n_singletons: usize,
}

impl PartitionStats {
    pub fn row(&self, map_id: &str) -> StatsRow {
        StatsRow {
            map_id: map_id.to_string(),
            n_subgraphs: self.n_subgraphs,
            reduced_degree: self.reduced_degree,
            n_halls: self.n_halls,
            n_rings: self.n_rings,
            n_cliques: self.n_cliques,
            n_singletons: self.n_singletons,
        }
    }
}

pub fn partition_stats(map: &RoadMap, p: &Partition) -> Result<PartitionStats, crate::roadmap::InvalidPartition> {
    let reduced = reduce(map, p)?;
    let count = |k: SubgraphKind| p.subgraphs().iter().filter(|s| s.kind == k).count();
    Ok(PartitionStats {
        n_subgraphs: p.len(),
        reduced_degree: reduced.average_degree(),
        n_stacks: count(SubgraphKind::Stack),
        n_halls: count(SubgraphKind::Hall),
        n_rings: count(SubgraphKind::Ring),
        n_cliques: count(SubgraphKind::Clique),
        n_singletons: count(SubgraphKind::Singleton),
        mean_size: if p.is_empty() {
            0.0
        } else {
            map.vertex_count() as f64 / p.len() as f64
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roadmap::validate_partition;

    fn cycle(n: usize) -> RoadMap {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        RoadMap::undirected(n, &pairs).unwrap()
    }

    fn complete(n: usize) -> RoadMap {
        let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        RoadMap::undirected(n, &pairs).unwrap()
    }

    fn only(p: &Partition) -> (SubgraphKind, usize) {
        assert_eq!(p.len(), 1);
        (p.subgraph(0).kind, p.subgraph(0).len())
    }

    #[test]
    fn simple_shapes() {
        for seed in 0..20 {
            let path = RoadMap::undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
            assert_eq!(only(&auto_partition(&path, seed)), (SubgraphKind::Hall, 5));
            assert_eq!(only(&auto_partition(&complete(4), seed)), (SubgraphKind::Clique, 4));
            assert_eq!(only(&auto_partition(&cycle(6), seed)), (SubgraphKind::Ring, 6));
        }
    }

    #[test]
    fn star_grows_a_hall_of_three() {
        let star = RoadMap::undirected(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = grow(&star, &[false; 4], (0, 1), SubgraphKind::Hall, &mut rng);
        assert_eq!(c.len(), 3);
        assert!(c.vertices.contains(&0) && c.vertices.contains(&1));
    }

    #[test]
    fn triangle_growth() {
        let t = complete(3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(grow(&t, &[false; 3], (0, 1), SubgraphKind::Ring, &mut rng).len(), 3);
        assert_eq!(grow(&t, &[false; 3], (0, 1), SubgraphKind::Clique, &mut rng).len(), 3);
        assert_eq!(grow(&t, &[false; 3], (0, 1), SubgraphKind::Hall, &mut rng).len(), 2);
    }

    #[test]
    fn ring_that_cannot_close_is_empty() {
        let path = RoadMap::undirected(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(grow(&path, &[false; 4], (1, 2), SubgraphKind::Ring, &mut rng).is_empty());
    }

    #[test]
    fn suggestions_ranked() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = suggest(&cycle(6), &[false; 6], (0, 1), &mut rng);
        assert_eq!(s[0].kind, SubgraphKind::Ring);
        assert_eq!(s[0].len(), 6);
    }

    #[test]
    fn stats_of_singletons_match_map() {
        let m = cycle(5);
        let s = partition_stats(&m, &Partition::singletons(5)).unwrap();
        assert_eq!(s.reduced_degree, m.average_degree());
        assert_eq!(s.n_singletons, 5);
    }

    #[test]
    fn deterministic_and_valid() {
        let m = complete(6);
        let a = auto_partition(&m, 9);
        assert_eq!(a, auto_partition(&m, 9));
        assert!(validate_partition(&m, &a).is_empty());
    }
}
