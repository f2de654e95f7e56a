//! Road-map graphs, induced-subgraph partitions and the reduced graph.
//!
//! A [`RoadMap`] is the connectivity graph of free space. Vertex ids are
//! dense (`0..n`). Edges are undirected unless flagged `directed`, in which
//! case they may only be traversed `from -> to`.
//!
//! A [`Partition`] splits the map into disjoint induced subgraphs, each
//! tagged with the structure it is expected to have. Contracting every
//! subgraph to a single node gives the [`ReducedGraph`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub directed: bool,
}

#[derive(Debug, Error)]
pub enum MapError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("edges[{edge}]: self-loop on vertex {vertex}")]
    SelfLoop { edge: usize, vertex: VertexId },
    #[error("edges[{edge}]: duplicate edge ({from}, {to})")]
    DuplicateEdge { edge: usize, from: VertexId, to: VertexId },
    #[error("edges[{edge}]: vertex {vertex} does not exist")]
    DanglingVertex { edge: usize, vertex: VertexId },
    #[error("vertices[{index}]: duplicate vertex id {id}")]
    DuplicateVertexId { index: usize, id: VertexId },
    #[error("vertex ids must be contiguous from 0; id {missing} is missing")]
    NonContiguousIds { missing: VertexId },
}

impl MapError {
    pub(crate) fn from_json(err: serde_json::Error) -> Self {
        MapError::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

/// A road-map graph. Immutable once built.
#[derive(Clone, Debug)]
pub struct RoadMap {
    edges: Vec<Edge>,
    succ: Vec<Vec<VertexId>>,
    pred: Vec<Vec<VertexId>>,
    coords: Vec<Option<(f64, f64)>>,
}

impl RoadMap {
    /// Builds a map on `n` vertices, checking for self-loops, dangling ids
    /// and duplicate edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, MapError> {
        let edges: Vec<Edge> = edges.into_iter().collect();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        let mut arcs: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            for v in [e.from, e.to] {
                if v >= n {
                    return Err(MapError::DanglingVertex { edge: i, vertex: v });
                }
            }
            if e.from == e.to {
                return Err(MapError::SelfLoop {
                    edge: i,
                    vertex: e.from,
                });
            }
            let mut add = |u: VertexId, v: VertexId| -> Result<(), MapError> {
                if arcs.insert((u, v), i).is_some() {
                    return Err(MapError::DuplicateEdge {
                        edge: i,
                        from: e.from,
                        to: e.to,
                    });
                }
                succ[u].push(v);
                pred[v].push(u);
                Ok(())
            };
            add(e.from, e.to)?;
            if !e.directed {
                add(e.to, e.from)?;
            }
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
        }
        Ok(RoadMap {
            edges,
            succ,
            pred,
            coords: vec![None; n],
        })
    }

    /// Convenience constructor for undirected maps.
    pub fn undirected(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self, MapError> {
        Self::new(
            n,
            pairs.iter().map(|&(from, to)| Edge {
                from,
                to,
                directed: false,
            }),
        )
    }

    pub fn with_coords(mut self, coords: Vec<Option<(f64, f64)>>) -> Self {
        assert_eq!(coords.len(), self.vertex_count());
        self.coords = coords;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    /// Number of stored edges; an undirected edge counts once.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count()
    }

    /// Vertices reachable from `v` in one move, ascending.
    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.pred[v]
    }

    /// True iff a robot may move from `u` to `v`.
    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.succ.get(u).is_some_and(|s| s.binary_search(&v).is_ok())
    }

    /// True iff the vertices are joined in at least one direction.
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    /// True iff moves are possible in both directions.
    pub fn mutual(&self, u: VertexId, v: VertexId) -> bool {
        self.has_arc(u, v) && self.has_arc(v, u)
    }

    pub fn coords(&self, v: VertexId) -> Option<(f64, f64)> {
        self.coords[v]
    }

    /// Average degree in the `|E| / |V|` convention.
    pub fn average_degree(&self) -> f64 {
        if self.vertex_count() == 0 {
            0.0
        } else {
            self.edge_count() as f64 / self.vertex_count() as f64
        }
    }

    /// Hop distances from every vertex to every other, following arc
    /// directions. `None` marks unreachable pairs.
    pub fn all_pairs_hops(&self) -> Vec<Vec<Option<u32>>> {
        let n = self.vertex_count();
        let mut table = vec![vec![None; n]; n];
        let mut queue = std::collections::VecDeque::new();
        for (src, row) in table.iter_mut().enumerate() {
            row[src] = Some(0);
            queue.push_back(src);
            while let Some(u) = queue.pop_front() {
                let d = row[u].unwrap();
                for &v in &self.succ[u] {
                    if row[v].is_none() {
                        row[v] = Some(d + 1);
                        queue.push_back(v);
                    }
                }
            }
        }
        table
    }

    /// Connected components, ignoring edge direction.
    pub fn weak_components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &v in self.succ[u].iter().chain(&self.pred[u]) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn from_json_str(text: &str) -> Result<Self, MapError> {
        let file: MapFile = serde_json::from_str(text).map_err(MapError::from_json)?;
        file.into_map()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MapError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| MapError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_file(&self) -> MapFile {
        MapFile {
            vertices: self
                .vertices()
                .map(|id| {
                    let c = self.coords[id];
                    VertexEntry {
                        id,
                        x: c.map(|c| c.0),
                        y: c.map(|c| c.1),
                    }
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeEntry {
                    from: e.from,
                    to: e.to,
                    directed: e.directed.then_some(true),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("map serializes")
    }
}

/// On-disk map format shared with the editor UI.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub from: VertexId,
    pub to: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directed: Option<bool>,
}

impl MapFile {
    pub fn into_map(self) -> Result<RoadMap, MapError> {
        let n = self.vertices.len();
        let mut coords = vec![None; n];
        let mut seen = vec![false; n];
        for (index, v) in self.vertices.iter().enumerate() {
            if v.id >= n {
                // Some id below n must then be missing.
                let missing = (0..n).find(|&i| !self.vertices.iter().any(|w| w.id == i)).unwrap_or(n);
                return Err(MapError::NonContiguousIds { missing });
            }
            if std::mem::replace(&mut seen[v.id], true) {
                return Err(MapError::DuplicateVertexId { index, id: v.id });
            }
            if let (Some(x), Some(y)) = (v.x, v.y) {
                coords[v.id] = Some((x, y));
            }
        }
        let edges = self.edges.iter().map(|e| Edge {
            from: e.from,
            to: e.to,
            directed: e.directed.unwrap_or(false),
        });
        Ok(RoadMap::new(n, edges)?.with_coords(coords))
    }
}

// ---------------------------------------------------------------------------
// Partitions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgraphKind {
    Stack,
    Hall,
    Clique,
    Ring,
    Singleton,
}

impl SubgraphKind {
    pub const ALL: [SubgraphKind; 5] = [
        SubgraphKind::Stack,
        SubgraphKind::Hall,
        SubgraphKind::Clique,
        SubgraphKind::Ring,
        SubgraphKind::Singleton,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SubgraphKind::Stack => "stack",
            SubgraphKind::Hall => "hall",
            SubgraphKind::Clique => "clique",
            SubgraphKind::Ring => "ring",
            SubgraphKind::Singleton => "singleton",
        }
    }
}

impl fmt::Display for SubgraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SubgraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SubgraphKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown subgraph kind `{s}`"))
    }
}

/// One subgraph of a partition. Member order is meaningful: stacks are
/// listed head first, halls end to end, rings in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgraphRef {
    pub id: usize,
    pub kind: SubgraphKind,
    pub members: Vec<VertexId>,
}

impl SubgraphRef {
    pub fn new(id: usize, kind: SubgraphKind, members: Vec<VertexId>) -> Self {
        SubgraphRef {
            id,
            kind,
            members: canonical_order(kind, members),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(&v)
    }

    /// Position of `v` in the member list.
    pub fn local_index(&self, v: VertexId) -> Option<usize> {
        self.members.iter().position(|&m| m == v)
    }
}

/// Canonical member order: halls start from the end with the smaller id,
/// rings start at the smallest id and continue towards its smaller
/// neighbour, cliques are sorted. Stacks keep their head-first order.
pub fn canonical_order(kind: SubgraphKind, mut members: Vec<VertexId>) -> Vec<VertexId> {
    match kind {
        SubgraphKind::Stack | SubgraphKind::Singleton => {}
        SubgraphKind::Hall => {
            if members.len() > 1 && members[members.len() - 1] < members[0] {
                members.reverse();
            }
        }
        SubgraphKind::Clique => members.sort_unstable(),
        SubgraphKind::Ring => {
            let n = members.len();
            if n > 2 {
                let (pos, _) = members.iter().enumerate().min_by_key(|&(_, v)| *v).unwrap();
                members.rotate_left(pos);
                if members[n - 1] < members[1] {
                    members[1..].reverse();
                }
            }
        }
    }
    members
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    subgraphs: Vec<SubgraphRef>,
    vertex_to_subgraph: Vec<Option<usize>>,
}

impl Partition {
    /// Builds a partition over `vertex_count` vertices. Member orders are
    /// canonicalised; nothing is validated (see [`validate_partition`]).
    pub fn new(vertex_count: usize, parts: Vec<(SubgraphKind, Vec<VertexId>)>) -> Self {
        let subgraphs: Vec<SubgraphRef> = parts
            .into_iter()
            .enumerate()
            .map(|(id, (kind, members))| SubgraphRef::new(id, kind, members))
            .collect();
        let mut vertex_to_subgraph = vec![None; vertex_count];
        for s in &subgraphs {
            for &v in &s.members {
                if let Some(slot) = vertex_to_subgraph.get_mut(v) {
                    slot.get_or_insert(s.id);
                }
            }
        }
        Partition {
            subgraphs,
            vertex_to_subgraph,
        }
    }

    /// Every vertex in its own singleton subgraph.
    pub fn singletons(vertex_count: usize) -> Self {
        Self::new(
            vertex_count,
            (0..vertex_count).map(|v| (SubgraphKind::Singleton, vec![v])).collect(),
        )
    }

    pub fn subgraphs(&self) -> &[SubgraphRef] {
        &self.subgraphs
    }

    pub fn subgraph(&self, id: usize) -> &SubgraphRef {
        &self.subgraphs[id]
    }

    pub fn len(&self) -> usize {
        self.subgraphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgraphs.is_empty()
    }

    pub fn subgraph_of(&self, v: VertexId) -> Option<usize> {
        self.vertex_to_subgraph.get(v).copied().flatten()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_to_subgraph.len()
    }

    pub fn from_json_str(text: &str, vertex_count: usize) -> Result<Self, MapError> {
        let file: PartitionFile = serde_json::from_str(text).map_err(MapError::from_json)?;
        Ok(file.into_partition(vertex_count))
    }

    pub fn load(path: impl AsRef<Path>, vertex_count: usize) -> Result<Self, MapError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| MapError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text, vertex_count)
    }

    pub fn to_file(&self) -> PartitionFile {
        PartitionFile {
            subgraphs: self
                .subgraphs
                .iter()
                .map(|s| SubgraphEntry {
                    kind: s.kind,
                    vertices: s.members.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("partition serializes")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionFile {
    pub subgraphs: Vec<SubgraphEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgraphEntry {
    pub kind: SubgraphKind,
    pub vertices: Vec<VertexId>,
}

impl PartitionFile {
    pub fn into_partition(self, vertex_count: usize) -> Partition {
        Partition::new(
            vertex_count,
            self.subgraphs.into_iter().map(|s| (s.kind, s.vertices)).collect(),
        )
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    EmptySubgraph {
        subgraph: usize,
    },
    UnknownVertex {
        subgraph: usize,
        vertex: VertexId,
    },
    Overlap {
        vertex: VertexId,
        first: usize,
        second: usize,
    },
    Uncovered {
        vertex: VertexId,
    },
    Structure {
        subgraph: usize,
        kind: SubgraphKind,
        detail: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySubgraph { subgraph } => write!(f, "subgraph {subgraph} is empty"),
            Violation::UnknownVertex { subgraph, vertex } => {
                write!(f, "subgraph {subgraph} names unknown vertex {vertex}")
            }
            Violation::Overlap { vertex, first, second } => {
                write!(f, "vertex {vertex} belongs to subgraphs {first} and {second}")
            }
            Violation::Uncovered { vertex } => write!(f, "vertex {vertex} is in no subgraph"),
            Violation::Structure { subgraph, kind, detail } => {
                write!(f, "subgraph {subgraph} is not a {kind}: {detail}")
            }
        }
    }
}

/// Checks that `p` is disjoint, covers the map, and that every subgraph has
/// the structure its kind declares. Returns every violation found.
pub fn validate_partition(map: &RoadMap, p: &Partition) -> Vec<Violation> {
    let n = map.vertex_count();
    let mut out = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for s in p.subgraphs() {
        if s.members.is_empty() {
            out.push(Violation::EmptySubgraph { subgraph: s.id });
            continue;
        }
        let mut known = true;
        for &v in &s.members {
            if v >= n {
                out.push(Violation::UnknownVertex {
                    subgraph: s.id,
                    vertex: v,
                });
                known = false;
                continue;
            }
            match owner[v] {
                Some(first) => out.push(Violation::Overlap {
                    vertex: v,
                    first,
                    second: s.id,
                }),
                None => owner[v] = Some(s.id),
            }
        }
        if known {
            if let Err(detail) = check_structure(map, s.kind, &s.members) {
                out.push(Violation::Structure {
                    subgraph: s.id,
                    kind: s.kind,
                    detail,
                });
            }
        }
    }
    for (vertex, o) in owner.iter().enumerate() {
        if o.is_none() {
            out.push(Violation::Uncovered { vertex });
        }
    }
    out
}

/// Checks that `members` (in the given order) induce a `kind` subgraph.
pub fn check_structure(map: &RoadMap, kind: SubgraphKind, members: &[VertexId]) -> Result<(), String> {
    let k = members.len();
    let distinct: BTreeSet<_> = members.iter().collect();
    if distinct.len() != k {
        return Err("repeated vertex".into());
    }
    match kind {
        SubgraphKind::Singleton => {
            if k != 1 {
                return Err(format!("has {k} vertices"));
            }
        }
        SubgraphKind::Stack | SubgraphKind::Hall => {
            for i in 0..k {
                for j in i + 1..k {
                    let (u, v) = (members[i], members[j]);
                    if j == i + 1 {
                        if !map.mutual(u, v) {
                            return Err(format!("{u} and {v} are not joined both ways"));
                        }
                    } else if map.adjacent(u, v) {
                        return Err(format!("extra edge between {u} and {v}"));
                    }
                }
            }
            if kind == SubgraphKind::Stack {
                for &v in &members[1..] {
                    let external = map
                        .successors(v)
                        .iter()
                        .chain(map.predecessors(v))
                        .find(|w| !members.contains(w));
                    if let Some(w) = external {
                        return Err(format!("non-head vertex {v} has an external edge to {w}"));
                    }
                }
            }
        }
        SubgraphKind::Clique => {
            for i in 0..k {
                for j in i + 1..k {
                    if !map.mutual(members[i], members[j]) {
                        return Err(format!("{} and {} are not joined both ways", members[i], members[j]));
                    }
                }
            }
        }
        SubgraphKind::Ring => {
            if k < 3 {
                return Err(format!("has {k} vertices, rings need at least 3"));
            }
            for i in 0..k {
                for j in i + 1..k {
                    let (u, v) = (members[i], members[j]);
                    let cyclic = j - i == 1 || (i == 0 && j == k - 1);
                    if cyclic {
                        if !map.mutual(u, v) {
                            return Err(format!("{u} and {v} are not joined both ways"));
                        }
                    } else if map.adjacent(u, v) {
                        return Err(format!("chord between {u} and {v}"));
                    }
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Reduced graph

#[derive(Debug, Error)]
#[error("invalid partition: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidPartition(pub Vec<Violation>);

/// The quotient graph of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGraph {
    pub node_count: usize,
    /// Unordered subgraph pairs `(x, y)` with `x < y`.
    pub edges: BTreeSet<(usize, usize)>,
    /// Traversable crossing arcs keyed by `(from subgraph, to subgraph)`,
    /// each list in `(u, v)` order.
    pub connecting_edges: BTreeMap<(usize, usize), Vec<(VertexId, VertexId)>>,
    neighbours: Vec<Vec<usize>>,
}

impl ReducedGraph {
    /// Subgraphs reachable from `x` by one crossing arc, ascending.
    pub fn neighbours(&self, x: usize) -> &[usize] {
        &self.neighbours[x]
    }

    pub fn connecting(&self, x: usize, y: usize) -> &[(VertexId, VertexId)] {
        self.connecting_edges.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|E(X)| / |V(X)|`.
    pub fn average_degree(&self) -> f64 {
        if self.node_count == 0 {
            0.0
        } else {
            self.edges.len() as f64 / self.node_count as f64
        }
    }
}

pub fn reduce(map: &RoadMap, p: &Partition) -> Result<ReducedGraph, InvalidPartition> {
    let violations = validate_partition(map, p);
    if !violations.is_empty() {
        return Err(InvalidPartition(violations));
    }
    let mut edges = BTreeSet::new();
    let mut connecting_edges: BTreeMap<(usize, usize), Vec<(VertexId, VertexId)>> = BTreeMap::new();
    for u in map.vertices() {
        let x = p.subgraph_of(u).unwrap();
        for &v in map.successors(u) {
            let y = p.subgraph_of(v).unwrap();
            if x != y {
                edges.insert((x.min(y), x.max(y)));
                connecting_edges.entry((x, y)).or_default().push((u, v));
            }
        }
    }
    let mut neighbours = vec![Vec::new(); p.len()];
    for &(x, y) in connecting_edges.keys() {
        neighbours[x].push(y);
    }
    Ok(ReducedGraph {
        node_count: p.len(),
        edges,
        connecting_edges,
        neighbours,
    })
}

// ---------------------------------------------------------------------------
// Composite space size

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot place {robots} robots on {vertices} vertices")]
pub struct TooManyRobots {
    pub robots: usize,
    pub vertices: usize,
}

/// Falling factorial `n! / (n - k)!`.
fn falling(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(n - i))
}

/// Number of collision-free states and transitions of the composite graph
/// of `k` robots on a map with `n` vertices and `e` undirected edges:
/// `n!/(n-k)!` and `k * e * (n-2)!/(n-k-1)!`.
pub fn count_composite_space(n: usize, k: usize, e: usize) -> Result<(BigUint, BigUint), TooManyRobots> {
    if k > n {
        return Err(TooManyRobots { robots: k, vertices: n });
    }
    let states = falling(n, k);
    let transitions = if k == 0 || n < 2 || k - 1 > n - 2 {
        BigUint::from(0u32)
    } else {
        BigUint::from(k) * BigUint::from(e) * falling(n - 2, k - 1)
    };
    Ok((states, transitions))
}
