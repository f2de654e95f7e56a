//! Working state of an interactive partitioning session.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partitioner::{suggest, Candidate};
use crate::planners::{run_planner, Algorithm, PlannerConfig, PlannerError};
use crate::plans::{ConcretePlan, Problem};
use crate::roadmap::{
    check_structure, validate_partition, Partition, RoadMap, SubgraphEntry, SubgraphKind, SubgraphRef, VertexId,
    Violation,
};
use crate::search::{HeuristicMode, MetricsRow, SearchOptions, Strategy};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("vertex {vertex} already belongs to subgraph {subgraph}")]
    Conflict { vertex: VertexId, subgraph: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error("cannot save partition: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuggestRequest {
    pub seed: (VertexId, VertexId),
    #[serde(default)]
    pub kind: Option<SubgraphKind>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommitRequest {
    pub subgraph: SubgraphEntry,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreviewRequest {
    pub problem: Problem,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub strategy: Strategy,
    #[serde(default)]
    pub heuristic: HeuristicMode,
    #[serde(default = "preview_nodes")]
    pub max_nodes: u64,
}

fn preview_nodes() -> u64 {
    1_000_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreviewResponse {
    pub solved: bool,
    pub plan: Option<ConcretePlan>,
    pub abstract_plans: Vec<String>,
    pub metrics: MetricsRow,
}

/// One map, the subgraphs committed so far, and an undo history. With a
/// persist path the partition file is rewritten after every change.
pub struct Session {
    map: RoadMap,
    parts: Vec<(SubgraphKind, Vec<VertexId>)>,
    history: Vec<Vec<(SubgraphKind, Vec<VertexId>)>>,
    persist: Option<PathBuf>,
}

impl Session {
    pub fn new(map: RoadMap) -> Self {
        Session {
            map,
            parts: Vec::new(),
            history: Vec::new(),
            persist: None,
        }
    }

    /// Starts from an existing partition, all of it counted as committed.
    pub fn with_partition(mut self, p: &Partition) -> Self {
        self.parts = p.subgraphs().iter().map(|s| (s.kind, s.members.clone())).collect();
        self
    }

    pub fn persist_to(mut self, path: impl Into<PathBuf>) -> Self {
        self.persist = Some(path.into());
        self
    }

    pub fn map(&self) -> &RoadMap {
        &self.map
    }

    /// The committed subgraphs. Uncovered vertices are absent.
    pub fn partition(&self) -> Partition {
        Partition::new(self.map.vertex_count(), self.parts.clone())
    }

    /// The working partition with every uncovered vertex as a singleton.
    pub fn completed(&self) -> Partition {
        let mut parts = self.parts.clone();
        let used = self.used();
        parts.extend(
            (0..self.map.vertex_count())
                .filter(|&v| !used[v])
                .map(|v| (SubgraphKind::Singleton, vec![v])),
        );
        Partition::new(self.map.vertex_count(), parts)
    }

    pub fn used(&self) -> Vec<bool> {
        let mut used = vec![false; self.map.vertex_count()];
        for (_, members) in &self.parts {
            for &v in members {
                used[v] = true;
            }
        }
        used
    }

    /// Candidates grown from the seed pair over unused vertices, biggest
    /// first. Repeated requests give the same answer.
    pub fn suggest(&self, req: &SuggestRequest) -> Result<Vec<Candidate>, SessionError> {
        let (u, v) = req.seed;
        let n = self.map.vertex_count();
        if u >= n || v >= n {
            return Err(SessionError::Invalid(format!("seed ({u}, {v}) is outside the map")));
        }
        if !self.map.mutual(u, v) {
            return Err(SessionError::Invalid(format!("{u} and {v} are not joined both ways")));
        }
        let used = self.used();
        if let Some(w) = [u, v].into_iter().find(|&w| used[w]) {
            return Err(self.conflict(w));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(((u as u64) << 32) | v as u64);
        let mut out = suggest(&self.map, &used, (u, v), &mut rng);
        if let Some(k) = req.kind {
            out.retain(|c| c.kind == k);
        }
        Ok(out)
    }

    fn conflict(&self, vertex: VertexId) -> SessionError {
        let subgraph = self
            .parts
            .iter()
            .position(|(_, m)| m.contains(&vertex))
            .unwrap_or_default();
        SessionError::Conflict { vertex, subgraph }
    }

    /// Adds a subgraph. Overlap with committed vertices is a conflict; an
    /// ill-formed structure is invalid. Returns the new subgraph's id.
    pub fn commit(&mut self, entry: SubgraphEntry) -> Result<usize, SessionError> {
        let n = self.map.vertex_count();
        if let Some(&v) = entry.vertices.iter().find(|&&v| v >= n) {
            return Err(SessionError::Invalid(format!("vertex {v} is outside the map")));
        }
        let used = self.used();
        if let Some(&v) = entry.vertices.iter().find(|&&v| used[v]) {
            return Err(self.conflict(v));
        }
        let s = SubgraphRef::new(self.parts.len(), entry.kind, entry.vertices);
        if s.members.is_empty() {
            return Err(SessionError::Invalid("subgraph has no vertices".into()));
        }
        check_structure(&self.map, s.kind, &s.members)
            .map_err(|d| SessionError::Invalid(format!("not a {}: {d}", s.kind)))?;
        self.history.push(self.parts.clone());
        self.parts.push((s.kind, s.members));
        self.save()?;
        Ok(self.parts.len() - 1)
    }

    pub fn undo(&mut self) -> Result<(), SessionError> {
        self.parts = self.history.pop().ok_or(SessionError::NothingToUndo)?;
        self.save()
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_partition(&self.map, &self.partition())
    }

    /// Plans on the completed working partition.
    pub fn preview(&self, req: &PreviewRequest) -> Result<PreviewResponse, SessionError> {
        req.problem
            .validate(&self.map)
            .map_err(|e| SessionError::Invalid(e.to_string()))?;
        let cfg = PlannerConfig {
            search: SearchOptions::new(req.strategy).with_max_nodes(req.max_nodes),
            heuristic: req.heuristic,
        };
        let partition = self.completed();
        let out = run_planner(req.algorithm, &self.map, Some(&partition), &req.problem, &cfg)?;
        Ok(PreviewResponse {
            solved: out.solved(),
            abstract_plans: out.abstract_plans.iter().map(|a| a.to_string()).collect(),
            metrics: out.metrics.row("preview", req.algorithm.name()),
            plan: out.plan,
        })
    }

    fn save(&self) -> Result<(), SessionError> {
        if let Some(path) = &self.persist {
            std::fs::write(path, self.partition().to_json())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c6() -> RoadMap {
        RoadMap::undirected(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap()
    }

    #[test]
    fn ring_ranked_first_on_a_cycle() {
        let s = Session::new(c6());
        let got = s
            .suggest(&SuggestRequest {
                seed: (0, 1),
                kind: None,
            })
            .unwrap();
        assert_eq!(got[0].kind, SubgraphKind::Ring);
        assert_eq!(got[0].len(), 6);
        let halls = s
            .suggest(&SuggestRequest {
                seed: (0, 1),
                kind: Some(SubgraphKind::Hall),
            })
            .unwrap();
        assert!(halls.iter().all(|c| c.kind == SubgraphKind::Hall));
    }

    #[test]
    fn commit_conflict_and_undo() {
        let mut s = Session::new(c6());
        let before = s.partition().to_json();
        s.commit(SubgraphEntry {
            kind: SubgraphKind::Hall,
            vertices: vec![0, 1, 2],
        })
        .unwrap();
        let again = s.commit(SubgraphEntry {
            kind: SubgraphKind::Hall,
            vertices: vec![2, 3],
        });
        assert!(matches!(again, Err(SessionError::Conflict { vertex: 2, subgraph: 0 })));
        let chord = s.commit(SubgraphEntry {
            kind: SubgraphKind::Clique,
            vertices: vec![3, 5],
        });
        assert!(matches!(chord, Err(SessionError::Invalid(_))));
        s.undo().unwrap();
        assert_eq!(s.partition().to_json(), before);
        assert!(matches!(s.undo(), Err(SessionError::NothingToUndo)));
    }

    #[test]
    fn covering_partition_validates_clean() {
        let mut s = Session::new(c6());
        s.commit(SubgraphEntry {
            kind: SubgraphKind::Hall,
            vertices: vec![0, 1, 2],
        })
        .unwrap();
        assert_eq!(s.validate().len(), 3);
        s.commit(SubgraphEntry {
            kind: SubgraphKind::Hall,
            vertices: vec![3, 4, 5],
        })
        .unwrap();
        assert!(s.validate().is_empty());
    }

    #[test]
    fn preview_fills_singletons() {
        let s = Session::new(c6());
        let req: PreviewRequest = serde_json::from_str(
            r#"{"problem":{"robots":[{"id":1,"start":0,"goal":3},{"id":2,"start":3,"goal":0}]},
                "algorithm":"subgraph"}"#,
        )
        .unwrap();
        let got = s.preview(&req).unwrap();
        assert!(got.solved);
        assert_eq!(got.metrics.outcome, "solved");
    }

    #[test]
    fn persists_on_commit() {
        let dir = std::env::temp_dir().join(format!("sgplan-session-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("work.part.json");
        let mut s = Session::new(c6()).persist_to(&path);
        s.commit(SubgraphEntry {
            kind: SubgraphKind::Ring,
            vertices: vec![0, 1, 2, 3, 4, 5],
        })
        .unwrap();
        let back = Partition::load(&path, 6).unwrap();
        assert_eq!(back, s.partition());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
