//! Full groups of one-sided shifts of finite type given by a finite graph.
//!
//! Points of `X` are infinite edge paths. A finite path (a tuple of edge
//! indices) names the cylinder of points that start with it, and an element
//! of the full group is a table of prefix exchanges between two cylinder
//! partitions of `X`.

mod base;
mod cylinders;
mod oracle;
mod tabular;
mod thompson;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plgroup::PlError;

pub use base::{base_family, base_generators, check_base_conditions, DEFAULT_SFT_DEPTH};
pub use cylinders::CylinderUnion;
pub use oracle::agrees_pointwise;
pub use tabular::{random_tabular, TabularElement};
pub use thompson::{from_thompson, to_thompson};

/// Edge path, as indices into [`Graph::edges`]. The empty path names `X`.
pub type Tuple = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SftError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("adjacency matrix is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("adjacency matrix is a permutation matrix")]
    PermutationMatrix,
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("tuple {0} is not admissible")]
    Inadmissible(String),
    #[error("pair {0} -> {1} is not compatible (terminal vertices differ)")]
    Incompatible(String, String),
    #[error("{0}")]
    NotPartition(String),
    #[error("elements are defined over different graphs")]
    GraphMismatch,
    #[error("graph is not a full shift")]
    NotFullShift,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error(transparent)]
    Pl(#[from] PlError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub from: String,
    pub to: String,
}

/// Validated directed multigraph with an irreducible, non-permutation adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    source: Vec<usize>,
    target: Vec<usize>,
    out: Vec<Vec<usize>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph { vertices: g.vertices, edges: g.edges }
    }
}

impl TryFrom<RawGraph> for Graph {
    type Error = SftError;

    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        Graph::new(raw.vertices, raw.edges)
    }
}

fn reachable(start: usize, adjacency: &[Vec<usize>]) -> Vec<bool> {
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self, SftError> {
        if edges.is_empty() {
            return Err(SftError::InvalidGraph("no edges".into()));
        }
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if index.len() != vertices.len() {
            return Err(SftError::InvalidGraph("duplicate vertex name".into()));
        }
        let mut ids = std::collections::HashSet::new();
        let lookup = |name: &str| {
            index.get(name).copied().ok_or_else(|| SftError::InvalidGraph(format!("unknown vertex {name:?}")))
        };
        let (mut source, mut target) = (Vec::new(), Vec::new());
        for e in &edges {
            if !ids.insert(e.id.as_str()) {
                return Err(SftError::InvalidGraph(format!("duplicate edge id {:?}", e.id)));
            }
            source.push(lookup(&e.from)?);
            target.push(lookup(&e.to)?);
        }
        let mut out = vec![Vec::new(); vertices.len()];
        let mut forward = vec![Vec::new(); vertices.len()];
        let mut backward = vec![Vec::new(); vertices.len()];
        for (i, (&s, &t)) in source.iter().zip(&target).enumerate() {
            out[s].push(i);
            forward[s].push(t);
            backward[t].push(s);
        }
        for (direction, adjacency) in [("from", &forward), ("to", &backward)] {
            if let Some(v) = reachable(0, adjacency).iter().position(|&seen| !seen) {
                return Err(SftError::NotIrreducible(format!(
                    "no path {direction} {:?} reaches {:?}",
                    vertices[0], vertices[v]
                )));
            }
        }
        let in_degree = |v: usize| backward[v].len();
        if (0..vertices.len()).all(|v| out[v].len() == 1 && in_degree(v) == 1) {
            return Err(SftError::PermutationMatrix);
        }
        Ok(Graph { vertices, edges, source, target, out })
    }

    /// One vertex with `n` loops labelled `0, ..., n-1`.
    pub fn full_shift(n: usize) -> Result<Self, SftError> {
        let edges = (0..n).map(|i| Edge { id: i.to_string(), from: "v".into(), to: "v".into() }).collect();
        Graph::new(vec!["v".into()], edges)
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Alphabet size when the graph is a full shift.
    pub fn full_shift_arity(&self) -> Option<usize> {
        (self.vertices.len() == 1).then_some(self.edges.len())
    }

    /// Terminal vertex of a nonempty tuple.
    pub fn terminal(&self, tuple: &[usize]) -> Option<usize> {
        tuple.last().map(|&e| self.target[e])
    }

    /// Edges that may follow `tuple`; every edge for the empty tuple.
    pub fn children(&self, tuple: &[usize]) -> Vec<usize> {
        match self.terminal(tuple) {
            Some(v) => self.out[v].clone(),
            None => (0..self.edges.len()).collect(),
        }
    }

    pub fn out_edges(&self, vertex: usize) -> &[usize] {
        &self.out[vertex]
    }

    pub fn edge_source(&self, e: usize) -> usize {
        self.source[e]
    }

    pub fn is_admissible(&self, tuple: &[usize]) -> bool {
        tuple.iter().all(|&e| e < self.edges.len()) && tuple.windows(2).all(|w| self.target[w[0]] == self.source[w[1]])
    }

    pub fn tuple_from_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Tuple, SftError> {
        let tuple = ids
            .iter()
            .map(|id| {
                let id = id.as_ref();
                self.edges.iter().position(|e| e.id == id).ok_or_else(|| SftError::UnknownEdge(id.to_string()))
            })
            .collect::<Result<Tuple, _>>()?;
        if !self.is_admissible(&tuple) {
            return Err(SftError::Inadmissible(self.show(&tuple)));
        }
        Ok(tuple)
    }

    pub fn ids(&self, tuple: &[usize]) -> Vec<String> {
        tuple.iter().map(|&e| self.edges[e].id.clone()).collect()
    }

    /// Tuple rendered as its edge ids separated by dots, or `∅` when empty.
    pub fn show(&self, tuple: &[usize]) -> String {
        if tuple.is_empty() {
            return "∅".into();
        }
        let ids = self.ids(tuple);
        if ids.iter().all(|id| id.chars().count() == 1) {
            ids.concat()
        } else {
            ids.join(".")
        }
    }

    /// All admissible tuples of exactly `length` edges, in lexicographic order.
    pub fn words(&self, length: usize) -> Vec<Tuple> {
        let mut layer: Vec<Tuple> = vec![Vec::new()];
        for _ in 0..length {
            layer = layer
                .iter()
                .flat_map(|w| self.children(w).into_iter().map(move |e| [w.as_slice(), &[e]].concat()))
                .collect();
        }
        layer
    }
}

/// Eventually periodic point `preperiod · period · period · ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicPoint {
    preperiod: Tuple,
    period: Tuple,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    preperiod: Vec<String>,
    period: Vec<String>,
}

impl PeriodicPoint {
    pub fn new(graph: &Graph, preperiod: Tuple, period: Tuple) -> Result<Self, SftError> {
        if period.is_empty() {
            return Err(SftError::Inadmissible("empty period".into()));
        }
        let unrolled: Tuple = preperiod.iter().chain(&period).chain(&period).copied().collect();
        if !graph.is_admissible(&unrolled) {
            return Err(SftError::Inadmissible(graph.show(&unrolled)));
        }
        Ok(PeriodicPoint { preperiod, period })
    }

    pub fn from_json(graph: &Graph, text: &str) -> Result<Self, SftError> {
        let raw: RawPoint = serde_json::from_str(text).map_err(|e| SftError::InvalidGraph(e.to_string()))?;
        PeriodicPoint::new(graph, graph.tuple_from_ids(&raw.preperiod)?, graph.tuple_from_ids(&raw.period)?)
    }

    pub fn to_json(&self, graph: &Graph) -> serde_json::Value {
        serde_json::to_value(RawPoint { preperiod: graph.ids(&self.preperiod), period: graph.ids(&self.period) })
            .expect("serializable")
    }

    /// Edge at position `i`.
    pub fn at(&self, i: usize) -> usize {
        match i.checked_sub(self.preperiod.len()) {
            None => self.preperiod[i],
            Some(j) => self.period[j % self.period.len()],
        }
    }

    pub fn prefix(&self, length: usize) -> Tuple {
        (0..length).map(|i| self.at(i)).collect()
    }

    pub fn has_prefix(&self, tuple: &[usize]) -> bool {
        tuple.iter().enumerate().all(|(i, &e)| self.at(i) == e)
    }

    pub fn eventual_period(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph({} vertices, {} edges)", self.vertices.len(), self.edges.len())
    }
}

pub(crate) fn is_prefix(p: &[usize], w: &[usize]) -> bool {
    p.len() <= w.len() && &w[..p.len()] == p
}

pub(crate) fn nested(p: &[usize], q: &[usize]) -> bool {
    is_prefix(p, q) || is_prefix(q, p)
}

#[cfg(test)]
mod tests;
