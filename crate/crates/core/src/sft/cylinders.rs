use std::fmt;

use super::{is_prefix, nested, Graph, Tuple};

/// Finite union of cylinders in canonical form: sorted, no tuple is a prefix
/// of another, and no complete family of siblings is left unmerged. The
/// single empty tuple stands for all of `X`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CylinderUnion {
    tuples: Vec<Tuple>,
}

impl CylinderUnion {
    pub fn empty() -> Self {
        CylinderUnion::default()
    }

    pub fn new(graph: &Graph, tuples: impl IntoIterator<Item = Tuple>) -> Self {
        let mut tuples: Vec<Tuple> = tuples.into_iter().collect();
        tuples.sort();
        tuples.dedup();
        let mut kept: Vec<Tuple> = Vec::with_capacity(tuples.len());
        // Sorted order puts every prefix before its extensions.
        for t in tuples {
            if !kept.iter().any(|k| is_prefix(k, &t)) {
                kept.push(t);
            }
        }
        loop {
            let parent = kept.iter().filter(|t| !t.is_empty()).find_map(|t| {
                let parent = &t[..t.len() - 1];
                let complete =
                    graph.children(parent).iter().all(|&e| kept.iter().any(|k| k.len() == t.len() && is_prefix(parent, k) && k[t.len() - 1] == e));
                complete.then(|| parent.to_vec())
            });
            let Some(parent) = parent else { break };
            kept.retain(|k| !is_prefix(&parent, k));
            kept.push(parent);
            kept.sort();
        }
        CylinderUnion { tuples: kept }
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn is_everything(&self) -> bool {
        self.tuples.len() == 1 && self.tuples[0].is_empty()
    }

    pub fn max_length(&self) -> usize {
        self.tuples.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn union(&self, graph: &Graph, other: &CylinderUnion) -> CylinderUnion {
        CylinderUnion::new(graph, self.tuples.iter().chain(&other.tuples).cloned())
    }

    /// Two cylinders meet iff one tuple is a prefix of the other.
    pub fn intersects(&self, other: &CylinderUnion) -> bool {
        self.tuples.iter().any(|a| other.tuples.iter().any(|b| nested(a, b)))
    }

    pub fn contains_cylinder(&self, graph: &Graph, tuple: &[usize]) -> bool {
        if self.tuples.iter().any(|t| is_prefix(t, tuple)) {
            return true;
        }
        if !self.tuples.iter().any(|t| is_prefix(tuple, t)) {
            return false;
        }
        graph.children(tuple).into_iter().all(|e| self.contains_cylinder(graph, &[tuple, &[e]].concat()))
    }

    pub fn is_subset_of(&self, graph: &Graph, other: &CylinderUnion) -> bool {
        self.tuples.iter().all(|t| other.contains_cylinder(graph, t))
    }

    pub fn display(&self, graph: &Graph) -> String {
        if self.is_empty() {
            return "∅".into();
        }
        if self.is_everything() {
            return "X".into();
        }
        self.tuples.iter().map(|t| format!("U({})", graph.show(t))).collect::<Vec<_>>().join(" ∪ ")
    }

    pub fn to_ids(&self, graph: &Graph) -> Vec<Vec<String>> {
        self.tuples.iter().map(|t| graph.ids(t)).collect()
    }
}

impl fmt::Display for CylinderUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.tuples)
    }
}
