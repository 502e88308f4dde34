use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{is_prefix, nested, CylinderUnion, Graph, SftError, Tuple};

/// Element of the full group: the prefix exchange `src · x -> dst · x` on
/// each cylinder `U(src)`, where the sources and the targets each partition `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TabularElement {
    graph: Graph,
    pairs: Vec<(Tuple, Tuple)>,
}

#[derive(Serialize, Deserialize)]
struct RawPair {
    src: Vec<String>,
    dst: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawTabular {
    graph: Graph,
    pairs: Vec<RawPair>,
}

/// Whether the tuples are pairwise non-nested and their cylinders cover `X`.
fn partition_problem(graph: &Graph, tuples: &[Tuple]) -> Option<String> {
    for (i, a) in tuples.iter().enumerate() {
        for b in &tuples[i + 1..] {
            if nested(a, b) {
                return Some(format!("cylinders U({}) and U({}) overlap", graph.show(a), graph.show(b)));
            }
        }
    }
    fn covers(graph: &Graph, tuples: &[Tuple], at: &Tuple) -> Option<Tuple> {
        if tuples.iter().any(|t| is_prefix(t, at)) {
            return None;
        }
        if !tuples.iter().any(|t| is_prefix(at, t)) {
            return Some(at.clone());
        }
        graph.children(at).into_iter().find_map(|e| covers(graph, tuples, &[at.as_slice(), &[e]].concat()))
    }
    covers(graph, tuples, &Vec::new()).map(|gap| format!("cylinder U({}) is not covered", graph.show(&gap)))
}

impl TabularElement {
    /// Validates compatibility and both partitions, then canonicalizes.
    pub fn new(graph: &Graph, pairs: Vec<(Tuple, Tuple)>) -> Result<Self, SftError> {
        let pairs = if pairs == [(Vec::new(), Vec::new())] {
            (0..graph.edges().len()).map(|e| (vec![e], vec![e])).collect()
        } else {
            pairs
        };
        for (s, t) in &pairs {
            for tuple in [s, t] {
                if tuple.is_empty() || !graph.is_admissible(tuple) {
                    return Err(SftError::Inadmissible(graph.show(tuple)));
                }
            }
            if graph.terminal(s) != graph.terminal(t) {
                return Err(SftError::Incompatible(graph.show(s), graph.show(t)));
            }
        }
        let sources: Vec<Tuple> = pairs.iter().map(|p| p.0.clone()).collect();
        let targets: Vec<Tuple> = pairs.iter().map(|p| p.1.clone()).collect();
        if let Some(problem) = partition_problem(graph, &sources) {
            return Err(SftError::NotPartition(format!("sources: {problem}")));
        }
        if let Some(problem) = partition_problem(graph, &targets) {
            return Err(SftError::NotPartition(format!("targets: {problem}")));
        }
        Ok(TabularElement::canonical(graph, pairs))
    }

    pub fn identity(graph: &Graph) -> Self {
        TabularElement::canonical(graph, (0..graph.edges().len()).map(|e| (vec![e], vec![e])).collect())
    }

    /// Exchanges `U(p)` and `U(q)` and fixes everything else. The tuples must be
    /// non-nested with the same terminal vertex.
    pub fn swap(graph: &Graph, p: &Tuple, q: &Tuple) -> Result<Self, SftError> {
        if nested(p, q) {
            return Err(SftError::NotPartition("swapped cylinders overlap".into()));
        }
        let mut pairs = vec![(p.clone(), q.clone()), (q.clone(), p.clone())];
        pairs.extend(complement(graph, &[p.clone(), q.clone()]).into_iter().map(|c| (c.clone(), c)));
        TabularElement::new(graph, pairs)
    }

    /// Merges complete sibling groups `(p e, q e)` into `(p, q)` until none is
    /// left; the result is the coarsest table and is unique.
    fn canonical(graph: &Graph, mut pairs: Vec<(Tuple, Tuple)>) -> Self {
        loop {
            let merge = pairs.iter().find_map(|(s, t)| {
                if s.len() < 2 || t.len() < 2 || s.last() != t.last() {
                    return None;
                }
                let (ps, pt) = (&s[..s.len() - 1], &t[..t.len() - 1]);
                let complete = graph.children(ps).iter().all(|&e| {
                    pairs.iter().any(|(s2, t2)| {
                        s2.len() == s.len() && is_prefix(ps, s2) && s2[s.len() - 1] == e && t2.len() == t.len() && is_prefix(pt, t2) && t2[t.len() - 1] == e
                    })
                });
                complete.then(|| (ps.to_vec(), pt.to_vec()))
            });
            let Some((ps, pt)) = merge else { break };
            pairs.retain(|(s, _)| !(s.len() == ps.len() + 1 && is_prefix(&ps, s)));
            pairs.push((ps, pt));
        }
        pairs.sort();
        TabularElement { graph: graph.clone(), pairs }
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let raw: RawTabular = serde_json::from_str(text).map_err(|e| e.to_string())?;
        TabularElement::from_raw(raw).map_err(|e| e.to_string())
    }

    fn from_raw(raw: RawTabular) -> Result<Self, SftError> {
        let graph = raw.graph;
        let pairs = raw
            .pairs
            .iter()
            .map(|p| Ok((graph.tuple_from_ids(&p.src)?, graph.tuple_from_ids(&p.dst)?)))
            .collect::<Result<Vec<_>, SftError>>()?;
        TabularElement::new(&graph, pairs)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let raw = RawTabular {
            graph: self.graph.clone(),
            pairs: self.pairs.iter().map(|(s, t)| RawPair { src: self.graph.ids(s), dst: self.graph.ids(t) }).collect(),
        };
        serde_json::to_value(raw).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pairs(&self) -> &[(Tuple, Tuple)] {
        &self.pairs
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|(s, t)| s == t)
    }

    pub fn depth(&self) -> usize {
        self.pairs.iter().map(|(s, t)| s.len().max(t.len())).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        TabularElement::canonical(&self.graph, self.pairs.iter().map(|(s, t)| (t.clone(), s.clone())).collect())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &TabularElement) -> Result<Self, SftError> {
        if self.graph != other.graph {
            return Err(SftError::GraphMismatch);
        }
        let mut pairs = Vec::new();
        for (s, t) in &other.pairs {
            if let Some((sa, ta)) = self.pairs.iter().find(|(sa, _)| is_prefix(sa, t)) {
                pairs.push((s.clone(), [ta.as_slice(), &t[sa.len()..]].concat()));
                continue;
            }
            for (sa, ta) in self.pairs.iter().filter(|(sa, _)| is_prefix(t, sa)) {
                pairs.push(([s.as_slice(), &sa[t.len()..]].concat(), ta.clone()));
            }
        }
        Ok(TabularElement::canonical(&self.graph, pairs))
    }

    pub fn conjugate_by(&self, h: &TabularElement) -> Result<Self, SftError> {
        h.compose(self)?.compose(&h.inverse())
    }

    /// Image of the finite word `w`, as far as it is determined; `None` if `w`
    /// is shorter than the source cylinder it lies in.
    pub fn eval_word(&self, word: &[usize]) -> Option<Tuple> {
        self.pairs.iter().find(|(s, _)| is_prefix(s, word)).map(|(s, t)| [t.as_slice(), &word[s.len()..]].concat())
    }

    /// Closure of the moved set: the cylinders of all non-trivial pairs. A pair
    /// `(s, t)` with `s ≠ t` moves every point of `U(s)` except possibly one,
    /// and `X` has no isolated points, so the closure is all of `U(s)`.
    pub fn support(&self) -> CylinderUnion {
        CylinderUnion::new(&self.graph, self.pairs.iter().filter(|(s, t)| s != t).map(|(s, _)| s.clone()))
    }

    /// Exact image of a cylinder union.
    pub fn image(&self, set: &CylinderUnion) -> CylinderUnion {
        let mut out = Vec::new();
        for p in set.tuples() {
            for (s, t) in &self.pairs {
                if is_prefix(s, p) {
                    out.push([t.as_slice(), &p[s.len()..]].concat());
                } else if is_prefix(p, s) {
                    out.push(t.clone());
                }
            }
        }
        CylinderUnion::new(&self.graph, out)
    }
}

/// Partition of `X` minus the given non-nested cylinders, by maximal cylinders.
pub(crate) fn complement(graph: &Graph, removed: &[Tuple]) -> Vec<Tuple> {
    fn walk(graph: &Graph, removed: &[Tuple], at: Tuple, out: &mut Vec<Tuple>) {
        if removed.iter().any(|r| is_prefix(r, &at)) {
            return;
        }
        if !removed.iter().any(|r| is_prefix(&at, r)) {
            out.push(at);
            return;
        }
        for e in graph.children(&at) {
            walk(graph, removed, [at.as_slice(), &[e]].concat(), out);
        }
    }
    let mut out = Vec::new();
    walk(graph, removed, Vec::new(), &mut out);
    out
}

/// Random admissible tuple of length `1..=max_len`.
pub(crate) fn random_tuple<R: Rng>(rng: &mut R, graph: &Graph, max_len: usize) -> Tuple {
    let length = rng.gen_range(1..=max_len);
    let mut tuple = Vec::with_capacity(length);
    for _ in 0..length {
        let options = graph.children(&tuple);
        tuple.push(*options.choose(rng).expect("every vertex has an out-edge"));
    }
    tuple
}

/// Random pair of non-nested tuples with the same terminal vertex, rejecting
/// candidates that fail `allowed`.
pub(crate) fn random_swap_pair<R: Rng>(
    rng: &mut R,
    graph: &Graph,
    max_len: usize,
    allowed: impl Fn(&Tuple) -> bool,
) -> Option<(Tuple, Tuple)> {
    for _ in 0..200 {
        let p = random_tuple(rng, graph, max_len);
        let q = random_tuple(rng, graph, max_len);
        if !nested(&p, &q) && graph.terminal(&p) == graph.terminal(&q) && allowed(&p) && allowed(&q) {
            return Some((p, q));
        }
    }
    None
}

/// Product of `complexity` random cylinder swaps of depth at most 3.
pub fn random_tabular(graph: &Graph, seed: u64, complexity: usize) -> TabularElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = TabularElement::identity(graph);
    for _ in 0..complexity {
        if let Some((p, q)) = random_swap_pair(&mut rng, graph, 3, |_| true) {
            let swap = TabularElement::swap(graph, &p, &q).expect("valid swap");
            g = swap.compose(&g).expect("same graph");
        }
    }
    g
}
