//! The base of clopen sets around a point `x0` and bounded searches for the
//! compressibility witnesses relative to it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::tabular::{complement, random_swap_pair, random_tuple};
use super::{nested, CylinderUnion, Graph, PeriodicPoint, SftError, TabularElement, Tuple};
use crate::witness::{Check, Condition, WitnessReport};

/// Default bound on the length of searched extensions.
pub const DEFAULT_SFT_DEPTH: usize = 6;

/// Most generators whose unions are enumerated by [`base_family`].
const MAX_GENERATORS: usize = 16;

/// Tuples of length at most `level` that leave `x0` at their last edge:
/// `p · e` with `p` a prefix of `x0` and `p · e` not. Every non-prefix
/// tuple of that length extends exactly one of them.
pub fn base_generators(graph: &Graph, x0: &PeriodicPoint, level: usize) -> Vec<Tuple> {
    let mut out = Vec::new();
    for i in 0..level {
        let prefix = x0.prefix(i);
        for e in graph.children(&prefix) {
            if e != x0.at(i) {
                out.push([prefix.as_slice(), &[e]].concat());
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Generators of the base up to `level` and all their nonempty unions, in
/// subset-bitmask order. At most the first 16 generators are combined.
pub fn base_family(graph: &Graph, x0: &PeriodicPoint, level: usize) -> Vec<CylinderUnion> {
    let generators: Vec<Tuple> = base_generators(graph, x0, level).into_iter().take(MAX_GENERATORS).collect();
    (1u32..1 << generators.len())
        .map(|mask| {
            let chosen = generators.iter().enumerate().filter(|(j, _)| mask & (1 << j) != 0).map(|(_, t)| t.clone());
            CylinderUnion::new(graph, chosen)
        })
        .collect()
}

/// Simultaneous exchange of `U(p_k)` and `U(q_k)` for pairwise non-nested tuples.
fn multi_swap(graph: &Graph, swaps: &[(Tuple, Tuple)]) -> Result<TabularElement, SftError> {
    let moved: Vec<Tuple> = swaps.iter().flat_map(|(p, q)| [p.clone(), q.clone()]).collect();
    let mut pairs: Vec<(Tuple, Tuple)> = swaps.iter().flat_map(|(p, q)| [(p.clone(), q.clone()), (q.clone(), p.clone())]).collect();
    pairs.extend(complement(graph, &moved).into_iter().map(|c| (c.clone(), c)));
    TabularElement::new(graph, pairs)
}

/// Cylinder `x0[..i] · e` with `e ≠ x0[i]` for the first admissible `i >= beyond`.
/// It misses every non-prefix tuple of length at most `beyond`, and `x0`.
fn far_region(graph: &Graph, x0: &PeriodicPoint, beyond: usize) -> Result<Tuple, SftError> {
    (beyond..beyond + x0.eventual_period() + graph.edges().len())
        .find_map(|i| {
            let prefix = x0.prefix(i);
            graph.children(&prefix).into_iter().find(|&e| e != x0.at(i)).map(|e| [prefix.as_slice(), &[e]].concat())
        })
        .ok_or_else(|| SftError::SearchExhausted("x0 never branches".into()))
}

/// Pairwise non-nested extensions `root · w_k` with prescribed terminal
/// vertices. All `w_k` share one length, the smallest `<= depth` that works,
/// so distinct choices are automatically non-nested.
fn distinct_extensions(graph: &Graph, root: &Tuple, terminals: &[usize], depth: usize) -> Result<Vec<Tuple>, SftError> {
    let mut layer = vec![root.clone()];
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|w| graph.children(w).into_iter().map(move |e| [w.as_slice(), &[e]].concat()))
            .collect();
        let mut free = layer.clone();
        let chosen: Option<Vec<Tuple>> = terminals
            .iter()
            .map(|&v| {
                let at = free.iter().position(|c| graph.terminal(c) == Some(v))?;
                Some(free.remove(at))
            })
            .collect();
        if let Some(chosen) = chosen {
            return Ok(chosen);
        }
    }
    Err(SftError::SearchExhausted(format!("no free extensions of length <= {depth}")))
}

fn identity_near(g: &TabularElement, x0: &PeriodicPoint) -> bool {
    let probe = x0.prefix(g.depth() + 1);
    g.pairs().iter().any(|(s, t)| s == t && s.len() <= probe.len() && probe[..s.len()] == s[..])
}

fn is_base_set(set: &CylinderUnion, x0: &PeriodicPoint) -> bool {
    !set.is_empty() && set.tuples().iter().all(|t| !t.is_empty() && !x0.has_prefix(t))
}

fn non_prefix_tuple<R: Rng>(rng: &mut R, graph: &Graph, x0: &PeriodicPoint) -> Tuple {
    loop {
        let t = random_tuple(rng, graph, 3);
        if !x0.has_prefix(&t) {
            return t;
        }
    }
}

fn random_base_set<R: Rng>(rng: &mut R, graph: &Graph, x0: &PeriodicPoint) -> CylinderUnion {
    let count = rng.gen_range(1..=3);
    CylinderUnion::new(graph, (0..count).map(|_| non_prefix_tuple(rng, graph, x0)))
}

fn disjoint_base_set<R: Rng>(rng: &mut R, graph: &Graph, x0: &PeriodicPoint, avoid: &CylinderUnion) -> Option<CylinderUnion> {
    let tuples: Vec<Tuple> = (0..200)
        .map(|_| non_prefix_tuple(rng, graph, x0))
        .filter(|t| avoid.tuples().iter().all(|a| !nested(a, t)))
        .take(2)
        .collect();
    (!tuples.is_empty()).then(|| CylinderUnion::new(graph, tuples))
}

fn random_trivial_near<R: Rng>(rng: &mut R, graph: &Graph, x0: &PeriodicPoint) -> TabularElement {
    let mut g = TabularElement::identity(graph);
    for _ in 0..rng.gen_range(1..=3) {
        if let Some((p, q)) = random_swap_pair(rng, graph, 3, |t| !x0.has_prefix(t)) {
            g = TabularElement::swap(graph, &p, &q).expect("valid swap").compose(&g).expect("same graph");
        }
    }
    g
}

fn terminals(graph: &Graph, set: &CylinderUnion) -> Vec<usize> {
    set.tuples().iter().map(|t| graph.terminal(t).expect("nonempty tuple")).collect()
}

/// `g` with `g(U1) ⊆ U2`: move `U1` into a far region near `x0`, then from
/// there into the first cylinder of `U2`.
fn map_into(graph: &Graph, x0: &PeriodicPoint, u1: &CylinderUnion, u2: &CylinderUnion, depth: usize) -> Result<TabularElement, SftError> {
    let region = far_region(graph, x0, u1.max_length().max(u2.max_length()))?;
    let ends = terminals(graph, u1);
    let parked = distinct_extensions(graph, &region, &ends, depth)?;
    let landing = distinct_extensions(graph, &u2.tuples()[0], &ends, depth)?;
    let first: Vec<_> = u1.tuples().iter().cloned().zip(parked.iter().cloned()).collect();
    let second: Vec<_> = parked.into_iter().zip(landing).collect();
    multi_swap(graph, &second)?.compose(&multi_swap(graph, &first)?)
}

/// `g` with `g(U1) ∩ U3 = ∅` and `supp(g) ∩ U2 = ∅`: one exchange of `U1`
/// with a far region that misses all three sets.
fn displace(graph: &Graph, x0: &PeriodicPoint, sets: [&CylinderUnion; 3], depth: usize) -> Result<TabularElement, SftError> {
    let beyond = sets.iter().map(|s| s.max_length()).max().unwrap_or(0);
    let region = far_region(graph, x0, beyond)?;
    let parked = distinct_extensions(graph, &region, &terminals(graph, sets[0]), depth)?;
    multi_swap(graph, &sets[0].tuples().iter().cloned().zip(parked).collect::<Vec<_>>())
}

fn set_json(graph: &Graph, set: &CylinderUnion) -> serde_json::Value {
    json!(set.to_ids(graph))
}

fn report(condition: Condition, inputs: serde_json::Value, outcome: Result<(serde_json::Value, Vec<Check>), SftError>) -> WitnessReport {
    match outcome {
        Ok((witness, checks)) => WitnessReport { condition, inputs, witness, checks, branch: None },
        Err(e) => WitnessReport {
            condition,
            inputs,
            witness: json!({ "error": e.to_string() }),
            checks: vec![Check::new("constructed", false)],
            branch: None,
        },
    }
}

/// Runs bounded witness searches for conditions (i)-(iv) on `sample_size`
/// pseudo-random instances. Failed searches are reported, not raised.
pub fn check_base_conditions(graph: &Graph, x0: &PeriodicPoint, sample_size: usize, seed: u64, depth: usize) -> Vec<WitnessReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(4 * sample_size);
    let fallback = CylinderUnion::new(graph, base_generators(graph, x0, 1));
    for _ in 0..sample_size {
        let g = random_trivial_near(&mut rng, graph, x0);
        let support = g.support();
        let cover = if support.is_empty() { fallback.clone() } else { support.clone() };
        reports.push(report(
            Condition::Cover,
            json!({ "g": g.to_json_value() }),
            Ok((
                set_json(graph, &cover),
                vec![
                    Check::new("base_set_valid", is_base_set(&cover, x0)),
                    Check::new("support_inside", support.is_subset_of(graph, &cover)),
                ],
            )),
        ));

        let (u1, u2) = (random_base_set(&mut rng, graph, x0), random_base_set(&mut rng, graph, x0));
        let inputs = json!({ "u1": set_json(graph, &u1), "u2": set_json(graph, &u2) });
        let outcome = map_into(graph, x0, &u1, &u2, depth).map(|h| {
            let checks = vec![
                Check::new("image_subset", h.image(&u1).is_subset_of(graph, &u2)),
                Check::new("identity_near_x0", identity_near(&h, x0)),
            ];
            (h.to_json_value(), checks)
        });
        reports.push(report(Condition::MapInto, inputs, outcome));

        let v1 = random_base_set(&mut rng, graph, x0);
        let v3 = random_base_set(&mut rng, graph, x0);
        let v2 = disjoint_base_set(&mut rng, graph, x0, &v1);
        let inputs = json!({
            "u1": set_json(graph, &v1),
            "u2": v2.as_ref().map(|v| set_json(graph, v)),
            "u3": set_json(graph, &v3),
        });
        let outcome = v2
            .ok_or_else(|| SftError::SearchExhausted("no base set disjoint from U1".into()))
            .and_then(|v2| {
                let h = displace(graph, x0, [&v1, &v2, &v3], depth)?;
                let checks = vec![
                    Check::new("image_avoids_u3", !h.image(&v1).intersects(&v3)),
                    Check::new("support_avoids_u2", !h.support().intersects(&v2)),
                    Check::new("identity_near_x0", identity_near(&h, x0)),
                ];
                Ok((h.to_json_value(), checks))
            });
        reports.push(report(Condition::Displace, inputs, outcome));

        let joined = u1.union(graph, &u2);
        reports.push(report(
            Condition::Join,
            json!({ "u1": set_json(graph, &u1), "u2": set_json(graph, &u2) }),
            Ok((
                set_json(graph, &joined),
                vec![
                    Check::new("contains_u1", u1.is_subset_of(graph, &joined)),
                    Check::new("contains_u2", u2.is_subset_of(graph, &joined)),
                    Check::new("base_set_valid", is_base_set(&joined, x0)),
                ],
            )),
        ));
    }
    reports
}
