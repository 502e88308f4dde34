use proptest::prelude::*;

use super::*;
use crate::exactnum::Rational;
use crate::plgroup::{random_element, Family, GroupDescriptor};

fn two_shift() -> Graph {
    Graph::full_shift(2).unwrap()
}

fn t(graph: &Graph, word: &str) -> Tuple {
    let ids: Vec<String> = word.chars().map(|c| c.to_string()).collect();
    graph.tuple_from_ids(&ids).unwrap()
}

/// Swap of `U(01)` and `U(10)` on the full 2-shift.
fn s(graph: &Graph) -> TabularElement {
    TabularElement::swap(graph, &t(graph, "01"), &t(graph, "10")).unwrap()
}

fn edge_swap(graph: &Graph) -> TabularElement {
    TabularElement::swap(graph, &t(graph, "0"), &t(graph, "1")).unwrap()
}

fn zeros() -> PeriodicPoint {
    PeriodicPoint::new(&two_shift(), vec![], vec![0]).unwrap()
}

fn agrees(a: &TabularElement, b: &TabularElement, composed: &TabularElement, depth: usize) -> bool {
    agrees_pointwise(a, b, composed, depth).unwrap()
}

#[test]
fn graph_validation() {
    assert!(Graph::full_shift(2).is_ok());
    assert_eq!(Graph::full_shift(1).unwrap_err(), SftError::PermutationMatrix);
    let one_way = r#"{"vertices":["1","2"],"edges":[{"id":"a","from":"1","to":"2"},{"id":"b","from":"1","to":"2"}]}"#;
    assert!(Graph::from_json(one_way).unwrap_err().contains("not irreducible"));
    let golden = r#"{"vertices":["a","b"],"edges":[{"id":"x","from":"a","to":"a"},{"id":"y","from":"a","to":"b"},{"id":"z","from":"b","to":"a"}]}"#;
    let g = Graph::from_json(golden).unwrap();
    assert_eq!(g.vertex_count(), 2);
    assert_eq!(serde_json::to_string(&g).unwrap(), golden);
    let cycle = r#"{"vertices":["a","b"],"edges":[{"id":"x","from":"a","to":"b"},{"id":"y","from":"b","to":"a"}]}"#;
    assert!(Graph::from_json(cycle).unwrap_err().contains("permutation"));
    assert!(Graph::from_json(r#"{"vertices":["a"],"edges":[]}"#).is_err());
}

#[test]
fn tabular_validation() {
    let g = two_shift();
    let bad_cover = vec![(t(&g, "0"), t(&g, "0"))];
    assert!(matches!(TabularElement::new(&g, bad_cover), Err(SftError::NotPartition(_))));
    let overlap = vec![(t(&g, "0"), t(&g, "0")), (t(&g, "01"), t(&g, "1")), (t(&g, "1"), t(&g, "1"))];
    assert!(matches!(TabularElement::new(&g, overlap), Err(SftError::NotPartition(_))));
    let identity = TabularElement::new(&g, vec![(vec![], vec![])]).unwrap();
    assert_eq!(identity, TabularElement::identity(&g));
    let golden: Graph = serde_json::from_str(
        r#"{"vertices":["a","b"],"edges":[{"id":"x","from":"a","to":"a"},{"id":"y","from":"a","to":"b"},{"id":"z","from":"b","to":"a"}]}"#,
    )
    .unwrap();
    let incompatible = vec![(vec![0], vec![1]), (vec![1], vec![0]), (vec![2], vec![2])];
    assert!(matches!(TabularElement::new(&golden, incompatible), Err(SftError::Incompatible(..))));
}

#[test]
fn canonical_form_merges_refinements() {
    let g = two_shift();
    let refined = vec![
        (t(&g, "00"), t(&g, "10")),
        (t(&g, "01"), t(&g, "11")),
        (t(&g, "1"), t(&g, "0")),
    ];
    assert_eq!(TabularElement::new(&g, refined).unwrap(), edge_swap(&g));
}

#[test]
fn compose_examples() {
    let g = two_shift();
    let s = s(&g);
    assert!(s.compose(&s).unwrap().is_identity());
    assert_eq!(s.compose(&TabularElement::identity(&g)).unwrap(), s);
    let e = edge_swap(&g);
    let composed = s.compose(&e).unwrap();
    assert!(agrees(&s, &e, &composed, 4));
    assert!(agrees(&e, &s, &e.compose(&s).unwrap(), 4));
    assert_ne!(composed, e.compose(&s).unwrap());
}

#[test]
fn json_round_trip() {
    let g = two_shift();
    let s = s(&g);
    let text = s.to_json();
    assert!(text.contains(r#"{"src":["0","1"],"dst":["1","0"]}"#));
    assert_eq!(TabularElement::from_json(&text).unwrap(), s);
    assert!(TabularElement::from_json(&text.replace(r#""dst":["1","0"]"#, r#""dst":["1","2"]"#)).is_err());
}

#[test]
fn support_examples() {
    let g = two_shift();
    assert!(TabularElement::identity(&g).support().is_empty());
    assert_eq!(s(&g).support().display(&g), "U(01) ∪ U(10)");
    assert_eq!(edge_swap(&g).support().display(&g), "X");
}

#[test]
fn base_family_examples() {
    let g = two_shift();
    let x0 = zeros();
    let family = base_family(&g, &x0, 2);
    let shown: Vec<String> = family.iter().map(|u| u.display(&g)).collect();
    assert_eq!(shown, vec!["U(1)", "U(01)", "U(01) ∪ U(1)"]);
    assert_eq!(base_family(&g, &x0, 1).len(), 1);
    let alternating = PeriodicPoint::new(&g, vec![], t(&g, "01")).unwrap();
    let generators: Vec<String> = base_generators(&g, &alternating, 2).iter().map(|w| g.show(w)).collect();
    assert_eq!(generators, vec!["1", "00"]);
    for level in 1..6 {
        for w in base_generators(&g, &alternating, level) {
            assert!(!alternating.has_prefix(&w));
        }
    }
    assert!(PeriodicPoint::new(&g, vec![], vec![]).is_err());
}

#[test]
fn to_thompson_examples() {
    let g = two_shift();
    let image = to_thompson(&s(&g)).unwrap();
    let shown: Vec<(String, String, String)> =
        image.pieces().iter().map(|p| (p.left.to_string(), p.slope.to_string(), p.intercept.to_string())).collect();
    let expected = [("0", "1", "0"), ("1/4", "1", "1/4"), ("1/2", "1", "-1/4"), ("3/4", "1", "0")];
    assert_eq!(shown, expected.map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())));
    assert!(to_thompson(&TabularElement::identity(&g)).unwrap().is_identity());
    let golden: Graph = serde_json::from_str(
        r#"{"vertices":["a","b"],"edges":[{"id":"x","from":"a","to":"a"},{"id":"y","from":"a","to":"b"},{"id":"z","from":"b","to":"a"}]}"#,
    )
    .unwrap();
    assert_eq!(to_thompson(&TabularElement::identity(&golden)), Err(SftError::NotFullShift));
}

#[test]
fn thompson_round_trips_for_three_letters() {
    let g = Graph::full_shift(3).unwrap();
    let d = GroupDescriptor::new(3, 1, Family::G).unwrap();
    for seed in 0..20 {
        let h = random_element(d, seed, 4).unwrap();
        let tab = from_thompson(&h, &g).unwrap();
        assert_eq!(to_thompson(&tab).unwrap(), h);
        assert_eq!(from_thompson(&to_thompson(&tab).unwrap(), &g).unwrap(), tab);
    }
}

#[test]
fn base_conditions_on_full_shift_and_golden_mean() {
    let g = two_shift();
    let reports = check_base_conditions(&g, &zeros(), 20, 3, DEFAULT_SFT_DEPTH);
    assert_eq!(reports.len(), 80);
    for r in &reports {
        assert!(r.passed(), "{}", serde_json::to_string(r).unwrap());
    }
    let golden: Graph = serde_json::from_str(
        r#"{"vertices":["a","b"],"edges":[{"id":"x","from":"a","to":"a"},{"id":"y","from":"a","to":"b"},{"id":"z","from":"b","to":"a"}]}"#,
    )
    .unwrap();
    let x0 = PeriodicPoint::new(&golden, vec![], vec![0]).unwrap();
    for r in check_base_conditions(&golden, &x0, 10, 5, 8) {
        assert!(r.passed(), "{}", serde_json::to_string(&r).unwrap());
    }
    assert!(check_base_conditions(&g, &zeros(), 0, 3, 6).is_empty());
}

#[test]
fn cylinder_union_canonical_form() {
    let g = two_shift();
    let u = CylinderUnion::new(&g, vec![t(&g, "00"), t(&g, "01"), t(&g, "011"), t(&g, "1")]);
    assert!(u.is_everything());
    let v = CylinderUnion::new(&g, vec![t(&g, "010"), t(&g, "011")]);
    assert_eq!(v.display(&g), "U(01)");
    assert!(v.is_subset_of(&g, &CylinderUnion::new(&g, vec![t(&g, "0")])));
    assert!(!CylinderUnion::new(&g, vec![t(&g, "0")]).is_subset_of(&g, &v));
}

fn tabular_pair() -> impl Strategy<Value = (TabularElement, TabularElement)> {
    (any::<u64>(), any::<u64>(), 1usize..=3, 1usize..=3).prop_map(|(a, b, ca, cb)| {
        let g = two_shift();
        (random_tabular(&g, a, ca), random_tabular(&g, b, cb))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compose_matches_pointwise_oracle((a, b) in tabular_pair()) {
        prop_assert!(agrees(&a, &b, &a.compose(&b).unwrap(), 6));
    }

    #[test]
    fn to_thompson_is_a_homomorphism((a, b) in tabular_pair()) {
        let lhs = to_thompson(&a.compose(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, to_thompson(&a).unwrap().compose(&to_thompson(&b).unwrap()).unwrap());
        prop_assert_eq!(from_thompson(&to_thompson(&a).unwrap(), a.graph()).unwrap(), a.clone());
    }

    #[test]
    fn group_laws((a, b) in tabular_pair()) {
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        let c = a.compose(&b).unwrap();
        prop_assert_eq!(c.inverse(), b.inverse().compose(&a.inverse()).unwrap());
    }

    #[test]
    fn conjugation_moves_support((a, h) in tabular_pair()) {
        let conj = a.conjugate_by(&h).unwrap();
        prop_assert_eq!(conj.support(), h.image(&a.support()));
    }

    #[test]
    fn thompson_side_round_trip(seed in any::<u64>()) {
        let h = random_element(GroupDescriptor::new(2, 1, Family::G).unwrap(), seed, 4).unwrap();
        let tab = from_thompson(&h, &two_shift()).unwrap();
        prop_assert_eq!(to_thompson(&tab).unwrap(), h);
        let lefts: Vec<Rational> = to_thompson(&tab).unwrap().pieces().iter().map(|p| p.left.clone()).collect();
        prop_assert!(lefts.windows(2).all(|w| w[0] < w[1]));
    }
}
