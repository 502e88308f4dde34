use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures::{g_star, x0};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn f21() -> GroupDescriptor {
    GroupDescriptor::new(2, 1, Family::F).unwrap()
}

fn piece(l: &str, s: &str, b: &str) -> Piece {
    Piece { left: q(l), slope: q(s), intercept: q(b) }
}

#[test]
fn validate_accepts_x0_and_identity() {
    let x = x0();
    assert_eq!(x.pieces().len(), 3);
    // Direct substitution: the pieces join at 1/2 and 3/4 and end at 1.
    assert_eq!(x.pieces()[0].apply(&q("1/2")), x.pieces()[1].apply(&q("1/2")));
    assert_eq!(x.pieces()[1].apply(&q("3/4")), x.pieces()[2].apply(&q("3/4")));
    assert_eq!(x.pieces()[2].apply(&q("1")), q("1"));
    let id = PLMap::validate(vec![piece("0", "1", "0")], GroupDescriptor::new(3, 2, Family::F).unwrap()).unwrap();
    assert!(id.is_identity());
}

#[test]
fn validate_rejections() {
    let d = f21();
    let cases: Vec<(Vec<Piece>, GroupDescriptor)> = vec![
        (vec![piece("0", "3", "0")], d),
        (vec![piece("0", "1", "0"), piece("1/3", "1", "0")], d),
        (vec![piece("0", "1/2", "0"), piece("1/2", "1", "-1/4")], d),
        (vec![piece("0", "1", "1/2"), piece("1/2", "1", "-1/2")], d),
        (vec![piece("0", "1", "1/3"), piece("1/2", "1", "-1/2")], d.with_family(Family::G)),
        (vec![], d),
        (vec![piece("1/2", "1", "0")], d),
        (vec![piece("0", "1", "0"), piece("1/2", "1", "0"), piece("1/2", "1", "0")], d),
        (x0().pieces().to_vec(), d.with_family(Family::F0)),
    ];
    let errors: Vec<PlError> = cases.into_iter().map(|(p, d)| PLMap::validate(p, d).unwrap_err()).collect();
    assert_eq!(errors[0], PlError::SlopeNotPowerOfN(q("3")));
    assert_eq!(errors[1], PlError::NonNAdicBreakpoint(q("1/3")));
    assert_eq!(errors[2], PlError::NotBijection);
    assert_eq!(errors[3], PlError::Discontinuous(q("0")));
    assert_eq!(errors[4], PlError::NonNAdicImage(q("1/3")));
    assert_eq!(errors[5], PlError::NoPieces);
    assert_eq!(errors[6], PlError::FirstLeftNotZero(q("1/2")));
    assert_eq!(errors[7], PlError::BadBreakpoint(q("1/2")));
    assert_eq!(errors[8], PlError::TouchesEndpoint);
}

#[test]
fn swap_is_valid_in_g_but_not_f() {
    let pieces = vec![piece("0", "1", "1/2"), piece("1/2", "1", "-1/2")];
    assert!(PLMap::validate(pieces.clone(), f21().with_family(Family::G)).is_ok());
    assert!(matches!(PLMap::validate(pieces, f21()), Err(PlError::Discontinuous(_))));
}

#[test]
fn loose_input_is_canonicalized() {
    let loose = vec![piece("0", "1", "0"), piece("1/4", "1", "0"), piece("1/2", "1", "0")];
    assert!(PLMap::validate(loose, f21()).unwrap().is_identity());
}

#[test]
fn evaluate_examples() {
    let x = x0();
    assert_eq!(x.evaluate(&q("1/2")).unwrap(), q("1/4"));
    assert_eq!(x.evaluate(&q("3/4")).unwrap(), q("1/2"));
    assert_eq!(x.evaluate(&q("0")).unwrap(), q("0"));
    let id = PLMap::identity(f21());
    assert_eq!(id.evaluate(&q("5/7")).unwrap(), q("5/7"));
    assert_eq!(x.evaluate(&q("1")), Err(PlError::OutOfRange(q("1"))));
    assert_eq!(x.evaluate(&q("-1/2")), Err(PlError::OutOfRange(q("-1/2"))));
}

#[test]
fn x0_squared_matches_pointwise_oracle() {
    let x = x0();
    let sq = x.compose(&x).unwrap();
    let lefts: Vec<_> = sq.pieces().iter().map(|p| p.left.clone()).collect();
    let slopes: Vec<_> = sq.pieces().iter().map(|p| p.slope.clone()).collect();
    assert_eq!(lefts, vec![q("0"), q("1/2"), q("3/4"), q("7/8")]);
    assert_eq!(slopes, vec![q("1/4"), q("1/2"), q("2"), q("4")]);
    for (left, expected) in lefts.iter().zip(["0", "1/8", "1/4", "1/2"]) {
        let twice = x.evaluate(&x.evaluate(left).unwrap()).unwrap();
        assert_eq!(twice, q(expected));
        assert_eq!(sq.evaluate(left).unwrap(), twice);
    }
}

#[test]
fn identity_laws() {
    let x = x0();
    let id = PLMap::identity(f21());
    assert_eq!(id.compose(&x).unwrap(), x);
    assert_eq!(x.compose(&id).unwrap(), x);
    assert!(x.compose(&x.inverse()).unwrap().is_identity());
    assert!(id.inverse().is_identity());
    assert_eq!(x.inverse().evaluate(&q("1/4")).unwrap(), q("1/2"));
}

#[test]
fn descriptor_mismatch_is_rejected() {
    let other = PLMap::identity(GroupDescriptor::new(3, 1, Family::F).unwrap());
    assert!(matches!(x0().compose(&other), Err(PlError::DescriptorMismatch(..))));
}

#[test]
fn family_join_on_compose() {
    let g = g_star();
    assert_eq!(g.compose(&g).unwrap().family(), Family::F0);
    assert_eq!(g.compose(&x0()).unwrap().family(), Family::F);
    let swap = crate::fixtures::swap_halves();
    assert_eq!(swap.compose(&x0()).unwrap().family(), Family::G);
}

#[test]
fn supports_and_fixed_sets() {
    assert!(PLMap::identity(f21()).support().is_empty());
    assert_eq!(x0().support().to_string(), "[0,1]");
    assert_eq!(g_star().support().to_string(), "[1/8,11/16]");
    assert_eq!(PLMap::identity(f21()).fix_measure(), q("1"));
    assert_eq!(x0().fixed_set().to_string(), "{0} u {1}");
    assert_eq!(x0().fix_measure(), q("0"));
    assert_eq!(g_star().fixed_set().to_string(), "[0,1/8] u [11/16,1]");
    assert_eq!(g_star().fix_measure(), q("7/16"));
}

#[test]
fn conjugate_fix_measure() {
    let conj = g_star().conjugate_by(&x0()).unwrap();
    assert_eq!(conj.fixed_set(), x0().image(&g_star().fixed_set()));
    assert_eq!(conj.fix_measure(), q("5/8"));
}

#[test]
fn membership_examples() {
    assert!(matches!(x0().membership(MembershipTarget::F0), Certificate::Rejected { reason } if reason.contains("1/2")));
    match g_star().membership(MembershipTarget::F0) {
        Certificate::Accepted { neighborhoods: Some(pair), .. } => {
            let (left, right) = *pair;
            assert_eq!(left.to_string(), "[0,1/8]");
            assert_eq!(right.to_string(), "[11/16,1]");
        }
        other => panic!("unexpected {other:?}"),
    }
    let id = PLMap::identity(f21());
    for target in [MembershipTarget::F, MembershipTarget::F0, MembershipTarget::G, MembershipTarget::Commutator] {
        assert!(id.membership(target).is_accepted());
    }
    assert!(g_star().membership(MembershipTarget::Commutator).is_accepted());
    assert!(!crate::fixtures::swap_halves().membership(MembershipTarget::F).is_accepted());
    let g3 = random_element(GroupDescriptor::new(3, 1, Family::F0).unwrap(), 4, 3).unwrap();
    let cert = g3.membership(MembershipTarget::Commutator);
    assert!(matches!(cert, Certificate::NecessaryConditionsOnly { .. }) || g3.is_identity());
}

#[test]
fn endpoint_slope_examples() {
    assert_eq!(x0().endpoint_slopes().unwrap(), AbelianizationVector { k0: -1, k1: 1 });
    assert_eq!(PLMap::identity(f21()).endpoint_slopes().unwrap(), AbelianizationVector { k0: 0, k1: 0 });
    assert_eq!(g_star().endpoint_slopes().unwrap(), AbelianizationVector { k0: 0, k1: 0 });
    assert_eq!(crate::fixtures::swap_halves().endpoint_slopes(), Err(PlError::NotContinuousFamily));
}

#[test]
fn json_round_trip_and_loose_input() {
    let text = r#"{"family":"F","n":2,"r":1,"pieces":[
        {"left":"0","slope":"1/2","intercept":"0"},
        {"left":"2/4","slope":"1","intercept":"-1/4"},
        {"left":"3/4","slope":"2","intercept":"-1"}]}"#;
    let parsed = PLMap::from_json(text).unwrap();
    assert_eq!(parsed, x0());
    assert_eq!(
        parsed.to_json(),
        r#"{"family":"F","n":2,"r":1,"pieces":[{"left":"0","slope":"1/2","intercept":"0"},{"left":"1/2","slope":"1","intercept":"-1/4"},{"left":"3/4","slope":"2","intercept":"-1"}]}"#
    );
    assert!(PLMap::from_json(r#"{"family":"F","n":2,"r":1,"pieces":[{"left":"0","slope":"3","intercept":"0"}]}"#).is_err());
}

#[test]
fn random_elements_are_deterministic_and_valid() {
    for family in [Family::F, Family::F0, Family::G] {
        for (n, r) in [(2, 1), (3, 2), (5, 1)] {
            let d = GroupDescriptor::new(n, r, family).unwrap();
            let a = random_element(d, 0, 1).unwrap();
            assert_eq!(a, random_element(d, 0, 1).unwrap());
            for seed in 0..100 {
                let g = random_element(d, seed, 1 + (seed as usize % 6)).unwrap();
                assert_eq!(PLMap::validate(g.pieces().to_vec(), d).unwrap(), g);
            }
        }
    }
}

fn descriptors() -> impl Strategy<Value = GroupDescriptor> {
    prop_oneof![
        Just(GroupDescriptor::new(2, 1, Family::F).unwrap()),
        Just(GroupDescriptor::new(3, 2, Family::F).unwrap()),
        Just(GroupDescriptor::new(2, 1, Family::G).unwrap()),
        Just(GroupDescriptor::new(3, 1, Family::G).unwrap()),
        Just(GroupDescriptor::new(2, 3, Family::F0).unwrap()),
    ]
}

fn triple_with_point() -> impl Strategy<Value = (PLMap, PLMap, PLMap, Rational)> {
    (descriptors(), any::<u64>(), 0.0f64..1.0).prop_map(|(d, seed, t)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut next = || random_element_with(&mut rng, d, 4).unwrap();
        let (g, h, k) = (next(), next(), next());
        // A point of the level-6 n-adic grid inside [0, r).
        let units = (d.r as i64) * (d.n as i64).pow(6);
        let x = Rational::frac(((t * units as f64) as i64).min(units - 1), (d.n as i64).pow(6));
        (g, h, k, x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms((g, h, k, x) in triple_with_point()) {
        prop_assert_eq!(g.compose(&h).unwrap().compose(&k).unwrap(), g.compose(&h.compose(&k).unwrap()).unwrap());
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
        prop_assert_eq!(g.inverse().inverse(), g.clone());
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(gh.evaluate(&x).unwrap(), g.evaluate(&h.evaluate(&x).unwrap()).unwrap());
    }

    #[test]
    fn conjugation_moves_supports((g, h, _k, _x) in triple_with_point()) {
        let conj = g.conjugate_by(&h).unwrap();
        prop_assert_eq!(conj.fixed_set(), h.image(&g.fixed_set()));
        if h.family().is_continuous() {
            prop_assert_eq!(conj.support(), h.image(&g.support()).closure());
        }
    }

    #[test]
    fn fixed_and_moved_sets_partition_the_space((g, _h, _k, _x) in triple_with_point()) {
        let domain = g.domain();
        let fixed = g.fixed_set();
        let moved = fixed.complement_within(&domain);
        prop_assert!(fixed.is_disjoint_from(&moved));
        prop_assert_eq!(fixed.union(&moved), IntervalUnion::single(domain.clone()));
        prop_assert_eq!(&fixed.measure() + &moved.measure(), domain.length());
    }

    #[test]
    fn endpoint_slopes_are_a_homomorphism((g, h, _k, _x) in triple_with_point()) {
        if g.family().is_continuous() {
            let gh = g.compose(&h).unwrap();
            prop_assert_eq!(gh.endpoint_slopes().unwrap(), g.endpoint_slopes().unwrap() + h.endpoint_slopes().unwrap());
            if g.descriptor().n == 2 {
                let in_kernel = g.endpoint_slopes().unwrap() == AbelianizationVector { k0: 0, k1: 0 };
                prop_assert_eq!(in_kernel, g.membership(MembershipTarget::F0).is_accepted());
            }
        }
    }

    #[test]
    fn canonical_form_is_a_fixed_point((g, _h, _k, _x) in triple_with_point()) {
        let reparsed = PLMap::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(&reparsed, &g);
        prop_assert_eq!(PLMap::validate(g.pieces().to_vec(), g.descriptor()).unwrap(), g);
    }
}
