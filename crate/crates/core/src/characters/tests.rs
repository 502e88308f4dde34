use proptest::prelude::*;

use super::*;
use crate::fixtures::{g_star, swap_halves, x0};
use crate::plgroup::{random_element, Family, GroupDescriptor};
use crate::witness::disjoint_conjugates;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn c(s: &str) -> Cyclotomic {
    Cyclotomic::rational(q(s))
}

fn chi(s: &str) -> Character {
    s.parse().unwrap()
}

fn catalog() -> Vec<Character> {
    ["regular", "identity", "abel:1/2,0", "abel:1/3,1/5", "convex:1/3:regular+abel:1/4,3/4", "convex:1/2:regular+identity"]
        .into_iter()
        .map(chi)
        .collect()
}

#[test]
fn parse_and_display_round_trip() {
    for text in ["regular", "identity", "abel:1/2,0", "convex:1/2:regular+abel:1/3,2/3", "fixmeasure"] {
        assert_eq!(chi(text).to_string(), text);
    }
    assert_eq!(chi("abel:3/2,-1/3"), Character::Abelianization(q("1/2"), q("2/3")));
    assert!("convex:1:regular+identity".parse::<Character>().is_err());
    assert!("convex:0:regular+identity".parse::<Character>().is_err());
    assert!("abel:1/2".parse::<Character>().is_err());
    assert!("trivial".parse::<Character>().is_err());
}

#[test]
fn evaluation_examples() {
    let e = PLMap::identity(GroupDescriptor::new(2, 1, Family::F).unwrap());
    assert_eq!(chi("regular").eval(&e).unwrap(), c("1"));
    assert_eq!(chi("regular").eval(&x0()).unwrap(), c("0"));
    assert_eq!(chi("abel:1/2,0").eval(&x0()).unwrap(), c("-1"));
    assert_eq!(chi("convex:1/2:regular+identity").eval(&x0()).unwrap(), c("1/2"));
    assert_eq!(chi("fixmeasure").eval(&g_star()).unwrap(), c("7/16"));
    assert!(matches!(chi("abel:1/2,0").eval(&swap_halves()), Err(CharError::Pl(PlError::NotContinuousFamily))));
}

#[test]
fn abelianization_matches_float_oracle() {
    // exp(2πi(θ0 k0 + θ1 k1)) with (k0, k1) = (-1, 1) for x0.
    let value = chi("abel:1/3,1/8").eval(&x0()).unwrap().to_complex();
    let angle = std::f64::consts::TAU * (-1.0 / 3.0 + 1.0 / 8.0);
    assert!((value.re - angle.cos()).abs() < 1e-12);
    assert!((value.im - angle.sin()).abs() < 1e-12);
}

#[test]
fn regular_gram_is_identity() {
    let x = x0();
    let sample = vec![PLMap::identity(x.descriptor()), x.clone(), x.compose(&x).unwrap()];
    let g = gram(&chi("regular"), &sample).unwrap();
    for (i, row) in g.entries.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            assert_eq!(entry, &c(if i == j { "1" } else { "0" }));
        }
    }
    assert!((g.verdict.min_eigenvalue - 1.0).abs() < 1e-9);
    assert_eq!(g.verdict.status, PsdStatus::Psd);
}

#[test]
fn abelianization_gram_is_rank_one_psd() {
    let d = GroupDescriptor::new(2, 1, Family::F).unwrap();
    let sample: Vec<PLMap> = (0..5).map(|s| random_element(d, s, 3).unwrap()).collect();
    let g = gram(&chi("abel:1/3,1/4"), &sample).unwrap();
    assert!(g.verdict.min_eigenvalue.abs() < 1e-9);
    assert_eq!(g.verdict.status, PsdStatus::Psd);
    // Rank one: every 2x2 minor vanishes exactly.
    for i in 0..5 {
        for j in 0..5 {
            let minor = g.entries[0][0].mul(&g.entries[i][j]).sub(&g.entries[0][j].mul(&g.entries[i][0]));
            assert!(minor.is_zero());
        }
    }
}

#[test]
fn identity_character_report() {
    let sample = vec![x0(), g_star()];
    let report = axiom_report(&chi("identity"), &sample).unwrap();
    assert!(report.all_pass());
    assert!(report.gram.entries.iter().flatten().all(|e| e == &c("1")));
    assert!(report.gram.verdict.min_eigenvalue.abs() < 1e-9);
}

#[test]
fn fix_measure_fails_centrality_on_g_star_and_x0() {
    let sample = vec![g_star(), x0()];
    let report = axiom_report(&Character::FixMeasure, &sample).unwrap();
    assert!(!report.centrality_pass);
    let conj = report
        .counterexamples
        .iter()
        .find(|ce| ce.form == CentralityForm::Conjugation && ce.i == 1 && ce.j == 0)
        .expect("conjugation counterexample");
    assert_eq!(conj.lhs, c("5/8"));
    assert_eq!(conj.rhs, c("7/16"));
    assert_eq!(report.note.as_deref(), Some("consistent with absence of invariant measure"));
    assert!(report.identity_pass);
}

#[test]
fn fix_measure_gram_is_reported() {
    let conj = g_star().conjugate_by(&x0()).unwrap();
    let sample = vec![PLMap::identity(x0().descriptor()), g_star(), conj];
    let g = gram(&Character::FixMeasure, &sample).unwrap();
    assert_eq!(g.entries[0][0], c("1"));
    assert_eq!(g.entries[1][0], c("7/16"));
    assert_eq!(g.entries[2][0], c("5/8"));
    let json = serde_json::to_value(&g).unwrap();
    assert_eq!(json["entries"][1][0], "7/16");
}

#[test]
fn catalog_characters_pass_axioms() {
    let d = GroupDescriptor::new(2, 1, Family::F).unwrap();
    let mut sample: Vec<PLMap> = (0..4).map(|s| random_element(d, s, 2).unwrap()).collect();
    sample.push(x0());
    sample.push(g_star());
    for character in catalog() {
        let report = axiom_report(&character, &sample).unwrap();
        assert!(report.all_pass(), "{character}: {}", serde_json::to_string(&report).unwrap());
    }
}

#[test]
fn multiplicativity_examples() {
    let g = g_star();
    let out = disjoint_conjugates(&g, 2).unwrap();
    let (a, b) = (&out.conjugates[0], &out.conjugates[1]);
    assert!(multiplicativity_check(&chi("regular"), a, b).unwrap().pass);
    assert!(multiplicativity_check(&chi("abel:1/3,1/7"), a, b).unwrap().pass);
    let convex = multiplicativity_check(&chi("convex:1/2:regular+identity"), a, b).unwrap();
    assert!(!convex.pass);
    assert_eq!(convex.value_of_product, c("1/2"));
    assert_eq!(convex.product_of_values, c("1/4"));
    assert_eq!(multiplicativity_check(&chi("regular"), &g, &g).unwrap_err(), CharError::SupportsNotDisjoint);
}

#[test]
fn disjoint_product_powers() {
    let h = g_star();
    for m in 1..=3 {
        let f = disjoint_conjugates(&h, m).unwrap().product;
        for character in [chi("regular"), chi("abel:1/5,2/7")] {
            let power = (0..m).fold(Cyclotomic::one(), |acc, _| acc.mul(&character.eval(&h).unwrap()));
            assert_eq!(character.eval(&f).unwrap(), power);
        }
    }
}

#[test]
fn indefinite_matrix_is_rejected() {
    let m = vec![vec![c("0"), c("1")], vec![c("1"), c("0")]];
    assert_eq!(decide_psd(&m).status, PsdStatus::NotPsd);
    let non_hermitian = vec![vec![c("1"), c("1/2")], vec![c("0"), c("1")]];
    assert_eq!(decide_psd(&non_hermitian).status, PsdStatus::NotPsd);
    let negative = vec![vec![c("-1")]];
    assert_eq!(decide_psd(&negative).status, PsdStatus::NotPsd);
    assert!((min_eigenvalue(&m).0 + 1.0).abs() < 1e-9);
}

fn f_elements() -> impl Strategy<Value = (PLMap, PLMap)> {
    (prop::sample::select(vec![2u32, 3]), 1u32..=2, any::<u64>(), any::<u64>()).prop_map(|(n, r, s, t)| {
        let d = GroupDescriptor::new(n, r, Family::F).unwrap();
        (random_element(d, s, 3).unwrap(), random_element(d, t, 3).unwrap())
    })
}

fn angles() -> impl Strategy<Value = Character> {
    (0i64..12, 1i64..12, 0i64..12, 1i64..12)
        .prop_map(|(a, b, c, d)| Character::abelianization(Rational::frac(a, b), Rational::frac(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn catalog_value_at_identity_is_one((g, _h) in f_elements()) {
        let e = PLMap::identity(g.descriptor());
        for character in catalog().into_iter().chain([Character::FixMeasure]) {
            prop_assert_eq!(character.eval(&e).unwrap(), Cyclotomic::one());
        }
    }

    #[test]
    fn inverse_gives_conjugate((g, _h) in f_elements(), abel in angles()) {
        for character in [chi("regular"), chi("identity"), abel] {
            prop_assert_eq!(character.eval(&g.inverse()).unwrap(), character.eval(&g).unwrap().conj());
        }
    }

    #[test]
    fn abelianization_is_multiplicative((g, h) in f_elements(), abel in angles()) {
        let product = abel.eval(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(product, abel.eval(&g).unwrap().mul(&abel.eval(&h).unwrap()));
    }

    #[test]
    fn fix_measure_is_conjugation_equivariant((g, h) in f_elements()) {
        let conj = g.conjugate_by(&h).unwrap();
        prop_assert_eq!(conj.fixed_set(), h.image(&g.fixed_set()));
    }
}
