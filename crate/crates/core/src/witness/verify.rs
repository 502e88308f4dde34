use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{
    covering_neighborhood, displacement_witness, join, map_interval, BaseSet, Check, Condition, WitnessReport,
};
use crate::exactnum::{is_n_adic, log_n, pow_n, Rational};
use crate::plgroup::{random_element_with, Family, GroupDescriptor, MembershipTarget, PLMap};

fn element_json(g: &PLMap) -> serde_json::Value {
    serde_json::to_value(g).expect("element serializes")
}

fn base_json(u: &BaseSet) -> serde_json::Value {
    serde_json::to_value(u).expect("base set serializes")
}

fn in_f0(g: &PLMap) -> bool {
    g.membership(MembershipTarget::F0).is_accepted()
}

fn well_formed(g: &PLMap) -> Vec<Check> {
    let n = g.descriptor().n;
    vec![
        Check::new("slopes_powers_of_n", g.pieces().iter().all(|p| log_n(&p.slope, n).is_some())),
        Check::new("breakpoints_n_adic", g.breakpoints().all(|b| is_n_adic(b, n))),
        Check::new("identity_near_endpoints", in_f0(g)),
    ]
}

fn inside_space(u: &BaseSet, g: &PLMap) -> bool {
    let d = g.descriptor();
    u.n == d.n && u.r == d.r
}

pub fn certify_cover(g: &PLMap, u: &BaseSet) -> Vec<Check> {
    vec![
        Check::new("same_space", inside_space(u, g)),
        Check::new("support_inside", g.support().is_subset_of(&u.as_union())),
    ]
}

pub fn certify_map_interval(u1: &BaseSet, u2: &BaseSet, g: &PLMap) -> Vec<Check> {
    let mut checks = vec![Check::new("image_subset", g.image(&u1.as_union()).is_subset_of(&u2.as_union()))];
    checks.extend(well_formed(g));
    checks
}

pub fn certify_displacement(u1: &BaseSet, u2: &BaseSet, u3: &BaseSet, g: &PLMap) -> Vec<Check> {
    let mut checks = vec![
        Check::new("image_avoids_u3", g.image(&u1.as_union()).is_disjoint_from(&u3.as_union())),
        Check::new("support_avoids_u2", g.support().is_disjoint_from(&u2.as_union())),
    ];
    checks.extend(well_formed(g));
    checks
}

pub fn certify_join(u1: &BaseSet, u2: &BaseSet, u3: &BaseSet) -> Vec<Check> {
    let right = Rational::from(u3.r as i64);
    vec![
        Check::new("contains_u1", u1.as_union().is_subset_of(&u3.as_union())),
        Check::new("contains_u2", u2.as_union().is_subset_of(&u3.as_union())),
        Check::new("closure_inside_space", u3.a.is_positive() && u3.b < right),
    ]
}

/// Open grid interval `(i/n^L, j/n^L)` with `0 < i < j < r n^L`.
fn random_base_set<R: Rng>(rng: &mut R, n: u32, r: u32) -> BaseSet {
    let level = rng.gen_range(2..=4i64);
    let cells = r as usize * (n as usize).pow(level as u32);
    let mut ends = sample(rng, cells - 1, 2).into_vec();
    ends.sort_unstable();
    let unit = pow_n(n, -level);
    BaseSet::new(n, r, &unit * &Rational::from(ends[0] as i64 + 1), &unit * &Rational::from(ends[1] as i64 + 1))
        .expect("grid points inside (0, r)")
}

/// Two base sets with disjoint closures, in random order.
fn random_separated_pair<R: Rng>(rng: &mut R, n: u32, r: u32) -> (BaseSet, BaseSet) {
    let level = (1..).find(|&l| r as usize * (n as usize).pow(l) >= 6).expect("grid grows") as i64 + 1;
    let cells = r as usize * (n as usize).pow(level as u32);
    let mut ends = sample(rng, cells - 1, 4).into_vec();
    ends.sort_unstable();
    let unit = pow_n(n, -level);
    let point = |i: usize| &unit * &Rational::from(ends[i] as i64 + 1);
    let left = BaseSet::new(n, r, point(0), point(1)).expect("inside (0, r)");
    let right = BaseSet::new(n, r, point(2), point(3)).expect("inside (0, r)");
    if rng.gen_bool(0.5) {
        (left, right)
    } else {
        (right, left)
    }
}

fn failed(condition: Condition, inputs: serde_json::Value, error: String) -> WitnessReport {
    WitnessReport {
        condition,
        inputs,
        witness: json!({ "error": error }),
        checks: vec![Check::new("constructed", false)],
        branch: None,
    }
}

/// Runs all four condition witnesses on `sample_size` pseudo-random inputs
/// and returns one report per condition per sample.
pub fn verify_base(descriptor: GroupDescriptor, sample_size: usize, seed: u64) -> Vec<WitnessReport> {
    let GroupDescriptor { n, r, .. } = descriptor;
    let f0 = descriptor.with_family(Family::F0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(4 * sample_size);
    for _ in 0..sample_size {
        let complexity = rng.gen_range(1..=4);
        let g = random_element_with(&mut rng, f0, complexity).expect("random F0 element");
        let inputs = json!({ "g": element_json(&g) });
        reports.push(match covering_neighborhood(&g) {
            Ok(u) => WitnessReport {
                condition: Condition::Cover,
                inputs,
                witness: base_json(&u),
                checks: certify_cover(&g, &u),
                branch: None,
            },
            Err(e) => failed(Condition::Cover, inputs, e.to_string()),
        });

        let (u1, u2) = (random_base_set(&mut rng, n, r), random_base_set(&mut rng, n, r));
        let inputs = json!({ "u1": base_json(&u1), "u2": base_json(&u2) });
        reports.push(match map_interval(&u1, &u2) {
            Ok(w) => WitnessReport {
                condition: Condition::MapInto,
                inputs,
                witness: element_json(&w.element),
                checks: certify_map_interval(&u1, &u2, &w.element),
                branch: Some(w.branch),
            },
            Err(e) => failed(Condition::MapInto, inputs, e.to_string()),
        });

        let (v1, v2) = random_separated_pair(&mut rng, n, r);
        let v3 = random_base_set(&mut rng, n, r);
        let inputs = json!({ "u1": base_json(&v1), "u2": base_json(&v2), "u3": base_json(&v3) });
        reports.push(match displacement_witness(&v1, &v2, &v3) {
            Ok(w) => WitnessReport {
                condition: Condition::Displace,
                inputs,
                witness: element_json(&w.element),
                checks: certify_displacement(&v1, &v2, &v3, &w.element),
                branch: Some(w.branch),
            },
            Err(e) => failed(Condition::Displace, inputs, e.to_string()),
        });

        let inputs = json!({ "u1": base_json(&u1), "u2": base_json(&u2) });
        reports.push(match join(&u1, &u2) {
            Ok(u3) => WitnessReport {
                condition: Condition::Join,
                inputs,
                witness: base_json(&u3),
                checks: certify_join(&u1, &u2, &u3),
                branch: None,
            },
            Err(e) => failed(Condition::Join, inputs, e.to_string()),
        });
    }
    reports
}
