//! Named elements used throughout the docs, tests and the acceptance suite.

use crate::exactnum::Rational;
use crate::plgroup::{Family, GroupDescriptor, PLMap, Piece};

fn build(n: u32, r: u32, family: Family, pieces: &[(&str, &str, &str)]) -> PLMap {
    let descriptor = GroupDescriptor::new(n, r, family).expect("valid descriptor");
    let pieces = pieces
        .iter()
        .map(|(l, s, b)| Piece {
            left: l.parse::<Rational>().expect("literal"),
            slope: s.parse().expect("literal"),
            intercept: b.parse().expect("literal"),
        })
        .collect();
    PLMap::validate(pieces, descriptor).expect("fixture is valid")
}

/// Generator `x0` of `F_{2,1}`: `t/2`, `t - 1/4`, `2t - 1` on the standard halves and quarters.
pub fn x0() -> PLMap {
    build(2, 1, Family::F, &[("0", "1/2", "0"), ("1/2", "1", "-1/4"), ("3/4", "2", "-1")])
}

/// The element of `F0_{2,1}` mapping `(3/8, 1/2)` into `(1/4, 3/8)`, with
/// fixed nodes at `1/8` and `11/16`.
pub fn g_star() -> PLMap {
    build(2, 1, Family::F0, &[("0", "1", "0"), ("1/8", "1/2", "1/16"), ("1/2", "2", "-11/16"), ("11/16", "1", "0")])
}

/// Transposition of `[0,1/3)` and `[1/3,2/3)` in `G_{3,1}`.
pub fn swap_thirds() -> PLMap {
    build(3, 1, Family::G, &[("0", "1", "1/3"), ("1/3", "1", "-1/3"), ("2/3", "1", "0")])
}

/// Cyclic shift of the three thirds of `[0,1)` in `G_{3,1}`.
pub fn cycle_thirds() -> PLMap {
    build(3, 1, Family::G, &[("0", "1", "1/3"), ("1/3", "1", "1/3"), ("2/3", "1", "-2/3")])
}

/// Transposition of the two halves of `[0,1)` in `G_{2,1}`.
pub fn swap_halves() -> PLMap {
    build(2, 1, Family::G, &[("0", "1", "1/2"), ("1/2", "1", "-1/2")])
}
