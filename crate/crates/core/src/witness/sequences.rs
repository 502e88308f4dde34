use rand::SeedableRng;
use serde::Serialize;
use rand_chacha::ChaCha8Rng;

use super::{covering_neighborhood, map_interval, BaseSet, WitnessError};
use crate::exactnum::{pow_n, Rational};
use crate::plgroup::{random_element_with, Family, GroupDescriptor, Interval, IntervalUnion, PLMap, Piece};

/// Deepest cylinder level scanned by [`conjugate_sequence`] unless overridden.
pub const DEFAULT_DEPTH_CAP: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisjointProduct {
    pub targets: Vec<BaseSet>,
    pub conjugators: Vec<PLMap>,
    pub conjugates: Vec<PLMap>,
    pub product: PLMap,
}

/// Conjugates `g_j h g_j^-1` with pairwise disjoint supports and their product.
///
/// The targets are `V_j = ((2j-1)/n^L, 2j/n^L)` for the smallest `L` that fits
/// all `m` of them inside `(0, r)`.
pub fn disjoint_conjugates(h: &PLMap, m: usize) -> Result<DisjointProduct, WitnessError> {
    if m == 0 {
        return Err(WitnessError::TooFew { min: 1, got: 0 });
    }
    let cover = covering_neighborhood(h)?;
    let GroupDescriptor { n, r, .. } = h.descriptor();
    let mut level = 0i64;
    while Rational::from(2 * m as i64) >= Rational::from(r as i64) * pow_n(n, level) {
        level += 1;
    }
    let unit = pow_n(n, -level);
    let mut targets = Vec::with_capacity(m);
    let mut conjugators = Vec::with_capacity(m);
    let mut conjugates = Vec::with_capacity(m);
    let mut product = PLMap::identity(h.descriptor());
    for j in 1..=m as i64 {
        let target = BaseSet::new(n, r, &unit * &Rational::from(2 * j - 1), &unit * &Rational::from(2 * j))?;
        let g = map_interval(&cover, &target)?.element;
        let conjugate = h.conjugate_by(&g)?;
        product = product.compose(&conjugate)?;
        targets.push(target);
        conjugators.push(g);
        conjugates.push(conjugate);
    }
    Ok(DisjointProduct { targets, conjugators, conjugates, product })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugateSequence {
    /// Open cylinder `I` with `I ∩ g^-1(I) = ∅` holding every conjugator's support.
    pub interval: Interval,
    pub conjugators: Vec<PLMap>,
    pub conjugates: Vec<PLMap>,
}

/// Whether the closed interval `[lo, hi]` sits inside one piece of `g`.
fn inside_one_piece(g: &PLMap, lo: &Rational, hi: &Rational) -> bool {
    (0..g.pieces().len()).any(|i| &g.pieces()[i].left <= lo && hi <= &g.piece_end(i))
}

fn admissible(g: &PLMap, g_inv: &PLMap, lo: &Rational, hi: &Rational) -> bool {
    if !inside_one_piece(g, lo, hi) || !inside_one_piece(g_inv, lo, hi) {
        return false;
    }
    let open = IntervalUnion::single(Interval::open(lo.clone(), hi.clone()).expect("lo < hi"));
    g_inv.image(&open).is_disjoint_from(&open)
}

/// First standard cylinder, by level then position, that `g^-1` moves off
/// itself while `g` and `g^-1` stay continuous on it.
fn find_interval(g: &PLMap, depth_cap: u32) -> Option<Interval> {
    let GroupDescriptor { n, r, .. } = g.descriptor();
    let g_inv = g.inverse();
    let support = g.support();
    for level in 1..=depth_cap as i64 {
        let width = pow_n(n, -level);
        // A moved cylinder lies inside the support, so only those cells are scanned.
        for part in support.parts() {
            let first = (&part.lo / &width).ceil();
            let mut lo = Rational::from_integer(first) * width.clone();
            loop {
                let hi = &lo + &width;
                if hi > part.hi || hi > Rational::from(r as i64) {
                    break;
                }
                if admissible(g, &g_inv, &lo, &hi) {
                    return Interval::open(lo, hi);
                }
                lo = hi;
            }
        }
    }
    None
}

/// `e` rescaled from `[0, 1]` onto `[lo, lo + width]` and extended by the identity.
fn transplant(e: &PLMap, lo: &Rational, width: &Rational, descriptor: GroupDescriptor) -> Result<PLMap, WitnessError> {
    let one = Rational::one();
    let mut pieces = vec![Piece { left: Rational::zero(), slope: one.clone(), intercept: Rational::zero() }];
    for p in e.pieces() {
        pieces.push(Piece {
            left: lo + &(width * &p.left),
            slope: p.slope.clone(),
            intercept: lo * &(&one - &p.slope) + width * &p.intercept,
        });
    }
    let end = lo + width;
    if end < descriptor.right_end() {
        pieces.push(Piece { left: end, slope: one.clone(), intercept: Rational::zero() });
    }
    if lo.is_zero() {
        pieces.remove(0);
    }
    Ok(PLMap::validate(pieces, descriptor)?)
}

/// `m` distinct conjugates `g_i = r_i^-1 g r_i` whose pairwise quotients
/// `g_i^-1 g_j` are continuous and the identity near `0` and `r`.
pub fn conjugate_sequence(g: &PLMap, m: usize, seed: u64, depth_cap: u32) -> Result<ConjugateSequence, WitnessError> {
    if g.is_identity() {
        return Err(WitnessError::IdentityElement);
    }
    if m < 2 {
        return Err(WitnessError::TooFew { min: 2, got: m });
    }
    let interval = find_interval(g, depth_cap)
        .ok_or_else(|| WitnessError::SearchExhausted(format!("no admissible cylinder up to level {depth_cap}")))?;
    log::info!("conjugate_sequence: interval {interval}");
    let descriptor = g.descriptor();
    let local = GroupDescriptor::new(descriptor.n, 1, Family::F0)?;
    let width = interval.length();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut conjugators = Vec::with_capacity(m);
    let mut conjugates: Vec<PLMap> = Vec::with_capacity(m);
    let attempts = 64 * m;
    for attempt in 0..attempts {
        if conjugates.len() == m {
            break;
        }
        let e = random_element_with(&mut rng, local, 1 + attempt % 4)?;
        let r = transplant(&e, &interval.lo, &width, descriptor.with_family(Family::F0))?;
        let conjugate = g.conjugate_by(&r.inverse())?;
        if !conjugates.contains(&conjugate) {
            conjugators.push(r);
            conjugates.push(conjugate);
        }
    }
    if conjugates.len() < m {
        return Err(WitnessError::SearchExhausted(format!("only {} distinct conjugates", conjugates.len())));
    }
    Ok(ConjugateSequence { interval, conjugators, conjugates })
}
