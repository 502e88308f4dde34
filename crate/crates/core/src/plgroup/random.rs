//! Deterministic pseudo-random elements for test corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{pl_interpolate, Family, GroupDescriptor, PLMap, Piece, PlError};
use crate::exactnum::{pow_n, Rational};

/// Cylinder partition of `[0, r)` as `(start, level)` cells in order.
fn random_partition<R: Rng>(
    rng: &mut R,
    n: u32,
    r: u32,
    initial_level: i64,
    splits: usize,
    frozen_ends: bool,
) -> Vec<(Rational, i64)> {
    let cell_len = pow_n(n, -initial_level);
    let count = r as i64 * (n as i64).pow(initial_level as u32);
    let mut cells: Vec<(Rational, i64)> =
        (0..count).map(|j| (&Rational::from(j) * &cell_len, initial_level)).collect();
    for _ in 0..splits {
        let (lo, hi) = if frozen_ends { (1, cells.len() - 1) } else { (0, cells.len()) };
        let at = rng.gen_range(lo..hi);
        let (start, level) = cells[at].clone();
        let child_len = pow_n(n, -(level + 1));
        let children = (0..n as i64).map(|j| (&start + &(&Rational::from(j) * &child_len), level + 1));
        cells.splice(at..=at, children);
    }
    cells
}

fn boundaries(cells: &[(Rational, i64)], r: u32) -> Vec<Rational> {
    cells.iter().map(|(s, _)| s.clone()).chain(std::iter::once(Rational::from(r as i64))).collect()
}

/// Random element drawn from `rng`; `complexity` is the number of cylinder splits per side.
pub fn random_element_with<R: Rng>(
    rng: &mut R,
    descriptor: GroupDescriptor,
    complexity: usize,
) -> Result<PLMap, PlError> {
    let GroupDescriptor { n, r, family } = descriptor;
    match family {
        Family::F | Family::F0 => {
            let frozen = family == Family::F0;
            let level = if frozen { 2 } else { 1 };
            let domain = boundaries(&random_partition(rng, n, r, level, complexity, frozen), r);
            let range = boundaries(&random_partition(rng, n, r, level, complexity, frozen), r);
            let last = domain.len() - 1;
            let keep: Vec<usize> = (0..=last)
                .filter(|&i| i == 0 || i == last || (frozen && (i == 1 || i + 1 == last)) || rng.gen_bool(0.5))
                .collect();
            let pick = |points: &[Rational]| keep.iter().map(|&i| points[i].clone()).collect::<Vec<_>>();
            pl_interpolate(&pick(&domain), &pick(&range), descriptor)
        }
        Family::G => {
            let domain = random_partition(rng, n, r, 1, complexity, false);
            let mut range = random_partition(rng, n, r, 1, complexity, false);
            range.shuffle(rng);
            let pieces = domain
                .iter()
                .zip(&range)
                .map(|((p, lp), (q, lq))| {
                    let slope = pow_n(n, lp - lq);
                    let intercept = q - &(&slope * p);
                    Piece { left: p.clone(), slope, intercept }
                })
                .collect();
            PLMap::validate(pieces, descriptor)
        }
    }
}

/// Deterministic in `(descriptor, seed, complexity)`.
pub fn random_element(descriptor: GroupDescriptor, seed: u64, complexity: usize) -> Result<PLMap, PlError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element_with(&mut rng, descriptor, complexity.max(1))
}
