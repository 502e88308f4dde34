//! Permutation sign of an element of `G_{n,r}` on standard-cylinder tables.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{PLMap, PlError};
use crate::exactnum::{log_n, nadic_level, pow_n, to_level, Rational};

/// Standard cylinder `[start, start + n^-level)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    pub start: Rational,
    pub level: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderPair {
    pub domain: Cylinder,
    pub image: Cylinder,
}

/// A run of `count` consecutive domain cylinders mapped in order onto
/// consecutive image cylinders.
struct Block {
    image_start: Rational,
    count: BigInt,
    domain_level: i64,
    image_level: i64,
    domain_start: Rational,
}

fn blocks(g: &PLMap) -> Vec<Block> {
    let n = g.descriptor().n;
    let level = |q: &Rational| nadic_level(q, n).expect("validated n-adic") as i64;
    g.pieces()
        .iter()
        .enumerate()
        .map(|(i, piece)| {
            let end = g.piece_end(i);
            let k = log_n(&piece.slope, n).expect("validated slope");
            let (u0, u1) = (piece.apply(&piece.left), piece.apply(&end));
            let domain_level =
                [level(&piece.left), level(&end), level(&u0) + k, level(&u1) + k, 0, k].into_iter().max().unwrap();
            let count = to_level(&(&end - &piece.left), n, domain_level as u32).expect("level chosen large enough");
            Block { image_start: u0, count, domain_level, image_level: domain_level - k, domain_start: piece.left.clone() }
        })
        .collect()
}

/// Sign of the permutation `g` induces on its coarsest standard-cylinder
/// table. For odd `n` it does not depend on the table chosen.
pub fn sign_invariant(g: &PLMap) -> Result<i8, PlError> {
    let n = g.descriptor().n;
    if n.is_multiple_of(2) {
        return Err(PlError::EvenBase(n));
    }
    let blocks = blocks(g);
    // Inversions only occur between blocks: c_i * c_j for every out-of-order pair.
    let mut parity = BigInt::zero();
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            if a.image_start > b.image_start {
                parity += &a.count * &b.count;
            }
        }
    }
    Ok(if parity.is_even() { 1 } else { -1 })
}

/// Sign of a permutation given as `perm[i] = image of i`.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = perm[at];
            len += 1;
        }
        if len.is_multiple_of(2) {
            sign = -sign;
        }
    }
    sign
}

/// Explicit table of cylinder pairs, in domain order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardTable {
    pub n: u32,
    pub pairs: Vec<CylinderPair>,
}

impl StandardTable {
    /// Splits pair `index` into its `n` children on both sides.
    pub fn refine(&mut self, index: usize) {
        let pair = self.pairs.remove(index);
        let children = (0..self.n as i64).map(|j| {
            let child = |c: &Cylinder| Cylinder {
                start: &c.start + &(Rational::from(j) * pow_n(self.n, -(c.level + 1))),
                level: c.level + 1,
            };
            CylinderPair { domain: child(&pair.domain), image: child(&pair.image) }
        });
        let tail = self.pairs.split_off(index);
        self.pairs.extend(children);
        self.pairs.extend(tail);
    }

    /// Raw sign of the induced permutation; meaningful for any `n`.
    pub fn sign(&self) -> i8 {
        let mut order: Vec<usize> = (0..self.pairs.len()).collect();
        order.sort_by(|&a, &b| self.pairs[a].image.start.cmp(&self.pairs[b].image.start));
        let mut perm = vec![0usize; self.pairs.len()];
        for (rank, &idx) in order.iter().enumerate() {
            perm[idx] = rank;
        }
        permutation_sign(&perm)
    }
}

/// Expands the coarsest standard-cylinder table of `g`, refusing tables
/// with more than `max_pairs` entries.
pub fn standard_table(g: &PLMap, max_pairs: usize) -> Result<StandardTable, PlError> {
    let n = g.descriptor().n;
    let mut pairs = Vec::new();
    for block in blocks(g) {
        let count = block.count.to_usize().filter(|c| pairs.len() + c <= max_pairs);
        let count = count.ok_or_else(|| PlError::TableTooLarge(block.count.to_string()))?;
        for j in 0..count as i64 {
            let j = Rational::from(j);
            pairs.push(CylinderPair {
                domain: Cylinder {
                    start: &block.domain_start + &(&j * &pow_n(n, -block.domain_level)),
                    level: block.domain_level,
                },
                image: Cylinder {
                    start: &block.image_start + &(&j * &pow_n(n, -block.image_level)),
                    level: block.image_level,
                },
            });
        }
    }
    Ok(StandardTable { n, pairs })
}
