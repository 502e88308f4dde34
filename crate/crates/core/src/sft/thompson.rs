//! The dictionary between the full `n`-shift and `G_{n,1}`: the tuple
//! `e_1 ... e_k` is the interval `[0.e_1...e_k, 0.e_1...e_k + n^-k)` in base `n`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Graph, SftError, TabularElement, Tuple};
use crate::exactnum::{log_n, nadic_level, pow_n, to_level, Rational};
use crate::plgroup::{Family, GroupDescriptor, PLMap, Piece};

fn arity(graph: &Graph) -> Result<u32, SftError> {
    graph.full_shift_arity().map(|n| n as u32).ok_or(SftError::NotFullShift)
}

fn left_end(tuple: &[usize], n: u32) -> Rational {
    tuple.iter().enumerate().fold(Rational::zero(), |acc, (i, &e)| acc + Rational::from(e as i64) * pow_n(n, -(i as i64) - 1))
}

/// Base-`n` digits of the aligned cylinder starting at `start` with the given level.
fn digits(start: &Rational, level: i64, n: u32) -> Tuple {
    let mut index = to_level(start, n, level as u32).expect("aligned start");
    let base = BigInt::from(n);
    let mut out = vec![0usize; level as usize];
    for slot in out.iter_mut().rev() {
        *slot = (&index % &base).to_usize().expect("digit");
        index /= &base;
    }
    out
}

/// The element of `G_{n,1}` acting as `g` under the cylinder dictionary.
pub fn to_thompson(g: &TabularElement) -> Result<PLMap, SftError> {
    let n = arity(g.graph())?;
    let pieces = g
        .pairs()
        .iter()
        .map(|(s, t)| {
            let slope = pow_n(n, s.len() as i64 - t.len() as i64);
            let intercept = left_end(t, n) - &slope * &left_end(s, n);
            Piece { left: left_end(s, n), slope, intercept }
        })
        .collect();
    Ok(PLMap::validate(pieces, GroupDescriptor::new(n, 1, Family::G)?)?)
}

/// Inverse of [`to_thompson`] on the full shift with `n` letters.
pub fn from_thompson(h: &PLMap, graph: &Graph) -> Result<TabularElement, SftError> {
    let n = arity(graph)?;
    let d = h.descriptor();
    if d.n != n || d.r != 1 {
        return Err(SftError::GraphMismatch);
    }
    let mut pairs = Vec::new();
    for (i, piece) in h.pieces().iter().enumerate() {
        let end = h.piece_end(i);
        let k = log_n(&piece.slope, n).expect("validated slope");
        let mut at = piece.left.clone();
        while at < end {
            // Largest aligned cylinder of level >= 1 starting at `at`, inside the
            // piece, whose image is again an aligned cylinder of level >= 1.
            let image = piece.apply(&at);
            let mut level = (nadic_level(&at, n).expect("n-adic") as i64)
                .max(nadic_level(&image, n).expect("n-adic") as i64 + k)
                .max(1)
                .max(1 + k);
            while &at + &pow_n(n, -level) > end {
                level += 1;
            }
            pairs.push((digits(&at, level, n), digits(&image, level - k, n)));
            at = at + pow_n(n, -level);
        }
    }
    TabularElement::new(graph, pairs)
}
