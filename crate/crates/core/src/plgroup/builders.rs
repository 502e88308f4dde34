//! Interpolating builders: n-adic interval maps and partition interpolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{GroupDescriptor, PLMap, PlError};
use crate::exactnum::{nadic_level, pow_n, to_level, Rational};

fn level_of(q: &Rational, n: u32) -> Result<u32, PlError> {
    nadic_level(q, n).ok_or_else(|| PlError::NonNAdicBreakpoint(q.clone()))
}

fn check_interval(lo: &Rational, hi: &Rational) -> Result<(), PlError> {
    if lo < hi {
        Ok(())
    } else {
        Err(PlError::BadInterval(format!("[{lo}, {hi}]")))
    }
}

/// Number of standard level-`K` cylinders in `[lo, hi]`, reduced mod `n - 1`.
pub fn interval_residue(lo: &Rational, hi: &Rational, n: u32) -> Result<u64, PlError> {
    check_interval(lo, hi)?;
    let level = level_of(lo, n)?.max(level_of(hi, n)?);
    let count = to_level(&(hi - lo), n, level)?;
    Ok(count.mod_floor(&BigInt::from(n - 1)).to_u64().expect("residue below n"))
}

/// Increasing piecewise-affine homeomorphism between two closed intervals,
/// stored as its nodes `(x, f(x))` from left end to right end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMap {
    pub nodes: Vec<(Rational, Rational)>,
}

impl LocalMap {
    pub fn slopes(&self) -> Vec<Rational> {
        self.nodes.windows(2).map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).collect()
    }

    pub fn evaluate(&self, x: &Rational) -> Option<Rational> {
        let w = self.nodes.windows(2).find(|w| &w[0].0 <= x && x <= &w[1].0)?;
        let slope = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
        Some(&w[0].1 + &(&slope * &(x - &w[0].0)))
    }
}

/// Maps `[source.0, source.1]` onto `[target.0, target.1]` with slopes that
/// are powers of `n` and n-adic breakpoints.
///
/// Both intervals are cut into standard cylinders at their common level `K`.
/// While the counts differ, the leftmost coarsest cylinder on the side with
/// fewer pieces is split into `n` children; the pieces are then paired in
/// order. The outcome has a closed form with at most two affine pieces, which
/// is what is computed here. Counts can only be equalized when they agree
/// mod `n - 1`, which is exactly the residue obstruction.
pub fn map_between_intervals(
    source: (&Rational, &Rational),
    target: (&Rational, &Rational),
    n: u32,
) -> Result<LocalMap, PlError> {
    let (p0, p1) = source;
    let (q0, q1) = target;
    check_interval(p0, p1)?;
    check_interval(q0, q1)?;
    let level = [p0, p1, q0, q1].into_iter().map(|x| level_of(x, n)).collect::<Result<Vec<_>, _>>()?;
    let level = level.into_iter().max().expect("four levels");
    let m_source = to_level(&(p1 - p0), n, level)?;
    let m_target = to_level(&(q1 - q0), n, level)?;
    let modulus = BigInt::from(n - 1);
    let source_residue = m_source.mod_floor(&modulus);
    let target_residue = m_target.mod_floor(&modulus);
    if source_residue != target_residue {
        return Err(PlError::NotInSameOrbit {
            source_residue: source_residue.to_u64().expect("small"),
            target_residue: target_residue.to_u64().expect("small"),
            modulus: (n - 1) as u64,
        });
    }
    let single = LocalMap { nodes: vec![(p0.clone(), q0.clone()), (p1.clone(), q1.clone())] };
    if m_source == m_target {
        return Ok(single);
    }
    let source_is_fine = m_source < m_target;
    let (m_few, m_many) = if source_is_fine { (&m_source, &m_target) } else { (&m_target, &m_source) };
    let base = BigInt::from(n);
    let mut depth = 0i64;
    let mut grown = m_few.clone();
    while &(&grown * &base) <= m_many {
        grown *= &base;
        depth += 1;
    }
    let split = (m_many - &grown) / &modulus;
    if split.is_zero() {
        return Ok(single);
    }
    // First `split` cylinders of level K+depth on the fine side pair with the
    // first n*split level-K cylinders on the coarse side.
    let fine_len = Rational::from(split.clone()) * pow_n(n, -(level as i64) - depth);
    let coarse_len = Rational::from(split * &base) * pow_n(n, -(level as i64));
    let node = if source_is_fine { (p0 + &fine_len, q0 + &coarse_len) } else { (p0 + &coarse_len, q0 + &fine_len) };
    Ok(LocalMap { nodes: vec![(p0.clone(), q0.clone()), node, (p1.clone(), q1.clone())] })
}

/// Element of `F_{n,r}` sending `t_i` to `s_i`, built segment by segment.
pub fn pl_interpolate(
    domain_points: &[Rational],
    range_points: &[Rational],
    descriptor: GroupDescriptor,
) -> Result<PLMap, PlError> {
    let right = descriptor.right_end();
    for points in [domain_points, range_points] {
        if points.len() < 2 {
            return Err(PlError::BadPartition("need at least the two end points".into()));
        }
        if !points[0].is_zero() || points[points.len() - 1] != right {
            return Err(PlError::BadPartition("partition must run from 0 to r".into()));
        }
        if let Some(w) = points.windows(2).find(|w| w[1] <= w[0]) {
            return Err(PlError::BadPartition(format!("zero-length or decreasing segment at {}", w[1])));
        }
    }
    if domain_points.len() != range_points.len() {
        return Err(PlError::BadPartition("partitions differ in length".into()));
    }
    let mut nodes = vec![(Rational::zero(), Rational::zero())];
    for (t, s) in domain_points.windows(2).zip(range_points.windows(2)) {
        let local = map_between_intervals((&t[0], &t[1]), (&s[0], &s[1]), descriptor.n)?;
        nodes.extend(local.nodes.into_iter().skip(1));
    }
    PLMap::from_nodes(&nodes, descriptor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::log_n;
    use crate::plgroup::Family;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn residue_examples() {
        assert_eq!(interval_residue(&q("0"), &q("1/3"), 3).unwrap(), 1);
        assert_eq!(interval_residue(&q("0"), &q("2/3"), 3).unwrap(), 0);
        assert_eq!(interval_residue(&q("1/8"), &q("5/8"), 2).unwrap(), 0);
        assert!(interval_residue(&q("0"), &q("1/5"), 3).is_err());
        assert!(interval_residue(&q("1/3"), &q("1/3"), 3).is_err());
    }

    #[test]
    fn single_affine_piece() {
        let m = map_between_intervals((&q("0"), &q("1/2")), (&q("0"), &q("1/4")), 2).unwrap();
        assert_eq!(m.nodes, vec![(q("0"), q("0")), (q("1/2"), q("1/4"))]);
        assert_eq!(m.slopes(), vec![q("1/2")]);
    }

    #[test]
    fn greedy_two_piece_split() {
        let m = map_between_intervals((&q("1/4"), &q("1/2")), (&q("1/4"), &q("5/8")), 2).unwrap();
        assert_eq!(m.nodes, vec![(q("1/4"), q("1/4")), (q("3/8"), q("1/2")), (q("1/2"), q("5/8"))]);
        assert_eq!(m.slopes(), vec![q("2"), q("1")]);
    }

    #[test]
    fn orbit_obstruction() {
        let err = map_between_intervals((&q("0"), &q("1/3")), (&q("0"), &q("2/3")), 3).unwrap_err();
        assert_eq!(err, PlError::NotInSameOrbit { source_residue: 1, target_residue: 0, modulus: 2 });
    }

    #[test]
    fn interpolation_examples() {
        let d = GroupDescriptor::new(2, 1, Family::F).unwrap();
        let f = pl_interpolate(&[q("0"), q("1/2"), q("1")], &[q("0"), q("1/4"), q("1")], d).unwrap();
        let slopes: Vec<_> = f.pieces().iter().map(|p| p.slope.clone()).collect();
        let lefts: Vec<_> = f.pieces().iter().map(|p| p.left.clone()).collect();
        assert_eq!(slopes, vec![q("1/2"), q("2"), q("1")]);
        assert_eq!(lefts, vec![q("0"), q("1/2"), q("3/4")]);
        assert_eq!(f.evaluate(&q("1/2")).unwrap(), q("1/4"));

        let same = [q("0"), q("3/8"), q("1")];
        assert!(pl_interpolate(&same, &same, d).unwrap().is_identity());

        let d3 = GroupDescriptor::new(3, 1, Family::F).unwrap();
        let err = pl_interpolate(&[q("0"), q("1/3"), q("1")], &[q("0"), q("2/3"), q("1")], d3).unwrap_err();
        assert!(matches!(err, PlError::NotInSameOrbit { .. }));

        let zero_length = [q("0"), q("1/2"), q("1/2"), q("1")];
        assert!(matches!(pl_interpolate(&zero_length, &zero_length, d), Err(PlError::BadPartition(_))));
    }

    proptest! {
        #[test]
        fn residue_preserved_and_slopes_are_powers(
            n in 2u32..5,
            lo_s in 0i64..40, len_s in 1i64..40, lo_t in 0i64..40, len_t in 1i64..40, k in 1u32..4,
        ) {
            let unit = pow_n(n, -(k as i64));
            let ps = (&unit * &Rational::from(lo_s), &unit * &Rational::from(lo_s + len_s));
            let mut pt = (&unit * &Rational::from(lo_t), &unit * &Rational::from(lo_t + len_t));
            // Force matching residues by nudging the target length.
            let rs = interval_residue(&ps.0, &ps.1, n).unwrap();
            while interval_residue(&pt.0, &pt.1, n).unwrap() != rs {
                pt.1 = &pt.1 + &unit;
            }
            let m = map_between_intervals((&ps.0, &ps.1), (&pt.0, &pt.1), n).unwrap();
            prop_assert_eq!(m.nodes.first().unwrap(), &(ps.0.clone(), pt.0.clone()));
            prop_assert_eq!(m.nodes.last().unwrap(), &(ps.1.clone(), pt.1.clone()));
            for s in m.slopes() {
                prop_assert!(log_n(&s, n).is_some());
            }
            for w in m.nodes.windows(2) {
                prop_assert_eq!(
                    interval_residue(&w[0].0, &w[1].0, n).unwrap(),
                    interval_residue(&w[0].1, &w[1].1, n).unwrap()
                );
            }
        }
    }
}
