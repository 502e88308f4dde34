use serde::{Deserialize, Serialize};

use super::{level, BaseSet, WitnessError};
use crate::exactnum::{is_n_adic, nadic_residue, pow_n, Rational};
use crate::plgroup::{map_between_intervals, PLMap};

/// Largest `|k|` tried when solving for single-slope outer segments.
const MAX_EXPONENT: i64 = 8;

/// How a condition (ii) witness was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Single-slope segments `[x,a] -> [x,c]` and `[b,y] -> [d',y]` solved exactly.
    ExactSolve,
    /// Image endpoints moved onto a finer grid with matching residues.
    ResidueShrink,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalMap {
    pub element: PLMap,
    pub branch: Branch,
    /// Nodes `(t, g(t))` of the construction, from `(0,0)` to `(r,r)`.
    pub nodes: Vec<(Rational, Rational)>,
}

/// `1, -1, 2, -2, ...` up to `MAX_EXPONENT`.
fn exponents() -> impl Iterator<Item = i64> {
    (1..=MAX_EXPONENT).flat_map(|k| [k, -k])
}

/// `t` with `(p - t) / (q - t) = n^k`.
fn solve_fixed_node(p: &Rational, q: &Rational, n: u32, k: i64) -> Rational {
    let scale = pow_n(n, k);
    (p - &(q * &scale)) / (Rational::one() - scale)
}

fn exact_nodes(u1: &BaseSet, u2: &BaseSet, x_lo: &Rational) -> Option<Vec<(Rational, Rational)>> {
    let (n, right) = (u1.n, Rational::from(u1.r as i64));
    let (a, b, c, d) = (&u1.a, &u1.b, &u2.a, &u2.b);
    let mut nodes = vec![(Rational::zero(), Rational::zero())];
    let k = if a == c {
        0
    } else {
        let (k, x) = exponents().map(|k| (k, solve_fixed_node(a, c, n, k))).find(|(_, x)| {
            is_n_adic(x, n) && x > x_lo && x.is_positive() && x < a && x < c
        })?;
        nodes.push((x.clone(), x));
        k
    };
    nodes.push((a.clone(), c.clone()));
    let width = b - a;
    let d_new = (0..)
        .map(|t| c + &(&pow_n(n, -k - t) * &width))
        .find(|candidate| candidate <= d)
        .expect("slopes shrink geometrically");
    if &d_new != b {
        let y = exponents()
            .map(|j| solve_fixed_node(b, &d_new, n, j))
            .find(|y| is_n_adic(y, n) && y > b && y > &d_new && y < &right)?;
        nodes.push((b.clone(), d_new));
        nodes.push((y.clone(), y));
    } else {
        nodes.push((b.clone(), d_new));
    }
    nodes.push((right.clone(), right));
    Some(nodes)
}

fn residue(q: &Rational, n: u32) -> u64 {
    nadic_residue(q, n).expect("grid points are n-adic")
}

fn shrink_nodes(u1: &BaseSet, u2: &BaseSet, x_lo: &Rational) -> Vec<(Rational, Rational)> {
    let (n, right) = (u1.n, Rational::from(u1.r as i64));
    let (a, b, c, d) = (&u1.a, &u1.b, &u2.a, &u2.b);
    let start = u1.level().max(u2.level()).max(level(x_lo, n)) + 1;
    for grid in start.. {
        let step = pow_n(n, -(grid as i64));
        // Consecutive grid points step through every residue, so n - 1 steps suffice.
        let c_new = (0..n as i64)
            .map(|i| c + &(&Rational::from(i) * &step))
            .find(|q| residue(q, n) == residue(a, n))
            .expect("residue reached within n - 1 steps");
        let d_new = (0..n as i64)
            .map(|i| d - &(&Rational::from(i) * &step))
            .find(|q| residue(q, n) == residue(b, n))
            .expect("residue reached within n - 1 steps");
        let x = a.clone().min(c_new.clone()) - step.clone();
        let y = b.clone().max(d_new.clone()) + step.clone();
        if c_new < d_new && &x > x_lo && x.is_positive() && y < right {
            return vec![
                (Rational::zero(), Rational::zero()),
                (x.clone(), x),
                (a.clone(), c_new),
                (b.clone(), d_new),
                (y.clone(), y),
                (right.clone(), right),
            ];
        }
    }
    unreachable!("grid refinement eventually fits")
}

fn build(nodes: &[(Rational, Rational)], u1: &BaseSet) -> Result<PLMap, WitnessError> {
    let mut all = vec![nodes[0].clone()];
    for pair in nodes.windows(2) {
        let local = map_between_intervals((&pair[0].0, &pair[1].0), (&pair[0].1, &pair[1].1), u1.n)?;
        all.extend(local.nodes.into_iter().skip(1));
    }
    Ok(PLMap::from_nodes(&all, u1.descriptor())?)
}

/// Element of `F0_{n,r}` with `g(U1) ⊆ U2`, supported in `(x_lo, r)`.
pub fn map_interval_above(u1: &BaseSet, u2: &BaseSet, x_lo: &Rational) -> Result<IntervalMap, WitnessError> {
    if !u1.same_space(u2) {
        return Err(WitnessError::SpaceMismatch);
    }
    if let Some(nodes) = exact_nodes(u1, u2, x_lo) {
        if let Ok(element) = build(&nodes, u1) {
            log::info!("map_interval {u1} -> {u2}: exact-solve branch");
            return Ok(IntervalMap { element, branch: Branch::ExactSolve, nodes });
        }
    }
    let nodes = shrink_nodes(u1, u2, x_lo);
    let element = build(&nodes, u1)?;
    log::info!("map_interval {u1} -> {u2}: residue-shrink branch");
    Ok(IntervalMap { element, branch: Branch::ResidueShrink, nodes })
}

/// Element of `F0_{n,r}` with `g(U1) ⊆ U2` that is the identity near `0` and `r`.
pub fn map_interval(u1: &BaseSet, u2: &BaseSet) -> Result<IntervalMap, WitnessError> {
    map_interval_above(u1, u2, &Rational::zero())
}

/// Element `g` with `g(U1) ∩ U3 = ∅` and `supp(g) ∩ U2 = ∅`.
///
/// With `U1` to the right of `U2`, `U1` is pushed into a target beyond both
/// `U1` and `U3` by a map supported to the right of `U2`. The other
/// orientation is reduced to this one by the reflection `t -> r - t`.
pub fn displacement_witness(u1: &BaseSet, u2: &BaseSet, u3: &BaseSet) -> Result<IntervalMap, WitnessError> {
    if !u1.same_space(u2) || !u1.same_space(u3) {
        return Err(WitnessError::SpaceMismatch);
    }
    if !u1.closure().is_disjoint_from(&u2.closure()) {
        return Err(WitnessError::ClosuresIntersect(Box::new((u1.clone(), u2.clone()))));
    }
    if u1.a > u2.b {
        return push_right(u1, u2, u3);
    }
    let right = Rational::from(u1.r as i64);
    let mirrored = push_right(&u1.mirrored(), &u2.mirrored(), &u3.mirrored())?;
    let nodes: Vec<_> = mirrored.nodes.iter().rev().map(|(t, s)| (&right - t, &right - s)).collect();
    let element = build(&nodes, u1)?;
    Ok(IntervalMap { element, branch: mirrored.branch, nodes })
}

fn push_right(u1: &BaseSet, u2: &BaseSet, u3: &BaseSet) -> Result<IntervalMap, WitnessError> {
    let (n, right) = (u1.n, Rational::from(u1.r as i64));
    let lo = u1.b.clone().max(u3.b.clone());
    let c = &lo + &((&right - &lo) / Rational::from(n as i64));
    let d = &c + &((&right - &c) / Rational::from(n as i64));
    let target = BaseSet { n, r: u1.r, a: c, b: d };
    map_interval_above(u1, &target, &u2.b)
}
