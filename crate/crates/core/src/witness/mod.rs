//! Constructive witnesses for the four compressibility conditions of the
//! base of open intervals with n-adic endpoints, and the element
//! constructions built on top of them.

mod interval_map;
mod sequences;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{is_n_adic, nadic_level, pow_n, Rational};
use crate::plgroup::{Family, GroupDescriptor, Interval, IntervalUnion, MembershipTarget, PLMap, PlError};

pub use interval_map::{displacement_witness, map_interval, map_interval_above, Branch, IntervalMap};
pub use sequences::{conjugate_sequence, disjoint_conjugates, ConjugateSequence, DisjointProduct, DEFAULT_DEPTH_CAP};
pub use verify::{certify_cover, certify_displacement, certify_join, certify_map_interval, verify_base};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("invalid base set: {0}")]
    InvalidBaseSet(String),
    #[error("element is not in F0: {0}")]
    NotInF0(String),
    #[error("closures of U1 = {} and U2 = {} intersect", .0.0, .0.1)]
    ClosuresIntersect(Box<(BaseSet, BaseSet)>),
    #[error("base sets live in different spaces")]
    SpaceMismatch,
    #[error("the identity has no admissible interval")]
    IdentityElement,
    #[error("need at least {min} elements, got {got}")]
    TooFew { min: usize, got: usize },
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error(transparent)]
    Pl(#[from] PlError),
}

/// Open interval `(a, b)` with n-adic ends and `[a, b]` inside `(0, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBaseSet")]
pub struct BaseSet {
    n: u32,
    r: u32,
    a: Rational,
    b: Rational,
}

#[derive(Deserialize)]
struct RawBaseSet {
    n: u32,
    r: u32,
    a: Rational,
    b: Rational,
}

impl TryFrom<RawBaseSet> for BaseSet {
    type Error = WitnessError;

    fn try_from(raw: RawBaseSet) -> Result<Self, Self::Error> {
        BaseSet::new(raw.n, raw.r, raw.a, raw.b)
    }
}

impl BaseSet {
    pub fn new(n: u32, r: u32, a: Rational, b: Rational) -> Result<Self, WitnessError> {
        GroupDescriptor::new(n, r, Family::F0)?;
        let right = Rational::from(r as i64);
        if !(a.is_positive() && a < b && b < right) {
            return Err(WitnessError::InvalidBaseSet(format!("need 0 < a < b < {r}, got ({a},{b})")));
        }
        for end in [&a, &b] {
            if !is_n_adic(end, n) {
                return Err(WitnessError::InvalidBaseSet(format!("{end} is not {n}-adic")));
            }
        }
        Ok(BaseSet { n, r, a, b })
    }

    /// Convenience constructor from decimal fraction strings.
    pub fn parse(n: u32, r: u32, a: &str, b: &str) -> Result<Self, WitnessError> {
        let parse = |s: &str| s.parse::<Rational>().map_err(|e| WitnessError::InvalidBaseSet(e.to_string()));
        BaseSet::new(n, r, parse(a)?, parse(b)?)
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor { n: self.n, r: self.r, family: Family::F0 }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn interval(&self) -> Interval {
        Interval::open(self.a.clone(), self.b.clone()).expect("a < b")
    }

    pub fn as_union(&self) -> IntervalUnion {
        IntervalUnion::single(self.interval())
    }

    pub fn closure(&self) -> IntervalUnion {
        IntervalUnion::single(Interval::closed(self.a.clone(), self.b.clone()).expect("a < b"))
    }

    fn level(&self) -> u32 {
        level(&self.a, self.n).max(level(&self.b, self.n))
    }

    fn same_space(&self, other: &BaseSet) -> bool {
        self.n == other.n && self.r == other.r
    }

    /// Image under `t -> r - t`.
    fn mirrored(&self) -> BaseSet {
        let right = Rational::from(self.r as i64);
        BaseSet { n: self.n, r: self.r, a: &right - &self.b, b: &right - &self.a }
    }
}

impl fmt::Display for BaseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

fn level(q: &Rational, n: u32) -> u32 {
    nadic_level(q, n).expect("n-adic by construction")
}

/// Widens `[lo, hi]` by `n^-L`, starting from the finest endpoint level and
/// refining until the result stays strictly inside `(0, r)`.
fn widen(lo: &Rational, hi: &Rational, n: u32, r: u32, start_level: u32) -> BaseSet {
    let right = Rational::from(r as i64);
    let mut level = start_level as i64;
    loop {
        let margin = pow_n(n, -level);
        let (a, b) = (lo - &margin, hi + &margin);
        if a.is_positive() && b < right {
            return BaseSet { n, r, a, b };
        }
        level += 1;
    }
}

/// Smallest base set around `supp(g)` with an n-adic margin on both sides.
pub fn covering_neighborhood(g: &PLMap) -> Result<BaseSet, WitnessError> {
    let GroupDescriptor { n, r, .. } = g.descriptor();
    if let Some(reason) = rejection(g.membership(MembershipTarget::F0)) {
        return Err(WitnessError::NotInF0(reason));
    }
    let support = g.support();
    let Some(hull) = support.hull() else {
        return Ok(BaseSet { n, r, a: pow_n(n, -2), b: pow_n(n, -1) });
    };
    let start = level(&hull.lo, n).max(level(&hull.hi, n));
    Ok(widen(&hull.lo, &hull.hi, n, r, start))
}

/// Base set containing both inputs: their hull plus a margin.
pub fn join(u1: &BaseSet, u2: &BaseSet) -> Result<BaseSet, WitnessError> {
    if !u1.same_space(u2) {
        return Err(WitnessError::SpaceMismatch);
    }
    let lo = u1.a.clone().min(u2.a.clone());
    let hi = u1.b.clone().max(u2.b.clone());
    Ok(widen(&lo, &hi, u1.n, u1.r, u1.level().max(u2.level())))
}

fn rejection(cert: crate::plgroup::Certificate) -> Option<String> {
    match cert {
        crate::plgroup::Certificate::Rejected { reason } => Some(reason),
        _ => None,
    }
}

/// The four conditions of a compressible action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "i")]
    Cover,
    #[serde(rename = "ii")]
    MapInto,
    #[serde(rename = "iii")]
    Displace,
    #[serde(rename = "iv")]
    Join,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Cover => "i",
            Condition::MapInto => "ii",
            Condition::Displace => "iii",
            Condition::Join => "iv",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, pass: bool) -> Self {
        Check { name: name.to_string(), pass }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub condition: Condition,
    pub inputs: serde_json::Value,
    pub witness: serde_json::Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub branch: Option<Branch>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
