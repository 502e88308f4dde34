//! Elements of the Higman-Thompson groups `F_{n,r}`, `F0_{n,r}` and `G_{n,r}`.
//!
//! A [`PLMap`] is a right-continuous piecewise-affine bijection of `[0, r)`
//! stored as pieces `x -> slope * x + intercept` on `[left_i, left_{i+1})`.
//! Every constructor validates and canonicalizes (adjacent pieces with the
//! same affine law are merged), so two maps are equal iff their canonical
//! forms are structurally equal.

mod builders;
mod intervals;
mod random;
mod sign;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{is_n_adic, log_n, NumError, Rational};

pub use builders::{interval_residue, map_between_intervals, pl_interpolate, LocalMap};
pub use intervals::{Interval, IntervalUnion};
pub use random::{random_element, random_element_with};
pub use sign::{permutation_sign, sign_invariant, standard_table, Cylinder, CylinderPair, StandardTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("invalid group descriptor: n = {n}, r = {r}")]
    BadDescriptor { n: u32, r: u32 },
    #[error("element has no pieces")]
    NoPieces,
    #[error("first piece must start at 0, found {0}")]
    FirstLeftNotZero(Rational),
    #[error("breakpoints must be strictly increasing inside [0, r): {0}")]
    BadBreakpoint(Rational),
    #[error("breakpoint {0} is not n-adic")]
    NonNAdicBreakpoint(Rational),
    #[error("slope not a power of n: {0}")]
    SlopeNotPowerOfN(Rational),
    #[error("image of an n-adic point is non-n-adic (intercept {0})")]
    NonNAdicImage(Rational),
    #[error("not a bijection of [0, r)")]
    NotBijection,
    #[error("discontinuity at {0} in a continuous family")]
    Discontinuous(Rational),
    #[error("support touches an endpoint of [0, r)")]
    TouchesEndpoint,
    #[error("point {0} outside [0, r)")]
    OutOfRange(Rational),
    #[error("descriptor mismatch: {0} vs {1}")]
    DescriptorMismatch(GroupDescriptor, GroupDescriptor),
    #[error("endpoint slopes are only defined for continuous families")]
    NotContinuousFamily,
    #[error("intervals not in the same orbit: residues {source_residue} vs {target_residue} mod {modulus}")]
    NotInSameOrbit { source_residue: u64, target_residue: u64, modulus: u64 },
    #[error("invalid interval {0}")]
    BadInterval(String),
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("sign invariant needs odd n, got {0}")]
    EvenBase(u32),
    #[error("refinement too large to tabulate ({0} cylinders)")]
    TableTooLarge(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Which subgroup an element is declared to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    F,
    F0,
    G,
}

impl Family {
    pub fn is_continuous(self) -> bool {
        !matches!(self, Family::G)
    }

    /// Family of a product: anything with `G` is `G`, otherwise `F` unless both are `F0`.
    pub fn join(self, other: Family) -> Family {
        match (self, other) {
            (Family::G, _) | (_, Family::G) => Family::G,
            (Family::F0, Family::F0) => Family::F0,
            _ => Family::F,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::F => "F",
            Family::F0 => "F0",
            Family::G => "G",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "F" => Ok(Family::F),
            "F0" => Ok(Family::F0),
            "G" => Ok(Family::G),
            other => Err(format!("unknown family {other:?} (expected F, F0 or G)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub n: u32,
    pub r: u32,
    pub family: Family,
}

impl GroupDescriptor {
    pub fn new(n: u32, r: u32, family: Family) -> Result<Self, PlError> {
        if n < 2 || r < 1 {
            return Err(PlError::BadDescriptor { n, r });
        }
        Ok(GroupDescriptor { n, r, family })
    }

    pub fn with_family(self, family: Family) -> Self {
        GroupDescriptor { family, ..self }
    }

    pub fn right_end(&self) -> Rational {
        Rational::from(self.r as i64)
    }

    fn same_space(&self, other: &GroupDescriptor) -> bool {
        self.n == other.n && self.r == other.r
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{{{},{}}}", self.family, self.n, self.r)
    }
}

/// One affine piece `x -> slope * x + intercept` starting at `left`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub left: Rational,
    pub slope: Rational,
    pub intercept: Rational,
}

impl Piece {
    pub fn apply(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    pub fn is_identity(&self) -> bool {
        self.slope.is_one() && self.intercept.is_zero()
    }

    fn same_law(&self, other: &Piece) -> bool {
        self.slope == other.slope && self.intercept == other.intercept
    }
}

#[derive(Deserialize)]
struct RawElement {
    family: Family,
    n: u32,
    r: u32,
    pieces: Vec<Piece>,
}

/// Canonical element of `F_{n,r}`, `F0_{n,r}` or `G_{n,r}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "ElementJson")]
pub struct PLMap {
    descriptor: GroupDescriptor,
    pieces: Vec<Piece>,
}

#[derive(Serialize)]
struct ElementJson {
    family: Family,
    n: u32,
    r: u32,
    pieces: Vec<Piece>,
}

impl From<PLMap> for ElementJson {
    fn from(map: PLMap) -> Self {
        ElementJson {
            family: map.descriptor.family,
            n: map.descriptor.n,
            r: map.descriptor.r,
            pieces: map.pieces,
        }
    }
}

impl TryFrom<RawElement> for PLMap {
    type Error = PlError;

    fn try_from(raw: RawElement) -> Result<Self, Self::Error> {
        let descriptor = GroupDescriptor::new(raw.n, raw.r, raw.family)?;
        PLMap::validate(raw.pieces, descriptor)
    }
}

fn merge_pieces(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for piece in pieces {
        match out.last() {
            Some(prev) if prev.same_law(&piece) => {}
            _ => out.push(piece),
        }
    }
    out
}

impl PLMap {
    pub fn identity(descriptor: GroupDescriptor) -> Self {
        PLMap {
            descriptor,
            pieces: vec![Piece { left: Rational::zero(), slope: Rational::one(), intercept: Rational::zero() }],
        }
    }

    /// Checks every membership condition of the descriptor's family and
    /// returns the canonical form, or the first violated condition.
    pub fn validate(pieces: Vec<Piece>, descriptor: GroupDescriptor) -> Result<Self, PlError> {
        let GroupDescriptor { n, r, family } = GroupDescriptor::new(descriptor.n, descriptor.r, descriptor.family)?;
        let right = Rational::from(r as i64);
        let first = pieces.first().ok_or(PlError::NoPieces)?;
        if !first.left.is_zero() {
            return Err(PlError::FirstLeftNotZero(first.left.clone()));
        }
        for pair in pieces.windows(2) {
            if pair[1].left <= pair[0].left {
                return Err(PlError::BadBreakpoint(pair[1].left.clone()));
            }
        }
        for piece in &pieces {
            if piece.left >= right {
                return Err(PlError::BadBreakpoint(piece.left.clone()));
            }
            if !is_n_adic(&piece.left, n) {
                return Err(PlError::NonNAdicBreakpoint(piece.left.clone()));
            }
        }
        for piece in &pieces {
            if log_n(&piece.slope, n).is_none() {
                return Err(PlError::SlopeNotPowerOfN(piece.slope.clone()));
            }
        }
        for piece in &pieces {
            if !is_n_adic(&piece.intercept, n) {
                return Err(PlError::NonNAdicImage(piece.intercept.clone()));
            }
        }

        // Images of the half-open pieces must tile [0, r).
        let ends: Vec<&Rational> = pieces.iter().skip(1).map(|p| &p.left).chain(std::iter::once(&right)).collect();
        let mut images: Vec<(Rational, Rational)> =
            pieces.iter().zip(&ends).map(|(p, end)| (p.apply(&p.left), p.apply(end))).collect();
        if family.is_continuous() {
            if !images[0].0.is_zero() {
                return Err(PlError::Discontinuous(Rational::zero()));
            }
            for (i, pair) in images.windows(2).enumerate() {
                if pair[0].1 != pair[1].0 {
                    return Err(PlError::Discontinuous(pieces[i + 1].left.clone()));
                }
            }
        }
        images.sort();
        let mut cursor = Rational::zero();
        for (start, end) in &images {
            if start != &cursor {
                return Err(PlError::NotBijection);
            }
            cursor = end.clone();
        }
        if cursor != right {
            return Err(PlError::NotBijection);
        }

        let pieces = merge_pieces(pieces);
        if family == Family::F0 && !(pieces[0].is_identity() && pieces[pieces.len() - 1].is_identity()) {
            return Err(PlError::TouchesEndpoint);
        }
        Ok(PLMap { descriptor, pieces })
    }

    /// Continuous map through the nodes `(x_i, y_i)`, which must run from `(0,0)` to `(r,r)`.
    pub fn from_nodes(nodes: &[(Rational, Rational)], descriptor: GroupDescriptor) -> Result<Self, PlError> {
        if nodes.len() < 2 {
            return Err(PlError::BadPartition("need at least two nodes".into()));
        }
        let mut pieces = Vec::with_capacity(nodes.len() - 1);
        for pair in nodes.windows(2) {
            let (x0, y0) = &pair[0];
            let (x1, y1) = &pair[1];
            if x1 <= x0 || y1 <= y0 {
                return Err(PlError::BadPartition(format!("nodes not increasing at {x0}")));
            }
            let slope = (y1 - y0) / (x1 - x0);
            let intercept = y0 - &(&slope * x0);
            pieces.push(Piece { left: x0.clone(), slope, intercept });
        }
        let right = descriptor.right_end();
        if nodes[nodes.len() - 1] != (right.clone(), right) {
            return Err(PlError::BadPartition("nodes must end at (r, r)".into()));
        }
        PLMap::validate(pieces, descriptor)
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("element serializes")
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        self.descriptor
    }

    pub fn family(&self) -> Family {
        self.descriptor.family
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].is_identity()
    }

    /// Same map, declared in another family; revalidated.
    pub fn with_family(&self, family: Family) -> Result<Self, PlError> {
        PLMap::validate(self.pieces.clone(), self.descriptor.with_family(family))
    }

    /// Right end of piece `i`.
    pub fn piece_end(&self, i: usize) -> Rational {
        self.pieces.get(i + 1).map(|p| p.left.clone()).unwrap_or_else(|| self.descriptor.right_end())
    }

    /// Breakpoints `left_1 < ... < left_{p-1}` strictly inside `(0, r)`.
    pub fn breakpoints(&self) -> impl Iterator<Item = &Rational> {
        self.pieces.iter().skip(1).map(|p| &p.left)
    }

    fn piece_index(&self, x: &Rational) -> usize {
        self.pieces.partition_point(|p| &p.left <= x) - 1
    }

    pub fn evaluate(&self, x: &Rational) -> Result<Rational, PlError> {
        if x.is_negative() || x >= &self.descriptor.right_end() {
            return Err(PlError::OutOfRange(x.clone()));
        }
        Ok(self.pieces[self.piece_index(x)].apply(x))
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &PLMap) -> Result<PLMap, PlError> {
        if !self.descriptor.same_space(&other.descriptor) {
            return Err(PlError::DescriptorMismatch(self.descriptor, other.descriptor));
        }
        let mut pieces = Vec::with_capacity(self.pieces.len() + other.pieces.len());
        for (i, inner) in other.pieces.iter().enumerate() {
            let image_end = inner.apply(&other.piece_end(i));
            let mut cursor = inner.left.clone();
            let mut j = self.piece_index(&inner.apply(&cursor));
            loop {
                let outer = &self.pieces[j];
                pieces.push(Piece {
                    left: cursor.clone(),
                    slope: &outer.slope * &inner.slope,
                    intercept: &outer.slope * &inner.intercept + &outer.intercept,
                });
                match self.pieces.get(j + 1) {
                    Some(next) if next.left < image_end => {
                        cursor = (&next.left - &inner.intercept) / &inner.slope;
                        j += 1;
                    }
                    _ => break,
                }
            }
        }
        let descriptor = self.descriptor.with_family(self.descriptor.family.join(other.descriptor.family));
        Ok(PLMap { descriptor, pieces: merge_pieces(pieces) })
    }

    pub fn inverse(&self) -> PLMap {
        let mut pieces: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| {
                let slope = p.slope.recip().expect("slopes are positive");
                Piece { left: p.apply(&p.left), intercept: -(&p.intercept * &slope), slope }
            })
            .collect();
        pieces.sort_by(|a, b| a.left.cmp(&b.left));
        PLMap { descriptor: self.descriptor, pieces: merge_pieces(pieces) }
    }

    pub fn conjugate_by(&self, h: &PLMap) -> Result<PLMap, PlError> {
        h.compose(self)?.compose(&h.inverse())
    }

    /// Domain of piece `i` as an interval; the last piece of a continuous map includes `r`.
    fn piece_domain(&self, i: usize) -> Interval {
        let closed_right = self.descriptor.family.is_continuous() && i + 1 == self.pieces.len();
        Interval::new(self.pieces[i].left.clone(), self.piece_end(i), true, closed_right).expect("nonempty piece")
    }

    /// Space the map acts on: `[0, r]` for continuous families, `[0, r)` otherwise.
    pub fn domain(&self) -> Interval {
        let right = self.descriptor.right_end();
        Interval::new(Rational::zero(), right, true, self.descriptor.family.is_continuous()).expect("r >= 1")
    }

    /// Exact image of a set under the map.
    pub fn image(&self, set: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for part in set.parts() {
            for (i, piece) in self.pieces.iter().enumerate() {
                if let Some(chunk) = part.intersect(&self.piece_domain(i)) {
                    out.push(chunk.affine_image(&piece.slope, &piece.intercept));
                }
            }
        }
        IntervalUnion::from_intervals(out)
    }

    /// Closure of the set of moved points.
    pub fn support(&self) -> IntervalUnion {
        IntervalUnion::from_intervals(self.pieces.iter().enumerate().filter(|(_, p)| !p.is_identity()).map(|(i, p)| {
            Interval::closed(p.left.clone(), self.piece_end(i)).expect("nonempty piece")
        }))
    }

    /// Exact fixed-point set, including isolated fixed points of non-identity pieces.
    pub fn fixed_set(&self) -> IntervalUnion {
        let mut out = Vec::new();
        for (i, piece) in self.pieces.iter().enumerate() {
            let domain = self.piece_domain(i);
            if piece.is_identity() {
                out.push(domain);
            } else if !piece.slope.is_one() {
                let fixed = &piece.intercept / &(Rational::one() - &piece.slope);
                if domain.contains(&fixed) {
                    out.push(Interval::point(fixed));
                }
            }
        }
        if self.descriptor.family.is_continuous() {
            out.push(Interval::point(self.descriptor.right_end()));
        }
        IntervalUnion::from_intervals(out)
    }

    /// Normalized Lebesgue measure of the fixed set.
    pub fn fix_measure(&self) -> Rational {
        self.fixed_set().measure() / self.descriptor.right_end()
    }

    /// `(k0, k1)` with `n^k0` the slope at `0+` and `n^k1` the slope at `r-`.
    pub fn endpoint_slopes(&self) -> Result<AbelianizationVector, PlError> {
        if !self.descriptor.family.is_continuous() {
            return Err(PlError::NotContinuousFamily);
        }
        let n = self.descriptor.n;
        let first = &self.pieces[0].slope;
        let last = &self.pieces[self.pieces.len() - 1].slope;
        Ok(AbelianizationVector {
            k0: log_n(first, n).expect("validated slope"),
            k1: log_n(last, n).expect("validated slope"),
        })
    }

    /// First point where consecutive pieces fail to join, if any.
    pub fn first_discontinuity(&self) -> Option<Rational> {
        if !self.pieces[0].apply(&Rational::zero()).is_zero() {
            return Some(Rational::zero());
        }
        self.pieces.windows(2).find(|w| w[0].apply(&w[1].left) != w[1].apply(&w[1].left)).map(|w| w[1].left.clone())
    }

    pub fn membership(&self, target: MembershipTarget) -> Certificate {
        let right = self.descriptor.right_end();
        match target {
            MembershipTarget::G => Certificate::Accepted {
                witness: "validated right-continuous n-adic PL bijection".into(),
                neighborhoods: None,
            },
            MembershipTarget::F => match self.first_discontinuity() {
                None => Certificate::Accepted { witness: "continuous at every breakpoint".into(), neighborhoods: None },
                Some(at) => Certificate::Rejected { reason: format!("discontinuous at {at}") },
            },
            MembershipTarget::F0 => {
                if let Some(at) = self.first_discontinuity() {
                    return Certificate::Rejected { reason: format!("discontinuous at {at}") };
                }
                let first = &self.pieces[0];
                let last = &self.pieces[self.pieces.len() - 1];
                if !first.is_identity() {
                    return Certificate::Rejected {
                        reason: format!("not the identity near 0 (slope {} at 0)", first.slope),
                    };
                }
                if !last.is_identity() {
                    return Certificate::Rejected {
                        reason: format!("not the identity near {right} (slope {} at {right})", last.slope),
                    };
                }
                if self.is_identity() {
                    let whole = Interval::closed(Rational::zero(), right.clone()).expect("r >= 1");
                    return Certificate::Accepted {
                        witness: "identity".into(),
                        neighborhoods: Some(Box::new((whole.clone(), whole))),
                    };
                }
                Certificate::Accepted {
                    witness: "identity on both end pieces".into(),
                    neighborhoods: Some(Box::new((
                        Interval::closed(Rational::zero(), self.piece_end(0)).expect("nonempty"),
                        Interval::closed(last.left.clone(), right).expect("nonempty"),
                    ))),
                }
            }
            MembershipTarget::Commutator => match self.membership(MembershipTarget::F0) {
                rejected @ Certificate::Rejected { .. } => rejected,
                Certificate::Accepted { neighborhoods, .. } if self.descriptor.n == 2 => Certificate::Accepted {
                    witness: "n = 2: commutator subgroup is the kernel of the endpoint slopes".into(),
                    neighborhoods,
                },
                _ => Certificate::NecessaryConditionsOnly {
                    checked: vec!["continuous".into(), "identity near 0 and r".into()],
                },
            },
        }
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.descriptor)?;
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}: {}x+{}", p.left, p.slope, p.intercept)?;
        }
        write!(f, "]")
    }
}

/// Endpoint-slope projection onto `Z^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianizationVector {
    pub k0: i64,
    pub k1: i64,
}

impl std::ops::Add for AbelianizationVector {
    type Output = AbelianizationVector;
    fn add(self, rhs: Self) -> Self {
        AbelianizationVector { k0: self.k0 + rhs.k0, k1: self.k1 + rhs.k1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MembershipTarget {
    F,
    F0,
    G,
    Commutator,
}

impl std::str::FromStr for MembershipTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "F" => Ok(MembershipTarget::F),
            "F0" => Ok(MembershipTarget::F0),
            "G" => Ok(MembershipTarget::G),
            "commutator" => Ok(MembershipTarget::Commutator),
            other => Err(format!("unknown membership target {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum Certificate {
    Accepted { witness: String, neighborhoods: Option<Box<(Interval, Interval)>> },
    Rejected { reason: String },
    NecessaryConditionsOnly { checked: Vec<String> },
}

impl Certificate {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Certificate::Accepted { .. })
    }
}

#[cfg(test)]
mod tests;
