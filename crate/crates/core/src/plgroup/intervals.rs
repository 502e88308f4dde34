use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactnum::Rational;

/// Interval with rational endpoints. A degenerate interval is a single closed point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        let valid = lo < hi || (lo == hi && lo_closed && hi_closed);
        valid.then_some(Interval { lo, hi, lo_closed, hi_closed })
    }

    pub fn closed(lo: Rational, hi: Rational) -> Option<Self> {
        Interval::new(lo, hi, true, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Option<Self> {
        Interval::new(lo, hi, false, false)
    }

    pub fn half_open(lo: Rational, hi: Rational) -> Option<Self> {
        Interval::new(lo, hi, true, false)
    }

    pub fn point(at: Rational) -> Self {
        Interval { lo: at.clone(), hi: at, lo_closed: true, hi_closed: true }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { x >= &self.lo } else { x > &self.lo };
        let below = if self.hi_closed { x <= &self.hi } else { x < &self.hi };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    /// Image under the increasing affine map `x -> slope * x + intercept`.
    pub fn affine_image(&self, slope: &Rational, intercept: &Rational) -> Interval {
        debug_assert!(slope.is_positive());
        Interval {
            lo: slope * &self.lo + intercept,
            hi: slope * &self.hi + intercept,
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{},{}{close}", self.lo, self.hi)
    }
}

/// Finite union of intervals, kept sorted, pairwise disjoint and non-adjacent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    pub fn from_intervals(parts: impl IntoIterator<Item = Interval>) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().collect();
        // Closed left ends sort before open ones at the same coordinate.
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for next in parts {
            if let Some(cur) = merged.last_mut() {
                let touches =
                    next.lo < cur.hi || (next.lo == cur.hi && (cur.hi_closed || next.lo_closed));
                if touches {
                    match next.hi.cmp(&cur.hi) {
                        std::cmp::Ordering::Greater => {
                            cur.hi = next.hi;
                            cur.hi_closed = next.hi_closed;
                        }
                        std::cmp::Ordering::Equal => cur.hi_closed |= next.hi_closed,
                        std::cmp::Ordering::Less => {}
                    }
                    if next.lo == cur.lo {
                        cur.lo_closed |= next.lo_closed;
                    }
                    continue;
                }
            }
            merged.push(next);
        }
        IntervalUnion { parts: merged }
    }

    pub fn single(interval: Interval) -> Self {
        IntervalUnion { parts: vec![interval] }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total Lebesgue length; points contribute nothing.
    pub fn measure(&self) -> Rational {
        self.parts.iter().fold(Rational::zero(), |acc, p| acc + p.length())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::from_intervals(self.parts.iter().chain(other.parts.iter()).cloned())
    }

    pub fn intersection(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if let Some(i) = a.intersect(b) {
                    out.push(i);
                }
            }
        }
        IntervalUnion::from_intervals(out)
    }

    /// `domain` minus `self`.
    pub fn complement_within(&self, domain: &Interval) -> IntervalUnion {
        let mut out = Vec::new();
        let mut cursor = domain.lo.clone();
        let mut cursor_closed = domain.lo_closed;
        for part in self.parts.iter().filter_map(|p| p.intersect(domain)) {
            if let Some(gap) = Interval::new(cursor.clone(), part.lo.clone(), cursor_closed, !part.lo_closed) {
                out.push(gap);
            }
            cursor = part.hi.clone();
            cursor_closed = !part.hi_closed;
        }
        if let Some(gap) = Interval::new(cursor, domain.hi.clone(), cursor_closed, domain.hi_closed) {
            out.push(gap);
        }
        IntervalUnion::from_intervals(out)
    }

    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        &self.intersection(other) == self
    }

    pub fn is_disjoint_from(&self, other: &IntervalUnion) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn closure(&self) -> IntervalUnion {
        IntervalUnion::from_intervals(self.parts.iter().map(|p| Interval {
            lo_closed: true,
            hi_closed: true,
            ..p.clone()
        }))
    }

    pub fn hull(&self) -> Option<Interval> {
        let first = self.parts.first()?;
        let last = self.parts.last()?;
        Interval::new(first.lo.clone(), last.hi.clone(), first.lo_closed, last.hi_closed)
    }
}

impl From<Interval> for IntervalUnion {
    fn from(value: Interval) -> Self {
        IntervalUnion::single(value)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
