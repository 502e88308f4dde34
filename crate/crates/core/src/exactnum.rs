//! Exact rational arithmetic with n-adic membership and level normalization.
//!
//! Every coordinate handled by the crate is a [`Rational`] kept in lowest
//! terms, so structural equality is numerical equality. The n-adic helpers
//! answer the questions the group code keeps asking: is this number of the
//! form `p / n^k`, and what is the smallest such `k`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("base must be at least 2, got {0}")]
    BadBase(u32),
    #[error("{value} is not in Z[1/{base}]")]
    NotNAdic { value: Rational, base: u32 },
    #[error("level {level} too small: {base}^{level} * {value} is not an integer")]
    LevelTooSmall { value: Rational, base: u32, level: u32 },
}

/// Arbitrary-precision rational in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, NumError> {
        let (numer, denom) = (numer.into(), denom.into());
        if denom.is_zero() {
            return Err(NumError::ZeroDenominator(format!("{numer}/0")));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    /// Panicking constructor for literals known to be valid.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Rational::new(numer, denom).expect("nonzero denominator")
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract_positive(&self) -> Self {
        self - &Rational::from_integer(self.floor())
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::from_integer(value)
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as for the underlying big rationals.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

/// Parses `[-]digits(/digits)?` into a lowest-terms rational.
pub fn parse_rational(text: &str) -> Result<Rational, NumError> {
    let malformed = || NumError::Malformed(text.to_string());
    let trimmed = text.trim();
    let (num_text, den_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (trimmed, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num_text.strip_prefix('-').unwrap_or(num_text);
    if !digits(unsigned) {
        return Err(malformed());
    }
    let numer: BigInt = num_text.parse().map_err(|_| malformed())?;
    let denom: BigInt = match den_text {
        Some(d) if digits(d) => d.parse().map_err(|_| malformed())?,
        Some(_) => return Err(malformed()),
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(NumError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational(BigRational::new(numer, denom)))
}

fn check_base(n: u32) -> Result<(), NumError> {
    if n < 2 {
        Err(NumError::BadBase(n))
    } else {
        Ok(())
    }
}

/// Smallest `K >= 0` with `n^K * q` an integer, or `None` when `q` is not n-adic.
pub fn nadic_level(q: &Rational, n: u32) -> Option<u32> {
    if n < 2 {
        return None;
    }
    let base = BigInt::from(n);
    let mut rest = q.denom().clone();
    let mut level = 0u32;
    // Each pass strips gcd(rest, n); the pass count is max_p ceil(v_p(d) / v_p(n)).
    while !rest.is_one() {
        let g = rest.gcd(&base);
        if g.is_one() {
            return None;
        }
        rest /= g;
        level += 1;
    }
    Some(level)
}

/// True iff `q = p / n^k` for integers `p` and `k >= 0`.
pub fn is_n_adic(q: &Rational, n: u32) -> bool {
    nadic_level(q, n).is_some()
}

/// Returns the integer `n^K * q`.
pub fn to_level(q: &Rational, n: u32, level: u32) -> Result<BigInt, NumError> {
    check_base(n)?;
    let scaled = q * &Rational::from_integer(BigInt::from(n).pow(level));
    if scaled.is_integer() {
        Ok(scaled.numer().clone())
    } else {
        Err(NumError::LevelTooSmall { value: q.clone(), base: n, level })
    }
}

/// `n^k` for any integer exponent.
pub fn pow_n(n: u32, k: i64) -> Rational {
    let magnitude = BigInt::from(n).pow(k.unsigned_abs() as u32);
    match k.cmp(&0) {
        Ordering::Less => Rational(BigRational::new(BigInt::one(), magnitude)),
        _ => Rational::from_integer(magnitude),
    }
}

/// `k` such that `q = n^k`, if one exists.
pub fn log_n(q: &Rational, n: u32) -> Option<i64> {
    if n < 2 || !q.is_positive() {
        return None;
    }
    let base = BigInt::from(n);
    let power_exponent = |value: &BigInt| -> Option<i64> {
        let mut value = value.clone();
        let mut k = 0i64;
        while !value.is_one() {
            let (quot, rem) = value.div_rem(&base);
            if !rem.is_zero() {
                return None;
            }
            value = quot;
            k += 1;
        }
        Some(k)
    };
    if q.denom().is_one() {
        power_exponent(q.numer())
    } else if q.numer().is_one() {
        power_exponent(q.denom()).map(|k| -k)
    } else {
        None
    }
}

/// Class of `n^K * q` modulo `n - 1`, independent of `K` once `n^K q` is integral.
pub fn nadic_residue(q: &Rational, n: u32) -> Option<u64> {
    let level = nadic_level(q, n)?;
    let modulus = BigInt::from(n - 1);
    let scaled = to_level(q, n, level).ok()?;
    scaled.mod_floor(&modulus).to_u64()
}

/// An element of `Z[1/n]`, carried with its base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NAdicRational {
    base: u32,
    value: Rational,
}

impl NAdicRational {
    pub fn new(value: Rational, base: u32) -> Result<Self, NumError> {
        check_base(base)?;
        if !is_n_adic(&value, base) {
            return Err(NumError::NotNAdic { value, base });
        }
        Ok(NAdicRational { base, value })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn level(&self) -> u32 {
        nadic_level(&self.value, self.base).expect("validated on construction")
    }

    pub fn to_level(&self, level: u32) -> Result<BigInt, NumError> {
        to_level(&self.value, self.base, level)
    }

    pub fn residue(&self) -> u64 {
        nadic_residue(&self.value, self.base).expect("validated on construction")
    }

    pub fn into_rational(self) -> Rational {
        self.value
    }
}

impl fmt::Display for NAdicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_and_normalizes() {
        assert_eq!(q("3/8"), Rational::frac(3, 8));
        assert_eq!(q("5/10"), Rational::frac(1, 2));
        assert_eq!(q("-4/6").to_string(), "-2/3");
        assert_eq!(q("7").to_string(), "7");
        assert!(matches!(parse_rational("2/0"), Err(NumError::ZeroDenominator(_))));
        for bad in ["", "1/", "/2", "1.5", "a/b", "--1", "1/-2", "+3"] {
            assert!(matches!(parse_rational(bad), Err(NumError::Malformed(_))), "{bad}");
        }
    }

    #[test]
    fn n_adic_membership() {
        assert!(is_n_adic(&q("3/8"), 2));
        assert!(!is_n_adic(&q("1/6"), 2));
        assert!(is_n_adic(&q("1/6"), 6));
        assert!(is_n_adic(&q("-5"), 3));
        assert_eq!(nadic_level(&q("1/8"), 4), Some(2));
        assert_eq!(nadic_level(&q("1/9"), 6), Some(2));
        assert_eq!(nadic_level(&q("1/4"), 12), Some(1));
    }

    #[test]
    fn level_normal_form() {
        assert_eq!(to_level(&q("3/8"), 2, 5).unwrap(), BigInt::from(12));
        assert_eq!(to_level(&q("0"), 3, 0).unwrap(), BigInt::from(0));
        assert!(matches!(to_level(&q("1/2"), 2, 0), Err(NumError::LevelTooSmall { .. })));
    }

    #[test]
    fn powers_and_logs() {
        assert_eq!(pow_n(2, -3), q("1/8"));
        assert_eq!(pow_n(3, 2), q("9"));
        assert_eq!(log_n(&q("1/27"), 3), Some(-3));
        assert_eq!(log_n(&q("1"), 5), Some(0));
        assert_eq!(log_n(&q("3"), 2), None);
        assert_eq!(log_n(&q("2/3"), 2), None);
        assert_eq!(log_n(&q("-2"), 2), None);
    }

    #[test]
    fn residues() {
        assert_eq!(nadic_residue(&q("1/3"), 3), Some(1));
        assert_eq!(nadic_residue(&q("2/3"), 3), Some(0));
        assert_eq!(nadic_residue(&q("5/4"), 4), Some(2));
        assert_eq!(nadic_residue(&q("1/5"), 3), None);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-200i64..200, 1i64..60).prop_map(|(p, d)| Rational::frac(p, d))
    }

    fn nadic(n: u32) -> impl Strategy<Value = Rational> {
        (-500i64..500, 0u32..6).prop_map(move |(p, k)| Rational::frac(p, (n as i64).pow(k)))
    }

    proptest! {
        #[test]
        fn field_axioms_exact(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &(-&a), Rational::zero());
            if let Some(inv) = a.recip() {
                prop_assert_eq!(&a * &inv, Rational::one());
            }
        }

        #[test]
        fn n_adic_closed_under_ring_ops(n in 2u32..7, a in nadic(2), b in nadic(2)) {
            // Inputs are dyadic; rescale to base-n values by a power of n.
            let a = &a * &pow_n(n, -2);
            let b = &b * &pow_n(n, -3);
            if is_n_adic(&a, n) && is_n_adic(&b, n) {
                prop_assert!(is_n_adic(&(&a + &b), n));
                prop_assert!(is_n_adic(&(&a * &b), n));
            }
        }

        #[test]
        fn level_recurrence(n in 2u32..7, p in -1000i64..1000, k in 0u32..5, extra in 1u32..4) {
            let value = Rational::frac(p, (n as i64).pow(k));
            let level = k + extra;
            let hi = to_level(&value, n, level).unwrap();
            let lo = to_level(&value, n, level - 1).unwrap();
            prop_assert_eq!(hi, lo * BigInt::from(n));
        }

        #[test]
        fn display_parse_roundtrip(a in small_rational()) {
            prop_assert_eq!(parse_rational(&a.to_string()).unwrap(), a);
        }
    }
}
