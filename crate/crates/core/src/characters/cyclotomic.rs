//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is a polynomial in `ζ_N = exp(2πi/N)` of degree below `φ(N)`,
//! i.e. a residue modulo the cyclotomic polynomial `Φ_N`. Elements of
//! different orders are compared and combined after lifting both to the
//! field of the lcm order.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::exactnum::Rational;

type Poly = Vec<Rational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Poly {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Quotient and remainder of `a` by a nonzero `b`.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let lead = b.last().expect("nonzero divisor").clone();
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = rem.last().expect("nonempty") / &lead;
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] -= &(&factor * c);
        }
        quot[shift] = factor;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

/// `Φ_n` as `(x^n - 1) / Π_{d | n, d < n} Φ_d`.
fn cyclotomic_poly(n: u64) -> Poly {
    let mut p = vec![Rational::zero(); n as usize + 1];
    p[0] = Rational::from(-1);
    p[n as usize] = Rational::one();
    for d in (1..n).filter(|&d| n.is_multiple_of(d)) {
        p = poly_divmod(&p, &cyclotomic_poly(d)).0;
    }
    p
}

/// Exact element of `Q(ζ_order)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Poly,
}

impl Cyclotomic {
    fn reduced(order: u64, coeffs: Poly) -> Self {
        let modulus = cyclotomic_poly(order);
        Cyclotomic { order, coeffs: poly_divmod(&coeffs, &modulus).1 }
    }

    pub fn rational(value: Rational) -> Self {
        Cyclotomic { order: 1, coeffs: trim(vec![value]) }
    }

    pub fn zero() -> Self {
        Cyclotomic::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Cyclotomic::rational(Rational::one())
    }

    /// `exp(2πi θ)` for a rational angle `θ`.
    pub fn root_of_unity(theta: &Rational) -> Self {
        let angle = theta.fract_positive();
        let order = angle.denom().to_u64().expect("angle denominator fits in u64");
        let exponent = (angle.numer() % angle.denom()).to_usize().expect("small exponent");
        let mut coeffs = vec![Rational::zero(); exponent + 1];
        coeffs[exponent] = Rational::one();
        Cyclotomic::reduced(order, coeffs)
    }

    /// Same element viewed in `Q(ζ_target)`; `target` must be a multiple of the order.
    fn lift(&self, target: u64) -> Self {
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let mut coeffs = vec![Rational::zero(); self.coeffs.len().saturating_sub(1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c.clone();
        }
        Cyclotomic::reduced(target, trim(coeffs))
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let order = self.order.lcm(&other.order);
        (self.lift(order), other.lift(order))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let negated: Poly = b.coeffs.iter().map(|c| -c).collect();
        Cyclotomic { order: a.order, coeffs: poly_sub(&a.coeffs, &negated) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        Cyclotomic { order: a.order, coeffs: poly_sub(&a.coeffs, &b.coeffs) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        Cyclotomic::reduced(a.order, poly_mul(&a.coeffs, &b.coeffs))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Cyclotomic { order: self.order, coeffs: trim(self.coeffs.iter().map(|c| c * factor).collect()) }
    }

    /// Complex conjugate: `ζ^i -> ζ^(N-i)`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut coeffs = vec![Rational::zero(); n.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(n - i) % n.max(1)] += c;
        }
        Cyclotomic::reduced(self.order, trim(coeffs))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm modulo `Φ_N`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let modulus = cyclotomic_poly(self.order);
        let (mut r0, mut r1) = (modulus.clone(), self.coeffs.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
        }
        // r0 is a nonzero constant because Φ_N is irreducible.
        let unit = r0[0].recip().expect("nonzero gcd");
        Some(Cyclotomic::reduced(self.order, s0).scale(&unit))
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| Complex64::from_polar(c.to_f64(), std::f64::consts::TAU * i as f64 / n))
            .sum()
    }

    /// Sum of the absolute values of the coefficients, a bound on `|value|`.
    pub fn coefficient_mass(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs().to_f64()).sum()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl From<Rational> for Cyclotomic {
    fn from(value: Rational) -> Self {
        Cyclotomic::rational(value)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, magnitude) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            match (first, sign) {
                (true, "-") => write!(f, "-")?,
                (true, _) => {}
                (false, s) => write!(f, " {s} ")?,
            }
            first = false;
            if i == 0 {
                write!(f, "{magnitude}")?;
                continue;
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude}*")?;
            }
            write!(f, "e({})", Rational::frac(i as i64, self.order as i64))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let show = |n| cyclotomic_poly(n).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(show(1), "-1,1");
        assert_eq!(show(2), "1,1");
        assert_eq!(show(4), "1,0,1");
        assert_eq!(show(6), "1,-1,1");
        assert_eq!(show(12), "1,0,-1,0,1");
    }

    #[test]
    fn roots_of_unity_relations() {
        let w = Cyclotomic::root_of_unity(&q("1/3"));
        let sum = Cyclotomic::one().add(&w).add(&w.mul(&w));
        assert!(sum.is_zero());
        assert_eq!(Cyclotomic::root_of_unity(&q("1/2")), Cyclotomic::rational(q("-1")));
        assert_eq!(Cyclotomic::root_of_unity(&q("-1/4")), Cyclotomic::root_of_unity(&q("3/4")));
        let i = Cyclotomic::root_of_unity(&q("1/4"));
        assert_eq!(i.mul(&i), Cyclotomic::rational(q("-1")));
        assert_eq!(i.conj().mul(&i), Cyclotomic::one());
        // Lifting across orders: e(1/2) * e(1/3) = e(5/6).
        let prod = Cyclotomic::root_of_unity(&q("1/2")).mul(&w);
        assert_eq!(prod, Cyclotomic::root_of_unity(&q("5/6")));
    }

    #[test]
    fn inverses_and_float_values() {
        let x = Cyclotomic::one().add(&Cyclotomic::root_of_unity(&q("1/5")).scale(&q("2")));
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul(&inv), Cyclotomic::one());
        let z = x.to_complex() * inv.to_complex();
        assert!((z.re - 1.0).abs() < 1e-12 && z.im.abs() < 1e-12);
        assert!(Cyclotomic::zero().inverse().is_none());
        assert_eq!(Cyclotomic::rational(q("1/2")).to_string(), "1/2");
        assert_eq!(Cyclotomic::root_of_unity(&q("1/3")).to_string(), "e(1/3)");
    }
}
