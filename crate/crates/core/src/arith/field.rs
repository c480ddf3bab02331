use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational; `BigRational` keeps numerator and denominator
/// coprime with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A coefficient field given as a ring object: elements are plain values and
/// every operation goes through the field.
///
/// Every supported field is a finite extension of the rationals, so elements
/// expose their power-basis coordinates over ℚ.
pub trait Field: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + fmt::Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_rational(&self, q: &Rational) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero (or a zero divisor when the
    /// defining polynomial was not actually irreducible).
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Degree over ℚ.
    fn degree(&self) -> usize;
    /// Coordinates in the power basis `1, α, …, α^{d-1}`.
    fn coords(&self, a: &Self::Elem) -> Vec<Rational>;
    fn from_coords(&self, c: &[Rational]) -> Self::Elem;

    /// Sign in the designated real embedding, if the field has one.
    fn sign(&self, a: &Self::Elem) -> Option<Ordering>;
    /// Floating-point value in the designated real embedding.
    fn to_f64(&self, a: &Self::Elem) -> Option<f64>;

    /// Human-readable form; algebraic elements are written in the generator.
    fn fmt_elem(&self, a: &Self::Elem) -> String;
    /// Whether `fmt_elem` output needs parentheses when used as a factor.
    fn is_compound(&self, a: &Self::Elem) -> bool {
        self.coords(a).iter().skip(1).any(|c| !c.is_zero())
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&rat(n))
    }
    fn scale(&self, a: &Self::Elem, q: &Rational) -> Self::Elem {
        self.mul(a, &self.from_rational(q))
    }
    /// Returns the element as a rational if it lies in ℚ.
    fn as_rational(&self, a: &Self::Elem) -> Option<Rational> {
        let c = self.coords(a);
        if c.iter().skip(1).all(Zero::is_zero) {
            Some(c[0].clone())
        } else {
            None
        }
    }
    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_rational(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn degree(&self) -> usize {
        1
    }
    fn coords(&self, a: &Rational) -> Vec<Rational> {
        vec![a.clone()]
    }
    fn from_coords(&self, c: &[Rational]) -> Rational {
        c.first().cloned().unwrap_or_else(Rational::zero)
    }
    fn sign(&self, a: &Rational) -> Option<Ordering> {
        Some(a.cmp(&Rational::zero()))
    }
    fn to_f64(&self, a: &Rational) -> Option<f64> {
        Some(rational_to_f64(a))
    }
    fn fmt_elem(&self, a: &Rational) -> String {
        fmt_rational(a)
    }
    fn is_compound(&self, _a: &Rational) -> bool {
        false
    }
    fn as_rational(&self, a: &Rational) -> Option<Rational> {
        Some(a.clone())
    }
}

/// `p/q` literal, or `p` when the denominator is one.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` with optional sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Nearest `f64` to a rational, robust to huge numerators and denominators.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both sides down by a common power of two before dividing.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = (nb.max(db) - 900).max(0) as usize;
    let n = (q.numer().abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let v = if d == 0.0 { f64::INFINITY } else { n / d };
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals_round_trip() {
        for s in ["0", "-3", "81/10", "-14/25"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(fmt_rational(&q), s);
        }
        assert_eq!(parse_rational("6/4"), Some(ratio(3, 2)));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn huge_rationals_convert_to_float() {
        let big = BigInt::from(10).pow(400u32);
        let q = Rational::new(big.clone() * 3, big);
        assert!((rational_to_f64(&q) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(Rationals.pow(&ratio(-1, 2), 5), ratio(-1, 32));
        assert_eq!(Rationals.pow(&rat(7), 0), rat(1));
    }
}
