//! Dense univariate polynomials over ℚ, Sturm sequences and real-root
//! isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{fmt_rational, rat, Rational};

/// Coefficients are stored lowest degree first and kept trimmed, so the zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| rat(v)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·Z^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = &r[k] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k - dd + j] -= &c * dc;
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::constant(rat(1)), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(rat(1)));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Positive rational multiple with coprime integer coefficients. Signs of
    /// values are preserved, which is what Sturm chains need.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for c in &self.coeffs {
            num = num.gcd(&(c.numer() * (&den / c.denom())));
        }
        self.scale(&Rational::new(den, num))
    }

    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + super::field::rational_to_f64(c);
        }
        acc
    }

    /// Sign of the value as `x → +∞` (or `−∞` when `negative`).
    fn sign_at_infinity(&self, negative: bool) -> Ordering {
        match self.degree() {
            None => Ordering::Equal,
            Some(d) => {
                let s = self.leading().cmp(&Rational::zero());
                if negative && d % 2 == 1 {
                    s.reverse()
                } else {
                    s
                }
            }
        }
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lc = self.leading().abs();
        let m = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Rational::zero);
        m + rat(1)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let body = match k {
                0 => String::new(),
                1 => "Z".to_string(),
                _ => format!("Z^{k}"),
            };
            if body.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{}*{body}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

/// Sturm chain of the squarefree part, each member normalized to a positive
/// primitive multiple.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

impl SturmChain {
    /// Builds the chain; `None` for the zero polynomial.
    pub fn new(p: &UniPoly) -> Option<Self> {
        if p.is_zero() {
            return None;
        }
        let p0 = p.squarefree().primitive();
        let mut chain = vec![p0.clone()];
        let p1 = p0.derivative().primitive();
        if !p1.is_zero() {
            chain.push(p1);
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r.neg().primitive());
            }
        }
        Some(SturmChain { chain })
    }

    fn variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(
            self.chain
                .iter()
                .map(|p| p.eval(x).cmp(&Rational::zero())),
        )
    }

    fn variations_at_infinity(&self, negative: bool) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at_infinity(negative)))
    }

    /// Number of distinct real roots.
    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(true) - self.variations_at_infinity(false)
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        if a >= b {
            return 0;
        }
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn squarefree_part(&self) -> &UniPoly {
        &self.chain[0]
    }
}

/// An interval `(lo, hi]` containing exactly one root of a squarefree
/// polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat(2)
    }
}

/// Isolating intervals for all distinct real roots, in increasing order.
pub fn isolate_real_roots(p: &UniPoly) -> Vec<RootInterval> {
    let Some(chain) = SturmChain::new(p) else {
        return Vec::new();
    };
    let bound = chain.squarefree_part().root_bound();
    let mut out = Vec::new();
    let mut stack = vec![RootInterval {
        lo: -bound.clone(),
        hi: bound,
    }];
    while let Some(iv) = stack.pop() {
        match chain.count_in(&iv.lo, &iv.hi) {
            0 => {}
            1 => out.push(iv),
            _ => {
                let mid = iv.midpoint();
                stack.push(RootInterval {
                    lo: iv.lo.clone(),
                    hi: mid.clone(),
                });
                stack.push(RootInterval { lo: mid, hi: iv.hi });
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Shrinks an isolating interval of a root of squarefree `p` by bisection
/// until its width is at most `width`.
pub fn refine_root(p: &UniPoly, iv: &RootInterval, width: &Rational) -> RootInterval {
    let mut iv = iv.clone();
    let zero = Rational::zero();
    if p.eval(&iv.hi).is_zero() {
        return RootInterval {
            lo: iv.hi.clone(),
            hi: iv.hi,
        };
    }
    let s_hi = p.eval(&iv.hi).cmp(&zero);
    while &iv.width() > width {
        let mid = iv.midpoint();
        let v = p.eval(&mid);
        if v.is_zero() {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
            };
        }
        if v.cmp(&zero) == s_hi {
            iv.hi = mid;
        } else {
            iv.lo = mid;
        }
    }
    iv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::ratio;

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::from_ints(&[-1, 0, 1]); // Z^2 - 1
        let b = UniPoly::from_ints(&[1, 1]); // Z + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, UniPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b.scale(&rat(3))), b);
        let (g, s, t) = a.ext_gcd(&UniPoly::from_ints(&[2, 1]));
        assert_eq!(g, UniPoly::from_ints(&[1]));
        assert_eq!(
            s.mul(&a).add(&t.mul(&UniPoly::from_ints(&[2, 1]))),
            UniPoly::from_ints(&[1])
        );
    }

    #[test]
    fn sturm_counts() {
        let cube = UniPoly::from_ints(&[-2, 0, 0, 1]);
        assert_eq!(SturmChain::new(&cube).unwrap().count_all(), 1);
        let quartic = UniPoly::from_ints(&[-8, 23, -1, 28, 50]);
        assert_eq!(SturmChain::new(&quartic).unwrap().count_all(), 2);
        let quad = UniPoly::from_ints(&[5, -21, 4]);
        assert_eq!(SturmChain::new(&quad).unwrap().count_all(), 2);
        // Repeated roots are counted once.
        let sq = UniPoly::from_ints(&[1, -2, 1]).mul(&UniPoly::from_ints(&[0, 1]));
        assert_eq!(SturmChain::new(&sq).unwrap().count_all(), 2);
        assert!(SturmChain::new(&UniPoly::zero()).is_none());
    }

    #[test]
    fn sturm_interval_is_half_open() {
        let p = UniPoly::from_ints(&[0, -1, 0, 1]); // roots -1, 0, 1
        let c = SturmChain::new(&p).unwrap();
        assert_eq!(c.count_in(&rat(-1), &rat(1)), 2);
        assert_eq!(c.count_in(&ratio(-3, 2), &rat(1)), 3);
        assert_eq!(c.count_in(&rat(2), &rat(5)), 0);
    }

    #[test]
    fn isolation_and_refinement() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 2);
        let r = refine_root(&p, &roots[1], &ratio(1, 1_000_000));
        let approx = crate::arith::field::rational_to_f64(&r.midpoint());
        assert!((approx - 2f64.sqrt()).abs() < 1e-6);
        assert!(roots[0].hi <= roots[1].lo);
    }

    #[test]
    fn display() {
        assert_eq!(UniPoly::from_ints(&[-2, 0, 0, 1]).to_string(), "Z^3 - 2");
        assert_eq!(UniPoly::from_ints(&[-8, 23, -1, 28, 50]).to_string(), "50*Z^4 + 28*Z^3 - Z^2 + 23*Z - 8");
    }
}
