//! Simple algebraic extensions ℚ(α) = ℚ[Z]/(m(Z)).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::field::{fmt_rational, rat, rational_to_f64, Field, Rational};
use super::univariate::{isolate_real_roots, refine_root, RootInterval, SturmChain, UniPoly};
use crate::error::{Error, Result};

/// A number field given by a defining polynomial, which may be non-monic.
///
/// Irreducibility of the defining polynomial is trusted. A real embedding
/// is designated by an isolating interval of one real root; sign decisions
/// and float conversions use that root.
#[derive(Clone)]
pub struct NumberField {
    inner: Arc<Inner>,
}

struct Inner {
    name: String,
    minpoly: UniPoly,
    /// Tail of the monic associate: `α^d = -Σ_{k<d} monic_tail[k] α^k`.
    monic_tail: Vec<Rational>,
    degree: usize,
    /// `Tr(α^k)` for `0 ≤ k < 2d - 1`.
    power_sums: Vec<Rational>,
    real_root: Option<RootInterval>,
    real_root_f64: Option<f64>,
    real_root_count: usize,
    root_index: usize,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({}: {})", self.inner.name, self.inner.minpoly)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.name == other.inner.name
                && self.inner.monic_tail == other.inner.monic_tail
                && self.inner.real_root == other.inner.real_root)
    }
}

impl NumberField {
    /// ℚ(α) for `α` the smallest real root of `minpoly` (or with no real
    /// embedding when there is none).
    pub fn new(name: &str, minpoly: UniPoly) -> Result<Self> {
        Self::with_root_index(name, minpoly, 0)
    }

    /// Like [`NumberField::new`], designating the `index`-th real root in
    /// increasing order.
    pub fn with_root_index(name: &str, minpoly: UniPoly, index: usize) -> Result<Self> {
        let degree = minpoly
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidInput("defining polynomial must have degree >= 1".into()))?;
        let lc = minpoly.leading();
        let monic_tail: Vec<Rational> = (0..degree).map(|k| minpoly.coeff(k) / &lc).collect();
        let power_sums = newton_power_sums(&monic_tail, 2 * degree - 1);
        let roots = isolate_real_roots(&minpoly);
        let real_root_count = roots.len();
        let real_root = if roots.is_empty() {
            None
        } else {
            let iv = roots.get(index).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "root index {index} out of range: {real_root_count} real roots"
                ))
            })?;
            let sf = minpoly.squarefree();
            Some(refine_root(&sf, iv, &Rational::new(1.into(), num_bigint::BigInt::one() << 80)))
        };
        let real_root_f64 = real_root.as_ref().map(|iv| rational_to_f64(&iv.midpoint()));
        Ok(NumberField {
            inner: Arc::new(Inner {
                name: name.to_string(),
                minpoly,
                monic_tail,
                degree,
                power_sums,
                real_root,
                real_root_f64,
                real_root_count,
                root_index: index,
            }),
        })
    }

    /// The rationals as a degree-one field `ℚ[Z]/(Z)`.
    pub fn rational(name: &str) -> Self {
        Self::new(name, UniPoly::from_ints(&[0, 1])).expect("degree one")
    }

    /// ℚ(i) with `i² = -1`.
    pub fn gaussian(name: &str) -> Self {
        Self::new(name, UniPoly::from_ints(&[1, 0, 1])).expect("degree two")
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn minpoly(&self) -> &UniPoly {
        &self.inner.minpoly
    }

    pub fn real_root_count(&self) -> usize {
        self.inner.real_root_count
    }

    /// Position of the designated real root among the real roots, in
    /// increasing order.
    pub fn root_index(&self) -> usize {
        self.inner.root_index
    }

    pub fn real_root_interval(&self) -> Option<&RootInterval> {
        self.inner.real_root.as_ref()
    }

    /// The generator α.
    pub fn generator(&self) -> AlgebraicNumber {
        let mut c = vec![Rational::zero(); self.inner.degree];
        if self.inner.degree == 1 {
            c[0] = -self.inner.monic_tail[0].clone();
        } else {
            c[1] = Rational::one();
        }
        self.elem(c)
    }

    pub fn elem(&self, coords: Vec<Rational>) -> AlgebraicNumber {
        debug_assert_eq!(coords.len(), self.inner.degree);
        AlgebraicNumber {
            field: self.clone(),
            coords,
        }
    }

    /// Reduces an arbitrary polynomial in α.
    pub fn reduce(&self, p: &UniPoly) -> AlgebraicNumber {
        self.elem(self.reduce_coeffs(p.coeffs().to_vec()))
    }

    fn reduce_coeffs(&self, mut c: Vec<Rational>) -> Vec<Rational> {
        let d = self.inner.degree;
        for k in (d..c.len()).rev() {
            let top = std::mem::take(&mut c[k]);
            if top.is_zero() {
                continue;
            }
            for (j, t) in self.inner.monic_tail.iter().enumerate() {
                c[k - d + j] -= &top * t;
            }
        }
        c.resize(d, Rational::zero());
        c
    }

    /// `Tr_{ℚ(α)/ℚ}(a)`, linear in the coordinates.
    pub fn trace(&self, a: &AlgebraicNumber) -> Rational {
        a.coords
            .iter()
            .zip(&self.inner.power_sums)
            .map(|(c, p)| c * p)
            .sum()
    }

    /// Element as a polynomial in α.
    pub fn to_unipoly(&self, a: &AlgebraicNumber) -> UniPoly {
        UniPoly::new(a.coords.clone())
    }

    fn sign_of(&self, a: &AlgebraicNumber) -> Option<Ordering> {
        let nonzero = a.coords.iter().position(|c| !c.is_zero());
        let Some(first) = nonzero else {
            return Some(Ordering::Equal);
        };
        if a.coords.iter().skip(first + 1).all(Zero::is_zero) && first == 0 {
            return Some(a.coords[0].cmp(&Rational::zero()));
        }
        let mut iv = self.inner.real_root.clone()?;
        let p = UniPoly::new(a.coords.clone());
        let sf = self.inner.minpoly.squarefree();
        // A nonzero element does not vanish at the root, so refinement ends.
        for _ in 0..4096 {
            let (lo, hi) = interval_eval(&p, &iv.lo, &iv.hi);
            if lo.is_positive() {
                return Some(Ordering::Greater);
            }
            if hi.is_negative() {
                return Some(Ordering::Less);
            }
            if iv.lo == iv.hi {
                return Some(p.eval(&iv.lo).cmp(&Rational::zero()));
            }
            let w = iv.width() / rat(1 << 20);
            iv = refine_root(&sf, &iv, &w);
        }
        None
    }
}

/// Power sums `p_k = Σ root^k` of the monic polynomial with the given tail,
/// by Newton's identities.
fn newton_power_sums(tail: &[Rational], count: usize) -> Vec<Rational> {
    let d = tail.len();
    // Coefficient of Z^{d-j} in the monic polynomial, j = 0..=d.
    let e = |j: usize| -> Rational {
        if j == 0 {
            Rational::one()
        } else if j <= d {
            tail[d - j].clone()
        } else {
            Rational::zero()
        }
    };
    let mut p = vec![rat(d as i64)];
    for k in 1..count {
        let mut s = if k <= d { rat(k as i64) * e(k) } else { Rational::zero() };
        for i in 1..k {
            s += e(i) * &p[k - i];
        }
        p.push(-s);
    }
    p
}

/// Range of `p` over `[lo, hi]` by interval Horner evaluation.
fn interval_eval(p: &UniPoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mut a = Rational::zero();
    let mut b = Rational::zero();
    for c in p.coeffs().iter().rev() {
        let cands = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mn = cands.iter().min().unwrap().clone();
        let mx = cands.iter().max().unwrap().clone();
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

/// An element of a [`NumberField`], stored by power-basis coordinates.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: NumberField,
    coords: Vec<Rational>,
}

impl AlgebraicNumber {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(Zero::is_zero)
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.field == other.field
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_elem(self))
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_elem(self))
    }
}

impl Field for NumberField {
    type Elem = AlgebraicNumber;

    fn zero(&self) -> AlgebraicNumber {
        self.elem(vec![Rational::zero(); self.inner.degree])
    }
    fn one(&self) -> AlgebraicNumber {
        self.from_rational(&Rational::one())
    }
    fn from_rational(&self, q: &Rational) -> AlgebraicNumber {
        let mut c = vec![Rational::zero(); self.inner.degree];
        c[0] = q.clone();
        self.elem(c)
    }
    fn is_zero(&self, a: &AlgebraicNumber) -> bool {
        a.coords.iter().all(Zero::is_zero)
    }
    fn add(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
        self.elem(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }
    fn sub(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
        self.elem(a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect())
    }
    fn neg(&self, a: &AlgebraicNumber) -> AlgebraicNumber {
        self.elem(a.coords.iter().map(|x| -x).collect())
    }
    fn mul(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
        let d = self.inner.degree;
        if d == 1 {
            return self.elem(vec![&a.coords[0] * &b.coords[0]]);
        }
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.elem(self.reduce_coeffs(prod))
    }
    fn inv(&self, a: &AlgebraicNumber) -> Option<AlgebraicNumber> {
        if self.is_zero(a) {
            return None;
        }
        if self.inner.degree == 1 || a.is_rational() {
            let mut c = vec![Rational::zero(); self.inner.degree];
            c[0] = a.coords[0].recip();
            return Some(self.elem(c));
        }
        let (g, s, _) = UniPoly::new(a.coords.clone()).ext_gcd(&self.inner.minpoly);
        if g.degree() != Some(0) {
            return None;
        }
        Some(self.reduce(&s))
    }
    fn degree(&self) -> usize {
        self.inner.degree
    }
    fn coords(&self, a: &AlgebraicNumber) -> Vec<Rational> {
        a.coords.clone()
    }
    fn from_coords(&self, c: &[Rational]) -> AlgebraicNumber {
        let mut v = c.to_vec();
        v.resize(self.inner.degree, Rational::zero());
        self.elem(v)
    }
    fn sign(&self, a: &AlgebraicNumber) -> Option<Ordering> {
        self.sign_of(a)
    }
    fn to_f64(&self, a: &AlgebraicNumber) -> Option<f64> {
        if a.is_rational() {
            return Some(rational_to_f64(&a.coords[0]));
        }
        let r = self.inner.real_root_f64?;
        let mut acc = 0.0;
        for c in a.coords.iter().rev() {
            acc = acc * r + rational_to_f64(c);
        }
        Some(acc)
    }
    fn fmt_elem(&self, a: &AlgebraicNumber) -> String {
        let name = &self.inner.name;
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (k, c) in a.coords.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let m = c.abs();
            let pw = match k {
                0 => String::new(),
                1 => name.clone(),
                _ => format!("{name}^{k}"),
            };
            let body = if pw.is_empty() {
                fmt_rational(&m)
            } else if m.is_one() {
                pw
            } else {
                format!("{}*{pw}", fmt_rational(&m))
            };
            parts.push((neg, body));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (neg, body)) in parts.into_iter().enumerate() {
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            s.push_str(&body);
        }
        s
    }
}

/// Distinct real roots of a nonzero univariate polynomial, optionally
/// restricted to the half-open interval `(lo, hi]`.
pub fn real_root_count(m: &UniPoly, interval: Option<(&Rational, &Rational)>) -> Result<usize> {
    let chain = SturmChain::new(m).ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    Ok(match interval {
        None => chain.count_all(),
        Some((a, b)) => chain.count_in(a, b),
    })
}
