//! Sparse multivariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::field::{Field, Rational, Rationals};
use crate::error::{Error, Result};

/// Exponent vector, ordered graded-lexicographically: higher total degree is
/// larger, ties broken lexicographically with the first variable largest.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn fmt_with(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in named variables with coefficients in `F`; no zero
/// coefficient is ever stored.
#[derive(Clone)]
pub struct MultiPoly<F: Field> {
    field: F,
    vars: Vec<String>,
    terms: BTreeMap<Monomial, F::Elem>,
}

pub type RatPoly = MultiPoly<Rationals>;

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: &F, vars: &[String]) -> Self {
        MultiPoly {
            field: field.clone(),
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, vars: &[String], c: F::Elem) -> Self {
        Self::term(field, vars, Monomial::one(vars.len()), c)
    }

    pub fn one(field: &F, vars: &[String]) -> Self {
        Self::constant(field, vars, field.one())
    }

    pub fn term(field: &F, vars: &[String], m: Monomial, c: F::Elem) -> Self {
        assert_eq!(m.nvars(), vars.len(), "exponent vector length");
        let mut p = Self::zero(field, vars);
        if !field.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    /// The `i`-th variable as a polynomial.
    pub fn var(field: &F, vars: &[String], i: usize) -> Self {
        Self::term(field, vars, Monomial::var(vars.len(), i, 1), field.one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, F::Elem)>>(
        field: &F,
        vars: &[String],
        it: I,
    ) -> Self {
        let mut p = Self::zero(field, vars);
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c·m` in place.
    pub fn add_term(&mut self, m: Monomial, c: &F::Elem) {
        if self.field.is_zero(c) {
            return;
        }
        assert_eq!(m.nvars(), self.vars.len(), "exponent vector length");
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = self.field.add(v, c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Leading monomial and coefficient under the graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn check_compatible(&self, o: &Self) {
        assert_eq!(self.vars, o.vars, "polynomials over different variable lists");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_compatible(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_compatible(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), &self.field.neg(c));
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| self.field.neg(c))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, &self.vars);
        }
        self.map_coeffs(|x| self.field.mul(x, c))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&self.field.from_rational(q))
    }

    fn map_coeffs(&self, f: impl Fn(&F::Elem) -> F::Elem) -> Self {
        Self::from_terms(
            &self.field,
            &self.vars,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        Self::from_terms(
            &self.field,
            &self.vars,
            self.terms
                .iter()
                .map(|(k, v)| (k.mul(m), self.field.mul(v, c))),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_compatible(o);
        let mut acc: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let p = self.field.mul(c1, c2);
                match acc.get_mut(&m) {
                    Some(v) => *v = self.field.add(v, &p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        acc.retain(|_, v| !self.field.is_zero(v));
        MultiPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: acc,
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field, &self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check_compatible(d);
        let (lm, lc) = d.leading()?;
        let lc_inv = self.field.inv(lc)?;
        let mut rem = self.clone();
        let mut q = Self::zero(&self.field, &self.vars);
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(lm)?;
            let qc = self.field.mul(c, &lc_inv);
            rem = rem.sub(&d.mul_term(&qm, &qc));
            q.add_term(qm, &qc);
        }
        Some(q)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = self.field.inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Evaluates at a point with coordinates in `F`.
    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        self.eval_in(&self.field.clone(), point, |c| c.clone())
    }

    /// Evaluates in another field `K`, mapping coefficients with `embed`.
    pub fn eval_in<K: Field>(
        &self,
        k: &K,
        point: &[K::Elem],
        embed: impl Fn(&F::Elem) -> K::Elem,
    ) -> Result<K::Elem> {
        if point.len() != self.nvars() {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars()
            )));
        }
        // Power tables per variable.
        let mut powers: Vec<Vec<K::Elem>> = Vec::with_capacity(self.nvars());
        for (i, x) in point.iter().enumerate() {
            let maxe = self.degree_in(i) as usize;
            let mut row = vec![k.one()];
            for e in 1..=maxe {
                let next = k.mul(&row[e - 1], x);
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = k.zero();
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = k.mul(&t, &powers[i][e as usize]);
                }
            }
            acc = k.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitutes polynomials (over the same field, in a common variable
    /// list) for each variable.
    pub fn compose(&self, images: &[MultiPoly<F>]) -> Self {
        assert_eq!(images.len(), self.nvars());
        let target_vars = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_default();
        let mut acc = Self::zero(&self.field, &target_vars);
        let mut cache: Vec<Vec<MultiPoly<F>>> = images
            .iter()
            .map(|p| vec![Self::one(&self.field, &target_vars), p.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut t = Self::constant(&self.field, &target_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while cache[i].len() <= e {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&cache[i][e]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Re-expresses the polynomial over a variable list that contains all of
    /// its current variables.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::InvalidInput(format!("variable {v} missing from target list")))
            })
            .collect::<Result<_>>()?;
        let mut p = Self::zero(&self.field, vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] = x;
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Drops variables that do not occur; keeps order of the rest.
    pub fn drop_unused_vars(&self, keep: &[String]) -> Self {
        let used: Vec<usize> = (0..self.nvars())
            .filter(|&i| self.degree_in(i) > 0 || keep.contains(&self.vars[i]))
            .collect();
        let vars: Vec<String> = used.iter().map(|&i| self.vars[i].clone()).collect();
        let mut p = Self::zero(&self.field, &vars);
        for (m, c) in &self.terms {
            p.add_term(Monomial(used.iter().map(|&i| m.0[i]).collect()), c);
        }
        p
    }

    /// Maps every coefficient into another field.
    pub fn map_field<K: Field>(&self, k: &K, f: impl Fn(&F::Elem) -> K::Elem) -> MultiPoly<K> {
        MultiPoly::from_terms(k, &self.vars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn derivative(&self, var: usize) -> Self {
        Self::from_terms(
            &self.field,
            &self.vars,
            self.terms.iter().filter(|(m, _)| m.0[var] > 0).map(|(m, c)| {
                let mut e = m.clone();
                let k = e.0[var];
                e.0[var] -= 1;
                (e, self.field.mul(c, &self.field.from_int(k as i64)))
            }),
        )
    }

    /// Coefficients with respect to `var`: `self = Σ_k coeffs[k]·var^k`, the
    /// coefficients still written over the full variable list.
    pub fn coeffs_in(&self, var: usize) -> Vec<Self> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(&self.field, &self.vars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.clone();
            e.0[var] = 0;
            out[k].add_term(e, c);
        }
        out
    }

    /// Inverse of [`MultiPoly::coeffs_in`].
    pub fn from_coeffs_in(field: &F, vars: &[String], var: usize, coeffs: &[Self]) -> Self {
        let mut p = Self::zero(field, vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut e = m.clone();
                e.0[var] += k as u32;
                p.add_term(e, v);
            }
        }
        p
    }
}

impl MultiPoly<Rationals> {
    pub fn from_int_terms(vars: &[&str], terms: &[(i64, &[u32])]) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        Self::from_terms(
            &Rationals,
            &vars,
            terms
                .iter()
                .map(|(c, e)| (Monomial(e.to_vec()), super::field::rat(*c))),
        )
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let cs = self.field.fmt_elem(c);
            let compound = self.field.is_compound(c);
            let (neg, mag) = if !compound && cs.starts_with('-') {
                (true, cs[1..].to_string())
            } else {
                (false, cs)
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mon = m.fmt_with(&self.vars);
            let coeff = if compound { format!("({mag})") } else { mag };
            if m.degree() == 0 {
                write!(f, "{coeff}")?;
            } else if coeff == "1" {
                write!(f, "{mon}")?;
            } else {
                write!(f, "{coeff}*{mon}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{rat, ratio};

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![1, 1]);
        let c = Monomial(vec![0, 2]);
        let d = Monomial(vec![3, 0]);
        assert!(a > b && b > c && d > a);
    }

    #[test]
    fn arithmetic_and_exact_division() {
        let v = xy();
        let x = RatPoly::var(&Rationals, &v, 0);
        let y = RatPoly::var(&Rationals, &v, 1);
        let a = x.square().sub(&y.square());
        let b = x.sub(&y);
        assert_eq!(a.div_exact(&b).unwrap(), x.add(&y));
        assert!(a.div_exact(&x).is_none());
        assert_eq!(x.add(&y).pow(3).num_terms(), 4);
        assert_eq!(format!("{}", a.scale_rational(&ratio(-1, 2))), "-1/2*x^2 + 1/2*y^2");
    }

    #[test]
    fn evaluation() {
        let v = xy();
        let x = RatPoly::var(&Rationals, &v, 0);
        let y = RatPoly::var(&Rationals, &v, 1);
        let p = x.square().mul(&y).add(&RatPoly::constant(&Rationals, &v, rat(3)));
        assert_eq!(p.eval(&[rat(2), ratio(1, 2)]).unwrap(), rat(5));
        assert!(p.eval(&[rat(1)]).is_err());
    }

    #[test]
    fn coefficient_split_round_trip() {
        let v = xy();
        let x = RatPoly::var(&Rationals, &v, 0);
        let y = RatPoly::var(&Rationals, &v, 1);
        let p = x.add(&y).pow(3);
        let cs = p.coeffs_in(1);
        assert_eq!(cs.len(), 4);
        assert_eq!(RatPoly::from_coeffs_in(&Rationals, &v, 1, &cs), p);
    }
}
