//! Rounding, exact PSD checks, and sum-of-squares certificates.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::parse::{embed_rational, parse_poly_over, parse_unipoly};
use crate::arith::{f64_to_rational, Field, Monomial, MultiPoly, NumberField, RatPoly, Rational};
use crate::gram::{quadratic_form, MonomialBasis};
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Best rational approximation of each entry with denominator at most
/// `max_denom`, by continued fractions with semiconvergents.
pub fn round_params(t: &[f64], max_denom: u64) -> Result<Vec<Rational>> {
    if max_denom == 0 {
        return Err(Error::InvalidInput("denominator bound must be at least 1".into()));
    }
    t.iter()
        .map(|&x| {
            let q = f64_to_rational(x).ok_or_else(|| Error::Numerical(format!("cannot round {x}")))?;
            Ok(best_approximation(&q, &BigInt::from(max_denom)))
        })
        .collect()
}

/// Closest fraction to `x` with denominator at most `n`.
pub fn best_approximation(x: &Rational, n: &BigInt) -> Rational {
    if x.denom() <= n {
        return x.clone();
    }
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    loop {
        let a = num.div_floor(&den);
        let q2 = &q0 + &a * &q1;
        if &q2 > n {
            let k = (n - &q0) / &q1;
            let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
            let conv = Rational::new(p1, q1);
            return if (&semi - x).abs() < (&conv - x).abs() { semi } else { conv };
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let r = &num - &a * &den;
        if r.is_zero() {
            return Rational::new(p1, q1);
        }
        num = den;
        den = r;
    }
}

/// Exact factorization `M = Uᵀ D U` with `U` unit upper triangular, pivots
/// taken in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct Ldl<E> {
    pub u: Matrix<E>,
    pub d: Vec<E>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LdlOutcome<E> {
    Psd(Ldl<E>),
    /// `witnessᵀ M witness = value < 0`.
    NotPsd { witness: Vec<E>, value: E },
}

impl<E> LdlOutcome<E> {
    pub fn is_psd(&self) -> bool {
        matches!(self, LdlOutcome::Psd(_))
    }
}

fn sign_of<F: Field>(field: &F, a: &F::Elem) -> Result<Ordering> {
    field.sign(a).ok_or_else(|| Error::InvalidInput("coefficient field has no real embedding".into()))
}

/// Symmetric elimination deciding positive semidefiniteness exactly. A
/// negative pivot, or a zero pivot with a nonzero remaining row, yields a
/// vector `w` with `wᵀMw < 0`.
pub fn ldl_decompose<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Result<LdlOutcome<F::Elem>> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(Error::InvalidInput("matrix is not symmetric".into()));
            }
        }
    }
    let mut s = m.clone();
    let mut u = vec![vec![field.zero(); n]; n];
    let mut d = vec![field.zero(); n];
    for k in 0..n {
        u[k][k] = field.one();
        let pivot = s[k][k].clone();
        match sign_of(field, &pivot)? {
            Ordering::Less => {
                let mut y = vec![field.zero(); n];
                y[k] = field.one();
                return Ok(not_psd(field, m, &u, k, y));
            }
            Ordering::Equal => {
                if let Some(j) = (k + 1..n).find(|&j| !field.is_zero(&s[k][j])) {
                    // y = c eₖ + eⱼ gives yᵀSy = 2c s_kj + s_jj = −1.
                    let num = field.neg(&field.add(&s[j][j], &field.one()));
                    let den = field.add(&s[k][j], &s[k][j]);
                    let mut y = vec![field.zero(); n];
                    y[k] = field.div(&num, &den).expect("nonzero");
                    y[j] = field.one();
                    return Ok(not_psd(field, m, &u, k, y));
                }
            }
            Ordering::Greater => {
                let inv = field.inv(&pivot).expect("nonzero pivot");
                for j in k + 1..n {
                    u[k][j] = field.mul(&s[k][j], &inv);
                }
                for i in k + 1..n {
                    if field.is_zero(&u[k][i]) {
                        continue;
                    }
                    let f = s[k][i].clone();
                    for j in i..n {
                        if field.is_zero(&u[k][j]) {
                            continue;
                        }
                        let v = field.sub(&s[i][j], &field.mul(&f, &u[k][j]));
                        s[i][j] = v.clone();
                        s[j][i] = v;
                    }
                }
                d[k] = pivot;
            }
        }
    }
    Ok(LdlOutcome::Psd(Ldl { u, d }))
}

/// Lifts a vector `y` on the trailing block (indices ≥ k) of the Schur
/// complement back to the original coordinates.
fn not_psd<F: Field>(field: &F, m: &Matrix<F::Elem>, u: &Matrix<F::Elem>, k: usize, mut w: Vec<F::Elem>) -> LdlOutcome<F::Elem> {
    let n = w.len();
    for i in (0..k).rev() {
        let mut acc = field.zero();
        for j in i + 1..n {
            if !field.is_zero(&u[i][j]) && !field.is_zero(&w[j]) {
                acc = field.add(&acc, &field.mul(&u[i][j], &w[j]));
            }
        }
        w[i] = field.neg(&acc);
    }
    let value = bilinear(field, m, &w, &w);
    LdlOutcome::NotPsd { witness: w, value }
}

pub fn bilinear<F: Field>(field: &F, m: &Matrix<F::Elem>, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = field.zero();
    for (row, ai) in m.iter().zip(a) {
        if field.is_zero(ai) {
            continue;
        }
        for (x, bj) in row.iter().zip(b) {
            if !field.is_zero(x) && !field.is_zero(bj) {
                acc = field.add(&acc, &field.mul(ai, &field.mul(x, bj)));
            }
        }
    }
    acc
}

/// `Uᵀ D U`.
pub fn ldl_product<F: Field>(field: &F, l: &Ldl<F::Elem>) -> Matrix<F::Elem> {
    let n = l.d.len();
    let mut out = vec![vec![field.zero(); n]; n];
    for k in 0..n {
        if field.is_zero(&l.d[k]) {
            continue;
        }
        for i in 0..n {
            if field.is_zero(&l.u[k][i]) {
                continue;
            }
            let a = field.mul(&l.d[k], &l.u[k][i]);
            for j in 0..n {
                if !field.is_zero(&l.u[k][j]) {
                    out[i][j] = field.add(&out[i][j], &field.mul(&a, &l.u[k][j]));
                }
            }
        }
    }
    out
}

/// Coefficients of `det(xI − M)` from the constant term up, by Berkowitz's
/// division-free algorithm.
pub fn charpoly<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<F::Elem> {
    let n = m.len();
    // c holds coefficients from the leading one down.
    let mut c = vec![field.one()];
    for k in 0..n {
        let a = &m[k][k];
        let row: Vec<F::Elem> = m[k][..k].to_vec();
        let mut col: Vec<F::Elem> = (0..k).map(|i| m[i][k].clone()).collect();
        let mut t = vec![field.one(), field.neg(a)];
        for _ in 0..k {
            let rc = row.iter().zip(&col).fold(field.zero(), |s, (x, y)| field.add(&s, &field.mul(x, y)));
            t.push(field.neg(&rc));
            col = (0..k)
                .map(|i| (0..k).fold(field.zero(), |s, j| field.add(&s, &field.mul(&m[i][j], &col[j]))))
                .collect();
        }
        let next: Vec<F::Elem> = (0..k + 2)
            .map(|i| {
                (0..=i.min(k)).fold(field.zero(), |s, j| {
                    if i - j < t.len() {
                        field.add(&s, &field.mul(&t[i - j], &c[j]))
                    } else {
                        s
                    }
                })
            })
            .collect();
        c = next;
    }
    c.reverse();
    c
}

/// Independent PSD test: for a symmetric matrix of rank `s`, the
/// characteristic polynomial is `x^{n−s}` times a factor whose coefficients
/// strictly alternate in sign exactly when every nonzero eigenvalue is
/// positive.
pub fn charpoly_sign_check<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Result<bool> {
    let c = charpoly(field, m);
    let n = m.len();
    let low = c.iter().position(|x| !field.is_zero(x)).unwrap_or(n);
    for (k, x) in c.iter().enumerate().skip(low) {
        let want = if (n - k) % 2 == 0 { Ordering::Greater } else { Ordering::Less };
        if sign_of(field, x)? != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f = Σ cᵢ pᵢ²` with the Gram matrix it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    /// ℚ is the degree-one field.
    pub field: NumberField,
    pub basis: MonomialBasis,
    pub coefficients: Vec<crate::arith::AlgebraicNumber>,
    pub polynomials: Vec<MultiPoly<NumberField>>,
    pub gram: Matrix<crate::arith::AlgebraicNumber>,
}

/// Lifts a pencil field into the certificate representation.
pub trait IntoCertField: Field {
    fn cert_field(&self) -> NumberField;
    fn lift(&self, k: &NumberField, a: &Self::Elem) -> crate::arith::AlgebraicNumber;
}

impl IntoCertField for crate::arith::Rationals {
    fn cert_field(&self) -> NumberField {
        NumberField::rational("a")
    }
    fn lift(&self, k: &NumberField, a: &Rational) -> crate::arith::AlgebraicNumber {
        k.from_rational(a)
    }
}

impl IntoCertField for NumberField {
    fn cert_field(&self) -> NumberField {
        self.clone()
    }
    fn lift(&self, _k: &NumberField, a: &crate::arith::AlgebraicNumber) -> crate::arith::AlgebraicNumber {
        a.clone()
    }
}

/// Certificate from a PSD Gram matrix: `cᵢ = Dᵢᵢ > 0`, `pᵢ = (U v)ᵢ`.
pub fn extract_certificate<F: IntoCertField>(field: &F, m: &Matrix<F::Elem>, basis: &MonomialBasis) -> Result<Certificate> {
    if m.len() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), got: m.len() });
    }
    let LdlOutcome::Psd(l) = ldl_decompose(field, m)? else {
        return Err(Error::NotPsd);
    };
    let k = field.cert_field();
    let mut coefficients = Vec::new();
    let mut polynomials = Vec::new();
    for (row, d) in l.u.iter().zip(&l.d) {
        if field.is_zero(d) {
            continue;
        }
        coefficients.push(field.lift(&k, d));
        polynomials.push(MultiPoly::from_terms(
            &k,
            &basis.vars,
            row.iter()
                .zip(&basis.entries)
                .filter(|(x, _)| !field.is_zero(x))
                .map(|(x, e)| (e.clone(), field.lift(&k, x))),
        ));
    }
    let gram = m.iter().map(|r| r.iter().map(|x| field.lift(&k, x)).collect()).collect();
    Ok(Certificate { field: k, basis: basis.clone(), coefficients, polynomials, gram })
}

impl Certificate {
    /// Certificate for `Σ cᵢ qᵢ²`, rescaled so every polynomial has leading
    /// coefficient one. The basis must contain every monomial of the `qᵢ`.
    pub fn from_squares(
        field: NumberField,
        basis: MonomialBasis,
        coefficients: Vec<crate::arith::AlgebraicNumber>,
        polys: Vec<MultiPoly<NumberField>>,
    ) -> Result<Self> {
        if coefficients.len() != polys.len() {
            return Err(Error::DimensionMismatch { expected: polys.len(), got: coefficients.len() });
        }
        let k = &field;
        let m = basis.len();
        let mut gram = vec![vec![k.zero(); m]; m];
        let mut cs = Vec::new();
        let mut ps = Vec::new();
        for (c, p) in coefficients.into_iter().zip(polys) {
            let Some((_, lc)) = p.leading() else { continue };
            let lc = lc.clone();
            let c = k.mul(&c, &k.mul(&lc, &lc));
            let p = p.scale(&k.inv(&lc).expect("nonzero leading coefficient"));
            let mut u = vec![k.zero(); m];
            for (mono, x) in p.terms() {
                let idx = basis
                    .entries
                    .iter()
                    .position(|e| e == mono)
                    .ok_or_else(|| Error::InvalidInput(format!("monomial {} not in basis", mono.fmt_with(&basis.vars))))?;
                u[idx] = x.clone();
            }
            for i in 0..m {
                if k.is_zero(&u[i]) {
                    continue;
                }
                let a = k.mul(&c, &u[i]);
                for j in 0..m {
                    if !k.is_zero(&u[j]) {
                        gram[i][j] = k.add(&gram[i][j], &k.mul(&a, &u[j]));
                    }
                }
            }
            cs.push(c);
            ps.push(p);
        }
        Ok(Certificate { field, basis, coefficients: cs, polynomials: ps, gram })
    }

    pub fn is_rational(&self) -> bool {
        self.field.degree() == 1
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `Σ cᵢ pᵢ²`.
    pub fn expand(&self) -> MultiPoly<NumberField> {
        let mut acc = MultiPoly::zero(&self.field, &self.basis.vars);
        for (c, p) in self.coefficients.iter().zip(&self.polynomials) {
            acc = acc.add(&p.square().scale(c));
        }
        acc
    }

    /// Text form: header fields, then one item per line in each section.
    pub fn to_text(&self) -> String {
        let k = &self.field;
        let mut s = String::new();
        let _ = writeln!(s, "vars: {}", self.basis.vars.join(", "));
        if !self.is_rational() {
            let _ = writeln!(s, "minpoly: {}", k.minpoly());
            let _ = writeln!(s, "root: {}", k.root_index());
        }
        let _ = writeln!(s, "basis: {}", self.basis.names().join(", "));
        let _ = writeln!(s, "coefficients:");
        for c in &self.coefficients {
            let _ = writeln!(s, "  {}", k.fmt_elem(c));
        }
        let _ = writeln!(s, "polynomials:");
        for p in &self.polynomials {
            let _ = writeln!(s, "  {p}");
        }
        let _ = writeln!(s, "gram:");
        for row in &self.gram {
            let cells: Vec<String> = row.iter().map(|x| k.fmt_elem(x)).collect();
            let _ = writeln!(s, "  {}", cells.join(", "));
        }
        s
    }

    /// Parses [`Certificate::to_text`] output. The generator is named `a`
    /// and the defining polynomial is written in `Z`.
    pub fn parse(text: &str) -> Result<Self> {
        const MAX_BASIS: usize = 4096;
        let mut vars: Option<Vec<String>> = None;
        let mut minpoly: Option<String> = None;
        let mut root = 0usize;
        let mut basis_src: Option<String> = None;
        let mut section: Option<&str> = None;
        let mut coeff_lines = Vec::new();
        let mut poly_lines = Vec::new();
        let mut gram_lines = Vec::new();
        for line in text.lines() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let header = |key: &str| t.strip_prefix(key).map(str::trim);
            if let Some(v) = header("vars:") {
                vars = Some(v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
                section = None;
            } else if let Some(v) = header("minpoly:") {
                minpoly = Some(v.to_string());
                section = None;
            } else if let Some(v) = header("root:") {
                root = v.parse().map_err(|_| Error::Parse(format!("bad root index {v:?}")))?;
                section = None;
            } else if let Some(v) = header("basis:") {
                basis_src = Some(v.to_string());
                section = None;
            } else if t == "coefficients:" {
                section = Some("c");
            } else if t == "polynomials:" {
                section = Some("p");
            } else if t == "gram:" {
                section = Some("g");
            } else {
                match section {
                    Some("c") => coeff_lines.push(t.to_string()),
                    Some("p") => poly_lines.push(t.to_string()),
                    Some("g") => gram_lines.push(t.to_string()),
                    _ => return Err(Error::Parse(format!("unexpected line: {t}"))),
                }
            }
        }
        let vars = vars.ok_or_else(|| Error::Parse("missing vars".into()))?;
        if vars.iter().any(|v| v == "a") {
            return Err(Error::Parse("variable name `a` is reserved for the generator".into()));
        }
        let field = match minpoly {
            Some(m) => {
                let mp = parse_unipoly(&m, "Z")?;
                if mp.degree().unwrap_or(0) > 64 {
                    return Err(Error::Parse("defining polynomial degree above 64".into()));
                }
                NumberField::with_root_index("a", mp, root)?
            }
            None => NumberField::rational("a"),
        };
        let basis_src = basis_src.ok_or_else(|| Error::Parse("missing basis".into()))?;
        let entries: Vec<Monomial> = basis_src
            .split(',')
            .map(|s| {
                let p = parse_poly_over(s.trim(), &field, &vars)?;
                match (p.num_terms(), p.leading()) {
                    (1, Some((m, c))) if field.is_one(c) => Ok(m.clone()),
                    _ => Err(Error::Parse(format!("basis entry {s:?} is not a monomial"))),
                }
            })
            .collect::<Result<_>>()?;
        if entries.len() > MAX_BASIS {
            return Err(Error::Parse("basis too large".into()));
        }
        let basis = MonomialBasis::custom(&vars, entries)?;
        let scalar = |s: &str| -> Result<crate::arith::AlgebraicNumber> {
            let p = parse_poly_over(s, &field, &[])?;
            Ok(p.coeff(&Monomial(vec![])))
        };
        let coefficients = coeff_lines.iter().map(|s| scalar(s)).collect::<Result<Vec<_>>>()?;
        let polynomials = poly_lines.iter().map(|s| parse_poly_over(s, &field, &vars)).collect::<Result<Vec<_>>>()?;
        if coefficients.len() != polynomials.len() {
            return Err(Error::Parse(format!(
                "{} coefficients but {} polynomials",
                coefficients.len(),
                polynomials.len()
            )));
        }
        let m = basis.len();
        if gram_lines.len() != m {
            return Err(Error::Parse(format!("gram has {} rows, basis has {m} entries", gram_lines.len())));
        }
        let gram = gram_lines
            .iter()
            .map(|row| {
                let cells = row.split(',').map(|c| scalar(c.trim())).collect::<Result<Vec<_>>>()?;
                if cells.len() != m {
                    return Err(Error::Parse(format!("gram row has {} entries, expected {m}", cells.len())));
                }
                Ok(cells)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Certificate { field, basis, coefficients, polynomials, gram })
    }
}

/// Exact check of `f = Σ cᵢ pᵢ²` with every `cᵢ > 0`, and of `f = vᵀ G v`
/// for a positive semidefinite Gram matrix `G`.
pub fn verify_certificate(cert: &Certificate, f: &RatPoly) -> Result<bool> {
    let k = &cert.field;
    let f = match f.with_vars(&cert.basis.vars) {
        Ok(f) => embed_rational(&f, k),
        Err(_) => return Ok(false),
    };
    for c in &cert.coefficients {
        if sign_of(k, c)? != Ordering::Greater {
            return Ok(false);
        }
    }
    if cert.expand() != f {
        return Ok(false);
    }
    if cert.gram.len() != cert.basis.len() || quadratic_form(k, &cert.basis, &cert.gram) != f {
        return Ok(false);
    }
    let symmetric = (0..cert.gram.len()).all(|i| (0..i).all(|j| cert.gram[i][j] == cert.gram[j][i]));
    Ok(symmetric && ldl_decompose(k, &cert.gram)?.is_psd())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio, Rationals};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn rounding() {
        assert_eq!(round_params(&[0.4999999991], 100).unwrap(), vec![ratio(1, 2)]);
        assert_eq!(round_params(&[0.3333333], 10).unwrap(), vec![ratio(1, 3)]);
        assert_eq!(round_params(&[-7.0, 3.0], 1).unwrap(), vec![rat(-7), rat(3)]);
        assert_eq!(round_params(&[std::f64::consts::PI], 1000).unwrap(), vec![ratio(355, 113)]);
        assert_eq!(round_params(&[-0.26], 10).unwrap(), vec![ratio(-1, 4)]);
    }

    #[test]
    fn ldl_identity_and_witness() {
        let LdlOutcome::Psd(l) = ldl_decompose(&Rationals, &m(&[&[1, 0], &[0, 1]])).unwrap() else { panic!() };
        assert_eq!(l.u, m(&[&[1, 0], &[0, 1]]));
        assert_eq!(l.d, vec![rat(1), rat(1)]);
        let a = m(&[&[2, 1, 0], &[1, 0, 3], &[0, 3, 1]]);
        match ldl_decompose(&Rationals, &a).unwrap() {
            LdlOutcome::NotPsd { witness, value } => {
                assert!(value < rat(0));
                assert_eq!(bilinear(&Rationals, &a, &witness, &witness), value);
            }
            _ => panic!("indefinite"),
        }
        let z = m(&[&[0, 1], &[1, 5]]);
        assert!(!ldl_decompose(&Rationals, &z).unwrap().is_psd());
        let psd = m(&[&[1, 2, 0], &[2, 4, 0], &[0, 0, 0]]);
        let LdlOutcome::Psd(l) = ldl_decompose(&Rationals, &psd).unwrap() else { panic!() };
        assert_eq!(ldl_product(&Rationals, &l), psd);
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(charpoly(&Rationals, &m(&[&[1, 0], &[0, 1]])), vec![rat(1), rat(-2), rat(1)]);
        assert!(charpoly_sign_check(&Rationals, &m(&[&[1, 0], &[0, 1]])).unwrap());
        assert!(!charpoly_sign_check(&Rationals, &m(&[&[1, 0], &[0, -1]])).unwrap());
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        // det(xI − A) = x³ − 9x² + 24x − 18
        assert_eq!(charpoly(&Rationals, &a), vec![rat(-18), rat(24), rat(-9), rat(1)]);
        assert!(charpoly_sign_check(&Rationals, &m(&[&[1, 1], &[1, 1]])).unwrap());
    }

    #[test]
    fn single_square() {
        let vars = vec!["x".to_string()];
        let basis = MonomialBasis::full(&vars, 1);
        let cert = extract_certificate(&Rationals, &m(&[&[1]]), &basis).unwrap();
        assert_eq!(cert.len(), 1);
        let f = crate::arith::parse::parse_poly("x^2").unwrap();
        assert!(verify_certificate(&cert, &f).unwrap());
        let back = Certificate::parse(&cert.to_text()).unwrap();
        assert_eq!(back, cert);
    }
}
