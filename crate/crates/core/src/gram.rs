//! Gram pencils: the affine family of symmetric matrices `W(t)` with
//! `f = v(x)ᵀ W(t) v(x)` over a monomial basis `v`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{fmt_rational, parse_rational, Field, Monomial, MultiPoly, NumberField, RatPoly, Rational, Rationals};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Monomials of one degree, sorted from largest to smallest in grlex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub vars: Vec<String>,
    pub entries: Vec<Monomial>,
}

impl MonomialBasis {
    /// All `C(n+d-1, d)` monomials of degree `d` in `vars`.
    pub fn full(vars: &[String], d: u32) -> Self {
        let n = vars.len();
        let mut entries = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        if n > 0 {
            rec(0, d, &mut cur, &mut entries);
        } else if d == 0 {
            entries.push(Monomial(vec![]));
        }
        MonomialBasis { vars: vars.to_vec(), entries }
    }

    /// A user-chosen basis; sorted and deduplicated.
    pub fn custom(vars: &[String], mut entries: Vec<Monomial>) -> Result<Self> {
        if entries.iter().any(|m| m.nvars() != vars.len()) {
            return Err(Error::InvalidInput("basis monomial has the wrong number of variables".into()));
        }
        entries.sort_by(|a, b| b.cmp(a));
        entries.dedup();
        Ok(MonomialBasis { vars: vars.to_vec(), entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The vector `v(z)` of basis monomials evaluated at a point.
    pub fn eval<F: Field>(&self, field: &F, point: &[F::Elem]) -> Vec<F::Elem> {
        self.entries
            .iter()
            .map(|m| {
                m.0.iter()
                    .zip(point)
                    .fold(field.one(), |acc, (&e, x)| field.mul(&acc, &field.pow(x, e)))
            })
            .collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|m| m.fmt_with(&self.vars)).collect()
    }
}

/// Number of monomials of degree `d` in `n` variables.
pub fn basis_size(n: usize, d: u32) -> usize {
    if n == 0 {
        return 0;
    }
    // C(n + d - 1, d)
    let (top, k) = (n as u128 + d as u128 - 1, d as u128);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (top - i) / (i + 1);
    }
    c as usize
}

/// Affine family of symmetric matrices. Entry `(i, j)` with `i ≤ j` is stored
/// as `[c, a₁, …, a_k]`, meaning `c + Σ aₗ tₗ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramPencil<F: Field> {
    field: F,
    basis: MonomialBasis,
    nparams: usize,
    entries: Vec<Vec<F::Elem>>,
}

fn tri(i: usize, j: usize, m: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * m - i * (i + 1) / 2 + j
}

/// Builds the pencil of all Gram matrices of a homogeneous form of even
/// degree over the full basis of half degree.
pub fn build_pencil(f: &RatPoly) -> Result<GramPencil<Rationals>> {
    let deg = match f.total_degree() {
        None => return Err(Error::InvalidInput("the zero polynomial has no Gram pencil".into())),
        Some(d) => d,
    };
    if !f.is_homogeneous() {
        return Err(Error::InvalidInput("polynomial is not homogeneous".into()));
    }
    if deg % 2 == 1 {
        return Err(Error::InvalidInput(format!("odd degree {deg}")));
    }
    let basis = MonomialBasis::full(f.vars(), deg / 2);
    build_pencil_with_basis(f, basis)
}

/// As [`build_pencil`] over a given basis; fails when some monomial of `f`
/// is not a product of two basis elements.
pub fn build_pencil_with_basis(f: &RatPoly, basis: MonomialBasis) -> Result<GramPencil<Rationals>> {
    if basis.vars != f.vars() {
        return Err(Error::InvalidInput("basis and polynomial use different variables".into()));
    }
    let m = basis.len();
    let mut groups: BTreeMap<Monomial, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..m {
        for j in i..m {
            groups
                .entry(basis.entries[i].mul(&basis.entries[j]))
                .or_default()
                .push((i, j));
        }
    }
    for (mono, _) in f.terms() {
        if !groups.contains_key(mono) {
            return Err(Error::InvalidInput(format!(
                "monomial {} is not covered by the basis",
                mono.fmt_with(f.vars())
            )));
        }
    }
    let mut rep_of = vec![false; m * (m + 1) / 2];
    let mut reps = Vec::new();
    for (mono, pairs) in &groups {
        let rep = pairs.iter().copied().find(|(i, j)| i == j).unwrap_or(pairs[0]);
        rep_of[tri(rep.0, rep.1, m)] = true;
        reps.push((mono.clone(), rep));
    }
    // Free parameters: non-representative entries, row-major.
    let mut param_of = vec![None; m * (m + 1) / 2];
    let mut k = 0;
    for i in 0..m {
        for j in i..m {
            if !rep_of[tri(i, j, m)] {
                param_of[tri(i, j, m)] = Some(k);
                k += 1;
            }
        }
    }
    let mut entries = vec![vec![Rational::from_integer(0.into()); k + 1]; m * (m + 1) / 2];
    for (idx, p) in param_of.iter().enumerate() {
        if let Some(p) = p {
            entries[idx][p + 1] = Rational::from_integer(1.into());
        }
    }
    let two = Rational::from_integer(2.into());
    for (mono, (ri, rj)) in reps {
        let w_rep = if ri == rj { Rational::from_integer(1.into()) } else { two.clone() };
        let mut e = vec![Rational::from_integer(0.into()); k + 1];
        e[0] = f.coeff(&mono) / &w_rep;
        for &(i, j) in &groups[&mono] {
            if (i, j) == (ri, rj) {
                continue;
            }
            let w = if i == j { Rational::from_integer(1.into()) } else { two.clone() };
            let p = param_of[tri(i, j, m)].expect("non-representative entry is a parameter");
            e[p + 1] -= &w / &w_rep;
        }
        entries[tri(ri, rj, m)] = e;
    }
    Ok(GramPencil { field: Rationals, basis, nparams: k, entries })
}

impl<F: Field> GramPencil<F> {
    /// Pencil from explicit upper-triangular affine entries.
    pub fn from_entries(field: F, basis: MonomialBasis, nparams: usize, entries: Vec<Vec<F::Elem>>) -> Result<Self> {
        let m = basis.len();
        if entries.len() != m * (m + 1) / 2 || entries.iter().any(|e| e.len() != nparams + 1) {
            return Err(Error::InvalidInput("pencil entries have inconsistent shape".into()));
        }
        Ok(GramPencil { field, basis, nparams, entries })
    }

    /// The 0-parameter pencil holding one matrix.
    pub fn constant(field: F, basis: MonomialBasis, mat: &Matrix<F::Elem>) -> Result<Self> {
        let m = basis.len();
        if mat.len() != m || mat.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: mat.len() });
        }
        let mut entries = Vec::with_capacity(m * (m + 1) / 2);
        for i in 0..m {
            for j in i..m {
                if mat[i][j] != mat[j][i] {
                    return Err(Error::InvalidInput("matrix is not symmetric".into()));
                }
                entries.push(vec![mat[i][j].clone()]);
            }
        }
        Ok(GramPencil { field, basis, nparams: 0, entries })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// Matrix size.
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// Number of free parameters, the dimension of the pencil.
    pub fn nparams(&self) -> usize {
        self.nparams
    }

    /// Affine coefficients `[c, a₁, …, a_k]` of entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> &[F::Elem] {
        &self.entries[tri(i, j, self.size())]
    }

    /// True when entry `(i, j)` is the zero affine function.
    pub fn entry_is_zero(&self, i: usize, j: usize) -> bool {
        self.entry(i, j).iter().all(|x| self.field.is_zero(x))
    }

    /// True when entry `(i, j)` does not depend on any parameter.
    pub fn entry_is_constant(&self, i: usize, j: usize) -> bool {
        self.entry(i, j)[1..].iter().all(|x| self.field.is_zero(x))
    }

    pub fn constant_matrix(&self) -> Matrix<F::Elem> {
        self.coefficient_matrix(0)
    }

    /// Direction matrix of parameter `p` (0-based).
    pub fn direction(&self, p: usize) -> Matrix<F::Elem> {
        self.coefficient_matrix(p + 1)
    }

    fn coefficient_matrix(&self, c: usize) -> Matrix<F::Elem> {
        let m = self.size();
        (0..m).map(|i| (0..m).map(|j| self.entry(i, j)[c].clone()).collect()).collect()
    }

    /// `constant + Σ tᵢ directionᵢ`.
    pub fn eval(&self, t: &[F::Elem]) -> Result<Matrix<F::Elem>> {
        if t.len() != self.nparams {
            return Err(Error::DimensionMismatch { expected: self.nparams, got: t.len() });
        }
        let m = self.size();
        let f = &self.field;
        let mut out = vec![vec![f.zero(); m]; m];
        for i in 0..m {
            for j in i..m {
                let e = self.entry(i, j);
                let mut v = e[0].clone();
                for (a, x) in e[1..].iter().zip(t) {
                    if !f.is_zero(a) {
                        v = f.add(&v, &f.mul(a, x));
                    }
                }
                out[j][i] = v.clone();
                out[i][j] = v;
            }
        }
        Ok(out)
    }

    /// Evaluation at rational parameters.
    pub fn eval_rational(&self, t: &[Rational]) -> Result<Matrix<F::Elem>> {
        let t: Vec<F::Elem> = t.iter().map(|q| self.field.from_rational(q)).collect();
        self.eval(&t)
    }

    /// Float view: the constant and direction matrices in the real embedding.
    pub fn to_f64(&self) -> Result<FloatPencil> {
        let conv = |c: usize| -> Result<Vec<Vec<f64>>> {
            self.coefficient_matrix(c)
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| {
                            self.field
                                .to_f64(x)
                                .ok_or_else(|| Error::InvalidInput("coefficient field has no real embedding".into()))
                        })
                        .collect()
                })
                .collect()
        };
        let c = conv(0)?;
        let d = (1..=self.nparams).map(conv).collect::<Result<Vec<_>>>()?;
        Ok((c, d))
    }

    /// Re-parametrizes by `tᵢ = sᵢ[0] + Σ sᵢ[j] uⱼ`, one affine expression
    /// per current parameter, all of the same length.
    pub fn substitute(&self, subst: &[Vec<F::Elem>]) -> Result<Self> {
        if subst.len() != self.nparams {
            return Err(Error::DimensionMismatch { expected: self.nparams, got: subst.len() });
        }
        let r = subst.first().map_or(0, |s| s.len().saturating_sub(1));
        let f = &self.field;
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let mut out = vec![f.zero(); r + 1];
                out[0] = e[0].clone();
                for (a, s) in e[1..].iter().zip(subst) {
                    if f.is_zero(a) {
                        continue;
                    }
                    for (o, x) in out.iter_mut().zip(s) {
                        if !f.is_zero(x) {
                            *o = f.add(o, &f.mul(a, x));
                        }
                    }
                }
                out
            })
            .collect();
        Ok(GramPencil { field: f.clone(), basis: self.basis.clone(), nparams: r, entries })
    }

    /// Principal sub-pencil on the given indices.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let mut entries = Vec::new();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a..] {
                entries.push(self.entry(i, j).to_vec());
            }
        }
        let basis = MonomialBasis {
            vars: self.basis.vars.clone(),
            entries: idx.iter().map(|&i| self.basis.entries[i].clone()).collect(),
        };
        GramPencil { field: self.field.clone(), basis, nparams: self.nparams, entries }
    }

    /// `v(x)ᵀ W(t) v(x)` for the given parameters.
    pub fn expand(&self, t: &[F::Elem]) -> Result<MultiPoly<F>> {
        let w = self.eval(t)?;
        Ok(quadratic_form(&self.field, &self.basis, &w))
    }

    /// Maximum exact rank of `W(t)` over `draws` random integer
    /// specializations with entries in `[-10⁴, 10⁴]`.
    pub fn generic_rank(&self, draws: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = 0;
        for _ in 0..draws.max(1) {
            let t: Vec<F::Elem> = (0..self.nparams)
                .map(|_| self.field.from_int(rng.gen_range(-10_000..=10_000)))
                .collect();
            let w = self.eval(&t).expect("parameter count matches");
            best = best.max(linalg::rank_fraction_free(&self.field, &w));
            if best == self.size() {
                break;
            }
        }
        best
    }

    /// A random specialization, used to pick pivot columns.
    pub fn random_point(&self, seed: u64) -> Vec<F::Elem> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.nparams)
            .map(|_| self.field.from_int(rng.gen_range(-10_000..=10_000)))
            .collect()
    }

    /// The same pencil with every coefficient mapped into another field.
    pub fn map_field<K: Field>(&self, k: &K, map: impl Fn(&F::Elem) -> K::Elem) -> GramPencil<K> {
        GramPencil {
            field: k.clone(),
            basis: self.basis.clone(),
            nparams: self.nparams,
            entries: self.entries.iter().map(|e| e.iter().map(&map).collect()).collect(),
        }
    }

    /// The rational pencil when every coefficient is rational.
    pub fn to_rational(&self) -> Option<GramPencil<Rationals>> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.iter().map(|x| self.field.as_rational(x)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(GramPencil { field: Rationals, basis: self.basis.clone(), nparams: self.nparams, entries })
    }
}

impl GramPencil<Rationals> {
    /// The pencil with coefficients viewed in a number field.
    pub fn embed(&self, k: &NumberField) -> GramPencil<NumberField> {
        self.map_field(k, |q| k.from_rational(q))
    }

    /// Text dump: a header, then the constant and direction matrices as
    /// comma-separated rationals.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let m = self.size();
        let _ = writeln!(s, "size: {m}");
        let _ = writeln!(s, "params: {}", self.nparams);
        let _ = writeln!(s, "vars: {}", self.basis.vars.join(", "));
        let _ = writeln!(s, "basis: {}", self.basis.names().join(", "));
        for c in 0..=self.nparams {
            if c == 0 {
                let _ = writeln!(s, "constant:");
            } else {
                let _ = writeln!(s, "direction {c}:");
            }
            for row in self.coefficient_matrix(c) {
                let cells: Vec<String> = row.iter().map(fmt_rational).collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
        }
        s
    }

    /// Inverse of [`GramPencil::dump`].
    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut header = |key: &str| -> Result<String> {
            let l = lines.next().ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
            l.strip_prefix(key)
                .and_then(|r| r.strip_prefix(':'))
                .map(|r| r.trim().to_string())
                .ok_or_else(|| Error::Parse(format!("expected `{key}:`, found {l:?}")))
        };
        let m: usize = header("size")?.parse().map_err(|_| Error::Parse("bad size".into()))?;
        let k: usize = header("params")?.parse().map_err(|_| Error::Parse("bad params".into()))?;
        if m > 4096 || k > 1 << 20 || (k + 1).saturating_mul(m).saturating_mul(m) > 1 << 24 {
            return Err(Error::Parse("pencil too large".into()));
        }
        let vars: Vec<String> = header("vars")?.split(',').map(|v| v.trim().to_string()).collect();
        let names = header("basis")?;
        let mono_src: Vec<&str> = names.split(',').map(str::trim).collect();
        if mono_src.len() != m {
            return Err(Error::Parse("basis length does not match size".into()));
        }
        let entries_basis = mono_src
            .iter()
            .map(|s| {
                let p = crate::arith::parse::parse_poly_with_vars(s, &vars)?;
                match (p.num_terms(), p.leading()) {
                    (1, Some((mono, c))) if *c == Rational::from_integer(1.into()) => Ok(mono.clone()),
                    _ => Err(Error::Parse(format!("basis element {s:?} is not a monomial"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let basis = MonomialBasis { vars, entries: entries_basis };
        let mut mats = Vec::with_capacity(k + 1);
        for c in 0..=k {
            let expect = if c == 0 { "constant:".to_string() } else { format!("direction {c}:") };
            let l = lines.next().ok_or_else(|| Error::Parse(format!("missing {expect}")))?;
            if l != expect {
                return Err(Error::Parse(format!("expected {expect:?}, found {l:?}")));
            }
            let mut mat = Vec::with_capacity(m);
            for _ in 0..m {
                let l = lines.next().ok_or_else(|| Error::Parse("matrix row missing".into()))?;
                let row = l
                    .split(',')
                    .map(|x| parse_rational(x.trim()).ok_or_else(|| Error::Parse(format!("bad rational {x:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != m {
                    return Err(Error::Parse("matrix row has the wrong length".into()));
                }
                mat.push(row);
            }
            mats.push(mat);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing lines after the last matrix".into()));
        }
        let mut entries = Vec::with_capacity(m * (m + 1) / 2);
        for i in 0..m {
            for j in i..m {
                let mut e = Vec::with_capacity(k + 1);
                for mat in &mats {
                    if mat[i][j] != mat[j][i] {
                        return Err(Error::Parse("matrix is not symmetric".into()));
                    }
                    e.push(mat[i][j].clone());
                }
                entries.push(e);
            }
        }
        GramPencil::from_entries(Rationals, basis, k, entries)
    }
}

/// Constant matrix and direction matrices in floating point.
pub type FloatPencil = (Vec<Vec<f64>>, Vec<Vec<Vec<f64>>>);

/// `v(x)ᵀ W v(x)` as a polynomial.
pub fn quadratic_form<F: Field>(field: &F, basis: &MonomialBasis, w: &Matrix<F::Elem>) -> MultiPoly<F> {
    let mut p = MultiPoly::zero(field, &basis.vars);
    let m = basis.len();
    for i in 0..m {
        for j in i..m {
            if field.is_zero(&w[i][j]) {
                continue;
            }
            let c = if i == j { w[i][j].clone() } else { field.add(&w[i][j], &w[i][j]) };
            p.add_term(basis.entries[i].mul(&basis.entries[j]), &c);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_poly;
    use crate::arith::rat;

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn basis_sizes_and_order() {
        let v: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        assert_eq!(MonomialBasis::full(&v, 2).names(), ["x^2", "x*y", "y^2"]);
        assert_eq!(basis_size(3, 4), 15);
        assert_eq!(basis_size(4, 3), 20);
        let v3: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        assert_eq!(MonomialBasis::full(&v3, 4).len(), 15);
    }

    #[test]
    fn binary_quartic_pencil() {
        let f = parse_poly("10*x^4+2*x^3*y+27*x^2*y^2-24*x*y^3+5*y^4").unwrap();
        let p = build_pencil(&f).unwrap();
        assert_eq!(p.nparams(), 1);
        assert_eq!(p.eval_rational(&[rat(5)]).unwrap(), mat(&[&[10, 1, 5], &[1, 17, -12], &[5, -12, 5]]));
        assert_eq!(p.constant_matrix(), p.eval_rational(&[rat(0)]).unwrap());
        assert_eq!(p.direction(0), mat(&[&[0, 0, 1], &[0, -2, 0], &[1, 0, 0]]));
        assert_eq!(p.generic_rank(3, 1), 3);
        assert_eq!(p.expand(&[rat(-7)]).unwrap(), f);
        assert!(p.eval_rational(&[]).is_err());
    }

    #[test]
    fn pencil_errors() {
        assert!(build_pencil(&parse_poly("x^3+y^3").unwrap()).is_err());
        assert!(build_pencil(&parse_poly("x^2+y").unwrap()).is_err());
        let f = parse_poly("x^2+y^2").unwrap();
        let p = build_pencil(&f).unwrap();
        assert_eq!((p.size(), p.nparams(), p.generic_rank(3, 0)), (2, 0, 2));
    }

    #[test]
    fn dump_round_trip() {
        let f = parse_poly("x^4 + 3*x^2*y^2 - x*y^3/2 + y^4").unwrap();
        let p = build_pencil(&f).unwrap();
        let q = GramPencil::parse_dump(&p.dump()).unwrap();
        assert_eq!(p, q);
        assert!(GramPencil::parse_dump("size: 2\nparams: 0\n").is_err());
    }

    #[test]
    fn substitution_and_restriction() {
        let f = parse_poly("10*x^4+2*x^3*y+27*x^2*y^2-24*x*y^3+5*y^4").unwrap();
        let p = build_pencil(&f).unwrap();
        let q = p.substitute(&[vec![rat(2)]]).unwrap();
        assert_eq!(q.nparams(), 0);
        assert_eq!(q.constant_matrix(), p.eval_rational(&[rat(2)]).unwrap());
        let r = p.restrict(&[0, 2]);
        assert_eq!(r.eval_rational(&[rat(1)]).unwrap(), mat(&[&[10, 1], &[1, 5]]));
    }
}
