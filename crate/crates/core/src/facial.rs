//! Facial reduction: kernel vectors that every PSD Gram matrix must satisfy,
//! and the re-parametrization of the pencil they induce.

use std::fmt;

use log::{debug, warn};

use crate::arith::parse::{parse_poly_over, parse_unipoly};
use crate::arith::{AlgebraicNumber, Field, NumberField, RatPoly, Rational, Rationals};
use crate::error::{Error, Result};
use crate::gram::{build_pencil, GramPencil, MonomialBasis};
use crate::linalg::solve_affine;

/// A verified real zero of a form, with coordinates in ℚ(α).
#[derive(Clone, Debug)]
pub struct ZeroPoint {
    field: NumberField,
    coords: Vec<AlgebraicNumber>,
    label: String,
}

impl ZeroPoint {
    /// Checks `f(coords) = 0` exactly and that α has a real embedding.
    pub fn new(f: &RatPoly, field: NumberField, coords: Vec<AlgebraicNumber>, label: &str) -> Result<Self> {
        if field.real_root_count() == 0 {
            return Err(Error::InvalidInput(format!(
                "{} has no real root, so the point is not real",
                field.minpoly()
            )));
        }
        if coords.len() != f.nvars() {
            return Err(Error::DimensionMismatch { expected: f.nvars(), got: coords.len() });
        }
        if coords.iter().all(|c| field.is_zero(c)) {
            return Err(Error::InvalidInput("the origin gives no constraint".into()));
        }
        let val = f.eval_in(&field, &coords, |q| field.from_rational(q))?;
        if !field.is_zero(&val) {
            return Err(Error::NotAZero(format!("{label}: value {val}")));
        }
        Ok(ZeroPoint { field, coords, label: label.to_string() })
    }

    /// A zero with rational coordinates.
    pub fn rational(f: &RatPoly, coords: &[Rational], label: &str) -> Result<Self> {
        let k = NumberField::rational("a");
        let c = coords.iter().map(|q| k.from_rational(q)).collect();
        Self::new(f, k, c, label)
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[AlgebraicNumber] {
        &self.coords
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of real roots of the defining polynomial (at least one).
    pub fn realness_witness(&self) -> usize {
        self.field.real_root_count()
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().all(|c| c.is_rational())
    }

    /// `v(z)` over the basis.
    pub fn basis_vector(&self, basis: &MonomialBasis) -> Vec<AlgebraicNumber> {
        basis.eval(&self.field, &self.coords)
    }
}

/// How a zero is turned into constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroMode {
    /// `Q·v(z) = 0` over ℚ(α).
    Plain,
    /// One rational constraint per power-basis coordinate of `v(z)`.
    Conjugate,
    /// `Q·Tr(v(z)) = 0`.
    Trace,
}

impl std::str::FromStr for ZeroMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "plain" => Ok(ZeroMode::Plain),
            "conjugate" => Ok(ZeroMode::Conjugate),
            "trace" => Ok(ZeroMode::Trace),
            other => Err(Error::Parse(format!("unknown zero mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    PlainZero,
    ConjugateCoefficientwise,
    Trace,
    DiagGhost,
    MinorGhost,
    RationalForcing,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Origin::PlainZero => "plain-zero",
            Origin::ConjugateCoefficientwise => "conjugate-coefficientwise",
            Origin::Trace => "trace",
            Origin::DiagGhost => "diag-ghost",
            Origin::MinorGhost => "minor-ghost",
            Origin::RationalForcing => "rational-forcing",
        };
        f.write_str(s)
    }
}

/// A vector `u` with `Q·u = 0` for every PSD member `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelConstraint<E> {
    pub vector: Vec<E>,
    pub origin: Origin,
}

/// Constraints from one zero. Plain mode gives vectors over ℚ(α); the other
/// modes give rational vectors, returned embedded in the zero's field.
pub fn kernel_from_zero(basis: &MonomialBasis, z: &ZeroPoint, mode: ZeroMode) -> Vec<KernelConstraint<AlgebraicNumber>> {
    let k = z.field();
    let v = z.basis_vector(basis);
    match mode {
        ZeroMode::Plain => vec![KernelConstraint { vector: v, origin: Origin::PlainZero }],
        ZeroMode::Trace => trace_constraint(basis, z)
            .into_iter()
            .map(|c| KernelConstraint {
                vector: c.vector.iter().map(|q| k.from_rational(q)).collect(),
                origin: Origin::Trace,
            })
            .collect(),
        ZeroMode::Conjugate => (0..k.degree())
            .map(|j| v.iter().map(|x| x.coords()[j].clone()).collect::<Vec<_>>())
            .filter(|u| u.iter().any(|q| *q != Rational::from_integer(0.into())))
            .map(|u| KernelConstraint {
                vector: u.iter().map(|q| k.from_rational(q)).collect(),
                origin: Origin::ConjugateCoefficientwise,
            })
            .collect(),
    }
}

/// The rational trace vector `Tr(v(z))`; `None` when it vanishes.
pub fn trace_constraint(basis: &MonomialBasis, z: &ZeroPoint) -> Option<KernelConstraint<Rational>> {
    let k = z.field();
    let u: Vec<Rational> = z.basis_vector(basis).iter().map(|x| k.trace(x)).collect();
    if u.iter().all(|q| *q == Rational::from_integer(0.into())) {
        debug!("{}: trace vector vanishes, skipped", z.label());
        None
    } else {
        Some(KernelConstraint { vector: u, origin: Origin::Trace })
    }
}

/// True when `W(t)·u` vanishes for every `t`.
pub fn annihilates<F: Field>(p: &GramPencil<F>, u: &[F::Elem]) -> bool {
    constraint_equations(p, u).iter().all(|e| e.iter().all(|x| p.field().is_zero(x)))
}

/// The affine equations `(W(t)·u)_i = 0`.
fn constraint_equations<F: Field>(p: &GramPencil<F>, u: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    let f = p.field();
    let m = p.size();
    (0..m)
        .map(|i| {
            let mut eq = vec![f.zero(); p.nparams() + 1];
            for (j, uj) in u.iter().enumerate() {
                if f.is_zero(uj) {
                    continue;
                }
                for (e, a) in eq.iter_mut().zip(p.entry(i, j)) {
                    if !f.is_zero(a) {
                        *e = f.add(e, &f.mul(a, uj));
                    }
                }
            }
            eq
        })
        .collect()
}

/// `Q·e_k = 0` for each identically-zero diagonal entry whose row is not
/// already identically zero.
pub fn diag_ghosts<F: Field>(p: &GramPencil<F>) -> Vec<KernelConstraint<F::Elem>> {
    let f = p.field();
    let m = p.size();
    (0..m)
        .filter(|&k| p.entry_is_zero(k, k) && (0..m).any(|j| !p.entry_is_zero(k, j)))
        .map(|k| {
            let mut v = vec![f.zero(); m];
            v[k] = f.one();
            KernelConstraint { vector: v, origin: Origin::DiagGhost }
        })
        .collect()
}

/// Products of affine forms as coefficient vectors of the quadratic form in
/// `(1, t₁, …, t_k)`, symmetric pairs merged.
fn affine_product<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len();
    let mut out = vec![f.zero(); n * (n + 1) / 2];
    for i in 0..n {
        if f.is_zero(&a[i]) {
            continue;
        }
        for j in 0..n {
            if f.is_zero(&b[j]) {
                continue;
            }
            let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
            let idx = lo * n - lo * (lo + 1) / 2 + hi;
            out[idx] = f.add(&out[idx], &f.mul(&a[i], &b[j]));
        }
    }
    out
}

/// Kernel vectors of identically singular 2×2 principal submatrices
/// `[[a, λa], [λa, λ²a]]` with constant `λ`; the vector is `λ e_i − e_j`.
/// Submatrices with a zero diagonal entry are left to [`diag_ghosts`].
pub fn minor_ghosts<F: Field>(p: &GramPencil<F>) -> Vec<KernelConstraint<F::Elem>> {
    let f = p.field();
    let m = p.size();
    let mut out = Vec::new();
    for i in 0..m {
        if p.entry_is_zero(i, i) {
            continue;
        }
        for j in i + 1..m {
            if p.entry_is_zero(j, j) {
                continue;
            }
            let (a, b, c) = (p.entry(i, i), p.entry(i, j), p.entry(j, j));
            let ac = affine_product(f, a, c);
            let bb = affine_product(f, b, b);
            if ac != bb && ac.iter().zip(&bb).any(|(x, y)| !f.is_zero(&f.sub(x, y))) {
                continue;
            }
            // det ≡ 0 and a ≢ 0; kernel (b, −a) is constant up to scale iff b = λa.
            let lead = a.iter().position(|x| !f.is_zero(x)).expect("nonzero diagonal");
            let lambda = f.div(&b[lead], &a[lead]).expect("nonzero");
            let proportional = a.iter().zip(b).all(|(x, y)| f.is_zero(&f.sub(y, &f.mul(&lambda, x))));
            if !proportional {
                warn!("singular 2x2 minor ({i}, {j}) has a parameter-dependent kernel; skipped");
                continue;
            }
            let mut v = vec![f.zero(); m];
            v[i] = lambda;
            v[j] = f.neg(&f.one());
            out.push(KernelConstraint { vector: v, origin: Origin::MinorGhost });
        }
    }
    out
}

/// Rational linear equations on the parameters making every entry rational:
/// for each entry `c + Σ aᵢ tᵢ` and each `j ≥ 1`, the `αʲ` coordinate of
/// `c + Σ aᵢ tᵢ` with rational `tᵢ` is set to zero. Heuristic: a rational
/// Gram matrix may also arise from irrational parameter values.
pub fn force_rational<F: Field>(p: &GramPencil<F>) -> Vec<Vec<Rational>> {
    let f = p.field();
    let d = f.degree();
    let m = p.size();
    let mut eqs: Vec<Vec<Rational>> = Vec::new();
    for i in 0..m {
        for j in i..m {
            let coords: Vec<Vec<Rational>> = p.entry(i, j).iter().map(|x| f.coords(x)).collect();
            for c in 1..d {
                let eq: Vec<Rational> = coords.iter().map(|x| x[c].clone()).collect();
                if eq.iter().any(|q| *q != Rational::from_integer(0.into())) && !eqs.contains(&eq) {
                    eqs.push(eq);
                }
            }
        }
    }
    eqs
}

/// Restricts the pencil to members with `W·u = 0` for all given vectors.
/// `None` means no member satisfies them.
pub fn apply_constraints<F: Field>(p: &GramPencil<F>, cs: &[Vec<F::Elem>]) -> Option<GramPencil<F>> {
    if cs.is_empty() {
        return Some(p.clone());
    }
    let eqs: Vec<Vec<F::Elem>> = cs.iter().flat_map(|u| constraint_equations(p, u)).collect();
    apply_equations(p, &eqs)
}

/// Restricts the pencil by affine parameter equations `[c, a₁, …, a_k]`.
pub fn apply_equations<F: Field>(p: &GramPencil<F>, eqs: &[Vec<F::Elem>]) -> Option<GramPencil<F>> {
    let subst = solve_affine(p.field(), eqs, p.nparams())?;
    Some(p.substitute(&subst).expect("substitution shape matches"))
}

/// A pencil over ℚ or over one number field.
#[derive(Clone, Debug)]
pub enum Pencil {
    Rational(GramPencil<Rationals>),
    Algebraic(GramPencil<NumberField>),
}

impl Pencil {
    pub fn nparams(&self) -> usize {
        match self {
            Pencil::Rational(p) => p.nparams(),
            Pencil::Algebraic(p) => p.nparams(),
        }
    }

    pub fn size(&self) -> usize {
        self.basis().len()
    }

    pub fn basis(&self) -> &MonomialBasis {
        match self {
            Pencil::Rational(p) => p.basis(),
            Pencil::Algebraic(p) => p.basis(),
        }
    }

    pub fn generic_rank(&self, draws: usize, seed: u64) -> usize {
        match self {
            Pencil::Rational(p) => p.generic_rank(draws, seed),
            Pencil::Algebraic(p) => p.generic_rank(draws, seed),
        }
    }

    pub fn as_rational(&self) -> Option<&GramPencil<Rationals>> {
        match self {
            Pencil::Rational(p) => Some(p),
            Pencil::Algebraic(_) => None,
        }
    }
}

/// One batch of constraints and the resulting pencil size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub label: String,
    pub constraints: usize,
    /// `None` once the pencil is empty.
    pub dim: Option<usize>,
    pub rank: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionLog {
    pub steps: Vec<ReductionStep>,
}

impl ReductionLog {
    /// `(dim, rank)` after each step, stopping at the first empty pencil.
    pub fn chain(&self) -> Vec<(usize, usize)> {
        self.steps.iter().map_while(|s| s.dim.zip(s.rank)).collect()
    }
}

impl fmt::Display for ReductionLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            match (s.dim, s.rank) {
                (Some(d), Some(r)) => {
                    writeln!(f, "{:<28} constraints {:>3}  dim {:>4}  rank {:>3}", s.label, s.constraints, d, r)?
                }
                _ => writeln!(f, "{:<28} constraints {:>3}  empty", s.label, s.constraints)?,
            }
        }
        Ok(())
    }
}

/// Options for the default reduction order.
#[derive(Clone, Debug)]
pub struct ReduceOptions {
    /// Mode for zeros with irrational coordinates when none is given.
    pub mode: ZeroMode,
    pub minor_ghosts: bool,
    pub force_rational: bool,
    pub rank_draws: usize,
    pub seed: u64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { mode: ZeroMode::Trace, minor_ghosts: true, force_rational: false, rank_draws: 3, seed: 0 }
    }
}

/// Step-wise facial reduction with a log of `(dim, rank)` per batch.
#[derive(Clone, Debug)]
pub struct Reducer {
    pencil: Option<Pencil>,
    log: ReductionLog,
    draws: usize,
    seed: u64,
}

impl Reducer {
    pub fn new(f: &RatPoly, draws: usize, seed: u64) -> Result<Self> {
        Ok(Self::from_pencil(build_pencil(f)?, draws, seed))
    }

    pub fn from_pencil(p: GramPencil<Rationals>, draws: usize, seed: u64) -> Self {
        let mut r = Reducer { pencil: Some(Pencil::Rational(p)), log: ReductionLog::default(), draws, seed };
        r.record("original", 0);
        r
    }

    pub fn pencil(&self) -> Option<&Pencil> {
        self.pencil.as_ref()
    }

    pub fn into_pencil(self) -> Option<Pencil> {
        self.pencil
    }

    pub fn log(&self) -> &ReductionLog {
        &self.log
    }

    pub fn is_empty(&self) -> bool {
        self.pencil.is_none()
    }

    /// Current `(dim, rank)`, `None` when empty.
    pub fn state(&self) -> Option<(usize, usize)> {
        self.log.steps.last().and_then(|s| s.dim.zip(s.rank))
    }

    fn record(&mut self, label: &str, constraints: usize) {
        let (dim, rank) = match &self.pencil {
            Some(p) => (Some(p.nparams()), Some(p.generic_rank(self.draws, self.seed))),
            None => (None, None),
        };
        debug!("{label}: {constraints} constraints, dim {dim:?}, rank {rank:?}");
        self.log.steps.push(ReductionStep { label: label.to_string(), constraints, dim, rank });
    }

    /// One batch of zeros, all in the given mode.
    pub fn zeros(&mut self, zs: &[ZeroPoint], mode: ZeroMode, label: &str) -> Result<&mut Self> {
        let Some(pencil) = self.pencil.take() else {
            return Ok(self);
        };
        let basis = pencil.basis().clone();
        let count;
        let next = match (pencil, mode) {
            (Pencil::Rational(p), ZeroMode::Trace | ZeroMode::Conjugate) => {
                let tagged: Vec<(ZeroPoint, ZeroMode)> = zs.iter().map(|z| (z.clone(), mode)).collect();
                let cs = informative(&p, rational_constraints(&basis, &tagged));
                count = cs.len();
                apply_constraints(&p, &cs).map(Pencil::Rational)
            }
            (Pencil::Algebraic(p), ZeroMode::Trace) => {
                let k = p.field().clone();
                let cs: Vec<Vec<AlgebraicNumber>> = zs
                    .iter()
                    .filter_map(|z| trace_constraint(&basis, z))
                    .map(|c| c.vector.iter().map(|q| k.from_rational(q)).collect())
                    .collect();
                let cs = informative(&p, cs);
                count = cs.len();
                apply_constraints(&p, &cs).map(Pencil::Algebraic)
            }
            (Pencil::Algebraic(_), ZeroMode::Conjugate) => {
                return Err(Error::InvalidInput(
                    "coefficientwise constraints need a rational pencil".into(),
                ))
            }
            (pencil, ZeroMode::Plain) => {
                let irrational: Vec<&NumberField> = zs.iter().filter(|z| !z.is_rational()).map(|z| z.field()).collect();
                let target = match &pencil {
                    Pencil::Algebraic(p) => Some(p.field().clone()),
                    Pencil::Rational(_) => irrational.first().map(|k| (*k).clone()),
                };
                if let Some(k) = &target {
                    if irrational.iter().any(|z| *z != k) {
                        return Err(Error::InvalidInput("plain constraints from different number fields".into()));
                    }
                }
                match (pencil, target) {
                    (Pencil::Rational(p), None) => {
                        let cs: Vec<Vec<Rational>> = zs
                            .iter()
                            .map(|z| z.basis_vector(&basis).iter().map(|x| x.coords()[0].clone()).collect())
                            .collect();
                        let cs = informative(&p, cs);
                        count = cs.len();
                        apply_constraints(&p, &cs).map(Pencil::Rational)
                    }
                    (pencil, Some(k)) => {
                        let p = match pencil {
                            Pencil::Rational(p) => p.embed(&k),
                            Pencil::Algebraic(p) => p,
                        };
                        let cs: Vec<Vec<AlgebraicNumber>> = zs
                            .iter()
                            .map(|z| {
                                z.basis_vector(&basis)
                                    .iter()
                                    .map(|x| if x.is_rational() { k.from_rational(&x.coords()[0]) } else { x.clone() })
                                    .collect()
                            })
                            .collect();
                        let cs = informative(&p, cs);
                        count = cs.len();
                        apply_constraints(&p, &cs).map(|q| match q.to_rational() {
                            Some(r) => Pencil::Rational(r),
                            None => Pencil::Algebraic(q),
                        })
                    }
                    (Pencil::Algebraic(_), None) => unreachable!("algebraic pencil always has a field"),
                }
            }
        };
        self.pencil = next;
        self.record(label, count);
        Ok(self)
    }

    /// One batch of rational constraints from zeros with individual modes:
    /// rational points and trace or coefficientwise constraints. Plain
    /// constraints from irrational points are rejected.
    pub fn rational_batch(&mut self, zs: &[(ZeroPoint, ZeroMode)], label: &str) -> Result<&mut Self> {
        if zs.iter().any(|(z, m)| *m == ZeroMode::Plain && !z.is_rational()) {
            return Err(Error::InvalidInput("plain constraints from irrational zeros are not rational".into()));
        }
        let count;
        self.pencil = match self.pencil.take() {
            None => return Ok(self),
            Some(Pencil::Rational(p)) => {
                let cs = informative(&p, rational_constraints(p.basis(), zs));
                count = cs.len();
                apply_constraints(&p, &cs).map(Pencil::Rational)
            }
            Some(Pencil::Algebraic(p)) => {
                let k = p.field().clone();
                let lifted = rational_constraints(p.basis(), zs)
                    .into_iter()
                    .map(|c| c.iter().map(|q| k.from_rational(q)).collect())
                    .collect();
                let cs = informative(&p, lifted);
                count = cs.len();
                apply_constraints(&p, &cs).map(Pencil::Algebraic)
            }
        };
        self.record(label, count);
        Ok(self)
    }

    /// Diagonal ghosts until none is left, then (when `minors`) one round
    /// of 2×2 minor ghosts; logged as a single step.
    /// A pencil without parameters is left alone: its single matrix is
    /// decided exactly downstream.
    pub fn ghosts(&mut self, minors: bool, label: &str) -> &mut Self {
        if self.pencil.as_ref().is_some_and(|p| p.nparams() == 0) {
            return self;
        }
        let mut total = 0;
        while let Some(pencil) = self.pencil.take() {
            let (next, n) = match pencil {
                Pencil::Rational(p) => ghost_round(p, false, Pencil::Rational),
                Pencil::Algebraic(p) => ghost_round(p, false, Pencil::Algebraic),
            };
            total += n;
            self.pencil = next;
            if n == 0 {
                break;
            }
        }
        if minors {
            if let Some(pencil) = self.pencil.take() {
                let (next, n) = match pencil {
                    Pencil::Rational(p) => ghost_round(p, true, Pencil::Rational),
                    Pencil::Algebraic(p) => ghost_round(p, true, Pencil::Algebraic),
                };
                total += n;
                self.pencil = next;
            }
        }
        if total > 0 {
            self.record(label, total);
        }
        self
    }

    /// Forces rational entries; a rational pencil is left unchanged.
    pub fn force_rational(&mut self, label: &str) -> &mut Self {
        let (next, n) = match self.pencil.take() {
            None => (None, 0),
            Some(Pencil::Rational(p)) => (Some(Pencil::Rational(p)), 0),
            Some(Pencil::Algebraic(p)) => {
                let eqs = force_rational(&p);
                let k = p.field().clone();
                let lifted: Vec<Vec<AlgebraicNumber>> =
                    eqs.iter().map(|e| e.iter().map(|q| k.from_rational(q)).collect()).collect();
                let next = apply_equations(&p, &lifted).map(|q| {
                    Pencil::Rational(q.to_rational().expect("forced entries are rational"))
                });
                (next, eqs.len())
            }
        };
        self.pencil = next;
        self.record(label, n);
        self
    }
}

fn ghost_round<F: Field>(
    p: GramPencil<F>,
    minors: bool,
    wrap: fn(GramPencil<F>) -> Pencil,
) -> (Option<Pencil>, usize) {
    let mut cs: Vec<Vec<F::Elem>> = diag_ghosts(&p).into_iter().map(|c| c.vector).collect();
    if minors {
        cs.extend(minor_ghosts(&p).into_iter().map(|c| c.vector));
    }
    let cs = informative(&p, cs);
    let n = cs.len();
    if n == 0 {
        return (Some(wrap(p)), 0);
    }
    (apply_constraints(&p, &cs).map(wrap), n)
}

/// Rational kernel vectors: the monomial vector of a rational point, the
/// trace vector, or one vector per power-basis coordinate.
fn rational_constraints(basis: &MonomialBasis, zs: &[(ZeroPoint, ZeroMode)]) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for (z, mode) in zs {
        let mode = if z.is_rational() { ZeroMode::Plain } else { *mode };
        for c in kernel_from_zero(basis, z, mode) {
            out.push(c.vector.iter().map(|x| x.coords()[0].clone()).collect());
        }
    }
    out
}

/// Drops duplicate vectors and those already annihilated by the pencil.
fn informative<F: Field>(p: &GramPencil<F>, cs: Vec<Vec<F::Elem>>) -> Vec<Vec<F::Elem>> {
    let mut out: Vec<Vec<F::Elem>> = Vec::new();
    for u in cs {
        if u.iter().all(|x| p.field().is_zero(x)) || out.contains(&u) || annihilates(p, &u) {
            continue;
        }
        out.push(u);
    }
    out
}

/// Runs the default order: one batch of rational constraints (rational
/// points, trace and coefficientwise constraints), ghosts, plain constraints
/// from irrational points, ghosts, then optional rational forcing and ghosts.
pub fn reduce(f: &RatPoly, zeros: &[(ZeroPoint, Option<ZeroMode>)], opts: &ReduceOptions) -> Result<Reducer> {
    let mut r = Reducer::new(f, opts.rank_draws, opts.seed)?;
    let tagged: Vec<(ZeroPoint, ZeroMode)> = zeros
        .iter()
        .map(|(z, m)| (z.clone(), m.unwrap_or(if z.is_rational() { ZeroMode::Plain } else { opts.mode })))
        .collect();
    let (plain, rational): (Vec<_>, Vec<_>) =
        tagged.into_iter().partition(|(z, m)| *m == ZeroMode::Plain && !z.is_rational());
    if !rational.is_empty() {
        r.rational_batch(&rational, "rational constraints")?;
    }
    r.ghosts(opts.minor_ghosts, "ghosts");
    if !plain.is_empty() {
        let zs: Vec<ZeroPoint> = plain.into_iter().map(|(z, _)| z).collect();
        r.zeros(&zs, ZeroMode::Plain, "plain constraints")?;
        r.ghosts(opts.minor_ghosts, "ghosts");
    }
    if opts.force_rational && matches!(r.pencil(), Some(Pencil::Algebraic(_))) {
        r.force_rational("rational forcing");
        r.ghosts(opts.minor_ghosts, "ghosts");
    }
    Ok(r)
}

/// Integer points with coordinates in `[-bound, bound]` where `f` and its
/// gradient vanish, one per projective class (coprime entries, first
/// nonzero entry positive). Off by default in [`reduce`].
pub fn search_rational_zeros(f: &RatPoly, bound: u32) -> Result<Vec<ZeroPoint>> {
    let n = f.nvars();
    let side = 2 * bound as u64 + 1;
    if n == 0 || side.checked_pow(n as u32).is_none_or(|c| c > 10_000_000) {
        return Err(Error::InvalidInput(format!("search grid too large for {n} variables and bound {bound}")));
    }
    let grads: Vec<RatPoly> = (0..n).map(|i| f.derivative(i)).collect();
    let b = bound as i64;
    let mut out = Vec::new();
    let mut cur = vec![-b; n];
    loop {
        let lead = cur.iter().find(|&&c| c != 0).copied();
        let g = cur.iter().fold(0i64, |g, &c| num_integer::Integer::gcd(&g, &c));
        if lead.is_some_and(|l| l > 0) && g == 1 {
            let pt: Vec<Rational> = cur.iter().map(|&c| Rational::from_integer(c.into())).collect();
            let vanishes = |p: &RatPoly| p.eval(&pt).map(|v| v == Rational::from_integer(0.into()));
            if vanishes(f)? && grads.iter().map(vanishes).collect::<Result<Vec<_>>>()?.into_iter().all(|x| x) {
                let label = format!("({})", cur.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
                out.push(ZeroPoint::rational(f, &pt, &label)?);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                break;
            }
            cur[i] = -b;
        }
    }
}

/// One line of a zeros file.
#[derive(Clone, Debug)]
pub struct ZeroSpec {
    pub point: ZeroPoint,
    pub mode: Option<ZeroMode>,
}

/// Parses a zeros file: one point per line,
/// `minpoly: <poly in Z> ; coords: <expr in a>, ... [; root: k] [; label: text] [; mode: plain|trace|conjugate]`.
/// The `minpoly` field may be omitted for rational points. Each point is
/// checked to be a real zero of `f`.
pub fn parse_zeros(text: &str, f: &RatPoly) -> Result<Vec<ZeroSpec>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ctx = |e: Error| match e {
            Error::Parse(m) => Error::Parse(format!("line {}: {m}", lineno + 1)),
            other => other,
        };
        let fields = parse_fields(line).map_err(ctx)?;
        let get = |k: &str| fields.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
        for (key, _) in &fields {
            if !["minpoly", "coords", "root", "label", "mode"].contains(&key.as_str()) {
                return Err(ctx(Error::Parse(format!("unknown field {key:?}"))));
            }
        }
        let root: usize = match get("root") {
            Some(r) => r.parse().map_err(|_| ctx(Error::Parse(format!("bad root index {r:?}"))))?,
            None => 0,
        };
        let field = match get("minpoly") {
            Some(m) => {
                let mp = parse_unipoly(m, "Z").map_err(ctx)?;
                if mp.degree().unwrap_or(0) > 64 {
                    return Err(ctx(Error::Parse("defining polynomial degree above 64".into())));
                }
                NumberField::with_root_index("a", mp, root).map_err(ctx)?
            }
            None => NumberField::rational("a"),
        };
        let coords_src = get("coords").ok_or_else(|| ctx(Error::Parse("missing coords".into())))?;
        let coords = coords_src
            .split(',')
            .map(|c| {
                let p = parse_poly_over(c.trim(), &field, &[]).map_err(ctx)?;
                Ok(p.coeff(&crate::arith::Monomial(vec![])))
            })
            .collect::<Result<Vec<_>>>()?;
        let label = get("label").map(str::to_string).unwrap_or_else(|| format!("line {}", lineno + 1));
        let mode = get("mode").map(str::parse).transpose().map_err(ctx)?;
        let point = ZeroPoint::new(f, field, coords, &label)?;
        out.push(ZeroSpec { point, mode });
    }
    Ok(out)
}

fn parse_fields(line: &str) -> Result<Vec<(String, String)>> {
    line.split(';')
        .map(|part| {
            let (k, v) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `key: value`, found {:?}", part.trim())))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}
