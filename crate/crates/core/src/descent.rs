//! Sums of two squares from odd-degree extensions, and a generator of
//! rational forms that are sums of three squares over ℚ(∛2).

use log::debug;
use num_traits::{One, Zero};

use crate::arith::parse::embed_rational;
use crate::arith::{mv_gcd, resultant_in, AlgebraicNumber, Field, Monomial, MultiPoly, NumberField, RatPoly, Rational, Rationals};
use crate::{Error, Result};

type GaussPoly = MultiPoly<NumberField>;

fn gaussian() -> NumberField {
    NumberField::gaussian("I")
}

/// `re + I·im` over ℚ(i).
fn to_gaussian(k: &NumberField, re: &RatPoly, im: &RatPoly) -> GaussPoly {
    let i = k.generator();
    embed_rational(re, k).add(&embed_rational(im, k).scale(&i))
}

/// Real and imaginary parts of a polynomial over ℚ(i).
fn split_gaussian(p: &GaussPoly) -> (RatPoly, RatPoly) {
    let re = p.map_field(&Rationals, |c| c.coords()[0].clone());
    let im = p.map_field(&Rationals, |c| c.coords()[1].clone());
    (re, im)
}

fn conjugate(k: &NumberField, p: &GaussPoly) -> GaussPoly {
    p.map_field(k, |c| k.from_coords(&[c.coords()[0].clone(), -c.coords()[1].clone()]))
}

/// Rational polynomial of `p` whose coefficients lie in ℚ, else `None`.
pub fn rational_part(p: &MultiPoly<NumberField>) -> Option<RatPoly> {
    let k = p.field();
    let mut out = MultiPoly::zero(&Rationals, p.vars());
    for (m, c) in p.terms() {
        out.add_term(m.clone(), &k.as_rational(c)?);
    }
    Some(out)
}

/// `∏ σ(p₁ + I·p₂)` over the embeddings σ of ℚ(α), returned as `(P₁, P₂)`
/// with `f^d = P₁² + P₂²` for `f = p₁² + p₂²` and `d = [ℚ(α):ℚ]` odd. The
/// product is the resultant in `Z` of the defining polynomial against
/// `p₁ + I·p₂` with `α` replaced by `Z`.
pub fn conjugate_product(p1: &MultiPoly<NumberField>, p2: &MultiPoly<NumberField>) -> Result<(RatPoly, RatPoly)> {
    let k = p1.field().clone();
    if *p2.field() != k || p1.vars() != p2.vars() {
        return Err(Error::InvalidInput("p1 and p2 must share field and variables".into()));
    }
    let d = k.degree();
    if d.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("field degree {d} is even")));
    }
    let f = rational_part(&p1.square().add(&p2.square()))
        .ok_or_else(|| Error::NotRational("p1² + p2² has irrational coefficients".into()))?;
    let (big1, big2) = if d == 1 {
        (rational_part(p1).expect("degree one"), rational_part(p2).expect("degree one"))
    } else {
        let g = gaussian();
        let mut vars = p1.vars().to_vec();
        let z = fresh_name(&vars);
        vars.push(z.clone());
        let nv = vars.len();
        let lift = |p: &MultiPoly<NumberField>, unit: &AlgebraicNumber| -> GaussPoly {
            let mut out = MultiPoly::zero(&g, &vars);
            for (m, c) in p.terms() {
                for (j, q) in c.coords().iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    let mut e = m.0.clone();
                    e.push(j as u32);
                    out.add_term(Monomial(e), &g.scale(unit, q));
                }
            }
            out
        };
        let gz = lift(p1, &g.one()).add(&lift(p2, &g.generator()));
        let mp = k.minpoly();
        let mz = MultiPoly::from_terms(
            &g,
            &vars,
            mp.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (Monomial::var(nv, nv - 1, j as u32), g.from_rational(c))),
        );
        let deg_z = gz.degree_in(nv - 1);
        let prod = if deg_z == 0 {
            gz.pow(d as u32)
        } else {
            // Res(m, G) = lc(m)^{deg G} · ∏ G(αᵢ).
            let res = resultant_in(&mz, &gz, &z)?;
            let lc = mp.leading();
            let mut norm = Rational::one();
            for _ in 0..deg_z {
                norm *= &lc;
            }
            res.scale_rational(&(Rational::one() / norm))
        };
        let prod = prod.drop_unused_vars(p1.vars()).with_vars(p1.vars())?;
        split_gaussian(&prod)
    };
    let fd = f.pow(d as u32);
    if big1.square().add(&big2.square()) != fd {
        return Err(Error::Numerical("conjugate product check f^d = P1² + P2² failed".into()));
    }
    Ok((big1, big2))
}

fn fresh_name(vars: &[String]) -> String {
    let mut name = "Z".to_string();
    while vars.contains(&name) {
        name.push('_');
    }
    name
}

/// Result of the two-squares descent.
#[derive(Clone, Debug, PartialEq)]
pub enum Descent {
    /// `f = q₁² + q₂²`.
    Complete { q1: RatPoly, q2: RatPoly },
    /// Only `f = (P₁/f^k)² + (P₂/f^k)²` is known.
    Incomplete { p1: RatPoly, p2: RatPoly, power: u32 },
}

/// From `f^d = P₁² + P₂²` with `d` odd, finds `f = q₁² + q₂²` by factor
/// extraction in ℚ(i)[x]. `max_depth` bounds the number of gcd extractions.
pub fn two_square_descent(f: &RatPoly, p1: &RatPoly, p2: &RatPoly, d: u32, max_depth: usize) -> Result<Descent> {
    if d.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("exponent {d} is even")));
    }
    if p1.vars() != f.vars() || p2.vars() != f.vars() {
        return Err(Error::InvalidInput("f, P1, P2 must share variables".into()));
    }
    if p1.square().add(&p2.square()) != f.pow(d) {
        return Err(Error::InvalidInput("f^d differs from P1² + P2²".into()));
    }
    let power = (d - 1) / 2;
    let incomplete = || Descent::Incomplete { p1: p1.clone(), p2: p2.clone(), power };
    if f.is_zero() {
        return Ok(Descent::Complete { q1: f.clone(), q2: f.clone() });
    }
    let fk = f.pow(power);
    if let (Some(q1), Some(q2)) = (p1.div_exact(&fk), p2.div_exact(&fk)) {
        debug!("descent: fast path");
        return Ok(Descent::Complete { q1, q2 });
    }
    if max_depth < 3 {
        return Ok(incomplete());
    }
    let k = gaussian();
    let g = to_gaussian(&k, p1, p2);
    let gbar = conjugate(&k, &g);
    let fg = embed_rational(f, &k);
    let c = mv_gcd(&g, &gbar)?;
    let Some(g1) = g.div_exact(&c) else { return Ok(incomplete()) };
    let h1 = mv_gcd(&g1, &fg)?;
    let Some(r) = fg.div_exact(&h1.mul(&conjugate(&k, &h1))) else { return Ok(incomplete()) };
    let Some(s) = sqrt_exact(&r.monic()) else {
        debug!("descent: cofactor is not a square");
        return Ok(incomplete());
    };
    let h0 = h1.mul(&s);
    let (Some((_, lg)), Some((_, lf)), Some((_, lh))) = (g.leading(), fg.leading(), h0.leading()) else {
        return Ok(incomplete());
    };
    let scale = k.mul(&k.pow(lf, power), lh);
    let lambda = k.div(lg, &scale).expect("nonzero leading coefficient");
    let h = h0.scale(&lambda);
    let (q1, q2) = split_gaussian(&h);
    if q1.square().add(&q2.square()) != *f {
        return Ok(incomplete());
    }
    Ok(Descent::Complete { q1, q2 })
}

/// Square root of a polynomial with leading coefficient one, if exact.
pub fn sqrt_exact<F: Field>(p: &MultiPoly<F>) -> Option<MultiPoly<F>> {
    let field = p.field();
    let (lm, lc) = p.leading()?;
    if !field.is_one(lc) || lm.0.iter().any(|e| e % 2 == 1) {
        return None;
    }
    let mut s = MultiPoly::term(field, p.vars(), Monomial(lm.0.iter().map(|e| e / 2).collect()), field.one());
    let (slm, _) = s.leading().map(|(m, c)| (m.clone(), c.clone()))?;
    let two_inv = field.inv(&field.from_int(2))?;
    loop {
        let r = p.sub(&s.square());
        let Some((rm, rc)) = r.leading() else { return Some(s) };
        let tm = rm.div(&slm)?;
        if tm >= slm {
            return None;
        }
        s.add_term(tm, &field.mul(rc, &two_inv));
    }
}

/// Output of [`gen_three_squares`]: `f = p₁² + p₂² + p₃²` over ℚ(∛2) with
/// `f` rational, after clearing the denominator `Δ = b₁c₂ − b₂c₁`.
#[derive(Clone, Debug)]
pub struct ThreeSquares {
    pub field: NumberField,
    pub delta: RatPoly,
    /// `a₁ = a1_num / Δ`, `a₂ = a2_num / Δ`.
    pub a1_num: RatPoly,
    pub a2_num: RatPoly,
    pub f: RatPoly,
    pub squares: [MultiPoly<NumberField>; 3],
}

/// With `pᵢ = aᵢ + bᵢα + cᵢα²` and `α³ = 2`, the α and α² components of
/// `Σ pᵢ²` are `B = Σ 2aᵢbᵢ + 2cᵢ²` and `C = Σ 2aᵢcᵢ + bᵢ²`. Solves
/// `B = C = 0` for `a₁, a₂` and returns `Δ·pᵢ` and `f = Δ²·Σ pᵢ²`.
#[allow(clippy::too_many_arguments)]
pub fn gen_three_squares(a3: &RatPoly, b1: &RatPoly, b2: &RatPoly, b3: &RatPoly, c1: &RatPoly, c2: &RatPoly, c3: &RatPoly) -> Result<ThreeSquares> {
    let vars = a3.vars().to_vec();
    if [b1, b2, b3, c1, c2, c3].iter().any(|p| p.vars() != vars.as_slice()) {
        return Err(Error::InvalidInput("all inputs must share variables".into()));
    }
    let delta = b1.mul(c2).sub(&b2.mul(c1));
    if delta.is_zero() {
        return Err(Error::InvalidInput("b1·c2 − b2·c1 vanishes".into()));
    }
    let half = Rational::new(1.into(), 2.into());
    // a₁b₁ + a₂b₂ = −β, a₁c₁ + a₂c₂ = −γ
    let beta = a3.mul(b3).add(&c1.square()).add(&c2.square()).add(&c3.square());
    let gamma = a3.mul(c3).add(&b1.square().add(&b2.square()).add(&b3.square()).scale_rational(&half));
    let a1_num = gamma.mul(b2).sub(&beta.mul(c2));
    let a2_num = beta.mul(c1).sub(&gamma.mul(b1));
    let k = NumberField::new("a", crate::arith::UniPoly::from_ints(&[-2, 0, 0, 1]))?;
    let alpha = k.generator();
    let alpha2 = k.mul(&alpha, &alpha);
    let lift = |a: &RatPoly, b: &RatPoly, c: &RatPoly| -> MultiPoly<NumberField> {
        embed_rational(a, &k)
            .add(&embed_rational(&delta.mul(b), &k).scale(&alpha))
            .add(&embed_rational(&delta.mul(c), &k).scale(&alpha2))
    };
    let squares = [lift(&a1_num, b1, c1), lift(&a2_num, b2, c2), lift(&delta.mul(a3), b3, c3)];
    let total = squares[0].square().add(&squares[1].square()).add(&squares[2].square());
    let f = rational_part(&total)
        .ok_or_else(|| Error::Numerical("α-components of the sum of squares do not vanish".into()))?;
    Ok(ThreeSquares { field: k, delta, a1_num, a2_num, f, squares })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::{parse_poly_over, parse_poly_with_vars, parse_unipoly};
    use crate::arith::rat;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn cube_of_gaussian_linear_form() {
        let k = NumberField::new("a", parse_unipoly("Z^3-2", "Z").unwrap()).unwrap();
        let p1 = parse_poly_over("x", &k, &xy()).unwrap();
        let p2 = parse_poly_over("y", &k, &xy()).unwrap();
        let (a, b) = conjugate_product(&p1, &p2).unwrap();
        assert_eq!(a, parse_poly_with_vars("x^3-3*x*y^2", &xy()).unwrap());
        assert_eq!(b, parse_poly_with_vars("3*x^2*y-y^3", &xy()).unwrap());
    }

    #[test]
    fn descent_by_gcd_extraction() {
        let f = parse_poly_with_vars("x^2+y^2", &xy()).unwrap();
        let p1 = parse_poly_with_vars("x^3-3*x*y^2", &xy()).unwrap();
        let p2 = parse_poly_with_vars("3*x^2*y-y^3", &xy()).unwrap();
        let Descent::Complete { q1, q2 } = two_square_descent(&f, &p1, &p2, 3, 32).unwrap() else { panic!() };
        assert_eq!(q1.square().add(&q2.square()), f);
        let x = parse_poly_with_vars("x", &xy()).unwrap();
        let y = parse_poly_with_vars("y", &xy()).unwrap();
        assert!((q1 == x || q1 == x.neg()) && (q2 == y || q2 == y.neg()));
    }

    #[test]
    fn descent_degree_one_is_identity() {
        let f = parse_poly_with_vars("x^2+4*y^2", &xy()).unwrap();
        let p1 = parse_poly_with_vars("x", &xy()).unwrap();
        let p2 = parse_poly_with_vars("2*y", &xy()).unwrap();
        assert_eq!(two_square_descent(&f, &p1, &p2, 1, 32).unwrap(), Descent::Complete { q1: p1, q2: p2 });
    }

    #[test]
    fn square_roots() {
        let p = parse_poly_with_vars("x^2+2*x*y+y^2", &xy()).unwrap();
        assert_eq!(sqrt_exact(&p), Some(parse_poly_with_vars("x+y", &xy()).unwrap()));
        assert_eq!(sqrt_exact(&parse_poly_with_vars("x^2+y^2", &xy()).unwrap()), None);
    }

    #[test]
    fn constant_three_squares() {
        let c = |n: i64| MultiPoly::constant(&Rationals, &xy(), rat(n));
        let t = gen_three_squares(&c(0), &c(1), &c(0), &c(0), &c(0), &c(1), &c(0)).unwrap();
        assert_eq!(t.f, MultiPoly::constant(&Rationals, &xy(), Rational::new(5.into(), 4.into())));
        assert_eq!(t.a1_num, c(-1));
        assert_eq!(t.a2_num, MultiPoly::constant(&Rationals, &xy(), Rational::new((-1).into(), 2.into())));
    }
}
