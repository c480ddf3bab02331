//! Resultants and gcds in `K[x₁, …, xₙ]`.

use super::field::Field;
use super::poly::{Monomial, MultiPoly};
use crate::error::{Error, Result};

/// Determinant of a square matrix over `K[x]` by fraction-free (Bareiss)
/// elimination; every division is exact.
pub fn poly_det<F: Field>(mut m: Vec<Vec<MultiPoly<F>>>, field: &F, vars: &[String]) -> MultiPoly<F> {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one(field, vars);
    }
    let mut negate = false;
    let mut prev = MultiPoly::one(field, vars);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return MultiPoly::zero(field, vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = if k == 0 {
                    num
                } else {
                    num.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Resultant of `p` and `q` with respect to the named variable, computed as
/// the Sylvester determinant: `Res(p, q) = lc(p)^{deg q} · Π q(ρ)` over the
/// roots `ρ` of `p`.
pub fn resultant_in<F: Field>(p: &MultiPoly<F>, q: &MultiPoly<F>, var: &str) -> Result<MultiPoly<F>> {
    let v = p
        .var_index(var)
        .ok_or_else(|| Error::InvalidInput(format!("unknown variable {var}")))?;
    if p.vars() != q.vars() {
        return Err(Error::InvalidInput("resultant operands use different variables".into()));
    }
    if p.is_zero() || q.is_zero() {
        return Err(Error::InvalidInput("resultant of a zero polynomial".into()));
    }
    let (dp, dq) = (p.degree_in(v) as usize, q.degree_in(v) as usize);
    if dp == 0 && dq == 0 {
        return Err(Error::InvalidInput(format!(
            "resultant is degenerate: neither operand involves {var}"
        )));
    }
    let field = p.field().clone();
    let vars = p.vars().to_vec();
    let pc = p.coeffs_in(v);
    let qc = q.coeffs_in(v);
    let n = dp + dq;
    let zero = MultiPoly::zero(&field, &vars);
    let mut m = vec![vec![zero; n]; n];
    for i in 0..dq {
        for (k, c) in pc.iter().enumerate() {
            m[i][i + dp - k] = c.clone();
        }
    }
    for i in 0..dp {
        for (k, c) in qc.iter().enumerate() {
            m[dq + i][i + dq - k] = c.clone();
        }
    }
    Ok(poly_det(m, &field, &vars))
}

/// Monic gcd of two polynomials (leading coefficient one under the graded
/// lexicographic order). Computed recursively: content and primitive part
/// with respect to the first occurring variable, then a primitive
/// pseudo-remainder sequence.
pub fn mv_gcd<F: Field>(p: &MultiPoly<F>, q: &MultiPoly<F>) -> Result<MultiPoly<F>> {
    if p.vars() != q.vars() {
        return Err(Error::InvalidInput("gcd operands use different variables".into()));
    }
    if p.is_zero() && q.is_zero() {
        return Err(Error::InvalidInput("gcd(0, 0) is undefined".into()));
    }
    Ok(gcd_rec(p, q).monic())
}

fn gcd_rec<F: Field>(p: &MultiPoly<F>, q: &MultiPoly<F>) -> MultiPoly<F> {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    let main = (0..p.nvars()).find(|&i| p.degree_in(i) > 0 || q.degree_in(i) > 0);
    let Some(v) = main else {
        return MultiPoly::one(p.field(), p.vars());
    };
    if p.degree_in(v) == 0 {
        return gcd_rec(p, &content(q, v));
    }
    if q.degree_in(v) == 0 {
        return gcd_rec(&content(p, v), q);
    }
    let cp = content(p, v);
    let cq = content(q, v);
    let pp = p.div_exact(&cp).expect("content divides");
    let qp = q.div_exact(&cq).expect("content divides");
    let c = gcd_rec(&cp, &cq);
    let g = primitive_prs(pp, qp, v);
    c.mul(&g).monic()
}

/// Gcd of the coefficients with respect to `v`, monic.
fn content<F: Field>(p: &MultiPoly<F>, v: usize) -> MultiPoly<F> {
    let mut g = MultiPoly::zero(p.field(), p.vars());
    for c in p.coeffs_in(v).iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, c);
        if g.is_constant() {
            return MultiPoly::one(p.field(), p.vars());
        }
    }
    g.monic()
}

fn primitive_part<F: Field>(p: &MultiPoly<F>, v: usize) -> MultiPoly<F> {
    let c = content(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
fn prem<F: Field>(a: &MultiPoly<F>, b: &MultiPoly<F>, v: usize) -> MultiPoly<F> {
    let db = b.degree_in(v);
    let lcb = b.coeffs_in(v).pop().expect("nonzero");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = r.coeffs_in(v).pop().expect("nonzero");
        let shift = Monomial::var(r.nvars(), v, dr - db);
        let one = r.field().one();
        r = lcb.mul(&r).sub(&lcr.mul(&b.mul_term(&shift, &one)));
    }
    r
}

fn primitive_prs<F: Field>(a: MultiPoly<F>, b: MultiPoly<F>, v: usize) -> MultiPoly<F> {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return primitive_part(&b, v);
        }
        if r.degree_in(v) == 0 {
            return MultiPoly::one(a.field(), a.vars());
        }
        a = b;
        b = primitive_part(&r, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{rat, Rationals};
    use crate::arith::number_field::NumberField;
    use crate::arith::poly::RatPoly;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn resultant_examples() {
        let v = vars(&["Z", "t", "u"]);
        let z = RatPoly::var(&Rationals, &v, 0);
        let t = RatPoly::var(&Rationals, &v, 1);
        let u = RatPoly::var(&Rationals, &v, 2);
        let two = RatPoly::constant(&Rationals, &v, rat(2));
        let cube = z.pow(3).sub(&two);
        assert_eq!(resultant_in(&cube, &z, "Z").unwrap(), two);
        assert_eq!(resultant_in(&z, &cube, "Z").unwrap(), two.neg());
        let r = resultant_in(&z.square().sub(&t), &z.sub(&u), "Z").unwrap();
        assert_eq!(r, u.square().sub(&t));
        assert!(resultant_in(&t, &u, "Z").is_err());
    }

    #[test]
    fn resultant_against_shifted_generator() {
        // Res_Z(Z^3 - 2, Z - w) = prod(rho - w) = -(w^3 - 2) over Q(i).
        let g = NumberField::gaussian("I");
        let v = vars(&["x", "y", "Z"]);
        let x = MultiPoly::var(&g, &v, 0);
        let y = MultiPoly::var(&g, &v, 1);
        let z = MultiPoly::var(&g, &v, 2);
        let two = MultiPoly::constant(&g, &v, g.from_int(2));
        let w = x.add(&y.scale(&g.generator()));
        let r = resultant_in(&z.pow(3).sub(&two), &z.sub(&w), "Z").unwrap();
        assert_eq!(r, w.pow(3).sub(&two).neg());
        let r = resultant_in(&z.sub(&w), &z.pow(3).sub(&two), "Z").unwrap();
        assert_eq!(r, w.pow(3).sub(&two));
    }

    #[test]
    fn gcd_examples() {
        let v = vars(&["x", "y"]);
        let x = RatPoly::var(&Rationals, &v, 0);
        let y = RatPoly::var(&Rationals, &v, 1);
        let a = x.square().sub(&y.square());
        assert_eq!(mv_gcd(&a, &x.sub(&y)).unwrap(), x.sub(&y));
        let zero = RatPoly::zero(&Rationals, &v);
        assert_eq!(mv_gcd(&a.scale_rational(&rat(3)), &zero).unwrap(), a);
        assert!(mv_gcd(&zero, &zero).is_err());

        let g = NumberField::gaussian("I");
        let xi = MultiPoly::var(&g, &v, 0);
        let yi = MultiPoly::var(&g, &v, 1);
        let h = xi.add(&yi.scale(&g.generator()));
        let hb = xi.sub(&yi.scale(&g.generator()));
        assert_eq!(mv_gcd(&h.pow(3), &h.mul(&hb)).unwrap(), h);
    }
}
