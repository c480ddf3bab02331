//! Dense exact linear algebra over a [`Field`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{Field, Rational};

pub type Matrix<E> = Vec<Vec<E>>;

/// Row echelon data: the reduced matrix and its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<E> {
    pub rows: Matrix<E>,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form, considering only the first `ncols` columns as
/// pivot candidates (trailing columns are carried along).
pub fn rref<F: Field>(field: &F, mut m: Matrix<F::Elem>, ncols: usize) -> Rref<F::Elem> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !field.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.retain(|row| row.iter().any(|x| !field.is_zero(x)));
    Rref { rows: m, pivots }
}

/// Exact rank.
pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let ncols = m.first().map_or(0, |r| r.len());
    rref(field, m.clone(), ncols).pivots.len()
}

/// Exact rank through the regular representation over ℚ: each entry becomes
/// its `d × d` multiplication matrix, rows are cleared of denominators and
/// the integer matrix is reduced fraction-free. Much faster than elimination
/// in ℚ(α) directly.
pub fn rank_fraction_free<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let d = field.degree();
    let basis: Vec<F::Elem> = (0..d)
        .map(|k| {
            let mut c = vec![Rational::zero(); d];
            c[k] = Rational::one();
            field.from_coords(&c)
        })
        .collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(m.len() * d);
    for row in m {
        // Row block: entry (i, j) contributes coords(a_ij * α^k) in column j*d + k.
        let images: Vec<Vec<Vec<Rational>>> = row
            .iter()
            .map(|a| {
                if field.is_zero(a) {
                    vec![vec![Rational::zero(); d]; d]
                } else {
                    basis.iter().map(|b| field.coords(&field.mul(a, b))).collect()
                }
            })
            .collect();
        for r in 0..d {
            let q: Vec<Rational> = (0..ncols)
                .flat_map(|j| (0..d).map(move |k| (j, k)))
                .map(|(j, k)| images[j][k][r].clone())
                .collect();
            rows.push(clear_denominators(&q));
        }
    }
    integer_rank(rows) / d
}

fn clear_denominators(q: &[Rational]) -> Vec<BigInt> {
    let l = q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    q.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Rank of an integer matrix by Bareiss elimination; all divisions exact.
pub fn integer_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let piv = &top[r];
        for row in rest.iter_mut() {
            for j in c + 1..ncols {
                let v = &row[j] * &piv[c] - &row[c] * &piv[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Column indices of a maximal independent column set, in increasing order.
pub fn pivot_columns<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<usize> {
    let ncols = m.first().map_or(0, |r| r.len());
    rref(field, m.clone(), ncols).pivots
}

/// Determinant by Gaussian elimination.
pub fn det<F: Field>(field: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    let mut a = m.clone();
    let mut d = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !field.is_zero(&a[i][c])) else {
            return field.zero();
        };
        if p != c {
            a.swap(p, c);
            d = field.neg(&d);
        }
        d = field.mul(&d, &a[c][c]);
        let inv = field.inv(&a[c][c]).expect("nonzero pivot");
        for i in c + 1..n {
            if field.is_zero(&a[i][c]) {
                continue;
            }
            let f = field.mul(&a[i][c], &inv);
            for j in c..n {
                let t = field.mul(&f, &a[c][j]);
                a[i][j] = field.sub(&a[i][j], &t);
            }
        }
    }
    d
}

/// Solution set of affine equations `c + Σ aᵢ tᵢ = 0`, each given as
/// `[c, a₁, …, a_k]`.
///
/// Returns `None` when inconsistent. Otherwise returns, for every original
/// unknown, an affine expression `[c, b₁, …, b_r]` in the `r` remaining free
/// unknowns (which keep their relative order).
pub fn solve_affine<F: Field>(field: &F, eqs: &[Vec<F::Elem>], k: usize) -> Option<Vec<Vec<F::Elem>>> {
    // Columns: t₁..t_k, then constant, so pivots never land on the constant.
    let m: Matrix<F::Elem> = eqs
        .iter()
        .filter(|e| e.iter().any(|x| !field.is_zero(x)))
        .map(|e| {
            let mut row: Vec<F::Elem> = e[1..].to_vec();
            row.push(e[0].clone());
            row
        })
        .collect();
    let red = rref(field, m, k);
    if red.rows.len() > red.pivots.len() {
        return None;
    }
    let free: Vec<usize> = (0..k).filter(|c| !red.pivots.contains(c)).collect();
    let r = free.len();
    let mut out = vec![vec![field.zero(); r + 1]; k];
    for (fi, &c) in free.iter().enumerate() {
        out[c][fi + 1] = field.one();
    }
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        // t_p = -const - Σ row[free] t_free
        let e = &mut out[p];
        e[0] = field.neg(&row[k]);
        for (fi, &c) in free.iter().enumerate() {
            e[fi + 1] = field.neg(&row[c]);
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Rational, Rationals};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn rank_and_det() {
        let a = m(&[&[10, 1, 0], &[1, 27, -12], &[0, -12, 5]]);
        assert_eq!(det(&Rationals, &a), rat(-95));
        assert_eq!(rank(&Rationals, &a), 3);
        let b = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&Rationals, &b), 1);
        assert_eq!(pivot_columns(&Rationals, &b), vec![0]);
        assert_eq!(rank_fraction_free(&Rationals, &a), 3);
        assert_eq!(rank_fraction_free(&Rationals, &b), 1);
        let z = m(&[&[0, 0, 1], &[0, 0, 2], &[1, 3, 0]]);
        assert_eq!(rank_fraction_free(&Rationals, &z), 2);
    }

    #[test]
    fn affine_solve() {
        // t1 + t2 = 0, 2 t1 + t2 = 0 over three unknowns.
        let eqs = m(&[&[0, 1, 1, 0], &[0, 2, 1, 0]]);
        let s = solve_affine(&Rationals, &eqs, 3).unwrap();
        assert_eq!(s, m(&[&[0, 0], &[0, 0], &[0, 1]]));
        // 1 + t1 = 0, t1 = 0 is inconsistent.
        assert!(solve_affine(&Rationals, &m(&[&[1, 1], &[0, 1]]), 1).is_none());
        assert_eq!(solve_affine(&Rationals, &[], 1).unwrap(), m(&[&[0, 1]]));
    }
}
