mod common;
use common::vars;
use proptest::prelude::*;
use ratsos::arith::{rat, Field, MultiPoly, RatPoly, Rational, Rationals};
use ratsos::cert::{bilinear, charpoly_sign_check, ldl_decompose, ldl_product, verify_certificate, Certificate, LdlOutcome};
use ratsos::gram::{build_pencil, MonomialBasis};
use ratsos::pipeline::{decompose, DecomposeOptions, Outcome};

const NAMES: [&str; 3] = ["x", "y", "z"];

/// `(n, d, terms)` with `terms` indexing the degree-`2d` monomials.
fn form_spec() -> impl Strategy<Value = (usize, u32, Vec<(usize, i64)>)> {
    (1usize..=3, 1u32..=4).prop_flat_map(|(n, d)| {
        let count = MonomialBasis::full(&vars(&NAMES[..n]), 2 * d).len();
        (Just(n), Just(d), proptest::collection::vec((0..count, -20i64..=20), 1..=8))
    })
}

fn build_form(n: usize, d: u32, terms: &[(usize, i64)]) -> RatPoly {
    let v = vars(&NAMES[..n]);
    let monos = MonomialBasis::full(&v, 2 * d).entries;
    let mut f = MultiPoly::zero(&Rationals, &v);
    for &(i, c) in terms {
        f.add_term(monos[i].clone(), &rat(c));
    }
    if f.is_zero() {
        f.add_term(monos[0].clone(), &rat(1));
    }
    f
}

fn symmetric(n: usize, cells: &[i64]) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![rat(0); n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[i][j] = rat(cells[k]);
            m[j][i] = rat(cells[k]);
            k += 1;
        }
    }
    m
}

/// `Bᵀ B` for an `r × n` integer matrix, which is PSD of rank at most `r`.
fn gram_of(n: usize, r: usize, cells: &[i64]) -> Vec<Vec<Rational>> {
    let b: Vec<&[i64]> = cells.chunks(n).take(r).collect();
    (0..n)
        .map(|i| (0..n).map(|j| rat(b.iter().map(|row| row[i] * row[j]).sum())).collect())
        .collect()
}

fn check_ldl(m: &[Vec<Rational>]) -> Result<bool, TestCaseError> {
    let q = Rationals;
    let m = m.to_vec();
    let psd = match ldl_decompose(&q, &m).unwrap() {
        LdlOutcome::Psd(l) => {
            prop_assert_eq!(ldl_product(&q, &l), m.clone());
            prop_assert!(l.d.iter().all(|x| *x >= rat(0)));
            true
        }
        LdlOutcome::NotPsd { witness, value } => {
            prop_assert!(value < rat(0));
            prop_assert_eq!(bilinear(&q, &m, &witness, &witness), value);
            false
        }
    };
    prop_assert_eq!(charpoly_sign_check(&q, &m).unwrap(), psd);
    Ok(psd)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn gram_pencil_round_trip((n, d, terms) in form_spec(), seed in any::<u64>()) {
        let f = build_form(n, d, &terms);
        let p = build_pencil(&f).unwrap();
        let t = p.random_point(seed);
        prop_assert_eq!(p.expand(&t).unwrap(), f.clone());
        prop_assert_eq!(p.expand(&vec![rat(0); p.nparams()]).unwrap(), f);
    }

    #[test]
    fn generic_rank_survives_affine_reparametrization((n, d, terms) in form_spec(), shift in -5i64..=5, seed in any::<u64>()) {
        let f = build_form(n, d, &terms);
        let p = build_pencil(&f).unwrap();
        let k = p.nparams();
        // Unit upper-triangular linear part, so the change is invertible.
        let subst: Vec<Vec<Rational>> = (0..k)
            .map(|i| {
                let mut row = vec![rat(shift * i as i64)];
                row.extend((0..k).map(|j| if j == i { rat(1) } else if j > i { rat((i as i64 + 2 * j as i64) % 5 - 2) } else { rat(0) }));
                row
            })
            .collect();
        let q = p.substitute(&subst).unwrap();
        prop_assert_eq!(q.generic_rank(3, seed), p.generic_rank(3, seed));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ldl_round_trip_and_psd_dichotomy(n in 1usize..=6, cells in proptest::collection::vec(-6i64..=6, 36), r in 0usize..=6) {
        check_ldl(&symmetric(n, &cells))?;
        prop_assert!(check_ldl(&gram_of(n, r, &cells))?);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn certificates_verify_and_survive_serialization(rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 6), 2..=4)) {
        // Σ (row · v)² + Σ vᵢ² over the six quadratic monomials v, which is
        // strictly feasible and leaves six free parameters.
        let v = vars(&NAMES);
        let monos = MonomialBasis::full(&v, 2).entries;
        let quad = |c: &[i64]| MultiPoly::from_terms(&Rationals, &v, c.iter().zip(&monos).map(|(&x, m)| (m.clone(), rat(x))));
        let unit = |i: usize| (0..6).map(|j| i64::from(i == j)).collect::<Vec<_>>();
        let f = rows
            .iter()
            .cloned()
            .chain((0..6).map(unit))
            .fold(MultiPoly::zero(&Rationals, &v), |acc, r| acc.add(&quad(&r).square()));
        let d = decompose(&f, &[], &DecomposeOptions::default()).unwrap();
        let Outcome::Certificate(c) = d.outcome else { return Err(TestCaseError::fail(format!("{:?}", d.outcome))) };
        prop_assert!(verify_certificate(&c, &f).unwrap());
        let back = Certificate::parse(&c.to_text()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert!(verify_certificate(&back, &f).unwrap());
        prop_assert!(c.coefficients.iter().all(|x| Rationals.sign(&x.coords()[0]) == Some(std::cmp::Ordering::Greater)));
    }
}
