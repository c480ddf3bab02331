mod common;
use common::*;
use proptest::prelude::*;
use ratsos::arith::parse::{parse_poly_over, parse_poly_with_vars};
use ratsos::arith::{rat, Field, MultiPoly, RatPoly, Rational, Rationals};
use ratsos::cert::{verify_certificate, Certificate};
use ratsos::descent::*;
use ratsos::gram::MonomialBasis;

fn same_up_to_sign(a: &RatPoly, b: &RatPoly) -> bool {
    a == b || *a == b.neg()
}

#[test]
fn conjugate_product_and_descent() {
    let k = field("a", "Z^3-2");
    let v = vars(&["x", "y", "z"]);
    let p1 = parse_poly_over(TWO_SQUARES_P1, &k, &v).unwrap();
    let p2 = parse_poly_over(TWO_SQUARES_P2, &k, &v).unwrap();
    let (big1, big2) = conjugate_product(&p1, &p2).unwrap();
    assert_eq!(big1, xyz(CONJ_P1));
    assert_eq!(big2, xyz(CONJ_P2));
    let f = xyz(TWO_SQUARES_F);
    assert_eq!(big1.square().add(&big2.square()), f.pow(3));
    let Descent::Complete { q1, q2 } = two_square_descent(&f, &big1, &big2, 3, 32).unwrap() else { panic!() };
    let (e1, e2) = (xyz(TWO_SQUARES_Q1), xyz(TWO_SQUARES_Q2));
    assert!(
        (same_up_to_sign(&q1, &e1) && same_up_to_sign(&q2, &e2)) || (same_up_to_sign(&q1, &e2) && same_up_to_sign(&q2, &e1))
    );
    let one = ratsos::arith::NumberField::rational("a");
    let lift = |p: &RatPoly| ratsos::arith::parse::embed_rational(p, &one);
    let cert = Certificate::from_squares(
        one.clone(),
        MonomialBasis::full(&v, 3),
        vec![one.from_int(1), one.from_int(1)],
        vec![lift(&q1), lift(&q2)],
    )
    .unwrap();
    assert!(verify_certificate(&cert, &f).unwrap());
}

#[test]
fn generator_reproduces_the_sextic() {
    let v = vars(&["x", "y", "z", "w"]);
    let p = |s: &str| -> RatPoly { parse_poly_with_vars(s, &v).unwrap() };
    let t = gen_three_squares(&p("21*z"), &p("x"), &p("3*x"), &p("y"), &p("z"), &p("x+7*z"), &p("w")).unwrap();
    // The printed form is (2Δ)²·Σ pᵢ² = 4·f.
    assert_eq!(t.f.scale_rational(&rat(4)), xyzw(SEXTIC));
    let k = &t.field;
    let sum = t.squares.iter().fold(MultiPoly::zero(k, &v), |acc, q| acc.add(&q.square()));
    assert_eq!(rational_part(&sum), Some(t.f.clone()));
}

fn small_linear_form() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-5i64..=5, 3)
}

fn linear(c: &[i64]) -> RatPoly {
    let v = vars(&["x", "y", "z"]);
    MultiPoly::from_terms(
        &Rationals,
        &v,
        c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (ratsos::arith::Monomial::var(3, i, 1), Rational::from_integer(x.into()))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn generator_output_is_rational(forms in proptest::collection::vec(small_linear_form(), 7)) {
        let l: Vec<RatPoly> = forms.iter().map(|c| linear(c)).collect();
        match gen_three_squares(&l[0], &l[1], &l[2], &l[3], &l[4], &l[5], &l[6]) {
            Ok(t) => {
                let sum = t.squares.iter().fold(MultiPoly::zero(&t.field, t.f.vars()), |acc, q| acc.add(&q.square()));
                prop_assert_eq!(rational_part(&sum), Some(t.f.clone()));
                for q in &t.squares {
                    prop_assert_eq!(q.field().degree(), 3);
                }
            }
            Err(_) => prop_assert!(l[1].mul(&l[5]).sub(&l[2].mul(&l[4])).is_zero()),
        }
    }
}
