mod common;
use common::*;
use ratsos::arith::parse::parse_poly_over;
use ratsos::arith::{rat, Monomial, NumberField, RatPoly};
use ratsos::cert::{charpoly_sign_check, ldl_decompose, LdlOutcome};
use ratsos::facial::*;
use ratsos::pipeline::{certify, decompose, DecomposeOptions, Outcome, Refusal};

fn point(f: &RatPoly, k: &NumberField, coords: &[&str], label: &str) -> ZeroPoint {
    let c = coords
        .iter()
        .map(|s| parse_poly_over(s, k, &[]).unwrap().coeff(&Monomial(vec![])))
        .collect();
    ZeroPoint::new(f, k.clone(), c, label).unwrap()
}

fn rational(f: &RatPoly, c: &[i64]) -> ZeroPoint {
    ZeroPoint::rational(f, &c.iter().map(|&x| rat(x)).collect::<Vec<_>>(), "q").unwrap()
}

#[test]
fn octic_chain_and_certificate() {
    let f = xyz(OCTIC);
    let k = field("a", "648*Z^5-327*Z^4+152*Z^3-921*Z^2-36*Z+36");
    let s3 = point(&f, &k, &["1", "(648*a^4-327*a^3+152*a^2-777*a-36)/60", "a"], "s3");
    let zeros = vec![
        (rational(&f, &[0, 1, 0]), None),
        (rational(&f, &[0, -3, 1]), None),
        (s3.clone(), Some(ZeroMode::Trace)),
        (s3, Some(ZeroMode::Plain)),
    ];
    let mut opts = DecomposeOptions::default();
    opts.reduce.force_rational = true;
    let d = decompose(&f, &zeros, &opts).unwrap();
    assert_eq!(d.log.chain(), vec![(75, 15), (39, 12), (23, 10), (16, 9), (4, 6)]);
    let Outcome::Certificate(c) = d.outcome else { panic!("{:?}", d.outcome) };
    assert_eq!(c.len(), 6);
    assert!(c.is_rational());
    let m: Vec<Vec<_>> = c.gram.iter().map(|r| r.iter().map(|x| x.coords()[0].clone()).collect()).collect();
    let LdlOutcome::Psd(l) = ldl_decompose(&ratsos::arith::Rationals, &m).unwrap() else { panic!() };
    assert_eq!(l.d.iter().filter(|x| **x == rat(0)).count(), 9);
    assert!(charpoly_sign_check(&ratsos::arith::Rationals, &m).unwrap());
}

#[test]
fn sextic_chain() {
    let f = xyzw(SEXTIC);
    let b3: Vec<ZeroPoint> = [(1, 1), (1, 0), (0, 1), (-1, 1)].iter().map(|&(s, t)| rational(&f, &[0, s, 0, t])).collect();
    let b1: Vec<ZeroPoint> = [("4*Z^2-21*Z+5", "1"), ("4*Z^2-21*Z-139", "2"), ("4*Z^2-21*Z-267", "3")]
        .iter()
        .map(|(m, t)| point(&f, &field("a", m), &["1", "a/2", "-1/4", t], "b1"))
        .collect();
    let b2 = point(&f, &field("a", "Z^2-13"), &["0", "-3", "1", "a"], "b2");
    let mut r = Reducer::new(&f, 3, 0).unwrap();
    r.zeros(&b3, ZeroMode::Plain, "branch 3").unwrap();
    r.ghosts(true, "ghosts");
    r.zeros(&b1, ZeroMode::Trace, "branch 1").unwrap();
    r.zeros(&[b2], ZeroMode::Conjugate, "branch 2").unwrap();
    r.ghosts(false, "ghosts");
    assert_eq!(r.log().chain(), vec![(126, 20), (71, 16), (29, 12), (8, 9), (6, 8), (3, 7)]);
}

#[test]
fn motzkin_unique_solution_is_not_psd() {
    let f = xyz(MOTZKIN);
    let zeros: Vec<_> = [[1, 1, 1], [1, -1, 1], [-1, 1, 1], [-1, -1, 1], [1, 0, 0], [0, 1, 0]]
        .iter()
        .map(|c| (rational(&f, c), None))
        .collect();
    let d = decompose(&f, &zeros, &DecomposeOptions::default()).unwrap();
    assert_eq!(d.log.chain().last(), Some(&(0, 4)));
    assert!(d.unique);
    let Outcome::Refused { reason, witness, .. } = d.outcome else { panic!() };
    assert_eq!(reason, Refusal::NotPsdUniqueSolution);
    assert!(witness.is_some());
}

#[test]
fn scheiderer_unique_solution_is_not_psd() {
    let f = xyz(SCHEIDERER);
    let k = field("a", "Z^6-Z^4-Z^3-Z^2+1");
    let z = point(&f, &k, &["a", "a^4-a-1", "1"], "z");
    let d = decompose(&f, &[(z, None)], &DecomposeOptions::default()).unwrap();
    assert_eq!(d.log.chain().last(), Some(&(0, 5)));
    let Outcome::Refused { reason, .. } = d.outcome else { panic!() };
    assert_eq!(reason, Refusal::NotPsdUniqueSolution);
}

#[test]
fn ternary_quartic_plain_path_is_not_strictly_feasible() {
    let f = xyz(TERNARY_QUARTIC);
    let k = field("a", "50*Z^4+28*Z^3-Z^2+23*Z-8");
    let z = point(&f, &k, &["1", "a", "(50*a^3+128*a^2+25*a+73)/46"], "s(1)");
    let mut r = Reducer::new(&f, 3, 0).unwrap();
    r.zeros(&[z], ZeroMode::Plain, "plain").unwrap();
    assert_eq!(r.log().chain(), vec![(6, 6), (3, 5)]);
    let Some(Pencil::Algebraic(p)) = r.pencil() else { panic!() };
    let d = certify(p, &DecomposeOptions::default()).unwrap();
    let Outcome::Refused { reason, .. } = d.outcome else { panic!("{:?}", d.outcome) };
    assert_eq!(reason, Refusal::SolverBoundary);
    assert!(d.sdp.unwrap().min_eigenvalue.abs() < 1e-6);
}
