//! Exact arithmetic: rationals, number fields, polynomials.

pub mod field;
pub mod number_field;
pub mod parse;
pub mod poly;
pub mod resultant;
pub mod univariate;

pub use field::{f64_to_rational, fmt_rational, parse_rational, rat, ratio, rational_to_f64, Field, Rational, Rationals};
pub use number_field::{real_root_count, AlgebraicNumber, NumberField};
pub use poly::{Monomial, MultiPoly, RatPoly};
pub use resultant::{mv_gcd, resultant_in};
pub use univariate::{SturmChain, UniPoly};
