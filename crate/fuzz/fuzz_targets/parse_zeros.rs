#![no_main]

use libfuzzer_sys::fuzz_target;
use ratsos::arith::parse::parse_poly;
use ratsos::facial::parse_zeros;

fuzz_target!(|data: &str| {
    let f = parse_poly("x^4*y^2 + x^2*y^4 - 3*x^2*y^2*z^2 + z^6").unwrap();
    let _ = parse_zeros(data, &f);
});
