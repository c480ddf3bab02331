#![no_main]

use libfuzzer_sys::fuzz_target;
use ratsos::arith::parse::PolySource;

fuzz_target!(|data: &str| {
    if let Ok(src) = PolySource::parse(data) {
        let _ = src.rational();
        let _ = src.algebraic();
    }
});
