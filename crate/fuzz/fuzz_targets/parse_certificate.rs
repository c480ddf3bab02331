#![no_main]

use libfuzzer_sys::fuzz_target;
use ratsos::cert::Certificate;

fuzz_target!(|data: &str| {
    // Whatever parses must print and parse back to the same certificate.
    if let Ok(c) = Certificate::parse(data) {
        let again = Certificate::parse(&c.to_text()).expect("printed certificate parses");
        assert_eq!(again, c);
    }
});
