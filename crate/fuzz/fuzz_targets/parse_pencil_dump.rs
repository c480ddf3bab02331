#![no_main]

use libfuzzer_sys::fuzz_target;
use ratsos::gram::GramPencil;

fuzz_target!(|data: &str| {
    if let Ok(p) = GramPencil::parse_dump(data) {
        assert_eq!(GramPencil::parse_dump(&p.dump()).expect("dump parses"), p);
    }
});
