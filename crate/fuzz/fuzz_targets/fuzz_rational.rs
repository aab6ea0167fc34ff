#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = babai::rational::Rational::parse_canonical(s) {
            // accepted strings must round-trip through Display
            let back = babai::rational::Rational::parse_canonical(&r.to_string()).unwrap();
            assert_eq!(back, r);
        }
    }
});
