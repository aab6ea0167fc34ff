#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(ps) = babai::points::PointSet::from_json(s) {
            // accepted sets must round-trip through serialization
            let back = babai::points::PointSet::from_json(&ps.to_json()).unwrap();
            assert_eq!(back.points, ps.points);
            // and classification must not panic
            let _ = babai::classify::classify(&ps);
        }
    }
});
