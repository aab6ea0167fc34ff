#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = babai::classify::DistanceClassMatrix::from_json(s) {
            let back = babai::classify::DistanceClassMatrix::from_json(&m.to_json()).unwrap();
            for i in 0..m.size {
                for j in 0..m.size {
                    assert_eq!(back.class_of(i, j), m.class_of(i, j));
                }
            }
            // building a graph from any accepted matrix must not panic
            let classes = m.realized_classes().into_iter().collect();
            let _ = babai::graph::build_graph(&m, &babai::graph::ForbiddenSpec::Classes(classes));
        }
    }
});
