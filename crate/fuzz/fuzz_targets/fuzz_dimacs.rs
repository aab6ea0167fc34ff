#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = babai::graph::DistanceGraph::from_dimacs(s) {
            let back = babai::graph::DistanceGraph::from_dimacs(&g.to_dimacs()).unwrap();
            assert_eq!(back.edges(), g.edges());
        }
    }
});
