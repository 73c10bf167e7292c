#![no_main]

use libfuzzer_sys::fuzz_target;
use morley_ns::mesh::{parse_mesh, write_mesh};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mesh) = parse_mesh(text) {
        // Anything accepted must survive a write/parse round trip.
        let again = parse_mesh(&write_mesh(&mesh)).expect("round trip");
        assert_eq!(again, mesh);
    }
});
