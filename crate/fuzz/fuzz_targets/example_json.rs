#![no_main]

use libfuzzer_sys::fuzz_target;
use tracelab::finpresheaf::Example;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ex) = Example::from_json(src) {
        // anything accepted must be a valid category with valid presheaves
        for p in &ex.presheaves {
            assert!(p.presheaf.validate(&ex.category).is_ok());
        }
    }
});
