#![no_main]

use libfuzzer_sys::fuzz_target;
use tracelab::suite::{strip_timing, to_canonical_json, validate_report};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    let _ = validate_report(&v);
    let text = to_canonical_json(&strip_timing(&v));
    let back: serde_json::Value = serde_json::from_str(&text).expect("canonical output parses");
    assert_eq!(to_canonical_json(&back), text);
});
