#![no_main]

use libfuzzer_sys::fuzz_target;
use tracelab::cats::axioms::AxiomId;
use tracelab::cats::CategoryId;

fuzz_target!(|s: &str| {
    if let Some(c) = CategoryId::parse(s) {
        assert_eq!(CategoryId::parse(c.name()), Some(c));
    }
    if let Some(a) = AxiomId::parse(s) {
        assert_eq!(AxiomId::parse(a.name()), Some(a));
    }
});
