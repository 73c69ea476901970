#![no_main]

use libfuzzer_sys::fuzz_target;
use tracelab::finpresheaf::{builtin_example, FiniteFunctor, BUILTIN_FUNCTORS};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    for (_, s, t, _) in BUILTIN_FUNCTORS {
        let (s, t) = (builtin_example(s).unwrap(), builtin_example(t).unwrap());
        if let Ok(f) = FiniteFunctor::from_json(src, &s.category, &t.category) {
            // accepted functors are total on objects and arrows
            assert_eq!(f.obj.len(), s.category.n_obj());
            assert_eq!(f.arr.len(), s.category.arrows.len());
        }
    }
});
