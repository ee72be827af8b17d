#![no_main]

use lazytwist::fixtures;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    if let Ok(t) = fixtures::tensor_from_json(&v) {
        let mut w = t.to_json();
        if v["group"].is_object() {
            w["group"] = v["group"].clone();
        }
        assert_eq!(fixtures::tensor_from_json(&w).unwrap(), t);
    }
});
