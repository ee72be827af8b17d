#![no_main]

use lazytwist::CycNum;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    if let Ok(x) = CycNum::from_json(&v) {
        // serialization is canonical: a second round trip is the identity
        let w = x.to_json();
        assert_eq!(CycNum::from_json(&w).unwrap(), x);
        assert_eq!(CycNum::from_json(&w).unwrap().to_json(), w);
    }
});
