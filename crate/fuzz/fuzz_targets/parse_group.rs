#![no_main]

use lazytwist::{fixtures, FiniteGroup};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    if let Ok(g) = fixtures::resolve_group(&v) {
        let h = FiniteGroup::from_json(&g.to_json()).unwrap();
        assert_eq!(h.table_rows(), g.table_rows());
    }
});
