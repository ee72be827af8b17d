#![no_main]

use std::sync::OnceLock;

use lazytwist::pontryagin::AltForm;
use lazytwist::{fixtures, FiniteGroup};
use libfuzzer_sys::fuzz_target;

fn groups() -> &'static [FiniteGroup] {
    static GROUPS: OnceLock<Vec<FiniteGroup>> = OnceLock::new();
    GROUPS.get_or_init(|| {
        ["A4", "C27sd", "C2xC4", "C3xC3"]
            .iter()
            .map(|n| fixtures::by_name(n).unwrap())
            .collect()
    })
}

fuzz_target!(|data: &[u8]| {
    let Some((&which, rest)) = data.split_first() else {
        return;
    };
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(rest) else {
        return;
    };
    let g = &groups()[which as usize % groups().len()];
    if let Ok((dual, form)) = AltForm::from_json(g, &v) {
        let (dual2, form2) = AltForm::from_json(g, &form.to_json(&dual)).unwrap();
        assert_eq!(dual2.subgroup(), dual.subgroup());
        assert_eq!(form2, form);
    }
});
