use std::sync::Arc;

use lazytwist::fixtures;
use lazytwist::FiniteGroup;
use serde_json::{json, Value};

fn read(name: &str) -> Value {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn shipped_tensor_files_match_the_builders() {
    for (name, group) in fixtures::TENSORS {
        let v = read(name);
        assert_eq!(v["group"], *group);
        let from_file = fixtures::tensor_from_json(&v).unwrap();
        assert_eq!(from_file, fixtures::tensor_by_name(name).unwrap(), "{name}");
        assert_eq!(from_file.to_json(), v, "{name} is not in canonical form");
    }
}

#[test]
fn shipped_scalars_are_exact_fractions() {
    let g = Arc::new(fixtures::a4());
    let f = fixtures::a4_twist(&g);
    assert_eq!(f.coeff(&[0, 0]).to_json(), json!({"n": 1, "terms": [[0, "1/4"]]}));
    let v = read("Wall_F");
    let c = &v["terms"][0]["c"]["terms"][0][1];
    assert!(c.as_str().unwrap().ends_with("/4") || c.as_str().unwrap().ends_with("/8"));
}

#[test]
fn group_json_round_trip_and_rejection() {
    for name in ["A4", "Q8", "Wall32"] {
        let g = fixtures::by_name(name).unwrap();
        let h = FiniteGroup::from_json(&g.to_json()).unwrap();
        assert_eq!(h.table_rows(), g.table_rows());
        assert_eq!(h.name(), name);
    }
    let a4 = FiniteGroup::from_json(&json!({"perm_generators": [[2, 1, 4, 3], [2, 3, 1, 4]]})).unwrap();
    assert_eq!(a4.order(), 12);
    for bad in [
        json!({}),
        json!({"table": [[0, 1], [0, 1]]}),
        json!({"table": [[0, 1], [1, 0]], "perm_generators": []}),
        json!({"perm_generators": [[1, 1]]}),
        json!({"perm_generators": []}),
        json!({"table": "x"}),
        json!({"name": 3, "table": [[0]]}),
    ] {
        assert!(FiniteGroup::from_json(&bad).is_err(), "{bad}");
    }
    assert!(fixtures::resolve_group(&json!("Nope")).is_err());
    assert!(fixtures::resolve_group(&json!(3)).is_err());
    assert_eq!(fixtures::resolve_group(&json!("S3")).unwrap().order(), 6);
}
