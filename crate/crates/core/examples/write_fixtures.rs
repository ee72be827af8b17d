//! Regenerate the shipped tensor files: `cargo run --example write_fixtures -- fixtures`.
use lazytwist::fixtures;

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    for (name, _) in fixtures::TENSORS {
        let t = fixtures::tensor_by_name(name).unwrap();
        let text = serde_json::to_string_pretty(&t.to_json()).unwrap();
        std::fs::write(format!("{dir}/{name}.json"), text + "\n").unwrap();
    }
}
