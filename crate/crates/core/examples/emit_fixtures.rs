//! Writes the built-in fixture semigroups as JSON files.
//!
//! Usage: cargo run -p smv-core --example emit_fixtures -- <dir>

use smv_core::fixtures;
use smv_core::json::semigroup_to_json;

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    std::fs::create_dir_all(&dir).expect("create fixture dir");
    let names = ["U2", "U3", "Z5", "SAUER", "DT2", "DIV12", "MAG-3-2-8"];
    for name in names {
        let s = fixtures::by_name(name).expect("fixture builds");
        let path = format!("{dir}/{name}.json");
        let text = serde_json::to_string_pretty(&semigroup_to_json(&s)).unwrap();
        std::fs::write(&path, text + "\n").expect("write fixture");
        println!("wrote {path}");
    }
}
