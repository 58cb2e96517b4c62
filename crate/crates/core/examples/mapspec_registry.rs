//! Searches map specs for the representation fixtures and writes them to
//! `fixtures/mapspecs.json`. Pass `--check` to compare against the stored file.

use std::path::PathBuf;

use kitepea::repr::{build_registry, load_registry};

fn main() -> kitepea::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/mapspecs.json");
    let reg = build_registry(2)?;
    let text = serde_json::to_string_pretty(&reg).expect("registry serializes") + "\n";
    if std::env::args().any(|a| a == "--check") {
        let stored = load_registry(&path)?;
        if stored != reg {
            eprintln!("stored registry differs from a fresh search");
            std::process::exit(1);
        }
        println!("{} fixtures match", reg.len());
        return Ok(());
    }
    std::fs::write(&path, text).expect("write registry");
    for (name, m) in &reg {
        println!("{name:<20} {}", m.to_json());
    }
    Ok(())
}
