//! Writes the built-in fixtures to `fixtures/*.json` at the workspace root.

use std::fs;
use std::path::Path;

fn main() -> std::io::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    fs::create_dir_all(&root)?;
    for (name, problem) in sarkisov::fixtures::all() {
        let path = root.join(format!("{name}.json"));
        fs::write(&path, problem.render())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
