//! Writes every built-in fixture over Q to `fixtures/`.

use sabinin_core::Field;
use sabinin_kit::fixtures::{builtin, NAMES};

fn main() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).expect("create fixtures dir");
    for name in NAMES {
        let f = builtin(name, Field::Rational).expect("builtin fixture");
        let path = dir.join(format!("{name}.{}", f.extension()));
        std::fs::write(&path, f.to_file_text()).expect("write fixture");
        println!("{}", path.display());
    }
}
