//! Fixture loading shared by the integration tests.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use mcmp_core::lcmv::{parse_cmv, CmvProcess};
use mcmp_core::syntax::{parse_source, SourceFile};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn read(name: &str) -> String {
    let path = fixture_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn load(name: &str) -> SourceFile {
    parse_source(&read(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_cmv(name: &str) -> CmvProcess {
    parse_cmv(&read(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every fixture with the given extension, sorted by name.
pub fn names(ext: &str) -> Vec<String> {
    let mut out: Vec<String> = std::fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == ext).then(|| p.file_name()?.to_str().map(str::to_owned))?
        })
        .collect();
    out.sort();
    out
}

/// Prints one verdict line and returns whether it passed.
pub fn verdict(criterion: u32, ok: bool, detail: impl AsRef<str>) -> bool {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("{tag} criterion {criterion}: {}", detail.as_ref());
    ok
}
pub mod gen;
pub mod theorems;
