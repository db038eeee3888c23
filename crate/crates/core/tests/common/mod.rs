#![allow(dead_code)]

use std::path::{Path, PathBuf};

use hammerforge::basis::bootstrap;
use hammerforge::driver::{Dialect, ProofFormat, ProverSpec};
use hammerforge::script::{elaborate, Development};

pub const MINI: &str = include_str!("../fixtures/mini.mg");
pub const MOCK: &str = env!("CARGO_BIN_EXE_hammerforge-mock-prover");

pub fn mini() -> Development {
    let dev = elaborate(&bootstrap(), MINI);
    assert!(dev.is_ok(), "{:?}", dev.errors);
    dev
}

/// A mock prover answering from `table` (JSON), written next to the problems.
pub fn mock(dir: &Path, name: &str, dialect: Dialect, table: &str) -> ProverSpec {
    let path = dir.join(format!("{}.json", name));
    std::fs::write(&path, table).unwrap();
    ProverSpec {
        name: name.into(),
        path: PathBuf::from(MOCK),
        args: vec![
            "--table".into(),
            path.to_string_lossy().into_owned(),
            "{file}".into(),
        ],
        dialect,
        proof_format: ProofFormat::Tstp,
    }
}
