//! Run manifests: what was run, with which parameters, and digests of
//! everything it wrote.

use std::collections::BTreeMap;
use std::ffi::OsString;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    /// Arguments after the program name, without the output directory.
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub threads: Option<usize>,
    pub duration_secs: f64,
    /// SHA-256 of every output file, by file name.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Drops `-o DIR`, `--output DIR`, `-oDIR` and `--output=DIR`.
pub fn strip_output(argv: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv {
        let a = a.to_string_lossy().into_owned();
        if skip {
            skip = false;
            continue;
        }
        if a == "-o" || a == "--output" {
            skip = true;
        } else if !(a.starts_with("--output=") || (a.starts_with("-o") && !a.starts_with("--"))) {
            out.push(a);
        }
    }
    out
}
