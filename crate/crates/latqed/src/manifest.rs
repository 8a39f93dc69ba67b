//! Run manifests: a plain-text receipt written after all other outputs.
//!
//! The manifest records what ran (scenario, code version), how long it took,
//! a SHA-256 checksum of every file the run produced, the scenario's summary
//! numbers, and a verbatim echo of the configuration. Because it is written
//! last, its presence marks a run that completed; a directory with data files
//! but no manifest is a run that died halfway.
//!
//! Checksums cover the exact bytes on disk, so two runs of the same
//! configuration must agree on every checksum line even when worker counts
//! differ. The wall-time line is the one intentionally non-reproducible field.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

/// Name of the manifest file inside the output directory.
pub const MANIFEST_NAME: &str = "run_manifest.txt";

/// Hex-encoded SHA-256 of a byte string.
pub fn sha256_hex(data: &[u8]) -> String {
    let digest = Sha256::digest(data);
    format!("{digest:x}")
}

/// Renders the manifest text.
///
/// `files` lists every output written by the run, as `(name, content)` in
/// the order written. `summary` carries the scenario's headline numbers.
pub fn render_manifest(
    scenario_name: &str,
    code_version: &str,
    wall_seconds: f64,
    files: &[(String, String)],
    summary: &[(String, String)],
    config_text: &str,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "latqed run manifest");
    let _ = writeln!(out, "scenario = {scenario_name}");
    let _ = writeln!(out, "code_version = {code_version}");
    let _ = writeln!(out, "wall_seconds = {wall_seconds:.6}");
    let _ = writeln!(out);
    let _ = writeln!(out, "[outputs]");
    for (name, content) in files {
        let _ = writeln!(out, "{name} = sha256:{}", sha256_hex(content.as_bytes()));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "[summary]");
    for (key, value) in summary {
        let _ = writeln!(out, "{key} = {value}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "[config]");
    for line in config_text.lines() {
        let _ = writeln!(out, "| {line}");
    }
    out
}
