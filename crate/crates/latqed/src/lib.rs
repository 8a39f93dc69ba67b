//! Command-line companion to `latqed-core`: configuration files, scenario
//! execution, CSV tables, and run manifests.
//!
//! The core crate holds the numerics; this crate holds everything that talks
//! to the outside world. A run goes through four stages:
//!
//! 1. [`config::parse_config`] turns a configuration file into a validated,
//!    typed [`config::ScenarioConfig`], reporting every problem at once;
//! 2. [`scenario::execute`] produces the run's tables and summary numbers in
//!    memory, fanning independent scan points out over a thread pool;
//! 3. the driver writes each table to the output directory;
//! 4. [`manifest`] writes `run_manifest.txt` last, with a SHA-256 checksum of
//!    every file, so a manifest's presence marks a completed run.
//!
//! Output bytes depend only on the configuration (and its seed), never on
//! the worker count or on timing; the wall-time line of the manifest is the
//! single exception.

pub mod config;
pub mod error;
pub mod manifest;
pub mod scenario;
pub mod table;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{parse_config, Scenario, ScenarioConfig};
pub use error::AppError;
pub use scenario::{execute, RunOutput};

/// Environment variable supplying the default worker count.
pub const JOBS_ENV_VAR: &str = "LATQED_JOBS";

/// Options the command line layers on top of a configuration file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the configuration's `output_dir` when set.
    pub output_dir: Option<PathBuf>,
    /// Worker threads for the run's scans; `None` uses the process default.
    pub jobs: Option<usize>,
    /// Print progress to stderr.
    pub verbose: bool,
}

/// Outcome of a completed run.
#[derive(Debug, Clone)]
pub struct RunReport {
    /// Directory the outputs went to.
    pub output_dir: PathBuf,
    /// Names of the data files written, in order, manifest excluded.
    pub files: Vec<String>,
    /// Path of the manifest.
    pub manifest_path: PathBuf,
}

/// Reads, parses, executes, and writes out one configuration file.
pub fn run_file(config_path: &Path, options: &RunOptions) -> Result<RunReport, AppError> {
    let text = std::fs::read_to_string(config_path).map_err(|e| {
        AppError::Io(format!("cannot read {}: {e}", config_path.display()))
    })?;
    run_config_text(&text, options)
}

/// Like [`run_file`] for configuration text already in memory.
pub fn run_config_text(text: &str, options: &RunOptions) -> Result<RunReport, AppError> {
    let config = parse_config(text).map_err(|issues| {
        AppError::Config(format!(
            "invalid configuration:\n{}",
            config::format_issues(&issues)
        ))
    })?;

    let output_dir = options
        .output_dir
        .clone()
        .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    if options.verbose {
        eprintln!(
            "running scenario {} into {}",
            config.scenario().name(),
            output_dir.display()
        );
    }

    let started = Instant::now();
    let output = match options.jobs {
        None => execute(&config)?,
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| AppError::Config(format!("cannot build thread pool: {e}")))?;
            pool.install(|| execute(&config))?
        }
    };
    let wall_seconds = started.elapsed().as_secs_f64();

    std::fs::create_dir_all(&output_dir).map_err(|e| {
        AppError::Io(format!("cannot create {}: {e}", output_dir.display()))
    })?;
    let mut files = Vec::new();
    for (name, content) in &output.files {
        let path = output_dir.join(name);
        std::fs::write(&path, content)
            .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))?;
        if options.verbose {
            eprintln!("wrote {}", path.display());
        }
        files.push(name.clone());
    }

    let manifest_text = manifest::render_manifest(
        config.scenario().name(),
        env!("CARGO_PKG_VERSION"),
        wall_seconds,
        &output.files,
        &output.summary,
        text,
    );
    let manifest_path = output_dir.join(manifest::MANIFEST_NAME);
    std::fs::write(&manifest_path, &manifest_text).map_err(|e| {
        AppError::Io(format!("cannot write {}: {e}", manifest_path.display()))
    })?;
    if options.verbose {
        eprintln!("wrote {}", manifest_path.display());
    }

    Ok(RunReport {
        output_dir,
        files,
        manifest_path,
    })
}
