//! Command-line entry point.
//!
//! ```text
//! latqed <config-file> [--output-dir DIR] [--jobs N] [--verbose]
//! ```
//!
//! Exit codes: 0 on success, 2 for configuration or usage problems, 3 for
//! numerical failures, 4 for regime violations, 1 for filesystem trouble.
//! The LATQED_JOBS environment variable sets the default worker count when
//! `--jobs` is absent.

use std::path::PathBuf;

use latqed::{run_file, AppError, RunOptions, JOBS_ENV_VAR};

const USAGE: &str = "usage: latqed <config-file> [--output-dir DIR] [--jobs N] [--verbose]

Runs the scenario described by the configuration file and writes CSV tables
plus a run manifest into the output directory (default: the directory named
by the config, else the current one).

options:
  --output-dir DIR   write outputs into DIR, overriding the config
  --jobs N           number of worker threads (default: LATQED_JOBS or all cores)
  --verbose          print progress to stderr
  --help             show this text";

struct CliArgs {
    config_path: PathBuf,
    options: RunOptions,
}

fn parse_jobs(text: &str, origin: &str) -> Result<usize, AppError> {
    match text.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(AppError::Usage(format!(
            "{origin} must be a positive integer, got `{text}`"
        ))),
    }
}

fn parse_args(args: &[String]) -> Result<Option<CliArgs>, AppError> {
    let mut config_path: Option<PathBuf> = None;
    let mut options = RunOptions::default();
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        match arg.as_str() {
            "--help" | "-h" => return Ok(None),
            "--verbose" => options.verbose = true,
            "--output-dir" => {
                let value = iter.next().ok_or_else(|| {
                    AppError::Usage(String::from("--output-dir needs a directory argument"))
                })?;
                options.output_dir = Some(PathBuf::from(value));
            }
            "--jobs" => {
                let value = iter.next().ok_or_else(|| {
                    AppError::Usage(String::from("--jobs needs a number argument"))
                })?;
                options.jobs = Some(parse_jobs(value, "--jobs")?);
            }
            other if other.starts_with('-') => {
                return Err(AppError::Usage(format!("unknown flag `{other}`")));
            }
            positional => {
                if config_path.is_some() {
                    return Err(AppError::Usage(format!(
                        "unexpected extra argument `{positional}` (one config file per run)"
                    )));
                }
                config_path = Some(PathBuf::from(positional));
            }
        }
    }
    let config_path = config_path
        .ok_or_else(|| AppError::Usage(String::from("missing config file argument")))?;
    if options.jobs.is_none() {
        if let Ok(value) = std::env::var(JOBS_ENV_VAR) {
            options.jobs = Some(parse_jobs(&value, JOBS_ENV_VAR)?);
        }
    }
    Ok(Some(CliArgs {
        config_path,
        options,
    }))
}

fn real_main() -> Result<(), AppError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(cli) = parse_args(&args)? else {
        println!("{USAGE}");
        return Ok(());
    };
    let report = run_file(&cli.config_path, &cli.options)?;
    println!(
        "wrote {} data file(s) and {} to {}",
        report.files.len(),
        latqed::manifest::MANIFEST_NAME,
        report.output_dir.display()
    );
    Ok(())
}

fn main() {
    if let Err(err) = real_main() {
        eprintln!("{err}");
        if matches!(err, AppError::Usage(_)) {
            eprintln!("{USAGE}");
        }
        std::process::exit(err.exit_code());
    }
}
