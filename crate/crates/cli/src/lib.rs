//! Driver for the `brownlab` command-line tool.

pub mod args;
pub mod commands;
pub mod manifest;
pub mod parse;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, ReplayArgs};
use manifest::{sha256_hex, strip_output, RunManifest, MANIFEST_FILE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(brownlab::Error),
    Io(std::io::Error),
    Json(serde_json::Error),
    /// A replay produced outputs that differ from the manifest.
    Mismatch(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
            CliError::Json(e) => write!(f, "JSON error: {e}"),
            CliError::Mismatch(m) => write!(f, "replay mismatch: {m}"),
        }
    }
}

impl From<brownlab::Error> for CliError {
    fn from(e: brownlab::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Mismatch(_) => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
        }
    };
    let result = match &cli.command {
        Command::Replay(r) => replay(r),
        cmd => execute(cmd, &argv[1.min(argv.len())..], None).map(|_| ()),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one experiment command, writes its files and manifest, and returns
/// the manifest. `output` overrides the `-o` directory.
fn execute(cmd: &Command, args: &[OsString], output: Option<&Path>) -> Result<Option<RunManifest>, CliError> {
    let common = cmd.common().expect("experiment commands carry common flags");
    let dir: Option<PathBuf> = output
        .map(Path::to_path_buf)
        .or_else(|| common.output.clone())
        .or_else(|| (!matches!(cmd, Command::FreeMoment(_))).then(|| PathBuf::from(".")));
    let start = Instant::now();
    let outputs = match common.threads {
        Some(t) => {
            if t == 0 {
                return Err(CliError::Usage("--threads must be at least 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            pool.install(|| commands::run(cmd))?
        }
        None => commands::run(cmd)?,
    };
    let duration_secs = start.elapsed().as_secs_f64();
    if let Some(line) = &outputs.stdout {
        println!("{line}");
    }
    let Some(dir) = dir else {
        return Ok(None);
    };
    fs::create_dir_all(&dir)?;
    let mut digests = std::collections::BTreeMap::new();
    for (name, bytes) in &outputs.files {
        fs::write(dir.join(name), bytes)?;
        digests.insert(name.clone(), sha256_hex(bytes));
    }
    let manifest = RunManifest {
        command: cmd.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        argv: strip_output(args),
        parameters: serde_json::to_value(cmd)?,
        seed: common.seed,
        threads: common.threads,
        duration_secs,
        outputs: digests,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    fs::write(dir.join(MANIFEST_FILE), bytes)?;
    Ok(Some(manifest))
}

fn replay(r: &ReplayArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&r.manifest)?;
    let original: RunManifest = serde_json::from_str(&text)?;
    let dir = match &r.output {
        Some(d) => d.clone(),
        None => r.manifest.parent().unwrap_or(Path::new(".")).join("replay"),
    };
    let mut argv: Vec<OsString> = vec!["brownlab".into()];
    argv.extend(original.argv.iter().map(OsString::from));
    let cli = Cli::try_parse_from(&argv)
        .map_err(|e| CliError::Usage(format!("manifest arguments no longer parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::Usage("a manifest cannot record a replay".into()));
    }
    let fresh = execute(&cli.command, &argv[1..], Some(&dir))?.expect("output directory given");
    let mut differing = Vec::new();
    for (name, digest) in &original.outputs {
        if fresh.outputs.get(name) != Some(digest) {
            differing.push(name.clone());
        }
    }
    if fresh.outputs.len() != original.outputs.len() {
        differing.push("(set of output files)".into());
    }
    if !differing.is_empty() {
        return Err(CliError::Mismatch(format!("{} differ", differing.join(", "))));
    }
    println!(
        "replayed {}: {} outputs identical in {}",
        original.command,
        original.outputs.len(),
        dir.display()
    );
    Ok(())
}
