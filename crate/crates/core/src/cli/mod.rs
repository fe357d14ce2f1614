//! Command-line runner: `run <config.json>` and `plot <trajectory.csv> <out.svg>`.

mod config;
mod plot;
mod run;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::mixing::MixingError;
use crate::slln_lab::LabError;

pub use config::{parse_config, Checkpoints, Experiment, ExperimentConfig, FamilyConfig, KNOWN_VERDICTS};
pub use plot::render_svg;
pub use run::{execute, RunOutput};

/// Environment variable replacing every config seed: seed `i` becomes `value + i`.
pub const SEED_OVERRIDE_VAR: &str = "RANDSET_SEED_OVERRIDE";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("ConfigInvalid:\n  {}", .0.join("\n  "))]
    ConfigInvalid(Vec<String>),
    #[error("SchemaMismatch: {0}")]
    SchemaMismatch(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{}: {source}", source.name())]
    Lab {
        #[from]
        source: LabError,
    },
    #[error("MixingError: {0}")]
    Mixing(#[from] MixingError),
    #[error("bad thread count: {0}")]
    Threads(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigInvalid(_) => 2,
            _ => 1,
        }
    }

    fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "randset", version, about = "Strong-law experiments for random closed sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory; defaults to the config's `output_dir` or `out/<config name>`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Render a trajectory CSV as a log-log SVG.
    Plot { csv: PathBuf, svg: PathBuf },
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Run { config, out, threads } => run_command(&config, out.as_deref(), threads),
        Command::Plot { csv, svg } => emit_plot(&csv, &svg).map(|_| 0),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Loads a config and applies the seed override from the environment.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut cfg = parse_config(&text)?;
    if let Ok(v) = std::env::var(SEED_OVERRIDE_VAR) {
        let base: u64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::ConfigInvalid(vec![format!("{SEED_OVERRIDE_VAR}: not an integer: {v:?}")]))?;
        let count = cfg.seeds().len() as u64;
        cfg.seeds = Some((0..count).map(|i| base.wrapping_add(i)).collect());
    }
    Ok(cfg)
}

fn run_command(path: &Path, out: Option<&Path>, threads: Option<usize>) -> Result<i32, CliError> {
    let cfg = load_config(path)?;
    let out_dir = match (out, &cfg.output_dir) {
        (Some(o), _) => o.to_path_buf(),
        (None, Some(d)) => PathBuf::from(d),
        (None, None) => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
            PathBuf::from("out").join(stem)
        }
    };
    let output = match threads {
        Some(0) => return Err(CliError::Threads("must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Threads(e.to_string()))?
            .install(|| execute(&cfg))?,
        None => execute(&cfg)?,
    };
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
    for (name, contents) in &output.files {
        let p = out_dir.join(name);
        std::fs::write(&p, contents).map_err(|e| CliError::io(&p, e))?;
    }
    let (status, code) = match &cfg.expect {
        None => (String::new(), 0),
        Some(e) if *e == output.verdict => (format!(" expect={e} ok"), 0),
        Some(e) => (format!(" expect={e} MISMATCH"), 1),
    };
    println!(
        "{}: verdict={}{} -> {}",
        cfg.experiment.name(),
        output.verdict,
        status,
        out_dir.display()
    );
    Ok(code)
}

/// Reads a trajectory CSV and writes its SVG plot.
pub fn emit_plot(csv_path: &Path, svg_path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(csv_path).map_err(|e| CliError::io(csv_path, e))?;
    let svg = render_svg(&text)?;
    std::fs::write(svg_path, svg).map_err(|e| CliError::io(svg_path, e))
}
