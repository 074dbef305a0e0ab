//! `owl`: simulate scenes, reconstruct scaled clouds, estimate heading, map planar
//! tracks into OWL, sample iso-surfaces and verify the calculus invariants.

pub mod commands;
pub mod error;
pub mod io;
pub mod manifest;

use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand};

use commands::{FrameSelection, HeadingMethod, IsoKind};
pub use error::CliError;

#[derive(Parser)]
#[command(name = "owl", version, about = "Looming and perceived-rotation calculus toolkit")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Simulate a scene config; writes cues.csv, truth.csv and manifest.json.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Scaled point clouds (PLY) from a cue table.
    #[command(group(ArgGroup::new("frames").required(true).args(["frame", "all"])))]
    Reconstruct {
        #[arg(long)]
        cues: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Relative speed |t| in m/s; output in meters instead of seconds.
        #[arg(long)]
        speed: Option<f64>,
        #[arg(long)]
        frame: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Heading of one frame from its cues.
    Heading {
        #[arg(long)]
        cues: PathBuf,
        #[arg(long)]
        frame: usize,
        #[arg(long, value_enum, default_value = "cones")]
        method: HeadingMethod,
        #[arg(long, default_value = "heading.json")]
        out: PathBuf,
        /// Ground-truth table; adds the angular error to the result.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// OWL trajectories of planar tracks.
    Owlmap {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "owl_traj.csv")]
        out: PathBuf,
    },
    /// Sample an iso-looming sphere or iso-rotation torus.
    Iso {
        #[arg(long, value_enum)]
        kind: IsoKind,
        #[arg(long, allow_negative_numbers = true)]
        t_mag: f64,
        #[arg(long, allow_negative_numbers = true)]
        level: f64,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the invariant checks on a scene; exit 1 if any fails.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Check this cue table instead of freshly simulated cues.
        #[arg(long)]
        cues: Option<PathBuf>,
        #[arg(long, default_value = "verify.json")]
        out: PathBuf,
    },
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("OWL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("OWL_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Simulate { config, out } => commands::simulate_cmd(&config, &out),
        Command::Reconstruct {
            cues,
            out,
            speed,
            frame,
            all: _,
        } => {
            let selection = frame.map_or(FrameSelection::All, FrameSelection::One);
            commands::reconstruct_cmd(&cues, &out, speed, selection)
        }
        Command::Heading {
            cues,
            frame,
            method,
            out,
            truth,
        } => commands::heading_cmd(&cues, frame, method, &out, truth.as_deref()),
        Command::Owlmap { config, out } => commands::owlmap_cmd(&config, &out),
        Command::Iso {
            kind,
            t_mag,
            level,
            samples,
            out,
        } => commands::iso_cmd(kind, t_mag, level, samples, &out),
        Command::Verify { config, cues, out } => commands::verify_cmd(&config, cues.as_deref(), &out),
    }
}

/// Parses `args` (program name first) and runs the command in-process.
pub fn run_args<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(cli)
}
