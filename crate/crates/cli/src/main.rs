use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

mod pipeline;

use pipeline::RunConfig;

#[derive(Parser)]
#[command(
    name = "nsurf",
    version,
    about = "Exact normal-surface computations on closed triangulations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a gluing table and print its skeleton summary.
    Validate {
        /// Gluing table file.
        path: PathBuf,
    },
    /// Enumerate fundamental surfaces of the manifold with its vertex
    /// neighborhoods removed.
    Fundamental {
        /// Gluing table file.
        path: PathBuf,
        /// Coordinate system: 1n (no octagons) or 2n.
        #[arg(long, default_value = "2n")]
        mode: String,
        /// Restrict to one complement component.
        #[arg(long)]
        component: Option<usize>,
        /// Only report surfaces of weight at most this.
        #[arg(long)]
        weight_cap: Option<u64>,
        /// Cap on Hilbert enumeration sizes.
        #[arg(long)]
        hilbert_cap: Option<usize>,
        /// Directory for artifacts and the run manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the maximal sphere system by iterated cutting.
    Sigma {
        /// Gluing table file.
        path: PathBuf,
        /// Cap on Hilbert enumeration sizes.
        #[arg(long)]
        hilbert_cap: Option<usize>,
        /// Directory for artifacts and the run manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the sphere system and extend it by one-octagon spheres.
    TildeSigma {
        /// Gluing table file.
        path: PathBuf,
        /// Cap on Hilbert enumeration sizes.
        #[arg(long)]
        hilbert_cap: Option<usize>,
        /// Directory for artifacts and the run manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact bound calculators.
    Bounds {
        /// Tetrahedron count: print its headline bound.
        #[arg(long)]
        tets: Option<u64>,
        /// Target value: print the least tetrahedron count whose headline
        /// bound exceeds it. Accepts decimal or 2^K.
        #[arg(long)]
        bridge: Option<String>,
    },
    /// Write an admissible vector as a combination of fundamental surfaces.
    Decompose {
        /// Gluing table file.
        path: PathBuf,
        /// Normal vector file.
        #[arg(long)]
        vector: PathBuf,
        /// Coordinate system of the basis: 1n or 2n.
        #[arg(long, default_value = "2n")]
        mode: String,
        /// Cap on Hilbert enumeration sizes.
        #[arg(long)]
        hilbert_cap: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err);
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> nsurf::error::Result<()> {
    match cli.cmd {
        Cmd::Validate { path } => {
            print!("{}", pipeline::cmd_validate(&path)?);
            Ok(())
        }
        Cmd::Fundamental {
            path,
            mode,
            component,
            weight_cap,
            hilbert_cap,
            out,
        } => {
            let cfg = RunConfig::new(&mode, weight_cap, hilbert_cap, out)?;
            let (report, artifacts) = pipeline::cmd_fundamental(&path, component, &cfg)?;
            pipeline::finish(&cfg, report, artifacts)
        }
        Cmd::Sigma {
            path,
            hilbert_cap,
            out,
        } => {
            let cfg = RunConfig::new("2n", None, hilbert_cap, out)?;
            let (report, artifacts) = pipeline::cmd_sigma(&path, &cfg)?;
            pipeline::finish(&cfg, report, artifacts)
        }
        Cmd::TildeSigma {
            path,
            hilbert_cap,
            out,
        } => {
            let cfg = RunConfig::new("2n", None, hilbert_cap, out)?;
            let (report, artifacts) = pipeline::cmd_tilde_sigma(&path, &cfg)?;
            pipeline::finish(&cfg, report, artifacts)
        }
        Cmd::Bounds { tets, bridge } => {
            print!("{}", pipeline::cmd_bounds(tets, bridge.as_deref())?);
            Ok(())
        }
        Cmd::Decompose {
            path,
            vector,
            mode,
            hilbert_cap,
        } => {
            let cfg = RunConfig::new(&mode, None, hilbert_cap, None)?;
            print!("{}", pipeline::cmd_decompose(&path, &vector, &cfg)?);
            Ok(())
        }
    }
}
