mod artifacts;
mod commands;
mod config;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Exact checks and figures for partially ordered Jordan algebras and
/// their partial cyclic orders.
#[derive(Parser, Debug)]
#[command(name = "cyclord", version)]
struct Cli {
    /// Directory for reports, witnesses and figures.
    #[arg(
        long,
        global = true,
        env = "CYCLORD_OUT",
        default_value = "cyclord-out"
    )]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Sampling {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    cases: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run axiom and property suites on an instance.
    CheckAxioms {
        #[arg(long)]
        instance: String,
        /// Comma-separated suite names; defaults depend on the instance.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Decide (a, x, b) ∈ R.
    QueryCyclic {
        #[arg(long)]
        instance: String,
        /// `"a,x,b"` for one-dimensional instances, or a JSON array of three points.
        #[arg(long, allow_hyphen_values = true)]
        triple: String,
        /// A JSON group word applied to all three points first.
        #[arg(long)]
        word: Option<String>,
    },
    /// Decide whether two points are transversal.
    QueryTransversal {
        #[arg(long)]
        instance: String,
        #[arg(long, allow_hyphen_values = true)]
        pair: String,
    },
    /// Re-evaluate a witness file written by a failing check.
    Replay {
        #[arg(long)]
        witness: PathBuf,
    },
    /// Rasterize an interval ]a,b[ over a grid slice.
    IntervalImage {
        #[arg(long)]
        instance: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// `lo:hi:steps`, with a second axis after `;`.
        #[arg(long, allow_hyphen_values = true, default_value = "-4:4:64;-4:4:64")]
        grid: String,
        /// Coordinates moved by the grid axes; defaults to the first ones.
        #[arg(long, value_delimiter = ',')]
        coords: Vec<usize>,
        /// JSON coordinates of the fixed part of the slice.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Decompose a torus interval into boxes of the cube.
    TorusBoxes {
        #[arg(long)]
        n: usize,
        /// Comma-separated cube coordinates.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-1:1:40;-1:1:40")]
        grid: String,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Interval-topology probes.
    TopologyProbe {
        #[arg(long)]
        instance: String,
        #[arg(long, value_enum, default_value = "tangent-fiber")]
        probe: commands::Probe,
        /// For `separation`: the two points, as a JSON array.
        #[arg(long, allow_hyphen_values = true)]
        pair: Option<String>,
        /// For `separation`: JSON array of interval endpoints.
        #[arg(long)]
        endpoints: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Inversion on the tube over the cone.
    TubeExperiment {
        #[arg(long)]
        instance: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// List built-in instance aliases and suites.
    ListInstances,
    /// Execute every job of a TOML configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command, &cli.out) {
        Ok(commands::Outcome::Pass) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
