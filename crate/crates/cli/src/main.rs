use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ruled_cli::{
    cmd_analyze, cmd_compare, cmd_demo, cmd_mesh, cmd_reconstruct, cmd_synthesize, load_surface, parse_point,
    AnalyzeOptions, Result, Status, EXIT_ERROR,
};
use ruled_core::{Mode, SimilarityOptions, DEFAULT_RESOLUTION};

/// Invariants and similarity of ruled surfaces.
///
/// SURFACE arguments are definition files, sampled-surface `.csv` files or
/// `preset:NAME` (helicoid, similar-helicoid, cylinder, hyperboloid,
/// tangent-developable, slow-helicoid, conoid, offset-hyperboloid).
#[derive(Parser)]
#[command(name = "ruled", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tolerance: the similarity verdict tolerance, or the developability
    /// threshold for `analyze`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Sample count of input surfaces, or output rows for `synthesize`.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, value_parser = ["exact", "rotation"], default_value = "exact")]
    mode: String,
    /// Search for a shift of the total-curvature parameter before comparing.
    #[arg(long, global = true)]
    offset_search: bool,
    /// Output path (a prefix for `analyze`, a directory for `demo`).
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a surface and tabulate its invariants.
    Analyze { surface: String },
    /// Decide whether CANDIDATE is similar to REFERENCE.
    Compare { reference: String, candidate: String },
    /// Build the similar surface for a transformation LAMBDA(s) and tangent
    /// angle THETA(s), both written in the variable `u`.
    Synthesize {
        surface: String,
        #[arg(allow_hyphen_values = true)]
        lambda: String,
        #[arg(allow_hyphen_values = true)]
        theta: String,
        /// Start point of the new striction curve.
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        anchor: String,
    },
    /// Write a triangulated OBJ mesh.
    Mesh {
        surface: String,
        #[arg(allow_hyphen_values = true)]
        v_min: f64,
        #[arg(allow_hyphen_values = true)]
        v_max: f64,
        nu: usize,
        nv: usize,
    },
    /// Rebuild the rulings from the structure function and report residuals.
    Reconstruct { surface: String },
    /// Reproduce the helicoid example.
    Demo,
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<Status> {
    let samples = cli.samples;
    let output = cli.output.as_deref();
    match cli.command {
        Command::Analyze { surface } => {
            let n = load_surface(&surface, samples)?;
            cmd_analyze(&n, &AnalyzeOptions { prefix: output, tol_dev: cli.tol }, out)
        }
        Command::Compare { reference, candidate } => {
            let b = load_surface(&reference, samples)?;
            let a = load_surface(&candidate, samples)?;
            let mut opts = SimilarityOptions::default().with_mode(cli.mode.parse::<Mode>()?);
            if let Some(t) = cli.tol {
                opts = opts.with_tol(t);
            }
            opts.offset_search = cli.offset_search;
            cmd_compare(&b, &a, &opts, output, out)
        }
        Command::Synthesize { surface, lambda, theta, anchor } => {
            let n = load_surface(&surface, None)?;
            cmd_synthesize(&n, &lambda, &theta, parse_point(&anchor)?, samples, output, out)
        }
        Command::Mesh { surface, v_min, v_max, nu, nv } => {
            let n = load_surface(&surface, samples)?;
            cmd_mesh(&n, v_min, v_max, nu, nv, output, out)
        }
        Command::Reconstruct { surface } => {
            let n = load_surface(&surface, samples)?;
            cmd_reconstruct(&n, DEFAULT_RESOLUTION, out)
        }
        Command::Demo => cmd_demo(output.unwrap_or("ruled-demo".as_ref()), out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let result = run(cli, &mut lock);
    let _ = lock.flush();
    match result {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
