//! `tpms`: solve, mesh, verify and evolve QTZ-QZD surfaces.

mod commands;
mod config;
mod error;
mod meta;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{EvolveArgs, FamilyArgs, ScherkArgs, SurfaceArgs, VerifyArgs};
use crate::config::RunFile;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "tpms", version, about = "QTZ-QZD minimal surfaces: period solving, meshing, verification and evolution")]
struct Cli {
    /// TOML run file presetting any flag; flags given here win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads [default: 1].
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the period problem along a grid of eta and write the family table.
    Family(FamilyArgs),
    /// Mesh the translational cell of one member.
    Surface(SurfaceArgs),
    /// Mesh a Scherk limit over the half disc.
    Scherk(ScherkArgs),
    /// Topology, Gauss-Bonnet and flat-point report for a mesh.
    Verify(VerifyArgs),
    /// Evolve a tube around a periodic net towards zero mean curvature.
    Evolve(EvolveArgs),
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let file = match &cli.config {
        Some(path) => RunFile::load(path)?,
        None => RunFile::default(),
    };
    let jobs = match cli.jobs {
        Some(j) => j,
        None => file.jobs()?.unwrap_or(1),
    };
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.command {
        Command::Family(a) => commands::family(file.fill("family", a)?),
        Command::Surface(a) => commands::surface(file.fill("surface", a)?),
        Command::Scherk(a) => commands::scherk(file.fill("scherk", a)?),
        Command::Verify(a) => commands::verify(file.fill("verify", a)?),
        Command::Evolve(a) => commands::evolve(file.fill("evolve", a)?),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tpms: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
