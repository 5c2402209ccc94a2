//! Thin command line frontend over the library entry points: `run` executes
//! one configured case, `study` drives the mesh-convergence study, `oracle`
//! exports the closed-form radial profiles.  The config grammar is
//! documented in `ecms::config`.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ecms::config::{convergence_study, measure_case, parse_config, run_case, RunConfig};
use ecms::post::write_oracle_profile;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "ecms", version, about = "Coupled eddy-current / magneto-static solver with circuit-element ports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Config file in the line-oriented `key = value` grammar.
    #[arg(long)]
    config: PathBuf,
    /// Output root; each case writes one subdirectory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads.  The solve path is strictly sequential (the time
    /// loop carries state), so values above 1 are accepted and ignored.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Bit-reproducible execution.  Always active for the sequential
    /// solver; the flag is part of the stable interface.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args)]
struct StudyArgs {
    #[command(flatten)]
    common: Common,
    /// Refinement levels to run, finest last.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    levels: Vec<u32>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    /// Number of radial sample points.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one configured case and write its output directory.
    Run(Common),
    /// Run the homogeneous case over several refinement levels and fit
    /// the error slopes.
    Study(StudyArgs),
    /// Write the closed-form skin-effect radial profile for the
    /// configured material and frequency.
    Oracle(OracleArgs),
}

fn load(common: &Common) -> Result<RunConfig> {
    if common.threads == 0 {
        bail!("--threads must be at least 1");
    }
    let text = std::fs::read_to_string(&common.config)
        .with_context(|| format!("reading {}", common.config.display()))?;
    Ok(parse_config(&text)?)
}

fn cmd_run(common: &Common) -> Result<()> {
    let cfg = load(common)?;
    let out = run_case(&cfg, &common.out)?;
    println!("wrote {}", out.dir.display());
    println!(
        "cells {}  steps {}  solves {}  skipped {}  cg iterations {}  max rel residual {:.2e}",
        out.cells,
        out.run.records.len(),
        out.run.solves,
        out.run.skipped,
        out.run.cg_iterations,
        out.run.max_rel_residual
    );
    if let Some((ej, eb)) = out.window_err {
        println!("final-period relative errors: j {ej:.4e}  B {eb:.4e}");
    }
    Ok(())
}

fn cmd_study(args: &StudyArgs) -> Result<()> {
    let cfg = load(&args.common)?;
    let out_root: &Path = &args.common.out;
    let mut runner = |c: &RunConfig| measure_case(c, out_root);
    let result = convergence_study(&cfg, &args.levels, out_root, &mut runner)?;
    for row in &result.rows {
        println!(
            "level {}  cells {:>9}  err_j {:.6e}  err_b {:.6e}",
            row.level, row.cells, row.err_j, row.err_b
        );
    }
    match (result.slope_j, result.slope_b) {
        (Some(sj), Some(sb)) => println!("slopes vs cell count: j {sj:.3}  B {sb:.3}"),
        _ => println!("slopes: unavailable (single level)"),
    }
    println!("table written to {}", out_root.join("convergence.csv").display());
    Ok(())
}

fn cmd_oracle(args: &OracleArgs) -> Result<()> {
    let cfg = load(&args.common)?;
    let oracle = cfg.reference_oracle()?;
    std::fs::create_dir_all(&args.common.out)?;
    let path = args.common.out.join("oracle_profile.csv");
    write_oracle_profile(&path, &oracle, cfg.disk.r_outer, args.samples)?;
    println!("wrote {}", path.display());
    println!("skin depth {:.6e} m at {} Hz", oracle.delta, cfg.excitation.frequency);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(common) => cmd_run(&common),
        Command::Study(args) => cmd_study(&args),
        Command::Oracle(args) => cmd_oracle(&args),
    }
}
