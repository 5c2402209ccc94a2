//! Spatial convergence against the analytic skin-effect cylinder.
//!
//! Runs the preset-1 transient on a hierarchy of uniformly refined meshes
//! and fits the final-period field errors against the cell count on a
//! log-log scale.  Refinement is isotropic (the disk template and the layer
//! height halve together), so the expected slope against `N ~ h^-3` is
//! `-1/3` for the lowest-order elements.
//!
//! Levels come from the command line (default `0 1 2`; the last level has
//! about 108k tets and dominates the runtime at a few minutes).  Per-level
//! run directories, `convergence.csv` and `slopes.csv` land in
//! `out/convergence_study/`.

use std::path::Path;
use std::time::Instant;

use ecms::config::{convergence_study, measure_case, parse_config, RunConfig};

fn main() -> ecms::Result<()> {
    let levels: Vec<u32> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("levels are small integers"))
        .collect();
    let levels = if levels.is_empty() { vec![0, 1, 2] } else { levels };

    let base = parse_config("preset = 1")?;
    let out = Path::new("out/convergence_study");

    let mut runner = |cfg: &RunConfig| {
        let clock = Instant::now();
        let row = measure_case(cfg, out)?;
        let (cells, ej, eb) = row;
        println!(
            "level {}: {:>7} cells  err_j {:.4e}  err_B {:.4e}  ({:.1?})",
            cfg.refinement,
            cells,
            ej,
            eb,
            clock.elapsed(),
        );
        Ok(row)
    };
    let study = convergence_study(&base, &levels, out, &mut runner)?;

    match (study.slope_j, study.slope_b) {
        (Some(sj), Some(sb)) => println!("slopes vs cell count: j {sj:.3}  B {sb:.3}"),
        _ => println!("slopes: unavailable (single level)"),
    }
    println!("table written to {}", out.join("convergence.csv").display());
    Ok(())
}
