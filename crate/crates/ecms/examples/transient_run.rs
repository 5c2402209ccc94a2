//! Full two-step transient on the homogeneous iron cylinder.
//!
//! Runs the standard excitation (100 A, 50 Hz, 7 periods at 50 steps each)
//! on the coarsest preset-1 mesh, writes the per-step records and the
//! per-step field errors against the analytic cylinder, and drops one VTK
//! snapshot at a current maximum.  The printed summary includes the
//! final-period field errors and the worst power-balance defect
//! `P_total - U_sum * I1`, which the voltage reconstruction relies on.
//!
//! Output lands in `out/transient_run/` (or the directory given as the first
//! argument).

use std::path::PathBuf;

use ecms::config::{parse_config, run_case};

fn main() -> ecms::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out/transient_run"));

    // Snapshot at t = 0.13 s: 6.5 periods in, where I1 = +100 A.
    let cfg = parse_config("preset = 1\n[output]\nsnapshots = 0.13")?;
    let case = run_case(&cfg, &out)?;

    println!(
        "{} cells, {} steps: {} solves ({} skipped), {} cg iterations, max rel residual {:.2e}",
        case.cells,
        case.run.records.len(),
        case.run.solves,
        case.run.skipped,
        case.run.cg_iterations,
        case.run.max_rel_residual,
    );
    if let Some((ej, eb)) = case.window_err {
        println!("final-period relative errors: j {ej:.4e}  B {eb:.4e}");
    }

    let p_max = case.run.records.iter().map(|r| r.p_total.abs()).fold(0.0, f64::max);
    let defect = case
        .run
        .records
        .iter()
        .map(|r| (r.p_total - r.u_sum * r.i1).abs())
        .fold(0.0, f64::max);
    println!(
        "power balance: max |P_total - U_sum * I1| = {:.4e} W ({:.2e} of max |P_total| {:.4e} W)",
        defect,
        defect / p_max,
        p_max,
    );
    println!("wrote {}", case.dir.display());
    Ok(())
}
