//! Port voltage of a composite cylinder, reconstructed from power.
//!
//! Runs the C2 iron-copper-iron cylinder twice: once with the copper
//! segment as an eddy-current conductor (preset 2) and once with copper
//! frozen as a magneto-static conductor (preset 3).  In the static variant
//! the circuit voltage `U_sum` misses the inductive contribution of the
//! copper eddy currents, but the power functional still sees the full field
//! energy: `U_power = P_total / I1` recovers the eddy-variant voltage from
//! the static run.
//!
//! The example prints the final-period RMS mismatch of the reconstruction
//! next to the much larger RMS gap between the two circuit voltages.
//! `U_power` is masked near current zero crossings; masked samples are
//! skipped in the RMS.
//!
//! Output lands in `out/voltage_reconstruction/` (or the directory given as
//! the first argument).

use std::path::PathBuf;

use ecms::config::{parse_config, run_case};
use ecms::driver::StepRecord;

fn rms(values: &[f64]) -> f64 {
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

/// Records of the final period, assuming both runs share one schedule.
fn final_period(records: &[StepRecord], period: f64) -> &[StepRecord] {
    let t_end = records.last().unwrap().t;
    let start = records.iter().position(|r| r.t > t_end - period + 1e-12).unwrap();
    &records[start..]
}

fn main() -> ecms::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out/voltage_reconstruction"));

    let eddy = run_case(&parse_config("preset = 2\ncylinder = C2")?, &out)?;
    let frozen = run_case(&parse_config("preset = 3\ncylinder = C2")?, &out)?;
    println!("wrote {}", eddy.dir.display());
    println!("wrote {}", frozen.dir.display());

    let period = 1.0 / 50.0;
    let win_eddy = final_period(&eddy.run.records, period);
    let win_frozen = final_period(&frozen.run.records, period);
    assert_eq!(win_eddy.len(), win_frozen.len(), "runs share one schedule");

    let u_ref = rms(&win_eddy.iter().map(|r| r.u_sum).collect::<Vec<_>>());
    let mut recon = Vec::new();
    let mut circuit = Vec::new();
    for (a, b) in win_eddy.iter().zip(win_frozen) {
        if let Some(up) = b.u_power {
            recon.push(up - a.u_sum);
        }
        circuit.push(b.u_sum - a.u_sum);
    }

    println!("final-period RMS of the eddy-variant voltage: {u_ref:.4e} V");
    println!(
        "power reconstruction from the static run: RMS mismatch {:.4e} V ({:.2}% of RMS, {} masked samples)",
        rms(&recon),
        100.0 * rms(&recon) / u_ref,
        win_eddy.len() - recon.len(),
    );
    println!(
        "circuit voltage of the static run:        RMS mismatch {:.4e} V ({:.2}% of RMS)",
        rms(&circuit),
        100.0 * rms(&circuit) / u_ref,
    );
    Ok(())
}
