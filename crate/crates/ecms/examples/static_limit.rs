//! Constant excitation decaying onto the DC conduction solution.
//!
//! With a constant port current the eddy-current correction is a pure
//! transient: the vector potential diffuses into the core and the current
//! density relaxes onto the Step-1 DC field.  The natural scale is the
//! magnetic diffusion time `tau = mu sigma R^2` (0.170 s for the 3 mm iron
//! core); the slowest mode decays with `tau / j01^2`, about 29 ms, so after
//! five diffusion times nothing measurable remains.
//!
//! The example integrates the preset-1 cylinder to `5 tau`, prints the decay
//! of the Ohmic power towards the DC value and the final relative L2
//! distance between the transient and the DC current density.

use ecms::config::parse_config;
use ecms::driver::{run, Excitation, Model, Schedule, SolverOpts, StepState};
use ecms::post::cell_fields;

fn main() -> ecms::Result<()> {
    let cfg = parse_config("preset = 1")?;
    let (mesh, domains) = cfg.build_mesh()?;
    let opts = SolverOpts::default();
    let model = Model::build(mesh, domains, &opts)?;

    let amplitude = cfg.excitation.amplitude;
    let tau = ecms::MU0 * ecms::config::MU_R_IRON * ecms::config::SIGMA_IRON
        * cfg.disk.r_core.powi(2);
    // dt sits well under the 29 ms mode; much larger steps also starve the
    // correction matrix of its conductor mass term and stall the solver.
    let n_steps = 256;
    let schedule = Schedule::new(5.0 * tau / n_steps as f64, n_steps)?;
    // Frequency zero holds the port current at -amplitude for all t.
    let excitation = Excitation::new(amplitude, 0.0)?;

    let mut last: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    let mut observer = |st: &StepState| {
        last = Some((st.i1, st.a_edges.to_vec(), st.da_edges.to_vec()));
    };
    let out = run(&model, &excitation, &schedule, &opts, Some(&mut observer))?;

    // DC Joule power of the final current; -v1 is the core resistance.
    let p_dc = -model.dc.v1 * amplitude * amplitude;
    println!("tau {:.4e} s, dt {:.4e} s, {} steps to 5 tau", tau, schedule.dt, n_steps);
    println!("   t/tau   |P_ohm - P_dc| / P_dc");
    for r in out.records.iter().step_by(25) {
        println!("  {:6.3}   {:.4e}", r.t / tau, (r.p_ohm - p_dc).abs() / p_dc);
    }

    let (i1, a_edges, da_edges) = last.expect("at least one step ran");
    let (j_full, _) = cell_fields(
        &model.mesh, &model.domains, &model.edges, &model.dc.phi, i1, &a_edges, &da_edges,
    );
    let zeros = vec![0.0; model.edges.edges.len()];
    let (j_dc, _) = cell_fields(
        &model.mesh, &model.domains, &model.edges, &model.dc.phi, i1, &zeros, &zeros,
    );
    let mut num = 0.0;
    let mut den = 0.0;
    for cell in 0..model.mesh.n_cells() {
        let v = model.mesh.tet_volume(cell);
        for k in 0..3 {
            num += v * (j_full[cell][k] - j_dc[cell][k]).powi(2);
            den += v * j_dc[cell][k].powi(2);
        }
    }
    println!(
        "relative L2 distance to the DC current density at 5 tau: {:.4e}",
        (num / den).sqrt(),
    );
    println!(
        "{} solves, {} skipped (steady steps need no correction solve)",
        out.solves, out.skipped,
    );
    Ok(())
}
