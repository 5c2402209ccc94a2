use ecms::config::parse_config;
use ecms::driver::{run, Excitation, Model, Schedule, SolverOpts};

fn main() {
    let cfg = parse_config("preset = 1").unwrap();
    let (mesh, domains) = cfg.build_mesh().unwrap();
    let opts = SolverOpts::default();
    let model = Model::build(mesh, domains, &opts).unwrap();
    let excitation = Excitation::new(100.0, 0.0).unwrap();
    let tau = ecms::MU0 * 1500.0 * 1.0e7 * (3.0e-3f64).powi(2);
    let dt = 5.0 * tau / 256.0;
    for n in [2, 3, 4, 6, 8, 16, 256] {
        let schedule = Schedule::new(dt, n).unwrap();
        match run(&model, &excitation, &schedule, &opts, None) {
            Ok(out) => eprintln!(
                "n={n}: ok, solves {} skipped {} iters {} maxres {:.2e}",
                out.solves, out.skipped, out.cg_iterations, out.max_rel_residual
            ),
            Err(e) => {
                eprintln!("n={n}: {e}");
                break;
            }
        }
    }
}
