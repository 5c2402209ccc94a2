use ecms::config::{convergence_study, measure_case, parse_config};

fn main() {
    let base = parse_config("preset = 1").unwrap();
    let out = std::path::Path::new("/tmp/study_probe");
    let t0 = std::time::Instant::now();
    let mut runner = |cfg: &ecms::config::RunConfig| {
        let s = std::time::Instant::now();
        let r = measure_case(cfg, out);
        if let Ok((cells, ej, eb)) = &r {
            eprintln!("level {} cells {} ej {:.4} eb {:.4}  ({:.1?})", cfg.refinement, cells, ej, eb, s.elapsed());
        }
        r
    };
    let res = convergence_study(&base, &[0, 1, 2], out, &mut runner).unwrap();
    eprintln!("slopes: {:?} {:?}  total {:.1?}", res.slope_j, res.slope_b, t0.elapsed());
}
