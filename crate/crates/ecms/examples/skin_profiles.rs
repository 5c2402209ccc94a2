//! Analytic skin-effect profiles for the standard core materials.
//!
//! Evaluates the closed-form infinite-cylinder solution for an iron and a
//! copper core of radius 3 mm carrying 100 A at 50 Hz and writes one radial
//! profile per material (columns: `r, re_j, im_j, abs_j, re_b, im_b, abs_b`).
//! Positive port current leaves the device through port 1, so the core
//! carries the phasor `-I0` along the axis; the profiles follow that
//! convention.
//!
//! Output lands in `out/skin_profiles/` (or the directory given as the first
//! argument).

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;

use ecms::analytic::EddyCylinder;
use ecms::config::{FREQUENCY, MU_R_IRON, R_CORE, SIGMA_COPPER, SIGMA_IRON};
use ecms::post::write_oracle_profile;
use ecms::MU0;

fn main() -> ecms::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out/skin_profiles"));
    std::fs::create_dir_all(&out)?;

    let omega = 2.0 * PI * FREQUENCY;
    let current = Complex64::new(-100.0, 0.0);
    let r_max = 8.0e-3;
    let samples = 400;

    let cases = [
        ("iron", SIGMA_IRON, MU0 * MU_R_IRON),
        ("copper", SIGMA_COPPER, MU0),
    ];
    for (name, sigma, mu) in cases {
        let oracle = EddyCylinder::new(R_CORE, sigma, mu, MU0, omega, current)?;
        let path = out.join(format!("{name}.csv"));
        write_oracle_profile(&path, &oracle, r_max, samples)?;

        let j_axis = oracle.j_phasor(0.0).norm();
        let j_rim = oracle.j_phasor(oracle.radius).norm();
        println!(
            "{name:>6}: skin depth {:.4e} m  (R/delta {:.2}),  |J(R)|/|J(0)| {:.2}",
            oracle.delta,
            oracle.radius / oracle.delta,
            j_rim / j_axis,
        );
        println!("        wrote {}", path.display());
    }
    Ok(())
}
