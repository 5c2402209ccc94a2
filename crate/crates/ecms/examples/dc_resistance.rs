//! Conduction step against the resistor formula.
//!
//! On the homogeneous iron cylinder the unit-current potential is linear in
//! `z`, which lies inside the P1 space, so the computed port voltage must
//! match `V1 = -I1 L / (sigma A)` to solver precision when `A` is the area
//! of the meshed polygon (not of the ideal circle).  The example prints the
//! computed resistance, the polygon-area formula and the circle-area formula;
//! the gap to the last one is the area defect of the polygonal cross section.

use ecms::config::{parse_config, SIGMA_IRON};
use ecms::driver::{Model, SolverOpts};
use ecms::mesh::CellClass;

fn main() -> ecms::Result<()> {
    let cfg = parse_config("preset = 1")?;
    let (mesh, domains) = cfg.build_mesh()?;
    let model = Model::build(mesh, domains, &SolverOpts::default())?;

    let length = *model.mesh.plane_z.last().unwrap();
    // Conductor volume / length recovers the polygon area of the core disk.
    let volume: f64 = (0..model.mesh.n_cells())
        .filter(|&c| model.domains.class[c] == CellClass::EddyConductor)
        .map(|c| model.mesh.tet_volume(c))
        .sum();
    let area_poly = volume / length;
    let area_circle = std::f64::consts::PI * cfg.disk.r_core.powi(2);

    // v1 is the port voltage per unit port current, so -v1 is the DC
    // resistance of the core.
    let r_fe = -model.dc.v1;
    let r_poly = length / (SIGMA_IRON * area_poly);
    let r_circle = length / (SIGMA_IRON * area_circle);

    println!("core: L {:.1} mm, polygon area {:.6e} m^2 (circle {:.6e})", length * 1e3, area_poly, area_circle);
    println!("computed resistance   {r_fe:.12e} ohm");
    println!("L / (sigma A_polygon) {r_poly:.12e} ohm   (rel diff {:.2e})", (r_fe - r_poly).abs() / r_poly);
    println!("L / (sigma A_circle)  {r_circle:.12e} ohm   (rel diff {:.2e})", (r_fe - r_circle).abs() / r_circle);
    println!(
        "conduction solve: {} iterations, relative residual {:.2e}",
        model.dc.report.iterations, model.dc.report.rel_residual,
    );
    Ok(())
}
