//! Build a composite-cylinder mesh and export it as a legacy VTK snapshot.
//!
//! Uses the C2 composite preset (2 mm iron, 4 mm copper, 2 mm iron, all
//! wrapped in air) and attaches the DC conduction solution as cell data so
//! the export carries a physical current density next to the `sigma` and
//! `region` scalars.  Open the file in ParaView to inspect the region
//! partition and the extruded prism-split tetrahedra.
//!
//! Output lands in `out/mesh_export/` (or the directory given as the first
//! argument).

use std::path::PathBuf;

use ecms::config::parse_config;
use ecms::driver::{Model, SolverOpts};
use ecms::mesh::CellClass;
use ecms::post::{cell_fields, write_vtk};

fn main() -> ecms::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out/mesh_export"));
    std::fs::create_dir_all(&out)?;

    let cfg = parse_config("preset = 2\ncylinder = C2")?;
    let (mesh, domains) = cfg.build_mesh()?;
    let model = Model::build(mesh, domains, &SolverOpts::default())?;

    let n_cells = model.mesh.n_cells();
    let count = |class: CellClass| model.domains.class.iter().filter(|&&c| c == class).count();
    println!(
        "mesh: {} nodes, {} tets ({} eddy, {} static, {} insulating), {} boundary faces",
        model.mesh.nodes.len(),
        n_cells,
        count(CellClass::EddyConductor),
        count(CellClass::StaticConductor),
        count(CellClass::Insulator),
        model.mesh.boundary.len(),
    );
    println!(
        "cylinder: {} layers over {} segments, length {:.1} mm",
        model.mesh.plane_z.len() - 1,
        model.mesh.layer_segment.iter().max().map_or(0, |m| m + 1),
        model.mesh.plane_z.last().unwrap() * 1e3,
    );

    // DC fields at the excitation amplitude; the vector potential is zero, so
    // the exported B is zero and j is the conduction density alone.
    let zeros = vec![0.0; model.edges.edges.len()];
    let (j, b) = cell_fields(
        &model.mesh,
        &model.domains,
        &model.edges,
        &model.dc.phi,
        cfg.excitation.amplitude,
        &zeros,
        &zeros,
    );
    let path = out.join("mesh.vtk");
    write_vtk(&path, &model.mesh, &model.domains, &j, &b)?;
    println!("wrote {}", path.display());
    Ok(())
}
