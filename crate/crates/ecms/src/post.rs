//! Postprocessing: error norms against the closed-form cylinder solution,
//! convergence slopes, CSV records and legacy VTK snapshots.
//!
//! Field reconstruction follows the discretization exactly: the current
//! density is `sigma (-I1 grad phi_unit - dA/dt)` in eddy-current
//! conductors and `sigma (-I1 grad phi_unit)` where eddy currents are
//! suppressed; the flux density is the elementwise constant `curl A`.
//! Volume errors integrate with the same four-point rule as the assembly,
//! cross-section errors use the three edge midpoints of each face
//! (exact for quadratics on the face).
//!
//! Relative errors are reported as time-integrated norms over a window,
//! `sqrt(int ||num||^2 dt / int ||ref||^2 dt)` with trapezoidal
//! integration over the emitted steps, so a whole period near the end of a
//! run characterizes the periodic regime rather than a single phase.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::analytic::{time_sample, EddyCylinder, StaticCylinder};
use crate::driver::StepRecord;
use crate::fe::edge::EdgeSystem;
use crate::fe::elem::{Tet, QUAD4};
use crate::fe::{add3, dot3, scale3, sub3};
use crate::mesh::{CellClass, Domains, Mesh, Side};
use crate::{Error, Result};

/// Azimuthal unit vector and radius of a point; the axis maps to a zero
/// direction so fields that vanish there stay well defined.
fn radius_dir(x: [f64; 3]) -> (f64, [f64; 3]) {
    let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
    if r < 1e-300 {
        (0.0, [0.0; 3])
    } else {
        (r, [-x[1] / r, x[0] / r, 0.0])
    }
}

/// The oracle carries the port-current phasor, and positive port current
/// leaves the device through port 1 at `z = 0`: the analytic cylinder's
/// axial direction is `-z` on this mesh, and its azimuthal direction flips
/// with it.
const AXIAL_ORIENTATION: f64 = -1.0;

/// Sampled reference flux density at time `t` (`dir` is the right-handed
/// azimuthal unit vector around `+z`).
fn sample_azimuthal(phasor: Complex64, omega: f64, t: f64, dir: [f64; 3]) -> [f64; 3] {
    scale3(dir, AXIAL_ORIENTATION * time_sample(phasor, omega, t))
}

/// Sampled reference current density at time `t`.
fn sample_axial(phasor: Complex64, omega: f64, t: f64) -> [f64; 3] {
    [0.0, 0.0, AXIAL_ORIENTATION * time_sample(phasor, omega, t)]
}

/// Volume error accumulator against one eddy-current cylinder covering the
/// whole conductor (the homogeneous validation case).  The current-density
/// error integrates over conductor cells, the flux-density error over the
/// entire domain.
pub struct VolumeError {
    oracle: EddyCylinder,
    cells: Vec<VolCell>,
}

struct VolCell {
    volume: f64,
    sigma: f64,
    class: CellClass,
    grads: [[f64; 3]; 4],
    grad_phi: [f64; 3],
    /// Cell-to-edge connectivity copied from the edge system.
    conn: [(u32, f64); 6],
    /// Quadrature point positions.
    qp: [[f64; 3]; 4],
}

/// Instantaneous squared norms: (num_j, den_j, num_b, den_b).
pub type ErrorParts = (f64, f64, f64, f64);

impl VolumeError {
    pub fn new(
        mesh: &Mesh,
        domains: &Domains,
        edges: &EdgeSystem,
        phi_unit: &[f64],
        oracle: EddyCylinder,
    ) -> Self {
        let cells = (0..mesh.n_cells())
            .map(|c| {
                let tet = Tet::from_mesh(mesh, c);
                let t = mesh.tets[c];
                let sigma = domains.sigma[c];
                let grad_phi = if sigma > 0.0 {
                    tet.grad_interp([
                        phi_unit[t[0]],
                        phi_unit[t[1]],
                        phi_unit[t[2]],
                        phi_unit[t[3]],
                    ])
                } else {
                    [0.0; 3]
                };
                let mut qp = [[0.0; 3]; 4];
                for (q, &(lambda, _)) in QUAD4.iter().enumerate() {
                    qp[q] = tet.point_at(lambda);
                }
                VolCell {
                    volume: tet.volume,
                    sigma,
                    class: domains.class[c],
                    grads: tet.grads,
                    grad_phi,
                    conn: edges.cell_edges[c],
                    qp,
                }
            })
            .collect();
        VolumeError { oracle, cells }
    }

    /// Squared error and reference norms at one instant.
    pub fn at_step(&self, t: f64, i1: f64, a_edges: &[f64], da_edges: &[f64]) -> ErrorParts {
        let om = self.oracle.omega;
        let (mut nj, mut dj, mut nb, mut db) = (0.0, 0.0, 0.0, 0.0);
        for cell in &self.cells {
            let tet = Tet { verts: [[0.0; 3]; 4], grads: cell.grads, volume: cell.volume };
            // constant flux density of the cell
            let curls = tet.edge_curls();
            let mut b = [0.0; 3];
            for (k, &(id, sign)) in cell.conn.iter().enumerate() {
                b = add3(b, scale3(curls[k], sign * a_edges[id as usize]));
            }
            for (q, &(lambda, w)) in QUAD4.iter().enumerate() {
                let wv = w * cell.volume;
                let (r, dir) = radius_dir(cell.qp[q]);
                let b_ref = sample_azimuthal(self.oracle.b_phasor(r), om, t, dir);
                let diff = sub3(b, b_ref);
                nb += wv * dot3(diff, diff);
                db += wv * dot3(b_ref, b_ref);
                if cell.sigma > 0.0 {
                    let mut e = scale3(cell.grad_phi, -i1);
                    if cell.class == CellClass::EddyConductor {
                        let basis = tet.whitney_at(lambda);
                        for (k, &(id, sign)) in cell.conn.iter().enumerate() {
                            e = add3(e, scale3(basis[k], -sign * da_edges[id as usize]));
                        }
                    }
                    let j = scale3(e, cell.sigma);
                    let j_ref = sample_axial(self.oracle.j_phasor(r), om, t);
                    let diff = sub3(j, j_ref);
                    nj += wv * dot3(diff, diff);
                    dj += wv * dot3(j_ref, j_ref);
                }
            }
        }
        (nj, dj, nb, db)
    }
}

/// Reference solution on one cross-section plane.
///
/// A magneto-static conductor driven at frequency `omega` follows the
/// static profile scaled by the instantaneous current, so the static
/// variant carries the driving frequency alongside the shape (zero for a
/// genuinely constant excitation).
#[derive(Clone, Debug)]
pub enum SectionOracle {
    Eddy(EddyCylinder),
    Static(StaticCylinder, f64),
}

impl SectionOracle {
    fn j_phasor(&self, r: f64) -> Complex64 {
        match self {
            SectionOracle::Eddy(o) => o.j_phasor(r),
            SectionOracle::Static(o, _) => o.j_phasor(r),
        }
    }

    fn omega(&self) -> f64 {
        match self {
            SectionOracle::Eddy(o) => o.omega,
            SectionOracle::Static(_, omega) => *omega,
        }
    }
}

/// Current-density error over the conductor part of one cross-section
/// plane, sampled on the tetrahedron faces lying in that plane.
pub struct CrossSection {
    oracle: SectionOracle,
    faces: Vec<SectFace>,
}

struct SectFace {
    area: f64,
    sigma: f64,
    class: CellClass,
    grads: [[f64; 3]; 4],
    grad_phi: [f64; 3],
    conn: [(u32, f64); 6],
    /// Midpoints of the face edges with their barycentric coordinates.
    mid: [([f64; 3], [f64; 4]); 3],
}

impl CrossSection {
    pub fn new(
        mesh: &Mesh,
        domains: &Domains,
        edges: &EdgeSystem,
        phi_unit: &[f64],
        plane: usize,
        side: Side,
        oracle: SectionOracle,
    ) -> Result<Self> {
        let mut faces = Vec::new();
        for (nodes, cell) in mesh.plane_faces(plane, side) {
            if domains.sigma[cell] <= 0.0 {
                continue;
            }
            let t = mesh.tets[cell];
            let tet = Tet::from_mesh(mesh, cell);
            let local: Vec<usize> = nodes
                .iter()
                .map(|&n| {
                    t.iter()
                        .position(|&v| v == n)
                        .ok_or_else(|| Error::Setup(format!("face node {n} not in cell {cell}")))
                })
                .collect::<Result<_>>()?;
            let p: Vec<[f64; 3]> = nodes.iter().map(|&n| mesh.nodes[n]).collect();
            let e1 = sub3(p[1], p[0]);
            let e2 = sub3(p[2], p[0]);
            let area = 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]).abs();
            let mut mid = [([0.0; 3], [0.0; 4]); 3];
            for (m, (a, b)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
                let x = scale3(add3(p[a], p[b]), 0.5);
                let mut lambda = [0.0; 4];
                lambda[local[a]] += 0.5;
                lambda[local[b]] += 0.5;
                mid[m] = (x, lambda);
            }
            faces.push(SectFace {
                area,
                sigma: domains.sigma[cell],
                class: domains.class[cell],
                grads: tet.grads,
                grad_phi: tet.grad_interp([
                    phi_unit[t[0]],
                    phi_unit[t[1]],
                    phi_unit[t[2]],
                    phi_unit[t[3]],
                ]),
                conn: edges.cell_edges[cell],
                mid,
            });
        }
        if faces.is_empty() {
            return Err(Error::Setup(format!("plane {plane} has no conductor faces")));
        }
        Ok(CrossSection { oracle, faces })
    }

    /// Squared error and reference norms at one instant: (num, den).
    pub fn at_step(&self, t: f64, i1: f64, da_edges: &[f64]) -> (f64, f64) {
        let (mut num, mut den) = (0.0, 0.0);
        for face in &self.faces {
            let tet = Tet { verts: [[0.0; 3]; 4], grads: face.grads, volume: 1.0 };
            for &(x, lambda) in &face.mid {
                let wa = face.area / 3.0;
                let mut e = scale3(face.grad_phi, -i1);
                if face.class == CellClass::EddyConductor {
                    let basis = tet.whitney_at(lambda);
                    for (k, &(id, sign)) in face.conn.iter().enumerate() {
                        e = add3(e, scale3(basis[k], -sign * da_edges[id as usize]));
                    }
                }
                let j = scale3(e, face.sigma);
                let (r, _) = radius_dir(x);
                let j_ref = sample_axial(self.oracle.j_phasor(r), self.oracle.omega(), t);
                let diff = sub3(j, j_ref);
                num += wa * dot3(diff, diff);
                den += wa * dot3(j_ref, j_ref);
            }
        }
        (num, den)
    }
}

/// Trapezoidal accumulator of squared norms over a time window.
#[derive(Clone, Debug)]
pub struct WindowNorm {
    t0: f64,
    t1: f64,
    samples: Vec<(f64, f64, f64)>,
}

impl WindowNorm {
    pub fn new(t0: f64, t1: f64) -> Self {
        WindowNorm { t0, t1, samples: Vec::new() }
    }

    /// Offer one sample; ignored outside the window (with slack for
    /// floating-point step times).
    pub fn add(&mut self, t: f64, num: f64, den: f64) {
        let slack = 1e-9 * (self.t1 - self.t0).abs();
        if t >= self.t0 - slack && t <= self.t1 + slack {
            self.samples.push((t, num, den));
        }
    }

    fn integrate(&self, pick: impl Fn(&(f64, f64, f64)) -> f64) -> f64 {
        let mut acc = 0.0;
        for pair in self.samples.windows(2) {
            let h = pair[1].0 - pair[0].0;
            acc += 0.5 * h * (pick(&pair[0]) + pick(&pair[1]));
        }
        acc
    }

    /// `sqrt(int num dt / int den dt)`.
    pub fn relative(&self) -> f64 {
        let den = self.integrate(|s| s.2);
        if den <= 0.0 {
            return f64::NAN;
        }
        (self.integrate(|s| s.1) / den).sqrt()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need at least two points for a slope");
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (a, b) in lx.iter().zip(&ly) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    sxy / sxx
}

/// Per-cell current and flux densities for export; `j` uses the cell
/// centroid, `B` is elementwise constant.
pub fn cell_fields(
    mesh: &Mesh,
    domains: &Domains,
    edges: &EdgeSystem,
    phi_unit: &[f64],
    i1: f64,
    a_edges: &[f64],
    da_edges: &[f64],
) -> (Vec<[f64; 3]>, Vec<[f64; 3]>) {
    let centroid = [0.25; 4];
    let mut j = Vec::with_capacity(mesh.n_cells());
    let mut b = Vec::with_capacity(mesh.n_cells());
    for cell in 0..mesh.n_cells() {
        let tet = Tet::from_mesh(mesh, cell);
        let conn = &edges.cell_edges[cell];
        let curls = tet.edge_curls();
        let mut bc = [0.0; 3];
        for (k, &(id, sign)) in conn.iter().enumerate() {
            bc = add3(bc, scale3(curls[k], sign * a_edges[id as usize]));
        }
        b.push(bc);
        let sigma = domains.sigma[cell];
        if sigma > 0.0 {
            let t = mesh.tets[cell];
            let gphi = tet.grad_interp([
                phi_unit[t[0]],
                phi_unit[t[1]],
                phi_unit[t[2]],
                phi_unit[t[3]],
            ]);
            let mut e = scale3(gphi, -i1);
            if domains.class[cell] == CellClass::EddyConductor {
                let basis = tet.whitney_at(centroid);
                for (k, &(id, sign)) in conn.iter().enumerate() {
                    e = add3(e, scale3(basis[k], -sign * da_edges[id as usize]));
                }
            }
            j.push(scale3(e, sigma));
        } else {
            j.push([0.0; 3]);
        }
    }
    (j, b)
}

/// Exact column set of the records CSV.
pub const RECORDS_HEADER: &str =
    "t, I1, I1_dc, I1_ec, V1_dc, V1_ec, U_sum, P_ohm, P_mag, P_total, U_power";

fn fmt_field(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write the per-step records; the masked normalized voltage becomes `nan`.
pub fn write_records(path: &Path, records: &[StepRecord]) -> Result<()> {
    let mut out = String::new();
    out.push_str(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        let u = match r.u_power {
            Some(v) => fmt_field(v),
            None => "nan".to_string(),
        };
        let _ = writeln!(
            out,
            "{}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}",
            fmt_field(r.t),
            fmt_field(r.i1),
            fmt_field(r.i1_dc),
            fmt_field(r.i1_ec),
            fmt_field(r.v1_dc),
            fmt_field(r.v1_ec),
            fmt_field(r.u_sum),
            fmt_field(r.p_ohm),
            fmt_field(r.p_mag),
            fmt_field(r.p_total),
            u,
        );
    }
    std::fs::write(path, out).map_err(Error::Io)
}

/// Read records written by [`write_records`].
pub fn read_records(path: &Path) -> Result<Vec<StepRecord>> {
    let text = std::fs::read_to_string(path).map_err(Error::Io)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == RECORDS_HEADER => {}
        other => {
            return Err(Error::Setup(format!(
                "records header mismatch: got {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut records = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Setup(format!("records line {}: {e}", ln + 2)))
            })
            .collect::<Result<_>>()?;
        if v.len() != 11 {
            return Err(Error::Setup(format!(
                "records line {}: expected 11 fields, got {}",
                ln + 2,
                v.len()
            )));
        }
        records.push(StepRecord {
            t: v[0],
            i1: v[1],
            i1_dc: v[2],
            i1_ec: v[3],
            v1_dc: v[4],
            v1_ec: v[5],
            u_sum: v[6],
            p_ohm: v[7],
            p_mag: v[8],
            p_total: v[9],
            u_power: if v[10].is_nan() { None } else { Some(v[10]) },
        });
    }
    Ok(records)
}

/// Write per-step relative field errors: `t, err_j, err_b`.
pub fn write_errors(path: &Path, rows: &[(f64, f64, f64)]) -> Result<()> {
    let mut out = String::from("t, err_j, err_b\n");
    for &(t, ej, eb) in rows {
        let _ = writeln!(out, "{}, {}, {}", fmt_field(t), fmt_field(ej), fmt_field(eb));
    }
    std::fs::write(path, out).map_err(Error::Io)
}

/// Radial profile of the closed-form solution: `r, Re j, Im j, |j|,
/// Re B, Im B, |B|` at `n` evenly spaced radii up to `r_max`.
pub fn write_oracle_profile(
    path: &Path,
    oracle: &EddyCylinder,
    r_max: f64,
    n: usize,
) -> Result<()> {
    if n < 2 || !(r_max > 0.0) {
        return Err(Error::Setup(format!("oracle profile needs n >= 2, r_max > 0; got {n}, {r_max}")));
    }
    let mut out = String::from("r, re_j, im_j, abs_j, re_b, im_b, abs_b\n");
    for i in 0..n {
        let r = r_max * i as f64 / (n - 1) as f64;
        let j = oracle.j_phasor(r);
        let b = oracle.b_phasor(r.max(1e-12 * r_max));
        let _ = writeln!(
            out,
            "{}, {}, {}, {}, {}, {}, {}",
            fmt_field(r),
            fmt_field(j.re),
            fmt_field(j.im),
            fmt_field(j.norm()),
            fmt_field(b.re),
            fmt_field(b.im),
            fmt_field(b.norm()),
        );
    }
    std::fs::write(path, out).map_err(Error::Io)
}

/// Legacy ASCII VTK snapshot with per-cell vectors `j`, `B` and scalars
/// `sigma`, `region` (0 eddy conductor, 1 static conductor, 2 insulator).
pub fn write_vtk(
    path: &Path,
    mesh: &Mesh,
    domains: &Domains,
    j: &[[f64; 3]],
    b: &[[f64; 3]],
) -> Result<()> {
    let n_cells = mesh.n_cells();
    if j.len() != n_cells || b.len() != n_cells {
        return Err(Error::Setup("field length does not match cell count".into()));
    }
    let file = std::fs::File::create(path).map_err(Error::Io)?;
    let mut w = std::io::BufWriter::new(file);
    let r = (|| -> std::io::Result<()> {
        writeln!(w, "# vtk DataFile Version 3.0")?;
        writeln!(w, "coupled eddy-current / magneto-static snapshot")?;
        writeln!(w, "ASCII")?;
        writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
        writeln!(w, "POINTS {} double", mesh.nodes.len())?;
        for p in &mesh.nodes {
            writeln!(w, "{:.9e} {:.9e} {:.9e}", p[0], p[1], p[2])?;
        }
        writeln!(w, "CELLS {} {}", n_cells, 5 * n_cells)?;
        for t in &mesh.tets {
            writeln!(w, "4 {} {} {} {}", t[0], t[1], t[2], t[3])?;
        }
        writeln!(w, "CELL_TYPES {n_cells}")?;
        for _ in 0..n_cells {
            writeln!(w, "10")?;
        }
        writeln!(w, "CELL_DATA {n_cells}")?;
        writeln!(w, "VECTORS j double")?;
        for v in j {
            writeln!(w, "{:.9e} {:.9e} {:.9e}", v[0], v[1], v[2])?;
        }
        writeln!(w, "VECTORS B double")?;
        for v in b {
            writeln!(w, "{:.9e} {:.9e} {:.9e}", v[0], v[1], v[2])?;
        }
        writeln!(w, "SCALARS sigma double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for c in 0..n_cells {
            writeln!(w, "{:.9e}", domains.sigma[c])?;
        }
        writeln!(w, "SCALARS region int 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for c in 0..n_cells {
            let tag = match domains.class[c] {
                CellClass::EddyConductor => 0,
                CellClass::StaticConductor => 1,
                CellClass::Insulator => 2,
            };
            writeln!(w, "{tag}")?;
        }
        Ok(())
    })();
    r.map_err(Error::Io)
}
