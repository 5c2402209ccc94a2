//! Structured tetrahedral meshes of a layered cylinder.
//!
//! The geometry is a circular conductor core of radius `r_core` inside an air
//! mantle of radius `r_outer`, extruded along `z` through a stack of material
//! segments.  The two end faces are the electric ports, the mantle surface is
//! the insulated lateral boundary.
//!
//! Construction is in two stages:
//!
//! 1. a 2D disk triangulation with full node rings, one ring placed *exactly*
//!    at `r_core` so material interfaces never cut cells.  Core rings are
//!    geometrically graded toward the surface (skin depths are small), air
//!    rings are uniform.  Refinement level `l` splits every base ring
//!    interval into `2^l` parts and multiplies the angular count by `2^l`,
//!    so radii are nested across levels;
//! 2. extrusion into prisms (one per triangle and layer) which are split
//!    into three tetrahedra each.  The split picks quad-face diagonals
//!    through the smallest global node id, which makes neighbouring prisms
//!    agree on shared faces and keeps the mesh conforming.
//!
//! Cells are laid out as `cell = (layer * n_tri + tri) * 3 + k`, `k = 0..3`;
//! consumers rely on this to find the cells of a given layer.
//!
//! Classification into eddy-current conductor, magneto-static conductor and
//! insulator is purely geometric (cell centroid against `r_core` and the
//! segment boundaries), so refining a mesh never changes the class of any
//! point.

use crate::{Error, Result};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq)]
pub struct DiskParams {
    pub r_core: f64,
    pub r_outer: f64,
    /// Angular segment count at level 0.
    pub n_theta: usize,
    /// Graded rings inside the core at level 0.
    pub core_rings: usize,
    /// Uniform rings in the air mantle at level 0.
    pub air_rings: usize,
    /// Ratio of successive core ring widths going outward; < 1 concentrates
    /// resolution at the conductor surface.
    pub grading: f64,
}

#[derive(Clone, Debug)]
pub struct DiskTriangulation {
    pub points: Vec<[f64; 2]>,
    /// CCW triangles; node 0 is the disk centre.
    pub triangles: Vec<[usize; 3]>,
    /// Per-triangle flag: inside the conductor core.
    pub core: Vec<bool>,
    /// Node ring radii, innermost first; `ring_radii[core_ring_count-1]` is
    /// exactly `r_core` and the last entry exactly `r_outer`.
    pub ring_radii: Vec<f64>,
    pub n_theta: usize,
    pub core_ring_count: usize,
}

impl DiskTriangulation {
    pub fn node_count(&self) -> usize {
        1 + self.ring_radii.len() * self.n_theta
    }

    /// Nodes of the outermost ring.
    pub fn outer_ring_start(&self) -> usize {
        1 + (self.ring_radii.len() - 1) * self.n_theta
    }
}

pub fn build_disk(p: &DiskParams, level: u32) -> Result<DiskTriangulation> {
    if p.r_core <= 0.0 || p.r_outer <= p.r_core {
        return Err(Error::Geometry(format!(
            "need 0 < r_core < r_outer, got {} and {}",
            p.r_core, p.r_outer
        )));
    }
    if p.n_theta < 3 || p.core_rings == 0 || p.air_rings == 0 {
        return Err(Error::Geometry("need n_theta >= 3 and at least one ring per zone".into()));
    }
    if !(p.grading > 0.0 && p.grading <= 1.0) {
        return Err(Error::Geometry(format!("grading {} outside (0, 1]", p.grading)));
    }
    let split = 1usize << level;
    let n = p.n_theta * split;

    // base core widths w0 * g^j, scaled so they sum to r_core
    let g = p.grading;
    let mut base: Vec<f64> = (0..p.core_rings).map(|j| g.powi(j as i32)).collect();
    let s: f64 = base.iter().sum();
    for w in &mut base {
        *w *= p.r_core / s;
    }
    let air_w = (p.r_outer - p.r_core) / p.air_rings as f64;
    base.extend(std::iter::repeat(air_w).take(p.air_rings));

    // refined radii: each base interval split into `split` equal parts; pin
    // the core surface and the outer rim to their exact values
    let mut radii = Vec::with_capacity(base.len() * split);
    let mut r0 = 0.0;
    for (bi, w) in base.iter().enumerate() {
        for k in 1..=split {
            radii.push(r0 + w * k as f64 / split as f64);
        }
        r0 += w;
        let exact = if bi + 1 == p.core_rings {
            Some(p.r_core)
        } else if bi + 1 == base.len() {
            Some(p.r_outer)
        } else {
            None
        };
        if let Some(e) = exact {
            *radii.last_mut().unwrap() = e;
            r0 = e;
        }
    }
    let m = radii.len();
    let core_ring_count = p.core_rings * split;

    let mut points = Vec::with_capacity(1 + m * n);
    points.push([0.0, 0.0]);
    for &r in &radii {
        for i in 0..n {
            let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            points.push([r * th.cos(), r * th.sin()]);
        }
    }

    let ring_node = |ring: usize, i: usize| 1 + ring * n + (i % n);
    let mut triangles = Vec::with_capacity(n * (2 * m - 1));
    let mut core = Vec::with_capacity(triangles.capacity());
    for i in 0..n {
        triangles.push([0, ring_node(0, i), ring_node(0, i + 1)]);
        core.push(true); // innermost ring is always inside the core
    }
    for ring in 0..m - 1 {
        // band between ring and ring+1 is core iff its outer ring is at or
        // inside the r_core ring (index core_ring_count - 1)
        let inside = ring + 1 <= core_ring_count - 1;
        for i in 0..n {
            let (pi, pj) = (ring_node(ring, i), ring_node(ring, i + 1));
            let (qi, qj) = (ring_node(ring + 1, i), ring_node(ring + 1, i + 1));
            triangles.push([pi, qi, qj]);
            core.push(inside);
            triangles.push([pi, qj, pj]);
            core.push(inside);
        }
    }

    Ok(DiskTriangulation {
        points,
        triangles,
        core,
        ring_radii: radii,
        n_theta: n,
        core_ring_count,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Material {
    pub name: String,
    pub sigma: f64,
    pub mu_r: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaterialTable {
    pub materials: Vec<Material>,
}

impl MaterialTable {
    pub fn get(&self, id: usize) -> Result<&Material> {
        self.materials
            .get(id)
            .ok_or_else(|| Error::Materials(format!("material id {id} not in table")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub length: f64,
    pub material: usize,
    /// Whether this conductor segment is treated with the time-dependent
    /// eddy-current model (true) or the magneto-static one (false).
    pub eddy: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CylinderSpec {
    pub segments: Vec<Segment>,
    /// Axial layer thickness; must divide every segment length.
    pub layer: f64,
    /// Material id of the air mantle.
    pub air_material: usize,
}

impl CylinderSpec {
    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    Port1,
    Port2,
    Lateral,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundaryFace {
    /// Node order gives the outward normal.
    pub nodes: [usize; 3],
    pub cell: usize,
    pub tag: Tag,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub nodes: Vec<[f64; 3]>,
    /// Positively oriented tetrahedra.
    pub tets: Vec<[usize; 4]>,
    pub boundary: Vec<BoundaryFace>,
    pub disk: DiskTriangulation,
    /// z of each node plane; plane boundaries line up with segment ends.
    pub plane_z: Vec<f64>,
    pub nodes_per_plane: usize,
    /// Provenance: disk triangle and layer of each cell.
    pub cell_tri: Vec<usize>,
    pub cell_layer: Vec<usize>,
    /// Segment index of each layer.
    pub layer_segment: Vec<usize>,
}

impl Mesh {
    pub fn n_cells(&self) -> usize {
        self.tets.len()
    }

    pub fn centroid(&self, cell: usize) -> [f64; 3] {
        let t = self.tets[cell];
        let mut c = [0.0; 3];
        for &v in &t {
            for d in 0..3 {
                c[d] += self.nodes[v][d] * 0.25;
            }
        }
        c
    }

    pub fn tet_volume(&self, cell: usize) -> f64 {
        let [a, b, c, d] = self.tets[cell];
        let e1 = sub(self.nodes[b], self.nodes[a]);
        let e2 = sub(self.nodes[c], self.nodes[a]);
        let e3 = sub(self.nodes[d], self.nodes[a]);
        det3(e1, e2, e3) / 6.0
    }

    /// Cells of one extrusion layer, in construction order.
    pub fn layer_cells(&self, layer: usize) -> std::ops::Range<usize> {
        let per = self.disk.triangles.len() * 3;
        layer * per..(layer + 1) * per
    }

    /// The cell under (`side = Below`) or above each disk triangle at node
    /// plane `plane`, i.e. the cell owning that triangle as a face.
    pub fn plane_faces(&self, plane: usize, side: Side) -> Vec<([usize; 3], usize)> {
        let layer = match side {
            Side::Below => {
                assert!(plane > 0, "no layer below plane 0");
                plane - 1
            }
            Side::Above => {
                assert!(plane + 1 < self.plane_z.len(), "no layer above last plane");
                plane
            }
        };
        let nd = self.nodes_per_plane;
        let mut out = Vec::with_capacity(self.disk.triangles.len());
        for (ti, tri) in self.disk.triangles.iter().enumerate() {
            let want: [usize; 3] = [plane * nd + tri[0], plane * nd + tri[1], plane * nd + tri[2]];
            let mut found = None;
            for cell in self.layer_cells(layer) {
                if self.cell_tri[cell] != ti {
                    continue;
                }
                let t = self.tets[cell];
                if want.iter().all(|w| t.contains(w)) {
                    found = Some(cell);
                    break;
                }
            }
            out.push((want, found.expect("every prism face triangle belongs to one tet")));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Split one prism into three tets.  `b` and `t` are the bottom and top
/// triangle nodes (same winding).  Diagonals of all three quad faces run
/// through the quad's smallest global node id, so adjacent prisms always
/// agree on the shared face.
fn split_prism(b: [usize; 3], t: [usize; 3]) -> [[usize; 4]; 3] {
    let mut v = [b[0], b[1], b[2], t[0], t[1], t[2]];
    // bring the smallest id to position 0 by prism rotations / the top-bottom
    // flip, both of which keep triangles opposite and quads intact
    let min_pos = (0..6).min_by_key(|&i| v[i]).unwrap();
    if min_pos >= 3 {
        v = [v[3], v[5], v[4], v[0], v[2], v[1]];
    }
    let min_pos = (0..3).min_by_key(|&i| v[i]).unwrap();
    for _ in 0..min_pos {
        v = [v[1], v[2], v[0], v[4], v[5], v[3]];
    }
    debug_assert!(v[0] == *[v[0], v[1], v[2], v[3], v[4], v[5]].iter().min().unwrap());
    // remaining quad (v1, v2, v5, v4): diagonal through its smallest vertex
    if v[1].min(v[5]) < v[2].min(v[4]) {
        [[v[0], v[1], v[2], v[5]], [v[0], v[1], v[5], v[4]], [v[0], v[4], v[5], v[3]]]
    } else {
        [[v[0], v[1], v[2], v[4]], [v[0], v[4], v[2], v[5]], [v[0], v[4], v[5], v[3]]]
    }
}

/// Extrude a disk triangulation along the segment stack.
pub fn extrude(disk: &DiskTriangulation, spec: &CylinderSpec) -> Result<Mesh> {
    if spec.segments.is_empty() {
        return Err(Error::Geometry("segment list is empty".into()));
    }
    if spec.layer <= 0.0 {
        return Err(Error::Geometry(format!("layer thickness {} must be positive", spec.layer)));
    }
    // layer counts per segment; thickness must divide each length
    let mut layer_segment = Vec::new();
    let mut plane_z = vec![0.0];
    for (si, seg) in spec.segments.iter().enumerate() {
        if seg.length <= 0.0 {
            return Err(Error::Geometry(format!("segment {si} has non-positive length")));
        }
        let count = (seg.length / spec.layer).round();
        if count < 1.0 || (seg.length - count * spec.layer).abs() > 1e-9 * seg.length {
            return Err(Error::Geometry(format!(
                "layer thickness {} does not divide segment {si} length {}",
                spec.layer, seg.length
            )));
        }
        let count = count as usize;
        let z0 = *plane_z.last().unwrap();
        for k in 1..=count {
            plane_z.push(z0 + seg.length * k as f64 / count as f64);
            layer_segment.push(si);
        }
    }
    let n_layers = layer_segment.len();
    let nd = disk.node_count();

    let mut nodes = Vec::with_capacity(nd * plane_z.len());
    for &z in &plane_z {
        for p in &disk.points {
            nodes.push([p[0], p[1], z]);
        }
    }

    let mut tets = Vec::with_capacity(disk.triangles.len() * n_layers * 3);
    let mut cell_tri = Vec::with_capacity(tets.capacity());
    let mut cell_layer = Vec::with_capacity(tets.capacity());
    for layer in 0..n_layers {
        let (lo, hi) = (layer * nd, (layer + 1) * nd);
        for (ti, tri) in disk.triangles.iter().enumerate() {
            let b = [lo + tri[0], lo + tri[1], lo + tri[2]];
            let t = [hi + tri[0], hi + tri[1], hi + tri[2]];
            for mut tet in split_prism(b, t) {
                // enforce positive orientation; swapping two nodes keeps the
                // face set, so conformity is unaffected
                let vol = det3(
                    sub(nodes[tet[1]], nodes[tet[0]]),
                    sub(nodes[tet[2]], nodes[tet[0]]),
                    sub(nodes[tet[3]], nodes[tet[0]]),
                );
                if vol == 0.0 {
                    return Err(Error::Geometry(format!(
                        "degenerate tet from triangle {ti} layer {layer}"
                    )));
                }
                if vol < 0.0 {
                    tet.swap(2, 3);
                }
                tets.push(tet);
                cell_tri.push(ti);
                cell_layer.push(layer);
            }
        }
    }

    let boundary = extract_boundary(&nodes, &tets, nd, plane_z.len(), disk)?;

    Ok(Mesh {
        nodes,
        tets,
        boundary,
        disk: disk.clone(),
        plane_z,
        nodes_per_plane: nd,
        cell_tri,
        cell_layer,
        layer_segment,
    })
}

/// Outward-oriented faces of a positively oriented tet.
pub const TET_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];

fn extract_boundary(
    nodes: &[[f64; 3]],
    tets: &[[usize; 4]],
    nodes_per_plane: usize,
    n_planes: usize,
    disk: &DiskTriangulation,
) -> Result<Vec<BoundaryFace>> {
    let mut counts: HashMap<[usize; 3], u32> = HashMap::with_capacity(tets.len() * 2);
    for tet in tets {
        for f in &TET_FACES {
            let mut key = [tet[f[0]], tet[f[1]], tet[f[2]]];
            key.sort_unstable();
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    if let Some((k, c)) = counts.iter().find(|(_, &c)| c > 2) {
        return Err(Error::Geometry(format!("non-manifold face {k:?} shared by {c} cells")));
    }
    let outer_start = disk.outer_ring_start();
    let last_plane = n_planes - 1;
    let mut boundary = Vec::new();
    for (ci, tet) in tets.iter().enumerate() {
        for f in &TET_FACES {
            let tri = [tet[f[0]], tet[f[1]], tet[f[2]]];
            let mut key = tri;
            key.sort_unstable();
            if counts[&key] != 1 {
                continue;
            }
            let plane = |v: usize| v / nodes_per_plane;
            let in_disk = |v: usize| v % nodes_per_plane;
            let tag = if tri.iter().all(|&v| plane(v) == 0) {
                Tag::Port1
            } else if tri.iter().all(|&v| plane(v) == last_plane) {
                Tag::Port2
            } else if tri.iter().all(|&v| in_disk(v) >= outer_start) {
                Tag::Lateral
            } else {
                let pts: Vec<[f64; 3]> = tri.iter().map(|&v| nodes[v]).collect();
                return Err(Error::Geometry(format!("boundary face {pts:?} matches no tag")));
            };
            boundary.push(BoundaryFace { nodes: tri, cell: ci, tag });
        }
    }
    Ok(boundary)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellClass {
    /// Conductor advanced by the eddy-current model.
    EddyConductor,
    /// Conductor restricted to the magneto-static model.
    StaticConductor,
    /// Non-conducting; always part of the eddy-current region.
    Insulator,
}

#[derive(Clone, Debug)]
pub struct Domains {
    pub class: Vec<CellClass>,
    pub material: Vec<usize>,
    pub sigma: Vec<f64>,
    /// Reluctivity 1/mu per cell.
    pub nu: Vec<f64>,
}

impl Domains {
    /// sigma-weighted mass is assembled only here.
    pub fn in_eddy(&self, cell: usize) -> bool {
        self.class[cell] != CellClass::StaticConductor
    }
}

/// Geometric classification of every cell plus material lookup.
pub fn classify(mesh: &Mesh, spec: &CylinderSpec, table: &MaterialTable) -> Result<Domains> {
    let air = table.get(spec.air_material)?;
    if air.sigma != 0.0 {
        return Err(Error::Materials(format!(
            "air material '{}' must have sigma = 0, got {}",
            air.name, air.sigma
        )));
    }
    for (si, seg) in spec.segments.iter().enumerate() {
        let m = table.get(seg.material)?;
        if m.sigma <= 0.0 {
            return Err(Error::Materials(format!(
                "segment {si} material '{}' has sigma {} <= 0: no conductive path between the \
                 ports",
                m.name, m.sigma
            )));
        }
    }
    // segment end coordinates for the z lookup
    let mut ends = Vec::with_capacity(spec.segments.len());
    let mut z = 0.0;
    for seg in &spec.segments {
        z += seg.length;
        ends.push(z);
    }
    let r_core = mesh.disk.ring_radii[mesh.disk.core_ring_count - 1];

    let n = mesh.n_cells();
    let mut class = Vec::with_capacity(n);
    let mut material = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    for cell in 0..n {
        let c = mesh.centroid(cell);
        let r = (c[0] * c[0] + c[1] * c[1]).sqrt();
        let (cls, mat) = if r < r_core {
            let si = ends.partition_point(|&e| e < c[2]).min(spec.segments.len() - 1);
            let seg = &spec.segments[si];
            if seg.eddy {
                (CellClass::EddyConductor, seg.material)
            } else {
                (CellClass::StaticConductor, seg.material)
            }
        } else {
            (CellClass::Insulator, spec.air_material)
        };
        let m = table.get(mat)?;
        class.push(cls);
        material.push(mat);
        sigma.push(m.sigma);
        nu.push(1.0 / (crate::MU0 * m.mu_r));
    }
    Ok(Domains { class, material, sigma, nu })
}

/// Faces separating the magneto-static region from the rest (conforming
/// interior faces with a `StaticConductor` cell on exactly one side).
pub fn interface_faces(mesh: &Mesh, domains: &Domains) -> Vec<([usize; 3], usize, usize)> {
    let mut owner: HashMap<[usize; 3], usize> = HashMap::new();
    let mut out = Vec::new();
    for (ci, tet) in mesh.tets.iter().enumerate() {
        for f in &TET_FACES {
            let mut key = [tet[f[0]], tet[f[1]], tet[f[2]]];
            key.sort_unstable();
            match owner.get(&key) {
                None => {
                    owner.insert(key, ci);
                }
                Some(&other) => {
                    let a = domains.class[other] == CellClass::StaticConductor;
                    let b = domains.class[ci] == CellClass::StaticConductor;
                    if a != b {
                        let (stat, eddy) = if a { (other, ci) } else { (ci, other) };
                        out.push((key, eddy, stat));
                    }
                }
            }
        }
    }
    out.sort_by_key(|&(_, e, s)| (e.min(s), e.max(s)));
    out
}
