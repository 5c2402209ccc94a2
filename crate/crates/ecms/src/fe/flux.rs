//! Port surface integrals of the two current contributions.
//!
//! The total current through a port is the outward flux of
//! `J = -sigma grad phi - sigma dA/dt`, where the second term exists only in
//! eddy-current conductor cells.  Both integrals use the owning cell's field
//! trace.  The conduction part is constant per cell; the eddy part is linear
//! on the face and integrated with the edge-midpoint rule, which is exact
//! for it.  Boundary faces store their nodes in outward orientation, so the
//! area vector `0.5 (b - a) x (c - a)` points out of the domain.

use crate::fe::elem::Tet;
use crate::fe::{cross3, dot3, scale3, sub3};
use crate::fe::edge::EdgeSystem;
use crate::mesh::{CellClass, Domains, Mesh, Tag};

fn area_vector(mesh: &Mesh, nodes: [usize; 3]) -> [f64; 3] {
    let (a, b, c) = (mesh.nodes[nodes[0]], mesh.nodes[nodes[1]], mesh.nodes[nodes[2]]);
    scale3(cross3(sub3(b, a), sub3(c, a)), 0.5)
}

/// Outward flux of `-sigma grad phi` through the faces tagged `tag`.
pub fn conduction_current(mesh: &Mesh, domains: &Domains, phi: &[f64], tag: Tag) -> f64 {
    let mut flux = 0.0;
    for face in mesh.boundary.iter().filter(|f| f.tag == tag) {
        let sigma = domains.sigma[face.cell];
        if sigma == 0.0 {
            continue;
        }
        let t = mesh.tets[face.cell];
        let tet = Tet::from_mesh(mesh, face.cell);
        let g = tet.grad_interp([phi[t[0]], phi[t[1]], phi[t[2]], phi[t[3]]]);
        flux -= sigma * dot3(g, area_vector(mesh, face.nodes));
    }
    flux
}

/// Outward flux of `-sigma dA/dt` through the faces tagged `tag`;
/// `da_edges` holds the edge coefficients of the time derivative.
pub fn eddy_current(
    mesh: &Mesh,
    domains: &Domains,
    sys: &EdgeSystem,
    da_edges: &[f64],
    tag: Tag,
) -> f64 {
    let mut flux = 0.0;
    for face in mesh.boundary.iter().filter(|f| f.tag == tag) {
        let sigma = domains.sigma[face.cell];
        if sigma == 0.0 || domains.class[face.cell] != CellClass::EddyConductor {
            continue;
        }
        let t = mesh.tets[face.cell];
        let tet = Tet::from_mesh(mesh, face.cell);
        let av = area_vector(mesh, face.nodes);
        // tet-local index of each face node
        let local: [usize; 3] = face
            .nodes
            .map(|n| t.iter().position(|&v| v == n).expect("face node belongs to cell"));
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let mut lambda = [0.0; 4];
            lambda[local[i]] += 0.5;
            lambda[local[j]] += 0.5;
            let w = tet.whitney_at(lambda);
            let mut field = [0.0; 3];
            for (le, &(eid, sign)) in sys.cell_edges[face.cell].iter().enumerate() {
                let c = sign * da_edges[eid as usize];
                for d in 0..3 {
                    field[d] += c * w[le][d];
                }
            }
            flux -= sigma * dot3(field, av) / 3.0;
        }
    }
    flux
}
