//! Constrained edge-element system for the eddy-current correction step.
//!
//! The correction field `A` lives in the lowest-order edge space on the
//! whole mesh.  Boundary conditions of circuit-element type make its
//! tangential trace a surface gradient: with a scalar `chi` on the boundary,
//! constant on each port, every boundary edge `(a, b)` (global ids, a < b)
//! carries the coefficient `chi_b - chi_a`.  Port 2 is grounded, the port-1
//! constant `W` is a circuit unknown, and `chi` is free elsewhere on the
//! boundary (`eta` values at lateral nodes).  Through a nodal lift `Lift1`
//! (1 on port 1, 0 on the rest of the boundary, arbitrary inside) `W` also
//! reaches interior edges, so the `W` column of the system is the discrete
//! gradient of `Lift1` and drops out of all curl terms exactly.  Solutions
//! are invariant to the interior extension of the lift; interior edge
//! unknowns absorb the difference.
//!
//! System unknowns are ordered `[interior edges | eta | W]`.  Each global
//! edge expands into at most three unknowns; assembly scatters the 6x6
//! element matrices through this expansion.  The sigma mass matrix is
//! assembled over eddy-current conductor cells only, the reluctivity
//! curl-curl matrix over all cells, and both share one sparsity pattern so
//! the time stepper can form `alpha/dt M + K` by a value-wise sum.  The
//! source moments `r` integrate `-sigma grad phi` against the edge basis
//! over every conductive cell (including magneto-static ones, whose
//! transport current still drives the field); with the unit-current
//! conduction solution this makes the right-hand side compatible with the
//! singular system to solver tolerance.

use crate::fe::elem::{Tet, LOCAL_EDGES};
use crate::mesh::{CellClass, Domains, Mesh};
use crate::solver::Csr;
use crate::{Error, Result};
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct EdgeSystem {
    /// Global edges as (min, max) node pairs, in first-seen cell order.
    pub edges: Vec<(usize, usize)>,
    /// Per cell: global edge id and local-to-global orientation sign.
    pub cell_edges: Vec<[(u32, f64); 6]>,
    pub boundary_edge: Vec<bool>,
    /// Node to eta unknown (0-based before the `n_interior` offset).
    pub eta_of: Vec<Option<u32>>,
    /// Edge to interior unknown.
    pub interior_of: Vec<Option<u32>>,
    pub n_interior: usize,
    pub n_eta: usize,
    /// Per edge: (system dof, weight) pairs of its expansion.
    pub targets: Vec<Vec<(u32, f64)>>,
    pub lift: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Assembled {
    /// sigma edge mass, eddy-conductor cells.
    pub mass: Csr,
    /// Reluctivity curl-curl, all cells; same pattern as `mass`.
    pub curl: Csr,
    /// Source moments for the unit-current conduction potential.
    pub r_unit: Vec<f64>,
}

impl EdgeSystem {
    pub fn n_sys(&self) -> usize {
        self.n_interior + self.n_eta + 1
    }

    pub fn w_index(&self) -> usize {
        self.n_sys() - 1
    }

    /// Build with the canonical lift (port-1 indicator).
    pub fn build(mesh: &Mesh) -> Result<Self> {
        let nd = mesh.nodes_per_plane;
        let lift = (0..mesh.nodes.len()).map(|v| if v / nd == 0 { 1.0 } else { 0.0 }).collect();
        Self::build_with_lift(mesh, lift)
    }

    /// Build with a custom lift; its boundary values must be the port-1
    /// indicator, interior values are free.
    pub fn build_with_lift(mesh: &Mesh, lift: Vec<f64>) -> Result<Self> {
        let n_nodes = mesh.nodes.len();
        if lift.len() != n_nodes {
            return Err(Error::Setup(format!(
                "lift has {} entries for {} nodes",
                lift.len(),
                n_nodes
            )));
        }
        let nd = mesh.nodes_per_plane;
        let last_plane = mesh.plane_z.len() - 1;
        let mut boundary_node = vec![false; n_nodes];
        for f in &mesh.boundary {
            for &v in &f.nodes {
                boundary_node[v] = true;
            }
        }
        for v in 0..n_nodes {
            if !boundary_node[v] {
                continue;
            }
            let want = if v / nd == 0 { 1.0 } else { 0.0 };
            if lift[v] != want {
                return Err(Error::Setup(format!(
                    "lift must equal the port-1 indicator on the boundary; node {v} has {}",
                    lift[v]
                )));
            }
        }

        let mut ids: HashMap<(usize, usize), u32> = HashMap::new();
        let mut edges = Vec::new();
        let mut cell_edges = Vec::with_capacity(mesh.tets.len());
        for tet in &mesh.tets {
            let mut local = [(0u32, 0.0f64); 6];
            for (le, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
                let (ga, gb) = (tet[a], tet[b]);
                let key = (ga.min(gb), ga.max(gb));
                let id = *ids.entry(key).or_insert_with(|| {
                    edges.push(key);
                    (edges.len() - 1) as u32
                });
                local[le] = (id, if ga < gb { 1.0 } else { -1.0 });
            }
            cell_edges.push(local);
        }

        let mut boundary_edge = vec![false; edges.len()];
        for f in &mesh.boundary {
            let n = f.nodes;
            for (a, b) in [(n[0], n[1]), (n[1], n[2]), (n[0], n[2])] {
                let key = (a.min(b), a.max(b));
                boundary_edge[ids[&key] as usize] = true;
            }
        }

        let mut eta_of = vec![None; n_nodes];
        let mut n_eta = 0u32;
        for v in 0..n_nodes {
            let plane = v / nd;
            if boundary_node[v] && plane != 0 && plane != last_plane {
                eta_of[v] = Some(n_eta);
                n_eta += 1;
            }
        }

        let mut interior_of = vec![None; edges.len()];
        let mut n_interior = 0u32;
        for (e, &b) in boundary_edge.iter().enumerate() {
            if !b {
                interior_of[e] = Some(n_interior);
                n_interior += 1;
            }
        }

        let n_interior = n_interior as usize;
        let n_eta = n_eta as usize;
        let w = (n_interior + n_eta) as u32;
        let mut targets = Vec::with_capacity(edges.len());
        for (e, &(a, b)) in edges.iter().enumerate() {
            let mut t: Vec<(u32, f64)> = Vec::with_capacity(3);
            if let Some(i) = interior_of[e] {
                t.push((i, 1.0));
            } else {
                if let Some(ea) = eta_of[a] {
                    t.push((n_interior as u32 + ea, -1.0));
                }
                if let Some(eb) = eta_of[b] {
                    t.push((n_interior as u32 + eb, 1.0));
                }
            }
            let wgt = lift[b] - lift[a];
            if wgt != 0.0 {
                t.push((w, wgt));
            }
            targets.push(t);
        }

        Ok(EdgeSystem {
            edges,
            cell_edges,
            boundary_edge,
            eta_of,
            interior_of,
            n_interior,
            n_eta,
            targets,
            lift,
        })
    }

    /// Edge coefficients of a system vector.
    pub fn expand(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.n_sys());
        self.targets
            .iter()
            .map(|t| t.iter().map(|&(d, w)| w * y[d as usize]).sum())
            .collect()
    }

    /// Inject the discrete gradient of a nodal field that vanishes on both
    /// ports into system coordinates (interior edges take differences, eta
    /// takes nodal values, W stays zero).
    pub fn gradient_sys(&self, psi: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.n_sys()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if let Some(i) = self.interior_of[e] {
                v[i as usize] = psi[b] - psi[a];
            }
        }
        for (n, &eta) in self.eta_of.iter().enumerate() {
            if let Some(i) = eta {
                v[self.n_interior + i as usize] = psi[n];
            }
        }
        v
    }

    /// Assemble mass, curl-curl and the unit source moments.
    pub fn assemble(&self, mesh: &Mesh, domains: &Domains, phi_unit: &[f64]) -> Result<Assembled> {
        let n = self.n_sys();
        // symbolic pass: per-cell dof cliques
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut dofs: Vec<u32> = Vec::with_capacity(16);
        for cell in 0..mesh.tets.len() {
            dofs.clear();
            for &(eid, _) in &self.cell_edges[cell] {
                for &(d, _) in &self.targets[eid as usize] {
                    if !dofs.contains(&d) {
                        dofs.push(d);
                    }
                }
            }
            for &i in &dofs {
                rows[i as usize].extend_from_slice(&dofs);
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0usize);
        let mut col = Vec::new();
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
            col.extend(r.iter().map(|&c| c as usize));
            row_ptr.push(col.len());
            r.shrink_to_fit();
        }
        drop(rows);

        let nnz = col.len();
        let mut mass_vals = vec![0.0; nnz];
        let mut curl_vals = vec![0.0; nnz];
        let mut r_unit = vec![0.0; n];
        let find = |r: usize, c: usize| -> usize {
            let seg = &col[row_ptr[r]..row_ptr[r + 1]];
            row_ptr[r] + seg.binary_search(&c).expect("pattern covers all couplings")
        };

        // expanded targets of the cell's local edges, signs folded in
        let mut local: Vec<Vec<(u32, f64)>> = vec![Vec::new(); 6];
        for cell in 0..mesh.tets.len() {
            let tet = Tet::from_mesh(mesh, cell);
            for (le, &(eid, sign)) in self.cell_edges[cell].iter().enumerate() {
                local[le].clear();
                local[le].extend(
                    self.targets[eid as usize].iter().map(|&(d, w)| (d, w * sign)),
                );
            }
            let nu = domains.nu[cell];
            let k6 = tet.curl_curl();
            for e in 0..6 {
                for f in 0..6 {
                    let v = nu * k6[e][f];
                    if v == 0.0 {
                        continue;
                    }
                    for &(d1, w1) in &local[e] {
                        for &(d2, w2) in &local[f] {
                            curl_vals[find(d1 as usize, d2 as usize)] += w1 * w2 * v;
                        }
                    }
                }
            }
            let sigma = domains.sigma[cell];
            if sigma > 0.0 && domains.class[cell] != CellClass::StaticConductor {
                let m6 = tet.edge_mass();
                for e in 0..6 {
                    for f in 0..6 {
                        let v = sigma * m6[e][f];
                        for &(d1, w1) in &local[e] {
                            for &(d2, w2) in &local[f] {
                                mass_vals[find(d1 as usize, d2 as usize)] += w1 * w2 * v;
                            }
                        }
                    }
                }
            }
            if sigma > 0.0 {
                let t = mesh.tets[cell];
                let g = tet.grad_interp([
                    phi_unit[t[0]],
                    phi_unit[t[1]],
                    phi_unit[t[2]],
                    phi_unit[t[3]],
                ]);
                let moments = tet.edge_moments();
                for e in 0..6 {
                    let re = -sigma * crate::fe::dot3(g, moments[e]);
                    for &(d, w) in &local[e] {
                        r_unit[d as usize] += w * re;
                    }
                }
            }
        }

        // The Galerkin source of the W row is the weak port-1 current of the
        // conduction step, exactly +1 here by its own current constraint.
        // The circuit-element condition for the correction is that it adds
        // no port current, so the W equation keeps the mass row and drops
        // the source: (sigma dA/dt, grad Phi1) = 0.  The matrix stays
        // symmetric because only the right-hand side changes.
        r_unit[self.w_index()] = 0.0;
        let mass = Csr { n, row_ptr: row_ptr.clone(), col: col.clone(), val: mass_vals };
        let curl = Csr { n, row_ptr, col, val: curl_vals };
        Ok(Assembled { mass, curl, r_unit })
    }
}
