//! Stationary conduction step with port current constraint.
//!
//! At each instant the conduction potential solves, on the conductive part
//! of the cylinder,
//!
//! ```text
//! div(sigma grad phi) = 0,       phi | port2 = 0,   phi | port1 = V1,
//! sigma dphi/dn = 0 on the lateral conductor surface,
//! ```
//!
//! where the port-1 value `V1` is itself unknown and determined by the
//! prescribed total port current `I1` (flux of `-sigma grad phi` through
//! port 1, outward normal).  The potential is expanded as
//! `phi = phi_tilde + V1 * Lift1` with `phi_tilde` free at conductive
//! non-port nodes and `Lift1` a nodal lift that is 1 on port 1 and 0 on
//! port 2.  Galerkin on (phi_tilde, V1) gives a symmetric positive definite
//! system
//!
//! ```text
//! [ K  g ] [phi]   [ 0  ]         g_i = (sigma grad lambda_i, grad Lift1)
//! [ g' d ] [V1 ] = [-I1 ],        d   = (sigma grad Lift1, grad Lift1)
//! ```
//!
//! The computed pair is invariant to the interior values of the lift (a
//! change of lift shifts `phi_tilde` by a free-node field); the canonical
//! choice is the port-1 indicator.  On extruded meshes the exact solution
//! is piecewise linear in `z` and lies in the FE space, so the computed
//! potential, voltage and port fluxes are exact up to solver tolerance.
//!
//! The solve is done once for unit current; the driver scales the result by
//! `I1(t)` because `sigma` does not depend on time.

use crate::fe::elem::Tet;
use crate::mesh::{Domains, Mesh};
use crate::solver::{cg_solve, direct_spd_solve, Csr, Precond, SolveReport};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeDof {
    Free(usize),
    PortOne,
    PortTwo,
    /// Not adjacent to any conductive cell; the potential there is never
    /// multiplied by a nonzero sigma.
    Outside,
}

#[derive(Clone, Debug)]
pub struct NodalSystem {
    pub dof: Vec<NodeDof>,
    pub n_free: usize,
    pub matrix: Csr,
    pub conductor_adjacent: Vec<bool>,
    pub lift: Vec<f64>,
}

/// Unit-current solution of the conduction step.
#[derive(Clone, Debug)]
pub struct DcUnit {
    /// Full nodal potential for I1 = 1 (port-1 nodes carry `v1`).
    pub phi: Vec<f64>,
    pub v1: f64,
    pub report: SolveReport,
}

impl NodalSystem {
    /// Build with the canonical port-1 indicator lift.
    pub fn build(mesh: &Mesh, domains: &Domains) -> Result<Self> {
        let nd = mesh.nodes_per_plane;
        let lift = (0..mesh.nodes.len()).map(|v| if v / nd == 0 { 1.0 } else { 0.0 }).collect();
        Self::build_with_lift(mesh, domains, lift)
    }

    /// Build with a custom lift: 1 on port-1 nodes, 0 on port-2 nodes,
    /// arbitrary elsewhere.
    pub fn build_with_lift(mesh: &Mesh, domains: &Domains, lift: Vec<f64>) -> Result<Self> {
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
        for v in 0..n_nodes {
            let plane = v / nd;
            if plane == 0 && lift[v] != 1.0 {
                return Err(Error::Setup(format!("lift must be 1 on port 1; node {v}")));
            }
            if plane == last_plane && lift[v] != 0.0 {
                return Err(Error::Setup(format!("lift must be 0 on port 2; node {v}")));
            }
        }
        let mut conductor_adjacent = vec![false; n_nodes];
        for (cell, tet) in mesh.tets.iter().enumerate() {
            if domains.sigma[cell] > 0.0 {
                for &v in tet {
                    conductor_adjacent[v] = true;
                }
            }
        }
        let mut dof = Vec::with_capacity(n_nodes);
        let mut n_free = 0;
        for v in 0..n_nodes {
            let plane = v / nd;
            dof.push(if plane == 0 {
                NodeDof::PortOne
            } else if plane == last_plane {
                NodeDof::PortTwo
            } else if conductor_adjacent[v] {
                let d = NodeDof::Free(n_free);
                n_free += 1;
                d
            } else {
                NodeDof::Outside
            });
        }
        if n_free == 0 {
            return Err(Error::Setup("conduction system has no free nodes".into()));
        }

        // each node expands into at most two unknown contributions:
        // its own free coefficient and lift-weight times V1
        let targets = |node: usize| -> [(usize, f64); 2] {
            let mut t = [(usize::MAX, 0.0); 2];
            if let NodeDof::Free(i) = dof[node] {
                t[0] = (i, 1.0);
            }
            if lift[node] != 0.0 {
                t[1] = (n_free, lift[node]);
            }
            t
        };
        let mut triplets = Vec::new();
        for (cell, tet) in mesh.tets.iter().enumerate() {
            let sigma = domains.sigma[cell];
            if sigma <= 0.0 {
                continue;
            }
            let k = Tet::from_mesh(mesh, cell).p1_stiffness();
            for i in 0..4 {
                for &(r, wr) in targets(tet[i]).iter().filter(|t| t.0 != usize::MAX) {
                    for j in 0..4 {
                        for &(c, wc) in targets(tet[j]).iter().filter(|t| t.0 != usize::MAX) {
                            triplets.push((r, c, wr * wc * sigma * k[i][j]));
                        }
                    }
                }
            }
        }
        let matrix = Csr::from_triplets(n_free + 1, &triplets);
        Ok(NodalSystem { dof, n_free, matrix, conductor_adjacent, lift })
    }

    fn expand(&self, x: &[f64]) -> Vec<f64> {
        let v1 = x[self.n_free];
        self.dof
            .iter()
            .zip(&self.lift)
            .map(|(d, &l)| {
                let tilde = match *d {
                    NodeDof::Free(i) => x[i],
                    _ => 0.0,
                };
                tilde + v1 * l
            })
            .collect()
    }

    /// Solve for unit port-1 current and expand to all nodes.
    pub fn solve_unit(&self, tol: f64, max_iter: usize) -> Result<DcUnit> {
        let mut b = vec![0.0; self.n_free + 1];
        b[self.n_free] = -1.0;
        let (x, report) =
            cg_solve(&self.matrix, &b, None, tol, max_iter, Precond::SymmetricSweep)?;
        Ok(DcUnit { phi: self.expand(&x), v1: x[self.n_free], report })
    }

    /// Dense Cholesky variant for small systems and cross-checks.
    pub fn solve_unit_direct(&self) -> Result<DcUnit> {
        let mut b = vec![0.0; self.n_free + 1];
        b[self.n_free] = -1.0;
        let (x, report) = direct_spd_solve(&self.matrix, &b)?;
        Ok(DcUnit { phi: self.expand(&x), v1: x[self.n_free], report })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{
        build_disk, classify, extrude, CylinderSpec, DiskParams, Material, MaterialTable, Segment,
    };
    use approx::assert_relative_eq;

    fn disk_params() -> DiskParams {
        DiskParams {
            r_core: 3e-3,
            r_outer: 8e-3,
            n_theta: 10,
            core_rings: 3,
            air_rings: 2,
            grading: 0.7,
        }
    }

    fn table() -> MaterialTable {
        MaterialTable {
            materials: vec![
                Material { name: "iron".into(), sigma: 1e7, mu_r: 1500.0 },
                Material { name: "copper".into(), sigma: 6e7, mu_r: 1.0 },
                Material { name: "air".into(), sigma: 0.0, mu_r: 1.0 },
            ],
        }
    }

    fn core_area(disk: &crate::mesh::DiskTriangulation) -> f64 {
        disk.triangles
            .iter()
            .zip(&disk.core)
            .filter(|(_, &c)| c)
            .map(|(t, _)| {
                let (a, b, c) = (disk.points[t[0]], disk.points[t[1]], disk.points[t[2]]);
                0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
            })
            .sum()
    }

    #[test]
    fn uniform_rod_matches_series_resistance() {
        let disk = build_disk(&disk_params(), 0).unwrap();
        let spec = CylinderSpec {
            segments: vec![Segment { length: 2e-3, material: 0, eddy: true }],
            layer: 1e-3,
            air_material: 2,
        };
        let mesh = extrude(&disk, &spec).unwrap();
        let domains = classify(&mesh, &spec, &table()).unwrap();
        let sys = NodalSystem::build(&mesh, &domains).unwrap();
        let dc = sys.solve_unit(1e-13, 20_000).unwrap();
        // exact solution is linear in z: V1 = -L/(sigma * polygon area)
        let v_exact = -2e-3 / (1e7 * core_area(&mesh.disk));
        assert_relative_eq!(dc.v1, v_exact, max_relative = 1e-9);
        // potential profile phi = V1 (1 - z/L) at conductive nodes
        for (n, &d) in sys.dof.iter().enumerate() {
            if let NodeDof::Free(_) = d {
                let z = mesh.nodes[n][2];
                let want = dc.v1 * (1.0 - z / 2e-3);
                assert_relative_eq!(dc.phi[n], want, max_relative = 1e-8, epsilon = 1e-18);
            }
        }
    }

    #[test]
    fn two_materials_in_series() {
        let disk = build_disk(&disk_params(), 0).unwrap();
        let spec = CylinderSpec {
            segments: vec![
                Segment { length: 2e-3, material: 1, eddy: true },
                Segment { length: 3e-3, material: 0, eddy: true },
            ],
            layer: 1e-3,
            air_material: 2,
        };
        let mesh = extrude(&disk, &spec).unwrap();
        let domains = classify(&mesh, &spec, &table()).unwrap();
        let sys = NodalSystem::build(&mesh, &domains).unwrap();
        let dc = sys.solve_unit(1e-13, 20_000).unwrap();
        let area = core_area(&mesh.disk);
        let v_exact = -(2e-3 / 6e7 + 3e-3 / 1e7) / area;
        assert_relative_eq!(dc.v1, v_exact, max_relative = 1e-9);
    }

    #[test]
    fn eddy_flags_do_not_change_conduction() {
        let disk = build_disk(&disk_params(), 0).unwrap();
        let mut spec = CylinderSpec {
            segments: vec![
                Segment { length: 1e-3, material: 1, eddy: true },
                Segment { length: 2e-3, material: 0, eddy: true },
                Segment { length: 1e-3, material: 1, eddy: true },
            ],
            layer: 1e-3,
            air_material: 2,
        };
        let mesh = extrude(&disk, &spec).unwrap();
        let d1 = classify(&mesh, &spec, &table()).unwrap();
        let a = NodalSystem::build(&mesh, &d1).unwrap().solve_unit(1e-13, 20_000).unwrap();
        spec.segments[1].eddy = false;
        let d2 = classify(&mesh, &spec, &table()).unwrap();
        let b = NodalSystem::build(&mesh, &d2).unwrap().solve_unit(1e-13, 20_000).unwrap();
        assert_relative_eq!(a.v1, b.v1, max_relative = 1e-12);
    }

    #[test]
    fn lift_choice_leaves_solution_invariant() {
        let disk = build_disk(&disk_params(), 0).unwrap();
        let spec = CylinderSpec {
            segments: vec![
                Segment { length: 2e-3, material: 1, eddy: true },
                Segment { length: 2e-3, material: 0, eddy: true },
            ],
            layer: 1e-3,
            air_material: 2,
        };
        let mesh = extrude(&disk, &spec).unwrap();
        let domains = classify(&mesh, &spec, &table()).unwrap();
        let canonical = NodalSystem::build(&mesh, &domains).unwrap();
        let a = canonical.solve_unit(1e-13, 20_000).unwrap();
        // alternative lift: linear ramp in z instead of the indicator
        let length = mesh.plane_z.last().unwrap();
        let lift: Vec<f64> = mesh.nodes.iter().map(|p| 1.0 - p[2] / length).collect();
        // snap port planes to exact values (ramp already hits them, but the
        // validation requires exact equality)
        let nd = mesh.nodes_per_plane;
        let last = mesh.plane_z.len() - 1;
        let lift: Vec<f64> = lift
            .iter()
            .enumerate()
            .map(|(v, &l)| {
                let p = v / nd;
                if p == 0 {
                    1.0
                } else if p == last {
                    0.0
                } else {
                    l
                }
            })
            .collect();
        let alt = NodalSystem::build_with_lift(&mesh, &domains, lift).unwrap();
        let b = alt.solve_unit(1e-13, 20_000).unwrap();
        assert_relative_eq!(a.v1, b.v1, max_relative = 1e-10);
        let scale = a.phi.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        for (n, (&pa, &pb)) in a.phi.iter().zip(&b.phi).enumerate() {
            if canonical.conductor_adjacent[n] {
                assert!((pa - pb).abs() <= 1e-10 * scale, "node {n}: {pa} vs {pb}");
            }
        }
    }

    #[test]
    fn direct_and_cg_agree() {
        let disk = build_disk(&disk_params(), 0).unwrap();
        let spec = CylinderSpec {
            segments: vec![Segment { length: 2e-3, material: 0, eddy: true }],
            layer: 1e-3,
            air_material: 2,
        };
        let mesh = extrude(&disk, &spec).unwrap();
        let domains = classify(&mesh, &spec, &table()).unwrap();
        let sys = NodalSystem::build(&mesh, &domains).unwrap();
        let a = sys.solve_unit(1e-13, 20_000).unwrap();
        let b = sys.solve_unit_direct().unwrap();
        assert_relative_eq!(a.v1, b.v1, max_relative = 1e-9);
        for (pa, pb) in a.phi.iter().zip(&b.phi) {
            assert!((pa - pb).abs() <= 1e-9 * a.v1.abs());
        }
    }

    #[test]
    fn port_nodes_share_the_port_value() {
        let disk = build_disk(&disk_params(), 0).unwrap();
        let spec = CylinderSpec {
            segments: vec![Segment { length: 2e-3, material: 0, eddy: true }],
            layer: 1e-3,
            air_material: 2,
        };
        let mesh = extrude(&disk, &spec).unwrap();
        let domains = classify(&mesh, &spec, &table()).unwrap();
        let sys = NodalSystem::build(&mesh, &domains).unwrap();
        let dc = sys.solve_unit(1e-13, 20_000).unwrap();
        for (n, &d) in sys.dof.iter().enumerate() {
            match d {
                NodeDof::PortOne => assert_eq!(dc.phi[n], dc.v1),
                NodeDof::PortTwo => assert_eq!(dc.phi[n], 0.0),
                _ => {}
            }
            let _ = n;
        }
    }
}
