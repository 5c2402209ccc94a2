//! Per-tetrahedron geometry and local element matrices.
//!
//! Barycentric coordinates `lambda_i` are affine with constant gradients
//! `g_i`.  The P1 basis is `lambda_i` itself; the edge basis on the local
//! edge `(a, b)` is the Whitney function
//!
//! ```text
//! w_ab = lambda_a g_b - lambda_b g_a,      curl w_ab = 2 g_a x g_b.
//! ```
//!
//! `w_ab` has unit circulation along edge `(a, b)` and zero along every
//! other edge.  Local matrices use quadrature that is exact for their
//! integrands: one point for the constant-gradient stiffness and curl-curl
//! terms, a four-point second-order rule for products of linears (edge mass,
//! source moments).

use crate::fe::{cross3, dot3, sub3};
use crate::mesh::Mesh;

/// Local edges in order; endpoints index the tet's nodes.
pub const LOCAL_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Barycentric points and weights of the 4-point rule, exact for quadratics.
pub const QUAD4: [([f64; 4], f64); 4] = {
    // a = (5 + 3 sqrt 5)/20, b = (5 - sqrt 5)/20
    const A: f64 = 0.585_410_196_624_968_5;
    const B: f64 = 0.138_196_601_125_010_5;
    [
        ([A, B, B, B], 0.25),
        ([B, A, B, B], 0.25),
        ([B, B, A, B], 0.25),
        ([B, B, B, A], 0.25),
    ]
};

#[derive(Clone, Debug)]
pub struct Tet {
    pub verts: [[f64; 3]; 4],
    /// Gradients of the barycentric coordinates.
    pub grads: [[f64; 3]; 4],
    pub volume: f64,
}

impl Tet {
    pub fn new(verts: [[f64; 3]; 4]) -> Self {
        let e1 = sub3(verts[1], verts[0]);
        let e2 = sub3(verts[2], verts[0]);
        let e3 = sub3(verts[3], verts[0]);
        let det = dot3(e1, cross3(e2, e3));
        // rows of the inverse Jacobian are the gradients of lambda_1..3
        let g1 = [
            (e2[1] * e3[2] - e2[2] * e3[1]) / det,
            (e2[2] * e3[0] - e2[0] * e3[2]) / det,
            (e2[0] * e3[1] - e2[1] * e3[0]) / det,
        ];
        let g2 = [
            (e3[1] * e1[2] - e3[2] * e1[1]) / det,
            (e3[2] * e1[0] - e3[0] * e1[2]) / det,
            (e3[0] * e1[1] - e3[1] * e1[0]) / det,
        ];
        let g3 = [
            (e1[1] * e2[2] - e1[2] * e2[1]) / det,
            (e1[2] * e2[0] - e1[0] * e2[2]) / det,
            (e1[0] * e2[1] - e1[1] * e2[0]) / det,
        ];
        let g0 = [-g1[0] - g2[0] - g3[0], -g1[1] - g2[1] - g3[1], -g1[2] - g2[2] - g3[2]];
        Tet { verts, grads: [g0, g1, g2, g3], volume: det / 6.0 }
    }

    pub fn from_mesh(mesh: &Mesh, cell: usize) -> Self {
        let t = mesh.tets[cell];
        Tet::new([mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]], mesh.nodes[t[3]]])
    }

    pub fn point_at(&self, lambda: [f64; 4]) -> [f64; 3] {
        let mut p = [0.0; 3];
        for i in 0..4 {
            for d in 0..3 {
                p[d] += lambda[i] * self.verts[i][d];
            }
        }
        p
    }

    /// Gradient of the P1 interpolant of nodal values.
    pub fn grad_interp(&self, nodal: [f64; 4]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for i in 0..4 {
            for d in 0..3 {
                g[d] += nodal[i] * self.grads[i][d];
            }
        }
        g
    }

    /// Whitney basis values at a barycentric point, local orientation.
    pub fn whitney_at(&self, lambda: [f64; 4]) -> [[f64; 3]; 6] {
        let mut w = [[0.0; 3]; 6];
        for (e, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
            for d in 0..3 {
                w[e][d] = lambda[a] * self.grads[b][d] - lambda[b] * self.grads[a][d];
            }
        }
        w
    }

    /// Curls of the edge basis, constant per element.
    pub fn edge_curls(&self) -> [[f64; 3]; 6] {
        let mut c = [[0.0; 3]; 6];
        for (e, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
            let x = cross3(self.grads[a], self.grads[b]);
            c[e] = [2.0 * x[0], 2.0 * x[1], 2.0 * x[2]];
        }
        c
    }

    /// Integrals of the edge basis over the element, V/4 (g_b - g_a).
    pub fn edge_moments(&self) -> [[f64; 3]; 6] {
        let mut m = [[0.0; 3]; 6];
        for (e, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
            for d in 0..3 {
                m[e][d] = self.volume * 0.25 * (self.grads[b][d] - self.grads[a][d]);
            }
        }
        m
    }

    /// P1 stiffness with unit coefficient.
    pub fn p1_stiffness(&self) -> [[f64; 4]; 4] {
        let mut k = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                k[i][j] = self.volume * dot3(self.grads[i], self.grads[j]);
            }
        }
        k
    }

    /// Edge mass with unit coefficient, 4-point rule (exact).
    pub fn edge_mass(&self) -> [[f64; 6]; 6] {
        let mut m = [[0.0; 6]; 6];
        for &(lambda, wq) in &QUAD4 {
            let w = self.whitney_at(lambda);
            let s = wq * self.volume;
            for e in 0..6 {
                for f in e..6 {
                    m[e][f] += s * dot3(w[e], w[f]);
                }
            }
        }
        for e in 0..6 {
            for f in 0..e {
                m[e][f] = m[f][e];
            }
        }
        m
    }

    /// Curl-curl matrix with unit coefficient.
    pub fn curl_curl(&self) -> [[f64; 6]; 6] {
        let c = self.edge_curls();
        let mut k = [[0.0; 6]; 6];
        for e in 0..6 {
            for f in 0..6 {
                k[e][f] = self.volume * dot3(c[e], c[f]);
            }
        }
        k
    }
}
