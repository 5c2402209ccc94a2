//! Finite-element spaces and assembly.
//!
//! Scalar potentials use continuous piecewise-linear (P1) nodal elements,
//! vector potentials the lowest-order edge elements of the first kind.  The
//! submodules are
//!
//! * [`elem`]: per-tetrahedron geometry, basis evaluation and local matrices;
//! * [`nodal`]: the stationary conduction system with port current
//!   constraint (solution step 1);
//! * [`edge`]: the constrained edge-element system for the eddy-current
//!   correction (solution step 2);
//! * [`flux`]: port surface integrals of conduction and eddy currents.

pub mod edge;
pub mod elem;
pub mod flux;
pub mod nodal;

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale3(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}
