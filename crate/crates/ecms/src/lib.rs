//! Transient eddy-current simulation coupled with magneto-static regions
//! through electric-circuit-element (ECE) boundary conditions.
//!
//! The solver advances two coupled field problems on a tetrahedral mesh of a
//! layered cylinder (conductor core + air mantle between two electric ports):
//!
//! 1. a DC conduction solve for the scalar potential `phi` driven by the
//!    prescribed terminal current, and
//! 2. an eddy-current correction solve for the vector potential `A` (lowest
//!    order edge elements) with the DC current density as source.
//!
//! Cells are partitioned into eddy-current conductors, magneto-static
//! conductors and insulators; the port voltage is recovered either from the
//! circuit relation of the two solves or from the total dissipated plus
//! magnetic power.  Closed-form skin-effect solutions on an infinite cylinder
//! (complex Bessel series) act as the reference for convergence studies.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! * `skin_profiles` - analytic radial profiles of current density and
//!   magnetic flux for iron and copper at 50 Hz
//! * `mesh_export` - build a preset cylinder mesh and write it as legacy VTK
//! * `dc_resistance` - Step-1 conduction solve against the resistor formula
//! * `transient_run` - full two-step transient on the homogeneous cylinder,
//!   records written as CSV
//! * `convergence_study` - spatial convergence against the analytic solution
//! * `voltage_reconstruction` - composite cylinder with and without the
//!   magneto-static copper segment; voltage from power vs. circuit voltage
//! * `static_limit` - constant excitation decaying to the DC solution
//!
//! Run them with `cargo run --release -p ecms --example <name>`.
//!
//! A thin command line frontend (`ecms run|study|oracle`) drives the same
//! library entry points from config files; see the repository README for the
//! config grammar.

pub mod analytic;
pub mod config;
pub mod dd;
pub mod driver;
pub mod error;
pub mod fe;
pub mod mesh;
pub mod post;
pub mod solver;

pub use error::Error;

/// Vacuum permeability [H/m].
pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;

pub type Result<T> = std::result::Result<T, Error>;
