//! Sequential two-step transient driver.
//!
//! Each time step consists of
//!
//! 1. the stationary conduction solve for the prescribed port current
//!    `I1(t)`, which by linearity is the cached unit solution scaled by
//!    `I1(t)` (see [`crate::fe::nodal`]), and
//! 2. the eddy-current correction: with `X = [A_interior, eta, W]` the
//!    semidiscrete system `M dX/dt + K X = I1(t) r_unit` is advanced by
//!    backward Euler on the first step and BDF2 afterwards,
//!
//! ```text
//! (M/dt + K) X^1           = b^1 + M X^0 / dt,
//! (1.5 M/dt + K) X^n       = b^n + M (2 X^{n-1} - 0.5 X^{n-2}) / dt.
//! ```
//!
//! `M` is singular (gradient fields in the air and in conductors without
//! eddy currents carry no mass), so the systems are positive semidefinite
//! with a consistent right-hand side and CG operates in the factor space.
//! Solutions start from a predictor (linear extrapolation of the two
//! previous states) and only the increment is solved for, which keeps the
//! kernel component of the iterate bounded by history instead of growing
//! with the iteration count.
//!
//! Per-step outputs:
//!
//! * port currents: the conduction flux `I1_dc` (equals `I1(t)` up to
//!   solver tolerance) and the eddy-current flux `I1_ec` through port 1,
//! * voltages: `V1_dc = I1(t) V1_unit` and `V1_ec = dW/dt` evaluated with
//!   the same difference formula as the time integrator, and the source
//!   voltage `U_sum = -(V1_dc + V1_ec)`,
//! * powers: the Ohmic power uses `E = -grad phi` where eddy currents are
//!   suppressed and `E = -grad phi - dA/dt` elsewhere, with the same
//!   four-point quadrature as the mass assembly; the magnetic power is
//!   `(nu curl A, curl dA/dt)` with the one-point rule (curls are
//!   elementwise constant).  Their sum balances `U_sum * I1` exactly when
//!   every conductor carries eddy currents,
//! * `U_power = P_total / I1`, masked near current zero crossings
//!   (`|I1| < 0.05 I0`) where the division is meaningless.

use std::f64::consts::PI;

use crate::fe::edge::{Assembled, EdgeSystem};
use crate::fe::elem::QUAD4;
use crate::fe::flux::{conduction_current, eddy_current};
use crate::fe::nodal::{DcUnit, NodalSystem};
use crate::fe::{add3, dot3, scale3};
use crate::mesh::{CellClass, Domains, Mesh, Tag};
use crate::solver::{cg_solve, Csr, Precond};
use crate::{Error, Result};

/// Headroom of the increment skip test over the solver tolerance.
///
/// The predictor is built from states that each satisfy their step only to
/// `tol`, so once a transient has decayed the increment residual floors at a
/// small multiple of `tol * |b|` and consists of prior-solve noise; half of
/// that noise lies in the gradient kernel where CG cannot reach it.  Below
/// this multiple the predictor is accepted as the solution and the achieved
/// residual flows into `max_rel_residual`.
const SKIP_GUARD: f64 = 10.0;

/// Driven port current `I1(t) = I0 cos(2 pi f t + pi)`.
///
/// The phase fixes `I1(0) = -I0`; a zero frequency therefore yields the
/// constant current `-I0`, which is the static-limit excitation.
#[derive(Clone, Copy, Debug)]
pub struct Excitation {
    pub amplitude: f64,
    pub frequency: f64,
}

impl Excitation {
    pub fn new(amplitude: f64, frequency: f64) -> Result<Self> {
        if !amplitude.is_finite() || !frequency.is_finite() || frequency < 0.0 {
            return Err(Error::Setup(format!(
                "invalid excitation: amplitude {amplitude}, frequency {frequency}"
            )));
        }
        Ok(Excitation { amplitude, frequency })
    }

    pub fn current(&self, t: f64) -> f64 {
        self.amplitude * (2.0 * PI * self.frequency * t + PI).cos()
    }
}

/// Uniform time grid with `n_steps` steps of size `dt`; states are taken
/// at `t_k = k dt`, `k = 1..=n_steps`, from a zero initial state.
#[derive(Clone, Copy, Debug)]
pub struct Schedule {
    pub dt: f64,
    pub n_steps: usize,
}

impl Schedule {
    pub fn new(dt: f64, n_steps: usize) -> Result<Self> {
        if !(dt > 0.0) || n_steps == 0 {
            return Err(Error::Setup(format!("invalid schedule: dt {dt}, {n_steps} steps")));
        }
        Ok(Schedule { dt, n_steps })
    }

    /// `periods` full periods at `steps_per_period` steps each.
    pub fn periods(frequency: f64, periods: usize, steps_per_period: usize) -> Result<Self> {
        if !(frequency > 0.0) {
            return Err(Error::Setup(format!("period schedule needs f > 0, got {frequency}")));
        }
        if periods == 0 || steps_per_period == 0 {
            return Err(Error::Setup("period schedule needs at least one step".into()));
        }
        Schedule::new(1.0 / (frequency * steps_per_period as f64), periods * steps_per_period)
    }

    pub fn end_time(&self) -> f64 {
        self.dt * self.n_steps as f64
    }
}

/// Linear solver for the conduction step.  The correction step always
/// uses conjugate gradients: its matrix is singular (gradient kernel in
/// the insulator) and only CG handles the compatible semidefinite system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Cg,
    /// Dense Cholesky factorization; intended for small validation meshes.
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOpts {
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
    pub precond: Precond,
    /// Solve for the correction to a linear-extrapolation predictor
    /// instead of the full state.
    pub increment: bool,
}

impl Default for SolverOpts {
    fn default() -> Self {
        // the semidefinite systems map residual to solution error through a
        // large effective condition number; 1e-12 keeps voltage traces at
        // roughly 1e-3 relative accuracy while staying above the CG
        // rounding floor near 1e-13
        SolverOpts {
            method: Method::Cg,
            tol: 1e-12,
            max_iter: 50_000,
            precond: Precond::SymmetricSweep,
            increment: true,
        }
    }
}

impl SolverOpts {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::Setup(format!("solver tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Setup("solver max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// Per-cell data reused every step by right-hand sides and power integrals.
struct CellData {
    volume: f64,
    sigma: f64,
    nu: f64,
    class: CellClass,
    grads: [[f64; 3]; 4],
    /// Gradient of the cached unit conduction potential (zero on
    /// insulating cells).
    grad_phi: [f64; 3],
}

/// Geometry, materials and every time-independent factor of the scheme.
pub struct Model {
    pub mesh: Mesh,
    pub domains: Domains,
    pub nodal: NodalSystem,
    pub dc: DcUnit,
    pub edges: EdgeSystem,
    pub assembled: Assembled,
    /// Port-1 conduction flux of the unit solve; equals 1 up to solver
    /// tolerance.
    pub i1_unit: f64,
    pub i2_unit: f64,
    cells: Vec<CellData>,
}

impl Model {
    pub fn build(mesh: Mesh, domains: Domains, opts: &SolverOpts) -> Result<Self> {
        opts.validate()?;
        let nodal = NodalSystem::build(&mesh, &domains)?;
        // the unit solve is shared by every step, so solve it tighter than
        // the transient tolerance
        let dc = match opts.method {
            Method::Cg => nodal.solve_unit(opts.tol.min(1e-12), opts.max_iter)?,
            Method::Direct => nodal.solve_unit_direct()?,
        };
        let edges = EdgeSystem::build(&mesh)?;
        let assembled = edges.assemble(&mesh, &domains, &dc.phi)?;
        let i1_unit = conduction_current(&mesh, &domains, &dc.phi, Tag::Port1);
        let i2_unit = conduction_current(&mesh, &domains, &dc.phi, Tag::Port2);
        if (i1_unit + i2_unit).abs() > 1e-9 {
            return Err(Error::Solver(format!(
                "port charge defect {:e} exceeds 1e-9 per unit current",
                i1_unit + i2_unit
            )));
        }
        let cells = (0..mesh.n_cells())
            .map(|c| {
                let tet = crate::fe::elem::Tet::from_mesh(&mesh, c);
                let sigma = domains.sigma[c];
                let grad_phi = if sigma > 0.0 {
                    let t = mesh.tets[c];
                    tet.grad_interp([dc.phi[t[0]], dc.phi[t[1]], dc.phi[t[2]], dc.phi[t[3]]])
                } else {
                    [0.0; 3]
                };
                CellData {
                    volume: tet.volume,
                    sigma,
                    nu: domains.nu[c],
                    class: domains.class[c],
                    grads: tet.grads,
                    grad_phi,
                }
            })
            .collect();
        Ok(Model { mesh, domains, nodal, dc, edges, assembled, i1_unit, i2_unit, cells })
    }

    /// Ohmic and magnetic power for current `i1` and expanded edge fields.
    pub fn powers(&self, i1: f64, a_edges: &[f64], da_edges: &[f64]) -> (f64, f64) {
        let mut p_ohm = 0.0;
        let mut p_mag = 0.0;
        for (cell, data) in self.cells.iter().enumerate() {
            let tet = crate::fe::elem::Tet {
                verts: [[0.0; 3]; 4],
                grads: data.grads,
                volume: data.volume,
            };
            let conn = &self.edges.cell_edges[cell];
            if data.sigma > 0.0 {
                let e_cond = scale3(data.grad_phi, -i1);
                match data.class {
                    CellClass::StaticConductor => {
                        p_ohm += data.sigma * data.volume * dot3(e_cond, e_cond);
                    }
                    CellClass::EddyConductor => {
                        for &(lambda, w) in QUAD4.iter() {
                            let basis = tet.whitney_at(lambda);
                            let mut e = e_cond;
                            for (k, &(id, sign)) in conn.iter().enumerate() {
                                let c = -sign * da_edges[id as usize];
                                e = add3(e, scale3(basis[k], c));
                            }
                            p_ohm += w * data.sigma * data.volume * dot3(e, e);
                        }
                    }
                    CellClass::Insulator => unreachable!("sigma > 0 on insulator"),
                }
            }
            let curls = tet.edge_curls();
            let mut b = [0.0; 3];
            let mut db = [0.0; 3];
            for (k, &(id, sign)) in conn.iter().enumerate() {
                b = add3(b, scale3(curls[k], sign * a_edges[id as usize]));
                db = add3(db, scale3(curls[k], sign * da_edges[id as usize]));
            }
            p_mag += data.nu * data.volume * dot3(b, db);
        }
        (p_ohm, p_mag)
    }
}

/// One emitted record per time step.
#[derive(Clone, Copy, Debug)]
pub struct StepRecord {
    pub t: f64,
    pub i1: f64,
    pub i1_dc: f64,
    pub i1_ec: f64,
    pub v1_dc: f64,
    pub v1_ec: f64,
    pub u_sum: f64,
    pub p_ohm: f64,
    pub p_mag: f64,
    pub p_total: f64,
    /// `P_total / I1`; `None` when `|I1| < 0.05 I0`.
    pub u_power: Option<f64>,
}

/// Snapshot handed to the per-step observer.
pub struct StepState<'a> {
    pub step: usize,
    pub t: f64,
    pub i1: f64,
    /// System coefficients `[A_interior, eta, W]`.
    pub y: &'a [f64],
    /// Edge coefficients of `A` (eta differences and lift applied).
    pub a_edges: &'a [f64],
    /// Edge coefficients of `dA/dt` under the scheme difference formula.
    pub da_edges: &'a [f64],
    pub record: &'a StepRecord,
}

#[derive(Clone, Debug, Default)]
pub struct RunResult {
    pub records: Vec<StepRecord>,
    pub cg_iterations: usize,
    pub max_rel_residual: f64,
    pub solves: usize,
    /// Steps where the predictor already met the tolerance.
    pub skipped: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `alpha * M + K` on the shared sparsity pattern.
fn scheme_matrix(alpha: f64, mass: &Csr, curl: &Csr) -> Csr {
    assert_eq!(mass.row_ptr, curl.row_ptr, "mass and curl share one pattern");
    assert_eq!(mass.col, curl.col, "mass and curl share one pattern");
    Csr {
        n: mass.n,
        row_ptr: mass.row_ptr.clone(),
        col: mass.col.clone(),
        val: mass.val.iter().zip(&curl.val).map(|(m, k)| alpha * m + k).collect(),
    }
}

/// Advance the eddy-current correction over the whole schedule.
pub fn run(
    model: &Model,
    excitation: &Excitation,
    schedule: &Schedule,
    opts: &SolverOpts,
    mut observer: Option<&mut dyn FnMut(&StepState)>,
) -> Result<RunResult> {
    opts.validate()?;
    let n = model.edges.n_sys();
    let w = model.edges.w_index();
    let dt = schedule.dt;
    let mass = &model.assembled.mass;
    let s_be = scheme_matrix(1.0 / dt, mass, &model.assembled.curl);
    let s_bdf = scheme_matrix(1.5 / dt, mass, &model.assembled.curl);
    let i0 = excitation.amplitude.abs();

    let mut y_pp = vec![0.0; n];
    let mut y_p = vec![0.0; n];
    let mut result = RunResult::default();
    result.records.reserve(schedule.n_steps);

    for step in 1..=schedule.n_steps {
        let t = step as f64 * dt;
        let i1 = excitation.current(t);
        let first = step == 1;
        let s = if first { &s_be } else { &s_bdf };

        // b = I1(t) r_unit + M * history
        let hist: Vec<f64> = if first {
            y_p.iter().map(|x| x / dt).collect()
        } else {
            y_p.iter().zip(&y_pp).map(|(p, pp)| (2.0 * p - 0.5 * pp) / dt).collect()
        };
        let mut b = vec![0.0; n];
        mass.matvec(&hist, &mut b);
        for (bi, ri) in b.iter_mut().zip(&model.assembled.r_unit) {
            *bi += i1 * ri;
        }

        let y = if opts.increment {
            let pred: Vec<f64> = if first {
                y_p.clone()
            } else {
                y_p.iter().zip(&y_pp).map(|(p, pp)| 2.0 * p - pp).collect()
            };
            let mut r0 = vec![0.0; n];
            s.matvec(&pred, &mut r0);
            for (ri, bi) in r0.iter_mut().zip(&b) {
                *ri = bi - *ri;
            }
            let nb = norm(&b);
            let nr = norm(&r0);
            if nr <= SKIP_GUARD * opts.tol * nb {
                result.skipped += 1;
                result.max_rel_residual =
                    result.max_rel_residual.max(nr / nb.max(f64::MIN_POSITIVE));
                pred
            } else {
                let tol_eff = opts.tol * nb / nr;
                let (delta, report) = cg_solve(s, &r0, None, tol_eff, opts.max_iter, opts.precond)?;
                result.cg_iterations += report.iterations;
                result.max_rel_residual =
                    result.max_rel_residual.max(report.rel_residual * nr / nb.max(f64::MIN_POSITIVE));
                result.solves += 1;
                pred.iter().zip(&delta).map(|(p, d)| p + d).collect()
            }
        } else {
            let (x, report) = cg_solve(s, &b, None, opts.tol, opts.max_iter, opts.precond)?;
            result.cg_iterations += report.iterations;
            result.max_rel_residual = result.max_rel_residual.max(report.rel_residual);
            result.solves += 1;
            x
        };

        let dy: Vec<f64> = if first {
            y.iter().zip(&y_p).map(|(a, b)| (a - b) / dt).collect()
        } else {
            y.iter()
                .zip(&y_p)
                .zip(&y_pp)
                .map(|((a, b), c)| (3.0 * a - 4.0 * b + c) / (2.0 * dt))
                .collect()
        };

        let a_edges = model.edges.expand(&y);
        let da_edges = model.edges.expand(&dy);
        let v1_dc = i1 * model.dc.v1;
        let v1_ec = dy[w];
        let u_sum = -(v1_dc + v1_ec);
        let i1_dc = i1 * model.i1_unit;
        let i1_ec = eddy_current(&model.mesh, &model.domains, &model.edges, &da_edges, Tag::Port1);
        let (p_ohm, p_mag) = model.powers(i1, &a_edges, &da_edges);
        let p_total = p_ohm + p_mag;
        let u_power = if i1.abs() >= 0.05 * i0 && i0 > 0.0 { Some(p_total / i1) } else { None };

        let record = StepRecord {
            t,
            i1,
            i1_dc,
            i1_ec,
            v1_dc,
            v1_ec,
            u_sum,
            p_ohm,
            p_mag,
            p_total,
            u_power,
        };
        if let Some(obs) = observer.as_mut() {
            obs(&StepState { step, t, i1, y: &y, a_edges: &a_edges, da_edges: &da_edges, record: &record });
        }
        result.records.push(record);

        y_pp = std::mem::replace(&mut y_p, y);
    }
    Ok(result)
}
