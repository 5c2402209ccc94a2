//! Sparse symmetric linear algebra for the two field solves.
//!
//! Step 1 produces a symmetric positive definite system, Step 2 a symmetric
//! positive *semi*-definite one whose kernel consists of discrete gradients
//! supported where no conduction mass is assembled.  Preconditioned conjugate
//! gradients from a zero (or in-range) initial guess handles both; a dense
//! Cholesky path exists for small systems and for cross-checks.
//!
//! Everything here is sequential and allocation-order deterministic: the same
//! triplets and right-hand side give bitwise identical results on every run.

use crate::{Error, Result};
use std::io::Write;
use std::time::Instant;

/// Compressed sparse row matrix, full (not triangle-only) pattern, rows
/// sorted by column.
#[derive(Clone, Debug)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl Csr {
    /// Build from (row, col, value) triplets; duplicates are summed in their
    /// insertion order, so assembly stays deterministic.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Csr {
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_by_key(|&i| (triplets[i].0, triplets[i].1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col = Vec::new();
        let mut val = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for &i in &order {
            let (r, c, v) = triplets[i];
            assert!(r < n && c < n, "triplet ({r},{c}) out of bounds for n={n}");
            if last == Some((r, c)) {
                *val.last_mut().unwrap() += v;
            } else {
                col.push(c);
                val.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Csr { n, row_ptr, col, val }
    }

    pub fn nnz(&self) -> usize {
        self.val.len()
    }

    /// y = A x
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            let lo = self.row_ptr[i];
            let hi = self.row_ptr[i + 1];
            let mut s = 0.0;
            for (v, &c) in self.val[lo..hi].iter().zip(&self.col[lo..hi]) {
                s += v * x[c];
            }
            y[i] = s;
        }
    }

    pub fn matvec_alloc(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn diag(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.col[k] == i {
                    d[i] = self.val[k];
                }
            }
        }
        d
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        for k in self.row_ptr[r]..self.row_ptr[r + 1] {
            if self.col[k] == c {
                return self.val[k];
            }
        }
        0.0
    }

    /// Largest |a_ij - a_ji| over the stored pattern.
    pub fn symmetry_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                worst = worst.max((self.val[k] - self.get(self.col[k], i)).abs());
            }
        }
        worst
    }

    /// Plain text coordinate export: one `row col value` line per entry,
    /// values printed with enough digits to round-trip f64.
    pub fn write_coordinate<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "{} {} {}", self.n, self.n, self.nnz())?;
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                writeln!(w, "{} {} {:.16e}", i, self.col[k], self.val[k])?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precond {
    None,
    Diagonal,
    /// Symmetric Gauss-Seidel sweep (forward + backward).
    SymmetricSweep,
}

impl Precond {
    pub fn tag(self) -> &'static str {
        match self {
            Precond::None => "cg",
            Precond::Diagonal => "cg+diag",
            Precond::SymmetricSweep => "cg+sgs",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub iterations: usize,
    pub rel_residual: f64,
    pub seconds: f64,
    pub method: &'static str,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct SgsData {
    inv_diag: Vec<f64>,
}

fn apply_precond(a: &Csr, precond: Precond, sgs: &SgsData, r: &[f64], z: &mut [f64], scratch: &mut [f64]) {
    match precond {
        Precond::None => z.copy_from_slice(r),
        Precond::Diagonal => {
            for i in 0..a.n {
                z[i] = r[i] * sgs.inv_diag[i];
            }
        }
        Precond::SymmetricSweep => {
            // (D+L) u = r    forward
            for i in 0..a.n {
                let mut s = r[i];
                for k in a.row_ptr[i]..a.row_ptr[i + 1] {
                    let c = a.col[k];
                    if c < i {
                        s -= a.val[k] * scratch[c];
                    }
                }
                scratch[i] = s * sgs.inv_diag[i];
            }
            // (D+U) z = D u  backward
            for i in (0..a.n).rev() {
                let mut s = scratch[i] / sgs.inv_diag[i];
                for k in a.row_ptr[i]..a.row_ptr[i + 1] {
                    let c = a.col[k];
                    if c > i {
                        s -= a.val[k] * z[c];
                    }
                }
                z[i] = s * sgs.inv_diag[i];
            }
        }
    }
}

/// Relative residual below which a curvature breakdown is attributed to
/// floating-point rounding rather than indefiniteness.
const ROUNDING_FLOOR_GUARD: f64 = 1e-8;

/// Restarts allowed before a curvature breakdown falls through to the
/// stall policy.
const MAX_RESTARTS: usize = 50;

/// Relative progress a stalled solve must have made before its best
/// iterate is accepted as the attainable floor.
const FLOOR_ACCEPT: f64 = 1e-2;

/// Stalls within this multiple of the requested tolerance are also
/// accepted.  Time steppers solve for increments whose right-hand side
/// carries kernel-direction noise of prior solves at the absolute scale of
/// their tolerance; relative to a small increment that noise can exceed
/// `FLOOR_ACCEPT`, yet the iterate is within a few target tolerances of the
/// solution, which is the only meaningful measure.
const ACCEPT_FACTOR: f64 = 10.0;

/// Iterations without a new best residual before the solve is a stall.
const STALL_WINDOW: usize = 500;

/// Preconditioned conjugate gradients.
///
/// Stops when `||b - A x|| <= tol * ||b||`.  For semi-definite systems the
/// right-hand side must be in the range of `A` and `x0` must be zero or a
/// vector already in the range.
///
/// Ill conditioning bounds the attainable residual away from zero, and a
/// preconditioner leaks kernel components into the search direction; both
/// surface either as a stall or as rounding-induced negative curvature
/// `p'Ap` while the residual is still finite.  The recovery ladder is:
/// restart the recursion from the true residual (discarding the
/// accumulated kernel part); if the solve keeps stalling after at least
/// two orders of progress, or within [`ACCEPT_FACTOR`] target tolerances,
/// return the best iterate with its achieved residual (the caller sees it
/// in the report); with no real progress, report an indefiniteness error.
pub fn cg_solve(
    a: &Csr,
    b: &[f64],
    x0: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
    precond: Precond,
) -> Result<(Vec<f64>, SolveReport)> {
    cg_solve_traced(a, b, x0, tol, max_iter, precond, |_, _| {})
}

/// Same as [`cg_solve`] but invokes `on_iterate(k, x_k)` after every update;
/// used by tests that assert the A-norm error decreases monotonically.
pub fn cg_solve_traced(
    a: &Csr,
    b: &[f64],
    x0: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
    precond: Precond,
    mut on_iterate: impl FnMut(usize, &[f64]),
) -> Result<(Vec<f64>, SolveReport)> {
    let start = Instant::now();
    let n = a.n;
    assert_eq!(b.len(), n);
    let diag = a.diag();
    let mut inv_diag = vec![1.0; n];
    if precond != Precond::None {
        for i in 0..n {
            if diag[i] <= 0.0 {
                return Err(Error::Solver(format!(
                    "non-positive diagonal {} at row {i}; preconditioner undefined",
                    diag[i]
                )));
            }
            inv_diag[i] = 1.0 / diag[i];
        }
    }
    let sgs = SgsData { inv_diag };

    let norm_b = norm(b);
    let mut x = match x0 {
        Some(v) => {
            assert_eq!(v.len(), n);
            v.to_vec()
        }
        None => vec![0.0; n],
    };
    if norm_b == 0.0 {
        let report = SolveReport {
            iterations: 0,
            rel_residual: 0.0,
            seconds: start.elapsed().as_secs_f64(),
            method: precond.tag(),
        };
        return Ok((vec![0.0; n], report));
    }

    let mut r = b.to_vec();
    if x0.is_some() {
        let ax = a.matvec_alloc(&x);
        for i in 0..n {
            r[i] -= ax[i];
        }
    }
    let mut z = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    apply_precond(a, precond, &sgs, &r, &mut z, &mut scratch);
    let mut p = z.clone();
    let mut rho = dot(&r, &z);
    let mut q = vec![0.0; n];
    let mut res = norm(&r);
    let mut restarts = 0;
    let mut res_at_restart = f64::INFINITY;
    let mut best = x.clone();
    let mut best_res = res;
    let mut since_best = 0usize;
    let accept_floor = norm_b * FLOOR_ACCEPT.max(ACCEPT_FACTOR * tol);

    let report_at = |it: usize, res: f64| SolveReport {
        iterations: it,
        rel_residual: res / norm_b,
        seconds: start.elapsed().as_secs_f64(),
        method: precond.tag(),
    };

    for it in 0..max_iter {
        if res <= tol * norm_b {
            return Ok((x, report_at(it, res)));
        }
        a.matvec(&p, &mut q);
        let pq = dot(&p, &q);
        if pq <= 0.0 {
            // at residuals many orders below ||b|| the curvature is pure
            // rounding noise: the current iterate is the attainable floor
            if res <= ROUNDING_FLOOR_GUARD * norm_b {
                return Ok((x, report_at(it, res)));
            }
            // otherwise the direction degenerated: restart from the
            // recomputed residual while the restarts keep making headway
            if restarts < MAX_RESTARTS && res < 0.99 * res_at_restart {
                restarts += 1;
                res_at_restart = res;
                let ax = a.matvec_alloc(&x);
                for i in 0..n {
                    r[i] = b[i] - ax[i];
                }
                res = norm(&r);
                apply_precond(a, precond, &sgs, &r, &mut z, &mut scratch);
                p.copy_from_slice(&z);
                rho = dot(&r, &z);
                continue;
            }
            if best_res <= accept_floor {
                return Ok((best, report_at(it, best_res)));
            }
            return Err(Error::Solver(format!(
                "negative curvature p'Ap = {pq:e} at iteration {it} (relative residual {:e}, \
                 {restarts} restarts); matrix not positive (semi-)definite or right-hand side \
                 inconsistent",
                res / norm_b
            )));
        }
        let alpha = rho / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        on_iterate(it + 1, &x);
        res = norm(&r);
        if res < best_res {
            best_res = res;
            best.copy_from_slice(&x);
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= STALL_WINDOW {
                if best_res <= accept_floor {
                    return Ok((best, report_at(it, best_res)));
                }
                return Err(Error::Solver(format!(
                    "cg stalled at relative residual {:e} after {it} iterations",
                    best_res / norm_b
                )));
            }
        }
        apply_precond(a, precond, &sgs, &r, &mut z, &mut scratch);
        let rho_new = dot(&r, &z);
        let beta = rho_new / rho;
        rho = rho_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    if best_res <= tol * norm_b || best_res <= accept_floor {
        return Ok((best, report_at(max_iter, best_res)));
    }
    Err(Error::Solver(format!(
        "cg did not reach tol {tol:e} in {max_iter} iterations (residual {:e})",
        best_res / norm_b
    )))
}

/// Dense Cholesky solve; O(n^3), intended for small systems and oracles.
pub fn direct_spd_solve(a: &Csr, b: &[f64]) -> Result<(Vec<f64>, SolveReport)> {
    let start = Instant::now();
    let n = a.n;
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for k in a.row_ptr[i]..a.row_ptr[i + 1] {
            m[i * n + a.col[k]] = a.val[k];
        }
    }
    // in-place lower Cholesky
    for j in 0..n {
        let mut d = m[j * n + j];
        for k in 0..j {
            d -= m[j * n + k] * m[j * n + k];
        }
        if d <= 0.0 {
            return Err(Error::Solver(format!(
                "cholesky pivot {d:e} at column {j}; matrix not positive definite"
            )));
        }
        let d = d.sqrt();
        m[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = m[i * n + j];
            for k in 0..j {
                s -= m[i * n + k] * m[j * n + k];
            }
            m[i * n + j] = s / d;
        }
    }
    // forward + backward substitution
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let t = m[i * n + k] * y[k];
            y[i] -= t;
        }
        y[i] /= m[i * n + i];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let t = m[k * n + i] * y[k];
            y[i] -= t;
        }
        y[i] /= m[i * n + i];
    }
    let r: Vec<f64> = {
        let ax = a.matvec_alloc(&y);
        b.iter().zip(ax).map(|(bi, axi)| bi - axi).collect()
    };
    let norm_b = norm(b).max(f64::MIN_POSITIVE);
    let report = SolveReport {
        iterations: 1,
        rel_residual: norm(&r) / norm_b,
        seconds: start.elapsed().as_secs_f64(),
        method: "dense-cholesky",
    };
    Ok((y, report))
}
