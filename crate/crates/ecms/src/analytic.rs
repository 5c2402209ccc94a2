//! Closed-form skin-effect solutions on an infinite circular cylinder.
//!
//! A cylinder of radius `R`, conductivity `sigma` and permeability `mu`
//! carrying the total phasor current `I` at angular frequency `omega` has
//! axial current density and azimuthal flux density
//!
//! ```text
//! j(r) = k I / (2 pi R) * J0(k r) / J1(k R)          r <= R
//! B(r) = I mu / (2 pi R) * J1(k r) / J1(k R)         r <= R
//! B(r) = I mu_out / (2 pi r)                         r >  R
//! k    = (1 - i) / delta,   delta = sqrt(2 / (mu sigma omega))
//! ```
//!
//! with `J0`, `J1` the Bessel functions of complex argument.  Physical fields
//! are time samples `Re(phasor * exp(i omega t))`.  The magneto-static
//! counterpart (uniform current density) covers conductors where eddy
//! currents are suppressed; as `omega -> 0` the two coincide.
//!
//! `J0`/`J1` are evaluated by their ascending power series only, validated
//! for `|z| <= 30`.  Larger arguments are rejected rather than extrapolated.
//! The series is summed in double-double arithmetic ([`crate::dd`]) because
//! the alternating terms cancel ~6 orders of magnitude at `|z| ~ 15` and a
//! plain f64 sum would be limited to ~1e-9 relative accuracy there.

use crate::dd::CDd;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest `|z|` for which the power series is accepted.
pub const BESSEL_ENVELOPE: f64 = 30.0;

/// Hard cap on series terms; the series for `|z| = 30` converges in ~60.
const MAX_TERMS: usize = 120;

/// Relative size at which the series is truncated.
const TERM_EPS: f64 = 1e-16;

fn check_envelope(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("bessel argument {z} is not finite")));
    }
    if z.norm() > BESSEL_ENVELOPE {
        return Err(Error::Domain(format!(
            "bessel argument |{z}| = {:.3} exceeds validated envelope {BESSEL_ENVELOPE}",
            z.norm()
        )));
    }
    Ok(())
}

/// `J0(z)` by the ascending series `sum_m (-z^2/4)^m / (m!)^2`.
pub fn bessel_j0(z: Complex64) -> Result<Complex64> {
    check_envelope(z)?;
    let q = quarter_neg_z2(z);
    let mut term = CDd::from_f64(1.0, 0.0);
    let mut sum = term;
    for m in 1..=MAX_TERMS {
        term = term.mul(q).div_f64((m * m) as f64);
        sum = sum.add(term);
        if term.mag_hi() < TERM_EPS * sum.mag_hi() {
            break;
        }
    }
    Ok(Complex64::new(sum.re.to_f64(), sum.im.to_f64()))
}

/// `J1(z)` by the ascending series `(z/2) sum_m (-z^2/4)^m / (m! (m+1)!)`.
pub fn bessel_j1(z: Complex64) -> Result<Complex64> {
    check_envelope(z)?;
    let q = quarter_neg_z2(z);
    let mut term = CDd::from_f64(1.0, 0.0);
    let mut sum = term;
    for m in 1..=MAX_TERMS {
        term = term.mul(q).div_f64((m * (m + 1)) as f64);
        sum = sum.add(term);
        if term.mag_hi() < TERM_EPS * sum.mag_hi() {
            break;
        }
    }
    let half_z = CDd::from_f64(0.5 * z.re, 0.5 * z.im);
    let out = half_z.mul(sum);
    Ok(Complex64::new(out.re.to_f64(), out.im.to_f64()))
}

/// `-z^2/4` in double-double, exact in the inputs.
fn quarter_neg_z2(z: Complex64) -> CDd {
    let zdd = CDd::from_f64(z.re, z.im);
    let z2 = zdd.mul(zdd);
    CDd { re: z2.re.div_f64(4.0).neg(), im: z2.im.div_f64(4.0).neg() }
}

/// Skin depth `sqrt(2 / (mu sigma omega))`.
pub fn skin_depth(mu: f64, sigma: f64, omega: f64) -> f64 {
    (2.0 / (mu * sigma * omega)).sqrt()
}

/// Physical time sample of a phasor: `Re(phasor * exp(i omega t))`.
pub fn time_sample(phasor: Complex64, omega: f64, t: f64) -> f64 {
    let (s, c) = (omega * t).sin_cos();
    phasor.re * c - phasor.im * s
}

/// Skin-effect solution of an infinite cylinder carrying phasor current
/// `current` along its axis.
#[derive(Clone, Debug)]
pub struct EddyCylinder {
    pub radius: f64,
    pub sigma: f64,
    pub mu: f64,
    /// Permeability of the surrounding medium (air).
    pub mu_out: f64,
    pub omega: f64,
    pub current: Complex64,
    pub delta: f64,
    pub k: Complex64,
    /// Cached `J1(k R)` denominator.
    j1_kr: Complex64,
}

impl EddyCylinder {
    pub fn new(
        radius: f64,
        sigma: f64,
        mu: f64,
        mu_out: f64,
        omega: f64,
        current: Complex64,
    ) -> Result<Self> {
        if radius <= 0.0 || sigma <= 0.0 || mu <= 0.0 || mu_out <= 0.0 || omega <= 0.0 {
            return Err(Error::Domain(
                "eddy cylinder needs positive radius, sigma, mu and omega".into(),
            ));
        }
        let delta = skin_depth(mu, sigma, omega);
        let k = Complex64::new(1.0, -1.0) / delta;
        let j1_kr = bessel_j1(k * radius)?;
        if j1_kr.norm() == 0.0 {
            return Err(Error::Domain("J1(kR) vanishes; solution undefined".into()));
        }
        Ok(EddyCylinder { radius, sigma, mu, mu_out, omega, current, delta, k, j1_kr })
    }

    /// Axial current density phasor at radius `r`; zero outside the cylinder.
    pub fn j_phasor(&self, r: f64) -> Complex64 {
        if r > self.radius {
            return Complex64::new(0.0, 0.0);
        }
        let j0 = bessel_j0(self.k * r).expect("|k r| <= |k R| within envelope");
        self.k * self.current / (2.0 * PI * self.radius) * j0 / self.j1_kr
    }

    /// Azimuthal flux density phasor inside the conductor (valid for
    /// `r <= R`, smooth continuation slightly beyond).
    pub fn b_inside(&self, r: f64) -> Complex64 {
        let j1 = bessel_j1(self.k * r).expect("|k r| <= |k R| within envelope");
        self.current * self.mu / (2.0 * PI * self.radius) * j1 / self.j1_kr
    }

    /// Azimuthal flux density phasor in the surrounding medium.
    pub fn b_outside(&self, r: f64) -> Complex64 {
        self.current * self.mu_out / (2.0 * PI * r)
    }

    /// Flux density phasor selected by radius.
    pub fn b_phasor(&self, r: f64) -> Complex64 {
        if r <= self.radius {
            self.b_inside(r)
        } else {
            self.b_outside(r)
        }
    }
}

/// Magneto-static solution of an infinite cylinder: uniform current density,
/// linear interior flux.
#[derive(Clone, Debug)]
pub struct StaticCylinder {
    pub radius: f64,
    pub mu: f64,
    pub mu_out: f64,
    pub current: Complex64,
}

impl StaticCylinder {
    pub fn new(radius: f64, mu: f64, mu_out: f64, current: Complex64) -> Result<Self> {
        if radius <= 0.0 || mu <= 0.0 || mu_out <= 0.0 {
            return Err(Error::Domain("static cylinder needs positive radius and mu".into()));
        }
        Ok(StaticCylinder { radius, mu, mu_out, current })
    }

    pub fn j_phasor(&self, r: f64) -> Complex64 {
        if r > self.radius {
            Complex64::new(0.0, 0.0)
        } else {
            self.current / (PI * self.radius * self.radius)
        }
    }

    pub fn b_inside(&self, r: f64) -> Complex64 {
        self.current * self.mu * r / (2.0 * PI * self.radius * self.radius)
    }

    pub fn b_outside(&self, r: f64) -> Complex64 {
        self.current * self.mu_out / (2.0 * PI * r)
    }

    pub fn b_phasor(&self, r: f64) -> Complex64 {
        if r <= self.radius {
            self.b_inside(r)
        } else {
            self.b_outside(r)
        }
    }
}
