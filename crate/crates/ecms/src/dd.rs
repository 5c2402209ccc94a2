//! Minimal double-double arithmetic (~31 significant digits).
//!
//! The alternating Bessel power series loses digits to cancellation once
//! |z| gets large: near |z| = 15 the largest term exceeds the sum by ~6
//! orders of magnitude, which caps a plain f64 evaluation around 1e-9
//! relative error.  Carrying the accumulation in double-double keeps the
//! series accurate to full f64 precision over the whole validated envelope.
//!
//! Only the operations the series needs are implemented.  Algorithms are the
//! standard error-free transformations (Dekker / Knuth two-sum, FMA-based
//! two-prod).

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    /// Division by an ordinary f64, accurate to double-double precision.
    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let r = self.sub(Dd { hi: p, lo: e });
        let q2 = (r.hi + r.lo) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd { re: Dd::ZERO, im: Dd::ZERO };

    #[inline]
    pub fn from_f64(re: f64, im: f64) -> CDd {
        CDd { re: Dd::from_f64(re), im: Dd::from_f64(im) }
    }

    #[inline]
    pub fn add(self, rhs: CDd) -> CDd {
        CDd { re: self.re.add(rhs.re), im: self.im.add(rhs.im) }
    }

    #[inline]
    pub fn mul(self, rhs: CDd) -> CDd {
        CDd {
            re: self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            im: self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        }
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> CDd {
        CDd { re: self.re.div_f64(b), im: self.im.div_f64(b) }
    }

    /// Cheap magnitude estimate (hi parts only); used for truncation tests.
    #[inline]
    pub fn mag_hi(self) -> f64 {
        self.re.hi.abs() + self.im.hi.abs()
    }
}
