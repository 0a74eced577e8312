//! Double-double arithmetic for phase computation.
//!
//! The phases `n^c x mod 1` need `n^c` to far more absolute precision than
//! binary64 carries once `n^c x` exceeds 2^52. A double-double value
//! (`hi + lo`, non-overlapping) gives ~106 significant bits; `exp` and `ln`
//! here are accurate to a few units in the 100th bit, which keeps the
//! per-term phase error below 1e-9 throughout the desk-scale ranges this
//! crate evaluates (documented envelope: `|x| * (2X)^c` up to ~2^70).
//!
//! Algorithms are the classical error-free transformations (two_sum,
//! two_prod via FMA) with Taylor series for `exp` on `|r| <= ln(2)/2` and a
//! Newton step from the f64 seed for `ln`.

/// A non-overlapping double-double number `hi + lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    /// ln 2 to double-double precision.
    pub const LN2: Dd = Dd { hi: 6.931471805599453e-1, lo: 2.3190468138462996e-17 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let e = e + self.lo + rhs.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, rhs: f64) -> Dd {
        let (s, e) = two_sum(self.hi, rhs);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(Dd { hi: -rhs.hi, lo: -rhs.lo })
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p, e) = two_prod(self.hi, rhs);
        let e = e + self.lo * rhs;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_u64(self, rhs: u64) -> Dd {
        let d = rhs as f64;
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = self.hi - p - e + self.lo;
        let q2 = r / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `e^self` for |self| up to a few hundred.
    pub fn exp(self) -> Dd {
        let n = (self.hi / Dd::LN2.hi).round();
        let r = self.sub(Dd::LN2.mul_f64(n));
        // Taylor on |r| <= ln(2)/2: terms fall below 2^-110 by k = 26.
        let mut term = Dd::from_f64(1.0);
        let mut sum = Dd::from_f64(1.0);
        for k in 1..=26u64 {
            term = term.mul(r).div_u64(k);
            sum = sum.add(term);
        }
        let scale = f64::powi(2.0, n as i32);
        Dd { hi: sum.hi * scale, lo: sum.lo * scale }
    }

    /// Natural log of a positive f64, one Newton refinement of the f64 seed.
    pub fn ln_f64(x: f64) -> Dd {
        debug_assert!(x > 0.0 && x.is_finite());
        let seed = x.ln();
        // ln x = seed + ln(x e^{-seed}); the argument is within 1e-16 of 1,
        // so two series terms reach double-double accuracy.
        let r = Dd::from_f64(-seed).exp().mul_f64(x).add_f64(-1.0);
        let corr = r.sub(r.mul(r).mul_f64(0.5));
        Dd::from_f64(seed).add(corr)
    }

    /// Fractional part of `self * x`, signed, in `(-1, 1)`; exact given the
    /// inputs, and exactly odd in `x` (so conjugate symmetry of the sums is
    /// bit-for-bit).
    ///
    /// Both partial products are split error-free; each piece either is an
    /// integer (magnitude >= 2^53) or carries an exact fractional part, so
    /// the reduction loses nothing even when `self * x` is astronomically
    /// larger than 1.
    pub fn mul_f64_fract(self, x: f64) -> f64 {
        let (p1, e1) = two_prod(self.hi, x);
        let (p2, e2) = two_prod(self.lo, x);
        let mut acc = Dd::from_f64(p1.fract());
        acc = acc.add_f64(e1.fract());
        acc = acc.add_f64(p2.fract());
        acc = acc.add_f64(e2.fract());
        acc.to_f64().fract()
    }
}

/// `e(v) = exp(2 pi i v)` for a phase `v` already reduced to `(-1, 1)`,
/// returned as `(cos, sin)`.
#[inline]
pub fn e_of_fract(frac: f64) -> (f64, f64) {
    // Center on zero so the sin/cos arguments stay small; `round` is odd, so
    // negating the phase negates the argument exactly.
    let t = std::f64::consts::TAU * (frac - frac.round());
    (t.cos(), t.sin())
}

/// `n^c` as a double-double from a precomputed `ln n`.
#[inline]
pub fn pow_from_ln(ln_n: Dd, c: f64) -> Dd {
    ln_n.mul_f64(c).exp()
}
