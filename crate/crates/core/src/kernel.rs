//! The smoothing kernel and its Fourier transform.
//!
//! `phi` is a plateau function: 1 on `[-(a-b), a-b]`, 0 outside
//! `[-(a+b), a+b]`, strictly between in the ramps, realized as the indicator
//! of `[-a, a]` convolved with the `r`-fold boxcar of total width `2b`
//! (each factor uniform on `[-b/r, b/r]`). Its transform has the closed form
//!
//! ```text
//! Phi(x) = sin(2 pi a x)/(pi x) * [sin(2 pi b x / r) / (2 pi b x / r)]^r
//! ```
//!
//! and obeys the three-way bound
//! `|Phi(x)| <= min(2a, 1/(pi |x|), (1/(pi |x|)) (r/(2 pi b |x|))^r)`,
//! which [`kernel_check`] verifies pointwise on a log grid.
//!
//! Direct evaluation of `phi` goes through the piecewise-polynomial
//! (Irwin–Hall) distribution of the boxcar sum and is capped at `r <= 25`:
//! the alternating sum loses precision beyond that, and every production
//! integral uses `phi_hat` anyway. The convolution is `C^{r-1}`; when the
//! exact smoothness order `C^r` matters, [`phi_hat_smooth`] uses `r + 1`
//! boxcar factors (the pointwise bound is still checked with exponent `r`
//! as stated, which only the `r`-factor transform satisfies).

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("kernel parameters require 0 < b < a/4 and r >= 1 (got a={a}, b={b}, r={r})")]
    InvalidParams { a: f64, b: f64, r: u32 },
    #[error("direct phi evaluation is unsupported for r = {0} > 25 (ill-conditioned); use phi_hat")]
    UnsupportedSmoothness(u32),
}

/// Parameters `(a, b, r)` with `0 < b < a/4` and `r >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    a: f64,
    b: f64,
    r: u32,
}

impl KernelParams {
    pub fn new(a: f64, b: f64, r: u32) -> Result<Self, KernelError> {
        if !(a.is_finite() && b.is_finite() && b > 0.0 && b < a / 4.0 && r >= 1) {
            return Err(KernelError::InvalidParams { a, b, r });
        }
        Ok(KernelParams { a, b, r })
    }

    /// The instantiation used by the solver: `a = 9 eps / 10`,
    /// `b = eps / 10`, `r = floor(ln X)`.
    pub fn for_epsilon(eps: f64, x_size: f64) -> Result<Self, KernelError> {
        let r = (x_size.ln().floor() as i64).max(1) as u32;
        KernelParams::new(0.9 * eps, 0.1 * eps, r)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Width of the support, `a + b`.
    pub fn support(&self) -> f64 {
        self.a + self.b
    }

    /// Width of the plateau, `a - b`.
    pub fn plateau(&self) -> f64 {
        self.a - self.b
    }
}

/// `sin(v)/v` with the removable singularity evaluated by series.
fn sinc(v: f64) -> f64 {
    if v.abs() < 1e-4 {
        let v2 = v * v;
        1.0 - v2 / 6.0 + v2 * v2 / 120.0
    } else {
        v.sin() / v
    }
}

fn phi_hat_factors(x: f64, p: &KernelParams, factors: u32) -> f64 {
    let x = x.abs();
    // First factor written as 2a * sinc(2 pi a x) so that the plateau bound
    // 2a holds in floating point exactly as it does on paper.
    let first = 2.0 * p.a * sinc(std::f64::consts::TAU * p.a * x);
    let arg = std::f64::consts::TAU * p.b * x / factors as f64;
    first * sinc(arg).powi(factors as i32)
}

/// The transform `Phi(x)`; even, with `Phi(0) = 2a`.
pub fn phi_hat(x: f64, p: &KernelParams) -> f64 {
    phi_hat_factors(x, p, p.r)
}

/// Transform of the `C^r` variant built from `r + 1` boxcar factors.
pub fn phi_hat_smooth(x: f64, p: &KernelParams) -> f64 {
    phi_hat_factors(x, p, p.r + 1)
}

/// The three bounds of the transform estimate at `|x|`, in order:
/// plateau `2a`, first-derivative `1/(pi |x|)`, and the `r`-th order decay
/// `(1/(pi |x|)) (r/(2 pi b |x|))^r`.
pub fn phi_hat_bounds(x: f64, p: &KernelParams) -> (f64, f64, f64) {
    let x = x.abs();
    let plateau = 2.0 * p.a;
    if x == 0.0 {
        return (plateau, f64::INFINITY, f64::INFINITY);
    }
    let inv = 1.0 / (std::f64::consts::PI * x);
    let decay = inv * (p.r as f64 / (std::f64::consts::TAU * p.b * x)).powi(p.r as i32);
    (plateau, inv, decay)
}

/// Binomial coefficients fit f64 exactly for n <= 25.
fn binomial(n: u32, k: u32) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Round-off envelope of the alternating Irwin–Hall sum at order `r`:
/// largest summand times machine epsilon times the term count. The ramp
/// monotonicity check must tolerate dips of this size.
fn irwin_hall_conditioning(r: u32) -> f64 {
    let mut inv_fact = 1.0f64;
    for i in 1..=r {
        inv_fact /= i as f64;
    }
    let max_term = (0..r)
        .map(|k| binomial(r, k) * ((r - k) as f64).powi(r as i32))
        .fold(0.0f64, f64::max);
    max_term * inv_fact * f64::EPSILON * (r + 2) as f64
}

/// CDF of the Irwin–Hall distribution (sum of `r` uniforms on [0, 1]).
fn irwin_hall_cdf(w: f64, r: u32) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    if w >= r as f64 {
        return 1.0;
    }
    let mut inv_fact = 1.0f64;
    for i in 1..=r {
        inv_fact /= i as f64;
    }
    let mut acc = 0.0f64;
    let mut sign = 1.0f64;
    for k in 0..=(w.floor() as u32) {
        acc += sign * binomial(r, k) * (w - k as f64).powi(r as i32);
        sign = -sign;
    }
    (acc * inv_fact).clamp(0.0, 1.0)
}

/// Direct evaluation of the plateau function.
///
/// `phi(y) = H(y + a) - H(y - a)` where `H` is the CDF of the sum of `r`
/// independent uniforms on `[-b/r, b/r]`. Exactly 1 on the plateau and 0
/// outside the support thanks to the CDF clamping.
pub fn phi(y: f64, p: &KernelParams) -> Result<f64, KernelError> {
    if p.r > 25 {
        return Err(KernelError::UnsupportedSmoothness(p.r));
    }
    // T = (b/r)(2W - r) for W Irwin-Hall(r), so H(t) = F_r((t r / b + r)/2).
    let h = |t: f64| irwin_hall_cdf((t * p.r as f64 / p.b + p.r as f64) / 2.0, p.r);
    Ok(h(y + p.a) - h(y - p.a))
}

/// Sampling specification for [`kernel_check`]: a log grid over
/// `|x| in [lo, hi]` with `samples` points.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { lo: 1e-3, hi: 1e6, samples: 10_000 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiReport {
    /// Max |phi - 1| on sampled plateau points.
    pub max_plateau_err: f64,
    /// Max |phi| on sampled points outside the support.
    pub max_support_err: f64,
    /// Ramp monotonicity held at every adjacent sampled pair.
    pub ramps_monotone: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    /// Maximum relative excess of |Phi| over the three-way bound, counted
    /// beyond a 4-ulp allowance; zero when every sample satisfies the bound.
    pub max_violation: f64,
    pub argmax_x: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiReport>,
}

/// Units in the last place of `v`, for tolerance bookkeeping.
pub fn ulp(v: f64) -> f64 {
    let v = v.abs();
    if v == 0.0 {
        return f64::MIN_POSITIVE;
    }
    let next = f64::from_bits(v.to_bits() + 1);
    next - v
}

/// Pointwise verification of the transform bound on a log grid, plus the
/// plateau/support/monotonicity properties of `phi` when `r <= 25`.
pub fn kernel_check(p: &KernelParams, grid: &GridSpec) -> KernelReport {
    let n = grid.samples.max(2);
    let ratio = (grid.hi / grid.lo).ln();
    let mut max_violation = 0.0f64;
    let mut argmax_x = 0.0f64;

    for i in 0..n {
        let x = grid.lo * (ratio * i as f64 / (n - 1) as f64).exp();
        let v = phi_hat(x, p).abs();
        let (b1, b2, b3) = phi_hat_bounds(x, p);
        let bound = b1.min(b2).min(b3);
        if v > bound + 4.0 * ulp(bound) {
            let excess = (v - bound) / bound;
            if excess > max_violation {
                max_violation = excess;
                argmax_x = x;
            }
        }
    }

    let phi_report = (p.r <= 25).then(|| {
        let m = 1000;
        let mut max_plateau_err = 0.0f64;
        let mut max_support_err = 0.0f64;
        for i in 0..m {
            let t = (i as f64 + 0.5) / m as f64;
            // Interior of the plateau and exterior of the support; both
            // scaled to stay clear of the boundaries by half a step.
            let y_in = p.plateau() * (2.0 * t - 1.0);
            let err_in = (phi(y_in, p).unwrap() - 1.0).abs();
            max_plateau_err = max_plateau_err.max(err_in);
            let y_out = p.support() * (1.0 + t);
            let err_out = phi(y_out, p).unwrap().abs().max(phi(-y_out, p).unwrap().abs());
            max_support_err = max_support_err.max(err_out);
        }
        // Nondecreasing on the rising ramp, nonincreasing on the falling,
        // up to the round-off envelope of the CDF evaluation.
        let tol = 8.0 * irwin_hall_conditioning(p.r) + 1e-14;
        let mut ramps_monotone = true;
        let mut prev = 0.0f64;
        for i in 0..=m {
            let y = -p.support() + 2.0 * p.b * i as f64 / m as f64;
            let v = phi(y, p).unwrap();
            if v < prev - tol {
                ramps_monotone = false;
            }
            prev = v;
        }
        let mut prev = 1.0f64;
        for i in 0..=m {
            let y = p.plateau() + 2.0 * p.b * i as f64 / m as f64;
            let v = phi(y, p).unwrap();
            if v > prev + tol {
                ramps_monotone = false;
            }
            prev = v;
        }
        PhiReport { max_plateau_err, max_support_err, ramps_monotone }
    });

    KernelReport { max_violation, argmax_x, samples: n, phi: phi_report }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, b: f64, r: u32) -> KernelParams {
        KernelParams::new(a, b, r).unwrap()
    }

    #[test]
    fn constructor_enforces_the_window() {
        assert!(KernelParams::new(0.9, 0.1, 10).is_ok());
        assert!(KernelParams::new(0.9, 0.25, 10).is_err()); // b >= a/4
        assert!(KernelParams::new(0.9, 0.0, 10).is_err());
        assert!(KernelParams::new(0.9, 0.1, 0).is_err());
    }

    #[test]
    fn transform_at_zero_is_total_mass() {
        let p = params(0.9, 0.1, 10);
        assert_eq!(phi_hat(0.0, &p), 2.0 * 0.9);
        let p = params(0.009, 0.001, 12);
        assert!((phi_hat(0.0, &p) - 0.018).abs() < 1e-18);
    }

    #[test]
    fn transform_is_even() {
        let p = params(0.9, 0.1, 10);
        for x in [0.017, 1.3, 47.0, 1.9e4] {
            assert_eq!(phi_hat(x, &p), phi_hat(-x, &p));
        }
    }

    #[test]
    fn three_way_bound_holds_on_the_reference_grid() {
        let p = params(0.9, 0.1, 10);
        let report = kernel_check(&p, &GridSpec::default());
        assert_eq!(report.max_violation, 0.0, "argmax at {}", report.argmax_x);
        assert_eq!(report.samples, 10_000);
    }

    #[test]
    fn desk_scale_epsilon_params_check_clean() {
        // eps = 0.01 instantiation: a = 0.009, b = 0.001, r = 12.
        let p = params(0.009, 0.001, 12);
        let report = kernel_check(&p, &GridSpec { lo: 1e-3, hi: 1e6, samples: 4000 });
        assert_eq!(report.max_violation, 0.0);
        let phi = report.phi.unwrap();
        assert!(phi.max_plateau_err < 1e-9);
        assert!(phi.max_support_err < 1e-9);
        assert!(phi.ramps_monotone);
    }

    #[test]
    fn plateau_and_support_are_exact() {
        let p = params(0.9, 0.1, 5);
        assert_eq!(phi(0.0, &p).unwrap(), 1.0);
        assert_eq!(phi(0.79, &p).unwrap(), 1.0); // inside the plateau
        // The support edge y = a + b lands a rounding error inside the ramp;
        // anything clearly past it is exactly zero.
        assert!(phi(1.0, &p).unwrap().abs() < 1e-50);
        assert!(phi(-1.0, &p).unwrap().abs() < 1e-50);
        assert_eq!(phi(1.0 + 1e-12, &p).unwrap(), 0.0);
        let mid = phi(0.9, &p).unwrap();
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn r_equals_one_is_the_trapezoid() {
        let p = params(0.9, 0.1, 1);
        // Single boxcar: linear ramp between a-b and a+b.
        let y = 0.85;
        let expected = (p.support() - y) / (2.0 * p.b);
        assert!((phi(y, &p).unwrap() - expected).abs() < 1e-12);
        let report = kernel_check(&p, &GridSpec { lo: 1e-3, hi: 1e5, samples: 3000 });
        assert_eq!(report.max_violation, 0.0);
    }

    #[test]
    fn large_r_is_rejected_for_direct_phi() {
        let p = params(0.9, 0.1, 26);
        assert_eq!(phi(0.5, &p), Err(KernelError::UnsupportedSmoothness(26)));
        // The transform path has no such cap.
        assert!(phi_hat(3.0, &p).is_finite());
    }

    #[test]
    fn phi_integrates_to_twice_a() {
        // Simpson quadrature over the support; phi is piecewise polynomial,
        // the rule converges fast.
        let p = params(0.9, 0.1, 5);
        let (lo, hi) = (-p.support(), p.support());
        let n = 4000;
        let h = (hi - lo) / n as f64;
        let mut acc = phi(lo, &p).unwrap() + phi(hi, &p).unwrap();
        for i in 1..n {
            let w = if i % 2 == 0 { 2.0 } else { 4.0 };
            acc += w * phi(lo + i as f64 * h, &p).unwrap();
        }
        let integral = acc * h / 3.0;
        assert!((integral - 2.0 * p.a()).abs() / (2.0 * p.a()) < 1e-6);
    }

    #[test]
    fn transform_integrates_to_phi_at_zero() {
        // int Phi(x) dx over [-T, T] with T = 1e3 / b approaches phi(0) = 1.
        // Simpson with panels aligned to the sin(2 pi a x) oscillation.
        let p = params(0.9, 0.1, 6);
        let t_end = 1e3 / p.b();
        let n = 800_000;
        let h = t_end / n as f64;
        let mut acc = phi_hat(0.0, &p) + phi_hat(t_end, &p);
        for i in 1..n {
            let w = if i % 2 == 0 { 2.0 } else { 4.0 };
            acc += w * phi_hat(i as f64 * h, &p);
        }
        let integral = 2.0 * (acc * h / 3.0) - phi_hat(0.0, &p) * 0.0; // even integrand
        assert!((integral - 1.0).abs() < 1e-3, "got {integral}");
    }

    #[test]
    fn smooth_variant_keeps_plateau_mass_and_evenness() {
        let p = params(0.9, 0.1, 10);
        assert_eq!(phi_hat_smooth(0.0, &p), 2.0 * 0.9);
        assert_eq!(phi_hat_smooth(2.3, &p), phi_hat_smooth(-2.3, &p));
        // It still obeys the first two bounds (the r-th order decay bound is
        // specific to the r-factor transform).
        for x in [0.4, 3.0, 55.0] {
            let (b1, b2, _) = phi_hat_bounds(x, &p);
            let v = phi_hat_smooth(x, &p).abs();
            assert!(v <= b1.min(b2) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn for_epsilon_matches_the_solver_instantiation() {
        let p = KernelParams::for_epsilon(0.01, 1e6).unwrap();
        assert!((p.a() - 0.009).abs() < 1e-15);
        assert!((p.b() - 0.001).abs() < 1e-15);
        assert_eq!(p.r(), 13); // floor(ln 1e6) = 13
    }
}
