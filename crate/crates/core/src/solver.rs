//! Desk-scale solver for `|p1^c + p2^c + p3^c + p4^c - N| < eps` in primes
//! from `(X, 2X]`, with the block size derived as `X = (1/2)(2N/5)^{1/c}`.
//!
//! The search is meet-in-the-middle: all `P^2` ordered pair values
//! `p^c + q^c` are sorted by a scaled-integer key, and for each ordered pair
//! the complementary window `[N - s - eps, N - s + eps]` is binary-searched.
//! Keys are `floor(value * 2^32)`; candidates found by key are re-checked
//! with the exact floating-point condition, so the key layer cannot accept
//! or reject falsely. Quadruples are ordered (all `4!` arrangements count,
//! matching the four independent sums in the weighted count `B4`), and both
//! the enumeration and the weighted accumulation run in lexicographic order
//! so results are bit-deterministic.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{phi_hat, KernelParams};
use crate::sums::{eval_i, i_decay_bound, quad, sieve_range, GlobalParams, SumsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("need 1 < c < 2 (got {0})")]
    BadExponent(f64),
    #[error("eps must be positive (got {0})")]
    BadEps(f64),
    #[error("N = {0} too small: derived X = {1} < 10")]
    TooSmall(f64, u64),
    #[error("instance too large: {pairs} ordered pairs exceed 2^31 (needs about {bytes} bytes)")]
    TooLarge { pairs: u128, bytes: u128 },
    #[error("pair values overflow the key scale; N too large for the desk solver")]
    KeyOverflow,
    #[error(transparent)]
    Sums(#[from] SumsError),
}

/// A concrete `(c, N, eps)` problem with its derived block size.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Instance {
    pub c: f64,
    pub n: f64,
    pub eps: f64,
    /// `X = floor((1/2)(2N/5)^{1/c})`.
    pub x_size: u64,
    /// Whether `eps` was supplied rather than defaulted to `(ln X)^{-2}`.
    pub eps_overridden: bool,
    /// Set when `c` lies at or beyond the proven range `c < 1193/889`;
    /// experiments there are allowed but flagged.
    pub outside_proven_range: bool,
}

/// The block size formula, usable on its own (including at `c = 1`, which
/// the instance constructor itself rejects).
pub fn instance_x(c: f64, n: f64) -> f64 {
    (0.5 * (2.0 * n / 5.0).powf(1.0 / c)).floor()
}

pub fn make_instance(c: f64, n: f64, eps_override: Option<f64>) -> Result<Instance, SolverError> {
    if !(c > 1.0 && c < 2.0) {
        return Err(SolverError::BadExponent(c));
    }
    let xf = instance_x(c, n);
    if !(xf >= 10.0) {
        return Err(SolverError::TooSmall(n, xf.max(0.0) as u64));
    }
    let x_size = xf as u64;
    let eps = match eps_override {
        Some(e) if e > 0.0 => e,
        Some(e) => return Err(SolverError::BadEps(e)),
        None => (x_size as f64).ln().powi(-2),
    };
    Ok(Instance {
        c,
        n,
        eps,
        x_size,
        eps_overridden: eps_override.is_some(),
        outside_proven_range: c >= 1193.0 / 889.0,
    })
}

/// One prime quadruple solution; `delta = p1^c + p2^c + p3^c + p4^c - N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionRecord {
    pub p: [u64; 4],
    pub delta: f64,
}

/// The window condition, written once so the meet-in-the-middle pass, the
/// oracle and the re-checks share the exact same floating-point expression.
#[inline]
pub fn quad_hits(s12: f64, s34: f64, n: f64, eps: f64) -> bool {
    ((s12 + s34) - n).abs() < eps
}

const KEY_SCALE: f64 = 4294967296.0; // 2^32

struct PairTable {
    primes: Vec<u64>,
    /// `p^c` per prime, f64.
    pc: Vec<f64>,
    /// `ln p` per prime.
    lw: Vec<f64>,
    /// Ordered pairs `(key, i, j)` sorted by `(key, i, j)`.
    sorted: Vec<(u64, u32, u32)>,
}

impl PairTable {
    fn build(inst: &Instance) -> Result<Self, SolverError> {
        let table = sieve_range(inst.x_size)?;
        let p_count = table.primes.len() as u128;
        let pairs = p_count * p_count;
        if pairs > 1 << 31 {
            return Err(SolverError::TooLarge { pairs, bytes: pairs * 16 });
        }
        let c = inst.c;
        let pc: Vec<f64> = table.primes.iter().map(|&p| (p as f64).powf(c)).collect();
        let lw: Vec<f64> = table.primes.iter().map(|&p| (p as f64).ln()).collect();
        if 2.0 * pc[pc.len() - 1] >= (u64::MAX as f64) / KEY_SCALE {
            return Err(SolverError::KeyOverflow);
        }

        let n = pc.len();
        let mut sorted: Vec<(u64, u32, u32)> = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let key = ((pc[i] + pc[j]) * KEY_SCALE) as u64;
                sorted.push((key, i as u32, j as u32));
            }
        }
        sorted.par_sort_unstable();
        Ok(PairTable { primes: table.primes, pc, lw, sorted })
    }

    /// Indices into `sorted` whose keys may fall in `[lo_val, hi_val]`;
    /// widened one key either side to absorb the floor in the key map.
    fn window(&self, lo_val: f64, hi_val: f64) -> (usize, usize) {
        let lo_key = ((lo_val.max(0.0) * KEY_SCALE) as u64).saturating_sub(1);
        let hi_key = ((hi_val.max(0.0) * KEY_SCALE) as u64).saturating_add(1);
        let lo = self.sorted.partition_point(|&(k, _, _)| k < lo_key);
        let hi = self.sorted.partition_point(|&(k, _, _)| k <= hi_key);
        (lo, hi)
    }
}

/// Walks every ordered quadruple in lexicographic order, invoking `emit` for
/// each hit. The outer pair iterates lexicographically; window candidates
/// are sorted to lexicographic order before emission.
fn mitm_walk(
    inst: &Instance,
    table: &PairTable,
    mut emit: impl FnMut(usize, usize, usize, usize, f64) -> bool,
) {
    let n = table.pc.len();
    let mut window_buf: Vec<(u32, u32)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let s12 = table.pc[i] + table.pc[j];
            let (lo, hi) = table.window(inst.n - s12 - inst.eps, inst.n - s12 + inst.eps);
            if lo >= hi {
                continue;
            }
            window_buf.clear();
            for &(_, k, l) in &table.sorted[lo..hi] {
                let s34 = table.pc[k as usize] + table.pc[l as usize];
                if quad_hits(s12, s34, inst.n, inst.eps) {
                    window_buf.push((k, l));
                }
            }
            window_buf.sort_unstable();
            for &(k, l) in window_buf.iter() {
                let s34 = table.pc[k as usize] + table.pc[l as usize];
                let delta = (s12 + s34) - inst.n;
                if !emit(i, j, k as usize, l as usize, delta) {
                    return;
                }
            }
        }
    }
}

/// All solutions in lexicographic order of `(p1, p2, p3, p4)`, up to `limit`.
pub fn find_solutions(
    inst: &Instance,
    limit: Option<usize>,
) -> Result<Vec<SolutionRecord>, SolverError> {
    let table = PairTable::build(inst)?;
    let mut out = Vec::new();
    mitm_walk(inst, &table, |i, j, k, l, delta| {
        out.push(SolutionRecord {
            p: [table.primes[i], table.primes[j], table.primes[k], table.primes[l]],
            delta,
        });
        limit.map_or(true, |cap| out.len() < cap)
    });
    Ok(out)
}

/// The weighted and raw ordered counts:
/// `B4 = sum over solutions of prod ln p_i`, accumulated quadruple by
/// quadruple in lexicographic order (bit-identical to the oracle's order).
pub fn count_weighted(inst: &Instance) -> Result<(f64, u64), SolverError> {
    let table = PairTable::build(inst)?;
    let mut b4 = 0.0f64;
    let mut raw = 0u64;
    mitm_walk(inst, &table, |i, j, k, l, _| {
        b4 += (table.lw[i] * table.lw[j]) * (table.lw[k] * table.lw[l]);
        raw += 1;
        true
    });
    Ok((b4, raw))
}

/// Monte Carlo estimate (with 95% half-width) of
/// `vol{ t in (X, 2X]^4 : |sum t_i^c - N| <= eps }`.
///
/// Three coordinates are sampled; the fourth is integrated exactly, which
/// keeps the estimator useful on windows far thinner than a raw hit-or-miss
/// sampler could see. Samples run in fixed blocks with per-block seeded
/// streams, so the result is independent of thread count.
pub fn predicted_volume(inst: &Instance, mc_samples: u64, seed: u64) -> (f64, f64) {
    let c = inst.c;
    let x = inst.x_size as f64;
    let a = x.powf(c);
    let b = (2.0 * x).powf(c);
    let inv_c = 1.0 / c;

    const BLOCK: u64 = 4096;
    let blocks = mc_samples.div_ceil(BLOCK);
    let partials: Vec<(f64, f64, u64)> = (0..blocks)
        .into_par_iter()
        .map(|bi| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(bi + 1);
            let count = BLOCK.min(mc_samples - bi * BLOCK);
            let mut sum = 0.0f64;
            let mut sumsq = 0.0f64;
            for _ in 0..count {
                let mut s3 = 0.0f64;
                for _ in 0..3 {
                    let t = x * (1.0 + rng.gen::<f64>());
                    s3 += t.powf(c);
                }
                // measure of {t4 : |s3 + t4^c - N| <= eps, t4 in (X, 2X]}
                let u_lo = (inst.n - s3 - inst.eps).max(a);
                let u_hi = (inst.n - s3 + inst.eps).min(b);
                let h = if u_hi > u_lo {
                    u_hi.powf(inv_c) - u_lo.powf(inv_c)
                } else {
                    0.0
                };
                sum += h;
                sumsq += h * h;
            }
            (sum, sumsq, count)
        })
        .collect();

    let (mut sum, mut sumsq, mut count) = (0.0f64, 0.0f64, 0u64);
    for (s, q, n) in partials {
        sum += s;
        sumsq += q;
        count += n;
    }
    let nf = count as f64;
    let mean = sum / nf;
    let var = (sumsq / nf - mean * mean).max(0.0);
    let cube = x * x * x;
    let volume = mean * cube;
    let ci95 = 1.96 * (var / nf).sqrt() * cube;
    (volume, ci95)
}

#[derive(Debug, Clone, Serialize)]
pub struct MainTerm {
    /// Real part of the truncated main-term integral.
    pub value: f64,
    /// |imaginary part| / |value|, asserted small by the caller.
    pub imag_ratio: f64,
    /// The comparison scale `eps * X^{4-c}`.
    pub eps_x_pow: f64,
    /// Kernel actually used.
    pub kernel: KernelParams,
}

/// The truncated main-term integral
/// `int_{-tau}^{tau} I^4(x) Phi(x) e(-N x) dx`, with the kernel at
/// `a = 9 eps/10`, `b = eps/10`, `r = floor(ln X)`.
///
/// `cutoff_mult` scales the truncation point (`1` integrates over
/// `[-tau, tau]`; the robustness check compares against `2`).
///
/// The integrand combines phases up to `4 (2X)^c + N`, so panels are sized
/// to a fraction of that period; `|I|^4` decays like `x^{-4}`, and panels
/// whose envelope (decay bound to the fourth power times the kernel bound)
/// cannot reach a 1e-10 share of the running value are skipped with their
/// envelope accumulated as a certified tail bound. Each side of zero is
/// integrated independently, so the imaginary part is a genuine check
/// rather than zero by construction.
pub fn main_term_integral(inst: &Instance, cutoff_mult: f64) -> Result<MainTerm, SolverError> {
    let g = GlobalParams::new(inst.c, inst.x_size)?;
    let kernel = KernelParams::for_epsilon(inst.eps, inst.x_size as f64)
        .map_err(|_| SolverError::BadEps(inst.eps))?;
    let tau = g.tau() * cutoff_mult;
    let b_end = (2.0 * g.xf()).powf(g.c);

    let f = |x: f64| {
        let i4 = eval_i(x, &g).powu(4);
        let phase = -inst.n * x;
        let t = std::f64::consts::TAU * (phase - phase.round());
        i4 * phi_hat(x, &kernel) * Complex64::new(t.cos(), t.sin())
    };
    let envelope = |x: f64| {
        let ib = if x == 0.0 { g.xf() } else { i_decay_bound(x, &g).min(g.xf()) };
        let (b1, b2, b3) = crate::kernel::phi_hat_bounds(x, &kernel);
        ib.powi(4) * b1.min(b2).min(b3)
    };

    let width = 0.5 / (4.0 * b_end + inst.n);
    let side = |sign: f64| -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut skipped = 0.0f64;
        let mut x = 0.0f64;
        while x < tau {
            let hi = (x + width).min(tau);
            let env = envelope(x) * (hi - x);
            if env > 1e-10 * acc.norm().max(f64::MIN_POSITIVE) {
                acc += quad::adaptive(&f, sign * x, sign * hi, 1e-9, env * 1e-7) * sign;
            } else {
                skipped += env;
            }
            x = hi;
        }
        (acc, skipped)
    };
    let (pos, skip_pos) = side(1.0);
    let (neg, skip_neg) = side(-1.0);
    let total = pos + neg;
    let tail_bound = skip_pos + skip_neg;
    debug_assert!(tail_bound <= 1e-6 * total.norm().max(f64::MIN_POSITIVE));

    Ok(MainTerm {
        value: total.re,
        imag_ratio: total.im.abs() / total.re.abs().max(f64::MIN_POSITIVE),
        eps_x_pow: inst.eps * (inst.x_size as f64).powf(4.0 - inst.c),
        kernel,
    })
}

/// How `scan` chooses the window per `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EpsSpec {
    /// The same window everywhere.
    Fixed(f64),
    /// The theorem's own window `1 / ln N`.
    LogInverse,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub n: f64,
    pub x_size: u64,
    pub prime_count: usize,
    pub raw: u64,
    pub b4: f64,
    pub volume: f64,
    /// `B4 / (eps X^{4-c})`.
    pub main_term_ratio: f64,
    pub solvable: bool,
}

/// Per-`N` solvability scan: counts, weighted counts, the Monte Carlo
/// volume and the main-term ratio.
pub fn scan(
    c: f64,
    n_list: &[f64],
    eps: EpsSpec,
    mc_samples: u64,
    seed: u64,
) -> Result<Vec<ScanRow>, SolverError> {
    let mut rows = Vec::new();
    for &n in n_list {
        let eps_val = match eps {
            EpsSpec::Fixed(e) => Some(e),
            EpsSpec::LogInverse => Some(1.0 / n.ln()),
        };
        let inst = make_instance(c, n, eps_val)?;
        let table = sieve_range(inst.x_size)?;
        let (b4, raw) = count_weighted(&inst)?;
        let (volume, _ci) = predicted_volume(&inst, mc_samples, seed);
        rows.push(ScanRow {
            n,
            x_size: inst.x_size,
            prime_count: table.primes.len(),
            raw,
            b4,
            volume,
            main_term_ratio: b4 / (inst.eps * (inst.x_size as f64).powf(4.0 - c)),
            solvable: raw > 0,
        });
    }
    Ok(rows)
}

/// Logarithmically spaced `N` grid, endpoints included.
pub fn log_grid(from: f64, to: f64, points: usize) -> Vec<f64> {
    let points = points.max(2);
    (0..points)
        .map(|i| from * (to / from).powf(i as f64 / (points - 1) as f64))
        .collect()
}
