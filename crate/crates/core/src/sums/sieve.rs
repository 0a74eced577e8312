//! Segmented sieve of Eratosthenes for the dyadic block `(X, 2X]`.

/// All primes up to `limit` by a plain sieve. Used for base primes and as
/// the small-`X` cross-check oracle.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Primes in `(lo, hi]` by a segmented sieve; deterministic and ascending.
pub fn segmented_sieve(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= lo {
        return Vec::new();
    }
    let base = simple_sieve((hi as f64).sqrt() as u64 + 1);
    let mut primes = Vec::new();
    const SEGMENT: u64 = 1 << 18;
    let mut seg_lo = lo + 1;
    let mut mark = vec![false; SEGMENT as usize];
    while seg_lo <= hi {
        let seg_hi = (seg_lo + SEGMENT - 1).min(hi);
        let len = (seg_hi - seg_lo + 1) as usize;
        mark[..len].fill(false);
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            let mut m = seg_lo.div_ceil(p) * p;
            if m < p * p {
                m = p * p;
            }
            while m <= seg_hi {
                mark[(m - seg_lo) as usize] = true;
                m += p;
            }
        }
        for i in 0..len {
            if !mark[i] {
                let n = seg_lo + i as u64;
                if n >= 2 {
                    primes.push(n);
                }
            }
        }
        seg_lo = seg_hi + 1;
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_block() {
        assert_eq!(segmented_sieve(10, 20), vec![11, 13, 17, 19]);
    }

    #[test]
    fn matches_simple_sieve_on_random_blocks() {
        for (lo, hi) in [(0, 100), (89, 200), (1000, 2500), (9973, 10500)] {
            let expected: Vec<u64> = simple_sieve(hi)
                .into_iter()
                .filter(|&p| p > lo)
                .collect();
            assert_eq!(segmented_sieve(lo, hi), expected, "block ({lo}, {hi}]");
        }
    }

    #[test]
    fn hundred_block_has_21_primes() {
        assert_eq!(segmented_sieve(100, 200).len(), 21);
    }
}
