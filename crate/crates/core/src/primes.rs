//! Prime generation, smallest-prime-factor service, and prime-weighted sums.
//!
//! Everything here is exact integer work. The segmented Eratosthenes core
//! walks odd numbers only; segment size defaults to 2^18 entries, which
//! keeps the working set inside L2 and is the single most important knob
//! for throughput of the summation drivers built on top.

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// Resource budgets for the sieve layer.
///
/// `prime_table_cap` bounds materialized prime tables, `stream_cap` bounds
/// streaming enumeration, `spf_len_cap` bounds one smallest-prime-factor
/// segment. All three produce a named resource error when exceeded.
#[derive(Clone, Copy, Debug)]
pub struct SieveLimits {
    pub prime_table_cap: u64,
    pub stream_cap: u64,
    pub spf_len_cap: u64,
    pub segment_len: usize,
}

impl Default for SieveLimits {
    fn default() -> Self {
        SieveLimits {
            prime_table_cap: 1_000_000_000,
            // Full-summation runs are documented up to 1e10; x itself is
            // held in u64 throughout.
            stream_cap: 10_000_000_000,
            spf_len_cap: 1 << 24,
            segment_len: 1 << 18,
        }
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Plain in-memory sieve; used for base primes up to sqrt of the range.
fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut m = i * i;
            while m <= n {
                composite[m] = true;
                m += i;
            }
        }
    }
    primes
}

/// All primes up to a fixed limit, ordered.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }
}

/// Sieve all primes `p ≤ limit` with a segmented Eratosthenes sieve.
pub fn sieve_primes(limit: u64, limits: &SieveLimits) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::Usage(format!(
            "sieve limit must be at least 2, got {limit}"
        )));
    }
    if limit > limits.prime_table_cap {
        return Err(Error::Resource {
            what: "prime table limit",
            requested: limit,
            budget: limits.prime_table_cap,
        });
    }
    let mut primes = Vec::with_capacity(prime_count_estimate(limit));
    stream_primes(limit, limits, |p| primes.push(p))?;
    Ok(PrimeTable { limit, primes })
}

fn prime_count_estimate(limit: u64) -> usize {
    if limit < 10 {
        return 8;
    }
    let x = limit as f64;
    (1.2 * x / x.ln()) as usize
}

/// Stream every prime `p ≤ limit` in increasing order into `emit`.
pub fn stream_primes(
    limit: u64,
    limits: &SieveLimits,
    mut emit: impl FnMut(u64),
) -> Result<()> {
    stream_primes_in(0, limit, limits, |p| {
        emit(p);
        true
    })
}

/// Stream primes in the half-open-below range `lo < p ≤ hi`. The visitor
/// returns `false` to stop early.
pub fn stream_primes_in(
    lo: u64,
    hi: u64,
    limits: &SieveLimits,
    mut visit: impl FnMut(u64) -> bool,
) -> Result<()> {
    if hi > limits.stream_cap {
        return Err(Error::Resource {
            what: "prime stream limit",
            requested: hi,
            budget: limits.stream_cap,
        });
    }
    if hi < 2 || hi <= lo {
        return Ok(());
    }
    if lo < 2 && !visit(2) {
        return Ok(());
    }
    let base = simple_sieve(isqrt(hi));
    // Odd-only segments: the bitmap entry k inside a segment starting at
    // odd value `start` represents start + 2k.
    let seg_entries = limits.segment_len.max(64);
    let mut start = (lo + 1).max(3);
    if start % 2 == 0 {
        start += 1;
    }
    let mut mask = vec![false; seg_entries];
    while start <= hi {
        let end_value = start.saturating_add(2 * seg_entries as u64 - 1).min(hi);
        let entries = ((end_value - start) / 2 + 1) as usize;
        mask[..entries].fill(false);
        for &p in base.iter().skip(1) {
            // skip p = 2
            if p * p > end_value {
                break;
            }
            let mut m = (start + p - 1) / p * p;
            if m < p * p {
                m = p * p;
            }
            if m % 2 == 0 {
                m += p;
            }
            while m <= end_value {
                mask[((m - start) / 2) as usize] = true;
                m += 2 * p;
            }
        }
        for (k, &is_composite) in mask[..entries].iter().enumerate() {
            if !is_composite {
                let p = start + 2 * k as u64;
                if p > 2 && !visit(p) {
                    return Ok(());
                }
            }
        }
        let covered_max = start + 2 * (entries as u64 - 1);
        start = covered_max + 2;
    }
    Ok(())
}

/// Smallest prime factor of every integer in a half-open range `[lo, hi)`.
///
/// The entry for `n = 1` is the unit marker `1`.
#[derive(Clone, Debug)]
pub struct SpfSegment {
    lo: u64,
    hi: u64,
    spf: Vec<u64>,
}

impl SpfSegment {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.lo && n < self.hi
    }

    /// Smallest prime factor of `n`; `1` for `n = 1`.
    pub fn spf(&self, n: u64) -> u64 {
        assert!(self.contains(n), "n = {n} outside segment");
        self.spf[(n - self.lo) as usize]
    }

    /// Factorization of `n` as ordered `(prime, exponent)` pairs.
    ///
    /// Uses in-segment lookups while the cofactor stays in range and falls
    /// back to trial division once repeated division leaves the segment.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        assert!(n >= 1);
        let mut out = Vec::new();
        let mut x = n;
        while x > 1 {
            let p = if self.contains(x) {
                self.spf[(x - self.lo) as usize]
            } else {
                trial_spf(x)
            };
            let mut e = 0u32;
            while x % p == 0 {
                x /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }
}

/// Smallest prime factor by trial division.
pub fn trial_spf(n: u64) -> u64 {
    assert!(n >= 2);
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// Compute the smallest-prime-factor table for `[lo, hi)`.
pub fn spf_segment(lo: u64, hi: u64, limits: &SieveLimits) -> Result<SpfSegment> {
    if lo < 1 || hi <= lo {
        return Err(Error::Usage(format!(
            "spf segment needs hi > lo >= 1, got [{lo}, {hi})"
        )));
    }
    let len = hi - lo;
    if len > limits.spf_len_cap {
        return Err(Error::Resource {
            what: "spf segment length",
            requested: len,
            budget: limits.spf_len_cap,
        });
    }
    let mut spf = vec![0u64; len as usize];
    let base = simple_sieve(isqrt(hi - 1));
    for &p in &base {
        let mut m = (lo + p - 1) / p * p;
        if m < p {
            m = p;
        }
        while m < hi {
            let idx = (m - lo) as usize;
            if spf[idx] == 0 {
                spf[idx] = p;
            }
            m += p;
        }
    }
    for (idx, entry) in spf.iter_mut().enumerate() {
        if *entry == 0 {
            let n = lo + idx as u64;
            *entry = if n == 1 { 1 } else { n }; // unmarked => prime (or the unit)
        }
    }
    Ok(SpfSegment { lo, hi, spf })
}

/// `Σ_{lo < p ≤ hi} weight(p) · log p`, exact enumeration over primes.
///
/// Bounds are reals; the sum runs over integer primes in the half-open
/// interval `(lo, hi]`.
pub fn prime_log_sum<T: Real>(
    mut weight: impl FnMut(u64) -> Cx<T>,
    lo: f64,
    hi: f64,
    limits: &SieveLimits,
) -> Result<Cx<T>> {
    if !(lo >= 1.0 && hi >= lo) {
        return Err(Error::Usage(format!(
            "prime_log_sum needs hi >= lo >= 1, got ({lo}, {hi}]"
        )));
    }
    let lo_int = lo.floor() as u64;
    let hi_int = hi.floor() as u64;
    let mut sum = Cx::new(T::zero(), T::zero());
    stream_primes_in(lo_int, hi_int, limits, |p| {
        // floor(lo) < p can still violate p > lo when lo is fractional
        if (p as f64) > lo {
            sum += weight(p) * T::ln_u64(p);
        }
        true
    })?;
    Ok(sum)
}

/// `Σ_{d ≤ x} weight(d) Λ(d)` with Λ the von Mangoldt function
/// (`log p` at prime powers `p^ν`, zero elsewhere).
pub fn von_mangoldt_sum<T: Real>(
    mut weight: impl FnMut(u64) -> Cx<T>,
    x: f64,
    limits: &SieveLimits,
) -> Result<Cx<T>> {
    if x < 1.0 {
        return Err(Error::Usage(format!("von_mangoldt_sum needs x >= 1, got {x}")));
    }
    let xi = x.floor() as u64;
    let mut sum = Cx::new(T::zero(), T::zero());
    if xi < 2 {
        return Ok(sum);
    }
    stream_primes_in(1, xi, limits, |p| {
        let logp = T::ln_u64(p);
        let mut q = p;
        loop {
            sum += weight(q) * logp;
            if q > xi / p {
                break;
            }
            q *= p;
        }
        true
    })?;
    Ok(sum)
}
