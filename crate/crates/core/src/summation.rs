//! Exact finite sums over multiplicative functions: plain and weighted
//! summatory functions, ω-restricted sums, friable sums, and the
//! prime-side hypothesis residuals.
//!
//! The workhorse is a streaming driver that factors every integer of a
//! block in one sweep (progressive division by the base primes), evaluates
//! all requested functions on the block, and reduces per-segment partials
//! with a fixed pairwise tree so results do not depend on the worker count.

use crate::error::{Error, Result};
use crate::multfun::MultFn;
use crate::primes::{isqrt, sieve_primes, stream_primes_in, SieveLimits};
use crate::scalar::{Cx, Real};
use rayon::prelude::*;
use std::collections::BinaryHeap;
use std::time::Instant;

/// Options for the summation drivers.
#[derive(Clone, Copy, Debug)]
pub struct SumOptions {
    /// Largest admissible x.
    pub cap: u64,
    /// Block length of the streaming factorizer.
    pub segment_len: usize,
    /// Compensated (Kahan) accumulation; on by default, toggleable to
    /// measure its effect under heavy cancellation.
    pub kahan: bool,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions {
            cap: 1_000_000_000,
            segment_len: 1 << 18,
            kahan: true,
        }
    }
}

/// One comparison row: `exact = expansion + remainder` by construction.
#[derive(Clone, Copy, Debug)]
pub struct SummationResult<T: Real> {
    pub x: u64,
    pub exact: Cx<T>,
    pub expansion: Cx<T>,
    pub remainder: Cx<T>,
    pub seconds: f64,
}

/// Convergence trace of a friable summation: strictly increasing cutoffs
/// with the partial sum at each.
#[derive(Clone, Debug)]
pub struct FriableTrace<T: Real> {
    pub points: Vec<(u64, Cx<T>)>,
    pub target: Option<Cx<T>>,
    pub truncated: bool,
    pub terms_used: u64,
}

impl<T: Real> FriableTrace<T> {
    pub fn final_value(&self) -> Cx<T> {
        self.points.last().map(|&(_, v)| v).unwrap_or_else(|| {
            Cx::new(T::zero(), T::zero())
        })
    }
}

// ---------------------------------------------------------------------------
// Accumulation primitives
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Kahan<T: Real> {
    s: Cx<T>,
    c: Cx<T>,
    enabled: bool,
}

impl<T: Real> Kahan<T> {
    fn new(enabled: bool) -> Self {
        let zero = Cx::new(T::zero(), T::zero());
        Kahan {
            s: zero,
            c: zero,
            enabled,
        }
    }

    #[inline]
    fn add(&mut self, v: Cx<T>) {
        if !self.enabled {
            self.s += v;
            return;
        }
        let y = v - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }

    fn value(&self) -> Cx<T> {
        self.s
    }
}

/// Deterministic pairwise tree reduction over ordered partials.
fn tree_reduce<T: Real>(parts: &[Cx<T>]) -> Cx<T> {
    match parts.len() {
        0 => Cx::new(T::zero(), T::zero()),
        1 => parts[0],
        n => {
            let mid = n / 2;
            tree_reduce(&parts[..mid]) + tree_reduce(&parts[mid..])
        }
    }
}

fn tree_reduce_i128(parts: &[i128]) -> i128 {
    match parts.len() {
        0 => 0,
        1 => parts[0],
        n => {
            let mid = n / 2;
            tree_reduce_i128(&parts[..mid]) + tree_reduce_i128(&parts[mid..])
        }
    }
}

// ---------------------------------------------------------------------------
// Block factorization
// ---------------------------------------------------------------------------

/// Values of every function on the block `[lo, hi)`, plus ω(n) when asked.
struct BlockEval<T: Real> {
    vals: Vec<Vec<Cx<T>>>,
    omega: Option<Vec<u8>>,
}

/// Factor the block once, evaluating all functions as primes divide out.
fn eval_block<T: Real>(
    fs: &[&MultFn<T>],
    lo: u64,
    hi: u64,
    base: &[u64],
    want_omega: bool,
) -> BlockEval<T> {
    let len = (hi - lo) as usize;
    let one = Cx::new(T::one(), T::zero());
    let mut vals = vec![vec![one; len]; fs.len()];
    let mut omega = if want_omega { vec![0u8; len] } else { Vec::new() };
    let mut rem: Vec<u64> = (lo..hi).collect();

    let mut powers: Vec<Vec<Cx<T>>> = vec![Vec::new(); fs.len()];
    for &p in base {
        if p.saturating_mul(p) >= hi {
            break;
        }
        // Largest exponent reachable inside the block.
        let mut nu_max = 1u32;
        let mut pe = p;
        while pe <= (hi - 1) / p {
            pe *= p;
            nu_max += 1;
        }
        for (fi, f) in fs.iter().enumerate() {
            powers[fi].clear();
            powers[fi].extend((1..=nu_max).map(|nu| f.local(p, nu)));
        }
        let mut m = lo.div_euclid(p).max(1) * p;
        if m < lo {
            m += p;
        }
        while m < hi {
            let idx = (m - lo) as usize;
            let mut e = 0u32;
            while rem[idx] % p == 0 {
                rem[idx] /= p;
                e += 1;
            }
            for (fi, pv) in powers.iter().enumerate() {
                vals[fi][idx] = vals[fi][idx] * pv[(e - 1) as usize];
            }
            if want_omega {
                omega[idx] += 1;
            }
            m += p;
        }
    }
    for idx in 0..len {
        let q = rem[idx];
        if q > 1 {
            for (fi, f) in fs.iter().enumerate() {
                vals[fi][idx] = vals[fi][idx] * f.local(q, 1);
            }
            if want_omega {
                omega[idx] += 1;
            }
        }
    }
    BlockEval {
        vals,
        omega: if want_omega { Some(omega) } else { None },
    }
}

/// Integer twin of [`eval_block`] for exactly integer-valued functions.
fn eval_block_int<T: Real>(fs: &[&MultFn<T>], lo: u64, hi: u64, base: &[u64]) -> Vec<Vec<i64>> {
    let len = (hi - lo) as usize;
    let mut vals = vec![vec![1i64; len]; fs.len()];
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut powers: Vec<Vec<i64>> = vec![Vec::new(); fs.len()];
    for &p in base {
        if p.saturating_mul(p) >= hi {
            break;
        }
        let mut nu_max = 1u32;
        let mut pe = p;
        while pe <= (hi - 1) / p {
            pe *= p;
            nu_max += 1;
        }
        for (fi, f) in fs.iter().enumerate() {
            powers[fi].clear();
            powers[fi].extend((1..=nu_max).map(|nu| f.local_int(p, nu).expect("integer rule")));
        }
        let mut m = lo.div_euclid(p).max(1) * p;
        if m < lo {
            m += p;
        }
        while m < hi {
            let idx = (m - lo) as usize;
            let mut e = 0u32;
            while rem[idx] % p == 0 {
                rem[idx] /= p;
                e += 1;
            }
            for (fi, pv) in powers.iter().enumerate() {
                vals[fi][idx] *= pv[(e - 1) as usize];
            }
            m += p;
        }
    }
    for idx in 0..len {
        let q = rem[idx];
        if q > 1 {
            for (fi, f) in fs.iter().enumerate() {
                vals[fi][idx] *= f.local_int(q, 1).expect("integer rule");
            }
        }
    }
    vals
}

// ---------------------------------------------------------------------------
// Summatory drivers
// ---------------------------------------------------------------------------

fn validate_grid(xs: &[u64], cap: u64) -> Result<u64> {
    if xs.is_empty() {
        return Err(Error::Usage("empty evaluation grid".into()));
    }
    for w in xs.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Usage(format!(
                "grid must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    let x_max = *xs.last().unwrap();
    if x_max > cap {
        return Err(Error::Resource {
            what: "summation x",
            requested: x_max,
            budget: cap,
        });
    }
    if xs[0] == 0 {
        return Err(Error::Usage("grid points must be positive".into()));
    }
    Ok(x_max)
}

fn segment_bounds(x_max: u64, seg_len: usize) -> Vec<(u64, u64)> {
    let l = seg_len.max(1024) as u64;
    let mut out = Vec::new();
    let mut lo = 1u64;
    while lo <= x_max {
        let hi = (lo + l).min(x_max + 1);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

fn base_primes_for(x_max: u64) -> Result<Vec<u64>> {
    let root = isqrt(x_max).max(2);
    let limits = SieveLimits {
        prime_table_cap: root.max(1 << 20),
        ..Default::default()
    };
    Ok(sieve_primes(root, &limits)?.primes().to_vec())
}

/// Prefix sums `M(x; f_i)` for several functions on a shared increasing
/// grid, in one streaming pass. Values are identical to independent
/// [`summatory`] calls and independent of the rayon worker count.
pub fn summatory_multi<T: Real>(
    fs: &[&MultFn<T>],
    xs: &[u64],
    opts: &SumOptions,
) -> Result<Vec<Vec<Cx<T>>>> {
    let x_max = validate_grid(xs, opts.cap)?;
    if fs.is_empty() {
        return Ok(Vec::new());
    }
    if fs.iter().all(|f| f.is_integer_valued()) {
        return summatory_multi_int(fs, xs, opts, x_max);
    }
    let base = base_primes_for(x_max)?;
    let segments = segment_bounds(x_max, opts.segment_len);
    let nf = fs.len();

    // Each segment reports its totals and the prefix snapshot at every
    // checkpoint it contains.
    struct SegOut<T: Real> {
        totals: Vec<Cx<T>>,
        cuts: Vec<(usize, Vec<Cx<T>>)>,
    }
    let outs: Vec<SegOut<T>> = segments
        .par_iter()
        .map(|&(lo, hi)| {
            let block = eval_block(fs, lo, hi, &base, false);
            let mut acc: Vec<Kahan<T>> = (0..nf).map(|_| Kahan::new(opts.kahan)).collect();
            let mut cuts = Vec::new();
            let mut next_cut = xs.partition_point(|&x| x < lo);
            for idx in 0..(hi - lo) as usize {
                let n = lo + idx as u64;
                for fi in 0..nf {
                    acc[fi].add(block.vals[fi][idx]);
                }
                while next_cut < xs.len() && xs[next_cut] == n {
                    cuts.push((next_cut, acc.iter().map(|k| k.value()).collect()));
                    next_cut += 1;
                }
            }
            SegOut {
                totals: acc.iter().map(|k| k.value()).collect(),
                cuts,
            }
        })
        .collect();

    let mut result = vec![vec![Cx::new(T::zero(), T::zero()); xs.len()]; nf];
    let totals_by_fn: Vec<Vec<Cx<T>>> = (0..nf)
        .map(|fi| outs.iter().map(|o| o.totals[fi]).collect())
        .collect();
    for (si, out) in outs.iter().enumerate() {
        for (cut_idx, snapshot) in &out.cuts {
            for fi in 0..nf {
                result[fi][*cut_idx] = tree_reduce(&totals_by_fn[fi][..si]) + snapshot[fi];
            }
        }
    }
    Ok(result)
}

fn summatory_multi_int<T: Real>(
    fs: &[&MultFn<T>],
    xs: &[u64],
    opts: &SumOptions,
    x_max: u64,
) -> Result<Vec<Vec<Cx<T>>>> {
    let base = base_primes_for(x_max)?;
    let segments = segment_bounds(x_max, opts.segment_len);
    let nf = fs.len();
    struct SegOut {
        totals: Vec<i128>,
        cuts: Vec<(usize, Vec<i128>)>,
    }
    let outs: Vec<SegOut> = segments
        .par_iter()
        .map(|&(lo, hi)| {
            let vals = eval_block_int(fs, lo, hi, &base);
            let mut acc = vec![0i128; nf];
            let mut cuts = Vec::new();
            let mut next_cut = xs.partition_point(|&x| x < lo);
            for idx in 0..(hi - lo) as usize {
                let n = lo + idx as u64;
                for fi in 0..nf {
                    acc[fi] += vals[fi][idx] as i128;
                }
                while next_cut < xs.len() && xs[next_cut] == n {
                    cuts.push((next_cut, acc.clone()));
                    next_cut += 1;
                }
            }
            SegOut {
                totals: acc,
                cuts,
            }
        })
        .collect();
    let mut result = vec![vec![Cx::new(T::zero(), T::zero()); xs.len()]; nf];
    let totals_by_fn: Vec<Vec<i128>> = (0..nf)
        .map(|fi| outs.iter().map(|o| o.totals[fi]).collect())
        .collect();
    for (si, out) in outs.iter().enumerate() {
        for (cut_idx, snapshot) in &out.cuts {
            for fi in 0..nf {
                let v = tree_reduce_i128(&totals_by_fn[fi][..si]) + snapshot[fi];
                result[fi][*cut_idx] = Cx::new(T::of(v as f64), T::zero());
            }
        }
    }
    Ok(result)
}

/// `M(x; f) = Σ_{n ≤ x} f(n)`.
pub fn summatory<T: Real>(f: &MultFn<T>, x: u64, opts: &SumOptions) -> Result<Cx<T>> {
    Ok(summatory_multi(&[f], &[x], opts)?[0][0])
}

/// Prefix sums on a grid, as comparison rows (no expansion attached).
pub fn summatory_grid<T: Real>(
    f: &MultFn<T>,
    xs: &[u64],
    opts: &SumOptions,
) -> Result<Vec<SummationResult<T>>> {
    let started = Instant::now();
    let values = summatory_multi(&[f], xs, opts)?;
    let seconds = started.elapsed().as_secs_f64();
    let zero = Cx::new(T::zero(), T::zero());
    Ok(xs
        .iter()
        .zip(&values[0])
        .map(|(&x, &exact)| SummationResult {
            x,
            exact,
            expansion: zero,
            remainder: exact,
            seconds,
        })
        .collect())
}

/// `Σ_{n ≤ x} g(n) (log n)^j`, divided by n when `harmonic` is set.
pub fn weighted_sum<T: Real>(
    g: &MultFn<T>,
    x: u64,
    j: u32,
    harmonic: bool,
    opts: &SumOptions,
) -> Result<Cx<T>> {
    if j > 16 {
        return Err(Error::Usage(format!("log power j must be <= 16, got {j}")));
    }
    let x_max = validate_grid(&[x], opts.cap)?;
    let base = base_primes_for(x_max)?;
    let segments = segment_bounds(x_max, opts.segment_len);
    let parts: Vec<Cx<T>> = segments
        .par_iter()
        .map(|&(lo, hi)| {
            let block = eval_block(&[g], lo, hi, &base, false);
            let mut acc = Kahan::new(opts.kahan);
            for idx in 0..(hi - lo) as usize {
                let n = lo + idx as u64;
                let mut v = block.vals[0][idx];
                if j > 0 {
                    let ln = T::ln_u64(n);
                    let mut w = T::one();
                    for _ in 0..j {
                        w = w * ln;
                    }
                    v = v * w;
                }
                if harmonic {
                    v = v / T::of(n as f64);
                }
                acc.add(v);
            }
            acc.value()
        })
        .collect();
    Ok(tree_reduce(&parts))
}

/// `Σ_{n ≤ x, ω(n) = k} g(n) (log n)^j`, with ω the number of distinct
/// prime factors (`ω(1) = 0`).
pub fn omega_restricted_sum<T: Real>(
    g: &MultFn<T>,
    x: u64,
    k: u32,
    j: u32,
    opts: &SumOptions,
) -> Result<Cx<T>> {
    if j > 16 {
        return Err(Error::Usage(format!("log power j must be <= 16, got {j}")));
    }
    let x_max = validate_grid(&[x], opts.cap)?;
    let base = base_primes_for(x_max)?;
    let segments = segment_bounds(x_max, opts.segment_len);
    let parts: Vec<Cx<T>> = segments
        .par_iter()
        .map(|&(lo, hi)| {
            let block = eval_block(&[g], lo, hi, &base, true);
            let omega = block.omega.as_ref().unwrap();
            let mut acc = Kahan::new(opts.kahan);
            for idx in 0..(hi - lo) as usize {
                if omega[idx] as u32 != k {
                    continue;
                }
                let n = lo + idx as u64;
                let mut v = block.vals[0][idx];
                if j > 0 {
                    let ln = T::ln_u64(n);
                    let mut w = T::one();
                    for _ in 0..j {
                        w = w * ln;
                    }
                    v = v * w;
                }
                acc.add(v);
            }
            acc.value()
        })
        .collect();
    Ok(tree_reduce(&parts))
}

// ---------------------------------------------------------------------------
// Friable summation
// ---------------------------------------------------------------------------

fn checkpoint_level(q: u64) -> u32 {
    // smallest l with q <= 2^l
    64 - (q - 1).leading_zeros()
}

/// Friable summation of a black-box term function: enumerates y-friable
/// integers in increasing order (heap over prime-power compositions),
/// accumulating `Σ terms(n)`. The trace reports, at each power-of-two
/// cutoff `y' ≤ y`, the partial sum over the enumerated n with
/// `P⁺(n) ≤ y'`. Stops after `budget` enumerated integers and flags the
/// trace as truncated.
pub fn friable_sum<T: Real>(
    terms: impl Fn(u64) -> Cx<T>,
    y: u64,
    budget: u64,
) -> Result<FriableTrace<T>> {
    if y < 2 {
        return Err(Error::Usage(format!("friable cutoff must be >= 2, got {y}")));
    }
    let limits = SieveLimits::default();
    let table = sieve_primes(y, &limits)?;
    let primes = table.primes();
    let levels = checkpoint_level(y) as usize;
    let zero = Cx::new(T::zero(), T::zero());
    // bucket[l] accumulates terms of integers whose largest prime sits in
    // (2^{l-1}, 2^l]; bucket[0] holds n = 1.
    let mut buckets = vec![Kahan::<T>::new(true); levels + 1];

    // Min-heap of (n, base, j) with n = base * primes[j] and the largest
    // prime factor of n equal to primes[j]. Popping n pushes its two
    // canonical successors — deepen (n * primes[j]) and next sibling
    // (base * primes[j+1]) — so each friable integer appears exactly once
    // and the heap stays proportional to the output count.
    let mut heap: BinaryHeap<std::cmp::Reverse<(u64, u64, usize)>> = BinaryHeap::new();
    let mut used = 0u64;
    let mut truncated = false;
    buckets[0].add(terms(1));
    used += 1;
    heap.push(std::cmp::Reverse((2, 1, 0)));
    while let Some(std::cmp::Reverse((n, base, j))) = heap.pop() {
        if used >= budget {
            truncated = true;
            break;
        }
        used += 1;
        let level = checkpoint_level(primes[j]) as usize;
        buckets[level.min(levels)].add(terms(n));
        let p = primes[j];
        if n <= u64::MAX / p {
            heap.push(std::cmp::Reverse((n * p, n, j)));
        }
        if j + 1 < primes.len() {
            let q = primes[j + 1];
            if base <= u64::MAX / q {
                heap.push(std::cmp::Reverse((base * q, base, j + 1)));
            }
        }
    }

    // Prefix the buckets into the trace.
    let mut points = Vec::new();
    let mut running = zero;
    running += buckets[0].value();
    for l in 1..=levels {
        running += buckets[l].value();
        let cutoff = (1u64 << l).min(y);
        points.push((cutoff, running));
    }
    // Deduplicate the tail in case y is not a power of two.
    points.dedup_by_key(|&mut (c, _)| c);
    Ok(FriableTrace {
        points,
        target: None,
        truncated,
        terms_used: used,
    })
}

/// Friable summation of a multiplicative term family through its local
/// values: computes `Π_{p ≤ y} (1 + Σ_{ν ≥ 1} terms(p, ν))` with the local
/// series summed to machine tail. This equals the (infinite) friable sum
/// `Σ_{P⁺(n) ≤ y} t(n)` whenever the terms are multiplicative in the
/// coprime sense and locally absolutely summable — the situation of every
/// showcase here; black-box enumeration cannot reach those limits.
/// The trace carries partial products at power-of-two cutoffs.
pub fn friable_sum_multiplicative<T: Real>(
    local_terms: impl Fn(u64, u32) -> Cx<T>,
    y: u64,
) -> Result<FriableTrace<T>> {
    if y < 2 {
        return Err(Error::Usage(format!("friable cutoff must be >= 2, got {y}")));
    }
    let one = Cx::new(T::one(), T::zero());
    let mut product = one;
    let mut points: Vec<(u64, Cx<T>)> = Vec::new();
    let mut next_level = 1u32;
    let mut terms_used = 0u64;
    let limits = SieveLimits::default();
    stream_primes_in(1, y, &limits, |p| {
        while (1u64 << next_level) < p {
            points.push(((1u64 << next_level).min(y), product));
            next_level += 1;
        }
        let mut local = one;
        let mut nu = 1u32;
        loop {
            let t = local_terms(p, nu);
            terms_used += 1;
            local += t;
            let tn = t.norm();
            if tn < T::of(1e-18) * local.norm().max(T::one()) || nu >= 64 {
                break;
            }
            nu += 1;
        }
        product = product * local;
        true
    })?;
    while (1u64 << next_level) < y {
        points.push((1u64 << next_level, product));
        next_level += 1;
    }
    points.push((y, product));
    points.dedup_by_key(|&mut (c, _)| c);
    Ok(FriableTrace {
        points,
        target: None,
        truncated: false,
        terms_used,
    })
}

// ---------------------------------------------------------------------------
// Hypothesis residuals
// ---------------------------------------------------------------------------

/// Window width for the short-interval residual.
#[derive(Clone, Copy, Debug)]
pub enum WindowSpec {
    /// z = fraction · x
    Fraction(f64),
    /// z = x^{1-alpha}
    PowerLaw(f64),
}

impl WindowSpec {
    fn z(&self, x: u64) -> f64 {
        match *self {
            WindowSpec::Fraction(f) => f * x as f64,
            WindowSpec::PowerLaw(alpha) => (x as f64).powf(1.0 - alpha),
        }
    }
}

/// Residual row at one grid point.
#[derive(Clone, Copy, Debug)]
pub struct HypothesisRow<T: Real> {
    pub x: u64,
    /// Σ_{p ≤ x} (f(p) - ϱ) log p
    pub r1: Cx<T>,
    /// r1 · (log x)^A / x
    pub r1_normalized: Cx<T>,
    /// Σ_{x < p ≤ x+z} f(p) log p − ϱ z
    pub r2: Cx<T>,
    /// r2 · (log x)^A / z
    pub r2_normalized: Cx<T>,
    pub z: f64,
    /// Σ_{p ≤ x} |f(p)|/p
    pub abs_over_p: T,
    /// abs_over_p − r log log x
    pub slow_growth_residual: T,
}

#[derive(Clone, Debug)]
pub struct HypothesisReport<T: Real> {
    pub rows: Vec<HypothesisRow<T>>,
}

/// Prime-side residuals of the three standing hypotheses: the full sum
/// `Σ_{p≤x} (f(p)-ϱ) log p` normalized by `x/(log x)^A`, its short-interval
/// counterpart over `(x, x+z]` normalized by `z/(log x)^A`, and the running
/// `Σ |f(p)|/p − r log log x`.
pub fn hypothesis_residuals<T: Real>(
    f: &MultFn<T>,
    rho: Cx<T>,
    a: T,
    r: T,
    xs: &[u64],
    window: WindowSpec,
    opts: &SumOptions,
) -> Result<HypothesisReport<T>> {
    let x_max = validate_grid(xs, opts.cap)?;
    let limits = SieveLimits {
        stream_cap: opts.cap.saturating_mul(2),
        ..Default::default()
    };
    let mut rows: Vec<HypothesisRow<T>> = Vec::with_capacity(xs.len());
    let mut running_r1 = Cx::new(T::zero(), T::zero());
    let mut running_abs = T::zero();
    let mut cut = 0usize;
    stream_primes_in(1, x_max, &limits, |p| {
        while cut < xs.len() && xs[cut] < p {
            rows.push(partial_row(xs[cut], running_r1, running_abs, a, r));
            cut += 1;
        }
        let fp = f.local(p, 1);
        let lp = T::ln_u64(p);
        running_r1 += (fp - rho) * lp;
        running_abs += fp.norm() / T::of(p as f64);
        true
    })?;
    while cut < xs.len() {
        rows.push(partial_row(xs[cut], running_r1, running_abs, a, r));
        cut += 1;
    }
    // Short-interval residuals, one window per grid point.
    for row in rows.iter_mut() {
        let x = row.x;
        let z = window.z(x);
        let hi = (x as f64 + z).floor() as u64;
        let mut sum = Cx::new(T::zero(), T::zero());
        stream_primes_in(x, hi, &limits, |p| {
            sum += f.local(p, 1) * T::ln_u64(p);
            true
        })?;
        let r2 = sum - rho * T::of(z);
        let lnx_a = T::ln_u64(x).powf(a);
        row.z = z;
        row.r2 = r2;
        row.r2_normalized = r2 * (lnx_a / T::of(z));
    }
    Ok(HypothesisReport { rows })
}

fn partial_row<T: Real>(x: u64, r1: Cx<T>, abs_over_p: T, a: T, r: T) -> HypothesisRow<T> {
    let lnx = T::ln_u64(x);
    let lnx_a = lnx.powf(a);
    HypothesisRow {
        x,
        r1,
        r1_normalized: r1 * (lnx_a / T::of(x as f64)),
        r2: Cx::new(T::zero(), T::zero()),
        r2_normalized: Cx::new(T::zero(), T::zero()),
        z: 0.0,
        abs_over_p,
        slow_growth_residual: abs_over_p - r * lnx.ln(),
    }
}
