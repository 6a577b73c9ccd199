//! Expansion coefficients of the mean-value asymptotic
//! `M(x; f) ≈ x (log x)^{ϱ-1} Σ_j λ_j(f)/(log x)^j`.
//!
//! Four coefficient families are produced:
//! * `α_ℓ(ϱ)/ℓ!` — Taylor coefficients of `{s ζ(s+1)}^ϱ/(s+1)` at 0;
//! * `ν_h = (α_h(ϱ)/h!) / Γ(ϱ-h)` — the main-term coefficients of the
//!   summatory function of τ_ϱ;
//! * `γ_j(g)` — friable limits of `Σ g(n)(log n)^j/n`;
//! * `λ_j(f)` — the assembled coefficients, computed both through the
//!   series route and through numerical differentiation of
//!   `s^ϱ F(s+1)/(s+1)` as an independent cross-check.

use crate::error::{Error, Result};
use crate::multfun::MultFn;
use crate::primes::{sieve_primes, stream_primes_in, SieveLimits};
use crate::report::{complex_pair, CoefficientReport, GammaGReport};
use crate::scalar::{Cx, Real};
use crate::series::{
    factorial_f64, recip_gamma, zeta_em, zeta_shift_series, TruncatedSeries, STIELTJES_MAX,
};

/// `α_ℓ(ϱ)/ℓ!` for `ℓ = 0..=l_max`: the Taylor coefficients at the origin
/// of `{s ζ(s+1)}^ϱ / (1+s)`.
pub fn alpha_coeffs<T: Real>(rho: Cx<T>, l_max: usize) -> Result<Vec<Cx<T>>> {
    if l_max > STIELTJES_MAX {
        return Err(Error::Unsupported(format!(
            "alpha coefficients supported to order {STIELTJES_MAX}, requested {l_max}"
        )));
    }
    let base = zeta_shift_series::<T>(l_max)?;
    let powered = base.powc(rho)?;
    let geom = TruncatedSeries::geometric_alternating(l_max);
    Ok(powered.mul(&geom).coeffs().to_vec())
}

/// `ν_h = (α_h(ϱ)/h!) / Γ(ϱ-h)`; exactly zero where 1/Γ hits a pole, so
/// integer ϱ = k kills every ν_h with h ≥ k.
pub fn nu_coeffs<T: Real>(rho: Cx<T>, h_max: usize) -> Result<Vec<Cx<T>>> {
    let alpha = alpha_coeffs(rho, h_max)?;
    Ok(alpha
        .iter()
        .enumerate()
        .map(|(h, &a)| a * recip_gamma(rho - T::of(h as f64)))
        .collect())
}

/// Main term `x (log x)^{ϱ-1} Σ_{h ≤ H} ν_h/(log x)^h` of the summatory
/// function of τ_ϱ.
pub fn t_rho_main_term<T: Real>(rho: Cx<T>, x: f64, h_max: usize) -> Result<Cx<T>> {
    if x < 3.0 {
        return Err(Error::Usage(format!("main term needs x >= 3, got {x}")));
    }
    let nu = nu_coeffs(rho, h_max)?;
    let ln_x = T::of(x.ln());
    let mut sum = Cx::new(T::zero(), T::zero());
    let mut scale = Cx::new(T::one(), T::zero());
    for coeff in nu {
        sum += coeff * scale;
        scale = scale / ln_x;
    }
    let one = Cx::new(T::one(), T::zero());
    let log_power = ((rho - one) * ln_x.ln()).exp();
    Ok(sum * log_power * T::of(x))
}

// ---------------------------------------------------------------------------
// Friable enumeration of weighted g-sums
// ---------------------------------------------------------------------------

/// Largest supported weight stride (log powers 0..=16).
const MAX_STRIDE: usize = 17;

struct FriableEngine<T: Real> {
    /// Flattened per-prime extension factors g(p^nu) p^{-nu(1+shift)},
    /// nu = 1..=cap, laid out contiguously; offsets[i]..offsets[i+1] is the
    /// slice of prime i.
    factors: Vec<Cx<T>>,
    offsets: Vec<u32>,
    ln_p: Vec<T>,
    /// Absolute mass of each prime's factor slice.
    mass: Vec<f64>,
    /// prefix_mass[i] = total mass of primes with index < i (the subtree
    /// extension budget of a node whose smallest prime has index i).
    prefix_mass: Vec<f64>,
    /// suffix_second[i] = Σ_{i' >= i} mass[i'] prefix_mass[i']: the
    /// second-order (grandchild) mass of the scan range [i, ..).
    suffix_second: Vec<f64>,
    /// Upper bound for the multiplicative gain of any subtree, clamped:
    /// for divergent local mass the exact bound grows exponentially and
    /// would force meaninglessly deep thresholds.
    gain_cap: f64,
    nodes: u64,
    node_budget: u64,
    pruned_bound: f64,
    /// Weighted local moments Σ_nu factor_nu (nu log p)^t, t <= j_max,
    /// with prefix sums over primes; rebuilt per run.
    moments: Vec<Cx<T>>,
    prefix_moments: Vec<Cx<T>>,
    j_stride: usize,
}

enum DfsAbort {
    BudgetHit,
}

impl<T: Real> FriableEngine<T> {
    fn new(g: &MultFn<T>, primes: &[u64], shift: T) -> Self {
        let sigma = T::one() + shift;
        let mut factors = Vec::new();
        let mut offsets = Vec::with_capacity(primes.len() + 1);
        let mut ln_p = Vec::with_capacity(primes.len());
        let mut mass = Vec::with_capacity(primes.len());
        offsets.push(0u32);
        let mut log_gain = 0.0f64;
        for &p in primes {
            let lp = T::ln_u64(p);
            ln_p.push(lp);
            let base = (-(sigma * lp)).exp();
            let mut scale = base;
            let mut m = 0.0f64;
            let mut consecutive_tiny = 0;
            for nu in 1..=64u32 {
                let t = g.local(p, nu) * scale;
                let tn = t.norm().to_f64().unwrap_or(0.0);
                if tn < 1e-19 * (1.0 + m) && nu >= 3 {
                    consecutive_tiny += 1;
                    if consecutive_tiny >= 2 {
                        break;
                    }
                } else {
                    consecutive_tiny = 0;
                }
                factors.push(t);
                m += tn;
                scale = scale * base;
            }
            offsets.push(factors.len() as u32);
            mass.push(m);
            log_gain += (1.0 + m).ln();
        }
        let mut prefix_mass = vec![0.0f64; primes.len() + 1];
        for i in 0..primes.len() {
            prefix_mass[i + 1] = prefix_mass[i] + mass[i];
        }
        let mut suffix_second = vec![0.0f64; primes.len() + 1];
        for i in (0..primes.len()).rev() {
            suffix_second[i] = suffix_second[i + 1] + mass[i] * prefix_mass[i];
        }
        FriableEngine {
            factors,
            offsets,
            ln_p,
            mass,
            prefix_mass,
            suffix_second,
            gain_cap: log_gain.exp().min(10.0),
            nodes: 0,
            node_budget: 200_000_000,
            pruned_bound: 0.0,
            moments: Vec::new(),
            prefix_moments: Vec::new(),
            j_stride: 0,
        }
    }

    fn build_moments(&mut self, j_max: usize) {
        let stride = j_max + 1;
        let n = self.mass.len();
        let zero = Cx::new(T::zero(), T::zero());
        self.moments = vec![zero; n * stride];
        self.prefix_moments = vec![zero; (n + 1) * stride];
        for i in 0..n {
            let (lo, hi) = (self.offsets[i] as usize, self.offsets[i + 1] as usize);
            let lp = self.ln_p[i];
            for nu in 1..=(hi - lo) {
                let f = self.factors[lo + nu - 1];
                let w = lp * T::of(nu as f64);
                let mut pw = T::one();
                for t in 0..stride {
                    self.moments[i * stride + t] += f * pw;
                    pw = pw * w;
                }
            }
            for t in 0..stride {
                self.prefix_moments[(i + 1) * stride + t] =
                    self.prefix_moments[i * stride + t] + self.moments[i * stride + t];
            }
        }
        self.j_stride = stride;
    }

    /// One full enumeration at the given pruning threshold. Subtrees too
    /// small to matter are closed with their exact first-order moments, so
    /// only second-order (grandchild) mass is dropped.
    fn run(
        &mut self,
        j_max: usize,
        prune_eps: f64,
    ) -> std::result::Result<Vec<Cx<T>>, DfsAbort> {
        if self.j_stride != j_max + 1 {
            self.build_moments(j_max);
        }
        self.nodes = 0;
        self.pruned_bound = 0.0;
        let zero = Cx::new(T::zero(), T::zero());
        let mut acc = vec![zero; j_max + 1];
        let one = Cx::new(T::one(), T::zero());
        let upper = self.mass.len();
        self.dfs(upper, one, T::zero(), j_max, prune_eps, &mut acc)?;
        Ok(acc)
    }

    /// acc[t] += val Σ binom(t,u) ln_n^{t-u} moment_u, the exact sum of the
    /// child terms `val · factor · (ln_n + nu log p)^t` for a moment vector.
    fn complete(val: Cx<T>, ln_n: T, moments: &[Cx<T>], acc: &mut [Cx<T>]) {
        let stride = acc.len();
        debug_assert!(stride <= MAX_STRIDE);
        let mut ln_pows = [T::zero(); MAX_STRIDE];
        let mut lp = T::one();
        for slot in ln_pows.iter_mut().take(stride) {
            *slot = lp;
            lp = lp * ln_n;
        }
        for (t, slot) in acc.iter_mut().enumerate() {
            let mut binom = 1.0f64;
            let mut sum = Cx::new(T::zero(), T::zero());
            for u in 0..=t {
                sum += moments[u] * (ln_pows[t - u] * T::of(binom));
                binom = binom * (t - u) as f64 / (u + 1) as f64;
            }
            *slot += val * sum;
        }
    }

    fn dfs(
        &mut self,
        idx_upper: usize,
        val: Cx<T>,
        ln_n: T,
        j_max: usize,
        prune_eps: f64,
        acc: &mut [Cx<T>],
    ) -> std::result::Result<(), DfsAbort> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(DfsAbort::BudgetHit);
        }
        // Contribute the integer assembled so far: acc[t] += val (log n)^t.
        let mut w = val;
        acc[0] += w;
        for a in acc.iter_mut().take(j_max + 1).skip(1) {
            w = w * ln_n;
            *a += w;
        }
        let val_norm = val.norm().to_f64().unwrap_or(0.0);
        let stride = self.j_stride;
        // Extensions use primes of index strictly below the current one
        // (paths list primes in decreasing order); the scan runs ascending
        // so the heavy small-prime branches come first.
        for j in 0..idx_upper {
            // The rest of the range only matters at second order: close it
            // with its exact first-order moments and stop scanning.
            if val_norm * self.suffix_second[j] * self.gain_cap < prune_eps {
                let mut range = [Cx::new(T::zero(), T::zero()); MAX_STRIDE];
                for t in 0..stride {
                    range[t] = self.prefix_moments[idx_upper * stride + t]
                        - self.prefix_moments[j * stride + t];
                }
                Self::complete(val, ln_n, &range[..stride], acc);
                self.pruned_bound += val_norm * self.suffix_second[j] * self.gain_cap;
                break;
            }
            // This prime alone has a negligible subtree: close it exactly
            // at first order.
            if val_norm * self.mass[j] * self.prefix_mass[j] * self.gain_cap < prune_eps {
                let (lo, hi) = (j * stride, (j + 1) * stride);
                let m: [Cx<T>; MAX_STRIDE] = {
                    let mut buf = [Cx::new(T::zero(), T::zero()); MAX_STRIDE];
                    buf[..stride].copy_from_slice(&self.moments[lo..hi]);
                    buf
                };
                Self::complete(val, ln_n, &m[..stride], acc);
                self.pruned_bound +=
                    val_norm * self.mass[j] * self.prefix_mass[j] * self.gain_cap;
                continue;
            }
            let lp = self.ln_p[j];
            let (lo, hi) = (self.offsets[j] as usize, self.offsets[j + 1] as usize);
            for nu in 1..=(hi - lo) {
                let child = val * self.factors[lo + nu - 1];
                let ln_child = ln_n + lp * T::of(nu as f64);
                let child_norm = child.norm().to_f64().unwrap_or(0.0);
                if child_norm * self.prefix_mass[j] * self.gain_cap < prune_eps {
                    // Contribute the child itself; its own subtree is below
                    // the threshold.
                    let mut wc = child;
                    acc[0] += wc;
                    for a in acc.iter_mut().take(j_max + 1).skip(1) {
                        wc = wc * ln_child;
                        *a += wc;
                    }
                    self.pruned_bound += child_norm * self.prefix_mass[j] * self.gain_cap;
                } else {
                    self.dfs(j, child, ln_child, j_max, prune_eps, acc)?;
                }
            }
        }
        Ok(())
    }
}

/// Pruning thresholds are relaxed a thousandfold and the enumeration
/// restarted whenever the node budget trips, so slowly-decaying functions
/// still produce (coarser) values instead of running away combinatorially.
const PRUNE_EPS_MAX: f64 = 1e-2;

/// Weighted friable sums `Σ_{P⁺(n)≤y} g(n)(log n)^j / n^{1+shift}` for all
/// `j ≤ j_max`, by depth-first enumeration over primes in decreasing order
/// with magnitude pruning.
pub fn friable_weighted_sums<T: Real>(
    g: &MultFn<T>,
    y: u64,
    j_max: usize,
    shift: T,
    prune_eps: f64,
) -> Result<Vec<Cx<T>>> {
    let mut eps = prune_eps;
    friable_weighted_sums_with_eps(g, y, j_max, shift, &mut eps)
}

/// As [`friable_weighted_sums`], but the pruning threshold is carried in a
/// mutable slot: when the node budget forces a coarser enumeration, the
/// escalated threshold is written back, so a sequence of calls (the
/// adaptive cutoff ladder) settles on one resolution instead of re-paying
/// the abort at every cutoff.
pub fn friable_weighted_sums_with_eps<T: Real>(
    g: &MultFn<T>,
    y: u64,
    j_max: usize,
    shift: T,
    eps: &mut f64,
) -> Result<Vec<Cx<T>>> {
    let limits = SieveLimits {
        prime_table_cap: 100_000_000,
        ..Default::default()
    };
    let table = sieve_primes(y.max(2), &limits)?;
    let mut engine = FriableEngine::new(g, table.primes(), shift);
    loop {
        match engine.run(j_max, *eps) {
            Ok(values) => {
                if std::env::var("MULTSUM_DEBUG_FRIABLE").is_ok() {
                    eprintln!(
                        "friable eval: y={y}, eps={:.1e}, nodes={}, pruned={:.2e}",
                        *eps, engine.nodes, engine.pruned_bound
                    );
                }
                return Ok(values);
            }
            Err(DfsAbort::BudgetHit) => {
                if *eps >= PRUNE_EPS_MAX {
                    return Err(Error::Resource {
                        what: "friable enumeration nodes",
                        requested: engine.nodes,
                        budget: engine.node_budget,
                    });
                }
                *eps = (*eps * 1e6).min(PRUNE_EPS_MAX);
            }
        }
    }
}


// ---------------------------------------------------------------------------
// γ_j(g)
// ---------------------------------------------------------------------------

/// Friable-cutoff policy for γ_j estimation.
#[derive(Clone, Copy, Debug)]
pub enum FriableCutoff {
    Fixed(u64),
    Adaptive {
        y_start: u64,
        y_max: u64,
        rel_tol: f64,
    },
}

impl Default for FriableCutoff {
    fn default() -> Self {
        FriableCutoff::Adaptive {
            y_start: 1_000,
            y_max: 10_000_000,
            rel_tol: 1e-8,
        }
    }
}

/// One γ_j estimate: the cutoff it was taken at, the value, an empirical
/// error estimate (the last doubling change), and the recorded
/// (cutoff, |change|) convergence trace.
#[derive(Clone, Debug)]
pub struct GammaGEstimate<T: Real> {
    pub j: usize,
    pub y: u64,
    pub value: Cx<T>,
    pub error_estimate: f64,
    pub trace: Vec<(u64, f64)>,
}

const GAMMA_PRUNE_EPS: f64 = 2.5e-17;

/// Friable estimates of `γ_j(g) = Σ_{P⁺(n)≤y} g(n)(log n)^j/n`, `j ≤ j_max`.
///
/// In adaptive mode the cutoff doubles until the relative change drops
/// below tolerance or the cutoff budget is reached; if the absolute changes
/// fail to decrease across three consecutive doublings the series is
/// reported divergent, carrying the trace.
pub fn gamma_j_of_g<T: Real>(
    g: &MultFn<T>,
    j_max: usize,
    cutoff: FriableCutoff,
) -> Result<Vec<GammaGEstimate<T>>> {
    match cutoff {
        FriableCutoff::Fixed(y) => {
            let mut eps = GAMMA_PRUNE_EPS;
            let prev =
                friable_weighted_sums_with_eps(g, (y / 2).max(2), j_max, T::zero(), &mut eps)?;
            let vals = friable_weighted_sums_with_eps(g, y, j_max, T::zero(), &mut eps)?;
            Ok(vals
                .into_iter()
                .enumerate()
                .map(|(j, value)| {
                    let delta = (value - prev[j]).norm().to_f64().unwrap_or(f64::NAN);
                    GammaGEstimate {
                        j,
                        y,
                        value,
                        error_estimate: delta,
                        trace: vec![(y, delta)],
                    }
                })
                .collect())
        }
        FriableCutoff::Adaptive {
            y_start,
            y_max,
            rel_tol,
        } => {
            // Cheap screening pass: a coarse enumeration already reveals a
            // divergent ladder (systematically growing changes), before any
            // expensive fine-threshold work starts.
            {
                let mut eps_screen = 1e-2f64;
                let mut y = y_start.max(2);
                let mut prev =
                    friable_weighted_sums_with_eps(g, y, j_max, T::zero(), &mut eps_screen)?;
                let mut deltas: Vec<(u64, f64)> = Vec::new();
                for _ in 0..5 {
                    if y >= y_max {
                        break;
                    }
                    y = (y * 2).min(y_max);
                    let next =
                        friable_weighted_sums_with_eps(g, y, j_max, T::zero(), &mut eps_screen)?;
                    let delta: f64 = next
                        .iter()
                        .zip(&prev)
                        .map(|(a, b)| (*a - *b).norm().to_f64().unwrap_or(f64::NAN))
                        .fold(0.0, f64::max);
                    deltas.push((y, delta));
                    prev = next;
                }
                let scale: f64 = prev
                    .iter()
                    .map(|v| v.norm().to_f64().unwrap_or(0.0))
                    .fold(1.0, f64::max);
                let n = deltas.len();
                if std::env::var("MULTSUM_DEBUG_FRIABLE").is_ok() {
                    eprintln!("screening deltas: {deltas:?}, scale {scale:.3e}");
                }
                if n >= 4 {
                    // Trend of the ladder tail: convergent series keep
                    // shrinking, divergent ones turn upward once the block
                    // structure dominates the coarse truncation noise.
                    let grows = deltas[n - 1].1 > 1.2 * deltas[n - 3].1
                        && deltas[n - 1].1 > 1.05 * deltas[n - 2].1;
                    if grows && deltas[n - 1].1 > 0.02 * scale {
                        return Err(Error::Divergence {
                            context: format!(
                                "friable sums of {} grow across consecutive cutoff doublings",
                                g.label()
                            ),
                            trace: deltas,
                        });
                    }
                }
            }
            let mut y = y_start.max(2);
            let mut eps = GAMMA_PRUNE_EPS;
            let mut vals = friable_weighted_sums_with_eps(g, y, j_max, T::zero(), &mut eps)?;
            let mut trace: Vec<(u64, f64)> = Vec::new();
            let mut deltas: Vec<f64> = Vec::new();
            loop {
                if y >= y_max {
                    break;
                }
                let y_next = (y * 2).min(y_max);
                let next = friable_weighted_sums_with_eps(g, y_next, j_max, T::zero(), &mut eps)?;
                let scale: f64 = next
                    .iter()
                    .map(|v| v.norm().to_f64().unwrap_or(0.0))
                    .fold(1.0, f64::max);
                let delta: f64 = next
                    .iter()
                    .zip(&vals)
                    .map(|(a, b)| (*a - *b).norm().to_f64().unwrap_or(f64::NAN))
                    .fold(0.0, f64::max);
                trace.push((y_next, delta));
                deltas.push(delta);
                vals = next;
                y = y_next;
                if delta <= rel_tol * scale {
                    break;
                }
                // Divergence: three consecutive non-decreasing changes well
                // above the noise floor.
                let n = deltas.len();
                if n >= 4
                    && deltas[n - 1] >= deltas[n - 2]
                    && deltas[n - 2] >= deltas[n - 3]
                    && deltas[n - 3] >= deltas[n - 4]
                    && deltas[n - 1] > 1e-10 * scale.max(1.0)
                {
                    return Err(Error::Divergence {
                        context: format!(
                            "friable sums of {} show non-decreasing changes over three doublings",
                            g.label()
                        ),
                        trace,
                    });
                }
            }
            let last_delta = deltas.last().copied().unwrap_or(0.0);
            Ok(vals
                .into_iter()
                .enumerate()
                .map(|(j, value)| GammaGEstimate {
                    j,
                    y,
                    value,
                    error_estimate: last_delta,
                    trace: trace.clone(),
                })
                .collect())
        }
    }
}

// ---------------------------------------------------------------------------
// λ_j(f)
// ---------------------------------------------------------------------------

/// Assemble `λ_j = (1/Γ(ϱ-j)) Σ_{ℓ+h=j} (α_ℓ/ℓ!)(γ_h/h!)` from
/// precomputed parts. `alpha` entries are already divided by ℓ!.
pub fn lambda_from_parts<T: Real>(
    rho: Cx<T>,
    alpha: &[Cx<T>],
    gamma: &[Cx<T>],
    j_max: usize,
) -> Vec<Cx<T>> {
    (0..=j_max)
        .map(|j| {
            let mut s = Cx::new(T::zero(), T::zero());
            for h in 0..=j {
                let l = j - h;
                s += alpha[l] * gamma[h] / T::of(factorial_f64(h));
            }
            s * recip_gamma(rho - T::of(j as f64))
        })
        .collect()
}

/// λ_j(f) through the series route: decompose `f = τ_ϱ * g`, sum the
/// friable γ_j(g), and assemble with the α coefficients.
pub fn lambda_coeffs<T: Real>(
    f: &MultFn<T>,
    rho: Cx<T>,
    j_max: usize,
    cutoff: FriableCutoff,
) -> Result<Vec<Cx<T>>> {
    let g = f.decompose_g(rho);
    let gammas = gamma_j_of_g(&g, j_max, cutoff)?;
    let alpha = alpha_coeffs(rho, j_max)?;
    let gamma_vals: Vec<Cx<T>> = gammas.iter().map(|e| e.value).collect();
    Ok(lambda_from_parts(rho, &alpha, &gamma_vals, j_max))
}

/// λ_j(f) through the derivative route: evaluate
/// `Ψ(s) = {s ζ(s+1)}^ϱ/(1+s) · G(1+s)` at a geometric ladder of small
/// real s, interpolate, and read the Taylor coefficients at 0+; then
/// `λ_j = coeff_j / Γ(ϱ-j)`. Fails with a numerical-instability error when
/// shrinking the ladder stops improving the extracted coefficients.
pub fn lambda_via_derivative<T: Real>(
    f: &MultFn<T>,
    rho: Cx<T>,
    j_max: usize,
    y: u64,
) -> Result<Vec<Cx<T>>> {
    let g = f.decompose_g(rho);
    let s0 = 0.05f64;
    let levels = 6usize; // nodes s0 * 2^{-i}, i = 0..=levels
    let mut nodes = Vec::with_capacity(levels + 1);
    let mut values = Vec::with_capacity(levels + 1);
    // One shared pruning threshold for every node of the ladder: the
    // extraction differences magnify any truncation *inconsistency* between
    // nodes far more than a uniform truncation bias.
    let mut eps = DERIVATIVE_PRUNE_EPS;
    for i in 0..=levels {
        let s = s0 * 0.5f64.powi(i as i32);
        nodes.push(s);
        values.push(psi_value(&g, rho, s, y, &mut eps)?);
    }
    let full = taylor_from_samples::<T>(&nodes, &values, j_max);
    let drop1 = taylor_from_samples::<T>(&nodes[..levels], &values[..levels], j_max);
    let drop2 = taylor_from_samples::<T>(&nodes[..levels - 1], &values[..levels - 1], j_max);
    // Residual check: the refinement with the full ladder must not be worse
    // than the one-coarser ladder.
    for j in 0..=j_max {
        let r2 = (full[j] - drop1[j]).norm().to_f64().unwrap_or(f64::NAN);
        let r1 = (drop1[j] - drop2[j]).norm().to_f64().unwrap_or(f64::NAN);
        if !r2.is_finite() || (r2 > 1e-6 && r2 > 4.0 * r1.max(1e-14)) {
            return Err(Error::Numerical(format!(
                "derivative extraction of coefficient {j} not stabilizing (residuals {r1:.3e} -> {r2:.3e})"
            )));
        }
    }
    Ok((0..=j_max)
        .map(|j| full[j] * recip_gamma(rho - T::of(j as f64)))
        .collect())
}

/// Starting threshold of the derivative route; its tolerance target is
/// 1e-4..1e-5, so the enumeration never needs the fine γ depth.
const DERIVATIVE_PRUNE_EPS: f64 = 1e-13;

/// `Ψ(s) = {s ζ(1+s)}^ϱ / (1+s) · Σ_{P⁺(n)≤y} g(n)/n^{1+s}` at real s > 0.
fn psi_value<T: Real>(
    g: &MultFn<T>,
    rho: Cx<T>,
    s: f64,
    y: u64,
    eps: &mut f64,
) -> Result<Cx<T>> {
    let sz = s * zeta_em::<f64>(Cx::new(1.0 + s, 0.0), 1e-13)?.re;
    if sz <= 0.0 {
        return Err(Error::Numerical(format!("s zeta(1+s) nonpositive at s = {s}")));
    }
    let pow = (rho * T::of(sz.ln())).exp();
    let gsum = friable_weighted_sums_with_eps(g, y, 0, T::of(s), eps)?[0];
    Ok(pow * gsum / T::of(1.0 + s))
}

/// Taylor coefficients at 0 of the polynomial interpolating the samples
/// (Newton divided differences expanded to the monomial basis).
fn taylor_from_samples<T: Real>(nodes: &[f64], values: &[Cx<T>], j_max: usize) -> Vec<Cx<T>> {
    let n = nodes.len();
    let mut dd: Vec<Cx<T>> = values.to_vec();
    // Divided-difference table in place: dd[k] = f[x_0..x_k].
    for level in 1..n {
        for k in ((level..n).rev()).collect::<Vec<_>>() {
            let denom = T::of(nodes[k] - nodes[k - level]);
            dd[k] = (dd[k] - dd[k - 1]) / denom;
        }
    }
    // Expand Σ dd[k] Π_{l<k} (s - x_l) into monomials.
    let zero = Cx::new(T::zero(), T::zero());
    let mut poly = vec![zero; n];
    let mut basis = vec![zero; n];
    basis[0] = Cx::new(T::one(), T::zero());
    for k in 0..n {
        for (deg, &b) in basis.iter().enumerate().take(k + 1) {
            poly[deg] += dd[k] * b;
        }
        // basis *= (s - x_k)
        if k + 1 < n {
            let xk = T::of(nodes[k]);
            let mut next = vec![zero; n];
            for deg in 0..=k {
                next[deg + 1] += basis[deg];
                next[deg] -= basis[deg] * xk;
            }
            basis = next;
        }
    }
    poly.truncate(j_max + 1);
    poly.resize(j_max + 1, zero);
    poly
}

// ---------------------------------------------------------------------------
// Euler-product λ_0 for nonnegative f
// ---------------------------------------------------------------------------

/// `λ_0(f) = (1/Γ(r)) Π_p (1-1/p)^r Σ_ν f(p^ν) p^{-ν}`, truncated where
/// three consecutive primes contribute `|log factor| < tol/p`; no analytic
/// tail correction is added. Returns the value and the last prime used.
pub fn euler_product_lambda0<T: Real>(
    f: &MultFn<T>,
    r: T,
    tol: f64,
) -> Result<(Cx<T>, u64)> {
    const P_CAP: u64 = 100_000_000;
    let limits = SieveLimits::default();
    let mut product = Cx::new(T::one(), T::zero());
    let mut last_p = 0u64;
    let mut small_streak = 0u32;
    let mut failure: Option<Error> = None;
    stream_primes_in(1, P_CAP, &limits, |p| {
        let pf = T::of(p as f64);
        let mut local = Cx::new(T::one(), T::zero());
        let mut scale = T::one() / pf;
        for nu in 1..=64u32 {
            let term = f.local(p, nu) * scale;
            local += term;
            if term.norm() < T::of(1e-19) * local.norm().max(T::one()) {
                break;
            }
            scale = scale / pf;
        }
        let base = (T::one() - T::one() / pf).powf(r);
        let factor = local * base;
        let fr = factor.re.to_f64().unwrap_or(f64::NAN);
        let fi = factor.im.to_f64().unwrap_or(f64::NAN);
        if !fr.is_finite() || !fi.is_finite() || (fr <= 0.0 && fi.abs() < 1e-12 * fr.abs()) {
            failure = Some(Error::Domain(format!(
                "euler product local factor at p = {p} is nonpositive or non-finite ({fr}, {fi})"
            )));
            return false;
        }
        product = product * factor;
        last_p = p;
        let log_norm = factor.ln().norm().to_f64().unwrap_or(f64::NAN);
        if log_norm < tol / p as f64 {
            small_streak += 1;
            if small_streak >= 3 {
                return false;
            }
        } else {
            small_streak = 0;
        }
        true
    })?;
    if let Some(err) = failure {
        return Err(err);
    }
    let rec = recip_gamma(Cx::new(r, T::zero()));
    Ok((product * rec, last_p))
}

// ---------------------------------------------------------------------------
// Bundled report
// ---------------------------------------------------------------------------

/// The complete coefficient bundle for one function, with the truncation
/// orders that were used.
#[derive(Clone, Debug)]
pub struct ExpansionCoefficients<T: Real> {
    pub rho: Cx<T>,
    pub j_max: usize,
    pub h_max: usize,
    pub alpha: Vec<Cx<T>>,
    pub nu: Vec<Cx<T>>,
    pub gamma_g: Vec<GammaGEstimate<T>>,
    pub lambda: Vec<Cx<T>>,
}

/// Truncation orders the expansion defaults to: `J = ⌈A-1⌉`,
/// `H = ⌈A+2r⌉`, both clamped into the supported series range.
pub fn default_orders(a: f64, r: f64) -> (usize, usize) {
    let j = (a - 1.0).ceil().max(0.0) as usize;
    let h = (a + 2.0 * r).ceil().max(0.0) as usize;
    (j.min(STIELTJES_MAX), h.min(STIELTJES_MAX))
}

/// Compute every family for `f` at given orders.
pub fn expansion_coefficients<T: Real>(
    f: &MultFn<T>,
    rho: Cx<T>,
    j_max: usize,
    h_max: usize,
    cutoff: FriableCutoff,
) -> Result<ExpansionCoefficients<T>> {
    let g = f.decompose_g(rho);
    let gamma_g = gamma_j_of_g(&g, j_max, cutoff)?;
    let order = j_max.max(h_max);
    let alpha = alpha_coeffs(rho, order)?;
    let nu = nu_coeffs(rho, h_max)?;
    let gamma_vals: Vec<Cx<T>> = gamma_g.iter().map(|e| e.value).collect();
    let lambda = lambda_from_parts(rho, &alpha[..=j_max], &gamma_vals, j_max);
    Ok(ExpansionCoefficients {
        rho,
        j_max,
        h_max,
        alpha: alpha[..=j_max.max(h_max)].to_vec(),
        nu,
        gamma_g,
        lambda,
    })
}

impl<T: Real> ExpansionCoefficients<T> {
    pub fn to_report(&self) -> CoefficientReport {
        CoefficientReport {
            rho: complex_pair(self.rho),
            j: self.j_max,
            h: self.h_max,
            alpha: self.alpha.iter().map(|&a| complex_pair(a)).collect(),
            nu: self.nu.iter().map(|&a| complex_pair(a)).collect(),
            gamma_g: self
                .gamma_g
                .iter()
                .map(|e| GammaGReport {
                    j: e.j,
                    y: e.y,
                    value: complex_pair(e.value),
                    error: e.error_estimate,
                })
                .collect(),
            lambda: self.lambda.iter().map(|&a| complex_pair(a)).collect(),
        }
    }
}
