//! Complex truncated power series and the special functions the expansion
//! machinery needs: Stieltjes constants, the Taylor data of `s ζ(s+1)` at
//! the origin, the gamma function with its entire reciprocal, and an
//! Euler–Maclaurin zeta evaluator for the 1-line.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};
use std::sync::OnceLock;

/// Bernoulli numbers B_2, B_4, ..., B_30 as exact (numerator, denominator)
/// pairs; both parts are exactly representable in f64.
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// `k!` as an f64; exact for `k ≤ 22`.
pub(crate) fn factorial_f64(k: usize) -> f64 {
    let mut f = 1.0f64;
    for i in 2..=k {
        f *= i as f64;
    }
    f
}

// ---------------------------------------------------------------------------
// Truncated power series
// ---------------------------------------------------------------------------

/// Complex power series truncated at a fixed order (degree-indexed
/// coefficients `c_0..c_N`). Binary operations truncate to the minimum of
/// the operand orders.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T: Real> {
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> TruncatedSeries<T> {
    pub fn new(coeffs: Vec<Cx<T>>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        TruncatedSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> Cx<T>) -> Self {
        TruncatedSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn constant(value: Cx<T>, order: usize) -> Self {
        let mut coeffs = vec![Cx::new(T::zero(), T::zero()); order + 1];
        coeffs[0] = value;
        TruncatedSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Cx::new(T::one(), T::zero()), order)
    }

    /// The series of `1/(1+ξ)` (alternating geometric).
    pub fn geometric_alternating(order: usize) -> Self {
        Self::from_fn(order, |k| {
            if k % 2 == 0 {
                Cx::new(T::one(), T::zero())
            } else {
                Cx::new(-T::one(), T::zero())
            }
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Cx<T> {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| Cx::new(T::zero(), T::zero()))
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| self.coeffs[k] + other.coeffs[k])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| self.coeffs[k] - other.coeffs[k])
    }

    pub fn scale(&self, c: Cx<T>) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// Cauchy product truncated at the minimum operand order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let zero = Cx::new(T::zero(), T::zero());
        let mut out = vec![zero; n + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a == zero {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Series logarithm; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        let one = Cx::new(T::one(), T::zero());
        if (self.coeffs[0] - one).norm() > T::of(1e-14) {
            return Err(Error::Domain("series log requires constant term 1".into()));
        }
        let n = self.order();
        let zero = Cx::new(T::zero(), T::zero());
        let mut l = vec![zero; n + 1];
        for k in 1..=n {
            let mut conv = zero;
            for j in 1..k {
                conv += l[j] * self.coeffs[k - j] * T::of(j as f64);
            }
            l[k] = self.coeffs[k] - conv / T::of(k as f64);
        }
        Ok(TruncatedSeries { coeffs: l })
    }

    /// Series exponential; requires constant term 0.
    pub fn exp(&self) -> Result<Self> {
        if self.coeffs[0].norm() > T::of(1e-14) {
            return Err(Error::Domain("series exp requires constant term 0".into()));
        }
        let n = self.order();
        let zero = Cx::new(T::zero(), T::zero());
        let mut b = vec![zero; n + 1];
        b[0] = Cx::new(T::one(), T::zero());
        for k in 1..=n {
            let mut conv = zero;
            for j in 1..=k {
                conv += self.coeffs[j] * b[k - j] * T::of(j as f64);
            }
            b[k] = conv / T::of(k as f64);
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    /// Complex power of a unit series: `exp(ϱ log a)`. The constant term
    /// must be 1 (within 1e-14), which removes any branch ambiguity.
    pub fn powc(&self, rho: Cx<T>) -> Result<Self> {
        let log = self
            .log()
            .map_err(|_| Error::Domain("series power requires constant term 1".into()))?;
        log.scale(rho).exp()
    }

    /// Division; requires a nonzero constant term in the divisor.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.coeffs[0].norm() < T::of(1e-300) {
            return Err(Error::Domain(
                "series division requires nonzero constant term".into(),
            ));
        }
        let n = self.order().min(other.order());
        let zero = Cx::new(T::zero(), T::zero());
        let mut q = vec![zero; n + 1];
        for k in 0..=n {
            let mut acc = self.coeffs[k];
            for j in 0..k {
                acc -= q[j] * other.coeffs[k - j];
            }
            q[k] = acc / other.coeffs[0];
        }
        Ok(TruncatedSeries { coeffs: q })
    }
}

// ---------------------------------------------------------------------------
// Stieltjes constants
// ---------------------------------------------------------------------------

/// Stieltjes constants `γ_0..γ_N` with a certified absolute error bound per
/// entry. Regenerated from scratch by [`stieltjes`]; nothing is hard-coded.
#[derive(Clone, Debug)]
pub struct StieltjesTable<T: Real> {
    gamma: Vec<T>,
    error_bound: Vec<T>,
}

impl<T: Real> StieltjesTable<T> {
    pub fn gamma(&self, k: usize) -> T {
        self.gamma[k]
    }

    pub fn error_bound(&self, k: usize) -> T {
        self.error_bound[k]
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }
}

pub const STIELTJES_MAX: usize = 20;

/// Euler–Maclaurin evaluation of `γ_k` for `k ≤ N ≤ 20`.
///
/// `γ_k = lim_M (Σ_{m≤M} (log m)^k/m − (log M)^{k+1}/(k+1))`; the limit is
/// closed at a fixed `M` with Euler–Maclaurin corrections. The partial sum
/// and the closing terms cancel to ~1e-12 of their own magnitude for k near
/// 20, so the accumulation runs in double-double; the derivative
/// polynomials of `(log x)^k/x` have exact i128 coefficients.
pub fn stieltjes<T: Real>(n_max: usize) -> Result<StieltjesTable<T>> {
    if n_max > STIELTJES_MAX {
        return Err(Error::Unsupported(format!(
            "stieltjes table supports k <= {STIELTJES_MAX}, requested {n_max}"
        )));
    }
    let full = stieltjes_cache();
    Ok(StieltjesTable {
        gamma: full.0[..=n_max].iter().map(|&g| T::of(g)).collect(),
        error_bound: full.1[..=n_max].iter().map(|&b| T::of(b)).collect(),
    })
}

fn stieltjes_cache() -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut gammas = Vec::with_capacity(STIELTJES_MAX + 1);
        let mut bounds = Vec::with_capacity(STIELTJES_MAX + 1);
        for k in 0..=STIELTJES_MAX {
            let (g, b) = stieltjes_em(k);
            gammas.push(g);
            bounds.push(b);
        }
        (gammas, bounds)
    })
}

fn dd_from_i128(v: i128) -> Dd {
    let hi = v as f64;
    let lo = (v - hi as i128) as f64;
    Dd::from_f64(hi).add(Dd::from_f64(lo))
}

/// One Stieltjes constant by Euler–Maclaurin at M = 64 with 10 correction
/// terms; returns (value, certified absolute error bound).
fn stieltjes_em(k: usize) -> (f64, f64) {
    const M: u32 = 64;
    const J: usize = 10;
    let ln_m = Dd::ln_u32(M);

    let mut partial = Dd::ZERO;
    for m in 1..=M {
        let t = Dd::ln_u32(m).powi(k as u32).div(Dd::from_f64(m as f64));
        partial = partial.add(t);
    }

    // Subtract the integral term (ln M)^{k+1}/(k+1) and half of F(M).
    let mut acc = partial
        .sub(ln_m.powi(k as u32 + 1).div(Dd::from_f64((k + 1) as f64)))
        .sub(ln_m.powi(k as u32).div(Dd::from_f64(2.0 * M as f64)));

    // Derivative polynomials: F(x) = (ln x)^k / x,
    // F^{(m)}(x) = Σ_i c^{(m)}_i (ln x)^i / x^{m+1},
    // c^{(m+1)}_i = (i+1) c^{(m)}_{i+1} - (m+1) c^{(m)}_i   (exact integers).
    let mut c = vec![0i128; k + 2];
    c[k] = 1;
    let eval_deriv = |c: &[i128], order_m: usize| -> Dd {
        let mut s = Dd::ZERO;
        for (i, &ci) in c.iter().enumerate() {
            if ci != 0 {
                s = s.add(dd_from_i128(ci).mul(ln_m.powi(i as u32)));
            }
        }
        s.div(Dd::from_f64(M as f64).powi(order_m as u32 + 1))
    };

    let mut deriv_order = 0usize;
    let mut omitted = 0.0f64;
    for (j, &(num, den)) in BERNOULLI.iter().enumerate().take(J + 1) {
        let target = 2 * (j + 1) - 1;
        while deriv_order < target {
            let mut next = vec![0i128; c.len()];
            for i in 0..c.len() - 1 {
                next[i] = (i as i128 + 1) * c[i + 1] - (deriv_order as i128 + 1) * c[i];
            }
            let top = c.len() - 1;
            next[top] = -(deriv_order as i128 + 1) * c[top];
            c = next;
            deriv_order += 1;
        }
        let b = Dd::from_ratio(num, den);
        let f2j = factorial_f64(2 * (j + 1));
        let term = b.mul(eval_deriv(&c, deriv_order)).div(Dd::from_f64(f2j));
        if j < J {
            acc = acc.sub(term);
        } else {
            // First omitted term certifies the truncation error.
            omitted = term.to_f64().abs();
        }
    }

    let value = acc.to_f64();
    let bound = 2.0 * omitted + 1e-25 * value.abs().max(1.0);
    (value, bound)
}

// ---------------------------------------------------------------------------
// Taylor series of s ζ(s+1)
// ---------------------------------------------------------------------------

/// Taylor series of `s ζ(s+1)` at the origin: constant term 1, and the
/// coefficient of `s^k` for `k ≥ 1` is `(-1)^{k-1} γ_{k-1}/(k-1)!`.
pub fn zeta_shift_series<T: Real>(order: usize) -> Result<TruncatedSeries<T>> {
    if order > STIELTJES_MAX {
        return Err(Error::Unsupported(format!(
            "zeta shift series supports order <= {STIELTJES_MAX}, requested {order}"
        )));
    }
    let table = stieltjes::<T>(order.saturating_sub(1))?;
    Ok(TruncatedSeries::from_fn(order, |k| {
        if k == 0 {
            Cx::new(T::one(), T::zero())
        } else {
            let sign = if (k - 1) % 2 == 0 { T::one() } else { -T::one() };
            let v = sign * table.gamma(k - 1) / T::of(factorial_f64(k - 1));
            Cx::new(v, T::zero())
        }
    }))
}

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

// Lanczos approximation, r = 10.900511 with 11 coefficients
// ("An Analysis of the Lanczos Gamma Approximation", G. R. Pugh, 2004).
const LANCZOS_R: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;

fn is_nonpositive_integer<T: Real>(z: Cx<T>) -> bool {
    z.im == T::zero() && z.re <= T::zero() && z.re.fract() == T::zero()
}

fn small_positive_integer<T: Real>(z: Cx<T>) -> Option<usize> {
    if z.im == T::zero() && z.re.fract() == T::zero() && z.re >= T::one() {
        let k = z.re.to_f64().unwrap_or(f64::NAN);
        if k <= 21.0 {
            return Some(k as usize);
        }
    }
    None
}

fn lanczos_sum<T: Real>(z: Cx<T>) -> Cx<T> {
    let mut s = Cx::new(T::of(LANCZOS_DK[0]), T::zero());
    for (i, &dk) in LANCZOS_DK.iter().enumerate().skip(1) {
        s += Cx::new(T::of(dk), T::zero()) / (z + T::of(i as f64 - 1.0));
    }
    s
}

/// Euler's gamma function for complex arguments.
///
/// Errors at the poles (nonpositive integers); use [`recip_gamma`] there.
/// Positive integers up to 21 take an exact factorial path.
pub fn gamma_fn<T: Real>(z: Cx<T>) -> Result<Cx<T>> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("gamma pole at {z}")));
    }
    if let Some(k) = small_positive_integer(z) {
        return Ok(Cx::new(T::of(factorial_f64(k - 1)), T::zero()));
    }
    let half = T::of(0.5);
    if z.re < half {
        // Reflection: Γ(z) = π / (sin(πz) Γ(1-z)).
        let pi = T::PI();
        let sin = (z * pi).sin();
        let g = gamma_fn(Cx::new(T::one(), T::zero()) - z)?;
        return Ok(Cx::new(pi, T::zero()) / (sin * g));
    }
    let s = lanczos_sum(z);
    let base = z + T::of(LANCZOS_R - 0.5);
    let e = T::of(std::f64::consts::E);
    let pw = (base / e).powc(z - half);
    Ok(s * T::of(TWO_SQRT_E_OVER_PI) * pw)
}

/// The entire function `1/Γ(z)`; returns exactly 0 at nonpositive integers.
pub fn recip_gamma<T: Real>(z: Cx<T>) -> Cx<T> {
    if is_nonpositive_integer(z) {
        return Cx::new(T::zero(), T::zero());
    }
    match gamma_fn(z) {
        Ok(g) => Cx::new(T::one(), T::zero()) / g,
        Err(_) => Cx::new(T::zero(), T::zero()),
    }
}

// ---------------------------------------------------------------------------
// Zeta by Euler–Maclaurin
// ---------------------------------------------------------------------------

/// ζ(s) by Euler–Maclaurin summation with a certified remainder bound.
///
/// Valid away from s = 1; intended for Re s > -1 (the correction depth is
/// fixed at 12 terms).
pub fn zeta_em<T: Real>(s: Cx<T>, tol: f64) -> Result<Cx<T>> {
    let one = Cx::new(T::one(), T::zero());
    if (s - one).norm() < T::of(1e-12) {
        return Err(Error::Pole("zeta pole at s = 1".into()));
    }
    const J: usize = 12;
    let sigma = s.re.to_f64().unwrap();
    let s_norm = s.norm().to_f64().unwrap();
    // |s (s+1) ... (s+2J)| B_{2J+2} / (2J+2)! for the remainder bound.
    let mut poch_next = 1.0f64;
    {
        let mut w = s;
        for _ in 0..=(2 * J) {
            poch_next *= w.norm().to_f64().unwrap();
            w += T::one();
        }
    }
    let b_next = BERNOULLI[J].0.abs() / BERNOULLI[J].1;
    let lead = poch_next * b_next / factorial_f64(2 * J + 2)
        * ((s_norm + 2.0 * J as f64 + 1.0) / (sigma + 2.0 * J as f64 + 1.0));
    let mut n = 16u64;
    loop {
        let bound = lead * (n as f64).powf(-(sigma + 2.0 * J as f64 + 1.0));
        if bound <= tol {
            break;
        }
        n *= 2;
        if n > 4_000_000 {
            return Err(Error::Numerical(format!(
                "zeta Euler-Maclaurin cannot reach tolerance {tol} at s = {s}"
            )));
        }
    }

    let mut sum = Cx::new(T::zero(), T::zero());
    for m in 1..n {
        sum += (-s * T::ln_u64(m)).exp();
    }
    let ln_n = T::ln_u64(n);
    // + N^{1-s}/(s-1) + N^{-s}/2
    sum += ((one - s) * ln_n).exp() / (s - one);
    sum += (-s * ln_n).exp() * T::of(0.5);
    // + Σ_k B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    let mut poch = s;
    let mut w = s + T::one();
    for (k, &(num, den)) in BERNOULLI.iter().enumerate().take(J) {
        let coeff = T::of(num / den / factorial_f64(2 * (k + 1)));
        let expo = -(s + T::of(2.0 * k as f64 + 1.0)) * ln_n;
        sum += poch * coeff * expo.exp();
        poch = poch * w;
        w += T::one();
        poch = poch * w;
        w += T::one();
    }
    Ok(sum)
}

/// ζ(1 + iτ) on the pointed 1-line.
pub fn zeta_line<T: Real>(tau: f64, tol: f64) -> Result<Cx<T>> {
    if tau == 0.0 {
        return Err(Error::Pole("zeta pole at s = 1 (tau = 0)".into()));
    }
    if tol < 1e-12 {
        return Err(Error::Usage(format!(
            "zeta_line tolerance must be >= 1e-12, got {tol}"
        )));
    }
    zeta_em(Cx::new(T::one(), T::of(tau)), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type S = TruncatedSeries<f64>;

    fn series(vals: &[f64]) -> S {
        S::new(vals.iter().map(|&v| cx(v, 0.0)).collect())
    }

    #[test]
    fn mul_trivials() {
        let a = series(&[1.0, 1.0, 0.0]);
        let b = series(&[1.0, -1.0, 0.0]);
        let p = a.mul(&b);
        assert_eq!(p.coeff(0), cx(1.0, 0.0));
        assert_eq!(p.coeff(1), cx(0.0, 0.0));
        assert_eq!(p.coeff(2), cx(-1.0, 0.0));
        let one = S::one(2);
        assert_eq!(a.mul(&one), a);
    }

    #[test]
    fn mul_matches_schoolbook_oracle() {
        let f = |k: usize, salt: u64| {
            let h = (k as u64 + 1).wrapping_mul(0x9E3779B97F4A7C15 ^ salt);
            ((h >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = S::from_fn(8, |k| cx(f(k, 1), f(k, 2)));
        let b = S::from_fn(8, |k| cx(f(k, 3), f(k, 4)));
        let p = a.mul(&b);
        for k in 0..=8usize {
            let mut expected = cx(0.0, 0.0);
            for i in 0..=k {
                expected += a.coeff(i) * b.coeff(k - i);
            }
            assert!((p.coeff(k) - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn pow_geometric() {
        let a = series(&[1.0, -1.0, 0.0, 0.0, 0.0]);
        let g = a.powc(cx(-1.0, 0.0)).unwrap();
        for k in 0..=4 {
            assert!((g.coeff(k) - cx(1.0, 0.0)).norm() < 1e-13, "coeff {k}");
        }
    }

    #[test]
    fn pow_roundtrip() {
        let a = series(&[1.0, 0.3, -0.2, 0.11, 0.07, -0.05]);
        let rho = cx(2.0, 1.0);
        let back = a.powc(rho).unwrap().powc(cx::<f64>(1.0, 0.0) / rho).unwrap();
        for k in 0..=5 {
            assert!((back.coeff(k) - a.coeff(k)).norm() < 1e-10);
        }
    }

    #[test]
    fn pow_square_by_hand() {
        let g0 = stieltjes::<f64>(0).unwrap().gamma(0);
        let a = S::new(vec![cx(1.0, 0.0), cx(g0, 0.0), cx(0.0, 0.0)]);
        let sq = a.powc(cx(2.0, 0.0)).unwrap();
        assert!((sq.coeff(1) - cx(2.0 * g0, 0.0)).norm() < 1e-14);
        assert!((sq.coeff(2) - cx(g0 * g0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pow_requires_unit_constant_term() {
        let a = series(&[2.0, 1.0]);
        assert!(a.powc(cx(0.5, 0.0)).is_err());
    }

    #[test]
    fn pow_equals_iterated_mul() {
        let a = series(&[1.0, 0.4, -0.3, 0.2, 0.1, -0.07, 0.03]);
        let mut acc = S::one(a.order());
        for m in 1..=5usize {
            acc = acc.mul(&a);
            let p = a.powc(cx(m as f64, 0.0)).unwrap();
            for k in 0..=a.order() {
                assert!((p.coeff(k) - acc.coeff(k)).norm() < 1e-11, "m = {m}, k = {k}");
            }
        }
    }

    #[test]
    fn div_inverts_mul() {
        let a = series(&[1.0, 0.5, 0.25, -0.1]);
        let b = series(&[2.0, -1.0, 0.3, 0.9]);
        let q = a.mul(&b).div(&b).unwrap();
        for k in 0..=3 {
            assert!((q.coeff(k) - a.coeff(k)).norm() < 1e-12);
        }
    }

    // -- Stieltjes -----------------------------------------------------------

    /// Independent oracle: direct limit with Richardson extrapolation over
    /// M-doubling of the trapezoid-corrected partial value.
    fn stieltjes_direct(k: usize) -> f64 {
        let f = |m_max: u64| -> f64 {
            let mut s = 0.0;
            for m in 1..=m_max {
                s += (m as f64).ln().powi(k as i32) / m as f64;
            }
            s - (m_max as f64).ln().powi(k as i32 + 1) / (k as f64 + 1.0)
                + (m_max as f64).ln().powi(k as i32) / (2.0 * m_max as f64)
        };
        let (f1, f2, f3) = (f(800_000), f(1_600_000), f(3_200_000));
        let r1 = 2.0 * f2 - f1;
        let r2 = 2.0 * f3 - f2;
        2.0 * r2 - r1
    }

    #[test]
    fn gamma0_and_gamma1_cross_method() {
        let t = stieltjes::<f64>(1).unwrap();
        assert!(t.gamma(0) > 0.577215 && t.gamma(0) < 0.577216);
        assert!((t.gamma(0) - stieltjes_direct(0)).abs() < 1e-9);
        assert!((t.gamma(1) - stieltjes_direct(1)).abs() < 1e-8);
        assert!((t.gamma(0) - 0.5772156649015329).abs() < 1e-12);
        assert!((t.gamma(1) - (-0.0728158454836767)).abs() < 1e-12);
    }

    #[test]
    fn table_envelope_and_bounds() {
        let t = stieltjes::<f64>(20).unwrap();
        for k in 0..=20usize {
            assert!(t.gamma(k).is_finite());
            assert!(t.gamma(k).abs() <= factorial_f64(k), "k = {k}");
            assert!(
                t.error_bound(k) <= 1e-12,
                "bound at k = {k}: {}",
                t.error_bound(k)
            );
        }
    }

    #[test]
    fn stieltjes_rejects_large_k() {
        assert!(matches!(stieltjes::<f64>(21), Err(Error::Unsupported(_))));
    }

    // -- zeta shift series ----------------------------------------------------

    #[test]
    fn zeta_shift_constant_term_is_one() {
        let z = zeta_shift_series::<f64>(6).unwrap();
        assert_eq!(z.coeff(0), cx(1.0, 0.0));
    }

    #[test]
    fn zeta_shift_low_coeffs_match_fit_oracle() {
        // Fit s ζ(s+1) on small real s through zeta_em; the function extends
        // analytically through 0 with value 1 (the residue of ζ at 1).
        let g = |s: f64| {
            if s == 0.0 {
                1.0
            } else {
                s * zeta_em::<f64>(cx(1.0 + s, 0.0), 1e-13).unwrap().re
            }
        };
        let h = 1e-2;
        let c1 = (8.0 * (g(h) - g(-h)) - (g(2.0 * h) - g(-2.0 * h))) / (12.0 * h);
        let c2 = (16.0 * (g(h) + g(-h)) - (g(2.0 * h) + g(-2.0 * h)) - 30.0 * g(0.0))
            / (24.0 * h * h);
        let z = zeta_shift_series::<f64>(4).unwrap();
        assert!(
            (z.coeff(1).re - c1).abs() < 1e-7,
            "s^1 coeff vs fit: {} vs {c1}",
            z.coeff(1).re
        );
        assert!(
            (z.coeff(2).re - c2).abs() < 1e-5,
            "s^2 coeff vs fit: {} vs {c2}",
            z.coeff(2).re
        );
        // Signs dictated by the Laurent data.
        let t = stieltjes::<f64>(4).unwrap();
        assert!((z.coeff(1).re - t.gamma(0)).abs() < 1e-15);
        assert!((z.coeff(2).re + t.gamma(1)).abs() < 1e-15);
        assert!(z.coeff(2).re > 0.0);
    }

    // -- gamma -----------------------------------------------------------------

    #[test]
    fn gamma_classical_values() {
        let g_half = gamma_fn::<f64>(cx(0.5, 0.0)).unwrap();
        assert!((g_half.re - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!(g_half.im.abs() < 1e-14);
        let g5 = gamma_fn::<f64>(cx(5.0, 0.0)).unwrap();
        assert_eq!(g5.re, 24.0);
    }

    #[test]
    fn recip_gamma_zeros() {
        assert_eq!(recip_gamma::<f64>(cx(0.0, 0.0)), cx(0.0, 0.0));
        assert_eq!(recip_gamma::<f64>(cx(-3.0, 0.0)), cx(0.0, 0.0));
        assert!(matches!(gamma_fn::<f64>(cx(-3.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn gamma_functional_equation() {
        // 100 deterministic complex points in the strip |Im z| <= 10.
        for i in 0..100u64 {
            let h = (i + 1).wrapping_mul(0x2545F4914F6CDD1D);
            let re = 0.2 + 8.0 * ((h >> 20) & 0xFFFF) as f64 / 65535.0;
            let im = -10.0 + 20.0 * ((h >> 40) & 0xFFFF) as f64 / 65535.0;
            let z = cx(re, im);
            let lhs = gamma_fn::<f64>(z + cx(1.0, 0.0)).unwrap();
            let rhs = z * gamma_fn::<f64>(z).unwrap();
            assert!(
                (lhs - rhs).norm() / rhs.norm() < 1e-10,
                "z = {z}, lhs = {lhs}, rhs = {rhs}"
            );
        }
    }

    #[test]
    fn recip_times_gamma_is_one() {
        for &(re, im) in &[(0.3, 0.0), (2.5, 1.5), (-1.3, 0.4), (4.0, -3.0), (-0.5, 0.0)] {
            let z = cx(re, im);
            let p = recip_gamma::<f64>(z) * gamma_fn::<f64>(z).unwrap();
            assert!((p - cx(1.0, 0.0)).norm() < 1e-9, "z = {z}");
        }
    }

    // -- zeta --------------------------------------------------------------------

    #[test]
    fn zeta_real_classical() {
        let z2 = zeta_em::<f64>(cx(2.0, 0.0), 1e-13).unwrap();
        assert!((z2.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        let z4 = zeta_em::<f64>(cx(4.0, 0.0), 1e-13).unwrap();
        assert!((z4.re - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_line_pole_and_tol_checks() {
        assert!(matches!(zeta_line::<f64>(0.0, 1e-10), Err(Error::Pole(_))));
        assert!(matches!(zeta_line::<f64>(1.0, 1e-15), Err(Error::Usage(_))));
    }

    #[test]
    fn zeta_line_stable_under_tightening() {
        let a = zeta_line::<f64>(1.0, 1e-10).unwrap();
        let b = zeta_line::<f64>(1.0, 1e-12).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn zeta_line_schwarz_reflection() {
        let a = zeta_line::<f64>(1.7, 1e-12).unwrap();
        let b = zeta_line::<f64>(-1.7, 1e-12).unwrap();
        assert!((a.conj() - b).norm() < 1e-11);
    }

    /// Borwein's alternating-series algorithm for η(s): an independent
    /// route to ζ through ζ = η / (1 - 2^{1-s}).
    fn zeta_eta_oracle(s: Cx<f64>) -> Cx<f64> {
        let n = 40usize;
        let mut d = vec![0.0f64; n + 1];
        for (k, dk) in d.iter_mut().enumerate() {
            let mut sum = 0.0;
            // t_0 = 1; t_{i+1} = t_i * 4 (n+i)(n-i) / ((2i+1)(2i+2))
            let mut term = 1.0f64;
            for i in 0..=k {
                sum += term;
                let fi = i as f64;
                let fnn = n as f64;
                term *= 4.0 * (fnn + fi) * (fnn - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
            }
            *dk = n as f64 * sum;
        }
        let mut eta: Cx<f64> = cx(0.0, 0.0);
        for k in 0..n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let w = (-(s * ((k + 1) as f64).ln())).exp();
            eta += w * ((d[k] - d[n]) * sign);
        }
        eta = eta * (-1.0 / d[n]);
        let one: Cx<f64> = cx(1.0, 0.0);
        let two_pow = ((one - s) * 2f64.ln()).exp();
        eta / (one - two_pow)
    }

    #[test]
    fn zeta_line_matches_eta_oracle() {
        // Validate the oracle on a classical point first.
        let check = zeta_eta_oracle(cx(2.0, 0.0));
        assert!((check.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
        let z = zeta_line::<f64>(1.0, 1e-12).unwrap();
        let oracle = zeta_eta_oracle(cx(1.0, 1.0));
        assert!((z - oracle).norm() < 1e-9, "zeta(1+i): {z} vs {oracle}");
        assert!(z.norm().is_finite());
    }
}
