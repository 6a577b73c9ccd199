//! Algebra of complex multiplicative functions.
//!
//! A function is represented by its local rule `(p, ν) ↦ f(p^ν)` with
//! `f(p^0) = 1`; evaluation at `n = Π p_i^{ν_i}` multiplies local values, so
//! multiplicativity is structural and exact. Dirichlet convolution and
//! division act on the local Euler-factor power series
//! `Σ_ν f(p^ν) ξ^ν`, coefficient by coefficient.
//!
//! Integer-valued catalog entries (τ_k for integer k, the Möbius function,
//! the unit) additionally expose an exact integer rule so summation drivers
//! can run an exact path.

use crate::error::{Error, Result};
use crate::primes::SpfSegment;
use crate::report::parse_complex;
use crate::scalar::{cis, Cx, Real};
use crate::series::{factorial_f64, TruncatedSeries};
use std::sync::Arc;

type Rule<T> = Arc<dyn Fn(u64, u32) -> Cx<T> + Send + Sync>;
type IntRule = Arc<dyn Fn(u64, u32) -> i64 + Send + Sync>;

/// Structural tag describing how a function was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultFnKind {
    TauRho,
    ExpMultiplicative,
    MRho,
    TableBacked,
    Composite,
    Catalog(String),
}

/// A complex multiplicative function given by its values on prime powers.
#[derive(Clone)]
pub struct MultFn<T: Real> {
    kind: MultFnKind,
    label: String,
    rule: Rule<T>,
    int_rule: Option<IntRule>,
}

impl<T: Real> std::fmt::Debug for MultFn<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MultFn({}, {:?})", self.label, self.kind)
    }
}

fn rho_is_integer<T: Real>(rho: Cx<T>) -> Option<i64> {
    if rho.im == T::zero() && rho.re.fract() == T::zero() {
        rho.re.to_f64().map(|r| r as i64)
    } else {
        None
    }
}

/// `binomial(k+ν-1, ν)` for integer k (of either sign), exact.
fn tau_int_value(k: i64, nu: u32) -> i64 {
    let mut b: i128 = 1;
    for i in 0..nu as i128 {
        b = b * (k as i128 + i) / (i + 1); // divides exactly: b is a binomial
    }
    b as i64
}

impl<T: Real> MultFn<T> {
    /// Build from an arbitrary local rule. The rule must satisfy
    /// `rule(p, 0) = 1`; evaluation never calls it with ν = 0.
    pub fn from_local_rule(
        label: impl Into<String>,
        rule: impl Fn(u64, u32) -> Cx<T> + Send + Sync + 'static,
    ) -> Self {
        MultFn {
            kind: MultFnKind::TableBacked,
            label: label.into(),
            rule: Arc::new(rule),
            int_rule: None,
        }
    }

    /// The coefficient function of ζ(s)^ϱ:
    /// `τ_ϱ(p^ν) = binomial(ϱ+ν-1, ν)`, computed by the running product
    /// `Π_{i<ν} (ϱ+i)/(i+1)` so that integer ϱ stays exact.
    pub fn tau_rho(rho: Cx<T>) -> Self {
        let rule = move |_p: u64, nu: u32| -> Cx<T> {
            let mut b = Cx::new(T::one(), T::zero());
            for i in 0..nu {
                b = b * (rho + T::of(i as f64)) / T::of(i as f64 + 1.0);
            }
            b
        };
        let int_rule: Option<IntRule> = rho_is_integer(rho)
            .map(|k| Arc::new(move |_p: u64, nu: u32| tau_int_value(k, nu)) as IntRule);
        MultFn {
            kind: MultFnKind::TauRho,
            label: format!("tau_rho({})", rho),
            rule: Arc::new(rule),
            int_rule,
        }
    }

    /// Convolution unit: the indicator of n = 1 (equals τ_0).
    pub fn unit() -> Self {
        let mut f = Self::tau_rho(Cx::new(T::zero(), T::zero()));
        f.kind = MultFnKind::Catalog("unit".into());
        f.label = "unit".into();
        f
    }

    /// The constant function 1 (equals τ_1).
    pub fn one_fn() -> Self {
        let mut f = Self::tau_rho(Cx::new(T::one(), T::zero()));
        f.kind = MultFnKind::Catalog("one".into());
        f.label = "one".into();
        f
    }

    /// The Möbius function (equals τ_{-1}).
    pub fn moebius() -> Self {
        let mut f = Self::tau_rho(Cx::new(-T::one(), T::zero()));
        f.kind = MultFnKind::Catalog("moebius".into());
        f.label = "moebius".into();
        f
    }

    /// Exponentially multiplicative extension of values on primes:
    /// `g(p^ν) = g(p)^ν / ν!` (local factor `exp(g(p) ξ)`).
    pub fn exp_multiplicative(
        label: impl Into<String>,
        prime_values: impl Fn(u64) -> Cx<T> + Send + Sync + 'static,
    ) -> Self {
        let rule = move |p: u64, nu: u32| -> Cx<T> {
            let v = prime_values(p);
            v.powu(nu) / T::of(factorial_f64(nu as usize))
        };
        MultFn {
            kind: MultFnKind::ExpMultiplicative,
            label: label.into(),
            rule: Arc::new(rule),
            int_rule: None,
        }
    }

    /// Completion of prime values into the class with
    /// `f(p^ν) = τ_ϱ(p^ν) + τ_ϱ(p^{ν-1}) (f(p) - ϱ)`; the decomposition
    /// `f = τ_ϱ * g` then has g supported on squarefree integers.
    pub fn m_rho_completion(
        label: impl Into<String>,
        prime_values: impl Fn(u64) -> Cx<T> + Send + Sync + 'static,
        rho: Cx<T>,
    ) -> Self {
        let tau = Self::tau_rho(rho);
        let tau_rule = tau.rule.clone();
        let rule = move |p: u64, nu: u32| -> Cx<T> {
            let correction = prime_values(p) - rho;
            tau_rule(p, nu) + tau_rule(p, nu - 1) * correction
        };
        MultFn {
            kind: MultFnKind::MRho,
            label: label.into(),
            rule: Arc::new(rule),
            int_rule: None,
        }
    }

    /// Dirichlet convolution: local Euler factors multiply.
    pub fn convolve(&self, other: &Self) -> Self {
        let f = self.rule.clone();
        let g = other.rule.clone();
        let rule = move |p: u64, nu: u32| -> Cx<T> {
            let mut s = Cx::new(T::zero(), T::zero());
            for a in 0..=nu {
                let fa = if a == 0 {
                    Cx::new(T::one(), T::zero())
                } else {
                    f(p, a)
                };
                let gb = if nu - a == 0 {
                    Cx::new(T::one(), T::zero())
                } else {
                    g(p, nu - a)
                };
                s += fa * gb;
            }
            s
        };
        let int_rule = match (&self.int_rule, &other.int_rule) {
            (Some(fi), Some(gi)) => {
                let fi = fi.clone();
                let gi = gi.clone();
                Some(Arc::new(move |p: u64, nu: u32| -> i64 {
                    let mut s = 0i64;
                    for a in 0..=nu {
                        let fa = if a == 0 { 1 } else { fi(p, a) };
                        let gb = if nu - a == 0 { 1 } else { gi(p, nu - a) };
                        s += fa * gb;
                    }
                    s
                }) as IntRule)
            }
            _ => None,
        };
        MultFn {
            kind: MultFnKind::Composite,
            label: format!("({} * {})", self.label, other.label),
            rule: Arc::new(rule),
            int_rule,
        }
    }

    /// Local division: the multiplicative h with `self = other * h`,
    /// obtained by power-series division of local factors (the divisor's
    /// constant coefficient is always 1).
    pub fn local_divide(&self, other: &Self) -> Self {
        let f = self.rule.clone();
        let g = other.rule.clone();
        let rule = move |p: u64, nu: u32| -> Cx<T> {
            // h_k = f_k - Σ_{b=1..k} g_b h_{k-b}
            let one = Cx::new(T::one(), T::zero());
            let mut h = Vec::with_capacity(nu as usize + 1);
            h.push(one);
            for k in 1..=nu {
                let mut acc = f(p, k);
                for b in 1..=k {
                    let hv = h[(k - b) as usize];
                    acc = acc - g(p, b) * hv;
                }
                h.push(acc);
            }
            h[nu as usize]
        };
        MultFn {
            kind: MultFnKind::Composite,
            label: format!("({} / {})", self.label, other.label),
            rule: Arc::new(rule),
            int_rule: None,
        }
    }

    /// The g of the decomposition `self = τ_ϱ * g`.
    pub fn decompose_g(&self, rho: Cx<T>) -> Self {
        let mut g = self.local_divide(&Self::tau_rho(rho));
        g.label = format!("decompose({}, {})", self.label, rho);
        g
    }

    pub fn kind(&self) -> &MultFnKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Whether an exact integer evaluation path exists.
    pub fn is_integer_valued(&self) -> bool {
        self.int_rule.is_some()
    }

    /// Local rule value `f(p^ν)`; `ν = 0` returns 1 without consulting the
    /// rule.
    pub fn local(&self, p: u64, nu: u32) -> Cx<T> {
        if nu == 0 {
            Cx::new(T::one(), T::zero())
        } else {
            (self.rule)(p, nu)
        }
    }

    /// Exact integer local value, if this function carries an integer rule.
    pub fn local_int(&self, p: u64, nu: u32) -> Option<i64> {
        if nu == 0 {
            return Some(1);
        }
        self.int_rule.as_ref().map(|r| r(p, nu))
    }

    /// Evaluate on a full factorization.
    pub fn eval_factored(&self, factors: &[(u64, u32)]) -> Cx<T> {
        let mut v = Cx::new(T::one(), T::zero());
        for &(p, nu) in factors {
            v = v * self.local(p, nu);
        }
        v
    }

    /// Evaluate at n using a smallest-prime-factor segment covering n.
    pub fn eval(&self, n: u64, spf: &SpfSegment) -> Result<Cx<T>> {
        if n == 0 {
            return Err(Error::Domain("multiplicative function at n = 0".into()));
        }
        Ok(self.eval_factored(&spf.factorize(n)))
    }

    /// Evaluate at n by trial division (tests and small arguments).
    pub fn eval_trial(&self, n: u64) -> Result<Cx<T>> {
        if n == 0 {
            return Err(Error::Domain("multiplicative function at n = 0".into()));
        }
        let mut v = Cx::new(T::one(), T::zero());
        let mut x = n;
        while x > 1 {
            let p = crate::primes::trial_spf(x);
            let mut e = 0u32;
            while x % p == 0 {
                x /= p;
                e += 1;
            }
            v = v * self.local(p, e);
        }
        Ok(v)
    }

    /// Materialize the local Euler factor at p as a truncated series.
    pub fn local_factor(&self, p: u64, order: usize) -> LocalFactor<T> {
        LocalFactor {
            prime: p,
            series: TruncatedSeries::from_fn(order, |nu| self.local(p, nu as u32)),
        }
    }
}

/// A prime together with the truncated power series of its local Euler
/// factor `Σ_ν f(p^ν) ξ^ν` (constant coefficient 1).
#[derive(Clone, Debug)]
pub struct LocalFactor<T: Real> {
    pub prime: u64,
    pub series: TruncatedSeries<T>,
}

/// Truncation order that covers every exponent reachable below `x_max`:
/// `p^ν ≤ x` forces `ν ≤ log x / log 2`.
pub fn truncation_order_for(x_max: u64) -> usize {
    ((x_max.max(2) as f64).log2().ceil() as usize) + 2
}

// ---------------------------------------------------------------------------
// Resonance block geometry
// ---------------------------------------------------------------------------

/// Block boundary `x_k = exp exp C^k`.
pub fn resonance_x(c: f64, k: u32) -> f64 {
    (c.powi(k as i32)).exp().exp()
}

/// Resonance frequency `t_k = (log x_{k+1})^A = exp(A C^{k+1})`.
pub fn resonance_t(c: f64, a: f64, k: u32) -> f64 {
    (a * c.powi(k as i32 + 1)).exp()
}

/// Index k with `x_k < p ≤ x_{k+1}`, or None when `p ≤ x_1`.
pub fn resonance_block(c: f64, p: u64) -> Option<u32> {
    let pf = p as f64;
    if pf <= resonance_x(c, 1) {
        return None;
    }
    let mut k = 1u32;
    while resonance_x(c, k + 1) < pf {
        k += 1;
    }
    Some(k)
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// Construct a catalog function by name.
///
/// Names: `g0(A)`, `g0_twisted(A)`, `resonance(A, r, C, real_flag)`,
/// `tau_rho(ϱ)`, `unit`, `one`, `moebius`.
pub fn catalog<T: Real>(name: &str, params: &CatalogParams) -> Result<MultFn<T>> {
    match name {
        "unit" => Ok(MultFn::unit()),
        "one" => Ok(MultFn::one_fn()),
        "moebius" => Ok(MultFn::moebius()),
        "tau_rho" => {
            let rho = params.rho.ok_or_else(|| {
                Error::Usage("catalog tau_rho requires parameter rho".into())
            })?;
            Ok(MultFn::tau_rho(Cx::new(T::of(rho.0), T::of(rho.1))))
        }
        "g0" | "g0_twisted" => {
            let a = params
                .a
                .ok_or_else(|| Error::Usage(format!("catalog {name} requires parameter A")))?;
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::Usage(format!(
                    "parameter A for {name} must satisfy 0 < A < 1, got {a}"
                )));
            }
            let twisted = name == "g0_twisted";
            let rule = move |p: u64, nu: u32| -> Cx<T> {
                // g0(p^ν) = (log p)^{-Aν}; the twist multiplies by p^{iν}.
                let lp = (p as f64).ln();
                let modulus = T::of((-a * nu as f64 * lp.ln()).exp());
                if twisted {
                    let phase = T::of(nu as f64 * lp);
                    cis::<T>(phase) * modulus
                } else {
                    Cx::new(modulus, T::zero())
                }
            };
            Ok(MultFn {
                kind: MultFnKind::Catalog(name.to_string()),
                label: format!("{name}(A={a})"),
                rule: Arc::new(rule),
                int_rule: None,
            })
        }
        "resonance" => {
            let a = params
                .a
                .ok_or_else(|| Error::Usage("catalog resonance requires parameter A".into()))?;
            let r = params
                .r
                .ok_or_else(|| Error::Usage("catalog resonance requires parameter r".into()))?;
            let c = params
                .c
                .ok_or_else(|| Error::Usage("catalog resonance requires parameter C".into()))?;
            if a <= 0.0 || r <= 0.0 || c <= 1.0 {
                return Err(Error::Usage(format!(
                    "resonance requires A > 0, r > 0, C > 1; got A={a}, r={r}, C={c}"
                )));
            }
            let real_variant = params.real_variant;
            let prime_value = move |p: u64| -> Cx<T> {
                match resonance_block(c, p) {
                    None => Cx::new(T::zero(), T::zero()),
                    Some(k) => {
                        let v = resonance_t(c, a, k) * (p as f64).ln();
                        if real_variant {
                            // sgn(cos v), with sgn(0) = +1
                            let s = if v.cos() >= 0.0 { r } else { -r };
                            Cx::new(T::of(s), T::zero())
                        } else {
                            cis::<T>(T::of(v)) * T::of(r)
                        }
                    }
                }
            };
            let mut f = MultFn::exp_multiplicative(
                format!(
                    "resonance(A={a}, r={r}, C={c}, {})",
                    if real_variant { "real" } else { "complex" }
                ),
                prime_value,
            );
            f.kind = MultFnKind::Catalog("resonance".into());
            Ok(f)
        }
        other => Err(Error::Usage(format!(
            "unknown catalog function '{other}' (known: g0, g0_twisted, resonance, tau_rho, unit, one, moebius)"
        ))),
    }
}

/// Parameter bundle for [`catalog`]; complex values arrive as (re, im).
#[derive(Clone, Copy, Debug, Default)]
pub struct CatalogParams {
    pub rho: Option<(f64, f64)>,
    pub a: Option<f64>,
    pub r: Option<f64>,
    pub c: Option<f64>,
    pub real_variant: bool,
}

/// JSON form of a catalog request: `{"name": ..., "params": {...}}` with
/// complex parameters written as `"re+im i"` strings.
pub fn catalog_from_json<T: Real>(json: &serde_json::Value) -> Result<MultFn<T>> {
    let name = json
        .get("name")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Usage("catalog json needs a string field 'name'".into()))?;
    let mut params = CatalogParams::default();
    if let Some(obj) = json.get("params") {
        let obj = obj
            .as_object()
            .ok_or_else(|| Error::Usage("catalog field 'params' must be an object".into()))?;
        for (key, value) in obj {
            match key.as_str() {
                "rho" => {
                    let s = value.as_str().ok_or_else(|| {
                        Error::Usage("field rho: complex values are strings like \"1+2i\"".into())
                    })?;
                    params.rho = Some(parse_complex(s).map_err(|e| {
                        Error::Usage(format!("field rho: {e}"))
                    })?);
                }
                "A" | "a" => params.a = value.as_f64(),
                "r" => params.r = value.as_f64(),
                "C" | "c" => params.c = value.as_f64(),
                "real_flag" | "real_variant" => {
                    params.real_variant = value.as_bool().unwrap_or(false)
                }
                other => {
                    return Err(Error::Usage(format!(
                        "unknown catalog parameter '{other}'"
                    )))
                }
            }
        }
    }
    catalog(name, &params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn divisors(n: u64) -> Vec<u64> {
        let mut d = Vec::new();
        let mut i = 1;
        while i * i <= n {
            if n % i == 0 {
                d.push(i);
                if i != n / i {
                    d.push(n / i);
                }
            }
            i += 1;
        }
        d
    }

    fn brute_convolve(f: &MultFn<f64>, g: &MultFn<f64>, n: u64) -> Cx<f64> {
        let mut s = cx(0.0, 0.0);
        for d in divisors(n) {
            s += f.eval_trial(d).unwrap() * g.eval_trial(n / d).unwrap();
        }
        s
    }

    #[test]
    fn tau_examples() {
        let t1 = MultFn::<f64>::tau_rho(cx(1.0, 0.0));
        for n in 1..=50u64 {
            assert!((t1.eval_trial(n).unwrap() - cx(1.0, 0.0)).norm() < 1e-14);
        }
        let t2 = MultFn::<f64>::tau_rho(cx(2.0, 0.0));
        assert!((t2.eval_trial(6).unwrap().re - divisors(6).len() as f64).abs() < 1e-12);
        assert!((t2.eval_trial(360).unwrap().re - divisors(360).len() as f64).abs() < 1e-12);
        let th = MultFn::<f64>::tau_rho(cx(0.5, 0.0));
        assert!((th.local(7, 1).re - 0.5).abs() < 1e-15);
        assert!((th.local(7, 2).re - 0.375).abs() < 1e-15);
        let t0 = MultFn::<f64>::tau_rho(cx(0.0, 0.0));
        assert_eq!(t0.eval_trial(1).unwrap(), cx(1.0, 0.0));
        for n in 2..=30u64 {
            assert_eq!(t0.eval_trial(n).unwrap(), cx(0.0, 0.0));
        }
    }

    #[test]
    fn tau_minus_one_is_moebius() {
        let mu = MultFn::<f64>::moebius();
        assert_eq!(mu.local(5, 1), cx(-1.0, 0.0));
        assert_eq!(mu.local(5, 2), cx(0.0, 0.0));
        assert_eq!(mu.local_int(5, 1), Some(-1));
        assert_eq!(mu.local_int(5, 2), Some(0));
        // mu(30) = -1, mu(12) = 0
        assert_eq!(mu.eval_trial(30).unwrap(), cx(-1.0, 0.0));
        assert_eq!(mu.eval_trial(12).unwrap(), cx(0.0, 0.0));
    }

    #[test]
    fn integer_rule_matches_float_rule() {
        for k in [-2i64, -1, 0, 1, 2, 3] {
            let f = MultFn::<f64>::tau_rho(cx(k as f64, 0.0));
            assert!(f.is_integer_valued());
            for p in [2u64, 3, 11] {
                for nu in 0..8u32 {
                    let int = f.local_int(p, nu).unwrap() as f64;
                    assert!(
                        (f.local(p, nu).re - int).abs() < 1e-9,
                        "k={k} nu={nu}"
                    );
                }
            }
        }
    }

    #[test]
    fn eval_errors_and_unit_value() {
        let f = MultFn::<f64>::one_fn();
        assert!(f.eval_trial(0).is_err());
        assert_eq!(f.eval_trial(1).unwrap(), cx(1.0, 0.0));
    }

    #[test]
    fn convolution_adds_tau_orders() {
        let a = cx(1.5, 0.5);
        let b = cx(-0.5, 0.25);
        let fa = MultFn::<f64>::tau_rho(a);
        let fb = MultFn::<f64>::tau_rho(b);
        let conv = fa.convolve(&fb);
        let direct = MultFn::<f64>::tau_rho(a + b);
        for n in 1..=2000u64 {
            let lhs = conv.eval_trial(n).unwrap();
            let rhs = direct.eval_trial(n).unwrap();
            let oracle = brute_convolve(&fa, &fb, n);
            assert!((lhs - rhs).norm() < 1e-9, "n = {n}");
            assert!((lhs - oracle).norm() < 1e-9, "n = {n} (oracle)");
        }
    }

    #[test]
    fn convolution_unit_laws() {
        let f = MultFn::<f64>::tau_rho(cx(0.7, -0.2));
        let with_unit = f.convolve(&MultFn::unit());
        for n in 1..=500u64 {
            assert!(
                (with_unit.eval_trial(n).unwrap() - f.eval_trial(n).unwrap()).norm() < 1e-12
            );
        }
        let id = MultFn::<f64>::one_fn().convolve(&MultFn::moebius());
        assert_eq!(id.eval_trial(1).unwrap(), cx(1.0, 0.0));
        for n in 2..=500u64 {
            assert!(id.eval_trial(n).unwrap().norm() < 1e-12, "n = {n}");
        }
    }

    fn hashed_int_fn(salt: u64) -> MultFn<f64> {
        MultFn::from_local_rule(format!("hashed({salt})"), move |p, nu| {
            let h = (p ^ salt)
                .wrapping_mul(0x9E3779B97F4A7C15)
                .wrapping_add(nu as u64)
                .wrapping_mul(0xD1B54A32D192ED03);
            // Small integer values: series division amplifies magnitudes
            // like value^nu, so deep exponents stay well-conditioned.
            cx((((h >> 62) as i64) - 2) as f64, 0.0)
        })
    }

    #[test]
    fn local_divide_round_trip() {
        let f = hashed_int_fn(11);
        let g = hashed_int_fn(23);
        let h = f.local_divide(&g);
        let back = g.convolve(&h);
        for n in 1..=5000u64 {
            let lhs = back.eval_trial(n).unwrap();
            let rhs = f.eval_trial(n).unwrap();
            assert!((lhs - rhs).norm() < 1e-9, "n = {n}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn divide_by_self_gives_unit() {
        let f = MultFn::<f64>::tau_rho(cx(1.3, 0.4));
        let h = f.local_divide(&f);
        assert_eq!(h.eval_trial(1).unwrap(), cx(1.0, 0.0));
        for n in 2..=300u64 {
            assert!(h.eval_trial(n).unwrap().norm() < 1e-11, "n = {n}");
        }
    }

    #[test]
    fn decompose_tau2_by_one() {
        // (1-ξ)^{-2} / (1-ξ)^{-1} = (1-ξ)^{-1}: dividing τ_2 by τ_1 gives τ_1.
        let t2 = MultFn::<f64>::tau_rho(cx(2.0, 0.0));
        let g = t2.decompose_g(cx(1.0, 0.0));
        for p in [2u64, 3, 5, 7] {
            assert!((g.local(p, 1) - cx(1.0, 0.0)).norm() < 1e-12);
            assert!((g.local(p, 2) - cx(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn decompose_first_order_identity() {
        let rho = cx(0.75, 0.3);
        let f = MultFn::from_local_rule("test", |p, nu| {
            cx::<f64>(1.0 / (1.0 + (p % 17) as f64), 0.0).powu(nu)
        });
        let g = f.decompose_g(rho);
        let primes = crate::primes::sieve_primes(550, &Default::default()).unwrap();
        for &p in primes.primes().iter().take(100) {
            let expected = f.local(p, 1) - rho;
            assert!((g.local(p, 1) - expected).norm() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn exp_multiplicative_examples() {
        let zero = MultFn::<f64>::exp_multiplicative("zero", |_| cx(0.0, 0.0));
        for n in 2..=100u64 {
            assert_eq!(zero.eval_trial(n).unwrap(), cx(0.0, 0.0));
        }
        let ones = MultFn::<f64>::exp_multiplicative("ones", |_| cx(1.0, 0.0));
        assert!((ones.local(3, 2).re - 0.5).abs() < 1e-15);
        assert!((ones.local(3, 3).re - 1.0 / 6.0).abs() < 1e-15);
        let g = MultFn::<f64>::exp_multiplicative("g", |p| {
            if p == 2 {
                cx(3.0, 0.0)
            } else {
                cx(0.0, 0.0)
            }
        });
        assert!((g.eval_trial(8).unwrap().re - 4.5).abs() < 1e-14);
    }

    #[test]
    fn m_rho_completion_examples() {
        // prime values equal to rho: the correction vanishes, f = tau_rho.
        let rho = cx(0.8, 0.1);
        let f = MultFn::<f64>::m_rho_completion("f", move |_| rho, rho);
        let tau = MultFn::<f64>::tau_rho(rho);
        for n in 1..=500u64 {
            assert!((f.eval_trial(n).unwrap() - tau.eval_trial(n).unwrap()).norm() < 1e-12);
        }
        // rho = 1, f(p) = 2: f(p^2) = tau_1(p^2) + tau_1(p) * 1 = 2.
        let f2 = MultFn::<f64>::m_rho_completion("f2", |_| cx(2.0, 0.0), cx(1.0, 0.0));
        assert!((f2.local(5, 2).re - 2.0).abs() < 1e-13);
        // The decomposition is squarefree-supported.
        let g = f2.decompose_g(cx(1.0, 0.0));
        let primes = crate::primes::sieve_primes(250, &Default::default()).unwrap();
        for &p in primes.primes().iter().take(50) {
            for nu in 2..=5u32 {
                assert!(g.local(p, nu).norm() < 1e-10, "p={p} nu={nu}");
            }
        }
    }

    #[test]
    fn m_rho_zero_rho_squarefree_support() {
        let f = MultFn::<f64>::m_rho_completion("f", |p| cx(1.0 / p as f64, 0.0), cx(0.0, 0.0));
        // tau_0(p^{ν-1}) = 0 for ν ≥ 2, so f vanishes on non-squarefree parts.
        assert!(f.local(3, 2).norm() < 1e-15);
        assert!((f.local(3, 1).re - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn catalog_g0_values() {
        let g0 = catalog::<f64>(
            "g0",
            &CatalogParams {
                a: Some(0.5),
                ..Default::default()
            },
        )
        .unwrap();
        let expected = 1.0 / 2f64.ln();
        assert!((g0.eval_trial(4).unwrap().re - expected).abs() < 1e-12);
        assert!((expected - 1.4426950408889634).abs() < 1e-12);
    }

    #[test]
    fn catalog_g0_rejects_bad_a() {
        for a in [0.0, 1.0, 1.5, -0.2] {
            let err = catalog::<f64>(
                "g0",
                &CatalogParams {
                    a: Some(a),
                    ..Default::default()
                },
            )
            .unwrap_err();
            assert!(matches!(err, Error::Usage(_)));
        }
    }

    #[test]
    fn catalog_unknown_name() {
        let err = catalog::<f64>("zeta", &CatalogParams::default()).unwrap_err();
        assert!(err.to_string().contains("unknown catalog function"));
    }

    #[test]
    fn catalog_twisted_modulus() {
        let g0 = catalog::<f64>(
            "g0",
            &CatalogParams {
                a: Some(0.5),
                ..Default::default()
            },
        )
        .unwrap();
        let gt = catalog::<f64>(
            "g0_twisted",
            &CatalogParams {
                a: Some(0.5),
                ..Default::default()
            },
        )
        .unwrap();
        for n in 2..=2000u64 {
            let m = gt.eval_trial(n).unwrap().norm();
            let g = g0.eval_trial(n).unwrap().re;
            assert!((m - g).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn resonance_geometry() {
        // C = 2: x_1 = e^{e^2} ≈ 1618.18, log x_2 = e^4 ≈ 54.598.
        assert!((resonance_x(2.0, 1) - 1618.177).abs() < 1e-2);
        assert!((resonance_x(2.0, 2).ln() - 54.598150033144236).abs() < 1e-10);
        let a = 0.3;
        assert!((resonance_t(2.0, a, 1) - 54.598150033144236f64.powf(a)).abs() < 1e-10);
        // Block index: p below x_1 has none; p in (x_1, x_2] is block 1.
        assert_eq!(resonance_block(2.0, 1613), None);
        assert_eq!(resonance_block(2.0, 1619), Some(1));
    }

    #[test]
    fn resonance_catalog_zero_below_x1() {
        let f = catalog::<f64>(
            "resonance",
            &CatalogParams {
                a: Some(0.2),
                r: Some(0.9),
                c: Some(1.5),
                ..Default::default()
            },
        )
        .unwrap();
        // x_1 ≈ 88.38
        assert_eq!(f.local(83, 1), cx(0.0, 0.0));
        let v = f.local(89, 1);
        assert!((v.norm() - 0.9).abs() < 1e-12);
        // real variant takes values ±r on primes
        let fr = catalog::<f64>(
            "resonance",
            &CatalogParams {
                a: Some(0.2),
                r: Some(0.9),
                c: Some(1.5),
                real_variant: true,
                ..Default::default()
            },
        )
        .unwrap();
        let vr = fr.local(89, 1);
        assert!(vr.im == 0.0 && (vr.re.abs() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn multiplicativity_on_coprime_pairs() {
        let fns: Vec<MultFn<f64>> = vec![
            catalog(
                "g0",
                &CatalogParams {
                    a: Some(0.5),
                    ..Default::default()
                },
            )
            .unwrap(),
            MultFn::tau_rho(cx(0.5, 1.0)),
            hashed_int_fn(7).convolve(&MultFn::moebius()),
        ];
        for f in &fns {
            for m in 1..=60u64 {
                for n in 1..=60u64 {
                    if num_integer_gcd(m, n) == 1 {
                        let lhs = f.eval_trial(m * n).unwrap();
                        let rhs = f.eval_trial(m).unwrap() * f.eval_trial(n).unwrap();
                        assert!((lhs - rhs).norm() < 1e-10, "{} at ({m},{n})", f.label());
                    }
                }
            }
        }
    }

    fn num_integer_gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = b;
            b = a % b;
            a = t;
        }
        a
    }

    #[test]
    fn local_factor_series_shape() {
        let f = MultFn::<f64>::tau_rho(cx(2.0, 0.0));
        let lf = f.local_factor(3, 4);
        assert_eq!(lf.prime, 3);
        assert_eq!(lf.series.coeff(0), cx(1.0, 0.0));
        assert_eq!(lf.series.coeff(2), cx(3.0, 0.0)); // tau_2(9) = 3
        assert!(truncation_order_for(1u64 << 20) >= 22);
    }

    #[test]
    fn catalog_json_roundtrip() {
        let v: serde_json::Value =
            serde_json::from_str(r#"{"name": "tau_rho", "params": {"rho": "2+0i"}}"#).unwrap();
        let f = catalog_from_json::<f64>(&v).unwrap();
        assert!((f.eval_trial(6).unwrap().re - 4.0).abs() < 1e-12);
        let bad: serde_json::Value =
            serde_json::from_str(r#"{"name": "tau_rho", "params": {"rho": "2+"}}"#).unwrap();
        let err = catalog_from_json::<f64>(&bad).unwrap_err();
        assert!(err.to_string().contains("rho"), "error names the field: {err}");
    }
}
