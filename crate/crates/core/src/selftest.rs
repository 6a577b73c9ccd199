//! The acceptance checks behind `multsum selftest` and the `acceptance`
//! integration suite. Each criterion returns a structured outcome with the
//! measured numbers in its detail string; the caller decides how to render
//! or assert them.
//!
//! Two checks are expected to print FAIL on every run at desk scale:
//! the friable-convergence factor (the distance to the friable limit decays
//! like 1/log y, so doubling the exponent of the cutoff halves it — a
//! factor 5 would need cutoffs beyond any enumerable range) and the
//! direct-series constant agreement in the g0 construction (the series
//! tail decays like 1/(A (log cutoff)^A) ≈ 35% at the largest cutoff the
//! budget allows). Their outcomes report the honest measurements.

use crate::expansion::{
    euler_product_lambda0, lambda_coeffs, lambda_via_derivative, nu_coeffs, t_rho_main_term,
    FriableCutoff,
};
use crate::experiments::{g0_run, geometric_grid, resonance_run, G0Slack, ResonanceSlack};
use crate::multfun::{catalog, CatalogParams, MultFn};
use crate::scalar::{cx, Cx};
use crate::series::{stieltjes, zeta_line};
use crate::summation::{
    friable_sum_multiplicative, omega_restricted_sum, summatory, summatory_multi, weighted_sum,
    SumOptions,
};
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    /// Named measured quantities, for downstream assertions and reports.
    pub metrics: Vec<(&'static str, f64)>,
}

fn outcome(
    id: u8,
    name: &'static str,
    started: Instant,
    passed: bool,
    detail: String,
) -> CriterionOutcome {
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        seconds: started.elapsed().as_secs_f64(),
        metrics: Vec::new(),
    }
}

fn fail_outcome(id: u8, name: &'static str, started: Instant, err: impl std::fmt::Display) -> CriterionOutcome {
    outcome(id, name, started, false, format!("errored: {err}"))
}

/// Named sub-second infrastructure check: the Stieltjes table regenerates
/// with certified bounds and the classical bracket for γ_0.
pub fn check_stieltjes_table() -> CriterionOutcome {
    let started = Instant::now();
    let name = "stieltjes-table";
    match stieltjes::<f64>(20) {
        Err(e) => fail_outcome(0, name, started, e),
        Ok(t) => {
            let g0_ok = t.gamma(0) > 0.577215 && t.gamma(0) < 0.577216;
            let bounds_ok = (0..=20).all(|k| t.error_bound(k) <= 1e-12 && t.gamma(k).is_finite());
            outcome(
                0,
                name,
                started,
                g0_ok && bounds_ok,
                format!(
                    "gamma_0 = {:.12}, max certified bound = {:.2e}",
                    t.gamma(0),
                    (0..=20).map(|k| t.error_bound(k)).fold(0.0f64, f64::max)
                ),
            )
        }
    }
}

/// Criterion 1: divisor-function reproduction. The remainder of M(x; τ_2)
/// against the two-term main term (coefficients from the ν machinery, not
/// hard-coded) stays below 3 sqrt(x) on 1e4..1e7.
pub fn criterion_1() -> CriterionOutcome {
    let started = Instant::now();
    let name = "dirichlet-divisor";
    let run = || -> crate::Result<(bool, String)> {
        let t2 = MultFn::<f64>::tau_rho(cx(2.0, 0.0));
        let xs = [10_000u64, 100_000, 1_000_000, 10_000_000];
        let exact = &summatory_multi(&[&t2], &xs, &SumOptions::default())?[0];
        let mut worst = 0.0f64;
        let mut ok = true;
        for (&x, &e) in xs.iter().zip(exact) {
            let main = t_rho_main_term::<f64>(cx(2.0, 0.0), x as f64, 1)?;
            let rem = (e - main).norm();
            let scaled = rem / (x as f64).sqrt();
            worst = worst.max(scaled);
            ok &= scaled <= 3.0;
        }
        Ok((ok, format!("max |remainder|/sqrt(x) = {worst:.4} (bound 3)")))
    };
    match run() {
        Ok((ok, detail)) => outcome(1, name, started, ok, detail),
        Err(e) => fail_outcome(1, name, started, e),
    }
}

fn route_suite() -> Vec<(String, MultFn<f64>, Cx<f64>)> {
    let inv_p2 = |p: u64| cx::<f64>(1.0 / (p as f64 * p as f64), 0.0);
    vec![
        ("tau_2".into(), MultFn::tau_rho(cx(2.0, 0.0)), cx(2.0, 0.0)),
        ("tau_half".into(), MultFn::tau_rho(cx(0.5, 0.0)), cx(0.5, 0.0)),
        ("tau_1+i".into(), MultFn::tau_rho(cx(1.0, 1.0)), cx(1.0, 1.0)),
        (
            "m_rho(1/2, p^-2)".into(),
            MultFn::m_rho_completion("mrho", move |p| cx::<f64>(0.5, 0.0) + inv_p2(p), cx(0.5, 0.0)),
            cx(0.5, 0.0),
        ),
        (
            "exp_mult(3/2, p^-2)".into(),
            MultFn::exp_multiplicative("expm", move |p| cx::<f64>(1.5, 0.0) + inv_p2(p)),
            cx(1.5, 0.0),
        ),
    ]
}

/// Criterion 2: the two λ_j routes agree to 1e-4 for the five-function
/// suite, j ≤ 2.
pub fn criterion_2() -> CriterionOutcome {
    let started = Instant::now();
    let name = "route-equivalence";
    let run = || -> crate::Result<(bool, String)> {
        let mut worst = 0.0f64;
        let mut worst_at = String::new();
        for (label, f, rho) in route_suite() {
            let series = lambda_coeffs(&f, rho, 2, FriableCutoff::default())?;
            let deriv = lambda_via_derivative(&f, rho, 2, 200_000)?;
            for j in 0..=2 {
                let d = (series[j] - deriv[j]).norm();
                if d > worst {
                    worst = d;
                    worst_at = format!("{label}, j = {j}");
                }
            }
        }
        Ok((
            worst <= 1e-4,
            format!("max |lambda_series - lambda_derivative| = {worst:.2e} at {worst_at} (tol 1e-4)"),
        ))
    };
    match run() {
        Ok((ok, detail)) => outcome(2, name, started, ok, detail),
        Err(e) => fail_outcome(2, name, started, e),
    }
}

/// Criterion 3: nonnegative main-term ratio for τ_2 via the Euler-product
/// λ_0: within [0.8, 1.2] at 1e7 and strictly closer to 1 than at 1e4.
pub fn criterion_3() -> CriterionOutcome {
    let started = Instant::now();
    let name = "nonneg-ratio";
    let run = || -> crate::Result<(bool, String)> {
        let t2 = MultFn::<f64>::tau_rho(cx(2.0, 0.0));
        let (l0, _) = euler_product_lambda0(&t2, 2.0, 1e-8)?;
        let l0 = l0.re;
        let xs = [10_000u64, 10_000_000];
        let exact = &summatory_multi(&[&t2], &xs, &SumOptions::default())?[0];
        let ratio = |x: u64, m: Cx<f64>| m.re / (l0 * x as f64 * (x as f64).ln());
        let r_small = ratio(xs[0], exact[0]);
        let r_big = ratio(xs[1], exact[1]);
        let ok = (0.8..=1.2).contains(&r_big) && (r_big - 1.0).abs() < (r_small - 1.0).abs();
        Ok((
            ok,
            format!("ratio(1e4) = {r_small:.6}, ratio(1e7) = {r_big:.6}, lambda0 = {l0:.6}"),
        ))
    };
    match run() {
        Ok((ok, detail)) => outcome(3, name, started, ok, detail),
        Err(e) => fail_outcome(3, name, started, e),
    }
}

/// Criterion 4: friable-summability showcase. Measures the distance of the
/// friable sums of n^{-1-i} to ζ(1+i) at cutoffs 1e3 and 1e6 and applies
/// the stated factor-5 improvement requirement. The true convergence rate
/// is 1/log y (measured ratio ≈ 1.9), so the stated factor is expected to
/// fail; the detail carries the honest numbers.
pub fn criterion_4() -> CriterionOutcome {
    let started = Instant::now();
    let name = "friable-zeta";
    let run = || -> crate::Result<(bool, String, Vec<(&'static str, f64)>)> {
        let target = zeta_line::<f64>(1.0, 1e-12)?;
        let local = |p: u64, nu: u32| {
            let ln = (p as f64).ln() * nu as f64;
            (cx(-1.0, -1.0) * ln).exp()
        };
        let d3 = (friable_sum_multiplicative::<f64>(local, 1_000)?.final_value() - target).norm();
        let d6 = (friable_sum_multiplicative::<f64>(local, 1_000_000)?.final_value() - target).norm();
        let ratio = d3 / d6;
        let ok = d6.is_finite() && d6 * 5.0 <= d3;
        Ok((
            ok,
            format!(
                "|S(1e3) - zeta(1+i)| = {d3:.6}, |S(1e6) - zeta(1+i)| = {d6:.6}, improvement factor {ratio:.3} (required 5)"
            ),
            vec![("d_1e3", d3), ("d_1e6", d6), ("improvement_factor", ratio)],
        ))
    };
    match run() {
        Ok((ok, detail, metrics)) => {
            let mut o = outcome(4, name, started, ok, detail);
            o.metrics = metrics;
            o
        }
        Err(e) => fail_outcome(4, name, started, e),
    }
}

/// Criterion 5: the g0 construction at A = 0.5, r = 0.8 on 1e6..1e8:
/// normalized-spread clause plus the direct-series constant agreement.
/// The second clause cannot close at desk scale (both quantities carry
/// O((log)^{-A}) truncation of opposite size); expected to print FAIL with
/// the measured levels.
pub fn criterion_5() -> CriterionOutcome {
    let started = Instant::now();
    let name = "counterexample-5.1";
    let run = || -> crate::Result<(bool, String, Vec<(&'static str, f64)>)> {
        let xs = geometric_grid(1_000_000, 100_000_000, 5);
        let run = g0_run::<f64>(0.5, 0.8, &xs, G0Slack::default(), &SumOptions::default())?;
        let spread_ok = run.spread <= 0.15;
        let dev_series = (run.level - run.c_series_partial).abs() / run.c_series_partial;
        let series_ok = dev_series <= 0.10;
        let dev_product = (run.level - run.c_product_tail).abs() / run.c_product_tail;
        Ok((
            spread_ok && series_ok,
            format!(
                "spread = {:.4} (max 0.15); level = {:.3} vs series C(<=1e7) = {:.3} (dev {:.3}, max 0.10) \
                 vs product+tail C = {:.3} (dev {:.3})",
                run.spread, run.level, run.c_series_partial, dev_series, run.c_product_tail, dev_product
            ),
            vec![
                ("spread", run.spread),
                ("level", run.level),
                ("c_series_partial", run.c_series_partial),
                ("c_product_tail", run.c_product_tail),
                ("dev_series", dev_series),
                ("dev_product", dev_product),
            ],
        ))
    };
    match run() {
        Ok((ok, detail, metrics)) => {
            let mut o = outcome(5, name, started, ok, detail);
            o.metrics = metrics;
            o
        }
        Err(e) => fail_outcome(5, name, started, e),
    }
}

/// Criterion 6: the resonance construction at C = 1.5, r = 0.9, A = 0.2.
pub fn criterion_6() -> CriterionOutcome {
    let started = Instant::now();
    let name = "counterexample-5.2";
    let run = || -> crate::Result<(bool, String)> {
        let opts = SumOptions::default();
        let complex = resonance_run::<f64>(0.2, 0.9, 1.5, false, 100_000, ResonanceSlack::default(), &opts)?;
        let real = resonance_run::<f64>(0.2, 0.9, 1.5, true, 100_000, ResonanceSlack::default(), &opts)?;
        let s1_ok = complex.ratio >= 0.5 && complex.ratio <= 2.0;
        // Real-variant S_1 against 2/π times the complex prediction.
        let real_ratio = real.s_h.last().unwrap().1 / real.prediction;
        let real_ok = (real_ratio - 1.0).abs() <= 0.30;
        let contrast_ok = complex
            .verdict
            .checks
            .iter()
            .find(|c| c.name == "short_interval_residual_spikes")
            .map(|c| c.passed)
            .unwrap_or(false);
        let bounded_ok = complex
            .verdict
            .checks
            .iter()
            .find(|c| c.name == "full_sum_residual_bounded")
            .map(|c| c.passed)
            .unwrap_or(false);
        Ok((
            s1_ok && real_ok && contrast_ok && bounded_ok,
            format!(
                "S_1/prediction = {:.4} (window [0.5, 2]); real variant vs (2/pi) prediction = {:.4} (tol 30%); \
                 residual contrast ok = {contrast_ok}",
                complex.ratio, real_ratio
            ),
        ))
    };
    match run() {
        Ok((ok, detail)) => outcome(6, name, started, ok, detail),
        Err(e) => fail_outcome(6, name, started, e),
    }
}

fn oracle_catalog() -> Vec<(String, MultFn<f64>)> {
    let mk = |name: &str, p: CatalogParams| -> (String, MultFn<f64>) {
        (name.to_string(), catalog::<f64>(name, &p).unwrap())
    };
    let g0p = CatalogParams {
        a: Some(0.5),
        ..Default::default()
    };
    let res = CatalogParams {
        a: Some(0.2),
        r: Some(0.9),
        c: Some(1.5),
        real_variant: false,
        ..Default::default()
    };
    let res_real = CatalogParams {
        real_variant: true,
        ..res
    };
    vec![
        mk("unit", CatalogParams::default()),
        mk("one", CatalogParams::default()),
        mk("moebius", CatalogParams::default()),
        (
            "tau_rho(2)".into(),
            MultFn::tau_rho(cx(2.0, 0.0)),
        ),
        (
            "tau_rho(1/2)".into(),
            MultFn::tau_rho(cx(0.5, 0.0)),
        ),
        (
            "tau_rho(1+i)".into(),
            MultFn::tau_rho(cx(1.0, 1.0)),
        ),
        ("g0(0.5)".into(), catalog::<f64>("g0", &g0p).unwrap()),
        (
            "g0_twisted(0.5)".into(),
            catalog::<f64>("g0_twisted", &g0p).unwrap(),
        ),
        ("resonance".into(), catalog::<f64>("resonance", &res).unwrap()),
        (
            "resonance_real".into(),
            catalog::<f64>("resonance", &res_real).unwrap(),
        ),
    ]
}

fn trial_omega(mut n: u64) -> u32 {
    let mut count = 0;
    while n > 1 {
        let p = crate::primes::trial_spf(n);
        while n % p == 0 {
            n /= p;
        }
        count += 1;
    }
    count
}

/// Criterion 7: summatory, convolve, local_divide, omega-restricted and
/// log-weighted sums all match brute force on n ≤ 1e4 for every catalog
/// function (tolerance 1e-9; exact where integer-valued).
pub fn criterion_7() -> CriterionOutcome {
    let started = Instant::now();
    let name = "oracle-equivalence";
    let run = || -> crate::Result<(bool, String)> {
        let x = 10_000u64;
        let opts = SumOptions::default();
        let mut worst = 0.0f64;
        let mut worst_at = String::new();
        let mut track = |d: f64, what: String| {
            if d > worst {
                worst = d;
                worst_at = what;
            }
        };
        let t2 = MultFn::<f64>::tau_rho(cx(2.0, 0.0));
        for (label, f) in oracle_catalog() {
            // Brute per-n values once.
            let vals: Vec<Cx<f64>> = (1..=x).map(|n| f.eval_trial(n).unwrap()).collect();
            // summatory
            let mut brute = cx(0.0, 0.0);
            for &v in &vals {
                brute += v;
            }
            let got = summatory(&f, x, &opts)?;
            let d = (got - brute).norm();
            if f.is_integer_valued() {
                assert_eq!(got.re, brute.re, "integer summatory must be exact ({label})");
            }
            track(d, format!("summatory[{label}]"));
            // weighted (j = 1, harmonic)
            let mut brute_w = cx(0.0, 0.0);
            for (i, &v) in vals.iter().enumerate() {
                let n = (i + 1) as f64;
                brute_w += v * n.ln() / n;
            }
            let got_w = weighted_sum(&f, x, 1, true, &opts)?;
            track((got_w - brute_w).norm(), format!("weighted[{label}]"));
            // omega-restricted (k = 2, j = 0)
            let mut brute_o = cx(0.0, 0.0);
            for (i, &v) in vals.iter().enumerate() {
                if trial_omega((i + 1) as u64) == 2 {
                    brute_o += v;
                }
            }
            let got_o = omega_restricted_sum(&f, x, 2, 0, &opts)?;
            track((got_o - brute_o).norm(), format!("omega[{label}]"));
            // convolve with tau_2 against the divisor-sum oracle, and the
            // local-divide round trip, on a subsample.
            let conv = f.convolve(&t2);
            let h = f.local_divide(&t2);
            let back = t2.convolve(&h);
            for n in (1..=x).step_by(97) {
                let mut oracle = cx(0.0, 0.0);
                let mut d_ = 1u64;
                while d_ * d_ <= n {
                    if n % d_ == 0 {
                        oracle += vals[(d_ - 1) as usize] * t2.eval_trial(n / d_).unwrap();
                        if d_ != n / d_ {
                            oracle += vals[(n / d_ - 1) as usize] * t2.eval_trial(d_).unwrap();
                        }
                    }
                    d_ += 1;
                }
                track(
                    (conv.eval_trial(n).unwrap() - oracle).norm(),
                    format!("convolve[{label}] at {n}"),
                );
                track(
                    (back.eval_trial(n).unwrap() - vals[(n - 1) as usize]).norm(),
                    format!("divide-roundtrip[{label}] at {n}"),
                );
            }
        }
        Ok((
            worst <= 1e-9,
            format!("max deviation from brute force = {worst:.2e} at {worst_at} (tol 1e-9)"),
        ))
    };
    match run() {
        Ok((ok, detail)) => outcome(7, name, started, ok, detail),
        Err(e) => fail_outcome(7, name, started, e),
    }
}

/// Criterion 8: degeneracies. Nonpositive-integer ϱ kills every λ_j; the
/// τ_1 main term is exactly x; ν_h vanishes for h ≥ k at integer ϱ = k.
pub fn criterion_8() -> CriterionOutcome {
    let started = Instant::now();
    let name = "degeneracy";
    let run = || -> crate::Result<(bool, String)> {
        let mut ok = true;
        let mut notes = Vec::new();
        for k in [0i32, -1, -2] {
            let rho = cx(k as f64, 0.0);
            let f = MultFn::<f64>::tau_rho(rho);
            let lam = lambda_coeffs(&f, rho, 3, FriableCutoff::default())?;
            let all_zero = lam.iter().all(|&l| l == cx(0.0, 0.0));
            ok &= all_zero;
            if !all_zero {
                notes.push(format!("lambda(rho = {k}) nonzero"));
            }
        }
        let x = 9_999_991.0f64;
        let main = t_rho_main_term::<f64>(cx(1.0, 0.0), x, 5)?;
        let exact_x = main == cx(x, 0.0);
        ok &= exact_x;
        if !exact_x {
            notes.push(format!("T_1 main term {main} != x"));
        }
        for k in 1..=3usize {
            let nu = nu_coeffs::<f64>(cx(k as f64, 0.0), 6)?;
            let zeros = nu.iter().skip(k).all(|&v| v == cx(0.0, 0.0));
            ok &= zeros;
            if !zeros {
                notes.push(format!("nu(rho = {k}) has nonzero tail"));
            }
        }
        let detail = if notes.is_empty() {
            "all-zero lambda at rho in {0,-1,-2}; T_1 main term exactly x; nu tails vanish at integer rho".into()
        } else {
            notes.join("; ")
        };
        Ok((ok, detail))
    };
    match run() {
        Ok((ok, detail)) => outcome(8, name, started, ok, detail),
        Err(e) => fail_outcome(8, name, started, e),
    }
}

/// Run the acceptance checks; `quick` restricts to the sub-second subset.
pub fn run_all(quick: bool) -> Vec<CriterionOutcome> {
    if quick {
        vec![check_stieltjes_table(), criterion_8()]
    } else {
        vec![
            check_stieltjes_table(),
            criterion_1(),
            criterion_2(),
            criterion_3(),
            criterion_4(),
            criterion_5(),
            criterion_6(),
            criterion_7(),
            criterion_8(),
        ]
    }
}

/// Render outcomes as the fixed-width table the CLI prints.
pub fn format_table(outcomes: &[CriterionOutcome]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<4} {:<22} {:<6} {:>9}  {}\n",
        "id", "criterion", "state", "seconds", "detail"
    ));
    for o in outcomes {
        out.push_str(&format!(
            "{:<4} {:<22} {:<6} {:>9.3}  {}\n",
            o.id,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.seconds,
            o.detail
        ));
    }
    out
}
