//! Wire formats: the `a+bi` complex syntax, CSV emission for summation
//! rows, the coefficient-report JSON, and experiment verdict JSON.
//!
//! Floating-point output is written with 17 significant digits so values
//! round-trip through text exactly.

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};
use crate::summation::SummationResult;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Parse `"a+bi"` (optional spaces, `i` suffix on the imaginary part).
///
/// Accepted forms: `"2"`, `"-1.5e-3"`, `"2+3i"`, `"2-3i"`, `"2+i"`, `"i"`,
/// `"-i"`, `"3i"`, `"1+2.5 i"`.
pub fn parse_complex(input: &str) -> std::result::Result<(f64, f64), String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let parse_real = |t: &str| -> std::result::Result<f64, String> {
        t.parse::<f64>()
            .map_err(|_| format!("malformed complex literal '{input}'"))
    };
    if !s.ends_with('i') {
        return Ok((parse_real(&s)?, 0.0));
    }
    let t = &s[..s.len() - 1];
    // Find the sign splitting real and imaginary parts: the last '+'/'-'
    // that is not leading and not an exponent sign.
    let bytes = t.as_bytes();
    let mut split = None;
    for idx in (1..t.len()).rev() {
        let c = bytes[idx] as char;
        if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
            split = Some(idx);
            break;
        }
    }
    let imag_of = |t: &str| -> std::result::Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => parse_real(other),
        }
    };
    match split {
        None => Ok((0.0, imag_of(t)?)),
        Some(idx) => Ok((parse_real(&t[..idx])?, imag_of(&t[idx..])?)),
    }
}

/// Render a complex value in the `a+bi` syntax accepted by [`parse_complex`].
pub fn format_complex(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

/// A float with 17 significant digits (round-trip safe).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn f64_of<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Complex value as a `[re, im]` pair for JSON reports.
pub fn complex_pair<T: Real>(z: Cx<T>) -> [f64; 2] {
    [f64_of(z.re), f64_of(z.im)]
}

/// Header of the summation CSV format.
pub const SUMMATION_CSV_HEADER: &str =
    "x,re_exact,im_exact,re_expansion,im_expansion,re_remainder,im_remainder,seconds";

/// Write summation rows as CSV. All floats carry 17 significant digits;
/// the `seconds` column is wall-clock timing and is the one column callers
/// should exclude when comparing runs byte-for-byte.
pub fn write_summation_csv<T: Real>(
    mut w: impl Write,
    rows: &[SummationResult<T>],
) -> Result<()> {
    writeln!(w, "{SUMMATION_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{:.6}",
            row.x,
            fmt_f64(f64_of(row.exact.re)),
            fmt_f64(f64_of(row.exact.im)),
            fmt_f64(f64_of(row.expansion.re)),
            fmt_f64(f64_of(row.expansion.im)),
            fmt_f64(f64_of(row.remainder.re)),
            fmt_f64(f64_of(row.remainder.im)),
            row.seconds,
        )?;
    }
    Ok(())
}

/// Serialized coefficient report:
/// `{rho, J, H, alpha[], nu[], gamma_g[] (with y and error), lambda[]}`,
/// complex numbers as `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub rho: [f64; 2],
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(rename = "H")]
    pub h: usize,
    pub alpha: Vec<[f64; 2]>,
    pub nu: Vec<[f64; 2]>,
    pub gamma_g: Vec<GammaGReport>,
    pub lambda: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaGReport {
    pub j: usize,
    pub y: u64,
    pub value: [f64; 2],
    pub error: f64,
}

/// One named check inside an experiment verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Experiment verdict: parameters, metrics, and pass/fail per check, with
/// the slack factors that were applied.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictReport {
    pub experiment: String,
    pub params: serde_json::Value,
    pub metrics: serde_json::Value,
    pub checks: Vec<CheckLine>,
    pub slack_factors: serde_json::Value,
    pub passed: bool,
}

impl VerdictReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        VerdictReport {
            experiment: experiment.into(),
            params: serde_json::Value::Null,
            metrics: serde_json::Value::Null,
            checks: Vec::new(),
            slack_factors: serde_json::Value::Null,
            passed: true,
        }
    }

    pub fn push_check(&mut self, name: impl Into<String>, passed: bool, detail: String) {
        self.passed &= passed;
        self.checks.push(CheckLine {
            name: name.into(),
            passed,
            detail,
        });
    }
}

/// Map an error to the CLI exit code contract.
pub fn exit_code_for(err: &Error) -> i32 {
    err.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_complex_forms() {
        assert_eq!(parse_complex("2").unwrap(), (2.0, 0.0));
        assert_eq!(parse_complex("-1.5e-3").unwrap(), (-0.0015, 0.0));
        assert_eq!(parse_complex("2+3i").unwrap(), (2.0, 3.0));
        assert_eq!(parse_complex("2-3i").unwrap(), (2.0, -3.0));
        assert_eq!(parse_complex("2+i").unwrap(), (2.0, 1.0));
        assert_eq!(parse_complex("i").unwrap(), (0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), (0.0, -1.0));
        assert_eq!(parse_complex("3i").unwrap(), (0.0, 3.0));
        assert_eq!(parse_complex("1 + 2.5 i").unwrap(), (1.0, 2.5));
        assert_eq!(parse_complex("1e2+1e-2i").unwrap(), (100.0, 0.01));
    }

    #[test]
    fn parse_complex_rejects_malformed() {
        for bad in ["2+", "", "2++3i", "abc", "1+2j"] {
            assert!(parse_complex(bad).is_err(), "should reject {bad:?}");
        }
    }

    #[test]
    fn format_parse_round_trip() {
        for &(re, im) in &[(0.5772156649015329, 0.0), (1.0, -2.25), (0.0, 1.0), (-3.5, 0.125)] {
            let s = format_complex(re, im);
            assert_eq!(parse_complex(&s).unwrap(), (re, im), "via {s}");
        }
    }

    #[test]
    fn fmt_f64_round_trips() {
        for &x in &[std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.2250738585072014e-308] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "via {s}");
        }
    }
}
