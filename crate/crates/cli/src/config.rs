//! JSON run configurations. Unknown keys are rejected, and the resolved
//! configuration (defaults filled in) is echoed into every output JSON so
//! a run is fully reproducible from its artifacts.

use multsum::error::{Error, Result};
use multsum::multfun::{catalog_from_json, CatalogParams, MultFn};
use multsum::report::parse_complex;
use multsum::scalar::Cx;
use serde::{Deserialize, Serialize};

/// A function: either a bare catalog name (parameters pulled from the
/// surrounding config) or a structured spec, possibly a composition tree.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionField {
    Name(String),
    Spec(serde_json::Value),
}

/// Parametric prime-value families for functions defined by their values
/// on primes: `value(p) = offset + scale · base(p)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeValueSpec {
    /// "constant" | "inv_log_pow" | "inv_prime_pow"
    pub form: String,
    #[serde(default)]
    pub exponent: f64,
    #[serde(default = "one_string")]
    pub scale: String,
    #[serde(default = "zero_string")]
    pub offset: String,
}

fn one_string() -> String {
    "1".into()
}
fn zero_string() -> String {
    "0".into()
}

impl PrimeValueSpec {
    pub fn build(&self) -> Result<impl Fn(u64) -> Cx<f64> + Send + Sync + 'static> {
        let (sre, sim) =
            parse_complex(&self.scale).map_err(|e| Error::Usage(format!("field scale: {e}")))?;
        let (ore, oim) =
            parse_complex(&self.offset).map_err(|e| Error::Usage(format!("field offset: {e}")))?;
        let scale = Cx::new(sre, sim);
        let offset = Cx::new(ore, oim);
        let exponent = self.exponent;
        let form = match self.form.as_str() {
            "constant" => 0u8,
            "inv_log_pow" => 1,
            "inv_prime_pow" => 2,
            other => {
                return Err(Error::Usage(format!(
                    "unknown prime-value form '{other}' (constant, inv_log_pow, inv_prime_pow)"
                )))
            }
        };
        Ok(move |p: u64| {
            let base = match form {
                0 => 1.0,
                1 => (p as f64).ln().powf(-exponent),
                _ => (p as f64).powf(-exponent),
            };
            offset + scale * base
        })
    }
}

/// Build a function from its JSON form. Composition ops:
/// `convolve`, `local_divide`, `decompose_g`, `exp_multiplicative`, `m_rho`.
pub fn build_function(field: &FunctionField, fallback: &CatalogParams) -> Result<MultFn<f64>> {
    match field {
        FunctionField::Name(name) => catalog_named(name, fallback),
        FunctionField::Spec(value) => build_from_value(value, fallback),
    }
}

fn catalog_named(name: &str, params: &CatalogParams) -> Result<MultFn<f64>> {
    multsum::multfun::catalog(name, params)
}

fn build_from_value(value: &serde_json::Value, fallback: &CatalogParams) -> Result<MultFn<f64>> {
    if let Some(op) = value.get("op").and_then(|v| v.as_str()) {
        let rho_of = |v: &serde_json::Value| -> Result<Cx<f64>> {
            let s = v
                .get("rho")
                .and_then(|r| r.as_str())
                .ok_or_else(|| Error::Usage(format!("op '{op}' requires a string field rho")))?;
            let (re, im) =
                parse_complex(s).map_err(|e| Error::Usage(format!("field rho: {e}")))?;
            Ok(Cx::new(re, im))
        };
        let side = |key: &str| -> Result<MultFn<f64>> {
            let sub = value
                .get(key)
                .ok_or_else(|| Error::Usage(format!("op '{op}' requires field '{key}'")))?;
            build_from_value(sub, fallback)
        };
        return match op {
            "convolve" => Ok(side("left")?.convolve(&side("right")?)),
            "local_divide" => Ok(side("left")?.local_divide(&side("right")?)),
            "decompose_g" => Ok(side("left")?.decompose_g(rho_of(value)?)),
            "exp_multiplicative" => {
                let spec: PrimeValueSpec = serde_json::from_value(
                    value
                        .get("prime_values")
                        .cloned()
                        .ok_or_else(|| Error::Usage("exp_multiplicative requires prime_values".into()))?,
                )?;
                Ok(MultFn::exp_multiplicative("exp_multiplicative", spec.build()?))
            }
            "m_rho" => {
                let spec: PrimeValueSpec = serde_json::from_value(
                    value
                        .get("prime_values")
                        .cloned()
                        .ok_or_else(|| Error::Usage("m_rho requires prime_values".into()))?,
                )?;
                Ok(MultFn::m_rho_completion(
                    "m_rho",
                    spec.build()?,
                    rho_of(value)?,
                ))
            }
            other => Err(Error::Usage(format!("unknown function op '{other}'"))),
        };
    }
    if value.get("name").is_some() {
        return catalog_from_json(value);
    }
    Err(Error::Usage(
        "function spec needs either a catalog 'name' or an 'op'".into(),
    ))
}

/// Grid: explicit points or a geometric specification in log x.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Points(Vec<u64>),
    Geometric { from: u64, to: u64, points: usize },
}

impl GridSpec {
    pub fn resolve(&self) -> Result<Vec<u64>> {
        match self {
            GridSpec::Points(xs) => {
                if xs.is_empty() {
                    return Err(Error::Usage("grid must be nonempty".into()));
                }
                Ok(xs.clone())
            }
            GridSpec::Geometric { from, to, points } => {
                if *points < 2 || to <= from || *from < 3 {
                    return Err(Error::Usage(format!(
                        "geometric grid needs points >= 2 and to > from >= 3, got from={from}, to={to}, points={points}"
                    )));
                }
                Ok(multsum::experiments::geometric_grid(*from, *to, *points))
            }
        }
    }
}

fn default_true() -> bool {
    true
}

/// Shared function-parameter block: complex rho as an "a+bi" string plus
/// the real parameters the catalog understands.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default)]
    pub real_flag: bool,
}

impl FunctionParams {
    pub fn rho_value(&self) -> Result<Cx<f64>> {
        let s = self
            .rho
            .as_deref()
            .ok_or_else(|| Error::Usage("missing field rho".into()))?;
        let (re, im) = parse_complex(s).map_err(|e| Error::Usage(format!("field rho: {e}")))?;
        Ok(Cx::new(re, im))
    }

    pub fn catalog_params(&self) -> Result<CatalogParams> {
        let rho = match self.rho.as_deref() {
            None => None,
            Some(s) => {
                Some(parse_complex(s).map_err(|e| Error::Usage(format!("field rho: {e}")))?)
            }
        };
        Ok(CatalogParams {
            rho,
            a: self.a,
            r: self.r,
            c: self.c,
            real_variant: self.real_flag,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumConfig {
    pub f: FunctionField,
    #[serde(flatten)]
    pub params: FunctionParams,
    pub grid: GridSpec,
    #[serde(default = "default_true")]
    pub kahan: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpandConfig {
    pub f: FunctionField,
    #[serde(flatten)]
    pub params: FunctionParams,
    /// "series" (coefficient assembly), "derivative", or "both".
    #[serde(default = "default_route")]
    pub route: String,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(rename = "H", skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    /// Fixed friable cutoff; adaptive when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<u64>,
}

fn default_route() -> String {
    "both".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub f: FunctionField,
    #[serde(flatten)]
    pub params: FunctionParams,
    pub grid: GridSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FriableConfig {
    /// Exponent τ of the showcase terms n^{-1-iτ}.
    #[serde(default = "default_tau")]
    pub tau: f64,
    pub y: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// "multiplicative" (local closure; reaches the friable limit) or
    /// "enumerate" (ascending black-box enumeration within budget).
    #[serde(default = "default_mode")]
    pub mode: String,
}

fn default_tau() -> f64 {
    1.0
}
fn default_budget() -> u64 {
    1_000_000
}
fn default_mode() -> String {
    "multiplicative".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisConfig {
    pub f: FunctionField,
    #[serde(flatten)]
    pub params: FunctionParams,
    pub grid: GridSpec,
    #[serde(default = "default_z_fraction")]
    pub z_fraction: f64,
    /// When set, use the power-law window z = x^{1-alpha} instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

fn default_z_fraction() -> f64 {
    0.1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(flatten)]
    pub params: FunctionParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<FunctionField>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max: Option<u64>,
    /// Seed for the synthetic decay-fit experiment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Verdict slack overrides.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_window: Option<(f64, f64)>,
}

pub fn from_json_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Usage(format!("config: {e}")))
}
