//! Summation and asymptotic analysis of complex multiplicative functions.
//!
//! The crate has three layers:
//!
//! 1. A sieve core ([`primes`], [`summation`]) that computes exact partial
//!    sums `M(x; f) = Σ_{n ≤ x} f(n)` for complex-valued multiplicative
//!    functions by streaming smallest-prime-factor segments.
//! 2. An algebra of multiplicative functions ([`multfun`]) built on local
//!    Euler-factor power series, and the complex series / special-function
//!    toolbox that supports it ([`series`]).
//! 3. The Selberg–Delange expansion machinery ([`expansion`]) producing the
//!    coefficient families of `M(x; f) ≈ x (log x)^{ϱ-1} Σ_j λ_j / (log x)^j`,
//!    plus desk-scale experiments ([`experiments`]) that compare exact sums
//!    with these expansions.
//!
//! All numeric kernels are generic over the scalar type through the [`Real`]
//! trait (`f32` or `f64`); the `*64` aliases at the crate root pin the
//! double-precision instantiations used by the CLI and the self-test suite.

pub mod error;
pub mod expansion;
pub mod experiments;
pub mod multfun;
pub mod primes;
pub mod report;
pub mod scalar;
pub mod selftest;
pub mod series;
pub mod summation;

mod dd;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

/// Double-precision complex number, the default scalar of the CLI layer.
pub type C64 = Cx<f64>;
/// Double-precision multiplicative function.
pub type MultFn64 = multfun::MultFn<f64>;
/// Double-precision truncated power series.
pub type TruncatedSeries64 = series::TruncatedSeries<f64>;
/// Double-precision expansion coefficient bundle.
pub type ExpansionCoefficients64 = expansion::ExpansionCoefficients<f64>;
/// Double-precision summation row.
pub type SummationResult64 = summation::SummationResult<f64>;
/// Double-precision friable convergence trace.
pub type FriableTrace64 = summation::FriableTrace<f64>;
