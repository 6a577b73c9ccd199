//! Scalar abstraction: the numeric kernels are generic over `f32`/`f64`.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};

/// Complex number over a generic real scalar.
pub type Cx<T> = num_complex::Complex<T>;

/// Real scalar the crate computes with: `f32` or `f64`.
///
/// Everything heavy (sieving, enumeration bookkeeping) stays in integer
/// arithmetic; this trait only has to carry the floating-point side.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; the standard way constants enter
    /// generic code.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant must convert to the scalar type")
    }

    /// `ln(n)` for an integer argument, routed through `f64` so that the
    /// argument does not lose low bits before the logarithm is taken.
    fn ln_u64(n: u64) -> Self {
        Self::of((n as f64).ln())
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

/// Complex unit helpers used all over the numeric modules.
pub fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Cx::new(T::of(re), T::of(im))
}

/// `e^{iθ}` as a complex value.
pub fn cis<T: Real>(theta: T) -> Cx<T> {
    Cx::new(theta.cos(), theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn of_and_ln_roundtrip() {
        assert_eq!(f64::of(1.5), 1.5);
        assert!((f64::ln_u64(1000) - 1000f64.ln()).abs() < 1e-15);
        assert!((f32::of(0.25) - 0.25f32).abs() == 0.0);
    }

    #[test]
    fn cis_unit_modulus() {
        let z: Cx<f64> = cis(2.3);
        assert!((z.norm() - 1.0).abs() < 1e-15);
    }
}
