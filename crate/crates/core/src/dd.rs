//! Minimal double-double arithmetic (~31 significant digits).
//!
//! The Euler–Maclaurin computation of the Stieltjes constants subtracts
//! `(log M)^{k+1}/(k+1)` from a partial sum of the same magnitude; for
//! `k = 20` that magnitude reaches ~1e12, so plain f64 cannot certify the
//! 1e-12 absolute accuracy the table promises. Working in double-double
//! keeps the cancellation harmless. Algorithms are the classic
//! Dekker/Knuth error-free transformations; `two_prod` relies on
//! `f64::mul_add` for the exact product residual.

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact value of a ratio of two f64-representable integers.
    pub fn from_ratio(num: f64, den: f64) -> Dd {
        Dd::from_f64(num).div(Dd::from_f64(den))
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul(Dd::from_f64(q1)));
        let q2 = r.hi / other.hi;
        let r2 = r.sub(other.mul(Dd::from_f64(q2)));
        let q3 = r2.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut acc = Dd::ONE;
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            n >>= 1;
        }
        acc
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `ln m` for an integer `m ≥ 1`, accurate to the full double-double
    /// precision. Reduces by powers of two, then uses the atanh series
    /// `ln w = 2 Σ z^{2k+1}/(2k+1)` with `z = (w-1)/(w+1) ≤ 1/3`.
    pub fn ln_u32(m: u32) -> Dd {
        assert!(m >= 1);
        if m == 1 {
            return Dd::ZERO;
        }
        let mut t = 0u32;
        let mut w = m as f64;
        while w >= 2.0 {
            w /= 2.0;
            t += 1;
        }
        // m = 2^t * w with w in [1, 2); the halvings are exact.
        let ln_w = Self::ln_reduced(Dd::from_f64(w));
        let ln2 = Self::ln_reduced(Dd::from_f64(2.0));
        ln2.mul(Dd::from_f64(t as f64)).add(ln_w)
    }

    fn ln_reduced(w: Dd) -> Dd {
        let z = w.sub(Dd::ONE).div(w.add(Dd::ONE));
        let z2 = z.mul(z);
        let mut term = z;
        let mut sum = Dd::ZERO;
        let mut k = 0u32;
        loop {
            let contrib = term.div(Dd::from_f64((2 * k + 1) as f64));
            sum = sum.add(contrib);
            if contrib.hi.abs() < 1e-35 {
                break;
            }
            term = term.mul(z2);
            k += 1;
            assert!(k < 200, "atanh series for ln must terminate");
        }
        sum.add(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_matches_f64_values() {
        for m in [2u32, 3, 7, 10, 40, 97] {
            let dd = Dd::ln_u32(m);
            assert!(
                (dd.to_f64() - (m as f64).ln()).abs() < 1e-15,
                "ln({m}) mismatch"
            );
        }
    }

    #[test]
    fn ln2_high_part_residual_is_tiny() {
        // The residual of ln 2 beyond its f64 rounding must be captured in lo.
        let ln2 = Dd::ln_u32(2);
        assert!((ln2.hi - std::f64::consts::LN_2).abs() < 1e-16);
        assert!(ln2.lo.abs() > 0.0 && ln2.lo.abs() < 1e-16);
    }

    #[test]
    fn division_recovers_ratio() {
        let x = Dd::from_ratio(1.0, 3.0);
        let back = x.mul(Dd::from_f64(3.0));
        assert!((back.to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn cancellation_preserves_low_bits() {
        // (1 + 1e-20) - 1 must survive in double-double.
        let tiny = Dd::from_f64(1e-20);
        let x = Dd::ONE.add(tiny);
        let diff = x.sub(Dd::ONE);
        assert_eq!(diff.to_f64(), 1e-20);
    }
}
