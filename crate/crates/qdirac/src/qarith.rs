//! Scalar layer: q-numbers, q-binomials and the q-dimension product formula,
//! evaluated in log-magnitude + sign form so that powers like `q^{±4000}`
//! neither overflow nor underflow.

use serde::{Deserialize, Serialize};

use crate::tableaux::YoungDiagram;
use crate::{Error, Result};

/// Deformation parameter, restricted to the open interval `(0, 1)`.
/// The value `q = 0` is rejected here; the index module owns the exact
/// zero-limit code path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QParam {
    q: f64,
}

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Argument(format!("q must lie in (0,1), got {q}")));
        }
        Ok(QParam { q })
    }

    pub fn value(self) -> f64 {
        self.q
    }

    pub fn ln(self) -> f64 {
        self.q.ln()
    }
}

/// A real number stored as `sign * exp(ln_mag)`. Products, quotients and
/// integer powers are exact in the log field up to floating rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scalar {
    sign: i8,
    ln_mag: f64,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { sign: 0, ln_mag: f64::NEG_INFINITY };
    pub const ONE: Scalar = Scalar { sign: 1, ln_mag: 0.0 };

    pub fn new(sign: i8, ln_mag: f64) -> Self {
        if sign == 0 {
            Scalar::ZERO
        } else {
            Scalar { sign: sign.signum(), ln_mag }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Scalar::ZERO
        } else {
            Scalar { sign: if x > 0.0 { 1 } else { -1 }, ln_mag: x.abs().ln() }
        }
    }

    /// `q^e` for an arbitrary (possibly huge) integer exponent.
    pub fn q_pow(e: i64, q: QParam) -> Self {
        Scalar { sign: 1, ln_mag: e as f64 * q.ln() }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn ln_mag(self) -> f64 {
        self.ln_mag
    }

    /// Converts to `f64`; overflows to infinity outside the representable range.
    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.ln_mag.exp()
    }

    pub fn abs(self) -> Self {
        Scalar { sign: self.sign.abs(), ln_mag: self.ln_mag }
    }

    pub fn neg(self) -> Self {
        Scalar { sign: -self.sign, ln_mag: self.ln_mag }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Scalar::ZERO;
        }
        Scalar { sign: self.sign * other.sign, ln_mag: self.ln_mag + other.ln_mag }
    }

    pub fn div(self, other: Self) -> Result<Self> {
        if other.sign == 0 {
            return Err(Error::Argument("division by zero scalar".into()));
        }
        if self.sign == 0 {
            return Ok(Scalar::ZERO);
        }
        Ok(Scalar { sign: self.sign * other.sign, ln_mag: self.ln_mag - other.ln_mag })
    }

    /// Square root of a nonnegative scalar.
    pub fn sqrt(self) -> Result<Self> {
        match self.sign {
            0 => Ok(Scalar::ZERO),
            1 => Ok(Scalar { sign: 1, ln_mag: 0.5 * self.ln_mag }),
            _ => Err(Error::Argument("square root of a negative scalar".into())),
        }
    }

    /// Sums a slice after factoring out the largest exponent.
    pub fn sum(terms: &[Scalar]) -> Scalar {
        let m = terms.iter().filter(|t| t.sign != 0).map(|t| t.ln_mag).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return Scalar::ZERO;
        }
        let s: f64 = terms
            .iter()
            .filter(|t| t.sign != 0)
            .map(|t| t.sign as f64 * (t.ln_mag - m).exp())
            .sum();
        if s == 0.0 {
            Scalar::ZERO
        } else {
            Scalar { sign: if s > 0.0 { 1 } else { -1 }, ln_mag: m + s.abs().ln() }
        }
    }
}

/// q-number `[n]_q = (q^n - q^{-n}) / (q - q^{-1})`; odd in `n`.
pub fn q_int(n: i64, q: QParam) -> Scalar {
    if n == 0 {
        return Scalar::ZERO;
    }
    let t = n.unsigned_abs() as f64;
    let lq = q.ln();
    // [|n|] = q^{-|n|} (1 - q^{2|n|}) / (q^{-1} - q), all factors positive
    let ln = -t * lq + (-(2.0 * t * lq).exp()).ln_1p() - (1.0 / q.value() - q.value()).ln();
    Scalar { sign: n.signum() as i8, ln_mag: ln }
}

/// q-binomial `[n r]_q`, computed as a product of ratios `[n-k]/[k+1]`.
pub fn q_binom(n: i64, r: i64, q: QParam) -> Result<Scalar> {
    if r < 0 || r > n {
        return Err(Error::Argument(format!("q_binom requires 0 <= r <= n, got ({n}, {r})")));
    }
    let mut acc = Scalar::ONE;
    for k in 0..r {
        acc = acc.mul(q_int(n - k, q)).div(q_int(k + 1, q))?;
    }
    Ok(acc)
}

/// Weyl q-dimension `d_lambda = prod_{i<j} [l_i - l_j + j - i]_q / [j - i]_q`.
///
/// Agrees with the brute-force sum `sum_r q^{2 psi(r)}` over the tableaux
/// with top row `lambda` (see `cgc::q_dim_sum`, which is kept separate as an
/// independent oracle).
pub fn weyl_q_dimension(lambda: &YoungDiagram, q: QParam) -> Scalar {
    let parts = lambda.parts();
    let n = parts.len();
    let mut acc = Scalar::ONE;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = (parts[i] - parts[j]) as i64 + (j - i) as i64;
            let b = (j - i) as i64;
            acc = acc.mul(q_int(a, q)).div(q_int(b, q)).expect("[j-i]_q > 0");
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn q(x: f64) -> QParam {
        QParam::new(x).unwrap()
    }

    #[test]
    fn rejects_bad_q() {
        assert!(QParam::new(0.0).is_err());
        assert!(QParam::new(1.0).is_err());
        assert!(QParam::new(-0.5).is_err());
    }

    #[test]
    fn q_int_values() {
        let h = q(0.5);
        assert!(q_int(0, h).is_zero());
        assert_relative_eq!(q_int(1, h).to_f64(), 1.0, max_relative = 1e-14);
        // (0.125 - 8) / (0.5 - 2)
        assert_relative_eq!(q_int(3, h).to_f64(), 5.25, max_relative = 1e-13);
        assert_relative_eq!(q_int(-3, h).to_f64(), -5.25, max_relative = 1e-13);
    }

    #[test]
    fn q_binom_values() {
        let h = q(0.5);
        assert_relative_eq!(q_binom(5, 0, h).unwrap().to_f64(), 1.0, max_relative = 1e-14);
        // [2 1] = [2]_q = q + 1/q
        assert_relative_eq!(q_binom(2, 1, h).unwrap().to_f64(), 2.5, max_relative = 1e-13);
        // [4 2] = [4][3] / [2][1] = 10.625 * 5.25 / 2.5
        assert_relative_eq!(q_binom(4, 2, h).unwrap().to_f64(), 22.3125, max_relative = 1e-12);
        assert!(q_binom(3, 4, h).is_err());
        assert!(q_binom(3, -1, h).is_err());
    }

    #[test]
    fn weyl_dimension_small_cases() {
        let h = q(0.5);
        let triv = YoungDiagram::zero(2);
        assert_relative_eq!(weyl_q_dimension(&triv, h).to_f64(), 1.0);
        // l = 1: [2]_q = 1/q + q
        let l1 = YoungDiagram::new(vec![1, 0]).unwrap();
        assert_relative_eq!(weyl_q_dimension(&l1, h).to_f64(), 2.5, max_relative = 1e-13);
        // l = 2: [3]_q = 1/q^2 + 1 + q^2
        let l2 = YoungDiagram::new(vec![1, 0, 0]).unwrap();
        assert_relative_eq!(weyl_q_dimension(&l2, h).to_f64(), 5.25, max_relative = 1e-13);
    }

    #[test]
    fn huge_exponents_stay_finite() {
        let h = q(0.5);
        let a = Scalar::q_pow(4000, h);
        let b = Scalar::q_pow(-4000, h);
        let prod = a.mul(b);
        assert_relative_eq!(prod.to_f64(), 1.0, max_relative = 1e-12);
        assert!(a.ln_mag().is_finite() && b.ln_mag().is_finite());
    }

    proptest! {
        #[test]
        fn q_int_is_odd_and_positive(n in 1i64..200, qv in 0.05f64..0.95) {
            let h = q(qv);
            let p = q_int(n, h);
            prop_assert_eq!(p.sign(), 1);
            let m = q_int(-n, h);
            prop_assert_eq!(m.sign(), -1);
            prop_assert!((p.ln_mag() - m.ln_mag()).abs() <= 1e-12 * p.ln_mag().abs().max(1.0));
        }

        #[test]
        fn q_binom_symmetry(n in 0i64..40, r in 0i64..40, qv in 0.1f64..0.9) {
            prop_assume!(r <= n);
            let h = q(qv);
            let a = q_binom(n, r, h).unwrap();
            let b = q_binom(n, n - r, h).unwrap();
            // compare in the log field; the values themselves overflow f64 for small q
            prop_assert!((a.ln_mag() - b.ln_mag()).abs() < 1e-12 * a.ln_mag().abs().max(1.0));
            prop_assert_eq!(a.sign(), b.sign());
        }

        #[test]
        fn scalar_log_round_trip(ln in -2000f64..2000.0, sgn in prop::sample::select(vec![-1i8, 1])) {
            let s = Scalar::new(sgn, ln);
            // multiply and divide by a large power, magnitude must return exactly
            let h = q(0.5);
            let big = Scalar::q_pow(3000, h);
            let back = s.mul(big).div(big).unwrap();
            prop_assert_eq!(back.sign(), sgn);
            prop_assert!((back.ln_mag() - ln).abs() <= 1e-14 * ln.abs().max(1.0) + 1e-10);
        }
    }
}
