//! Scalar q-arithmetic.
//!
//! Brackets are evaluated as `sinh(n h) / sinh(h)` with `h = ln q`, which is
//! algebraically identical to `(q^n - q^-n) / (q - q^-1)` but keeps full
//! relative precision as `q -> 1` and is manifestly symmetric under `q -> 1/q`.

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};

/// Distance from `q = 1` below which the classical (`q = 1`) branch is used.
pub const BRANCH_EPS: f64 = 1e-12;

/// Default tolerance for identity checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// A real deformation parameter `q > 0` and the constants derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deformation {
    q: f64,
    lambda: f64,
    is_classical: bool,
}

impl Deformation {
    pub fn new(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(QError::InvalidDeformation(q));
        }
        let is_classical = (q - 1.0).abs() < BRANCH_EPS;
        let lambda = if is_classical { 0.0 } else { q - 1.0 / q };
        Ok(Self {
            q,
            lambda,
            is_classical,
        })
    }

    /// The undeformed case `q = 1`.
    pub fn classical() -> Self {
        Self {
            q: 1.0,
            lambda: 0.0,
            is_classical: true,
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `q - 1/q`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_classical(&self) -> bool {
        self.is_classical
    }

    /// The deformation with `q` replaced by `1/q`.
    pub fn inverse(&self) -> Self {
        Self::new(1.0 / self.q).expect("inverse of a valid deformation is valid")
    }

    /// `min(q, 1/q)`, the ratio used by geometric node sets.
    pub fn q_eff(&self) -> f64 {
        self.q.min(1.0 / self.q)
    }

    /// `q^k` for integer `k`.
    pub fn pow(&self, k: i32) -> f64 {
        if self.is_classical {
            1.0
        } else {
            self.q.powi(k)
        }
    }

    /// `q^x` for real `x`.
    pub fn powf(&self, x: f64) -> f64 {
        if self.is_classical {
            1.0
        } else {
            self.q.powf(x)
        }
    }

    fn log_q(&self) -> f64 {
        (self.q - 1.0).ln_1p()
    }

    /// The q-number `[n]`.
    pub fn qnum(&self, n: i64) -> f64 {
        self.qnum_real(n as f64)
    }

    /// The q-number `[x]` for real `x`.
    pub fn qnum_real(&self, x: f64) -> f64 {
        if self.is_classical {
            return x;
        }
        let h = self.log_q();
        (x * h).sinh() / h.sinh()
    }

    /// `[n]` evaluated with `q` replaced by `q^base_exponent`; `n` may be a
    /// half-integer so the base-`q^2` rewrite of a bracket can be checked.
    pub fn qnum_base(&self, n: f64, base_exponent: u32) -> Result<f64> {
        match base_exponent {
            1 => Ok(self.qnum_real(n)),
            2 => {
                if self.is_classical {
                    return Ok(n);
                }
                let h = 2.0 * self.log_q();
                Ok((n * h).sinh() / h.sinh())
            }
            other => Err(QError::InvalidBase(other)),
        }
    }

    /// `[n]! = [n][n-1]...[1]`, `[0]! = 1`.
    pub fn qfactorial(&self, n: i64) -> Result<f64> {
        if n < 0 {
            return Err(QError::Domain {
                what: "q-factorial",
                value: n,
                min: 0,
            });
        }
        Ok((1..=n).map(|k| self.qnum(k)).product())
    }

    /// `[n]!! = [n][n-2]...`, with `[0]!! = [-1]!! = 1`.
    pub fn qdoublefactorial(&self, n: i64) -> Result<f64> {
        if n < -1 {
            return Err(QError::Domain {
                what: "q-double-factorial",
                value: n,
                min: -1,
            });
        }
        let mut acc = 1.0;
        let mut k = n;
        while k > 0 {
            acc *= self.qnum(k);
            k -= 2;
        }
        Ok(acc)
    }

    /// Casimir eigenvalue `[l][l+1]`.
    pub fn casimir_eig(&self, l: u32) -> f64 {
        let l = l as i64;
        self.qnum(l) * self.qnum(l + 1)
    }

    /// Eigenvalue of the squared Lambda vector, `[2l]/[2] * [2l+2]/[2]`.
    pub fn cprime_eig(&self, l: u32) -> f64 {
        let l = l as i64;
        let two = self.qnum(2);
        self.qnum(2 * l) / two * (self.qnum(2 * l + 2) / two)
    }

    /// Eigenvalue of the invariant `c`, `(q^(2l+1) + q^-(2l+1)) / [2]`.
    pub fn c_eig(&self, l: u32) -> f64 {
        if self.is_classical {
            return 1.0;
        }
        let h = self.log_q();
        ((2 * l + 1) as f64 * h).cosh() / h.cosh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn d(q: f64) -> Deformation {
        Deformation::new(q).unwrap()
    }

    #[test]
    fn rejects_nonpositive_q() {
        assert!(Deformation::new(0.0).is_err());
        assert!(Deformation::new(-1.0).is_err());
        assert!(Deformation::new(f64::NAN).is_err());
        assert!(Deformation::new(f64::INFINITY).is_err());
    }

    #[test]
    fn lambda_is_q_minus_inverse() {
        assert_relative_eq!(d(2.0).lambda(), 1.5, epsilon = 1e-15);
        assert_eq!(d(1.0).lambda(), 0.0);
        assert!(d(1.0).is_classical());
        assert!(!d(1.0 + 1e-9).is_classical());
    }

    #[test]
    fn qnum_examples() {
        assert_eq!(d(1.0).qnum(5), 5.0);
        // (8 - 1/8) / (2 - 1/2)
        assert_relative_eq!(d(2.0).qnum(3), 5.25, epsilon = 1e-13);
        assert_relative_eq!(d(0.5).qnum(3), 5.25, epsilon = 1e-13);
        assert_eq!(d(1.7).qnum(0), 0.0);
        assert_relative_eq!(d(1.7).qnum(1), 1.0, epsilon = 1e-15);
        assert_relative_eq!(d(1.7).qnum(-4), -d(1.7).qnum(4), epsilon = 1e-15);
    }

    #[test]
    fn qnum_base_examples() {
        assert_eq!(d(1.0).qnum_base(3.0, 2).unwrap(), 3.0);
        assert_relative_eq!(d(2.0).qnum_base(1.0, 2).unwrap(), 1.0, epsilon = 1e-15);
        let q = d(1.2);
        let lhs = q.qnum_base(4.0, 1).unwrap();
        let rhs = q.qnum(2) * q.qnum_base(2.0, 2).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        assert_eq!(q.qnum_base(1.0, 3), Err(QError::InvalidBase(3)));
    }

    #[test]
    fn factorials() {
        assert_eq!(d(1.0).qfactorial(4).unwrap(), 24.0);
        assert_eq!(d(1.0).qdoublefactorial(5).unwrap(), 15.0);
        // [3][2][1] at q = 2 is 5.25 * 2.5 * 1
        let direct = (8.0 - 0.125) / 1.5 * ((4.0 - 0.25) / 1.5);
        assert_relative_eq!(d(2.0).qfactorial(3).unwrap(), direct, epsilon = 1e-12);
        assert_relative_eq!(direct, 13.125, epsilon = 1e-12);
        assert_eq!(d(1.3).qfactorial(0).unwrap(), 1.0);
        assert_eq!(d(1.3).qdoublefactorial(0).unwrap(), 1.0);
        assert_eq!(d(1.3).qdoublefactorial(-1).unwrap(), 1.0);
        assert!(d(1.3).qfactorial(-1).is_err());
        assert!(d(1.3).qdoublefactorial(-2).is_err());
    }

    #[test]
    fn invariant_eigenvalues() {
        let one = d(1.0);
        assert_eq!(one.casimir_eig(2), 6.0);
        assert_eq!(one.cprime_eig(2), 6.0);
        assert_eq!(one.c_eig(2), 1.0);
        for q in [0.6, 1.3, 2.0] {
            let dq = d(q);
            assert_eq!(dq.casimir_eig(0), 0.0);
            assert_eq!(dq.cprime_eig(0), 0.0);
            assert_relative_eq!(dq.c_eig(0), 1.0, epsilon = 1e-15);
        }
        // (8 + 1/8) / 2.5
        assert_relative_eq!(d(2.0).c_eig(1), 3.25, epsilon = 1e-13);
    }

    #[test]
    fn c_eig_matches_power_form() {
        let dq = d(1.37);
        for l in 0..6u32 {
            let q = dq.q();
            let e = (2 * l + 1) as i32;
            let direct = (q.powi(e) + q.powi(-e)) / dq.qnum(2);
            assert_relative_eq!(dq.c_eig(l), direct, max_relative = 1e-13);
        }
    }
}
