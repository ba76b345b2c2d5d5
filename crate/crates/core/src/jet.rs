//! Truncated Taylor series ("jets") over the complex numbers.
//!
//! Angular profiles are evaluated on jets rather than plain numbers so the
//! `q = 1` limit of the q-difference operator, an ordinary derivative, can be
//! taken exactly. Arguments handed to a profile are always affine in the
//! infinitesimal (`x + s e`), because the only argument transformations are
//! dilations `x -> q^a x`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Number of stored Taylor coefficients.
pub const JET_LEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    coeffs: [Complex64; JET_LEN],
}

impl Jet {
    pub fn constant(c: impl Into<Complex64>) -> Self {
        let mut coeffs = [Complex64::new(0.0, 0.0); JET_LEN];
        coeffs[0] = c.into();
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// The independent variable at `x`: `x + e`.
    pub fn variable(x: f64) -> Self {
        let mut j = Self::constant(x);
        j.coeffs[1] = Complex64::new(1.0, 0.0);
        j
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    /// Rescales by a real factor (used for argument dilation).
    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            *c *= s;
        }
        out
    }

    /// Given `self = g(X)` for an affine argument `X = x + s e`, returns
    /// `g'(X)`. The highest coefficient is lost.
    pub fn derivative(&self, arg: &Jet) -> Self {
        let s = arg.coeffs[1];
        let mut out = Self::zero();
        for k in 0..JET_LEN - 1 {
            out.coeffs[k] = self.coeffs[k + 1] * (k as f64 + 1.0) / s;
        }
        out
    }

    pub fn recip(&self) -> Self {
        let a0 = self.coeffs[0];
        let mut out = Self::zero();
        out.coeffs[0] = a0.inv();
        for k in 1..JET_LEN {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * out.coeffs[k - j];
            }
            out.coeffs[k] = -acc / a0;
        }
        out
    }

    /// Principal-branch square root.
    pub fn sqrt(&self) -> Self {
        let b0 = self.coeffs[0].sqrt();
        let mut out = Self::zero();
        out.coeffs[0] = b0;
        if b0 == Complex64::new(0.0, 0.0) {
            // Not analytic at a branch point; only the value is meaningful.
            return out;
        }
        for k in 1..JET_LEN {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= out.coeffs[j] * out.coeffs[k - j];
            }
            out.coeffs[k] = acc / (b0 * 2.0);
        }
        out
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::constant(1.0);
        for _ in 0..n {
            out = out * *self;
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            *c = c.conj();
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = Jet::zero();
        for i in 0..JET_LEN {
            if self.coeffs[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..JET_LEN - i {
                out.coeffs[i + j] += self.coeffs[i] * rhs.coeffs[j];
            }
        }
        out
    }
}

impl Mul<Complex64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: Complex64) -> Jet {
        for c in self.coeffs.iter_mut() {
            *c *= rhs;
        }
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: f64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn polynomial_derivatives() {
        let x = Jet::variable(0.5);
        let p = x * x * x; // x^3
        assert!(close(p.value(), 0.125));
        let dp = p.derivative(&x);
        assert!(close(dp.value(), 0.75));
        let ddp = dp.derivative(&x);
        assert!(close(ddp.value(), 3.0));
    }

    #[test]
    fn sqrt_and_recip() {
        let x = Jet::variable(0.3);
        let s = (Jet::constant(1.0) - x * x).sqrt();
        // d/dx sqrt(1 - x^2) = -x / sqrt(1 - x^2)
        let expect = -0.3 / (1.0f64 - 0.09).sqrt();
        assert!(close(s.derivative(&x).value(), expect));
        let r = x.recip();
        assert!(close(r.derivative(&x).value(), -1.0 / 0.09));
        let back = s * s;
        assert!(close(back.derivative(&x).value(), -0.6));
    }

    #[test]
    fn dilated_argument_derivative() {
        // g(X) = X^2 at X = 2 * (0.4 + e) has g'(X) = 2X = 1.6
        let x = Jet::variable(0.4).scale(2.0);
        let g = x * x;
        assert!(close(g.derivative(&x).value(), 1.6));
    }
}
