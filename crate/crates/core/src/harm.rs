//! q-spherical harmonics.
//!
//! `Phi_lm = x~_1^m Theta_lm(x0)` for `m >= 0`, where `Theta_lm` is the
//! terminating polynomial fixed by the lowering-raising eigenvalue equation.
//! Negative `m` is reached with the realized lowering operator.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::func::{self, AngularFunction, AngularOperator, Primitive};
use crate::jet::Jet;
use crate::kernel::Deformation;
use crate::rep;

/// Coefficients and normalization of one `Y_lm`, `m >= 0`.
///
/// `coeffs[i]` multiplies `x0^(lowest_power + 2 i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSpec {
    pub l: u32,
    pub m: i32,
    pub q: f64,
    pub lowest_power: u32,
    pub coeffs: Vec<f64>,
    pub norm: f64,
    pub sign: i32,
}

impl HarmonicSpec {
    /// Powers of `x0` carried by `coeffs`, in order.
    pub fn powers(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.coeffs.len()).map(move |i| self.lowest_power + 2 * i as u32)
    }

    /// Coefficients as a dense polynomial in `x0`.
    pub fn dense(&self) -> Vec<f64> {
        let top = self.lowest_power as usize + 2 * self.coeffs.len().saturating_sub(1);
        let mut out = vec![0.0; top + 1];
        for (p, c) in self.powers().zip(&self.coeffs) {
            out[p as usize] = *c;
        }
        out
    }

    /// The signed constant multiplying `Phi_lm`.
    pub fn factor(&self) -> f64 {
        self.sign as f64 * self.norm
    }

    /// `Theta_lm` times the normalization.
    pub fn theta(&self) -> AngularFunction {
        let f = self.factor();
        AngularFunction::polynomial(0, self.dense().into_iter().map(|c| c * f).collect())
    }
}

fn check_labels(l: u32, m: i32) -> Result<()> {
    if m < 0 || m as u32 > l {
        return Err(QError::InvalidQuantumNumbers {
            l: l as i64,
            m: m as i64,
            reason: "requires 0 <= m <= l",
        });
    }
    Ok(())
}

/// Unnormalized coefficients from the two-step recursion
/// `a_{k+2} = -q^{-2m} [l-m-k][l+m+k+1] / ([k+1][k+2]) a_k`,
/// started from `a_0 = 1` (even `l-m`) or `a_1 = q^{-m}` (odd `l-m`).
pub fn phi_coeffs(d: Deformation, l: u32, m: i32) -> Result<HarmonicSpec> {
    check_labels(l, m)?;
    let (li, mi) = (l as i64, m as i64);
    let top = (l as i32 - m) as i64;
    let mut k = top % 2;
    let mut a = if k == 0 { 1.0 } else { d.pow(-m) };
    let mut coeffs = vec![a];
    while k + 2 <= top {
        a *= -d.pow(-2 * m) * d.qnum(li - mi - k) * d.qnum(li + mi + k + 1)
            / (d.qnum(k + 1) * d.qnum(k + 2));
        coeffs.push(a);
        k += 2;
    }
    Ok(HarmonicSpec {
        l,
        m,
        q: d.q(),
        lowest_power: (top % 2) as u32,
        coeffs,
        norm: 1.0,
        sign: 1,
    })
}

/// The same coefficients written as the explicit alternating series in
/// powers of `q^{-m} x0` with bracket products over `[k]!`.
pub fn printed_series_coeffs(d: Deformation, l: u32, m: i32) -> Result<Vec<f64>> {
    check_labels(l, m)?;
    let (li, mi) = (l as i64, m as i64);
    let top = li - mi;
    let p = top % 2;
    let mut out = Vec::new();
    let mut j = 0i64;
    while p + 2 * j <= top {
        let k = p + 2 * j;
        let mut num = 1.0;
        for i in 0..j {
            num *= d.qnum(li - mi - p - 2 * i) * d.qnum(li + mi + 1 + p + 2 * i);
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        out.push(sign * num / d.qfactorial(k)? * d.pow(-(m * k as i32)));
        j += 1;
    }
    Ok(out)
}

/// Terminating basic hypergeometric sum
/// `sum_k ([a]_k [b]_k / ([c]_k [k]!)) z^k`, with rising bracket products
/// `[a]_k = [a][a+1]...[a+k-1]` taken in the base of `base`.
///
/// Pass `Deformation::new(q * q)` to evaluate a series in base `q^2`.
pub fn q_hypergeometric(base: Deformation, a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let is_nonpos_int = |x: f64| x <= 0.0 && x.fract() == 0.0;
    let terms = match (is_nonpos_int(a), is_nonpos_int(b)) {
        (true, true) => (-a).min(-b),
        (true, false) => -a,
        (false, true) => -b,
        (false, false) => return Err(QError::NonTerminating { a, b }),
    } as i64;
    if (0..terms).any(|j| c + j as f64 == 0.0) {
        return Err(QError::HypergeometricPole(c));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..terms {
        let jf = j as f64;
        term *= base.qnum_real(a + jf) * base.qnum_real(b + jf)
            / (base.qnum_real(c + jf) * base.qnum_real(jf + 1.0))
            * z;
        sum += term;
    }
    Ok(sum)
}

/// `Theta_lm(x0)` through the base-`q^2` hypergeometric closed form with
/// argument `q^{-2m} x0^2`.
pub fn theta_closed_form(d: Deformation, l: u32, m: i32, x: f64) -> Result<f64> {
    check_labels(l, m)?;
    let base = Deformation::new(d.q() * d.q())?;
    let (lf, mf) = (l as f64, m as f64);
    let z = d.pow(-2 * m) * x * x;
    if (l as i32 - m) % 2 == 0 {
        q_hypergeometric(base, (lf + mf + 1.0) / 2.0, (mf - lf) / 2.0, 0.5, z)
    } else {
        Ok(d.pow(-m)
            * x
            * q_hypergeometric(base, (lf + mf + 2.0) / 2.0, (mf - lf + 1.0) / 2.0, 1.5, z)?)
    }
}

/// Sign and magnitude of the normalization constant of `Y_lm`, `m >= 0`.
pub fn normalization(d: Deformation, l: u32, m: i32) -> Result<(i32, f64)> {
    check_labels(l, m)?;
    let (li, mi) = (l as i64, m as i64);
    let df = |n: i64| d.qdoublefactorial(n);
    let (half, ratio) = if (li - mi) % 2 == 0 {
        (
            (li - mi) / 2,
            df(li - mi - 1)? / df(li - mi)? * (df(li + mi - 1)? / df(li + mi)?),
        )
    } else {
        (
            (li - mi - 1) / 2,
            df(li - mi)? / df(li - mi - 1)? * (df(li + mi)? / df(li + mi - 1)?),
        )
    };
    let sign = if half % 2 == 0 { 1 } else { -1 };
    let mag = (d.qnum(2 * li + 1) / (4.0 * std::f64::consts::PI)).sqrt()
        * ratio.sqrt()
        * d.qnum(2).powf(m as f64 / 2.0);
    Ok((sign, mag))
}

/// Attaches the normalization constant.
pub fn normalize(d: Deformation, spec: &HarmonicSpec) -> Result<HarmonicSpec> {
    let (sign, norm) = normalization(d, spec.l, spec.m)?;
    Ok(HarmonicSpec {
        norm,
        sign,
        ..spec.clone()
    })
}

/// Coefficients and normalization of `Y_lm`.
pub fn harmonic_spec(d: Deformation, l: u32, m: i32) -> Result<HarmonicSpec> {
    normalize(d, &phi_coeffs(d, l, m)?)
}

/// The sector-`m` function `e^{i m phi} x~_1^m (factor * Theta)`.
pub fn spec_function(d: Deformation, spec: &HarmonicSpec) -> AngularFunction {
    func::x_tilde_pow(d, 1, spec.m)
        .then(Primitive::PhaseShift(spec.m))
        .apply(&spec.theta())
}

/// Value of the profile of `spec` at `x`.
pub fn evaluate_harmonic(d: Deformation, spec: &HarmonicSpec, x: f64) -> Result<Complex64> {
    spec_function(d, spec).eval(x)
}

/// Unnormalized `Phi_lm`, `0 <= m <= l`.
pub fn phi_function(d: Deformation, l: u32, m: i32) -> Result<AngularFunction> {
    Ok(spec_function(d, &phi_coeffs(d, l, m)?))
}

fn check_signed_labels(l: u32, m: i32) -> Result<()> {
    if m.unsigned_abs() > l {
        return Err(QError::InvalidQuantumNumbers {
            l: l as i64,
            m: m as i64,
            reason: "requires |m| <= l",
        });
    }
    Ok(())
}

/// Polynomial part of `Y_{l,-n}`, `n >= 0`, so that
/// `Y_{l,-n} = e^{-i n phi} x~_-1^n P(x0)`.
///
/// On such a function the realized lowering operator strips the prefactor
/// and applies `(1/x0)(1 - q^{2N0})/(1 - q^2)` to `P`, which maps `x0^k` to
/// `q^{k-1}[k] x0^{k-1}`. Iterating that coefficient map from `Y_l0` and
/// dividing by `sqrt([l+m][l-m+1])` at each step gives `P` exactly.
pub fn lowered_coeffs(d: Deformation, l: u32, n: u32) -> Result<Vec<f64>> {
    if n > l {
        return Err(QError::InvalidQuantumNumbers {
            l: l as i64,
            m: -(n as i64),
            reason: "requires |m| <= l",
        });
    }
    let spec = harmonic_spec(d, l, 0)?;
    let f = spec.factor();
    let mut p: Vec<f64> = spec.dense().into_iter().map(|c| c * f).collect();
    let (li, sqrt2) = (l as i64, d.qnum(2).sqrt());
    for step in 0..n as i64 {
        let cur = -step;
        let pref = sqrt2 * d.pow(cur as i32) / (d.qnum(li + cur) * d.qnum(li - cur + 1)).sqrt();
        p = (1..p.len())
            .map(|k| p[k] * d.pow(k as i32 - 1) * d.qnum(k as i64) * pref)
            .collect();
    }
    Ok(p)
}

/// Normalized `Y_lm` for `|m| <= l`.
pub fn harmonic_function(d: Deformation, l: u32, m: i32) -> Result<AngularFunction> {
    check_signed_labels(l, m)?;
    if m >= 0 {
        return Ok(spec_function(d, &harmonic_spec(d, l, m)?));
    }
    let n = m.unsigned_abs();
    let p = AngularFunction::polynomial(0, lowered_coeffs(d, l, n)?);
    Ok(func::x_tilde_pow(d, -1, n as i32)
        .then(Primitive::PhaseShift(m))
        .apply(&p))
}

/// `Y_lm` for `m < 0` reached by applying the realized lowering operator
/// pointwise to `Y_l0`, dividing by the matrix element at each step. Agrees
/// with [`harmonic_function`] but accumulates rounding from the nested
/// q-differences.
pub fn harmonic_function_by_ladder(d: Deformation, l: u32, m: i32) -> Result<AngularFunction> {
    check_signed_labels(l, m)?;
    let lower = func::realize_generators(d).minus;
    let li = l as i64;
    let mut f = harmonic_function(d, l, m.max(0))?;
    for cur in (m as i64 + 1..=0).rev() {
        let elem = (d.qnum(li + cur) * d.qnum(li - cur + 1)).sqrt();
        f = lower.apply(&f).scale(1.0 / elem);
    }
    Ok(f)
}

/// `Y_lm` read as an operator: multiply by the normalized `Theta`, then apply
/// `x~_1^m` and the phase. `Y_lm f` means this operator applied to `f`.
pub fn harmonic_operator(d: Deformation, l: u32, m: i32) -> Result<AngularOperator> {
    let spec = harmonic_spec(d, l, m)?;
    let theta = spec.theta();
    let profile = theta.profile().clone();
    let mult: func::Profile = Arc::new(move |x: &Jet| profile(x));
    Ok(AngularOperator::primitive(d, Primitive::Multiply(mult))
        .then_op(&func::x_tilde_pow(d, 1, m))
        .then(Primitive::PhaseShift(m)))
}

/// Outcome of the raising identity `x1 (1/x0)(1 - q^{-2N0})/(1 - q^{-2}) Phi_lm = f Phi_{l,m+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub l: u32,
    pub m: i32,
    pub even: bool,
    /// Factor printed for this parity: `-[l-m][l+m+1]` for even `l-m`, 1 for odd.
    pub printed_factor: f64,
    /// Proportionality factor measured with the q-difference acting on `Theta` only.
    pub measured_factor: f64,
    /// `printed_factor * q^{-m}`, the factor the measurement should reproduce.
    pub expected_factor: f64,
    /// Pointwise residual against `expected_factor * Phi_{l,m+1}`.
    pub residual: f64,
    /// How far the literal operator (q-difference acting on the full `Phi_lm`)
    /// is from being proportional to `Phi_{l,m+1}`.
    pub literal_proportionality_residual: f64,
}

fn proportional_fit(
    lhs: &AngularFunction,
    target: &AngularFunction,
    points: &[f64],
) -> Result<(f64, f64)> {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for &x in points {
        let t = target.eval(x)?;
        num += t.conj() * lhs.eval(x)?;
        den += t.norm_sqr();
    }
    if den == 0.0 {
        return Ok((0.0, lhs.max_abs(points)?));
    }
    let f = (num / den).re;
    let res = lhs.max_abs_diff(&target.scale(f), points)?;
    Ok((f, res))
}

/// Measures the raising identity for `0 <= m <= l`. At `m = l` both sides vanish.
pub fn ladder_check(d: Deformation, l: u32, m: i32) -> Result<LadderReport> {
    check_labels(l, m)?;
    let (li, mi) = (l as i64, m as i64);
    let even = (li - mi) % 2 == 0;
    let printed = if even {
        -d.qnum(li - mi) * d.qnum(li + mi + 1)
    } else {
        1.0
    };
    let expected = printed * d.pow(-m);
    let phi = phi_function(d, l, m)?;
    let points = func::sample_points(d, l + 2);

    let theta_only = func::x_tilde_pow(d, 1, -m)
        .then(Primitive::QDifference)
        .then_op(&func::x_tilde_pow(d, 1, m + 1))
        .then(Primitive::PhaseShift(1))
        .apply(&phi);
    let literal = AngularOperator::primitive(d, Primitive::QDifference)
        .then_op(&func::realize_x(d, 1)?)
        .apply(&phi);

    if m as u32 == l {
        let r = theta_only.max_abs(&points)?;
        return Ok(LadderReport {
            l,
            m,
            even,
            printed_factor: printed,
            measured_factor: 0.0,
            expected_factor: expected,
            residual: r,
            literal_proportionality_residual: literal.max_abs(&points)?,
        });
    }
    let target = phi_function(d, l, m + 1)?;
    let (measured, _) = proportional_fit(&theta_only, &target, &points)?;
    let residual = theta_only.max_abs_diff(&target.scale(expected), &points)?;
    let (_, literal_res) = proportional_fit(&literal, &target, &points)?;
    Ok(LadderReport {
        l,
        m,
        even,
        printed_factor: printed,
        measured_factor: measured,
        expected_factor: expected,
        residual,
        literal_proportionality_residual: literal_res,
    })
}

/// `x_k Y_lm` expanded on `Y_{l+1,m+k}` and `Y_{l-1,m+k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductExpansion {
    pub k: i32,
    pub l: u32,
    pub m: i32,
    /// Coefficient of `Y_{l+1, m+k}`.
    pub up: f64,
    /// Coefficient of `Y_{l-1, m+k}`; zero when that state does not exist.
    pub down: f64,
    /// The same coefficients in their widely quoted form.
    pub quoted_up: f64,
    pub quoted_down: f64,
    /// Pointwise residual of `x_k Y_lm - up Y_{l+1} - down Y_{l-1}`.
    pub residual: f64,
}

/// The product `x_k Y_lm` checked pointwise against its two-term expansion.
pub fn x_times_y(d: Deformation, k: i32, l: u32, m: i32) -> Result<ProductExpansion> {
    let [up, down] = rep::position_coefficients(d, k, l, m);
    let [quoted_up, quoted_down] = rep::quoted_position_coefficients(d, k, l, m);
    let y = harmonic_function(d, l, m)?;
    let lhs = func::realize_x(d, k)?.apply(&y);
    let target_m = m + k;
    let mut rhs = AngularFunction::zero(target_m);
    if target_m.unsigned_abs() <= l + 1 {
        rhs = rhs.add(&harmonic_function(d, l + 1, target_m)?.scale(up))?;
    }
    if l >= 1 && target_m.unsigned_abs() < l {
        rhs = rhs.add(&harmonic_function(d, l - 1, target_m)?.scale(down))?;
    }
    let points = func::sample_points(d, l + 3);
    let residual = lhs.max_abs_diff(&rhs, &points)?;
    Ok(ProductExpansion {
        k,
        l,
        m,
        up,
        down,
        quoted_up,
        quoted_down,
        residual,
    })
}

/// Residual of the exchange relation between `x_k` and `Y_lm`:
/// `x0 Y = q^{-2m} Y x0`,
/// `x1 Y = Y x1 + (λ/sqrt[2]) q^{-m-1} sqrt([l-m][l+m+1]) Y_{l,m+1} x0`,
/// `x-1 Y = Y x-1 - (λ/sqrt[2]) q^{-m+1} sqrt([l+m][l-m+1]) Y_{l,m-1} x0`,
/// each applied to the profile test set. Requires `0 <= m <= l`, and `m >= 1`
/// for `k = -1` so every operator on the right is defined.
pub fn commute_x_y(d: Deformation, k: i32, l: u32, m: i32) -> Result<f64> {
    check_labels(l, m)?;
    if k == -1 && m == 0 {
        return Err(QError::InvalidQuantumNumbers {
            l: l as i64,
            m: m as i64,
            reason: "the x_-1 exchange relation needs m >= 1",
        });
    }
    let (li, mi) = (l as i64, m as i64);
    let xk = func::realize_x(d, k)?;
    let x0 = func::realize_x(d, 0)?;
    let y = harmonic_operator(d, l, m)?;
    let coeff = d.lambda() / d.qnum(2).sqrt();
    let points = func::sample_points(d, l + 3);
    let mut worst: f64 = 0.0;
    for f in func::test_profiles(0) {
        let lhs = y.clone().then_op(&xk).apply(&f);
        let residual = match k {
            0 => lhs.sub(&xk.clone().then_op(&y).apply(&f).scale(d.pow(-2 * m)))?,
            1 => {
                let mut rhs = xk.clone().then_op(&y).apply(&f);
                if m as u32 != l {
                    let c = coeff * d.pow(-m - 1) * (d.qnum(li - mi) * d.qnum(li + mi + 1)).sqrt();
                    let corr = x0
                        .clone()
                        .then_op(&harmonic_operator(d, l, m + 1)?)
                        .apply(&f);
                    rhs = rhs.add(&corr.scale(c))?;
                }
                lhs.sub(&rhs)?
            }
            _ => {
                let c = coeff * d.pow(1 - m) * (d.qnum(li + mi) * d.qnum(li - mi + 1)).sqrt();
                let corr = x0
                    .clone()
                    .then_op(&harmonic_operator(d, l, m - 1)?)
                    .apply(&f);
                let rhs = xk.clone().then_op(&y).apply(&f).sub(&corr.scale(c))?;
                lhs.sub(&rhs)?
            }
        };
        worst = worst.max(residual.max_abs(&points)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn d(q: f64) -> Deformation {
        Deformation::new(q).unwrap()
    }

    #[test]
    fn low_order_coefficients() {
        let s = phi_coeffs(d(1.2), 1, 0).unwrap();
        assert_eq!((s.lowest_power, s.coeffs.clone()), (1, vec![1.0]));
        let dq = d(1.2);
        let s = phi_coeffs(dq, 2, 0).unwrap();
        assert_eq!(s.lowest_power, 0);
        assert_relative_eq!(s.coeffs[1], -dq.qnum(3), max_relative = 1e-14);
        let s = phi_coeffs(dq, 3, 3).unwrap();
        assert_eq!(s.coeffs, vec![1.0]);
        assert!(phi_coeffs(dq, 2, 3).is_err());
        assert!(phi_coeffs(dq, 2, -1).is_err());
    }

    #[test]
    fn recursion_matches_printed_series() {
        for q in [0.8, 1.0, 1.3] {
            let dq = d(q);
            for l in 0..=5u32 {
                for m in 0..=l as i32 {
                    let a = phi_coeffs(dq, l, m).unwrap().coeffs;
                    let b = printed_series_coeffs(dq, l, m).unwrap();
                    assert_eq!(a.len(), b.len());
                    for (x, y) in a.iter().zip(&b) {
                        assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()), "{q} {l} {m}");
                    }
                }
            }
        }
    }

    #[test]
    fn hypergeometric_edge_cases() {
        let base = d(1.44);
        assert_eq!(q_hypergeometric(base, 0.0, 0.5, 0.5, 0.7).unwrap(), 1.0);
        assert!(matches!(
            q_hypergeometric(base, 0.5, 0.5, 0.5, 0.1),
            Err(QError::NonTerminating { .. })
        ));
        assert!(matches!(
            q_hypergeometric(base, -2.0, 1.0, -1.0, 0.1),
            Err(QError::HypergeometricPole(_))
        ));
    }

    #[test]
    fn closed_form_matches_polynomial() {
        let dq = d(1.2);
        let x = 0.37;
        let expect = 1.0 - dq.qnum(3) * x * x;
        assert_relative_eq!(
            theta_closed_form(dq, 2, 0, x).unwrap(),
            expect,
            max_relative = 1e-13
        );
    }

    #[test]
    fn y00_constant() {
        let (s, n) = normalization(d(0.7), 0, 0).unwrap();
        assert_eq!(s, 1);
        assert_relative_eq!(
            n,
            1.0 / (4.0 * std::f64::consts::PI).sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn classical_y11_value() {
        let v = evaluate_harmonic(d(1.0), &phi_coeffs(d(1.0), 1, 1).unwrap(), 0.6).unwrap();
        assert_relative_eq!(v.re, -(0.5f64).sqrt() * 0.8, max_relative = 1e-14);
    }

    #[test]
    fn parity_of_profile() {
        let dq = d(0.9);
        for l in 0..5u32 {
            for m in 0..=l as i32 {
                let spec = phi_coeffs(dq, l, m).unwrap();
                let th = spec.theta();
                let s = if (l as i32 - m) % 2 == 0 { 1.0 } else { -1.0 };
                for x in [0.1, 0.45, 0.8] {
                    assert!((th.eval(-x).unwrap() - th.eval(x).unwrap() * s).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn closed_lowering_matches_pointwise_ladder() {
        for q in [0.8, 1.0, 1.15] {
            let dq = d(q);
            let pts = func::sample_points(dq, 1);
            for l in 1..=3u32 {
                for m in -(l as i32)..0 {
                    let a = harmonic_function(dq, l, m).unwrap();
                    let b = harmonic_function_by_ladder(dq, l, m).unwrap();
                    assert_eq!(a.winding(), m);
                    assert!(a.max_abs_diff(&b, &pts).unwrap() < 1e-10, "{q} {l} {m}");
                }
            }
        }
    }

    #[test]
    fn ladder_first_cases() {
        let r = ladder_check(d(1.1), 1, 0).unwrap();
        assert!(r.residual < 1e-12 && (r.measured_factor - 1.0).abs() < 1e-12);
        let r = ladder_check(d(1.1), 0, 0).unwrap();
        assert!(r.residual < 1e-14);
    }
}
