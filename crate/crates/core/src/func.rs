//! Function-space realization of the position unit vector and the generators.
//!
//! An [`AngularFunction`] is `e^{i m phi} g(x0)`: the winding `m` is kept as an
//! integer and only the profile `g` is ever evaluated. Operators are lists of
//! primitive steps applied in order. The dilatation `q^{a N0}` acts by
//! rescaling the argument, so every evaluation is an exact composition of
//! closures with no grid anywhere.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{QError, Result};
use crate::jet::Jet;
use crate::kernel::Deformation;

/// A profile `x0 -> g(x0)` evaluated on jets.
pub type Profile = Arc<dyn Fn(&Jet) -> Jet + Send + Sync>;

/// `e^{i m phi} g(x0)`.
#[derive(Clone)]
pub struct AngularFunction {
    winding: i32,
    profile: Profile,
}

impl fmt::Debug for AngularFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AngularFunction")
            .field("winding", &self.winding)
            .finish_non_exhaustive()
    }
}

impl AngularFunction {
    pub fn new(winding: i32, profile: impl Fn(&Jet) -> Jet + Send + Sync + 'static) -> Self {
        Self {
            winding,
            profile: Arc::new(profile),
        }
    }

    pub fn from_profile(winding: i32, profile: Profile) -> Self {
        Self { winding, profile }
    }

    pub fn zero(winding: i32) -> Self {
        Self::new(winding, |_| Jet::zero())
    }

    pub fn constant(winding: i32, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self::new(winding, move |_| Jet::constant(c))
    }

    /// `sum_k coeffs[k] x0^k`, evaluated by Horner's rule.
    pub fn polynomial(winding: i32, coeffs: Vec<f64>) -> Self {
        Self::new(winding, move |x| {
            coeffs
                .iter()
                .rev()
                .fold(Jet::zero(), |acc, &c| acc * *x + c)
        })
    }

    pub fn monomial(winding: i32, n: u32) -> Self {
        Self::new(winding, move |x| x.powi(n))
    }

    pub fn winding(&self) -> i32 {
        self.winding
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn eval_jet(&self, x: &Jet) -> Jet {
        (self.profile)(x)
    }

    /// The profile value at a point of the open interval `(-1, 1)`.
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        if !(x.is_finite() && x.abs() < 1.0) {
            return Err(QError::OutsideInterval(x));
        }
        Ok(self.eval_jet(&Jet::variable(x)).value())
    }

    pub fn with_winding(&self, winding: i32) -> Self {
        Self {
            winding,
            profile: self.profile.clone(),
        }
    }

    fn same_sector(&self, other: &Self) -> Result<()> {
        if self.winding != other.winding {
            return Err(QError::WindingMismatch {
                left: self.winding,
                right: other.winding,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_sector(other)?;
        let (a, b) = (self.profile.clone(), other.profile.clone());
        Ok(Self::new(self.winding, move |x| a(x) + b(x)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_sector(other)?;
        let (a, b) = (self.profile.clone(), other.profile.clone());
        Ok(Self::new(self.winding, move |x| a(x) - b(x)))
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        let a = self.profile.clone();
        Self::new(self.winding, move |x| a(x) * c)
    }

    /// Largest `|self(x) - other(x)|` over `points`. Functions in different
    /// winding sectors only agree if both vanish, so the mismatch is an error.
    pub fn max_abs_diff(&self, other: &Self, points: &[f64]) -> Result<f64> {
        self.same_sector(other)?;
        let mut worst: f64 = 0.0;
        for &x in points {
            let d = (self.eval(x)? - other.eval(x)?).norm();
            if d.is_nan() {
                return Ok(f64::NAN);
            }
            worst = worst.max(d);
        }
        Ok(worst)
    }

    /// Largest `|self(x)|` over `points`.
    pub fn max_abs(&self, points: &[f64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &x in points {
            let v = self.eval(x)?.norm();
            if v.is_nan() {
                return Ok(f64::NAN);
            }
            worst = worst.max(v);
        }
        Ok(worst)
    }
}

/// Builds an operator whose shape depends on the winding it is applied to.
pub type WindingRule = Arc<dyn Fn(i32) -> AngularOperator + Send + Sync>;

/// One step of an operator composition.
#[derive(Clone)]
pub enum Primitive {
    /// Multiply the profile by a function of `x0`.
    Multiply(Profile),
    /// Multiply by a constant.
    Scale(Complex64),
    /// `q^{a N0}`: `g(x0) -> g(q^a x0)`.
    Dilate(f64),
    /// Multiply by `e^{i k phi}`.
    PhaseShift(i32),
    /// `(1/x0) (1 - q^{-2 N0}) / (1 - q^{-2})`; the derivative at `q = 1`.
    QDifference,
    /// `(1/x0) (1 - q^{2 N0}) / (1 - q^2)`; the derivative at `q = 1`.
    QDifferenceConjugate,
    /// Reads the current winding and applies the operator built from it.
    WindingRead(WindingRule),
}

impl fmt::Debug for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Primitive::Multiply(_) => write!(f, "Multiply"),
            Primitive::Scale(c) => write!(f, "Scale({c})"),
            Primitive::Dilate(a) => write!(f, "Dilate({a})"),
            Primitive::PhaseShift(k) => write!(f, "PhaseShift({k})"),
            Primitive::QDifference => write!(f, "QDifference"),
            Primitive::QDifferenceConjugate => write!(f, "QDifferenceConjugate"),
            Primitive::WindingRead(_) => write!(f, "WindingRead"),
        }
    }
}

/// A composition of primitives, stored in application order.
#[derive(Clone, Debug)]
pub struct AngularOperator {
    d: Deformation,
    steps: Vec<Primitive>,
}

impl AngularOperator {
    pub fn identity(d: Deformation) -> Self {
        Self {
            d,
            steps: Vec::new(),
        }
    }

    pub fn primitive(d: Deformation, p: Primitive) -> Self {
        Self { d, steps: vec![p] }
    }

    pub fn multiply(d: Deformation, f: impl Fn(&Jet) -> Jet + Send + Sync + 'static) -> Self {
        Self::primitive(d, Primitive::Multiply(Arc::new(f)))
    }

    pub fn scalar(d: Deformation, c: impl Into<Complex64>) -> Self {
        Self::primitive(d, Primitive::Scale(c.into()))
    }

    pub fn winding_read(
        d: Deformation,
        rule: impl Fn(i32) -> AngularOperator + Send + Sync + 'static,
    ) -> Self {
        Self::primitive(d, Primitive::WindingRead(Arc::new(rule)))
    }

    pub fn deformation(&self) -> Deformation {
        self.d
    }

    pub fn steps(&self) -> &[Primitive] {
        &self.steps
    }

    /// `step ∘ self`.
    pub fn then(mut self, step: Primitive) -> Self {
        self.steps.push(step);
        self
    }

    /// `outer ∘ self`.
    pub fn then_op(mut self, outer: &AngularOperator) -> Self {
        self.steps.extend(outer.steps.iter().cloned());
        self
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &AngularOperator) -> Self {
        inner.clone().then_op(self)
    }

    /// `self^n` for `n >= 0`.
    pub fn power(&self, n: u32) -> Self {
        let mut out = Self::identity(self.d);
        for _ in 0..n {
            out = out.then_op(self);
        }
        out
    }

    /// Winding of the output when applied to a function of winding `m`.
    pub fn output_winding(&self, m: i32) -> i32 {
        self.steps.iter().fold(m, |w, s| match s {
            Primitive::PhaseShift(k) => w + k,
            Primitive::WindingRead(rule) => rule(w).output_winding(w),
            _ => w,
        })
    }

    pub fn apply(&self, f: &AngularFunction) -> AngularFunction {
        self.steps
            .iter()
            .fold(f.clone(), |acc, step| apply_step(self.d, step, acc))
    }
}

fn apply_step(d: Deformation, step: &Primitive, f: AngularFunction) -> AngularFunction {
    let m = f.winding;
    let g = f.profile;
    match step {
        Primitive::Multiply(h) => {
            let h = h.clone();
            AngularFunction::new(m, move |x| h(x) * g(x))
        }
        Primitive::Scale(c) => {
            let c = *c;
            AngularFunction::new(m, move |x| g(x) * c)
        }
        Primitive::Dilate(a) => {
            let s = d.powf(*a);
            AngularFunction::new(m, move |x| g(&x.scale(s)))
        }
        Primitive::PhaseShift(k) => AngularFunction::from_profile(m + k, g),
        Primitive::QDifference => q_difference(d, m, g, -2.0),
        Primitive::QDifferenceConjugate => q_difference(d, m, g, 2.0),
        Primitive::WindingRead(rule) => rule(m).apply(&AngularFunction::from_profile(m, g)),
    }
}

/// `(g(x) - g(q^a x)) / (x (1 - q^a))`, or `g'(x)` when `q = 1`.
fn q_difference(d: Deformation, m: i32, g: Profile, a: f64) -> AngularFunction {
    if d.is_classical() {
        return AngularFunction::new(m, move |x| g(x).derivative(x));
    }
    let s = d.powf(a);
    AngularFunction::new(m, move |x| {
        let num = g(x) - g(&x.scale(s));
        num / x.scale(1.0 - s)
    })
}

/// `M_1(x) = -sqrt(q/[2]) sqrt(1 - q^2 x^2)`, the multiplier inside `x~_1`.
pub fn m_plus(d: Deformation) -> Profile {
    let q = d.q();
    let pre = -(q / d.qnum(2)).sqrt();
    Arc::new(move |x: &Jet| (Jet::constant(1.0) - *x * *x * (q * q)).sqrt() * pre)
}

/// `M_-1(x) = sqrt(1/([2] q)) sqrt(1 - x^2 / q^2)`, the multiplier inside `x~_-1`.
pub fn m_minus(d: Deformation) -> Profile {
    let q = d.q();
    let pre = (1.0 / (d.qnum(2) * q)).sqrt();
    Arc::new(move |x: &Jet| (Jet::constant(1.0) - *x * *x * (1.0 / (q * q))).sqrt() * pre)
}

fn sign(k: i32) -> f64 {
    if k > 0 {
        1.0
    } else {
        -1.0
    }
}

fn multiplier(d: Deformation, k: i32) -> Profile {
    if k > 0 {
        m_plus(d)
    } else {
        m_minus(d)
    }
}

/// `x~_k = e^{-i k phi} x_k` for `k = ±1`: dilate by `q^{2k N0}`, then multiply.
pub fn x_tilde(d: Deformation, k: i32) -> AngularOperator {
    AngularOperator::primitive(d, Primitive::Dilate(2.0 * sign(k)))
        .then(Primitive::Multiply(multiplier(d, k)))
}

/// The inverse of [`x_tilde`].
pub fn x_tilde_inverse(d: Deformation, k: i32) -> AngularOperator {
    let mk = multiplier(d, k);
    let recip: Profile = Arc::new(move |x: &Jet| mk(x).recip());
    AngularOperator::primitive(d, Primitive::Multiply(recip))
        .then(Primitive::Dilate(-2.0 * sign(k)))
}

/// `x~_k^n` for any integer `n`.
pub fn x_tilde_pow(d: Deformation, k: i32, n: i32) -> AngularOperator {
    if n >= 0 {
        x_tilde(d, k).power(n as u32)
    } else {
        x_tilde_inverse(d, k).power(n.unsigned_abs())
    }
}

/// The realized unit vector component `x_k`, `k ∈ {-1, 0, 1}`.
pub fn realize_x(d: Deformation, k: i32) -> Result<AngularOperator> {
    match k {
        0 => Ok(AngularOperator::multiply(d, |x| *x)),
        1 | -1 => Ok(x_tilde(d, k).then(Primitive::PhaseShift(k))),
        _ => Err(QError::InvalidQuantumNumbers {
            l: 1,
            m: k as i64,
            reason: "vector component index must be -1, 0 or 1",
        }),
    }
}

/// The three realized components keyed by `k + 1`.
pub fn realize_x_all(d: Deformation) -> [AngularOperator; 3] {
    [-1, 0, 1].map(|k| realize_x(d, k).expect("valid component"))
}

/// Realized generators.
#[derive(Clone, Debug)]
pub struct RealizedGenerators {
    pub l0: AngularOperator,
    pub plus: AngularOperator,
    pub minus: AngularOperator,
}

/// `L0 = -i d/dphi` together with the raising and lowering operators in which
/// the exponents `L0` are read off the winding of the argument.
pub fn realize_generators(d: Deformation) -> RealizedGenerators {
    let sqrt2 = d.qnum(2).sqrt();
    let l0 = AngularOperator::winding_read(d, move |m| AngularOperator::scalar(d, m as f64));
    let plus = AngularOperator::winding_read(d, move |m| {
        AngularOperator::scalar(d, sqrt2 * d.pow(m))
            .then_op(&x_tilde_pow(d, 1, -m))
            .then(Primitive::QDifference)
            .then_op(&x_tilde_pow(d, 1, m + 1))
            .then(Primitive::PhaseShift(1))
    });
    let minus = AngularOperator::winding_read(d, move |m| {
        AngularOperator::scalar(d, sqrt2 * d.pow(m))
            .then_op(&x_tilde_pow(d, -1, m))
            .then(Primitive::QDifferenceConjugate)
            .then_op(&x_tilde_pow(d, -1, 1 - m))
            .then(Primitive::PhaseShift(-1))
    });
    RealizedGenerators { l0, plus, minus }
}

impl RealizedGenerators {
    /// `q^{a L0}`.
    pub fn q_power_l0(&self, a: f64) -> AngularOperator {
        let d = self.l0.deformation();
        AngularOperator::winding_read(d, move |m| AngularOperator::scalar(d, d.powf(a * m as f64)))
    }

    /// `[L0 + shift]`.
    pub fn bracket_l0(&self, shift: i32) -> AngularOperator {
        let d = self.l0.deformation();
        AngularOperator::winding_read(d, move |m| {
            AngularOperator::scalar(d, d.qnum((m + shift) as i64))
        })
    }

    /// `L_- L_+ + [L0][L0 + 1]` applied to `f`.
    pub fn casimir(&self, f: &AngularFunction) -> Result<AngularFunction> {
        let a = self.minus.apply(&self.plus.apply(f));
        let b = self.bracket_l0(0).apply(&self.bracket_l0(1).apply(f));
        a.add(&b)
    }
}

/// The dilatation generator `N0 = x0 d/dx0`, so `[N0, x0^n] = n x0^n`.
pub fn apply_n0(f: &AngularFunction) -> AngularFunction {
    let g = f.profile.clone();
    AngularFunction::new(f.winding, move |x| *x * g(x).derivative(x))
}

/// Points where every intermediate argument of an operator with `depth`
/// nested dilations by `q^{±2}` stays inside the domain of both multipliers.
pub fn sample_points(d: Deformation, depth: u32) -> Vec<f64> {
    let scale = d.q_eff().powi(2 * depth as i32 + 1);
    [0.1, 0.3, 0.5, 0.7]
        .iter()
        .flat_map(|&p| [p * scale, -p * scale])
        .collect()
}

/// The profile test set used for pointwise operator identities.
pub fn test_profiles(winding: i32) -> Vec<AngularFunction> {
    vec![
        AngularFunction::constant(winding, 1.0),
        AngularFunction::monomial(winding, 1),
        AngularFunction::monomial(winding, 2),
        AngularFunction::monomial(winding, 3),
    ]
}

/// Largest residual of the commutation relations of the realized `x` on
/// `funcs`: `x0 x_{±1} = q^{∓2} x_{±1} x0` and `x1 x-1 - x-1 x1 = λ x0^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionRelations {
    pub dilation_relation: f64,
    pub exchange_relation: f64,
}

pub fn check_position_relations(
    d: Deformation,
    funcs: &[AngularFunction],
    points: &[f64],
) -> Result<PositionRelations> {
    let [xm, x0, xp] = realize_x_all(d);
    let mut dil: f64 = 0.0;
    let mut exch: f64 = 0.0;
    for f in funcs {
        for (k, xk) in [(1, &xp), (-1, &xm)] {
            let lhs = x0.apply(&xk.apply(f));
            let rhs = xk.apply(&x0.apply(f)).scale(d.pow(-2 * k));
            dil = dil.max(lhs.max_abs_diff(&rhs, points)?);
        }
        let lhs = xp.apply(&xm.apply(f)).sub(&xm.apply(&xp.apply(f)))?;
        let rhs = x0.apply(&x0.apply(f)).scale(d.lambda());
        exch = exch.max(lhs.max_abs_diff(&rhs, points)?);
    }
    Ok(PositionRelations {
        dilation_relation: dil,
        exchange_relation: exch,
    })
}

/// Residuals of `[L0, v_k] = k v_k` and `(L± v_k - q^k v_k L±) q^{L0} = sqrt([2]) v_{k±1}`
/// for the realized `x`, applied to each function in `funcs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseVectorCheck {
    pub weight: f64,
    pub raise: f64,
    pub lower: f64,
}

impl PointwiseVectorCheck {
    pub fn max_residual(&self) -> f64 {
        self.weight.max(self.raise).max(self.lower)
    }
}

pub fn check_vector_pointwise(
    d: Deformation,
    v: &[AngularOperator; 3],
    funcs: &[AngularFunction],
    points: &[f64],
) -> Result<PointwiseVectorCheck> {
    let g = realize_generators(d);
    let sqrt2 = d.qnum(2).sqrt();
    let ql0 = g.q_power_l0(1.0);
    let mut out = PointwiseVectorCheck {
        weight: 0.0,
        raise: 0.0,
        lower: 0.0,
    };
    for f in funcs {
        for k in -1..=1i32 {
            let vk = &v[(k + 1) as usize];
            let lhs = g.l0.apply(&vk.apply(f)).sub(&vk.apply(&g.l0.apply(f)))?;
            out.weight = out
                .weight
                .max(lhs.max_abs_diff(&vk.apply(f).scale(k as f64), points)?);

            let shifted = ql0.apply(f);
            for (s, lpm) in [(1, &g.plus), (-1, &g.minus)] {
                let lhs = lpm
                    .apply(&vk.apply(&shifted))
                    .sub(&vk.apply(&lpm.apply(&shifted)).scale(d.pow(k)))?;
                let target = k + s;
                let res = if target.abs() <= 1 {
                    let rhs = v[(target + 1) as usize].apply(f).scale(sqrt2);
                    lhs.max_abs_diff(&rhs, points)?
                } else {
                    lhs.max_abs(points)?
                };
                if s > 0 {
                    out.raise = out.raise.max(res);
                } else {
                    out.lower = out.lower.max(res);
                }
            }
        }
    }
    Ok(out)
}
