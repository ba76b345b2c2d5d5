//! Matrix representations of the SU_q(2) generators and of the vector
//! operators built from them, on the truncated basis `{|l, m> : l <= lmax}`.
//!
//! Position and transverse-derivative operators couple `l` to `l +- 1`, so
//! the top shell `l = lmax` of a truncated matrix product is incomplete.
//! Identities involving them are asserted on the [`Scope::Interior`] block
//! (`l <= lmax - 1` for both row and column).

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::kernel::Deformation;

/// `|l, m>` with `|m| <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisLabel {
    pub l: u32,
    pub m: i32,
}

impl BasisLabel {
    pub fn new(l: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(QError::InvalidQuantumNumbers {
                l: l as i64,
                m: m as i64,
                reason: "|m| must not exceed l",
            });
        }
        Ok(Self { l, m })
    }

    pub fn index(&self) -> usize {
        (self.l * self.l) as usize + (self.m + self.l as i32) as usize
    }
}

/// All labels with `l <= lmax`, ordered by `l` then `m`.
pub fn basis(lmax: u32) -> impl Iterator<Item = BasisLabel> {
    (0..=lmax).flat_map(|l| (-(l as i32)..=l as i32).map(move |m| BasisLabel { l, m }))
}

fn label_at(index: usize) -> BasisLabel {
    let l = (index as f64).sqrt().floor() as u32;
    let l = if ((l + 1) * (l + 1)) as usize <= index {
        l + 1
    } else {
        l
    };
    BasisLabel {
        l,
        m: index as i32 - (l * l) as i32 - l as i32,
    }
}

/// Which matrix elements an identity is asserted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Full,
    /// Rows and columns with `l <= lmax - 1`.
    Interior,
}

/// A complex operator on the truncated angular basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    lmax: u32,
    entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(lmax: u32) -> Self {
        let n = ((lmax + 1) * (lmax + 1)) as usize;
        Self {
            lmax,
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(lmax: u32) -> Self {
        Self::from_diagonal(lmax, |_| 1.0)
    }

    pub fn from_diagonal(lmax: u32, f: impl Fn(BasisLabel) -> f64) -> Self {
        let mut out = Self::zeros(lmax);
        for b in basis(lmax) {
            out.set(b, b, Complex64::new(f(b), 0.0));
        }
        out
    }

    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// `<row| A |col>`.
    pub fn get(&self, row: BasisLabel, col: BasisLabel) -> Complex64 {
        self.entries[(row.index(), col.index())]
    }

    pub fn set(&mut self, row: BasisLabel, col: BasisLabel, value: Complex64) {
        self.entries[(row.index(), col.index())] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self {
            lmax: self.lmax,
            entries: self.entries.adjoint(),
        }
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        Self {
            lmax: self.lmax,
            entries: &self.entries * s,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_on(Scope::Full)
    }

    /// Largest entry modulus within `scope`.
    pub fn max_abs_on(&self, scope: Scope) -> f64 {
        let n = match scope {
            Scope::Full => self.dim(),
            // interior labels are exactly the first lmax^2 indices
            Scope::Interior => (self.lmax * self.lmax) as usize,
        };
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v = self.entries[(i, j)].norm();
                if v.is_nan() {
                    return f64::NAN;
                }
                worst = worst.max(v);
            }
        }
        worst
    }

    /// Largest off-diagonal modulus.
    pub fn off_diagonal_max(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.entries[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Largest `|A(b, b) - f(b)|` over the diagonal, plus the off-diagonal
    /// maximum, both restricted to `scope`.
    pub fn deviation_from_diagonal(&self, scope: Scope, f: impl Fn(BasisLabel) -> f64) -> f64 {
        let target = Self::from_diagonal(self.lmax, f);
        (self - &target).max_abs_on(scope)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.lmax != other.lmax {
            return Err(QError::DimensionMismatch {
                left: self.lmax,
                right: other.lmax,
            });
        }
        Ok(())
    }

    /// Iterates nonzero entries as `(row, col, value)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (BasisLabel, BasisLabel, Complex64)> + '_ {
        let n = self.dim();
        (0..n).flat_map(move |i| {
            (0..n).filter_map(move |j| {
                let v = self.entries[(i, j)];
                (v.norm() > 0.0).then(|| (label_at(i), label_at(j), v))
            })
        })
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.lmax, rhs.lmax, "operator dimension mismatch");
        OperatorMatrix {
            lmax: self.lmax,
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.lmax, rhs.lmax, "operator dimension mismatch");
        OperatorMatrix {
            lmax: self.lmax,
            entries: &self.entries - &rhs.entries,
        }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.lmax, rhs.lmax, "operator dimension mismatch");
        OperatorMatrix {
            lmax: self.lmax,
            entries: &self.entries * &rhs.entries,
        }
    }
}

/// Spherical components `(v_{-1}, v_0, v_{+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorOperator {
    pub minus: OperatorMatrix,
    pub zero: OperatorMatrix,
    pub plus: OperatorMatrix,
}

impl VectorOperator {
    pub fn component(&self, k: i32) -> Option<&OperatorMatrix> {
        match k {
            -1 => Some(&self.minus),
            0 => Some(&self.zero),
            1 => Some(&self.plus),
            _ => None,
        }
    }

    pub fn lmax(&self) -> u32 {
        self.zero.lmax()
    }

    fn check_consistent(&self) -> Result<()> {
        self.zero.check_same(&self.minus)?;
        self.zero.check_same(&self.plus)
    }
}

/// `L_0`, `L_+`, `L_-` in the irreducible blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Generators {
    pub deformation: Deformation,
    pub l0: OperatorMatrix,
    pub plus: OperatorMatrix,
    pub minus: OperatorMatrix,
}

impl Generators {
    pub fn lmax(&self) -> u32 {
        self.l0.lmax()
    }

    /// `q^(a L_0)`.
    pub fn q_power_l0(&self, a: f64) -> OperatorMatrix {
        let d = self.deformation;
        OperatorMatrix::from_diagonal(self.lmax(), |b| d.powf(a * b.m as f64))
    }

    /// `[L_0 + shift]`.
    pub fn bracket_l0(&self, shift: i64) -> OperatorMatrix {
        let d = self.deformation;
        OperatorMatrix::from_diagonal(self.lmax(), |b| d.qnum(b.m as i64 + shift))
    }

    /// The central element `L_- L_+ + [L_0][L_0 + 1]`.
    ///
    /// Only the plus sign is central; `[l-m][l+m+1] + [m][m+1] = [l][l+1]`.
    pub fn casimir(&self) -> OperatorMatrix {
        &(&self.minus * &self.plus) + &(&self.bracket_l0(0) * &self.bracket_l0(1))
    }

    /// `L_- L_+ - [L_0][L_0 + 1]`, the sign-flipped combination. It is not
    /// constant on a multiplet and is kept for comparison.
    pub fn casimir_minus_form(&self) -> OperatorMatrix {
        &(&self.minus * &self.plus) - &(&self.bracket_l0(0) * &self.bracket_l0(1))
    }
}

/// Builds the generators with `L_+|l,m> = sqrt([l-m][l+m+1]) |l,m+1>` and
/// `L_-|l,m> = sqrt([l+m][l-m+1]) |l,m-1>`.
pub fn build_generators(d: Deformation, lmax: u32) -> Generators {
    let mut l0 = OperatorMatrix::zeros(lmax);
    let mut plus = OperatorMatrix::zeros(lmax);
    let mut minus = OperatorMatrix::zeros(lmax);
    for b in basis(lmax) {
        let (l, m) = (b.l as i64, b.m as i64);
        l0.set(b, b, Complex64::new(m as f64, 0.0));
        if m < l {
            let up = BasisLabel { l: b.l, m: b.m + 1 };
            plus.set(
                up,
                b,
                Complex64::new((d.qnum(l - m) * d.qnum(l + m + 1)).sqrt(), 0.0),
            );
        }
        if m > -l {
            let down = BasisLabel { l: b.l, m: b.m - 1 };
            minus.set(
                down,
                b,
                Complex64::new((d.qnum(l + m) * d.qnum(l - m + 1)).sqrt(), 0.0),
            );
        }
    }
    Generators {
        deformation: d,
        l0,
        plus,
        minus,
    }
}

/// The vector `Lambda` assembled from the generators:
/// `Lambda_{+-1} = -+ q^(-L_0) L_+- / sqrt([2])`,
/// `Lambda_0 = (q L_+ L_- - q^-1 L_- L_+) / [2]`.
pub fn build_lambda(g: &Generators) -> VectorOperator {
    let d = g.deformation;
    let two = d.qnum(2);
    let inv = g.q_power_l0(-1.0);
    let plus = (&inv * &g.plus).scale(-1.0 / two.sqrt());
    let minus = (&inv * &g.minus).scale(1.0 / two.sqrt());
    let zero = (&(&g.plus * &g.minus).scale(d.q()) - &(&g.minus * &g.plus).scale(1.0 / d.q()))
        .scale(1.0 / two);
    VectorOperator { minus, zero, plus }
}

/// The invariant `c = q^(-2 L_0) + lambda Lambda_0`.
pub fn invariant_c(g: &Generators, lambda: &VectorOperator) -> OperatorMatrix {
    &g.q_power_l0(-2.0) + &lambda.zero.scale(g.deformation.lambda())
}

/// `u . v = -(1/q) u_1 v_-1 + u_0 v_0 - q u_-1 v_1`.
pub fn scalar_product(
    d: Deformation,
    u: &VectorOperator,
    v: &VectorOperator,
) -> Result<OperatorMatrix> {
    u.check_consistent()?;
    v.check_consistent()?;
    u.zero.check_same(&v.zero)?;
    let q = d.q();
    let a = (&u.plus * &v.minus).scale(-1.0 / q);
    let b = &u.zero * &v.zero;
    let c = (&u.minus * &v.plus).scale(-q);
    Ok(&(&a + &b) + &c)
}

/// Residuals of the vector-operator conditions
/// `[L_0, v_k] = k v_k` and `(L_+- v_k - q^k v_k L_+-) q^(L_0) = sqrt([2]) v_{k+-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorCheck {
    /// Indexed by `k + 1`.
    pub weight: [f64; 3],
    pub raise: [f64; 3],
    pub lower: [f64; 3],
}

impl VectorCheck {
    pub fn max_residual(&self) -> f64 {
        self.weight
            .iter()
            .chain(&self.raise)
            .chain(&self.lower)
            .fold(0.0, |a, &b| if b.is_nan() { f64::NAN } else { a.max(b) })
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_residual() < tolerance
    }
}

pub fn check_vector(
    d: Deformation,
    v: &VectorOperator,
    g: &Generators,
    scope: Scope,
) -> Result<VectorCheck> {
    v.check_consistent()?;
    v.zero.check_same(&g.l0)?;
    let sqrt_two = d.qnum(2).sqrt();
    let q_l0 = g.q_power_l0(1.0);
    let zero = OperatorMatrix::zeros(g.lmax());
    let mut out = VectorCheck {
        weight: [0.0; 3],
        raise: [0.0; 3],
        lower: [0.0; 3],
    };
    for k in -1..=1i32 {
        let vk = v.component(k).expect("k in range");
        let i = (k + 1) as usize;
        out.weight[i] = (&g.l0.commutator(vk) - &vk.scale(k as f64)).max_abs_on(scope);
        for (ladder, shift, slot) in [
            (&g.plus, 1, &mut out.raise[i]),
            (&g.minus, -1, &mut out.lower[i]),
        ] {
            let target = v.component(k + shift).unwrap_or(&zero);
            let lhs = &(&(ladder * vk) - &(vk * ladder).scale(d.pow(k))) * &q_l0;
            *slot = (&lhs - &target.scale(sqrt_two)).max_abs_on(scope);
        }
    }
    Ok(out)
}

/// Expansion coefficients of `x_k |l, m>` onto `|l+1, m+k>` and `|l-1, m+k>`,
/// in that order. Coefficients for states that do not exist vanish.
pub fn position_coefficients(d: Deformation, k: i32, l: u32, m: i32) -> [f64; 2] {
    let (li, mi) = (l as i64, m as i64);
    let b = |n: i64| d.qnum(n);
    let root = |num: f64, den: f64| {
        if den == 0.0 {
            0.0
        } else {
            (num / den).max(0.0).sqrt()
        }
    };
    let two = b(2);
    let (up, down) = match k {
        1 => (
            d.pow(l as i32 - m)
                * root(
                    b(li + mi + 1) * b(li + mi + 2),
                    two * b(2 * li + 1) * b(2 * li + 3),
                ),
            -d.pow(-(l as i32) - m - 1)
                * root(
                    b(li - mi) * b(li - mi - 1),
                    two * b(2 * li + 1) * b(2 * li - 1),
                ),
        ),
        0 => (
            d.pow(-m)
                * root(
                    b(li - mi + 1) * b(li + mi + 1),
                    b(2 * li + 1) * b(2 * li + 3),
                ),
            d.pow(-m) * root(b(li - mi) * b(li + mi), b(2 * li + 1) * b(2 * li - 1)),
        ),
        -1 => (
            d.pow(-(l as i32) - m)
                * root(
                    b(li - mi + 1) * b(li - mi + 2),
                    two * b(2 * li + 1) * b(2 * li + 3),
                ),
            -d.pow(l as i32 - m + 1)
                * root(
                    b(li + mi) * b(li + mi - 1),
                    two * b(2 * li + 1) * b(2 * li - 1),
                ),
        ),
        _ => (0.0, 0.0),
    };
    let target_m = m + k;
    let up = if target_m.unsigned_abs() <= l + 1 {
        up
    } else {
        0.0
    };
    let down = if l >= 1 && target_m.unsigned_abs() < l {
        down
    } else {
        0.0
    };
    [up, down]
}

/// The product-expansion coefficients in their widely quoted form, which
/// differs from [`position_coefficients`] in the sign of the `l-1` term of
/// `x_0` and in the power of `q` on the `l+1` term of `x_-1`. Kept for the
/// discrepancy report.
pub fn quoted_position_coefficients(d: Deformation, k: i32, l: u32, m: i32) -> [f64; 2] {
    let [up, down] = position_coefficients(d, k, l, m);
    match k {
        0 => [up, -down],
        -1 => [up * d.pow(2 * l as i32), down],
        _ => [up, down],
    }
}

/// The unit position vector `x_k` as matrices.
pub fn build_x(d: Deformation, lmax: u32) -> VectorOperator {
    let mut comps = [
        OperatorMatrix::zeros(lmax),
        OperatorMatrix::zeros(lmax),
        OperatorMatrix::zeros(lmax),
    ];
    for b in basis(lmax) {
        for k in -1..=1i32 {
            let [up, down] = position_coefficients(d, k, b.l, b.m);
            let m = b.m + k;
            let slot = &mut comps[(k + 1) as usize];
            if b.l < lmax && up != 0.0 {
                slot.set(BasisLabel { l: b.l + 1, m }, b, Complex64::new(up, 0.0));
            }
            if b.l >= 1 && down != 0.0 {
                slot.set(BasisLabel { l: b.l - 1, m }, b, Complex64::new(down, 0.0));
            }
        }
    }
    let [minus, zero, plus] = comps;
    VectorOperator { minus, zero, plus }
}

/// The transverse derivative: the q-cross product of `x` and `Lambda`
/// plus `x_k c`.
pub fn build_partial(
    d: Deformation,
    x: &VectorOperator,
    lambda: &VectorOperator,
    c: &OperatorMatrix,
) -> VectorOperator {
    let q = d.q();
    let plus = &(&(&x.plus * &lambda.zero).scale(1.0 / q) - &(&x.zero * &lambda.plus).scale(q))
        + &(&x.plus * c);
    let zero = &(&(&(&x.plus * &lambda.minus) - &(&x.zero * &lambda.zero).scale(d.lambda()))
        - &(&x.minus * &lambda.plus))
        + &(&x.zero * c);
    let minus = &(&(&x.zero * &lambda.minus).scale(1.0 / q) - &(&x.minus * &lambda.zero).scale(q))
        + &(&x.minus * c);
    VectorOperator { minus, zero, plus }
}

/// Every matrix the algebra checks need, built once.
#[derive(Debug, Clone)]
pub struct AlgebraMatrices {
    pub deformation: Deformation,
    pub generators: Generators,
    pub lambda: VectorOperator,
    pub c: OperatorMatrix,
    pub x: VectorOperator,
    pub partial: VectorOperator,
}

impl AlgebraMatrices {
    pub fn build(d: Deformation, lmax: u32) -> Self {
        let generators = build_generators(d, lmax);
        let lambda = build_lambda(&generators);
        let c = invariant_c(&generators, &lambda);
        let x = build_x(d, lmax);
        let partial = build_partial(d, &x, &lambda, &c);
        Self {
            deformation: d,
            generators,
            lambda,
            c,
            x,
            partial,
        }
    }

    pub fn lmax(&self) -> u32 {
        self.generators.lmax()
    }

    /// The angular part of the squared momentum, `-(d . d) - c`.
    pub fn angular_kinetic(&self) -> OperatorMatrix {
        let dd = scalar_product(self.deformation, &self.partial, &self.partial).expect("same lmax");
        &dd.scale(-1.0) - &self.c
    }
}

/// Transverse-derivative matrix elements measured against those of `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialRatioRow {
    pub from_l: u32,
    pub to_l: u32,
    /// `<to|d_k|from> / <to|x_k|from>`, identical for every `k` and `m`.
    pub computed: f64,
    /// Largest deviation of the ratio across `k` and `m`.
    pub spread: f64,
    /// `(c_to - c_from) / lambda^2`; absent at `q = 1`.
    pub commutator_oracle: Option<f64>,
    /// `[2l+2]/[2]` upward, `-[2l]/[2]` downward.
    pub closed_form: f64,
    /// The widely quoted `[2l+2]/[2l]` upward and `-[2l]/[2l]` downward;
    /// absent where `[2l] = 0`.
    pub quoted: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialSquareRow {
    pub l: u32,
    /// Diagonal of `d . d` on the `l` block.
    pub computed: f64,
    /// `-[2l][2l+2]/[2]^2 - c_l^2`.
    pub closed_form: f64,
    /// The widely quoted `-[2l][2l+1]/[2]^2 - c_l^2`.
    pub quoted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialRatioReport {
    pub q: f64,
    pub lmax: u32,
    /// Set at `q = 1`, where `d = lambda^-2 [c, x]` is singular.
    pub classical_degenerate: bool,
    /// `max |d - lambda^-2 [c, x]|` on the interior block.
    pub commutator_identity_residual: Option<f64>,
    pub ratios: Vec<PartialRatioRow>,
    pub squares: Vec<PartialSquareRow>,
}

pub fn partial_ratio_oracle(d: Deformation, lmax: u32) -> PartialRatioReport {
    partial_ratio_from(&AlgebraMatrices::build(d, lmax))
}

pub fn partial_ratio_from(alg: &AlgebraMatrices) -> PartialRatioReport {
    let d = alg.deformation;
    let lmax = alg.lmax();
    let two = d.qnum(2);
    let classical = d.is_classical();

    let commutator_identity_residual = (!classical).then(|| {
        let lam2 = d.lambda() * d.lambda();
        (-1..=1)
            .map(|k| {
                let xk = alg.x.component(k).unwrap();
                let dk = alg.partial.component(k).unwrap();
                let comm = alg.c.commutator(xk).scale(1.0 / lam2);
                (dk - &comm).max_abs_on(Scope::Interior)
            })
            .fold(0.0, f64::max)
    });

    let mut ratios = Vec::new();
    for from in 0..lmax {
        for to in [from + 1, from.wrapping_sub(1)] {
            if to > lmax - 1 {
                continue;
            }
            let mut values = Vec::new();
            for k in -1..=1i32 {
                let xk = alg.x.component(k).unwrap();
                let dk = alg.partial.component(k).unwrap();
                for m in -(from as i32)..=from as i32 {
                    let mt = m + k;
                    if mt.unsigned_abs() > to {
                        continue;
                    }
                    let row = BasisLabel { l: to, m: mt };
                    let col = BasisLabel { l: from, m };
                    let xe = xk.get(row, col).re;
                    if xe.abs() > 1e-12 {
                        values.push(dk.get(row, col).re / xe);
                    }
                }
            }
            let computed = values[0];
            let spread = values
                .iter()
                .map(|v| (v - computed).abs())
                .fold(0.0, f64::max);
            let fl = from as i64;
            let (closed_form, quoted) = if to > from {
                let den = d.qnum(2 * fl);
                (
                    d.qnum(2 * fl + 2) / two,
                    (den != 0.0).then(|| d.qnum(2 * fl + 2) / den),
                )
            } else {
                let den = d.qnum(2 * fl);
                (-d.qnum(2 * fl) / two, (den != 0.0).then_some(-1.0))
            };
            let commutator_oracle =
                (!classical).then(|| (d.c_eig(to) - d.c_eig(from)) / (d.lambda() * d.lambda()));
            ratios.push(PartialRatioRow {
                from_l: from,
                to_l: to,
                computed,
                spread,
                commutator_oracle,
                closed_form,
                quoted,
            });
        }
    }

    let dd = scalar_product(d, &alg.partial, &alg.partial).expect("same lmax");
    let squares = (0..lmax)
        .map(|l| {
            let li = l as i64;
            let b = BasisLabel { l, m: 0 };
            let c = d.c_eig(l);
            PartialSquareRow {
                l,
                computed: dd.get(b, b).re,
                closed_form: -d.cprime_eig(l) - c * c,
                quoted: -d.qnum(2 * li) / two * (d.qnum(2 * li + 1) / two) - c * c,
            }
        })
        .collect();

    PartialRatioReport {
        q: d.q(),
        lmax,
        classical_degenerate: classical,
        commutator_identity_residual,
        ratios,
        squares,
    }
}
