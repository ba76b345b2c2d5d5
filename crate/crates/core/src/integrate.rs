//! Jackson-type integration on `(0, 1)`, its parity extension to `(-1, 1)`,
//! and the Gram matrix of the harmonics.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::func::AngularFunction;
use crate::harm;
use crate::kernel::Deformation;
use crate::report::SCHEMA_VERSION;

/// Target size of the neglected geometric tail.
pub const TAIL_TARGET: f64 = 1e-16;

/// Node count of the Gauss-Legendre rule used at `q = 1`.
pub const GAUSS_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    Jackson,
    GaussLegendre,
}

/// A positive quadrature rule on `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    /// `min(q, 1/q)`; 1 for the Gauss-Legendre rule.
    pub q_eff: f64,
    /// Number of nodes.
    pub depth: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Relative size of what truncation dropped, `q_eff^{2K}`.
    pub tail_bound: f64,
}

/// Smallest `K` with `q_eff^{2K} < TAIL_TARGET`.
pub fn default_depth(d: Deformation) -> usize {
    if d.is_classical() {
        return GAUSS_POINTS;
    }
    (TAIL_TARGET.ln() / (2.0 * d.q_eff().ln())).ceil() as usize + 1
}

impl QuadratureRule {
    /// The truncated Jackson rule: nodes `q^{2k+1}`, weights `q^{2k} - q^{2k+2}`
    /// with `q` replaced by `min(q, 1/q)`. At `q = 1` the nodes collapse and
    /// the classical Gauss-Legendre rule is returned instead.
    pub fn jackson(d: Deformation, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(QError::EmptyQuadrature);
        }
        if d.is_classical() {
            return Ok(Self::gauss_legendre(depth.max(GAUSS_POINTS)));
        }
        let qe = d.q_eff();
        let q2 = qe * qe;
        let mut nodes = Vec::with_capacity(depth);
        let mut weights = Vec::with_capacity(depth);
        let mut p = 1.0;
        for _ in 0..depth {
            nodes.push(p * qe);
            weights.push(p * (1.0 - q2));
            p *= q2;
        }
        Ok(Self {
            kind: RuleKind::Jackson,
            q_eff: qe,
            depth,
            nodes,
            weights,
            tail_bound: p,
        })
    }

    /// The rule used by default for `d`.
    pub fn for_deformation(d: Deformation) -> Self {
        Self::jackson(d, default_depth(d)).expect("default depth is positive")
    }

    /// Gauss-Legendre on `(0, 1)` through the Golub-Welsch eigenproblem.
    pub fn gauss_legendre(n: usize) -> Self {
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            let k = i as f64;
            let b = k / (4.0 * k * k - 1.0).sqrt();
            jacobi[(i, i - 1)] = b;
            jacobi[(i - 1, i)] = b;
        }
        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                ((eig.eigenvalues[i] + 1.0) / 2.0, v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        Self {
            kind: RuleKind::GaussLegendre,
            q_eff: 1.0,
            depth: n,
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
            tail_bound: 0.0,
        }
    }

    /// `∫_0^1 f`.
    pub fn positive<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .rev()
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }

    /// `∫_{-1}^1 f` as `∫_0^1 [f(x) + f(-x)]`.
    pub fn symmetric<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.positive(|x| f(x) + f(-x))
    }
}

/// `∫_0^1 f d[x0]` with `depth` Jackson nodes.
pub fn jackson_positive(d: Deformation, f: impl Fn(f64) -> f64, depth: usize) -> Result<f64> {
    Ok(QuadratureRule::jackson(d, depth)?
        .positive(|x| Complex64::new(f(x), 0.0))
        .re)
}

/// `∫_{-1}^1 f d[x0]` with `depth` Jackson nodes.
pub fn jackson_symmetric(d: Deformation, f: impl Fn(f64) -> f64, depth: usize) -> Result<f64> {
    Ok(QuadratureRule::jackson(d, depth)?
        .symmetric(|x| Complex64::new(f(x), 0.0))
        .re)
}

/// `∫ conj(a) b dphi d[x0]`. The angular integral is `2π` when the windings
/// agree and zero otherwise, so mismatched sectors skip the quadrature.
pub fn inner_product(
    rule: &QuadratureRule,
    a: &AngularFunction,
    b: &AngularFunction,
) -> Result<Complex64> {
    if a.winding() != b.winding() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    pair(rule, a, b, true)
}

/// The unconjugated pairing `∫ a b dphi d[x0]`, nonzero only when the windings
/// are opposite. Kept to contrast with [`inner_product`].
pub fn unconjugated_pairing(
    rule: &QuadratureRule,
    a: &AngularFunction,
    b: &AngularFunction,
) -> Result<Complex64> {
    if a.winding() + b.winding() != 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    pair(rule, a, b, false)
}

fn pair(
    rule: &QuadratureRule,
    a: &AngularFunction,
    b: &AngularFunction,
    conjugate: bool,
) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights).rev() {
        for s in [x, -x] {
            let av = a.eval(s)?;
            let av = if conjugate { av.conj() } else { av };
            total += av * b.eval(s)? * w;
        }
    }
    Ok(total * (2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationMode {
    /// The closed-form constants.
    Printed,
    /// Constants rescaled by the measured Gram diagonal.
    Refit,
}

/// Gram matrix summary for `{Y_lm : l <= lmax, 0 <= m <= l}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub schema_version: u32,
    pub q: f64,
    pub lmax: u32,
    #[serde(rename = "K")]
    pub k: usize,
    pub rule: RuleKind,
    pub max_offdiag: f64,
    pub max_diag_dev: f64,
    pub normalization: NormalizationMode,
    /// Diagonal deviation under the closed-form constants, kept when the
    /// refit fallback replaced them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_max_diag_dev: Option<f64>,
    #[serde(skip)]
    pub labels: Vec<(u32, i32)>,
    #[serde(skip)]
    pub matrix: Vec<Vec<Complex64>>,
}

impl GramReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_offdiag.max(self.max_diag_dev)
    }
}

fn gram_of(rule: &QuadratureRule, funcs: &[AngularFunction]) -> Result<Vec<Vec<Complex64>>> {
    let n = funcs.len();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = inner_product(rule, &funcs[i], &funcs[j])?;
            g[i][j] = v;
            g[j][i] = v.conj();
        }
    }
    Ok(g)
}

fn deviations(g: &[Vec<Complex64>]) -> (f64, f64) {
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i == j {
                diag = diag.max((v - 1.0).norm());
            } else {
                off = off.max(v.norm());
            }
        }
    }
    (off, diag)
}

/// The Gram matrix of the normalized harmonics. When the closed-form
/// constants miss the identity by more than `tolerance`, each harmonic is
/// rescaled by its measured norm and the report is labelled as refit.
pub fn gram_matrix(d: Deformation, lmax: u32, tolerance: f64) -> Result<GramReport> {
    let rule = QuadratureRule::for_deformation(d);
    let labels: Vec<(u32, i32)> = (0..=lmax)
        .flat_map(|l| (0..=l as i32).map(move |m| (l, m)))
        .collect();
    let funcs = labels
        .iter()
        .map(|&(l, m)| harm::harmonic_function(d, l, m))
        .collect::<Result<Vec<_>>>()?;
    let g = gram_of(&rule, &funcs)?;
    let (off, diag) = deviations(&g);
    let mut report = GramReport {
        schema_version: SCHEMA_VERSION,
        q: d.q(),
        lmax,
        k: rule.depth,
        rule: rule.kind,
        max_offdiag: off,
        max_diag_dev: diag,
        normalization: NormalizationMode::Printed,
        printed_max_diag_dev: None,
        labels,
        matrix: g,
    };
    if diag > tolerance {
        let refit: Vec<AngularFunction> = funcs
            .iter()
            .enumerate()
            .map(|(i, f)| f.scale(1.0 / report.matrix[i][i].re.sqrt()))
            .collect();
        let g = gram_of(&rule, &refit)?;
        let (off, new_diag) = deviations(&g);
        report.printed_max_diag_dev = Some(diag);
        report.max_offdiag = off;
        report.max_diag_dev = new_diag;
        report.normalization = NormalizationMode::Refit;
        report.matrix = g;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn d(q: f64) -> Deformation {
        Deformation::new(q).unwrap()
    }

    #[test]
    fn depth_meets_tail_target() {
        for q in [0.5, 0.9, 1.1, 2.0] {
            let r = QuadratureRule::for_deformation(d(q));
            assert!(r.tail_bound < TAIL_TARGET, "{q}");
        }
    }

    #[test]
    fn x_squared_at_point_nine() {
        let dq = d(0.9);
        let v = jackson_positive(dq, |x| x * x, default_depth(dq)).unwrap();
        // 1 / (q^2 + 1 + q^-2)
        assert_relative_eq!(v, 1.0 / (0.81 + 1.0 + 1.0 / 0.81), max_relative = 1e-14);
        assert_relative_eq!(v, 0.328453, epsilon = 1e-6);
    }

    #[test]
    fn symmetric_rule_parity() {
        let dq = d(0.9);
        let k = default_depth(dq);
        assert_eq!(jackson_symmetric(dq, |x| x, k).unwrap(), 0.0);
        assert_relative_eq!(
            jackson_symmetric(dq, |_| 1.0, k).unwrap(),
            2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        let r = QuadratureRule::gauss_legendre(GAUSS_POINTS);
        for n in 0..20 {
            let v = r.positive(|x| Complex64::new(x.powi(n), 0.0)).re;
            assert_relative_eq!(v, 1.0 / (n as f64 + 1.0), max_relative = 1e-13);
        }
    }

    #[test]
    fn zero_depth_is_an_error() {
        assert_eq!(
            QuadratureRule::jackson(d(0.9), 0),
            Err(QError::EmptyQuadrature)
        );
    }
}
