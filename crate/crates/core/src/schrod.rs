//! The deformed radial problem: effective angular momentum, closed-form
//! spectra and a finite-difference eigensolver that cross-checks them.
//!
//! Units are `hbar = mass = 1` and `H = p^2 / 2 + V(r)`. With
//! `psi = (chi(r) / r) Y_lm` the radial equation is
//! `-chi''/2 + [X / (2 r^2) + V] chi = E chi`, where `X = L(L+1)` is the
//! deformed centrifugal coefficient.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::integrate::QuadratureRule;
use crate::kernel::Deformation;
use crate::report::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Potential {
    /// `V = -1/r`.
    Coulomb,
    /// `V = r^2 / 2`.
    Oscillator,
}

impl Potential {
    pub fn value(&self, r: f64) -> f64 {
        match self {
            Potential::Coulomb => -1.0 / r,
            Potential::Oscillator => 0.5 * r * r,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Potential::Coulomb => "coulomb",
            Potential::Oscillator => "oscillator",
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Potential {
    type Err = QError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coulomb" => Ok(Potential::Coulomb),
            "oscillator" => Ok(Potential::Oscillator),
            other => Err(QError::InvalidProblem(format!(
                "unknown potential {other:?}"
            ))),
        }
    }
}

/// `[2l]/[2] [2l+2]/[2] + c_l^2 - c_l`, the coefficient of `1/r^2` in `p^2`
/// on the `(2l+1)`-dimensional representation.
pub fn angular_coefficient(d: Deformation, l: u32) -> f64 {
    let c = d.c_eig(l);
    d.cprime_eig(l) + c * c - c
}

/// The nonnegative root `L` of `L(L+1) = angular_coefficient`.
pub fn effective_l(d: Deformation, l: u32) -> f64 {
    if d.is_classical() {
        return l as f64;
    }
    let x = angular_coefficient(d, l);
    // (-1 + sqrt(1 + 4x)) / 2 written without cancellation
    2.0 * x / (1.0 + (1.0 + 4.0 * x).sqrt())
}

/// `-1 / (2 (n + L + 1)^2)`.
pub fn coulomb_energy(d: Deformation, n: u32, l: u32) -> f64 {
    let big_n = n as f64 + effective_l(d, l) + 1.0;
    -0.5 / (big_n * big_n)
}

/// `2n + L + 3/2`.
pub fn oscillator_energy(d: Deformation, n: u32, l: u32) -> f64 {
    2.0 * n as f64 + effective_l(d, l) + 1.5
}

pub fn closed_form_energy(potential: Potential, d: Deformation, n: u32, l: u32) -> f64 {
    match potential {
        Potential::Coulomb => coulomb_energy(d, n, l),
        Potential::Oscillator => oscillator_energy(d, n, l),
    }
}

/// Radial extent and resolution of the coarse grid. The solver also runs on
/// a grid with twice the points for the Richardson step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub r_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    pub potential: Potential,
    pub q: f64,
    pub l: u32,
    pub grid: Grid,
    pub n_states: usize,
}

/// Smallest radius resolved by the logarithmic Coulomb grid.
const LOG_GRID_R_MIN: f64 = 1e-6;

/// Accepted gap between the fine-grid and extrapolated eigenvalues.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-4;

impl RadialProblem {
    pub fn new(
        potential: Potential,
        d: Deformation,
        l: u32,
        grid: Grid,
        n_states: usize,
    ) -> Result<Self> {
        if !(grid.r_max.is_finite() && grid.r_max > 0.0) {
            return Err(QError::InvalidProblem(format!(
                "r_max must be positive, got {}",
                grid.r_max
            )));
        }
        if grid.points < 200 {
            return Err(QError::InvalidProblem(format!(
                "at least 200 grid points are required, got {}",
                grid.points
            )));
        }
        if n_states == 0 || n_states >= grid.points {
            return Err(QError::InvalidProblem(format!(
                "cannot resolve {n_states} states"
            )));
        }
        Ok(Self {
            potential,
            q: d.q(),
            l,
            grid,
            n_states,
        })
    }

    /// A grid sized for the lowest `n_states` states.
    pub fn with_default_grid(
        potential: Potential,
        d: Deformation,
        l: u32,
        n_states: usize,
    ) -> Result<Self> {
        let big_l = effective_l(d, l);
        let top = n_states as f64 - 1.0;
        let grid = match potential {
            Potential::Coulomb => {
                let shell = top + big_l + 1.0;
                Grid {
                    r_max: (4.0 * shell * shell + 30.0).max(60.0),
                    points: 2000,
                }
            }
            Potential::Oscillator => {
                let energy = 2.0 * top + big_l + 1.5;
                Grid {
                    r_max: (2.0 * energy).sqrt() + 8.0,
                    points: 1200,
                }
            }
        };
        Self::new(potential, d, l, grid, n_states)
    }

    pub fn deformation(&self) -> Result<Deformation> {
        Deformation::new(self.q)
    }
}

/// A discretized radial operator `B^{-1/2} A B^{-1/2}` in symmetric
/// tridiagonal form, with the abscissae and the factor `B^{-1/2}`.
#[derive(Debug, Clone)]
struct Discretization {
    diag: Vec<f64>,
    off: Vec<f64>,
    radii: Vec<f64>,
    /// Converts an eigenvector of the symmetric form into `chi` samples.
    to_chi: Vec<f64>,
    /// Integration weight of each node for `∫ dr`.
    dr: Vec<f64>,
}

fn discretize(p: &RadialProblem, x: f64, points: usize) -> Discretization {
    match p.potential {
        Potential::Coulomb => {
            // r = e^t and chi = e^{t/2} w turn the equation into
            // -w''/2 + [(L+1/2)^2/2 + r^2 V] w = E r^2 w on a uniform t grid.
            let t0 = LOG_GRID_R_MIN.ln();
            let t1 = p.grid.r_max.ln();
            let h = (t1 - t0) / (points as f64 + 1.0);
            let shift = 0.5 * (x + 0.25);
            let radii: Vec<f64> = (1..=points).map(|i| (t0 + h * i as f64).exp()).collect();
            let diag = radii
                .iter()
                .map(|&r| (1.0 / (h * h) + shift + r * r * p.potential.value(r)) / (r * r))
                .collect();
            let off = radii
                .windows(2)
                .map(|w| -0.5 / (h * h) / (w[0] * w[1]))
                .collect();
            // w = u / r and chi = sqrt(r) w
            let to_chi = radii.iter().map(|&r| 1.0 / r.sqrt()).collect();
            let dr = radii.iter().map(|&r| r * h).collect();
            Discretization {
                diag,
                off,
                radii,
                to_chi,
                dr,
            }
        }
        Potential::Oscillator => {
            let h = p.grid.r_max / (points as f64 + 1.0);
            let radii: Vec<f64> = (1..=points).map(|i| h * i as f64).collect();
            let diag = radii
                .iter()
                .map(|&r| 1.0 / (h * h) + 0.5 * x / (r * r) + p.potential.value(r))
                .collect();
            let off = vec![-0.5 / (h * h); points - 1];
            Discretization {
                diag,
                off,
                to_chi: vec![1.0; points],
                dr: vec![h; points],
                radii,
            }
        }
    }
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let denom = if d == 0.0 {
            f64::EPSILON * (off[i - 1].abs() + 1.0)
        } else {
            d
        };
        d = diag[i] - x - off[i - 1] * off[i - 1] / denom;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest eigenvalue by bisection on the Sturm count.
fn tridiagonal_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let radius = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector for a known eigenvalue by inverse iteration.
fn tridiagonal_eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let shift = lambda + 1e-10 * (1.0 + lambda.abs());
    let mut v = vec![1.0; n];
    for _ in 0..3 {
        // Thomas algorithm on (T - shift) y = v
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut denom = diag[0] - shift;
        c[0] = if n > 1 { off[0] / denom } else { 0.0 };
        y[0] = v[0] / denom;
        for i in 1..n {
            denom = diag[i] - shift - off[i - 1] * c[i - 1];
            if i < n - 1 {
                c[i] = off[i] / denom;
            }
            y[i] = (v[i] - off[i - 1] * y[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        v = y.into_iter().map(|a| a / norm).collect();
    }
    v
}

/// Lowest eigenvalues of one discretization.
fn solve_grid(p: &RadialProblem, x: f64, points: usize) -> (Discretization, Vec<f64>) {
    let disc = discretize(p, x, points);
    let values = (0..p.n_states)
        .map(|k| tridiagonal_eigenvalue(&disc.diag, &disc.off, k))
        .collect();
    (disc, values)
}

/// Eigenvalues from the coarse grid, the doubled grid, and their
/// second-order Richardson combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub problem: RadialProblem,
    pub effective_l: f64,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub energies: Vec<f64>,
}

/// Solves the radial problem on two grids and extrapolates. Fails with
/// [`QError::NotConverged`] when the extrapolation moves a level by more
/// than [`CONVERGENCE_TOLERANCE`].
pub fn radial_eigensolve(p: &RadialProblem) -> Result<RadialSolution> {
    let d = p.deformation()?;
    let x = angular_coefficient(d, p.l);
    let (_, coarse) = solve_grid(p, x, p.grid.points);
    let (_, fine) = solve_grid(p, x, 2 * p.grid.points + 1);
    let mut energies = Vec::with_capacity(p.n_states);
    for (n, (&c, &f)) in coarse.iter().zip(&fine).enumerate() {
        let estimate = (4.0 * f - c) / 3.0;
        if !estimate.is_finite() || (estimate - f).abs() > CONVERGENCE_TOLERANCE {
            return Err(QError::NotConverged {
                n,
                coarse: c,
                fine: f,
                estimate,
            });
        }
        energies.push(estimate);
    }
    Ok(RadialSolution {
        problem: *p,
        effective_l: effective_l(d, p.l),
        coarse,
        fine,
        energies,
    })
}

/// `<r^2>` of radial state `n` from the fine-grid eigenvector.
pub fn radial_r2_expectation(p: &RadialProblem, n: usize) -> Result<f64> {
    if n >= p.n_states {
        return Err(QError::InvalidProblem(format!(
            "state {n} is beyond n_states = {}",
            p.n_states
        )));
    }
    let d = p.deformation()?;
    let x = angular_coefficient(d, p.l);
    let (disc, values) = solve_grid(p, x, 2 * p.grid.points + 1);
    let v = tridiagonal_eigenvector(&disc.diag, &disc.off, values[n]);
    let mut num = 0.0;
    let mut den = 0.0;
    for (((vi, to_chi), dr), r) in v.iter().zip(&disc.to_chi).zip(&disc.dr).zip(&disc.radii) {
        let chi = vi * to_chi;
        let w = chi * chi * dr;
        num += w * r * r;
        den += w;
    }
    Ok(num / den)
}

/// `<x0^2>` for an angle-independent state: `∫ x0^2 d[x0] / ∫ d[x0]` over
/// `(-1, 1)`, which is `1/[3]`.
pub fn mean_x0_squared(d: Deformation) -> f64 {
    let rule = QuadratureRule::for_deformation(d);
    let num = rule.symmetric(|x| (x * x).into()).re;
    let den = rule.symmetric(|_| 1.0.into()).re;
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMode {
    Closed,
    Numeric,
    Both,
}

impl FromStr for SpectrumMode {
    type Err = QError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(SpectrumMode::Closed),
            "numeric" => Ok(SpectrumMode::Numeric),
            "both" => Ok(SpectrumMode::Both),
            other => Err(QError::InvalidProblem(format!("unknown mode {other:?}"))),
        }
    }
}

/// One `(n, l)` level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub potential: Potential,
    pub q: f64,
    pub n: u32,
    pub l: u32,
    #[serde(rename = "L_eff")]
    pub l_eff: f64,
    #[serde(rename = "E_closed")]
    pub e_closed: Option<f64>,
    #[serde(rename = "E_numeric")]
    pub e_numeric: Option<f64>,
    pub abs_diff: Option<f64>,
}

/// Levels ordered by `l`, then `n`. The `2l+1` states of each level share
/// one energy and are not listed separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub schema_version: u32,
    pub potential: Potential,
    pub q: f64,
    pub mode: SpectrumMode,
    pub rows: Vec<SpectrumRow>,
}

/// Column order of the CSV form.
pub const SPECTRUM_CSV_HEADER: &str = "potential,q,n,l,L_eff,E_closed,E_numeric,abs_diff";

impl SpectrumTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)
                .map_err(|e| QError::Serialization(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| QError::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| QError::Serialization(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table is always serializable")
    }

    pub fn row(&self, n: u32, l: u32) -> Option<&SpectrumRow> {
        self.rows.iter().find(|r| r.n == n && r.l == l)
    }
}

/// The `(n_max + 1) (l_max + 1)` levels of `potential`.
pub fn spectrum_table(
    d: Deformation,
    potential: Potential,
    n_max: u32,
    l_max: u32,
    mode: SpectrumMode,
) -> Result<SpectrumTable> {
    let mut rows = Vec::new();
    for l in 0..=l_max {
        let numeric = match mode {
            SpectrumMode::Closed => None,
            _ => {
                let p = RadialProblem::with_default_grid(potential, d, l, n_max as usize + 1)?;
                Some(radial_eigensolve(&p)?.energies)
            }
        };
        for n in 0..=n_max {
            let e_closed =
                (mode != SpectrumMode::Numeric).then(|| closed_form_energy(potential, d, n, l));
            let e_numeric = numeric.as_ref().map(|e| e[n as usize]);
            let abs_diff = match (e_closed, e_numeric) {
                (Some(a), Some(b)) => Some((a - b).abs()),
                _ => None,
            };
            rows.push(SpectrumRow {
                potential,
                q: d.q(),
                n,
                l,
                l_eff: effective_l(d, l),
                e_closed,
                e_numeric,
                abs_diff,
            });
        }
    }
    Ok(SpectrumTable {
        schema_version: SCHEMA_VERSION,
        potential,
        q: d.q(),
        mode,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn d(q: f64) -> Deformation {
        Deformation::new(q).unwrap()
    }

    #[test]
    fn sturm_bisection_on_known_matrix() {
        // tridiag(-1, 2, -1) of size n has eigenvalues 2 - 2 cos(k pi / (n + 1))
        let n = 50;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        for k in 0..5 {
            let expect =
                2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert_relative_eq!(
                tridiagonal_eigenvalue(&diag, &off, k),
                expect,
                epsilon = 1e-13
            );
        }
        let v = tridiagonal_eigenvector(&diag, &off, tridiagonal_eigenvalue(&diag, &off, 0));
        let expect: Vec<f64> = (1..=n)
            .map(|i| (i as f64 * std::f64::consts::PI / (n as f64 + 1.0)).sin())
            .collect();
        let norm = expect.iter().map(|a| a * a).sum::<f64>().sqrt();
        let dot: f64 = v.iter().zip(&expect).map(|(a, b)| a * b / norm).sum();
        assert_relative_eq!(dot.abs(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn classical_values() {
        assert_eq!(effective_l(d(1.0), 3), 3.0);
        assert_eq!(angular_coefficient(d(1.0), 2), 6.0);
        assert_eq!(coulomb_energy(d(1.0), 0, 0), -0.5);
        assert_eq!(oscillator_energy(d(1.0), 0, 0), 1.5);
        assert_eq!(angular_coefficient(d(1.7), 0), 0.0);
        assert_eq!(effective_l(d(1.7), 0), 0.0);
    }

    #[test]
    fn bad_problems_are_rejected() {
        let g = Grid {
            r_max: 10.0,
            points: 100,
        };
        assert!(RadialProblem::new(Potential::Oscillator, d(1.0), 0, g, 1).is_err());
        let g = Grid {
            r_max: -1.0,
            points: 400,
        };
        assert!(RadialProblem::new(Potential::Oscillator, d(1.0), 0, g, 1).is_err());
        assert!("square-well".parse::<Potential>().is_err());
    }

    #[test]
    fn csv_header_is_exact() {
        let t = spectrum_table(d(1.1), Potential::Coulomb, 1, 1, SpectrumMode::Closed).unwrap();
        let csv = t.to_csv().unwrap();
        assert_eq!(csv.lines().next().unwrap(), SPECTRUM_CSV_HEADER);
        assert_eq!(csv.lines().count(), 5);
    }
}
