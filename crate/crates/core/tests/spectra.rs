use std::time::Instant;

use approx::assert_relative_eq;
use qdeform_core::schrod::{self, Grid, RadialProblem};
use qdeform_core::{Deformation, Potential, SpectrumMode};

fn d(q: f64) -> Deformation {
    Deformation::new(q).unwrap()
}

/// `L` from `L (L + 1) = X` by the textbook quadratic formula.
fn quadratic_root(x: f64) -> f64 {
    (-1.0 + (1.0 + 4.0 * x).sqrt()) / 2.0
}

#[test]
fn angular_coefficient_examples() {
    assert_eq!(
        schrod::angular_coefficient(Deformation::classical(), 2),
        6.0
    );
    assert!(schrod::angular_coefficient(d(1.7), 0).abs() < 1e-14);
    let q = d(1.1);
    let c1 = q.c_eig(1);
    let direct = q.qnum(2) * q.qnum(4) / q.qnum(2).powi(2) + c1 * c1 - c1;
    assert_relative_eq!(
        schrod::angular_coefficient(q, 1),
        direct,
        max_relative = 1e-13
    );
    assert_relative_eq!(direct, 2.0742, epsilon = 1e-4);
}

#[test]
fn effective_l_examples() {
    for l in 0..8 {
        assert_eq!(schrod::effective_l(Deformation::classical(), l), l as f64);
    }
    assert!(schrod::effective_l(d(1.3), 0).abs() < 1e-14);
    let q = d(1.1);
    let x = schrod::angular_coefficient(q, 1);
    assert_relative_eq!(
        schrod::effective_l(q, 1),
        quadratic_root(x),
        max_relative = 1e-12
    );
    assert_relative_eq!(schrod::effective_l(q, 1), 1.02454, epsilon = 1e-5);
}

#[test]
fn closed_form_energies() {
    let one = Deformation::classical();
    assert_eq!(schrod::coulomb_energy(one, 0, 0), -0.5);
    assert_eq!(schrod::oscillator_energy(one, 0, 0), 1.5);
    let q = d(1.1);
    let big_l = quadratic_root(schrod::angular_coefficient(q, 1));
    assert_relative_eq!(
        schrod::coulomb_energy(q, 0, 1),
        -1.0 / (2.0 * (big_l + 1.0).powi(2)),
        max_relative = 1e-12
    );
    assert_relative_eq!(schrod::coulomb_energy(q, 0, 1), -0.12199, epsilon = 1e-5);
}

#[test]
fn numeric_examples() {
    let one = Deformation::classical();
    let p = RadialProblem::with_default_grid(Potential::Coulomb, one, 0, 1).unwrap();
    assert_relative_eq!(
        schrod::radial_eigensolve(&p).unwrap().energies[0],
        -0.5,
        epsilon = 1e-3
    );

    let q = d(1.1);
    let p = RadialProblem::with_default_grid(Potential::Oscillator, q, 1, 1).unwrap();
    let e = schrod::radial_eigensolve(&p).unwrap().energies[0];
    assert_relative_eq!(
        e,
        quadratic_root(schrod::angular_coefficient(q, 1)) + 1.5,
        epsilon = 1e-3
    );

    let p = RadialProblem::with_default_grid(Potential::Coulomb, q, 1, 1).unwrap();
    let e = schrod::radial_eigensolve(&p).unwrap().energies[0];
    assert_relative_eq!(e, schrod::coulomb_energy(q, 0, 1), epsilon = 1e-3);
}

#[test]
fn lowest_three_states_match_closed_forms() {
    for q in [0.9, 1.1] {
        for pot in [Potential::Coulomb, Potential::Oscillator] {
            for l in 0..=2 {
                let start = Instant::now();
                let p = RadialProblem::with_default_grid(pot, d(q), l, 3).unwrap();
                let sol = schrod::radial_eigensolve(&p).unwrap();
                assert!(start.elapsed().as_secs_f64() < 5.0);
                for (n, e) in sol.energies.iter().enumerate() {
                    let closed = schrod::closed_form_energy(pot, d(q), n as u32, l);
                    assert!(
                        (e - closed).abs() < 1e-3,
                        "{pot} q={q} l={l} n={n}: {e} vs {closed}"
                    );
                }
            }
        }
    }
}

#[test]
fn second_moment_of_ground_states() {
    // <r^2> of r^{L+1} e^{-r^2/2} is L + 3/2, and of r^{L+1} e^{-r/(L+1)} is
    // (2L+4)(2L+3)(L+1)^2/4
    let q = d(1.1);
    for l in 0..=2 {
        let big_l = schrod::effective_l(q, l);
        let p = RadialProblem::with_default_grid(Potential::Oscillator, q, l, 1).unwrap();
        let r2 = schrod::radial_r2_expectation(&p, 0).unwrap();
        assert_relative_eq!(r2, big_l + 1.5, max_relative = 1e-4);
        let p = RadialProblem::with_default_grid(Potential::Coulomb, q, l, 1).unwrap();
        let r2 = schrod::radial_r2_expectation(&p, 0).unwrap();
        let want = (2.0 * big_l + 4.0) * (2.0 * big_l + 3.0) * (big_l + 1.0).powi(2) / 4.0;
        assert_relative_eq!(r2, want, max_relative = 1e-4);
    }
}

#[test]
fn mean_x0_squared_is_inverse_bracket_three() {
    assert_relative_eq!(
        schrod::mean_x0_squared(Deformation::classical()),
        1.0 / 3.0,
        epsilon = 1e-14
    );
    let q = d(0.9);
    assert_relative_eq!(schrod::mean_x0_squared(q), 1.0 / q.qnum(3), epsilon = 1e-12);
    assert_relative_eq!(schrod::mean_x0_squared(q), 0.328453, epsilon = 1e-6);
}

#[test]
fn shell_degeneracy_and_its_lifting() {
    let one = Deformation::classical();
    let t = schrod::spectrum_table(one, Potential::Coulomb, 2, 2, SpectrumMode::Both).unwrap();
    for row in &t.rows {
        let shell = (row.n + row.l + 1) as f64;
        assert_relative_eq!(
            row.e_closed.unwrap(),
            -1.0 / (2.0 * shell * shell),
            epsilon = 1e-15
        );
        assert!(row.abs_diff.unwrap() < 1e-3);
    }
    assert_eq!(t.row(1, 0).unwrap().e_closed, t.row(0, 1).unwrap().e_closed);

    let t = schrod::spectrum_table(d(1.1), Potential::Coulomb, 1, 1, SpectrumMode::Closed).unwrap();
    let (a, b) = (
        t.row(1, 0).unwrap().e_closed.unwrap(),
        t.row(0, 1).unwrap().e_closed.unwrap(),
    );
    assert!((a - b).abs() > 1e-4, "{a} {b}");
    // the effective angular momentum exceeds l, so the l = 1 level is pushed up
    assert!(b > a);
}

#[test]
fn oscillator_table_shape() {
    let t =
        schrod::spectrum_table(d(1.1), Potential::Oscillator, 2, 2, SpectrumMode::Both).unwrap();
    assert_eq!(t.rows.len(), 9);
    for l in 0..=2 {
        let es: Vec<f64> = (0..=2)
            .map(|n| t.row(n, l).unwrap().e_closed.unwrap())
            .collect();
        assert!(es.windows(2).all(|w| w[1] > w[0]));
    }
    let csv = t.to_csv().unwrap();
    assert_eq!(csv.lines().next().unwrap(), schrod::SPECTRUM_CSV_HEADER);
    assert_eq!(csv.lines().count(), 10);
}

#[test]
fn too_coarse_grid_is_rejected_or_flagged() {
    let q = d(1.1);
    assert!(RadialProblem::new(
        Potential::Coulomb,
        q,
        0,
        Grid {
            r_max: 40.0,
            points: 10
        },
        1
    )
    .is_err());
    // a box far too small cannot hold the state
    let p = RadialProblem::new(
        Potential::Coulomb,
        q,
        0,
        Grid {
            r_max: 40.0,
            points: 200,
        },
        6,
    )
    .unwrap();
    assert!(schrod::radial_eigensolve(&p).is_err());
}
