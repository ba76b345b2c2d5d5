//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use qdeform_core::integrate::{self, QuadratureRule};
use qdeform_core::rep::{self, Scope};
use qdeform_core::schrod::{self, RadialProblem};
use qdeform_core::{
    harm, run_verification, AlgebraMatrices, Deformation, OperatorMatrix, Potential, SpectrumMode,
    VerificationReport,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn d(q: f64) -> Deformation {
    Deformation::new(q).expect("valid q")
}

fn worst(report: &VerificationReport, relations: &[&str]) -> (f64, Vec<String>) {
    let mut w: f64 = 0.0;
    let mut missing = Vec::new();
    for r in relations {
        match report.find(r) {
            Some(c) => w = w.max(c.max_residual),
            None => missing.push(r.to_string()),
        }
    }
    (w, missing)
}

fn algebra() -> Verdict {
    let start = Instant::now();
    let mut w: f64 = 0.0;
    for q in [0.8, 1.0, 1.1, 1.3] {
        let dq = d(q);
        let alg = AlgebraMatrices::build(dq, 4);
        let g = &alg.generators;
        let two_l0 = OperatorMatrix::from_diagonal(4, |b| dq.qnum(2 * b.m as i64));
        let cas = g.casimir();
        let lam2 = rep::scalar_product(dq, &alg.lambda, &alg.lambda).expect("same size");
        let residuals = [
            (&g.l0.commutator(&g.plus) - &g.plus).max_abs(),
            (&g.l0.commutator(&g.minus) + &g.minus).max_abs(),
            (&g.plus.commutator(&g.minus) - &two_l0).max_abs(),
            g.plus.commutator(&cas).max_abs(),
            cas.deviation_from_diagonal(Scope::Full, |b| dq.casimir_eig(b.l)),
            rep::check_vector(dq, &alg.lambda, g, Scope::Full)
                .expect("vector")
                .max_residual(),
            rep::check_vector(dq, &alg.x, g, Scope::Interior)
                .expect("vector")
                .max_residual(),
            lam2.deviation_from_diagonal(Scope::Full, |b| dq.cprime_eig(b.l)),
            g.plus.commutator(&alg.c).max_abs(),
            alg.c
                .deviation_from_diagonal(Scope::Full, |b| dq.c_eig(b.l)),
        ];
        w = residuals
            .iter()
            .fold(w, |a, &b| if b.is_nan() { f64::NAN } else { a.max(b) });
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        w < 1e-10 && secs < 10.0,
        format!(
            "max matrix residual {w:.2e} over q in {{0.8, 1, 1.1, 1.3}}, lmax 4, in {secs:.2} s"
        ),
    )
}

fn realization() -> Verdict {
    let relations = [
        "position_dilation_exchange",
        "position_component_commutator",
        "realized_lowering_raising_eigenvalue",
        "realized_raising_lowering_commutator",
        "realized_casimir_eigenvalue",
    ];
    let mut w: f64 = 0.0;
    for q in [0.8, 0.9, 1.0, 1.1, 1.2, 1.3] {
        let r = run_verification(d(q), 3, 1e-9).expect("suite runs");
        let (res, missing) = worst(&r, &relations);
        if !missing.is_empty() {
            return verdict(false, format!("relations not reported: {missing:?}"));
        }
        w = w.max(res);
    }
    verdict(
        w < 1e-9,
        format!("max pointwise residual {w:.2e} on Y_lm, l <= 3, q from 0.8 to 1.3"),
    )
}

fn jackson() -> Verdict {
    let mut w: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for q_eff in [0.5, 0.9] {
        let dq = d(q_eff);
        let rule = QuadratureRule::for_deformation(dq);
        tail = tail.max(rule.tail_bound);
        for n in 0..=12 {
            let v = rule.positive(|x| x.powi(n).into()).re;
            w = w.max((v - 1.0 / dq.qnum(n as i64 + 1)).abs());
        }
    }
    verdict(
        w < 1e-12 && tail < 1e-16,
        format!("max error {w:.2e} for n <= 12, q_eff in {{0.5, 0.9}}, truncation q_eff^(2K) <= {tail:.2e}"),
    )
}

fn orthonormality() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for q in [0.9, 1.0] {
        let g = integrate::gram_matrix(d(q), 4, 1e-8).expect("gram");
        ok &= g.max_deviation() < 1e-8;
        let how = match g.printed_max_diag_dev {
            None => "closed-form norms".to_string(),
            Some(dev) => format!("refit, closed-form deviation {dev:.2e}"),
        };
        parts.push(format!("q={q}: {:.2e} ({how})", g.max_deviation()));
    }
    verdict(
        ok,
        format!(
            "Gram deviation from identity, l <= 4, 0 <= m <= l: {}",
            parts.join("; ")
        ),
    )
}

fn products() -> Verdict {
    let mut prod: f64 = 0.0;
    let mut exch: f64 = 0.0;
    for q in [0.9, 1.0, 1.1, 1.2] {
        let dq = d(q);
        for l in 0..=3u32 {
            for m in -(l as i32)..=l as i32 {
                for k in -1..=1 {
                    prod = prod.max(harm::x_times_y(dq, k, l, m).expect("product").residual);
                    if m >= 0 && !(k == -1 && m == 0) {
                        exch = exch.max(harm::commute_x_y(dq, k, l, m).expect("exchange"));
                    }
                }
            }
        }
    }
    verdict(
        prod < 1e-9 && exch < 1e-9,
        format!(
            "x_k Y_lm expansion residual {prod:.2e}, x_k/Y_lm exchange residual {exch:.2e}, l <= 3"
        ),
    )
}

/// Textbook associated Legendre function with the Condon-Shortley phase.
fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    let s = (1.0 - x * x).sqrt();
    let mut pmm = 1.0;
    for i in 0..m {
        pmm *= -((2 * i + 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let (mut prev, mut cur) = (pmm, x * (2 * m + 1) as f64 * pmm);
    for ll in m + 2..=l {
        let next = ((2 * ll - 1) as f64 * x * cur - (ll + m - 1) as f64 * prev) / (ll - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

fn classical_y(l: u32, m: i32, x: f64) -> f64 {
    let am = m.unsigned_abs();
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let v = ((2 * l + 1) as f64 / (4.0 * PI) * fact(l - am) / fact(l + am)).sqrt()
        * assoc_legendre(l, am, x);
    if m < 0 && am % 2 == 1 {
        -v
    } else {
        v
    }
}

fn classical_limit() -> Verdict {
    let one = Deformation::classical();
    let mut harm_err: f64 = 0.0;
    for l in 0..=4u32 {
        for m in -(l as i32)..=l as i32 {
            let y = harm::harmonic_function(one, l, m).expect("harmonic");
            let sign = (y.eval(0.37).expect("inside").re / classical_y(l, m, 0.37)).signum();
            for i in -19..=19 {
                let x = i as f64 / 20.0;
                let v = y.eval(x).expect("inside");
                harm_err = harm_err.max((v - sign * classical_y(l, m, x)).norm());
            }
        }
    }
    let eff_exact = (0..=10).all(|l| schrod::effective_l(one, l) == l as f64);
    let table =
        schrod::spectrum_table(one, Potential::Coulomb, 3, 3, SpectrumMode::Both).expect("table");
    let mut shell_err: f64 = 0.0;
    let mut numeric_err: f64 = 0.0;
    for r in &table.rows {
        let big_n = (r.n + r.l + 1) as f64;
        shell_err = shell_err.max((r.e_closed.unwrap() + 0.5 / (big_n * big_n)).abs());
        numeric_err = numeric_err.max(r.abs_diff.unwrap());
    }
    let degenerate = table.rows.iter().all(|a| {
        table
            .rows
            .iter()
            .filter(|b| b.n + b.l == a.n + a.l)
            .all(|b| b.e_closed == a.e_closed)
    });
    verdict(
        harm_err < 1e-10 && eff_exact && shell_err == 0.0 && degenerate && numeric_err < 1e-3,
        format!(
            "harmonics vs textbook {harm_err:.2e} (l <= 4), effective L exact: {eff_exact}, \
             Coulomb -1/(2N^2) error {shell_err:.1e} with shells degenerate: {degenerate}, numeric {numeric_err:.1e}"
        ),
    )
}

fn spectra() -> Verdict {
    let mut w: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    for q in [0.9, 1.1] {
        for pot in [Potential::Coulomb, Potential::Oscillator] {
            for l in 0..=2 {
                let start = Instant::now();
                let p = RadialProblem::with_default_grid(pot, d(q), l, 3).expect("problem");
                let sol = match schrod::radial_eigensolve(&p) {
                    Ok(s) => s,
                    Err(e) => return verdict(false, format!("{pot} q={q} l={l}: {e}")),
                };
                slowest = slowest.max(start.elapsed().as_secs_f64());
                for (n, e) in sol.energies.iter().enumerate() {
                    w = w.max((e - schrod::closed_form_energy(pot, d(q), n as u32, l)).abs());
                }
            }
        }
    }
    verdict(
        w < 1e-3 && slowest < 5.0,
        format!("max |numeric - closed| {w:.2e} over 3 states, l <= 2, q in {{0.9, 1.1}}; slowest solve {slowest:.3} s"),
    )
}

fn moments_and_splitting() -> Verdict {
    let mut w: f64 = 0.0;
    for q in [0.8, 0.9, 1.0, 1.1, 1.3] {
        let dq = d(q);
        w = w.max((schrod::mean_x0_squared(dq) - 1.0 / dq.qnum(3)).abs());
    }
    let q = d(1.1);
    let a = schrod::coulomb_energy(q, 1, 0);
    let b = schrod::coulomb_energy(q, 0, 1);
    verdict(
        w < 1e-12 && (a - b).abs() > 1e-6,
        format!(
            "<x0^2> vs 1/[3] error {w:.2e}; Coulomb at q=1.1: E(1,0) = {a:.8}, E(0,1) = {b:.8}"
        ),
    )
}

fn informational_report() -> Verdict {
    let out = Command::new(env!("CARGO_BIN_EXE_qdeform"))
        .args(["verify", "--q", "1.1", "--lmax", "4", "--format", "pretty"])
        .output()
        .expect("binary runs");
    let text = String::from_utf8_lossy(&out.stdout);
    let families = [
        "partial_ratio_printed",
        "partial_square_printed",
        "raising_ladder_factor_printed",
        "negative_interval_monomial_printed",
        "position_coefficient_printed",
    ];
    let missing: Vec<_> = families.iter().filter(|f| !text.contains(*f)).collect();
    let labelled = text.contains("informational");
    let exit_ok = out.status.code() == Some(0);
    verdict(
        missing.is_empty() && labelled && exit_ok,
        format!(
            "computed-vs-printed families present: {}/{}, output labelled informational: {labelled}, verify exit 0: {exit_ok}",
            families.len() - missing.len(),
            families.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("algebra identities", algebra),
        ("function realization", realization),
        ("Jackson exactness", jackson),
        ("orthonormality", orthonormality),
        ("product and exchange relations", products),
        ("classical limit", classical_limit),
        ("spectra cross-check", spectra),
        ("angular moment and level splitting", moments_and_splitting),
        ("informational comparisons", informational_report),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "{} criterion {} ({name}): {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
