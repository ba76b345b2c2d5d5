//! The full relation suite behind `qdeform verify`.
//!
//! Every identity is measured as a residual and compared with the requested
//! tolerance. Relations that are widely quoted but do not hold as written are
//! still measured, and are labelled informational so they never fail a run.

use num_complex::Complex64;

use crate::error::Result;
use crate::func::{self, AngularFunction, AngularOperator};
use crate::harm;
use crate::integrate::{self, QuadratureRule};
use crate::kernel::Deformation;
use crate::rep::{self, AlgebraMatrices, OperatorMatrix, Scope};
use crate::report::{Comparison, RelationCheck, VerificationReport};
use crate::schrod;

/// Highest `l` used by the function-level checks. Nested q-differences lose
/// digits quickly beyond this point.
pub const FUNCTION_LMAX: u32 = 3;

/// Highest monomial power used by the Jackson exactness check.
pub const MONOMIAL_NMAX: u32 = 12;

struct Suite {
    d: Deformation,
    lmax: u32,
    tol: f64,
    report: VerificationReport,
}

impl Suite {
    fn identity(&mut self, relation: &str, residual: f64) {
        let c = RelationCheck::identity(relation, self.d.q(), self.lmax, residual, self.tol);
        self.report.push(c);
    }

    fn informational(&mut self, relation: &str, residual: f64, note: &str) {
        let c = RelationCheck::informational(relation, self.d.q(), self.lmax, residual, self.tol)
            .with_note(note);
        self.report.push(c);
    }

    fn compare(&mut self, relation: &str, label: String, computed: f64, reference: f64) {
        self.report.compare(Comparison::new(
            relation,
            self.d.q(),
            label,
            computed,
            reference,
        ));
    }
}

/// Runs every check at deformation `d`. Matrix identities use the blocks
/// `l <= lmax`; function-level identities use `l <= min(lmax, 3)`.
pub fn run_verification(d: Deformation, lmax: u32, tolerance: f64) -> Result<VerificationReport> {
    let mut s = Suite {
        d,
        lmax,
        tol: tolerance,
        report: VerificationReport::new(d.q(), lmax, tolerance),
    };
    kernel_checks(&mut s);
    let alg = AlgebraMatrices::build(d, lmax);
    matrix_checks(&mut s, &alg)?;
    realization_checks(&mut s)?;
    harmonic_checks(&mut s)?;
    integration_checks(&mut s)?;
    hamiltonian_checks(&mut s, &alg);
    Ok(s.report)
}

fn kernel_checks(s: &mut Suite) {
    let d = s.d;
    let inv = d.inverse();
    let n_top = 2 * s.lmax as i64 + 3;
    let mut sym: f64 = 0.0;
    let mut base: f64 = 0.0;
    for n in 0..=n_top {
        sym = sym.max((d.qnum(n) - inv.qnum(n)).abs());
        // [2n]_q = [2]_q [n]_{q^2} and [2n+1]_q = [2]_q [n + 1/2]_{q^2}
        let two = d.qnum(2);
        let nf = n as f64;
        let even = d.qnum(2 * n) - two * d.qnum_base(nf, 2).unwrap_or(f64::NAN);
        let odd = d.qnum(2 * n + 1) - two * d.qnum_base(nf + 0.5, 2).unwrap_or(f64::NAN);
        base = base.max(even.abs().max(odd.abs()) / (1.0 + d.qnum(2 * n + 1).abs()));
    }
    s.identity("bracket_inversion_symmetry", sym);
    s.identity("bracket_base_square_rewrite", base);
}

fn bracket_2l0(g: &rep::Generators) -> OperatorMatrix {
    let d = g.deformation;
    OperatorMatrix::from_diagonal(g.lmax(), |b| d.qnum(2 * b.m as i64))
}

fn matrix_checks(s: &mut Suite, alg: &AlgebraMatrices) -> Result<()> {
    let d = s.d;
    let g = &alg.generators;
    let q = d.q();

    let raise = (&g.l0.commutator(&g.plus) - &g.plus).max_abs();
    let lower = (&g.l0.commutator(&g.minus) + &g.minus).max_abs();
    s.identity("weight_shift", raise.max(lower));
    s.identity(
        "raising_lowering_commutator",
        (&g.plus.commutator(&g.minus) - &bracket_2l0(g)).max_abs(),
    );
    s.identity(
        "generator_adjoint",
        (&g.plus.adjoint() - &g.minus).max_abs(),
    );

    let cas = g.casimir();
    let central =
        g.l0.commutator(&cas)
            .max_abs()
            .max(g.plus.commutator(&cas).max_abs());
    s.identity("casimir_central", central);
    s.identity(
        "casimir_eigenvalue",
        cas.deviation_from_diagonal(Scope::Full, |b| d.casimir_eig(b.l)),
    );
    let flipped = g.casimir_minus_form();
    let flipped_spread = (0..=s.lmax)
        .map(|l| {
            let vals: Vec<f64> = (-(l as i32)..=l as i32)
                .map(|m| {
                    flipped
                        .get(rep::BasisLabel { l, m }, rep::BasisLabel { l, m })
                        .re
                })
                .collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        })
        .fold(0.0, f64::max);
    s.informational(
        "casimir_with_minus_sign_constant_on_multiplets",
        flipped_spread,
        "L_- L_+ - [L_0][L_0+1] varies with m; the plus sign is the central element",
    );

    let lam = &alg.lambda;
    s.identity(
        "lambda_vector_operator",
        rep::check_vector(d, lam, g, Scope::Full)?.max_residual(),
    );
    let lam2 = rep::scalar_product(d, lam, lam)?;
    s.identity(
        "lambda_square_eigenvalue",
        lam2.deviation_from_diagonal(Scope::Full, |b| d.cprime_eig(b.l)),
    );
    let c = &alg.c;
    let c_central =
        g.l0.commutator(c)
            .max_abs()
            .max(g.plus.commutator(c).max_abs());
    s.identity("invariant_c_central", c_central);
    s.identity(
        "invariant_c_eigenvalue",
        c.deviation_from_diagonal(Scope::Full, |b| d.c_eig(b.l)),
    );

    if s.lmax == 0 {
        return Ok(());
    }
    let x = &alg.x;
    let p = &alg.partial;
    s.identity(
        "position_vector_operator",
        rep::check_vector(d, x, g, Scope::Interior)?.max_residual(),
    );
    s.identity(
        "partial_vector_operator",
        rep::check_vector(d, p, g, Scope::Interior)?.max_residual(),
    );

    let mut x_adj: f64 = 0.0;
    let mut p_adj: f64 = 0.0;
    for k in -1..=1i32 {
        let phase = (-1.0 / q).powi(k);
        let xk = x.component(k).unwrap();
        let pk = p.component(k).unwrap();
        x_adj = x_adj.max(
            (&xk.adjoint() - &x.component(-k).unwrap().scale(phase)).max_abs_on(Scope::Interior),
        );
        p_adj = p_adj.max(
            (&pk.adjoint() + &p.component(-k).unwrap().scale(phase)).max_abs_on(Scope::Interior),
        );
    }
    s.identity("position_adjoint", x_adj);
    s.identity("partial_adjoint", p_adj);

    let x2 = rep::scalar_product(d, x, x)?;
    s.identity(
        "position_square_is_one",
        x2.deviation_from_diagonal(Scope::Interior, |_| 1.0),
    );
    let xp = rep::scalar_product(d, x, p)?;
    let px = rep::scalar_product(d, p, x)?;
    s.identity(
        "position_dot_partial",
        (&xp - c).max_abs_on(Scope::Interior),
    );
    s.identity(
        "partial_dot_position",
        (&px + c).max_abs_on(Scope::Interior),
    );

    let [pm, p0, pp] = [&p.minus, &p.zero, &p.plus];
    let r1 = (&(p0 * pp) - &(pp * p0).scale(q.powi(-2))).max_abs_on(Scope::Interior);
    let r2 = (&(p0 * pm) - &(pm * p0).scale(q * q)).max_abs_on(Scope::Interior);
    let lam_sq = d.lambda() * d.lambda();
    let r3 = (&(&(pp * pm) - &(pm * pp)) - &(p0 * p0).scale(lam_sq)).max_abs_on(Scope::Interior);
    let note = "the printed component relations of the partials do not hold on the representation";
    s.informational("partial_component_exchange_plus", r1, note);
    s.informational("partial_component_exchange_minus", r2, note);
    s.informational("partial_component_commutator", r3, note);

    let ratios = rep::partial_ratio_from(alg);
    if let Some(r) = ratios.commutator_identity_residual {
        s.identity("partial_as_commutator_with_c", r);
    }
    for row in &ratios.ratios {
        let label = format!("l={}->{}", row.from_l, row.to_l);
        s.compare(
            "partial_ratio_closed_form",
            label.clone(),
            row.computed,
            row.closed_form,
        );
        if let Some(quoted) = row.quoted {
            s.compare("partial_ratio_printed", label, row.computed, quoted);
        }
    }
    for row in &ratios.squares {
        let label = format!("l={}", row.l);
        s.compare(
            "partial_square_closed_form",
            label.clone(),
            row.computed,
            row.closed_form,
        );
        s.compare("partial_square_printed", label, row.computed, row.quoted);
    }
    Ok(())
}

fn harmonics_upto(d: Deformation, lmax: u32) -> Result<Vec<(u32, i32, AngularFunction)>> {
    let mut out = Vec::new();
    for l in 0..=lmax {
        for m in -(l as i32)..=l as i32 {
            out.push((l, m, harm::harmonic_function(d, l, m)?));
        }
    }
    Ok(out)
}

fn realization_checks(s: &mut Suite) -> Result<()> {
    let d = s.d;
    let lf = s.lmax.min(FUNCTION_LMAX);

    let profiles: Vec<AngularFunction> = (-1..=1).flat_map(func::test_profiles).collect();
    let points = func::sample_points(d, 3);
    let rel = func::check_position_relations(d, &profiles, &points)?;
    s.identity("position_dilation_exchange", rel.dilation_relation);
    s.identity("position_component_commutator", rel.exchange_relation);
    let xs = func::realize_x_all(d);
    s.identity(
        "realized_position_vector_operator",
        func::check_vector_pointwise(d, &xs, &profiles, &points)?.max_residual(),
    );

    let g = func::realize_generators(d);
    let two_l0 =
        AngularOperator::winding_read(d, move |m| AngularOperator::scalar(d, d.qnum(2 * m as i64)));
    let mut comm: f64 = 0.0;
    let mut lowering_raising: f64 = 0.0;
    let mut casimir: f64 = 0.0;
    let mut matrix_elem: f64 = 0.0;
    for (l, m, y) in harmonics_upto(d, lf)? {
        let pts = func::sample_points(d, l + 3);
        let (li, mi) = (l as i64, m as i64);
        let lhs = g
            .plus
            .apply(&g.minus.apply(&y))
            .sub(&g.minus.apply(&g.plus.apply(&y)))?;
        comm = comm.max(lhs.max_abs_diff(&two_l0.apply(&y), &pts)?);
        let lr = g.minus.apply(&g.plus.apply(&y));
        let eig = d.qnum(li - mi) * d.qnum(li + mi + 1);
        lowering_raising = lowering_raising.max(lr.max_abs_diff(&y.scale(eig), &pts)?);
        casimir = casimir.max(
            g.casimir(&y)?
                .max_abs_diff(&y.scale(d.casimir_eig(l)), &pts)?,
        );
        let raised = g.plus.apply(&y);
        let res = if m < l as i32 {
            raised.max_abs_diff(
                &harm::harmonic_function(d, l, m + 1)?.scale(eig.sqrt()),
                &pts,
            )?
        } else {
            raised.max_abs(&pts)?
        };
        matrix_elem = matrix_elem.max(res);
    }
    s.identity("realized_raising_lowering_commutator", comm);
    s.identity("realized_lowering_raising_eigenvalue", lowering_raising);
    s.identity("realized_casimir_eigenvalue", casimir);
    s.identity("realized_raising_matrix_element", matrix_elem);
    Ok(())
}

fn harmonic_checks(s: &mut Suite) -> Result<()> {
    let d = s.d;
    let lf = s.lmax.min(FUNCTION_LMAX);
    let grid: Vec<f64> = (-9..=9).map(|i| i as f64 / 10.0).collect();

    let mut series: f64 = 0.0;
    let mut closed: f64 = 0.0;
    for l in 0..=s.lmax {
        for m in 0..=l as i32 {
            let spec = harm::phi_coeffs(d, l, m)?;
            let printed = harm::printed_series_coeffs(d, l, m)?;
            for (a, b) in spec.coeffs.iter().zip(&printed) {
                series = series.max((a - b).abs() / (1.0 + b.abs()));
            }
            if spec.coeffs.len() != printed.len() {
                series = f64::INFINITY;
            }
            let theta = spec.theta();
            for &x in &grid {
                let v = theta.eval(x)?.re;
                closed = closed.max((v - harm::theta_closed_form(d, l, m, x)?).abs());
            }
        }
    }
    s.identity("harmonic_series_coefficients", series);
    s.identity("harmonic_hypergeometric_form", closed);

    let mut ladder: f64 = 0.0;
    let mut product: f64 = 0.0;
    let mut exchange: f64 = 0.0;
    for l in 0..=lf {
        for m in 0..=l as i32 {
            let r = harm::ladder_check(d, l, m)?;
            ladder = ladder.max(r.residual);
            if m < l as i32 {
                s.compare(
                    "raising_ladder_factor_printed",
                    format!("l={l} m={m}"),
                    r.measured_factor,
                    r.printed_factor,
                );
            }
            for k in -1..=1 {
                if k == -1 && m == 0 {
                    continue;
                }
                exchange = exchange.max(harm::commute_x_y(d, k, l, m)?);
            }
        }
        for m in -(l as i32)..=l as i32 {
            for k in -1..=1 {
                let p = harm::x_times_y(d, k, l, m)?;
                product = product.max(p.residual);
                if m >= 0 {
                    for (which, computed, quoted) in
                        [("up", p.up, p.quoted_up), ("down", p.down, p.quoted_down)]
                    {
                        if (computed - quoted).abs() > 1e-12 {
                            s.compare(
                                "position_coefficient_printed",
                                format!("k={k} l={l} m={m} {which}"),
                                computed,
                                quoted,
                            );
                        }
                    }
                }
            }
        }
    }
    s.identity("raising_ladder_on_theta", ladder);
    s.identity("position_times_harmonic_expansion", product);
    s.identity("position_harmonic_exchange", exchange);
    Ok(())
}

fn integration_checks(s: &mut Suite) -> Result<()> {
    let d = s.d;
    let lf = s.lmax.min(FUNCTION_LMAX);
    let rule = QuadratureRule::for_deformation(d);

    let mut mono: f64 = 0.0;
    for n in 0..=MONOMIAL_NMAX {
        let v = rule.positive(|x| x.powi(n as i32).into()).re;
        mono = mono.max((v - 1.0 / d.qnum(n as i64 + 1)).abs());
    }
    s.identity("jackson_monomial_exactness", mono);
    for n in 1..=8u32 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let computed = rule.positive(|x| (-x).powi(n as i32).into()).re;
        s.compare(
            "negative_interval_monomial_printed",
            format!("n={n}"),
            computed,
            sign / d.qnum(n as i64),
        );
    }

    let gram = integrate::gram_matrix(d, s.lmax, s.tol)?;
    let note = match gram.printed_max_diag_dev {
        Some(dev) => format!("closed-form norms refit; their diagonal deviation was {dev:.3e}"),
        None => "closed-form normalization".to_string(),
    };
    let c = RelationCheck::identity(
        "harmonic_orthonormality",
        d.q(),
        s.lmax,
        gram.max_deviation(),
        s.tol,
    )
    .with_note(note);
    s.report.push(c);

    let ys = harmonics_upto(d, lf)?;
    let [xm, x0, xp] = func::realize_x_all(d);
    let mut herm: f64 = 0.0;
    let mut pairing: f64 = 0.0;
    for (la, ma, a) in &ys {
        for (lb, mb, b) in &ys {
            if ma == mb {
                let lhs = integrate::inner_product(&rule, a, &x0.apply(b))?;
                let rhs = integrate::inner_product(&rule, &x0.apply(a), b)?;
                herm = herm.max((lhs - rhs).norm());
            }
            if *ma == mb + 1 {
                let lhs = integrate::inner_product(&rule, a, &xp.apply(b))?;
                let rhs = integrate::inner_product(&rule, &xm.apply(a).scale(-1.0 / d.q()), b)?;
                herm = herm.max((lhs - rhs).norm());
            }
            let expected = if la == lb && ma == mb { 1.0 } else { 0.0 };
            let v = integrate::unconjugated_pairing(&rule, a, b)?;
            pairing = pairing.max((v - Complex64::new(expected, 0.0)).norm());
        }
    }
    s.identity("position_adjoint_under_integral", herm);
    s.informational(
        "orthonormality_without_conjugation",
        pairing,
        "the unconjugated pairing is supported on m' = -m, not m' = m",
    );

    let mut dil: f64 = 0.0;
    for a in 0..=3u32 {
        for b in 0..=3u32 {
            let fa = AngularFunction::monomial(0, a);
            let fb = AngularFunction::monomial(0, b);
            let lhs = integrate::inner_product(&rule, &fa, &func::apply_n0(&fb))?;
            let rhs =
                integrate::inner_product(&rule, &func::apply_n0(&fa).add(&fa)?.scale(-1.0), &fb)?;
            dil = dil.max((lhs - rhs).norm());
        }
    }
    s.informational(
        "dilatation_adjoint_under_integral",
        dil,
        "the interval has boundary terms, so N0 is not skew-adjoint up to -1 on polynomials",
    );
    Ok(())
}

fn hamiltonian_checks(s: &mut Suite, alg: &AlgebraMatrices) {
    let d = s.d;
    if s.lmax > 0 {
        let k = alg.angular_kinetic();
        s.identity(
            "angular_kinetic_diagonal",
            k.deviation_from_diagonal(Scope::Interior, |b| schrod::angular_coefficient(d, b.l)),
        );
        let g = &alg.generators;
        let comm = g.l0.commutator(&k).max_abs_on(Scope::Interior);
        let cas = g.casimir().commutator(&k).max_abs_on(Scope::Interior);
        s.identity("angular_kinetic_commutes_with_generators", comm.max(cas));
    }
    let mut eff: f64 = 0.0;
    for l in 0..=s.lmax {
        let big_l = schrod::effective_l(d, l);
        let x = schrod::angular_coefficient(d, l);
        eff = eff.max((big_l * (big_l + 1.0) - x).abs() / (1.0 + x));
        if d.is_classical() {
            eff = eff.max((big_l - l as f64).abs());
        }
    }
    s.identity("effective_angular_momentum", eff);
    s.identity(
        "mean_x0_squared",
        (schrod::mean_x0_squared(d) - 1.0 / d.qnum(3)).abs(),
    );
}
